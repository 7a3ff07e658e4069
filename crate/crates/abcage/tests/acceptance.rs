//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line with the measured numbers.
//!
//! Run with `cargo test -p abcage --test acceptance -- --nocapture` to see
//! every line; tolerances are pinned in the assertions.

use abcage::bessel::{bessel_j, first_positive_zero};
use abcage::drive::DriveParams;
use abcage::dynamics::{self, Frame, LatticeField, StepControl, Window};
use abcage::floquet::{self, MonodromyControl, SweepSpec};
use abcage::lattice::{self, Boundary, FluxedRhombicParams, SiteKind};
use std::f64::consts::PI;

fn report(number: u32, name: &str, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("criterion {number:2} [{tag}] {name}: {detail}");
    assert!(pass, "criterion {number} ({name}) failed: {detail}");
}

fn drive_m(omega: f64, gamma: f64, phi: f64, order: u32) -> DriveParams {
    DriveParams::resonant(0.0, omega, gamma * omega, phi, order).unwrap()
}

fn a0_state(half: i64) -> LatticeField {
    let window = Window::new(-half, half).unwrap();
    LatticeField::single_site(window, Boundary::Open, SiteKind::A, 0).unwrap()
}

/// Criterion 1: at pi flux every band is flat at {-2k, 0, +2k} to 1e-12.
#[test]
fn criterion_01_static_flat_bands() {
    let params = FluxedRhombicParams::new(1.0, PI, 8, Boundary::Periodic).unwrap();
    let bands = lattice::bloch_bands(&params, 256).unwrap();
    let (w_lo, w_mid, w_hi) = bands.bandwidths();
    let mut value_err = 0.0f64;
    for (lo, mid, hi) in &bands.bands {
        value_err = value_err
            .max((lo + 2.0).abs())
            .max(mid.abs())
            .max((hi - 2.0).abs());
    }
    let widths = w_lo.max(w_mid).max(w_hi);
    report(
        1,
        "static flat bands at pi flux",
        widths < 1e-12 && value_err < 1e-12,
        &format!("max bandwidth {widths:.2e}, max deviation from {{-2,0,2}} kappa {value_err:.2e}"),
    );
}

/// Criterion 2: periodic 24-cell spectrum matches the dispersion sampled on
/// the matching momentum grid to 1e-10, for gamma in {0, pi/2, pi}.
#[test]
fn criterion_02_hamiltonian_matches_dispersion() {
    let n = 24;
    let mut worst = 0.0f64;
    for &gamma in &[0.0, PI / 2.0, PI] {
        let params = FluxedRhombicParams::new(1.0, gamma, n, Boundary::Periodic).unwrap();
        let eigs = lattice::static_spectrum(&params);
        let mut expected = Vec::with_capacity(3 * n);
        for j in 0..n {
            let q = 2.0 * PI * j as f64 / n as f64;
            let (lo, mid, hi) = lattice::static_dispersion(1.0, gamma, q).unwrap();
            expected.extend([lo, mid, hi]);
        }
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (e, x) in eigs.iter().zip(&expected) {
            worst = worst.max((e - x).abs());
        }
    }
    report(
        2,
        "static Hamiltonian vs dispersion",
        worst < 1e-10,
        &format!("max |eigenvalue - band| = {worst:.2e} over gamma in {{0, pi/2, pi}}"),
    );
}

/// Criterion 3: cycle-averaged couplings have magnitude |J_M(Gamma)| and
/// their plaquette circulation reproduces the flux 4 M phi, both to 1e-8.
#[test]
fn criterion_03_effective_parameter_oracle() {
    let gammas: Vec<f64> = (0..13).map(|i| 0.5 * i as f64).collect();
    let mut mag_err = 0.0f64;
    let mut flux_err = 0.0f64;
    let mut flux_checked = 0usize;
    for &order in &[1u32, 2, 3] {
        for &phi in &[0.0, PI / 8.0, PI / 4.0] {
            for &gamma in &gammas {
                let d = drive_m(10.0, gamma, phi, order);
                let expected = bessel_j(order, gamma).abs();
                let z: Vec<_> = (1..=4)
                    .map(|l| d.cycle_averaged_coupling(l).unwrap())
                    .collect();
                for zl in &z {
                    mag_err = mag_err.max((zl.norm() - expected).abs());
                }
                // the circulation of near-zero couplings has no defined phase
                if expected > 1e-3 {
                    let circulation = z[2].arg() - z[3].arg() + z[1].arg() - z[0].arg();
                    let mismatch = abcage::fold_angle(circulation - 4.0 * order as f64 * phi).abs();
                    flux_err = flux_err.max(mismatch);
                    flux_checked += 1;
                }
            }
        }
    }
    report(
        3,
        "effective-parameter oracle",
        mag_err < 1e-8 && flux_err < 1e-8,
        &format!(
            "max | |<e^(i phi_l)>| - |J_M| | = {mag_err:.2e} (117 points), \
             max flux mismatch {flux_err:.2e} ({flux_checked} points)"
        ),
    );
}

/// Criterion 4: at the caging phase the swept quasi-energy bands are flat to
/// 0.1 kappa and centered on {0, +-2 kappa |J_1(Gamma)|}.
#[test]
fn criterion_04_caged_sweep_flat_bands() {
    let n_q = 64;
    let spec = SweepSpec {
        gamma_values: floquet::uniform_grid(0.0, 4.0, 81),
        phi: PI / 4.0,
        order: 1,
        omega_over_kappa: 15.0,
        q_values: lattice::brillouin_grid(n_q),
    };
    let rows = floquet::sweep(&spec).unwrap();
    let mut worst_width = 0.0f64;
    let mut worst_center = 0.0f64;
    for (gi, &gamma) in spec.gamma_values.iter().enumerate() {
        let chunk = &rows[gi * n_q..(gi + 1) * n_q];
        let target = 2.0 * bessel_j(1, gamma).abs();
        for band in 0..3 {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            let mut sum = 0.0;
            for row in chunk {
                lo = lo.min(row.eps[band]);
                hi = hi.max(row.eps[band]);
                sum += row.eps[band];
            }
            worst_width = worst_width.max(hi - lo);
            let center = sum / n_q as f64;
            worst_center = worst_center.max((center - [-target, 0.0, target][band]).abs());
        }
    }
    report(
        4,
        "caged sweep reproduces Bessel-flat bands",
        worst_width < 0.1 && worst_center < 0.1,
        &format!(
            "81x64 sweep at phi = pi/4, omega/kappa = 15: max bandwidth {worst_width:.3e}, \
             max center offset {worst_center:.3e}"
        ),
    );
}

/// Criterion 5: with in-phase modulation one quasi-energy stays at zero to
/// 1e-3 kappa for every (Gamma, q), at omega/kappa in {2, 5, 15}.
#[test]
fn criterion_05_in_phase_zero_band() {
    let mut worst = 0.0f64;
    for &omega in &[2.0, 5.0, 15.0] {
        let spec = SweepSpec {
            gamma_values: floquet::uniform_grid(0.0, 4.0, 81),
            phi: 0.0,
            order: 1,
            omega_over_kappa: omega,
            q_values: lattice::brillouin_grid(64),
        };
        let rows = floquet::sweep(&spec).unwrap();
        for row in &rows {
            let closest = row
                .eps
                .iter()
                .map(|e| e.abs())
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(closest);
        }
    }
    report(
        5,
        "flat zero band for in-phase modulation",
        worst < 1e-3,
        &format!("max distance of the nearest band from zero: {worst:.2e} kappa"),
    );
}

/// Criterion 6: the full quasi-energy sweep converges to the cycle-averaged
/// overlay as the drive frequency grows, reaching 0.15 kappa at
/// omega/kappa = 15.
#[test]
fn criterion_06_high_frequency_convergence() {
    let mut all_monotonic = true;
    let mut details = Vec::new();
    let mut final_dev = 0.0f64;
    for &phi in &[0.0, PI / 8.0, PI / 4.0] {
        let mut deviations = Vec::new();
        for &omega in &[2.0, 5.0, 15.0] {
            let spec = SweepSpec {
                gamma_values: floquet::uniform_grid(0.0, 4.0, 81),
                phi,
                order: 1,
                omega_over_kappa: omega,
                q_values: lattice::brillouin_grid(64),
            };
            let rows = floquet::sweep(&spec).unwrap();
            let mut dev = 0.0f64;
            for row in &rows {
                for band in 0..3 {
                    dev = dev.max((row.eps[band] - row.eps_eff[band]).abs());
                }
            }
            deviations.push(dev);
        }
        all_monotonic &= deviations[0] > deviations[1] && deviations[1] > deviations[2];
        final_dev = final_dev.max(deviations[2]);
        details.push(format!(
            "phi={phi:.4}: [{:.3}, {:.3}, {:.4}]",
            deviations[0], deviations[1], deviations[2]
        ));
    }
    report(
        6,
        "high-frequency convergence to the effective model",
        all_monotonic && final_dev < 0.15,
        &format!(
            "max |eps - eps_eff| along omega/kappa = 2, 5, 15 -- {}",
            details.join("; ")
        ),
    );
}

/// Criterion 7: at the first zero of J_1 tunneling freezes for any phase
/// offset: |a_0(t)|^2 stays above 0.95 up to kappa t = 10.
#[test]
fn criterion_07_coherent_destruction_of_tunneling() {
    let gamma = first_positive_zero(1);
    assert!(
        bessel_j(1, gamma).abs() < 1e-10,
        "root finder missed the J_1 zero"
    );
    let initial = a0_state(12);
    let mut worst: f64 = 1.0;
    for &phi in &[0.0, PI / 8.0, PI / 4.0] {
        let drive = drive_m(15.0, gamma, phi, 1);
        let traj = dynamics::integrate(
            Frame::Gauged,
            &initial,
            1.0,
            &drive,
            10.0,
            None,
            &StepControl::default(),
        )
        .unwrap();
        let ret = dynamics::return_intensity(&traj, 0).unwrap();
        worst = worst.min(ret.into_iter().fold(f64::INFINITY, f64::min));
    }
    report(
        7,
        "coherent destruction of tunneling at the J_1 zero",
        worst > 0.95,
        &format!("Gamma = {gamma:.10}; min |a_0(t)|^2 over phi grid = {worst:.4}"),
    );
}

/// Criterion 8: caging vs ballistic transport at omega/kappa = 10, Gamma = 2:
/// leakage, participation ratios, and the five-site cos^2(2 kappa_0 t) oracle.
#[test]
fn criterion_08_caging_vs_ballistic() {
    let initial = a0_state(30);
    let ctrl = StepControl::default();
    let caged = dynamics::integrate(
        Frame::Gauged,
        &initial,
        1.0,
        &drive_m(10.0, 2.0, PI / 4.0, 1),
        10.0,
        None,
        &ctrl,
    )
    .unwrap();
    let ballistic = dynamics::integrate(
        Frame::Gauged,
        &initial,
        1.0,
        &drive_m(10.0, 2.0, 0.0, 1),
        10.0,
        None,
        &ctrl,
    )
    .unwrap();

    let cage = dynamics::default_cage(0);
    let leak_caged = dynamics::cage_leakage(&caged, &cage)
        .unwrap()
        .into_iter()
        .fold(0.0f64, f64::max);
    let pr_caged = caged
        .participation_ratios()
        .into_iter()
        .fold(0.0f64, f64::max);
    let leak_ball = dynamics::cage_leakage(&ballistic, &cage)
        .unwrap()
        .into_iter()
        .fold(0.0f64, f64::max);
    let pr_ball_final = *ballistic.participation_ratios().last().unwrap();

    let kappa0 = bessel_j(1, 2.0);
    let ret = dynamics::return_intensity(&caged, 0).unwrap();
    let mut oracle_dev = 0.0f64;
    for (&t, &r) in caged.times.iter().zip(&ret) {
        oracle_dev = oracle_dev.max((r - (2.0 * kappa0 * t).cos().powi(2)).abs());
    }

    let pass = leak_caged < 0.05
        && pr_caged < 6.0
        && pr_ball_final > 20.0
        && leak_ball > 0.5
        && oracle_dev < 0.05;
    report(
        8,
        "caging vs ballistic transport",
        pass,
        &format!(
            "caged: leakage max {leak_caged:.4} (< 0.05), PR max {pr_caged:.3} (< 6); \
             ballistic: final PR {pr_ball_final:.1} (> 20), leakage max {leak_ball:.3} (> 0.5); \
             cage-oracle max deviation {oracle_dev:.4} (< 0.05)"
        ),
    );
}

/// Criterion 9: lab-frame and gauge-frame propagation agree per site to 1e-6.
#[test]
fn criterion_09_gauge_invariance_of_propagation() {
    let initial = a0_state(30);
    let ctrl = StepControl::default();
    let drive = drive_m(10.0, 2.0, PI / 4.0, 1);
    let gauged =
        dynamics::integrate(Frame::Gauged, &initial, 1.0, &drive, 10.0, None, &ctrl).unwrap();
    let lab = dynamics::integrate(Frame::Lab, &initial, 1.0, &drive, 10.0, None, &ctrl).unwrap();
    let deviation = gauged.max_intensity_deviation(&lab);
    report(
        9,
        "gauge invariance of propagation",
        deviation < 1e-6,
        &format!("max per-site intensity deviation {deviation:.2e} over kappa t <= 10"),
    );
}

/// Criterion 10: the design calculator reproduces the worked fabrication
/// numbers: R = 19.56 cm (0.5%), T = 6.28 mm (0.1%), dn = 2e-4 (5%).
#[test]
fn criterion_10_design_calculator() {
    let design = abcage::design::PhysicalDesign {
        wavelength: 633e-9,
        substrate_index: 1.46,
        half_spacing: 13.5e-6,
        kappa: 100.0,
        sigma: 1000.0,
        omega: 1000.0,
        gamma_norm: 2.0,
    };
    let fab = abcage::design::fabrication_parameters(&design).unwrap();
    let r_err = (fab.bend_radius - 0.1956).abs() / 0.1956;
    let t_err = (fab.modulation_period - 6.28e-3).abs() / 6.28e-3;
    let dn_err = (fab.index_depth - 2e-4).abs() / 2e-4;
    report(
        10,
        "waveguide design calculator",
        r_err < 0.005 && t_err < 0.001 && dn_err < 0.05,
        &format!(
            "R = {:.4} cm ({:.3}%), T = {:.4} mm ({:.3}%), dn = {:.3e} ({:.2}%)",
            fab.bend_radius * 1e2,
            r_err * 1e2,
            fab.modulation_period * 1e3,
            t_err * 1e2,
            fab.index_depth,
            dn_err * 1e2
        ),
    );
}

/// Criterion 11: numerical hygiene: monodromy unitarity defect below 1e-10
/// everywhere, propagation norm drift below 1e-8 per unit kappa t, and
/// step-halving changes below 1e-8.
#[test]
fn criterion_11_numerical_hygiene() {
    // unitarity across the swept parameter space
    let ctrl = MonodromyControl::default();
    let mut worst_defect = 0.0f64;
    for &omega in &[2.0, 5.0, 10.0, 15.0] {
        for &gamma in &[0.0, 1.0, 2.0, first_positive_zero(1), 4.0] {
            for &phi in &[0.0, PI / 8.0, PI / 4.0] {
                let d = drive_m(omega, gamma, phi, 1);
                for &q in &[-2.7, -0.9, 0.0, 1.3, 2.9] {
                    let u = floquet::monodromy(q, &d, 1.0, &ctrl).unwrap();
                    worst_defect = worst_defect.max(abcage::floquet::unitarity_defect(&u));
                }
            }
        }
    }

    // norm drift on the caging propagation
    let initial = a0_state(20);
    let drive = drive_m(10.0, 2.0, PI / 4.0, 1);
    let traj = dynamics::integrate(
        Frame::Gauged,
        &initial,
        1.0,
        &drive,
        10.0,
        None,
        &StepControl::default(),
    )
    .unwrap();
    let max_drift_per_kt = traj
        .times
        .iter()
        .zip(traj.norm_drifts())
        .skip(1)
        .map(|(&t, d)| d / t.max(1e-3))
        .fold(0.0f64, f64::max);

    // step halving
    let base = drive.period() / 200.0;
    let run = |step: f64| {
        dynamics::integrate(
            Frame::Gauged,
            &initial,
            1.0,
            &drive,
            5.0,
            None,
            &StepControl {
                step_override: Some(step),
                ..StepControl::default()
            },
        )
        .unwrap()
    };
    let halving_change = run(base).max_intensity_deviation(&run(0.5 * base));

    report(
        11,
        "numerical hygiene",
        worst_defect < 1e-10 && max_drift_per_kt < 1e-8 && halving_change < 1e-8,
        &format!(
            "monodromy defect max {worst_defect:.2e} (300 points), norm drift \
             {max_drift_per_kt:.2e} per kappa t, step-halving change {halving_change:.2e}"
        ),
    );
}
