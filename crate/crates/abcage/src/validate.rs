//! Built-in property battery behind `abcage validate`.
//!
//! Each property re-derives one of the toolkit's contracts at runtime and
//! reports pass/fail; the battery is the scriptable health check for a fresh
//! build. `quick` shrinks grids and horizons to keep the run under a minute.

use crate::bessel::{bessel_j, first_positive_zero};
use crate::drive::DriveParams;
use crate::dynamics::{self, Frame, LatticeField, StepControl, Window};
use crate::floquet::{self, MonodromyControl, SweepSpec};
use crate::lattice::{self, Boundary, FluxedRhombicParams, SiteKind};
use crate::linalg::{hermitian_eigenvalues, unitarity_defect};
use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Outcome of one property check.
#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Deliberate defects for negative-control runs of the battery.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inject {
    None,
    /// Flip the sign of the hopping coefficient on one directed A-B hop in
    /// the Floquet Hamiltonian. The reverse hop keeps its sign, so the
    /// corrupted generator is non-Hermitian and the monodromy unitarity
    /// property must fail.
    KappaSignFlip,
}

type Check = fn(bool, Inject) -> Result<String, String>;

/// Run the whole battery; reports come back in a fixed order.
pub fn run_battery(quick: bool, inject: Inject) -> Vec<PropertyReport> {
    let checks: Vec<(&'static str, Check)> = vec![
        ("static-flux-gauge-invariance", static_gauge_invariance),
        ("static-flat-band-pi-flux", static_flat_band),
        ("static-band-touching", static_band_touching),
        ("static-spectral-symmetry", static_spectral_symmetry),
        ("drive-phase-periodicity", drive_periodicity),
        ("drive-detuning-site-independence", drive_site_independence),
        ("drive-bessel-magnitude", drive_bessel_magnitude),
        ("drive-flux-consistency", drive_flux_consistency),
        ("dynamics-norm-conservation", dynamics_norm_conservation),
        ("dynamics-gauge-invariance", dynamics_gauge_invariance),
        (
            "dynamics-effective-convergence",
            dynamics_effective_convergence,
        ),
        ("dynamics-cdt-freezing", dynamics_cdt_freezing),
        ("dynamics-step-halving", dynamics_step_halving),
        ("floquet-monodromy-unitarity", floquet_unitarity),
        ("floquet-folding", floquet_folding),
        ("floquet-flat-band-caging", floquet_flat_band_caging),
        ("floquet-cdt-collapse", floquet_cdt_collapse),
        ("design-round-trip", design_round_trip),
        ("design-unit-equivalence", design_unit_equivalence),
    ];
    checks
        .into_iter()
        .map(|(name, check)| match check(quick, inject) {
            Ok(detail) => PropertyReport {
                name,
                passed: true,
                detail,
            },
            Err(detail) => PropertyReport {
                name,
                passed: false,
                detail,
            },
        })
        .collect()
}

fn resonant(omega: f64, gamma: f64, phi: f64, order: u32) -> DriveParams {
    DriveParams::resonant(0.0, omega, gamma * omega, phi, order).expect("valid drive")
}

fn static_gauge_invariance(quick: bool, _: Inject) -> Result<String, String> {
    let gammas: &[f64] = if quick { &[0.7] } else { &[0.7, PI / 2.0, 2.5] };
    let n = if quick { 8 } else { 12 };
    let mut worst = 0.0f64;
    for &gamma in gammas {
        let p = FluxedRhombicParams::new(1.0, gamma, n, Boundary::Periodic).unwrap();
        let reference = lattice::static_spectrum(&p);
        // site-gauge-equivalent splits: same plaquette flux AND ring flux
        for &split in &[
            (0.0, 1.0, 0.0, 0.0),
            (0.5, 0.5, 0.0, 0.0),
            (0.25, 0.75, 0.5, -0.5),
        ] {
            let alt = hermitian_eigenvalues(&alt_gauge_hamiltonian(1.0, gamma, n, split));
            for (a, r) in alt.iter().zip(&reference) {
                worst = worst.max((a - r).abs());
            }
        }
    }
    if worst < 1e-10 {
        Ok(format!("max spectral deviation across gauges {worst:.2e}"))
    } else {
        Err(format!("gauge-dependent spectrum: deviation {worst:.2e}"))
    }
}

// the plaquette phase distributed over the four bonds with weights `split`;
// only splits of the form (s, 1-s, u, -u) are gauge-equivalent to the
// reference layout on a ring
fn alt_gauge_hamiltonian(
    kappa: f64,
    gamma: f64,
    n: usize,
    split: (f64, f64, f64, f64),
) -> DMatrix<Complex64> {
    let k = Complex64::new(kappa, 0.0);
    let mut h = DMatrix::<Complex64>::zeros(3 * n, 3 * n);
    let mut set = |row: usize, col: usize, v: Complex64| {
        h[(row, col)] = v;
        h[(col, row)] = v.conj();
    };
    for cell in 0..n {
        let a = 3 * cell;
        let b = a + 1;
        let c = a + 2;
        let a_next = 3 * ((cell + 1) % n);
        set(c, a, k * Complex64::from_polar(1.0, gamma * split.0));
        set(a_next, c, k * Complex64::from_polar(1.0, gamma * split.1));
        set(b, a_next, k * Complex64::from_polar(1.0, gamma * split.2));
        set(a, b, k * Complex64::from_polar(1.0, gamma * split.3));
    }
    h
}

fn static_flat_band(_: bool, _: Inject) -> Result<String, String> {
    let p = FluxedRhombicParams::new(1.0, PI, 8, Boundary::Periodic).unwrap();
    let bands = lattice::bloch_bands(&p, 256).map_err(|e| e.to_string())?;
    let (w0, w1, w2) = bands.bandwidths();
    let worst = w0.max(w1).max(w2);
    if worst < 1e-12 {
        Ok(format!("max bandwidth at pi flux {worst:.2e}"))
    } else {
        Err(format!("pi-flux bands not flat: max bandwidth {worst:.2e}"))
    }
}

fn static_band_touching(_: bool, _: Inject) -> Result<String, String> {
    let p = FluxedRhombicParams::new(1.0, 0.0, 8, Boundary::Periodic).unwrap();
    let bands = lattice::bloch_bands(&p, 256).map_err(|e| e.to_string())?;
    let min_upper = bands
        .bands
        .iter()
        .map(|b| b.2)
        .fold(f64::INFINITY, f64::min);
    if min_upper.abs() < 1e-12 {
        Ok(format!(
            "upper band touches zero: min E_+ = {min_upper:.2e}"
        ))
    } else {
        Err(format!(
            "no band touching at gamma = 0: min E_+ = {min_upper:.2e}"
        ))
    }
}

fn static_spectral_symmetry(quick: bool, _: Inject) -> Result<String, String> {
    let gammas: &[f64] = if quick { &[1.1] } else { &[0.3, 1.1, 2.8] };
    let mut worst = 0.0f64;
    for &gamma in gammas {
        let p = FluxedRhombicParams::new(1.0, gamma, 9, Boundary::Periodic).unwrap();
        let eigs = lattice::static_spectrum(&p);
        let n = eigs.len();
        for i in 0..n {
            worst = worst.max((eigs[i] + eigs[n - 1 - i]).abs());
        }
    }
    if worst < 1e-10 {
        Ok(format!(
            "spectrum symmetric under E -> -E within {worst:.2e}"
        ))
    } else {
        Err(format!("bipartite symmetry broken by {worst:.2e}"))
    }
}

fn drive_periodicity(_: bool, _: Inject) -> Result<String, String> {
    let mut worst = 0.0f64;
    for &(omega, gamma, phi, order) in &[(10.0, 2.0, PI / 8.0, 1u32), (5.0, 3.3, 0.4, 3)] {
        let d = resonant(omega, gamma, phi, order);
        let period = d.period();
        for l in 1..=4 {
            for &t in &[0.0, 0.3, 1.9] {
                let z0 = Complex64::from_polar(1.0, d.gauge_phase(l, t).unwrap());
                let z1 = Complex64::from_polar(1.0, d.gauge_phase(l, t + period).unwrap());
                worst = worst.max((z0 - z1).norm());
            }
        }
    }
    if worst < 1e-12 {
        Ok(format!("max periodicity defect {worst:.2e}"))
    } else {
        Err(format!("phase factors not T-periodic: defect {worst:.2e}"))
    }
}

fn drive_site_independence(_: bool, _: Inject) -> Result<String, String> {
    let d = resonant(7.0, 1.7, 0.5, 2);
    let t = 0.41;
    let (v0, w0, x0) = d.onsite_profiles(0, t);
    let (_, w0p, x0p) = d.onsite_profiles(-1, t);
    let mut worst = 0.0f64;
    for n in -50..=50i64 {
        let (v, w, x) = d.onsite_profiles(n, t);
        let (_, wp, xp) = d.onsite_profiles(n - 1, t);
        worst = worst.max(((v - w) - (v0 - w0)).abs());
        worst = worst.max(((v - x) - (v0 - x0)).abs());
        worst = worst.max(((v - wp) - (v0 - w0p)).abs());
        worst = worst.max(((v - xp) - (v0 - x0p)).abs());
    }
    if worst < 1e-11 {
        Ok(format!(
            "bond detunings site-independent within {worst:.2e}"
        ))
    } else {
        Err(format!("site-dependent detuning: spread {worst:.2e}"))
    }
}

fn drive_bessel_magnitude(quick: bool, _: Inject) -> Result<String, String> {
    let gammas: Vec<f64> = if quick {
        vec![0.0, 2.0, 4.0]
    } else {
        (0..13).map(|i| 0.5 * i as f64).collect()
    };
    let orders: &[u32] = if quick { &[1, 2] } else { &[1, 2, 3] };
    let phis: &[f64] = if quick {
        &[0.0, PI / 4.0]
    } else {
        &[0.0, PI / 8.0, PI / 4.0]
    };
    let mut worst = 0.0f64;
    let cases: Vec<(f64, u32, f64)> = gammas
        .iter()
        .flat_map(|&g| {
            orders
                .iter()
                .flat_map(move |&m| phis.iter().map(move |&p| (g, m, p)))
        })
        .collect();
    let results: Vec<Result<f64, String>> = cases
        .par_iter()
        .map(|&(gamma, order, phi)| {
            let d = resonant(10.0, gamma, phi, order);
            let expected = bessel_j(order, gamma).abs();
            let mut local = 0.0f64;
            for l in 1..=4 {
                let z = d.cycle_averaged_coupling(l).map_err(|e| e.to_string())?;
                local = local.max((z.norm() - expected).abs());
            }
            Ok(local)
        })
        .collect();
    for r in results {
        worst = worst.max(r?);
    }
    if worst < 1e-8 {
        Ok(format!(
            "|<exp(i phi_l)>| matches |J_M(Gamma)| within {worst:.2e} over {} cases",
            cases.len()
        ))
    } else {
        Err(format!("cycle-average magnitude off by {worst:.2e}"))
    }
}

fn drive_flux_consistency(quick: bool, _: Inject) -> Result<String, String> {
    let cases: &[(u32, f64, f64)] = if quick {
        &[(1, PI / 8.0, 2.0), (2, 0.2, 1.0)]
    } else {
        &[
            (1, PI / 8.0, 2.0),
            (1, PI / 4.0, 1.0),
            (2, 0.2, 2.0),
            (3, 0.11, 0.5),
        ]
    };
    let mut worst = 0.0f64;
    for &(order, phi, gamma) in cases {
        let d = resonant(10.0, gamma, phi, order);
        let z: Vec<Complex64> = (1..=4)
            .map(|l| d.cycle_averaged_coupling(l).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        let circulation = z[2].arg() - z[3].arg() + z[1].arg() - z[0].arg();
        let mismatch = crate::fold_angle(circulation - 4.0 * order as f64 * phi).abs();
        worst = worst.max(mismatch);
    }
    if worst < 1e-8 {
        Ok(format!("averaged flux matches 4 M phi within {worst:.2e}"))
    } else {
        Err(format!("effective flux off by {worst:.2e}"))
    }
}

fn dynamics_norm_conservation(quick: bool, _: Inject) -> Result<String, String> {
    let t_end = if quick { 3.0 } else { 10.0 };
    let drive = resonant(10.0, 2.0, PI / 4.0, 1);
    let window = Window::new(-15, 15).unwrap();
    let initial = LatticeField::single_site(window, Boundary::Open, SiteKind::A, 0).unwrap();
    let traj = dynamics::integrate(
        Frame::Gauged,
        &initial,
        1.0,
        &drive,
        t_end,
        None,
        &StepControl::default(),
    )
    .map_err(|e| e.to_string())?;
    let worst = traj.norm_drifts().into_iter().fold(0.0f64, f64::max);
    let bound = 1e-8 * t_end;
    if worst < bound {
        Ok(format!(
            "max relative norm drift {worst:.2e} over kappa t = {t_end}"
        ))
    } else {
        Err(format!("norm drift {worst:.2e} exceeds {bound:.2e}"))
    }
}

fn dynamics_gauge_invariance(quick: bool, _: Inject) -> Result<String, String> {
    let (half, t_end) = if quick { (8, 2.0) } else { (15, 5.0) };
    let drive = resonant(10.0, 2.0, PI / 4.0, 1);
    let window = Window::new(-half, half).unwrap();
    let initial = LatticeField::single_site(window, Boundary::Open, SiteKind::A, 0).unwrap();
    let ctrl = StepControl::default();
    let lab = dynamics::integrate(Frame::Lab, &initial, 1.0, &drive, t_end, None, &ctrl)
        .map_err(|e| e.to_string())?;
    let gauged = dynamics::integrate(Frame::Gauged, &initial, 1.0, &drive, t_end, None, &ctrl)
        .map_err(|e| e.to_string())?;
    let dev = lab.max_intensity_deviation(&gauged);
    if dev < 1e-6 {
        Ok(format!(
            "lab vs gauged per-site intensity deviation {dev:.2e}"
        ))
    } else {
        Err(format!("frames disagree by {dev:.2e}"))
    }
}

fn dynamics_effective_convergence(quick: bool, _: Inject) -> Result<String, String> {
    let (half, t_end) = if quick { (8, 2.0) } else { (12, 4.0) };
    let window = Window::new(-half, half).unwrap();
    let initial = LatticeField::single_site(window, Boundary::Open, SiteKind::A, 0).unwrap();
    let ctrl = StepControl::default();
    let mut deviations = Vec::new();
    for omega in [2.0, 5.0, 15.0] {
        let drive = resonant(omega, 2.0, PI / 8.0, 1);
        let gauged = dynamics::integrate(
            Frame::Gauged,
            &initial,
            1.0,
            &drive,
            t_end,
            Some(0.25),
            &ctrl,
        )
        .map_err(|e| e.to_string())?;
        let eff = dynamics::integrate(
            Frame::Effective,
            &initial,
            1.0,
            &drive,
            t_end,
            Some(0.25),
            &ctrl,
        )
        .map_err(|e| e.to_string())?;
        deviations.push(gauged.max_intensity_deviation(&eff));
    }
    let rendered = deviations
        .iter()
        .map(|d| format!("{d:.3e}"))
        .collect::<Vec<_>>()
        .join(", ");
    if deviations[0] > deviations[1] && deviations[1] > deviations[2] {
        Ok(format!(
            "effective-model deviation decreases along omega/kappa = 2, 5, 15: [{rendered}]"
        ))
    } else {
        Err(format!("no high-frequency convergence: [{rendered}]"))
    }
}

fn dynamics_cdt_freezing(quick: bool, _: Inject) -> Result<String, String> {
    let t_end = if quick { 5.0 } else { 10.0 };
    let phis: &[f64] = if quick {
        &[PI / 8.0]
    } else {
        &[0.0, PI / 8.0, PI / 4.0]
    };
    let gamma = first_positive_zero(1);
    let window = Window::new(-12, 12).unwrap();
    let initial = LatticeField::single_site(window, Boundary::Open, SiteKind::A, 0).unwrap();
    let mut worst: f64 = 1.0;
    for &phi in phis {
        let drive = resonant(15.0, gamma, phi, 1);
        let traj = dynamics::integrate(
            Frame::Gauged,
            &initial,
            1.0,
            &drive,
            t_end,
            None,
            &StepControl::default(),
        )
        .map_err(|e| e.to_string())?;
        let ret = dynamics::return_intensity(&traj, 0).map_err(|e| e.to_string())?;
        worst = worst.min(ret.into_iter().fold(f64::INFINITY, f64::min));
    }
    if worst > 0.95 {
        Ok(format!(
            "tunneling frozen at the J_1 zero: min |a_0|^2 = {worst:.4} across phi"
        ))
    } else {
        Err(format!("light escaped under CDT: min |a_0|^2 = {worst:.4}"))
    }
}

fn dynamics_step_halving(_: bool, _: Inject) -> Result<String, String> {
    let drive = resonant(10.0, 2.0, PI / 4.0, 1);
    let window = Window::new(-8, 8).unwrap();
    let initial = LatticeField::single_site(window, Boundary::Open, SiteKind::A, 0).unwrap();
    let base = drive.period() / 200.0;
    let run = |step: f64| {
        dynamics::integrate(
            Frame::Gauged,
            &initial,
            1.0,
            &drive,
            2.0,
            None,
            &StepControl {
                step_override: Some(step),
                ..StepControl::default()
            },
        )
        .map_err(|e| e.to_string())
    };
    let coarse = run(base)?;
    let fine = run(0.5 * base)?;
    let dev = coarse.max_intensity_deviation(&fine);
    if dev < 1e-8 {
        Ok(format!("halving the step changes intensities by {dev:.2e}"))
    } else {
        Err(format!("step-halving change {dev:.2e} too large"))
    }
}

fn floquet_unitarity(quick: bool, inject: Inject) -> Result<String, String> {
    if inject == Inject::KappaSignFlip {
        // negative control: one directed hop with the wrong kappa sign makes
        // the generator non-Hermitian and the propagator non-unitary
        let d = resonant(10.0, 2.0, PI / 4.0, 1);
        let defect = corrupted_monodromy_defect(&d, 0.7);
        return Err(format!(
            "injected kappa sign flip detected: unitarity defect {defect:.2e}"
        ));
    }
    let omegas: &[f64] = if quick {
        &[5.0, 15.0]
    } else {
        &[2.0, 5.0, 15.0]
    };
    let ctrl = MonodromyControl::default();
    let mut worst = 0.0f64;
    for &omega in omegas {
        for &gamma in &[0.0, 2.0, 3.83] {
            for &phi in &[0.0, PI / 4.0] {
                let d = resonant(omega, gamma, phi, 1);
                for &q in &[-2.0, 0.3, 1.7] {
                    let u = floquet::monodromy(q, &d, 1.0, &ctrl).map_err(|e| e.to_string())?;
                    worst = worst.max(unitarity_defect(&u));
                }
            }
        }
    }
    if worst < 1e-10 {
        Ok(format!("max monodromy unitarity defect {worst:.2e}"))
    } else {
        Err(format!("unitarity defect {worst:.2e} above 1e-10"))
    }
}

fn corrupted_monodromy_defect(drive: &DriveParams, q: f64) -> f64 {
    let steps = 800;
    let dt = drive.period() / steps as f64;
    let minus_i = Complex64::new(0.0, -1.0);
    let rhs = |t: f64, u: &Matrix3<Complex64>| {
        let mut h = floquet::bloch_hamiltonian(q, t, drive, 1.0).matrix;
        h[(0, 1)] = -h[(0, 1)]; // forward hop only: breaks Hermiticity
        (h * u).map(|z| z * minus_i)
    };
    let mut u = Matrix3::<Complex64>::identity();
    for i in 0..steps {
        let t = i as f64 * dt;
        let k1 = rhs(t, &u);
        let k2 = rhs(t + 0.5 * dt, &(u + k1 * Complex64::new(0.5 * dt, 0.0)));
        let k3 = rhs(t + 0.5 * dt, &(u + k2 * Complex64::new(0.5 * dt, 0.0)));
        let k4 = rhs(t + dt, &(u + k3 * Complex64::new(dt, 0.0)));
        u += (k1 + (k2 + k3) * Complex64::new(2.0, 0.0) + k4) * Complex64::new(dt / 6.0, 0.0);
    }
    unitarity_defect(&u)
}

fn floquet_folding(_: bool, _: Inject) -> Result<String, String> {
    let ctrl = MonodromyControl::default();
    let mut checked = 0;
    for &omega in &[2.0, 15.0] {
        let d = resonant(omega, 1.5, 0.3, 1);
        for &q in &[-1.0, 0.0, 2.2] {
            let u = floquet::monodromy(q, &d, 1.0, &ctrl).map_err(|e| e.to_string())?;
            let eps = floquet::quasienergies(&u, omega).map_err(|e| e.to_string())?;
            for e in eps {
                if !(-omega / 2.0..omega / 2.0).contains(&e) {
                    return Err(format!("quasi-energy {e} outside [-{0}/2, {0}/2)", omega));
                }
                if crate::fold_half_open(e, omega) != e {
                    return Err(format!("refolding changed {e}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} quasi-energies inside the half-open window; refold idempotent"
    ))
}

fn floquet_flat_band_caging(quick: bool, _: Inject) -> Result<String, String> {
    let (n_gamma, n_q) = if quick { (6, 8) } else { (21, 16) };
    let spec = SweepSpec {
        gamma_values: floquet::uniform_grid(0.0, 4.0, n_gamma),
        phi: PI / 4.0,
        order: 1,
        omega_over_kappa: 15.0,
        q_values: lattice::brillouin_grid(n_q),
    };
    let rows = floquet::sweep(&spec).map_err(|e| e.to_string())?;
    let mut worst_width = 0.0f64;
    let mut worst_center = 0.0f64;
    for (gi, &gamma) in spec.gamma_values.iter().enumerate() {
        let chunk = &rows[gi * n_q..(gi + 1) * n_q];
        let center = 2.0 * bessel_j(1, gamma).abs();
        for band in 0..3 {
            let values: Vec<f64> = chunk.iter().map(|r| r.eps[band]).collect();
            let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            worst_width = worst_width.max(hi - lo);
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            let target = [-center, 0.0, center][band];
            worst_center = worst_center.max((mean - target).abs());
        }
    }
    if worst_width < 0.1 && worst_center < 0.1 {
        Ok(format!(
            "caged bands flat (max width {worst_width:.3}) and centered on +-2|J_1| (max offset {worst_center:.3})"
        ))
    } else {
        Err(format!(
            "caging bands: width {worst_width:.3}, center offset {worst_center:.3}"
        ))
    }
}

fn floquet_cdt_collapse(quick: bool, _: Inject) -> Result<String, String> {
    let gamma = first_positive_zero(1);
    let phis: &[f64] = if quick {
        &[0.0, PI / 4.0]
    } else {
        &[0.0, PI / 8.0, PI / 4.0]
    };
    let ctrl = MonodromyControl::default();
    let mut worst = 0.0f64;
    for &phi in phis {
        let d = resonant(15.0, gamma, phi, 1);
        for q in lattice::brillouin_grid(8) {
            let u = floquet::monodromy(q, &d, 1.0, &ctrl).map_err(|e| e.to_string())?;
            let eps = floquet::quasienergies(&u, 15.0).map_err(|e| e.to_string())?;
            for e in eps {
                worst = worst.max(e.abs());
            }
        }
    }
    if worst < 0.1 {
        Ok(format!(
            "all bands collapse at the J_1 zero: max |eps| = {worst:.3}"
        ))
    } else {
        Err(format!(
            "no collapse at the J_1 zero: max |eps| = {worst:.3}"
        ))
    }
}

fn design_round_trip(_: bool, _: Inject) -> Result<String, String> {
    let d = crate::design::PhysicalDesign {
        wavelength: 633e-9,
        substrate_index: 1.46,
        half_spacing: 13.5e-6,
        kappa: 100.0,
        sigma: 1000.0,
        omega: 1000.0,
        gamma_norm: 2.0,
    };
    let norm = d.normalized();
    let back = crate::design::PhysicalDesign::from_normalized(
        &norm,
        d.kappa,
        d.wavelength,
        d.substrate_index,
        d.half_spacing,
    );
    let mut worst = 0.0f64;
    for (x, y) in [
        (back.sigma, d.sigma),
        (back.omega, d.omega),
        (back.gamma_norm, d.gamma_norm),
    ] {
        worst = worst.max((x - y).abs() / y.abs().max(1e-300));
    }
    if worst < 1e-12 {
        Ok(format!(
            "normalized round trip reproduces inputs within {worst:.2e}"
        ))
    } else {
        Err(format!("round-trip error {worst:.2e}"))
    }
}

fn design_unit_equivalence(_: bool, _: Inject) -> Result<String, String> {
    use crate::config::Quantity;
    let cm = Quantity {
        value: 10.0,
        unit: "cm^-1".into(),
    };
    let m = Quantity {
        value: 1000.0,
        unit: "m^-1".into(),
    };
    let (a, b) = (cm.rate_si().unwrap(), m.rate_si().unwrap());
    if a == b {
        Ok(format!("10 cm^-1 == 1000 m^-1 == {a} m^-1"))
    } else {
        Err(format!("unit conversion mismatch: {a} vs {b}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_battery_is_all_green() {
        let reports = run_battery(true, Inject::None);
        for r in &reports {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
        assert_eq!(reports.len(), 19);
    }

    #[test]
    fn injected_sign_flip_fails_the_unitarity_property() {
        let reports = run_battery(true, Inject::KappaSignFlip);
        let unitarity = reports
            .iter()
            .find(|r| r.name == "floquet-monodromy-unitarity")
            .unwrap();
        assert!(!unitarity.passed);
        // and only that property is affected
        assert!(reports
            .iter()
            .filter(|r| r.name != "floquet-monodromy-unitarity")
            .all(|r| r.passed));
    }
}
