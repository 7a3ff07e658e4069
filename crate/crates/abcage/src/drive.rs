//! Longitudinal modulation protocol and its high-frequency effective model.
//!
//! The hub row keeps a static gradient `V_n = beta0 - 2 sigma n` while the rim
//! rows add antisymmetric sinusoidal terms,
//!
//! ```text
//! W_n = beta0 - (2n+1) sigma + A cos(omega t + phi)
//! X_n = beta0 - (2n+1) sigma - A cos(omega t - phi)
//! ```
//!
//! Under the resonance condition `sigma = M omega` the gauge transformation
//! absorbs the on-site terms into four site-independent bond phases
//! `phi_1..phi_4` with closed-form antiderivatives, each `T`-periodic with
//! `T = 2 pi / omega`. Cycle-averaging the dressed couplings renormalizes the
//! hopping to `kappa_0 = kappa J_M(Gamma)` with `Gamma = A / omega` and leaves
//! two static bond phases whose plaquette circulation is the effective flux
//! `gamma = 4 M phi (mod 2 pi)`.

use crate::bessel::bessel_j;
use crate::{fold_angle, Error, Result};
use num_complex::Complex64;

/// Modulation protocol parameters. Constructed only in resonance
/// `sigma = M omega`; detuned drives are rejected.
#[derive(Debug, Clone, Copy)]
pub struct DriveParams {
    beta0: f64,
    sigma: f64,
    omega: f64,
    amplitude: f64,
    phi: f64,
    order: u32,
}

impl DriveParams {
    /// Build from an explicit gradient rate; `sigma` must equal
    /// `order * omega` to the last bit.
    pub fn new(
        beta0: f64,
        sigma: f64,
        omega: f64,
        amplitude: f64,
        phi: f64,
        order: u32,
    ) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "modulation frequency omega must be positive, got {omega}"
            )));
        }
        if !(amplitude.is_finite() && amplitude >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "modulation amplitude must be nonnegative, got {amplitude}"
            )));
        }
        if order == 0 {
            return Err(Error::InvalidParameter(
                "resonance order M must be a positive integer".into(),
            ));
        }
        if !phi.is_finite() || !beta0.is_finite() {
            return Err(Error::InvalidParameter(
                "phi and beta0 must be finite".into(),
            ));
        }
        if sigma != order as f64 * omega {
            return Err(Error::InvalidParameter(format!(
                "resonance condition violated: sigma = {sigma} but M omega = {}",
                order as f64 * omega
            )));
        }
        Ok(Self {
            beta0,
            sigma,
            omega,
            amplitude,
            phi,
            order,
        })
    }

    /// Build with the gradient pinned to resonance, `sigma = order * omega`.
    pub fn resonant(beta0: f64, omega: f64, amplitude: f64, phi: f64, order: u32) -> Result<Self> {
        Self::new(beta0, order as f64 * omega, omega, amplitude, phi, order)
    }

    pub fn beta0(&self) -> f64 {
        self.beta0
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Normalized modulation amplitude `Gamma = A / omega`.
    pub fn gamma_norm(&self) -> f64 {
        self.amplitude / self.omega
    }

    /// Modulation period `T = 2 pi / omega`.
    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.omega
    }

    /// On-site propagation constants `(V_n, W_n, X_n)` at coordinate `t`.
    ///
    /// Written so that `V_n - W_n` and `V_n - X_n` cancel the site terms
    /// bitwise, mirroring the algebraic site-independence of the bond
    /// detunings.
    pub fn onsite_profiles(&self, n: i64, t: f64) -> (f64, f64, f64) {
        let ramp = self.beta0 - 2.0 * self.sigma * n as f64;
        let w = ramp - self.sigma + self.amplitude * (self.omega * t + self.phi).cos();
        let x = ramp - self.sigma - self.amplitude * (self.omega * t - self.phi).cos();
        (ramp, w, x)
    }

    /// Closed-form gauge phase `phi_l(t)`, the antiderivative from 0 to `t`
    /// of the corresponding bond detuning:
    ///
    /// ```text
    /// phi_1 =  sigma t - Gamma [sin(omega t + phi) - sin phi]
    /// phi_2 = -sigma t - Gamma [sin(omega t + phi) - sin phi]
    /// phi_3 =  sigma t + Gamma [sin(omega t - phi) + sin phi]
    /// phi_4 = -sigma t + Gamma [sin(omega t - phi) + sin phi]
    /// ```
    pub fn gauge_phase(&self, l: usize, t: f64) -> Result<f64> {
        if !(1..=4).contains(&l) {
            return Err(Error::InvalidPhaseIndex(l));
        }
        Ok(self.gauge_phases(t)[l - 1])
    }

    /// All four gauge phases at once (hot path for the integrators).
    pub fn gauge_phases(&self, t: f64) -> [f64; 4] {
        let gamma = self.gamma_norm();
        let st = self.sigma * t;
        let plus = gamma * ((self.omega * t + self.phi).sin() - self.phi.sin());
        let minus = gamma * ((self.omega * t - self.phi).sin() + self.phi.sin());
        [st - plus, -st - plus, st + minus, -st + minus]
    }

    /// Cycle average `(1/T) int_0^T exp[i phi_l(t)] dt` by trapezoidal
    /// quadrature with interval doubling; the integrand is smooth and
    /// `T`-periodic, so the rule converges geometrically.
    ///
    /// This is the independent numerical oracle for the effective-model
    /// couplings of [`effective_params`](Self::effective_params).
    pub fn cycle_averaged_coupling(&self, l: usize) -> Result<Complex64> {
        if !(1..=4).contains(&l) {
            return Err(Error::InvalidPhaseIndex(l));
        }
        const REL_TOL: f64 = 1e-10;
        const MAX_NODES: usize = 1 << 21;
        let period = self.period();
        let average = |nodes: usize| -> Complex64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..nodes {
                let t = period * j as f64 / nodes as f64;
                acc += Complex64::from_polar(1.0, self.gauge_phases(t)[l - 1]);
            }
            acc / nodes as f64
        };
        // resolve the fastest angular content before trusting the estimate
        let mut nodes = 64usize
            .max(8 * (self.order as usize + self.gamma_norm().ceil() as usize + 1))
            .next_power_of_two();
        let mut prev = average(nodes);
        let mut stable = 0;
        while nodes <= MAX_NODES {
            nodes *= 2;
            let cur = average(nodes);
            if (cur - prev).norm() < REL_TOL * cur.norm().max(1.0) {
                stable += 1;
                if stable >= 2 {
                    return Ok(cur);
                }
            } else {
                stable = 0;
            }
            prev = cur;
        }
        Err(Error::QuadratureNonConvergence {
            evaluations: MAX_NODES,
        })
    }

    /// High-frequency effective parameters: Bessel-renormalized hopping and
    /// the two static bond phases.
    pub fn effective_params(&self, kappa: f64) -> EffectiveModel {
        let gamma = self.gamma_norm();
        let m = self.order as f64;
        let sin_phi_term = gamma * self.phi.sin();
        EffectiveModel {
            kappa0: kappa * bessel_j(self.order, gamma),
            phi1_eff: m * (std::f64::consts::PI + self.phi) + sin_phi_term,
            phi2_eff: -m * self.phi + sin_phi_term,
            gamma_eff: fold_angle(4.0 * m * self.phi),
        }
    }
}

/// Cycle-averaged model: renormalized hopping `kappa_0 = kappa J_M(Gamma)`,
/// static bond phases, and the effective plaquette flux.
#[derive(Debug, Clone, Copy)]
pub struct EffectiveModel {
    /// Signed effective hopping (same units as kappa).
    pub kappa0: f64,
    /// Static phase carried by the `a_n - b_{n-1}` and `a_n - c_n` bonds.
    pub phi1_eff: f64,
    /// Static phase carried by the `a_n - b_n` and `a_n - c_{n-1}` bonds.
    pub phi2_eff: f64,
    /// Effective flux per plaquette, folded to `(-pi, pi]`; equals
    /// `4 M phi (mod 2 pi)`.
    pub gamma_eff: f64,
}

impl EffectiveModel {
    /// Closed form of the cycle-averaged coupling `kappa <exp[i phi_l]>` for
    /// gauge-phase index `l` in 1..=4.
    ///
    /// Averaging pairs the four bonds two by two: indices 1 and 4 share one
    /// static phase, indices 2 and 3 the other. The individual phases are
    /// convention-dependent; the gauge-invariant plaquette circulation
    /// `2 (phi1_eff - phi2_eff) = 4 M phi (mod 2 pi)` is the contract, and
    /// [`DriveParams::cycle_averaged_coupling`] cross-checks each bond.
    pub fn bond_coupling(&self, l: usize) -> Result<Complex64> {
        let phase = match l {
            1 | 4 => self.phi2_eff,
            2 | 3 => self.phi1_eff,
            _ => return Err(Error::InvalidPhaseIndex(l)),
        };
        Ok(Complex64::from_polar(1.0, phase) * self.kappa0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::{bessel_j, first_positive_zero};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn drive(omega: f64, gamma: f64, phi: f64, order: u32) -> DriveParams {
        DriveParams::resonant(0.0, omega, gamma * omega, phi, order).unwrap()
    }

    #[test]
    fn constructor_contract() {
        assert!(DriveParams::new(0.0, 10.0, 10.0, 1.0, 0.0, 1).is_ok());
        // detuned gradient rejected
        assert!(DriveParams::new(0.0, 10.0 + 1e-9, 10.0, 1.0, 0.0, 1).is_err());
        assert!(DriveParams::new(0.0, 10.0, -1.0, 1.0, 0.0, 1).is_err());
        assert!(DriveParams::new(0.0, 10.0, 10.0, -0.5, 0.0, 1).is_err());
        assert!(DriveParams::new(0.0, 0.0, 10.0, 1.0, 0.0, 0).is_err());
    }

    #[test]
    fn profiles_reduce_to_linear_ramp_without_modulation() {
        let d = DriveParams::resonant(0.3, 7.0, 0.0, 0.9, 2).unwrap();
        for n in [-4i64, 0, 11] {
            for t in [0.0, 0.13, 5.0] {
                let (v, w, x) = d.onsite_profiles(n, t);
                assert_eq!(v, 0.3 - 2.0 * 14.0 * n as f64);
                assert_eq!(w, v - 14.0);
                assert_eq!(x, v - 14.0);
            }
        }
    }

    #[test]
    fn rim_rows_are_out_of_phase_by_two_phi() {
        let d = drive(10.0, 2.0, PI / 5.0, 1);
        let (_, w, x) = d.onsite_profiles(3, 0.0);
        // at t = 0: W - X = 2 A cos phi
        assert_abs_diff_eq!(w - x, 2.0 * d.amplitude() * d.phi().cos(), epsilon = 1e-12);
    }

    #[test]
    fn bond_detunings_are_site_independent() {
        let d = DriveParams::resonant(0.5, 4.0, 3.0, 0.7, 2).unwrap();
        let t = 0.37;
        let (v0, w0, x0) = d.onsite_profiles(0, t);
        let (_, w0_prev, x0_prev) = d.onsite_profiles(-1, t);
        for n in -50..=50i64 {
            let (v, w, x) = d.onsite_profiles(n, t);
            let (_, w_prev, x_prev) = d.onsite_profiles(n - 1, t);
            // the algebraic identities hold to the rounding of the ramp terms
            assert_abs_diff_eq!(v - w, v0 - w0, epsilon = 1e-12);
            assert_abs_diff_eq!(v - x, v0 - x0, epsilon = 1e-12);
            assert_abs_diff_eq!(v - w_prev, v0 - w0_prev, epsilon = 1e-12);
            assert_abs_diff_eq!(v - x_prev, v0 - x0_prev, epsilon = 1e-12);
        }
    }

    #[test]
    fn gauge_phases_vanish_at_zero() {
        let d = drive(10.0, 2.0, PI / 4.0, 1);
        for l in 1..=4 {
            assert_eq!(d.gauge_phase(l, 0.0).unwrap(), 0.0);
        }
        assert!(d.gauge_phase(0, 1.0).is_err());
        assert!(d.gauge_phase(5, 1.0).is_err());
    }

    #[test]
    fn gauge_phase_without_modulation_is_pure_ramp() {
        let d = drive(10.0, 0.0, PI / 4.0, 1);
        for t in [0.1, 0.5, 2.0] {
            assert_eq!(d.gauge_phase(1, t).unwrap(), d.sigma() * t);
            assert_eq!(d.gauge_phase(2, t).unwrap(), -d.sigma() * t);
        }
    }

    // Adaptive Simpson oracle for the gauge-phase integrals.
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
        #[allow(clippy::too_many_arguments)]
        fn recurse<F: Fn(f64) -> f64>(
            f: &F,
            a: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            let flm = f(lm);
            let frm = f(rm);
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            let delta = left + right - whole;
            if depth == 0 || delta.abs() <= 15.0 * tol {
                left + right + delta / 15.0
            } else {
                recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                    + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
            }
        }
        let fa = f(a);
        let fb = f(b);
        let m = 0.5 * (a + b);
        let fm = f(m);
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        recurse(f, a, b, fa, fm, fb, whole, tol, 48)
    }

    #[test]
    fn gauge_phases_match_quadrature_of_detunings() {
        let cases = [
            (10.0, 2.0, PI / 4.0, 1u32),
            (5.0, 3.3, PI / 8.0, 2),
            (15.0, 0.7, 0.4, 3),
        ];
        for (omega, gamma, phi, order) in cases {
            let d = drive(omega, gamma, phi, order);
            for l in 1..=4usize {
                let integrand = move |s: f64| {
                    let (v, w, x) = d.onsite_profiles(5, s);
                    let (_, w_prev, x_prev) = d.onsite_profiles(4, s);
                    match l {
                        1 => v - w,
                        2 => v - w_prev,
                        3 => v - x,
                        _ => v - x_prev,
                    }
                };
                for t in [0.07, 0.31, 1.9 / omega * 2.0 * PI] {
                    let oracle = simpson(&integrand, 0.0, t, 1e-13);
                    let closed = d.gauge_phase(l, t).unwrap();
                    assert!(
                        (closed - oracle).abs() < 1e-10,
                        "l={l} t={t}: closed {closed} vs quadrature {oracle}"
                    );
                }
            }
        }
    }

    #[test]
    fn phase_factors_are_periodic() {
        let d = drive(10.0, 2.0, PI / 8.0, 2);
        let period = d.period();
        for l in 1..=4 {
            for t in [0.0, 0.2, 1.7, 4.0] {
                let z0 = Complex64::from_polar(1.0, d.gauge_phase(l, t).unwrap());
                let z1 = Complex64::from_polar(1.0, d.gauge_phase(l, t + period).unwrap());
                assert!((z0 - z1).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn cycle_average_vanishes_without_modulation() {
        for order in 1..=3 {
            let d = drive(10.0, 0.0, 0.3, order);
            for l in 1..=4 {
                assert!(d.cycle_averaged_coupling(l).unwrap().norm() < 1e-10);
            }
        }
    }

    #[test]
    fn cycle_average_magnitude_is_bessel() {
        for &order in &[1u32, 2] {
            for &gamma in &[0.5, 2.0, 3.5] {
                for &phi in &[0.0, PI / 8.0, PI / 4.0] {
                    let d = drive(10.0, gamma, phi, order);
                    let expected = bessel_j(order, gamma).abs();
                    for l in 1..=4 {
                        let z = d.cycle_averaged_coupling(l).unwrap();
                        assert!(
                            (z.norm() - expected).abs() < 1e-8,
                            "M={order} Gamma={gamma} phi={phi} l={l}: |z|={} vs {expected}",
                            z.norm()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn averaged_couplings_reproduce_effective_flux() {
        // plaquette circulation of the averaged couplings vs 4 M phi
        for &(order, phi) in &[(1u32, PI / 8.0), (1, PI / 4.0), (2, 0.2), (3, 0.11)] {
            let d = drive(10.0, 2.0, phi, order);
            let z: Vec<Complex64> = (1..=4)
                .map(|l| d.cycle_averaged_coupling(l).unwrap())
                .collect();
            let circulation = z[2].arg() - z[3].arg() + z[1].arg() - z[0].arg();
            let expected = 4.0 * order as f64 * phi;
            let mismatch = crate::fold_angle(circulation - expected).abs();
            assert!(mismatch < 1e-8, "M={order} phi={phi}: mismatch {mismatch}");
        }
    }

    #[test]
    fn effective_model_closed_form_matches_quadrature() {
        for &(order, gamma, phi) in &[
            (1u32, 2.0, PI / 4.0),
            (1, 3.0, PI / 8.0),
            (2, 1.3, 0.35),
            (3, 0.8, 0.1),
        ] {
            let d = drive(12.0, gamma, phi, order);
            let eff = d.effective_params(1.0);
            for l in 1..=4 {
                let closed = eff.bond_coupling(l).unwrap();
                let quad = d.cycle_averaged_coupling(l).unwrap();
                assert!(
                    (closed - quad).norm() < 1e-8,
                    "M={order} Gamma={gamma} phi={phi} l={l}: {closed} vs {quad}"
                );
            }
        }
    }

    #[test]
    fn effective_flux_values() {
        let eff = drive(10.0, 2.0, PI / 4.0, 1).effective_params(1.0);
        assert_abs_diff_eq!(eff.gamma_eff, PI, epsilon = 1e-12);
        let eff = drive(10.0, 1.0, PI / 8.0, 2).effective_params(1.0);
        assert_abs_diff_eq!(eff.gamma_eff, PI, epsilon = 1e-12);
        let eff = drive(10.0, 1.0, PI / 8.0, 1).effective_params(1.0);
        assert_abs_diff_eq!(eff.gamma_eff, PI / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn effective_hopping_vanishes_at_bessel_zero() {
        let zero = first_positive_zero(1);
        let eff = drive(10.0, zero, PI / 4.0, 1).effective_params(2.5);
        assert!(eff.kappa0.abs() < 1e-6 * 2.5);
        assert!(eff.kappa0.abs() < 1e-9);
    }

    #[test]
    fn effective_hopping_magnitude() {
        // |kappa_0| = |J_1(2)|, frozen from the series oracle
        let eff = drive(10.0, 2.0, 0.2, 1).effective_params(1.0);
        assert_abs_diff_eq!(eff.kappa0.abs(), 0.5767248077568734, epsilon = 1e-12);
        assert!(eff.kappa0.abs() <= 1.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn kappa0_bounded_and_flux_folded(
            gamma in 0.0f64..6.0,
            phi in -PI..PI,
            order in 1u32..4,
        ) {
            let d = drive(10.0, gamma, phi, order);
            let eff = d.effective_params(1.0);
            prop_assert!(eff.kappa0.abs() <= 1.0 + 1e-12);
            prop_assert!(eff.gamma_eff > -PI && eff.gamma_eff <= PI);
            let expected = crate::fold_angle(4.0 * order as f64 * phi);
            prop_assert!(crate::fold_angle(eff.gamma_eff - expected).abs() < 1e-12);
        }

        #[test]
        fn phase_factor_periodicity_random(
            gamma in 0.0f64..5.0,
            phi in -PI..PI,
            order in 1u32..4,
            t in 0.0f64..3.0,
        ) {
            let d = drive(9.0, gamma, phi, order);
            let period = d.period();
            for l in 1..=4 {
                let z0 = Complex64::from_polar(1.0, d.gauge_phase(l, t).unwrap());
                let z1 = Complex64::from_polar(1.0, d.gauge_phase(l, t + period).unwrap());
                prop_assert!((z0 - z1).norm() < 1e-12);
            }
        }
    }
}
