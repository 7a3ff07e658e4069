//! Simulation toolkit for Aharonov-Bohm caging of light in driven quasi-1D
//! rhombic (diamond) waveguide lattices.
//!
//! The lattice is a chain of square plaquettes with one hub site (`a`) and two
//! rim sites (`b`, `c`) per unit cell. A synthetic magnetic flux threading the
//! plaquettes is produced by periodic modulation of the waveguide propagation
//! constants; at flux π per plaquette all bands flatten and an initially
//! localized excitation stays caged on a five-site cluster.
//!
//! What the crate computes:
//!
//! - static fluxed band structures and the compactly localized flat-band
//!   eigenstates ([`lattice`]),
//! - the modulation protocol, its exact gauge phases, and the cycle-averaged
//!   effective model with Bessel-renormalized hopping ([`drive`]),
//! - time-domain propagation in the lab, gauge, and effective frames with
//!   localization diagnostics ([`dynamics`]),
//! - Floquet quasi-energy spectra from monodromy matrices and parameter
//!   sweeps ([`floquet`]),
//! - translation of normalized parameters into femtosecond-laser-written
//!   waveguide design numbers ([`design`]).
//!
//! The `abcage` binary wires JSON run configurations to these modules and
//! writes reproducible CSV/JSON artifacts; see the `examples/` directory for
//! library-level entry points.

// parameter guards use negated comparisons so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bessel;
pub mod config;
pub mod design;
pub mod drive;
pub mod dynamics;
pub mod export;
pub mod floquet;
pub mod lattice;
pub(crate) mod linalg;
pub mod validate;

pub use drive::{DriveParams, EffectiveModel};
pub use dynamics::{Frame, LatticeField, StepControl, Trajectory, Window};
pub use floquet::QuasiEnergySpectrum;
pub use lattice::{BlochBands, Boundary, CompactState, FluxedRhombicParams, SiteKind};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An analytically impossible value was produced (signals a bug upstream).
    #[error("domain error: {0}")]
    Domain(String),

    /// A constructor or operation received parameters outside its contract.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Gauge-phase index outside 1..=4.
    #[error("invalid gauge-phase index {0}, expected 1..=4")]
    InvalidPhaseIndex(usize),

    /// Propagation norm left the declared drift bound.
    #[error("norm drift {drift:.3e} at t = {t:.6e} exceeds bound {bound:.3e}")]
    NormDrift { t: f64, drift: f64, bound: f64 },

    /// Monodromy propagator lost unitarity beyond the acceptable defect.
    #[error("unitarity defect {defect:.3e} exceeds {limit:.3e}; reduce the integration step")]
    UnitarityLoss { defect: f64, limit: f64 },

    /// Periodic quadrature failed to converge.
    #[error("quadrature did not converge after {evaluations} evaluations")]
    QuadratureNonConvergence { evaluations: usize },

    /// Operation requires a nonzero field.
    #[error("zero-norm lattice field")]
    ZeroNorm,

    /// Aggregated configuration validation report.
    #[error("invalid configuration:\n{0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Fold an angle into `(-pi, pi]`.
pub fn fold_angle(x: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let r = x.rem_euclid(two_pi);
    if r > std::f64::consts::PI {
        r - two_pi
    } else {
        r
    }
}

/// Fold a quasi-energy into the half-open window `[-omega/2, omega/2)`.
pub fn fold_half_open(eps: f64, omega: f64) -> f64 {
    let half = 0.5 * omega;
    (eps + half).rem_euclid(omega) - half
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn fold_angle_boundaries() {
        assert_eq!(fold_angle(PI), PI);
        assert_eq!(fold_angle(-PI), PI);
        assert!((fold_angle(3.0 * PI) - PI).abs() < 1e-15);
        assert!((fold_angle(-0.5) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn fold_half_open_branch_cut() {
        let omega = 2.0 * PI;
        // epsilon = +omega/2 lies outside the half-open window and wraps.
        assert_eq!(fold_half_open(PI, omega), -PI);
        assert_eq!(fold_half_open(-PI, omega), -PI);
        assert!((fold_half_open(0.3, omega) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn fold_half_open_idempotent() {
        let omega = 1.7;
        for k in -40..40 {
            let e = 0.083 * k as f64;
            let once = fold_half_open(e, omega);
            assert!((-0.5 * omega..0.5 * omega).contains(&once));
            assert_eq!(fold_half_open(once, omega), once);
        }
    }
}
