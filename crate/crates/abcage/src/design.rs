//! Translation between normalized lattice parameters and physical
//! femtosecond-laser-written waveguide design numbers.
//!
//! Everything here is in SI units (meters and inverse meters); the CLI layer
//! parses explicit unit suffixes before calling in. The gradient is realized
//! by circular waveguide bending with radius `R = 2 pi n_s d / (sigma
//! lambda)`, the rim-row index modulation has spatial period `T = 2 pi /
//! omega` and depth `dn = Gamma lambda / T`.

use crate::{Error, Result};
use serde::Serialize;

/// Physical description of a fabricated lattice probe.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PhysicalDesign {
    /// Probe wavelength (m).
    pub wavelength: f64,
    /// Substrate refractive index.
    pub substrate_index: f64,
    /// Half the horizontal spacing between same-row guides (m): the guides
    /// sit `2d` apart, and `d` is the lever arm of the bending gradient.
    pub half_spacing: f64,
    /// Nearest-neighbor coupling rate (1/m).
    pub kappa: f64,
    /// Index gradient rate (1/m).
    pub sigma: f64,
    /// Longitudinal modulation frequency (1/m).
    pub omega: f64,
    /// Normalized modulation amplitude `Gamma = A / omega`.
    pub gamma_norm: f64,
}

impl PhysicalDesign {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        for (name, value) in [
            ("wavelength", self.wavelength),
            ("half_spacing", self.half_spacing),
            ("kappa", self.kappa),
            ("sigma", self.sigma),
            ("omega", self.omega),
        ] {
            if !(value.is_finite() && value > 0.0) {
                problems.push(format!("{name} must be positive, got {value}"));
            }
        }
        if !(self.substrate_index > 1.0) {
            problems.push(format!(
                "substrate_index must exceed 1, got {}",
                self.substrate_index
            ));
        }
        if !(self.gamma_norm >= 0.0) {
            problems.push(format!(
                "gamma_norm must be nonnegative, got {}",
                self.gamma_norm
            ));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems.join("\n")))
        }
    }

    /// Dimensionless drive parameters of this design.
    pub fn normalized(&self) -> NormalizedDrive {
        NormalizedDrive {
            omega_over_kappa: self.omega / self.kappa,
            sigma_over_omega: self.sigma / self.omega,
            gamma_norm: self.gamma_norm,
        }
    }

    /// Rebuild a physical design from normalized parameters and the four
    /// reference scales they do not determine.
    pub fn from_normalized(
        norm: &NormalizedDrive,
        kappa: f64,
        wavelength: f64,
        substrate_index: f64,
        half_spacing: f64,
    ) -> Self {
        let omega = norm.omega_over_kappa * kappa;
        Self {
            wavelength,
            substrate_index,
            half_spacing,
            kappa,
            sigma: norm.sigma_over_omega * omega,
            omega,
            gamma_norm: norm.gamma_norm,
        }
    }
}

/// Normalized (kappa-free) drive parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizedDrive {
    pub omega_over_kappa: f64,
    pub sigma_over_omega: f64,
    pub gamma_norm: f64,
}

/// Fabrication-facing quantities derived from a design.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FabricationParameters {
    /// Bending radius realizing the gradient (m).
    pub bend_radius: f64,
    /// Longitudinal modulation period (m).
    pub modulation_period: f64,
    /// Index modulation depth (dimensionless).
    pub index_depth: f64,
}

/// `R = 2 pi n_s d / (sigma lambda)`, `T = 2 pi / omega`,
/// `dn = Gamma lambda / T`.
pub fn fabrication_parameters(design: &PhysicalDesign) -> Result<FabricationParameters> {
    design.validate()?;
    let two_pi = 2.0 * std::f64::consts::PI;
    let modulation_period = two_pi / design.omega;
    Ok(FabricationParameters {
        bend_radius: two_pi * design.substrate_index * design.half_spacing
            / (design.sigma * design.wavelength),
        modulation_period,
        index_depth: design.gamma_norm * design.wavelength / modulation_period,
    })
}

/// Physical array length for a normalized propagation distance `kappa t`.
pub fn array_length(design: &PhysicalDesign, kappa_t: f64) -> f64 {
    kappa_t / design.kappa
}
