//! JSON run configurations for the command-line interface.
//!
//! Every config validates completely before any computation starts; failures
//! come back as one aggregated report. Dimensionful quantities carry explicit
//! unit strings and are converted to SI on load; simulation configs are
//! normalized to `kappa = 1` and say so in their field names.

use crate::design::PhysicalDesign;
use crate::drive::DriveParams;
use crate::dynamics::{Frame, LatticeField, Window};
use crate::lattice::{Boundary, SiteKind};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// A number with an explicit unit suffix, e.g. `{"value": 10, "unit": "cm^-1"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quantity {
    pub value: f64,
    pub unit: String,
}

impl Quantity {
    /// Convert a rate to 1/m. Accepted units: `m^-1`, `cm^-1`, `mm^-1`, `um^-1`.
    pub fn rate_si(&self) -> std::result::Result<f64, String> {
        let factor = match self.unit.as_str() {
            "m^-1" | "1/m" => 1.0,
            "cm^-1" | "1/cm" => 1e2,
            "mm^-1" | "1/mm" => 1e3,
            "um^-1" | "1/um" => 1e6,
            other => return Err(format!("unknown rate unit '{other}'")),
        };
        Ok(self.value * factor)
    }

    /// Convert a length to meters. Accepted units: `m`, `cm`, `mm`, `um`, `nm`.
    pub fn length_si(&self) -> std::result::Result<f64, String> {
        let factor = match self.unit.as_str() {
            "m" => 1.0,
            "cm" => 1e-2,
            "mm" => 1e-3,
            "um" => 1e-6,
            "nm" => 1e-9,
            other => return Err(format!("unknown length unit '{other}'")),
        };
        Ok(self.value * factor)
    }
}

/// Static band-structure run: bands CSV plus the compact flat-band states.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandsConfig {
    pub kappa: Quantity,
    pub gamma_rad: f64,
    pub q_count: usize,
    pub bands_csv: String,
    pub states_json: String,
}

impl BandsConfig {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        match self.kappa.rate_si() {
            Ok(k) if k > 0.0 => {}
            Ok(k) => problems.push(format!("kappa must be positive, got {k} m^-1")),
            Err(e) => problems.push(format!("kappa: {e}")),
        }
        if !self.gamma_rad.is_finite() {
            problems.push("gamma_rad must be finite".into());
        }
        if self.q_count < 2 {
            problems.push(format!("q_count must be at least 2, got {}", self.q_count));
        }
        finish(problems)
    }

    pub fn kappa_si(&self) -> f64 {
        self.kappa.rate_si().expect("validated")
    }
}

/// Quasi-energy sweep run (normalized units, energies in units of kappa).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuasiEnergyConfig {
    pub order: u32,
    pub phi_rad: f64,
    pub omega_over_kappa: f64,
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub gamma_count: usize,
    pub q_count: usize,
    pub sweep_csv: String,
}

impl QuasiEnergyConfig {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.order == 0 {
            problems.push("order must be a positive integer".into());
        }
        if !(self.omega_over_kappa > 0.0) {
            problems.push(format!(
                "omega_over_kappa must be positive, got {}",
                self.omega_over_kappa
            ));
        }
        if !(self.gamma_min >= 0.0 && self.gamma_max > self.gamma_min) {
            problems.push(format!(
                "need 0 <= gamma_min < gamma_max, got [{}, {}]",
                self.gamma_min, self.gamma_max
            ));
        }
        if self.gamma_count < 2 {
            problems.push("gamma_count must be at least 2".into());
        }
        if self.q_count < 2 {
            problems.push("q_count must be at least 2".into());
        }
        if !self.phi_rad.is_finite() {
            problems.push("phi_rad must be finite".into());
        }
        finish(problems)
    }
}

/// Initial excitation of a propagation run.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialSpec {
    SingleSite {
        site: SiteKind,
        cell: i64,
    },
    CompactState {
        which: CompactWhich,
    },
    Gaussian {
        center: f64,
        width: f64,
        momentum: f64,
    },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompactWhich {
    Zero,
    Plus,
    Minus,
}

/// Propagation frame, plus the lab-vs-gauged cross-check mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrameSpec {
    Lab,
    Gauged,
    Effective,
    CrossCheck,
}

/// Propagation run (normalized units: `kappa = 1`, distances in `1/kappa`).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagateConfig {
    pub frame: FrameSpec,
    pub order: u32,
    pub phi_rad: f64,
    pub omega_over_kappa: f64,
    pub gamma_norm: f64,
    pub kappa_t_end: f64,
    pub n_min: i64,
    pub n_max: i64,
    pub boundary: Boundary,
    pub initial: InitialSpec,
    /// Sampling cadence in drive periods; default 1/8.
    #[serde(default)]
    pub sample_every_periods: Option<f64>,
    pub trajectory_csv: String,
    pub summary_csv: String,
}

impl PropagateConfig {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.order == 0 {
            problems.push("order must be a positive integer".into());
        }
        if !(self.omega_over_kappa > 0.0) {
            problems.push(format!(
                "omega_over_kappa must be positive, got {}",
                self.omega_over_kappa
            ));
        }
        if !(self.gamma_norm >= 0.0) {
            problems.push(format!(
                "gamma_norm must be nonnegative, got {}",
                self.gamma_norm
            ));
        }
        if !(self.kappa_t_end > 0.0) {
            problems.push(format!(
                "kappa_t_end must be positive, got {}",
                self.kappa_t_end
            ));
        }
        if self.n_max < self.n_min + 1 {
            problems.push(format!(
                "window [{}, {}] must span at least 2 cells",
                self.n_min, self.n_max
            ));
        }
        if let Some(se) = self.sample_every_periods {
            if !(se > 0.0) {
                problems.push("sample_every_periods must be positive".into());
            }
        }
        if let InitialSpec::SingleSite { cell, .. } = self.initial {
            if cell < self.n_min || cell > self.n_max {
                problems.push(format!("initial cell {cell} outside the window"));
            }
        }
        if let InitialSpec::Gaussian { width, .. } = self.initial {
            if !(width > 0.0) {
                problems.push("gaussian width must be positive".into());
            }
        }
        finish(problems)
    }

    pub fn drive(&self) -> Result<DriveParams> {
        let omega = self.omega_over_kappa;
        DriveParams::resonant(
            0.0,
            omega,
            self.gamma_norm * omega,
            self.phi_rad,
            self.order,
        )
    }

    pub fn window(&self) -> Result<Window> {
        Window::new(self.n_min, self.n_max)
    }

    pub fn initial_field(&self) -> Result<LatticeField> {
        let window = self.window()?;
        match &self.initial {
            InitialSpec::SingleSite { site, cell } => {
                LatticeField::single_site(window, self.boundary, *site, *cell)
            }
            InitialSpec::CompactState { which } => {
                let states = crate::lattice::compact_flat_band_states(1.0);
                let state = match which {
                    CompactWhich::Zero => &states[0],
                    CompactWhich::Plus => &states[1],
                    CompactWhich::Minus => &states[2],
                };
                LatticeField::from_compact_state(window, self.boundary, state)
            }
            InitialSpec::Gaussian {
                center,
                width,
                momentum,
            } => LatticeField::gaussian(window, self.boundary, *center, *width, *momentum),
        }
    }

    /// The integration frames this run executes.
    pub fn frames(&self) -> Vec<Frame> {
        match self.frame {
            FrameSpec::Lab => vec![Frame::Lab],
            FrameSpec::Gauged => vec![Frame::Gauged],
            FrameSpec::Effective => vec![Frame::Effective],
            FrameSpec::CrossCheck => vec![Frame::Gauged, Frame::Lab],
        }
    }
}

/// Design-calculator run (physical units with explicit suffixes).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignConfig {
    pub wavelength: Quantity,
    pub substrate_index: f64,
    pub half_spacing: Quantity,
    pub kappa: Quantity,
    pub sigma: Quantity,
    pub omega: Quantity,
    pub gamma_norm: f64,
    /// Normalized propagation distance for the array-length report.
    #[serde(default)]
    pub kappa_t_end: Option<f64>,
    /// Optional JSON report path (the text report always goes to stdout).
    #[serde(default)]
    pub report_json: Option<String>,
}

impl DesignConfig {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if let Err(e) = self.wavelength.length_si() {
            problems.push(format!("wavelength: {e}"));
        }
        if let Err(e) = self.half_spacing.length_si() {
            problems.push(format!("half_spacing: {e}"));
        }
        for (name, q) in [
            ("kappa", &self.kappa),
            ("sigma", &self.sigma),
            ("omega", &self.omega),
        ] {
            if let Err(e) = q.rate_si() {
                problems.push(format!("{name}: {e}"));
            }
        }
        if !problems.is_empty() {
            return Err(Error::Config(problems.join("\n")));
        }
        self.design()?.validate()
    }

    pub fn design(&self) -> Result<PhysicalDesign> {
        let to_err = |e: String| Error::Config(e);
        Ok(PhysicalDesign {
            wavelength: self.wavelength.length_si().map_err(to_err)?,
            substrate_index: self.substrate_index,
            half_spacing: self.half_spacing.length_si().map_err(to_err)?,
            kappa: self.kappa.rate_si().map_err(to_err)?,
            sigma: self.sigma.rate_si().map_err(to_err)?,
            omega: self.omega.rate_si().map_err(to_err)?,
            gamma_norm: self.gamma_norm,
        })
    }
}

fn finish(problems: Vec<String>) -> Result<()> {
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::Config(problems.join("\n")))
    }
}

/// Parse and validate a config of type `C` from a JSON string.
pub fn load<C: serde::de::DeserializeOwned>(json: &str) -> Result<C> {
    serde_json::from_str(json).map_err(|e| Error::Config(format!("JSON parse error: {e}")))
}
