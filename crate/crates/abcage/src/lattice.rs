//! Static rhombic chain with a uniform synthetic flux per plaquette.
//!
//! Unit cell `n` holds a hub site `a_n` and two rim sites `b_n`, `c_n`; the
//! hub couples to `b_n`, `b_{n-1}`, `c_n`, `c_{n-1}`. The flux enters through
//! a Peierls phase on the `a_n -> c_n` bond, and the Bloch bands are
//!
//! ```text
//! E_0 = 0,   E_+- = +-2 kappa sqrt(1 + cos(gamma/2) cos(q - gamma/2))
//! ```
//!
//! At `gamma = pi` all three bands are flat (E in {0, +-2 kappa}) and the
//! eigenstates can be chosen compactly localized on two adjacent cells.

use crate::linalg::hermitian_eigenvalues;
use crate::{fold_angle, Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Chain termination for finite lattices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    Open,
}

/// Which of the three sites in a unit cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SiteKind {
    /// Hub (middle row).
    A,
    /// Upper rim.
    B,
    /// Lower rim.
    C,
}

impl SiteKind {
    pub fn label(self) -> &'static str {
        match self {
            SiteKind::A => "a",
            SiteKind::B => "b",
            SiteKind::C => "c",
        }
    }
}

/// Static lattice description: hopping rate, flux per plaquette, size.
#[derive(Debug, Clone, Copy)]
pub struct FluxedRhombicParams {
    kappa: f64,
    gamma: f64,
    n_cells: usize,
    boundary: Boundary,
}

impl FluxedRhombicParams {
    /// `gamma` is folded into `(-pi, pi]` on construction.
    pub fn new(kappa: f64, gamma: f64, n_cells: usize, boundary: Boundary) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "hopping rate kappa must be positive, got {kappa}"
            )));
        }
        if !gamma.is_finite() {
            return Err(Error::InvalidParameter("flux gamma must be finite".into()));
        }
        if n_cells < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 unit cells, got {n_cells}"
            )));
        }
        Ok(Self {
            kappa,
            gamma: fold_angle(gamma),
            n_cells,
            boundary,
        })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }
}

/// Bloch bands on a momentum grid; one `(E_-, E_0, E_+)` triple per `q`.
#[derive(Debug, Clone)]
pub struct BlochBands {
    pub q_grid: Vec<f64>,
    pub bands: Vec<(f64, f64, f64)>,
}

impl BlochBands {
    /// Max-minus-min of each band over the grid.
    pub fn bandwidths(&self) -> (f64, f64, f64) {
        let width = |pick: fn(&(f64, f64, f64)) -> f64| {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for b in &self.bands {
                let v = pick(b);
                lo = lo.min(v);
                hi = hi.max(v);
            }
            hi - lo
        };
        (width(|b| b.0), width(|b| b.1), width(|b| b.2))
    }
}

/// A compactly supported eigenstate: amplitudes on `(site, cell)` pairs.
#[derive(Debug, Clone, Serialize)]
pub struct CompactState {
    pub support: Vec<(SiteKind, i64)>,
    pub amplitudes: Vec<Complex64>,
    pub energy: f64,
}

impl CompactState {
    /// The same eigenstate shifted by `shift` unit cells.
    pub fn translated(&self, shift: i64) -> CompactState {
        CompactState {
            support: self.support.iter().map(|&(k, n)| (k, n + shift)).collect(),
            amplitudes: self.amplitudes.clone(),
            energy: self.energy,
        }
    }
}

/// Tolerance below which the square-root argument of the dispersion is
/// clamped to zero; more negative values signal a computation bug.
pub const DISPERSION_CLAMP: f64 = 1e-12;

/// The three static band energies at momentum `q`.
///
/// Returns `(E_-, 0, E_+)` with `E_+- = +-2 kappa sqrt(1 + cos(gamma/2)
/// cos(q - gamma/2))`; the unfluxed bands are the `gamma = 0` case.
pub fn static_dispersion(kappa: f64, gamma: f64, q: f64) -> Result<(f64, f64, f64)> {
    if !(kappa > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "kappa must be positive, got {kappa}"
        )));
    }
    let arg = 1.0 + (0.5 * gamma).cos() * (q - 0.5 * gamma).cos();
    if arg < -DISPERSION_CLAMP {
        return Err(Error::Domain(format!(
            "dispersion square-root argument {arg} < -{DISPERSION_CLAMP}"
        )));
    }
    let e = 2.0 * kappa * arg.max(0.0).sqrt();
    Ok((-e, 0.0, e))
}

/// Uniform grid of `count` momenta in `[-pi, pi)`.
pub fn brillouin_grid(count: usize) -> Vec<f64> {
    let step = 2.0 * std::f64::consts::PI / count as f64;
    (0..count)
        .map(|j| -std::f64::consts::PI + j as f64 * step)
        .collect()
}

/// Bands of `params` sampled on a `n_q`-point Brillouin grid.
pub fn bloch_bands(params: &FluxedRhombicParams, n_q: usize) -> Result<BlochBands> {
    let q_grid = brillouin_grid(n_q);
    let bands = q_grid
        .iter()
        .map(|&q| static_dispersion(params.kappa(), params.gamma(), q))
        .collect::<Result<Vec<_>>>()?;
    Ok(BlochBands { q_grid, bands })
}

fn site_index(n_cells: usize, kind: SiteKind, cell: usize) -> usize {
    debug_assert!(cell < n_cells);
    3 * cell
        + match kind {
            SiteKind::A => 0,
            SiteKind::B => 1,
            SiteKind::C => 2,
        }
}

/// Real-space Peierls Hamiltonian, dimension `3 n_cells`.
///
/// Gauge choice: the whole plaquette phase sits on the `a_n -> c_n` bond
/// (`H[c_n, a_n] = kappa e^{i gamma}`); every other bond is `kappa`. Basis
/// ordering is `(a_0, b_0, c_0, a_1, ...)`. With open boundary the wrap-around
/// bonds are simply absent.
pub fn build_static_hamiltonian(params: &FluxedRhombicParams) -> DMatrix<Complex64> {
    let n = params.n_cells();
    let kappa = Complex64::new(params.kappa(), 0.0);
    let phased = kappa * Complex64::from_polar(1.0, params.gamma());
    let mut h = DMatrix::<Complex64>::zeros(3 * n, 3 * n);
    let mut set = |row: usize, col: usize, v: Complex64| {
        h[(row, col)] = v;
        h[(col, row)] = v.conj();
    };
    for cell in 0..n {
        let a = site_index(n, SiteKind::A, cell);
        let b = site_index(n, SiteKind::B, cell);
        let c = site_index(n, SiteKind::C, cell);
        set(b, a, kappa);
        set(c, a, phased);
        let next = match (cell + 1 < n, params.boundary()) {
            (true, _) => Some(cell + 1),
            (false, Boundary::Periodic) => Some(0),
            (false, Boundary::Open) => None,
        };
        if let Some(next) = next {
            let a_next = site_index(n, SiteKind::A, next);
            set(a_next, b, kappa);
            set(a_next, c, kappa);
        }
    }
    h
}

/// Sorted eigenvalues of the static Hamiltonian.
pub fn static_spectrum(params: &FluxedRhombicParams) -> Vec<f64> {
    hermitian_eigenvalues(&build_static_hamiltonian(params))
}

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// The three compact flat-band eigenstates of the `gamma = pi` lattice, with
/// energies `{0, +2 kappa, -2 kappa}`, anchored on cells `{-1, 0}`.
///
/// These are the eigenvectors of the two-plaquette block around hub `a_0`
/// that also annihilate the hopping into `a_{-1}` and `a_{+1}`; translating
/// them cell-by-cell reproduces the full degenerate bands.
pub fn compact_flat_band_states(kappa: f64) -> [CompactState; 3] {
    let re = |x: f64| Complex64::new(x, 0.0);
    let rim = [
        (SiteKind::B, -1i64),
        (SiteKind::C, -1),
        (SiteKind::B, 0),
        (SiteKind::C, 0),
    ];
    let zero = CompactState {
        support: rim.to_vec(),
        amplitudes: vec![re(0.5), re(0.5), re(-0.5), re(0.5)],
        energy: 0.0,
    };
    let mut support = vec![rim[0], rim[1], (SiteKind::A, 0), rim[2], rim[3]];
    let rim_amp = 0.5 / SQRT_2;
    let plus = CompactState {
        support: support.clone(),
        amplitudes: vec![
            re(rim_amp),
            re(rim_amp),
            re(1.0 / SQRT_2),
            re(rim_amp),
            re(-rim_amp),
        ],
        energy: 2.0 * kappa,
    };
    support = plus.support.clone();
    let minus = CompactState {
        support,
        amplitudes: vec![
            re(rim_amp),
            re(rim_amp),
            re(-1.0 / SQRT_2),
            re(rim_amp),
            re(-rim_amp),
        ],
        energy: -2.0 * kappa,
    };
    [zero, plus, minus]
}

/// Embed a compact state into the site basis of a periodic chain, cell
/// indices taken modulo `n_cells`.
pub fn embed_compact_state(state: &CompactState, n_cells: usize) -> nalgebra::DVector<Complex64> {
    let mut v = nalgebra::DVector::<Complex64>::zeros(3 * n_cells);
    for (&(kind, cell), &amp) in state.support.iter().zip(&state.amplitudes) {
        let cell = cell.rem_euclid(n_cells as i64) as usize;
        v[site_index(n_cells, kind, cell)] += amp;
    }
    v
}
