//! Static band structure of the rhombic chain: dispersive at zero flux,
//! three flat bands at flux pi.
//!
//! ```bash
//! cargo run --release -p abcage --example static_bands
//! ```

use abcage::lattice::{bloch_bands, static_dispersion, Boundary, FluxedRhombicParams};
use std::f64::consts::PI;

fn main() -> abcage::Result<()> {
    let kappa = 1.0;

    println!("dispersion E(q)/kappa on a coarse momentum grid\n");
    println!("{:>8}  {:>24}  {:>24}", "q", "gamma = 0", "gamma = pi");
    for j in 0..=8 {
        let q = -PI + 2.0 * PI * j as f64 / 8.0;
        let (lo0, _, hi0) = static_dispersion(kappa, 0.0, q)?;
        let (lop, _, hip) = static_dispersion(kappa, PI, q)?;
        println!("{q:8.4}  [{lo0:10.6}, 0, {hi0:9.6}]  [{lop:10.6}, 0, {hip:9.6}]",);
    }

    println!("\nbandwidths over a 256-point Brillouin grid:");
    for gamma in [0.0, PI / 2.0, PI] {
        let params = FluxedRhombicParams::new(kappa, gamma, 8, Boundary::Periodic)?;
        let bands = bloch_bands(&params, 256)?;
        let (w_lo, w_mid, w_hi) = bands.bandwidths();
        println!(
            "  gamma = {gamma:8.5}:  lower {w_lo:10.3e}   middle {w_mid:10.3e}   upper {w_hi:10.3e}"
        );
    }
    println!("\nat gamma = pi every band is flat: the lattice is an Aharonov-Bohm cage.");
    Ok(())
}
