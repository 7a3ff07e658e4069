//! Floquet quasi-energy bands versus the normalized drive amplitude Gamma,
//! for the three characteristic phase offsets.
//!
//! ```bash
//! cargo run --release -p abcage --example quasienergy_sweep
//! ```

use abcage::floquet::{sweep, uniform_grid, SweepSpec};
use abcage::lattice::brillouin_grid;
use std::f64::consts::PI;

fn main() -> abcage::Result<()> {
    let gamma_values = uniform_grid(0.0, 4.0, 21);
    let q_values = brillouin_grid(32);
    let n_q = q_values.len();

    for (phi, label) in [
        (0.0, "phi = 0 (in phase)"),
        (PI / 8.0, "phi = pi/8"),
        (PI / 4.0, "phi = pi/4 (caging)"),
    ] {
        let spec = SweepSpec {
            gamma_values: gamma_values.clone(),
            phi,
            order: 1,
            omega_over_kappa: 15.0,
            q_values: q_values.clone(),
        };
        let rows = sweep(&spec)?;
        println!("\n{label}, omega/kappa = 15 -- per-band width over q (units of kappa)");
        println!(
            "{:>6}  {:>10} {:>10} {:>10}",
            "Gamma", "lower", "middle", "upper"
        );
        for (gi, &gamma) in spec.gamma_values.iter().enumerate() {
            let chunk = &rows[gi * n_q..(gi + 1) * n_q];
            let mut widths = [0.0f64; 3];
            for (band, width) in widths.iter_mut().enumerate() {
                let lo = chunk
                    .iter()
                    .map(|r| r.eps[band])
                    .fold(f64::INFINITY, f64::min);
                let hi = chunk
                    .iter()
                    .map(|r| r.eps[band])
                    .fold(f64::NEG_INFINITY, f64::max);
                *width = hi - lo;
            }
            if gi % 4 == 0 {
                println!(
                    "{gamma:6.2}  {:10.4} {:10.4} {:10.4}",
                    widths[0], widths[1], widths[2]
                );
            }
        }
    }
    println!("\nat phi = pi/4 all three bands stay flat for every Gamma (AB caging);");
    println!("at other phases the bands only pseudo-collapse near zeros of J_1.");
    Ok(())
}
