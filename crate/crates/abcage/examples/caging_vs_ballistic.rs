//! Propagation of a single-site excitation through the modulated lattice:
//! quadrature-phase modulation cages the light, in-phase modulation lets it
//! spread ballistically.
//!
//! ```bash
//! cargo run --release -p abcage --example caging_vs_ballistic
//! ```

use abcage::bessel::bessel_j;
use abcage::drive::DriveParams;
use abcage::dynamics::{
    cage_leakage, default_cage, integrate, return_intensity, Frame, LatticeField, StepControl,
    Window,
};
use abcage::lattice::{Boundary, SiteKind};
use std::f64::consts::PI;

fn main() -> abcage::Result<()> {
    let omega = 10.0; // units of kappa
    let gamma = 2.0;
    let window = Window::new(-30, 30)?;
    let initial = LatticeField::single_site(window, Boundary::Open, SiteKind::A, 0)?;
    let ctrl = StepControl::default();

    for (phi, label) in [
        (PI / 4.0, "caged   (phi = pi/4)"),
        (0.0, "ballistic (phi = 0)"),
    ] {
        let drive = DriveParams::resonant(0.0, omega, gamma * omega, phi, 1)?;
        let traj = integrate(Frame::Gauged, &initial, 1.0, &drive, 10.0, None, &ctrl)?;
        let leak = cage_leakage(&traj, &default_cage(0))?;
        let pr = traj.participation_ratios();
        println!(
            "{label}:  leakage max {:6.4}   PR max {:6.2}   PR final {:6.2}",
            leak.iter().cloned().fold(0.0f64, f64::max),
            pr.iter().cloned().fold(0.0f64, f64::max),
            pr.last().unwrap(),
        );
    }

    println!("\n|a_0(t)|^2 in the caged run vs the five-site prediction cos^2(2 kappa_0 t):");
    let drive = DriveParams::resonant(0.0, omega, gamma * omega, PI / 4.0, 1)?;
    let traj = integrate(Frame::Gauged, &initial, 1.0, &drive, 10.0, None, &ctrl)?;
    let ret = return_intensity(&traj, 0)?;
    let kappa0 = bessel_j(1, gamma);
    println!("{:>8}  {:>10}  {:>10}", "kappa t", "measured", "predicted");
    for (i, (&t, &r)) in traj.times.iter().zip(&ret).enumerate() {
        if i % 16 == 0 {
            println!(
                "{t:8.3}  {r:10.5}  {:10.5}",
                (2.0 * kappa0 * t).cos().powi(2)
            );
        }
    }
    println!(
        "\nthe oscillation frequency tracks 2 kappa J_1(Gamma) = {:.4} kappa, with a",
        2.0 * kappa0
    );
    println!("small 1/omega^2 frequency shift visible as slow dephasing at omega/kappa = 10.");
    Ok(())
}
