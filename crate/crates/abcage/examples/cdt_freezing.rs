//! Coherent destruction of tunneling: at a zero of J_M the effective hopping
//! vanishes and light freezes in its input guide for ANY phase offset,
//! unlike flux caging, which needs phi = pi/(4M).
//!
//! ```bash
//! cargo run --release -p abcage --example cdt_freezing
//! ```

use abcage::bessel::{bessel_j, first_positive_zero};
use abcage::drive::DriveParams;
use abcage::dynamics::{integrate, return_intensity, Frame, LatticeField, StepControl, Window};
use abcage::lattice::{Boundary, SiteKind};
use std::f64::consts::PI;

fn main() -> abcage::Result<()> {
    let gamma = first_positive_zero(1);
    println!("first zero of J_1: Gamma = {gamma:.10}");
    println!(
        "J_1 there: {:.2e}  ->  kappa_0 = kappa J_1(Gamma) ~ 0\n",
        bessel_j(1, gamma)
    );

    let window = Window::new(-12, 12)?;
    let initial = LatticeField::single_site(window, Boundary::Open, SiteKind::A, 0)?;
    println!("min |a_0(t)|^2 over kappa t <= 10 at omega/kappa = 15:");
    for phi in [0.0, PI / 8.0, PI / 4.0] {
        let drive = DriveParams::resonant(0.0, 15.0, gamma * 15.0, phi, 1)?;
        let traj = integrate(
            Frame::Gauged,
            &initial,
            1.0,
            &drive,
            10.0,
            None,
            &StepControl::default(),
        )?;
        let ret = return_intensity(&traj, 0)?;
        let min = ret.into_iter().fold(f64::INFINITY, f64::min);
        println!("  phi = {phi:7.5}:  {min:.4}");
    }

    println!("\nfor contrast, the same drive amplitude away from the zero (Gamma = 2):");
    let drive = DriveParams::resonant(0.0, 15.0, 2.0 * 15.0, 0.0, 1)?;
    let traj = integrate(
        Frame::Gauged,
        &initial,
        1.0,
        &drive,
        10.0,
        None,
        &StepControl::default(),
    )?;
    let ret = return_intensity(&traj, 0)?;
    println!(
        "  phi = 0, Gamma = 2:  min |a_0|^2 = {:.4}  (light leaves the guide)",
        ret.into_iter().fold(f64::INFINITY, f64::min)
    );
    Ok(())
}
