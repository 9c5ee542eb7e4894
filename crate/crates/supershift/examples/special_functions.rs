//! Λ(z) = e^{z²} erfc z and the Bessel/Hankel functions used by the kernels.

use supershift::specfun::{bessel_j, hankel2, lambda_fn, BesselOrder};
use supershift::C64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("Λ(z) along the ray arg z = 3π/4 (erfc alone overflows here)");
    for r in [1.0, 5.0, 20.0, 100.0] {
        let z = C64::from_polar(r, 0.75 * std::f64::consts::PI);
        println!("  |z| = {r:>5}  Λ = {:.6e}", lambda_fn(z)?);
    }

    // J_{1/2}(w) = √(2/πw) sin w
    let half = BesselOrder::real(0.5)?;
    let w = C64::new(3.0, -0.5);
    let exact = (2.0 / (std::f64::consts::PI * w)).sqrt() * w.sin();
    println!("J_1/2({w}) = {:.15e}, closed form {:.15e}", bessel_j(half, w)?, exact);

    for lambda in [-0.1875, -1.0, 2.0] {
        let nu = BesselOrder::from_lambda(lambda)?;
        println!("λ = {lambda:>7}: ν = {:.6}, H2_ν(1.5) = {:.10e}", nu.value(), hankel2(nu, C64::new(1.5, 0.0))?);
    }
    Ok(())
}
