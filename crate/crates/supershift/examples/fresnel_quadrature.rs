//! Rotated-contour Fresnel integrals against their Gaussian-regularized real-line forms.

use supershift::quadrature::{
    fresnel_fullline, fresnel_fullline_regularized, regularized_real, QuadratureConfig, RealRange, Regularizer, RotatedIntegrand, SectorSpec,
};
use supershift::superosc::GrowthBound;
use supershift::C64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (a, x) = (1.0 / (4.0 * 0.3), 0.7);
    let f = |z: C64| (C64::new(0.0, 2.0) * z).exp();
    let ri = RotatedIntegrand::new(f, GrowthBound::new(1.0, 2.0, 1.0)?, a, x)?;
    let cfg = QuadratureConfig::default();

    // ∫ e^{ia(y−x)²} e^{2iy} dy = √(iπ/a) e^{2ix − i/a}
    let exact = (C64::new(0.0, std::f64::consts::PI / a)).sqrt() * C64::new(0.0, 2.0 * x - 1.0 / a).exp();
    for theta in [std::f64::consts::FRAC_PI_8, std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_3] {
        let out = fresnel_fullline(&ri, &SectorSpec::both(theta)?, &cfg)?;
        println!("θ = {theta:.4}: {:.15e}  |err| = {:.1e}  nodes {}", out.value, (out.value - exact).norm(), out.evaluations);
    }

    // with e^{−ε(z−x)²} included the two forms agree for ε < 2a/tan θ
    let loose = QuadratureConfig { rel_tol: 1e-10, ..cfg };
    let sector = SectorSpec::both(std::f64::consts::FRAC_PI_4)?;
    for eps in [0.04, 0.01] {
        let reg = Regularizer { eps, y0: x };
        let real = regularized_real(&ri, reg, RealRange::Full, Some(sector.theta), &loose)?;
        let rot = fresnel_fullline_regularized(&ri, &sector, reg, &cfg)?;
        println!("ε = {eps}: real line {:.12e}  rotated {:.12e}  gap {:.1e}", real.value, rot.value, (real.value - rot.value).norm());
    }
    Ok(())
}
