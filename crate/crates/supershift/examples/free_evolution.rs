//! Free evolution of a plane wave and of a superoscillating member on a small grid.

use supershift::evolution::{EvolutionProblem, InitialData, DEFAULT_THETA};
use supershift::greens::GreensFunctionSpec;
use supershift::quadrature::QuadratureConfig;
use supershift::C64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k = 1.5;
    let prob = EvolutionProblem::new(GreensFunctionSpec::Free, InitialData::plane_wave(k), DEFAULT_THETA, QuadratureConfig::default())?;
    for (t, x) in [(0.1, -2.0), (0.5, 0.3), (1.0, 4.0)] {
        let v = prob.evolve(t, x)?;
        let exact = C64::new(0.0, k * x - k * k * t).exp();
        println!("t = {t}, x = {x:>4}: Ψ = {:.15e}  |Ψ − e^{{ikx−ik²t}}| = {:.1e}", v.value, (v.value - exact).norm());
    }

    let so = EvolutionProblem::new(GreensFunctionSpec::Free, InitialData::superosc(1.0, 3.0, 16)?, DEFAULT_THETA, QuadratureConfig::default())?;
    let field = so.evolve_grid(&[0.05, 0.2], &[-1.0, -0.5, 0.5, 1.0])?;
    for (it, t) in field.t_grid.iter().enumerate() {
        let row: Vec<String> = (0..field.x_grid.len()).map(|ix| format!("{:.4}", field.get(it, ix).value.norm())).collect();
        println!("t = {t}: |Ψ| = [{}]", row.join(", "));
    }
    println!("{} integrand evaluations, {} unconverged", field.meta.evaluations, field.meta.unconverged);
    Ok(())
}
