//! Ψ(t,·;F_n) approaching Ψ(t,·;e^{iκ·}) as n grows, with the linearity check.

use supershift::evolution::{Compact, EvolutionProblem, InitialData, DEFAULT_THETA};
use supershift::greens::GreensFunctionSpec;
use supershift::quadrature::QuadratureConfig;
use supershift::superosc::PlaneWaves;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let prob = EvolutionProblem::new(GreensFunctionSpec::Free, InitialData::plane_wave(0.0), DEFAULT_THETA, QuadratureConfig::default())?;
    let compact = Compact::new(0.5, 2.0, 31)?;
    let rows = prob.propagator().supershift_scan(&PlaneWaves, 1.0, 3.0, &[4, 8, 16, 32], 0.2, &compact)?;
    println!("{:>4} {:>12} {:>12}", "n", "sup error", "linearity");
    for r in rows {
        println!("{:>4} {:>12.4e} {:>12.2e}", r.n, r.sup_error, r.linearity_residual);
    }
    Ok(())
}
