//! λ/x² potentials: the half-lines decouple and Ψ vanishes at the origin.

use supershift::evolution::{EvolutionProblem, InitialData, DEFAULT_THETA};
use supershift::greens::GreensFunctionSpec;
use supershift::quadrature::QuadratureConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for spec in [GreensFunctionSpec::CentrifugalAttractive { lambda: -0.1875 }, GreensFunctionSpec::CentrifugalRepulsive { lambda: 2.0 }] {
        let prob = EvolutionProblem::new(spec, InitialData::plane_wave(1.0), DEFAULT_THETA, QuadratureConfig::default())?;
        println!("{spec:?}");
        for x in [1e-3, 0.1, 1.0, 3.0] {
            let v = prob.evolve(0.3, x)?;
            println!("  Ψ(0.3, {x:>5}) = {:.12e}", v.value);
        }
        let (plus, minus) = prob.boundary_values(0.3)?;
        println!("  Ψ(0.3, 0±) = {:.2e}, {:.2e}", plus.norm(), minus.norm());
    }
    Ok(())
}
