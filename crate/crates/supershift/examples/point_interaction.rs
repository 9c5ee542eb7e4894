//! Point interactions at the origin: boundary traces satisfy the transmission condition.

use supershift::evolution::{EvolutionProblem, InitialData, DEFAULT_THETA};
use supershift::greens::{classify_point_interaction, GreensFunctionSpec};
use supershift::quadrature::QuadratureConfig;
use supershift::C64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        ("dirichlet", 0.0, C64::new(-1.0, 0.0), C64::new(0.0, 0.0)),
        ("coupled", 0.4, C64::new(0.8, 0.0), C64::new(0.6, 0.0)),
        ("complex a", 1.1, C64::new(0.6, 0.8), C64::new(0.0, 0.0)),
    ];
    for (name, phi, a, b) in cases {
        let coeffs = classify_point_interaction(phi, a, b)?;
        let spec = GreensFunctionSpec::PointInteraction { phi, a_j: a, b_j: b };
        let prob = EvolutionProblem::new(spec, InitialData::plane_wave(1.2), DEFAULT_THETA, QuadratureConfig::default())?;
        let tr = prob.boundary_trace(0.25)?;
        println!("{name}: case {:?}", coeffs.case_id);
        println!("  Ψ(0+) = {:.8e}, Ψ(0−) = {:.8e}", tr.psi_plus, tr.psi_minus);
        println!("  transmission residual {:.1e}", prob.transmission_residual(0.25)?);
    }
    Ok(())
}
