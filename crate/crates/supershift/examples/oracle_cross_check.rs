//! Contour solution against the Crank–Nicolson oracle on a compact away from 0.

use supershift::evolution::{Compact, EvolutionProblem, InitialData, DEFAULT_THETA};
use supershift::greens::GreensFunctionSpec;
use supershift::oracle::{cross_validate, FdScheme};
use supershift::quadrature::QuadratureConfig;
use supershift::C64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scheme = FdScheme::default();
    let compact = Compact::new(0.5, 2.0, 31)?;
    let dirichlet = GreensFunctionSpec::PointInteraction { phi: 0.0, a_j: C64::new(-1.0, 0.0), b_j: C64::new(0.0, 0.0) };
    for spec in [GreensFunctionSpec::Free, dirichlet] {
        let prob = EvolutionProblem::new(spec, InitialData::plane_wave(1.5), DEFAULT_THETA, QuadratureConfig::default())?;
        let cv = cross_validate(&prob, &scheme, 0.2, &compact)?;
        println!("{spec:?}");
        println!("  sup {:.3e}  L2 {:.3e}  CN error estimate {:.2e}  passed {}", cv.sup, cv.l2, cv.cn_error_estimate, cv.passed);
    }
    Ok(())
}
