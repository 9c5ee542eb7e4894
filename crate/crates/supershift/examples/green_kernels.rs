//! Propagator values for each potential, with the central-difference Schrödinger residual at h = 0.01, 0.005.

use supershift::greens::{Green, GreensFunctionSpec};
use supershift::C64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let specs = [
        GreensFunctionSpec::Free,
        GreensFunctionSpec::CentrifugalAttractive { lambda: -0.1875 },
        GreensFunctionSpec::CentrifugalRepulsive { lambda: 2.0 },
        GreensFunctionSpec::PointInteraction { phi: 0.3, a_j: C64::new(0.8, 0.0), b_j: C64::new(0.6, 0.0) },
    ];
    let (t, x, z) = (0.4, 0.9, C64::new(1.3, 0.0));
    for spec in specs {
        let g = Green::new(spec)?;
        let ev = g.eval(t, x, z)?;
        let r1 = g.schrodinger_residual(t, x, z, 0.01, 0.01)?.norm();
        let r2 = g.schrodinger_residual(t, x, z, 0.005, 0.005)?.norm();
        println!("{spec:?}\n  G = {:.12e}  residual {r1:.1e} → {r2:.1e}, order {:.3}", ev.value, (r1 / r2).log2());
    }
    Ok(())
}
