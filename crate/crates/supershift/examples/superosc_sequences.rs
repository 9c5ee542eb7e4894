//! F_n(x) = (cos(x/n) + ik sin(x/n))ⁿ oscillates like e^{ikx} near 0 with frequencies in [−1, 1].

use supershift::superosc::{build_superosc, EvalForm};
use supershift::C64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k = 2.0;
    for n in [10, 20, 40] {
        let s = build_superosc(n, k)?;
        let mass: f64 = s.coefficients.iter().map(|c| c.abs()).sum();
        let worst = (0..=20)
            .map(|i| {
                let z = C64::new(-1.0 + 0.1 * i as f64, 0.0);
                (s.eval(z, EvalForm::Sum) - (C64::new(0.0, k) * z).exp()).norm()
            })
            .fold(0.0, f64::max);
        println!("n = {n:>2}: Σ|C_j| = {mass:.3e}, max |F_n − e^{{ikx}}| on [−1, 1] = {worst:.3e}");
    }
    Ok(())
}
