//! Point interactions at the origin: J = e^{iφ}[[a, −b̄], [b, ā]] and the kernel
//!
//! ```text
//! G(t,x,y) = Σ± μ± Λ(u±) e^{is²/4t} + μ₀ e^{is²/4t}/(2√(iπt)) + G_free(t,x,y)
//! u± = s/(2√(it)) + ω±√(it),   s = |x| + |y|
//! ```
//!
//! For complex y, |y| is replaced by σy with σ = sgn(Re y).

use super::GreensError;
use crate::specfun::{lambda_exp, lambda_fn};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, PI};

pub const TAU_CASE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointCase {
    I,
    II,
    III,
}

/// Sign pair (sgn x, sgn y) as an index: ++, +−, −+, −−.
fn idx(sx: f64, sy: f64) -> usize {
    match (sx > 0.0, sy > 0.0) {
        (true, true) => 0,
        (true, false) => 1,
        (false, true) => 2,
        (false, false) => 3,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointInteractionCoefficients {
    pub case_id: PointCase,
    pub omega_plus: f64,
    pub omega_minus: f64,
    mu_plus: [C64; 4],
    mu_minus: [C64; 4],
    mu_zero: [C64; 4],
    eta: [C64; 4],
}

impl PointInteractionCoefficients {
    pub fn mu_plus(&self, sx: f64, sy: f64) -> C64 {
        self.mu_plus[idx(sx, sy)]
    }
    pub fn mu_minus(&self, sx: f64, sy: f64) -> C64 {
        self.mu_minus[idx(sx, sy)]
    }
    pub fn mu_zero(&self, sx: f64, sy: f64) -> C64 {
        self.mu_zero[idx(sx, sy)]
    }
    pub fn eta(&self, sx: f64, sy: f64) -> C64 {
        self.eta[idx(sx, sy)]
    }

    fn max_abs(v: &[C64; 4]) -> f64 {
        v.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

pub(crate) fn check_unitary(phi: f64, a: C64, b: C64) -> Result<(), GreensError> {
    if !(0.0..PI).contains(&phi) {
        return Err(GreensError::Argument(format!("φ = {phi} outside [0, π)")));
    }
    let n = a.norm_sqr() + b.norm_sqr();
    if (n - 1.0).abs() > 1e-12 {
        return Err(GreensError::Argument(format!("|a|² + |b|² = {n}, not 1")));
    }
    Ok(())
}

/// Case selection and coefficient maps for the interface matrix (φ, a, b).
pub fn classify_point_interaction(phi: f64, a: C64, b: C64) -> Result<PointInteractionCoefficients, GreensError> {
    check_unitary(phi, a, b)?;
    let ra = a.re;
    let i = C64::new(0.0, 1.0);
    let mut eta = [C64::new(0.0, 0.0); 4];
    if (ra.abs() - 1.0).abs() > TAU_CASE {
        let pre = 1.0 / (1.0 - ra * ra).sqrt();
        eta = [-pre * a.im * C64::new(1.0, 0.0), -pre * i * b.conj(), pre * i * b, pre * a.im * C64::new(1.0, 0.0)];
    }
    let theta = |k: usize| if k == 0 || k == 3 { 1.0 } else { 0.0 };
    let sgn = |k: usize| if k == 0 || k == 3 { 1.0 } else { -1.0 };
    let zero = [C64::new(0.0, 0.0); 4];
    let denom = phi.cos() + ra;
    if denom.abs() > TAU_CASE {
        let root = (1.0 - ra * ra).max(0.0).sqrt();
        let wp = (-phi.sin() + root) / denom;
        let wm = (-phi.sin() - root) / denom;
        Ok(PointInteractionCoefficients {
            case_id: PointCase::I,
            omega_plus: wp,
            omega_minus: wm,
            mu_plus: std::array::from_fn(|k| -wp / 2.0 * (theta(k) + eta[k])),
            mu_minus: std::array::from_fn(|k| -wm / 2.0 * (theta(k) - eta[k])),
            mu_zero: std::array::from_fn(|k| C64::new(sgn(k), 0.0)),
            eta,
        })
    } else if (ra + 1.0).abs() > TAU_CASE {
        let wp = phi.cos() / phi.sin();
        Ok(PointInteractionCoefficients {
            case_id: PointCase::II,
            omega_plus: wp,
            omega_minus: 0.0,
            mu_plus: std::array::from_fn(|k| -wp / 2.0 * (theta(k) + eta[k])),
            mu_minus: zero,
            mu_zero: std::array::from_fn(|k| eta[k] - (1.0 - theta(k))),
            eta,
        })
    } else {
        Ok(PointInteractionCoefficients {
            case_id: PointCase::III,
            omega_plus: 0.0,
            omega_minus: 0.0,
            mu_plus: zero,
            mu_minus: zero,
            mu_zero: [C64::new(-1.0, 0.0); 4],
            eta,
        })
    }
}

/// J = e^{iφ}[[a, −b̄], [b, ā]].
pub fn interface_matrix(phi: f64, a: C64, b: C64) -> [[C64; 2]; 2] {
    let e = C64::from_polar(1.0, phi);
    [[e * a, -e * b.conj()], [e * b, e * a.conj()]]
}

fn sqrt_it(t: f64) -> C64 {
    C64::from_polar(t.sqrt(), FRAC_PI_4)
}

/// (G, ∂ₓG) with every exponential multiplied by e^{extra}.
pub(crate) fn kernel(c: &PointInteractionCoefficients, t: f64, x: f64, z: C64, extra: C64) -> (C64, C64) {
    let sx = x.signum();
    let sigma = z.re.signum();
    let s = x.abs() + sigma * z;
    let i = C64::new(0.0, 1.0);
    let rt = sqrt_it(t);
    let norm = 1.0 / (2.0 * (i * PI * t).sqrt());
    let e_s = i * s * s / (4.0 * t) + extra;
    let d = x - z;
    let e_free = i * d * d / (4.0 * t) + extra;
    let free = norm * e_free.exp();
    let mut g = free;
    let mut gx = i * d / (2.0 * t) * free;
    let mu0 = c.mu_zero(sx, sigma);
    if mu0 != C64::new(0.0, 0.0) {
        let v = mu0 * norm * e_s.exp();
        g += v;
        gx += sx * i * s / (2.0 * t) * v;
    }
    for (mu, w) in [(c.mu_plus(sx, sigma), c.omega_plus), (c.mu_minus(sx, sigma), c.omega_minus)] {
        if mu == C64::new(0.0, 0.0) {
            continue;
        }
        let u = s / (2.0 * rt) + w * rt;
        let le = lambda_exp(u, e_s);
        g += mu * le;
        gx += sx * mu * (w * le - 2.0 * norm * e_s.exp());
    }
    (g, gx)
}

/// Bound on |Λ(u) e^{c}| over the contour, where Re(s e^{−iπ/4}) ≥ 0 and |e^c| ≤ 1.
///
/// For ω ≥ 0 this is Λ(ω√t/√2). For ω < 0, either Re u ≥ 0 and |Λ(u)| ≤ 1, or
/// Λ(u)e^c = 2e^{ωs + iω²t} − Λ(−u)e^c with both parts bounded, giving 3.
pub(crate) fn lambda_bound(omega: f64, t: f64) -> f64 {
    if omega >= 0.0 {
        lambda_fn(C64::new(omega * (t / 2.0).sqrt(), 0.0)).map(|v| v.re).unwrap_or(1.0)
    } else {
        3.0
    }
}

/// (A₀, A₁) with B₀ = 0, B₁ = 1, p = 1.
pub(crate) fn growth(c: &PointInteractionCoefficients, t: f64, x: f64) -> (f64, f64) {
    let mp = PointInteractionCoefficients::max_abs(&c.mu_plus);
    let mm = PointInteractionCoefficients::max_abs(&c.mu_minus);
    let m0 = PointInteractionCoefficients::max_abs(&c.mu_zero);
    let lp = lambda_bound(c.omega_plus, t);
    let lm = lambda_bound(c.omega_minus, t);
    let n = 1.0 / (2.0 * (PI * t).sqrt());
    let a0 = mp * lp + mm * lm + (m0 + 1.0) * n;
    let a1 = mp * (c.omega_plus.abs() * lp + 2.0 * n) + mm * (c.omega_minus.abs() * lm + 2.0 * n) + (x.abs() + 1.0) / (2.0 * t) * ((m0 + 1.0) * n + a0);
    (a0, a1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dirichlet_is_case_three() {
        let c = classify_point_interaction(0.0, C64::new(-1.0, 0.0), C64::new(0.0, 0.0)).unwrap();
        assert_eq!(c.case_id, PointCase::III);
        for (sx, sy) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            assert_eq!(c.mu_zero(sx, sy), C64::new(-1.0, 0.0));
        }
    }

    #[test]
    fn case_two_example() {
        let c = classify_point_interaction(PI / 2.0, C64::new(0.0, 0.0), C64::new(1.0, 0.0)).unwrap();
        assert_eq!(c.case_id, PointCase::II);
        assert!(c.omega_plus.abs() < 1e-15);
        assert!((c.mu_zero(1.0, -1.0) - C64::new(-1.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn case_one_example() {
        let c = classify_point_interaction(0.0, C64::new(0.0, 0.0), C64::new(1.0, 0.0)).unwrap();
        assert_eq!(c.case_id, PointCase::I);
        assert!((c.omega_plus - 1.0).abs() < 1e-15 && (c.omega_minus + 1.0).abs() < 1e-15);
        assert_eq!(c.mu_zero(1.0, -1.0), C64::new(-1.0, 0.0));
        assert_eq!(c.mu_zero(-1.0, -1.0), C64::new(1.0, 0.0));
    }

    #[test]
    fn transparent_interface_is_free() {
        let c = classify_point_interaction(PI / 2.0, C64::new(0.0, 0.0), C64::new(0.0, -1.0)).unwrap();
        for (x, z) in [(0.7, C64::new(1.2, 0.3)), (0.7, C64::new(-0.4, -0.1)), (-1.1, C64::new(0.5, 0.2))] {
            let (g, _) = kernel(&c, 0.3, x, z, C64::new(0.0, 0.0));
            let d = x - z;
            let free = (C64::new(0.0, 1.0) * d * d / 1.2).exp() / (2.0 * (C64::new(0.0, PI * 0.3)).sqrt());
            assert!((g - free).norm() < 1e-14 * free.norm());
        }
    }

    #[test]
    fn rejects_non_unitary() {
        assert!(classify_point_interaction(0.5, C64::new(0.6, 0.0), C64::new(0.0, 0.0)).is_err());
    }
}
