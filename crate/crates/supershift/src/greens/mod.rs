//! Green's functions G(t, x, z) = e^{i(z−x)²/(4t)} G̃(t, x, z) for the free particle, the
//! centrifugal potential λ/x² and point interactions at 0.
//!
//! Principal branches throughout; √(it) = e^{iπ/4}√t.

pub mod point;

pub use point::{classify_point_interaction, interface_matrix, PointCase, PointInteractionCoefficients, TAU_CASE};

use crate::specfun::{
    decay_constant, deriv_decay_constant, h2_deriv_scaled_c, h2_scaled_c, j_deriv_scaled_c, j_scaled_c, sector_sample,
    BesselKind, BesselOrder, SpecfunError,
};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GreensError {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
}

/// Which propagator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum GreensFunctionSpec {
    Free,
    /// λ < 0, λ ≠ −1/4.
    CentrifugalAttractive { lambda: f64 },
    /// λ > 0.
    CentrifugalRepulsive { lambda: f64 },
    PointInteraction { phi: f64, a_j: C64, b_j: C64 },
}

impl GreensFunctionSpec {
    pub fn potential(&self, x: f64) -> f64 {
        match *self {
            GreensFunctionSpec::CentrifugalAttractive { lambda } | GreensFunctionSpec::CentrifugalRepulsive { lambda } => {
                lambda / (x * x)
            }
            _ => 0.0,
        }
    }

    pub fn is_centrifugal(&self) -> bool {
        matches!(self, GreensFunctionSpec::CentrifugalAttractive { .. } | GreensFunctionSpec::CentrifugalRepulsive { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreenEvaluation {
    pub value: C64,
    pub gtilde: C64,
    pub gtilde_dx: C64,
    pub a_t: f64,
}

/// (A₀, B₀, A₁, B₁, p) with |G̃| ≤ A₀e^{B₀|z|^p} and |∂ₓG̃| ≤ A₁e^{B₁|z|^p} on the sector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthCoefficients {
    pub a0: f64,
    pub b0: f64,
    pub a1: f64,
    pub b1: f64,
    pub p: f64,
}

/// M(Ψ(0⁺), Ψ(0⁻))ᵀ = N(Ψₓ(0⁺), −Ψₓ(0⁻))ᵀ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransmissionCondition {
    pub m: [[C64; 2]; 2],
    pub n: [[C64; 2]; 2],
}

impl TransmissionCondition {
    /// Euclidean norm of M(ψ₊, ψ₋)ᵀ − N(ψₓ₊, −ψₓ₋)ᵀ.
    pub fn residual(&self, psi_p: C64, psi_m: C64, dpsi_p: C64, dpsi_m: C64) -> f64 {
        let (u, v) = ([psi_p, psi_m], [dpsi_p, -dpsi_m]);
        (0..2)
            .map(|r| (self.m[r][0] * u[0] + self.m[r][1] * u[1] - self.n[r][0] * v[0] - self.n[r][1] * v[1]).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

pub fn transmission_matrices(spec: &GreensFunctionSpec) -> TransmissionCondition {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    match *spec {
        GreensFunctionSpec::PointInteraction { phi, a_j, b_j } => {
            let j = interface_matrix(phi, a_j, b_j);
            let i = C64::new(0.0, 1.0);
            let id = |r: usize, c: usize| if r == c { one } else { zero };
            TransmissionCondition {
                m: std::array::from_fn(|r| std::array::from_fn(|c| id(r, c) - j[r][c])),
                n: std::array::from_fn(|r| std::array::from_fn(|c| i * (id(r, c) + j[r][c]))),
            }
        }
        // The free particle is the transparent interface J = σ_x.
        GreensFunctionSpec::Free => TransmissionCondition {
            m: [[one, -one], [-one, one]],
            n: [[C64::new(0.0, 1.0), C64::new(0.0, 1.0)], [C64::new(0.0, 1.0), C64::new(0.0, 1.0)]],
        },
        _ => TransmissionCondition { m: [[one, zero], [zero, one]], n: [[zero; 2]; 2] },
    }
}

#[derive(Clone, Debug)]
enum Kind {
    Free,
    Hankel { nu: C64, c_nu: f64, d_prime: f64 },
    Bessel { nu: C64, d_nu: f64, d_prime: f64 },
    Point(PointInteractionCoefficients),
}

/// A validated propagator with its measured bound constants.
#[derive(Clone, Debug)]
pub struct Green {
    pub spec: GreensFunctionSpec,
    kind: Kind,
}

/// Safety factor on constants measured from a finite sample.
const MEASURED_SAFETY: f64 = 2.0;

fn measure(kind: BesselKind, nu: BesselOrder) -> Result<(f64, f64), GreensError> {
    let pts = sector_sample(FRAC_PI_2, 1e-3, 1e3, 48, 12);
    let phase = C64::new(0.0, 1.0).powc(-(nu.value() + 1.0)).norm();
    let c = decay_constant(kind, nu, &pts)?;
    let d = deriv_decay_constant(kind, nu, &pts)?;
    Ok((MEASURED_SAFETY * phase * c, MEASURED_SAFETY * phase * d))
}

impl Green {
    pub fn new(spec: GreensFunctionSpec) -> Result<Self, GreensError> {
        let kind = match spec {
            GreensFunctionSpec::Free => Kind::Free,
            GreensFunctionSpec::CentrifugalAttractive { lambda } => {
                if !(lambda < 0.0) {
                    return Err(GreensError::Argument(format!("attractive case needs λ < 0, got {lambda}")));
                }
                if lambda == -0.25 {
                    return Err(GreensError::Unsupported("λ = −1/4 (ν = 0)".into()));
                }
                let nu = BesselOrder::from_lambda(lambda)?;
                let (c_nu, d_prime) = measure(BesselKind::H2, nu)?;
                Kind::Hankel { nu: nu.value(), c_nu, d_prime }
            }
            GreensFunctionSpec::CentrifugalRepulsive { lambda } => {
                if !(lambda > 0.0 && lambda.is_finite()) {
                    return Err(GreensError::Argument(format!("repulsive case needs λ > 0, got {lambda}")));
                }
                let nu = BesselOrder::from_lambda(lambda)?;
                let (d_nu, d_prime) = measure(BesselKind::J, nu)?;
                Kind::Bessel { nu: nu.value(), d_nu, d_prime }
            }
            GreensFunctionSpec::PointInteraction { phi, a_j, b_j } => Kind::Point(classify_point_interaction(phi, a_j, b_j)?),
        };
        Ok(Green { spec, kind })
    }

    pub fn coefficients(&self) -> Option<&PointInteractionCoefficients> {
        match &self.kind {
            Kind::Point(c) => Some(c),
            _ => None,
        }
    }

    /// Order ν of the centrifugal kernels.
    pub fn order(&self) -> Option<C64> {
        match self.kind {
            Kind::Hankel { nu, .. } | Kind::Bessel { nu, .. } => Some(nu),
            _ => None,
        }
    }

    /// Whether G(t, x, z) vanishes for sgn(Re z) ≠ sgn(x).
    pub fn decoupled(&self) -> bool {
        self.spec.is_centrifugal()
    }

    fn check(&self, t: f64, x: f64, z: C64) -> Result<(), GreensError> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(GreensError::Domain(format!("t = {t} must be positive")));
        }
        if x == 0.0 || !x.is_finite() {
            return Err(GreensError::Domain(format!("x = {x} must be finite and nonzero")));
        }
        if !matches!(self.kind, Kind::Free) && z.re == 0.0 {
            return Err(GreensError::Domain(format!("Re z = 0 at z = {z}")));
        }
        Ok(())
    }

    /// G̃ and, if asked for, ∂ₓG̃ of the centrifugal kernels; zero off the support.
    fn centrifugal_tilde(&self, t: f64, x: f64, z: C64, with_dx: bool) -> (C64, C64) {
        let zero = C64::new(0.0, 0.0);
        if x.signum() != z.re.signum() {
            return (zero, zero);
        }
        let i = C64::new(0.0, 1.0);
        let w = x * z / (2.0 * t);
        let root = (x * z).sqrt();
        let (nu, scale, f) = match self.kind {
            Kind::Hankel { nu, .. } => (nu, 4.0, h2_scaled_c(nu, w)),
            Kind::Bessel { nu, .. } => (nu, 2.0, j_scaled_c(nu, w)),
            _ => unreachable!(),
        };
        let pre = i.powc(-(nu + 1.0)) / (scale * t);
        let gt = pre * root * f;
        if !with_dx {
            return (gt, zero);
        }
        let fp = match self.kind {
            Kind::Hankel { .. } => h2_deriv_scaled_c(nu, w),
            _ => j_deriv_scaled_c(nu, w),
        };
        let gtx = (1.0 / (2.0 * x) + i * z / (2.0 * t)) * gt + pre * root * z / (2.0 * t) * fp;
        (gt, gtx)
    }

    /// (G, ∂ₓG) evaluated with exponents combined so that the result is finite wherever
    /// it is representable. This is what contour integrands use.
    pub fn kernel(&self, t: f64, x: f64, z: C64) -> Result<(C64, C64), GreensError> {
        self.check(t, x, z)?;
        let i = C64::new(0.0, 1.0);
        let d = z - x;
        match &self.kind {
            Kind::Free => {
                let g = (i * d * d / (4.0 * t)).exp() / (2.0 * (i * PI * t).sqrt());
                Ok((g, -i * d / (2.0 * t) * g))
            }
            Kind::Point(c) => Ok(point::kernel(c, t, x, z, C64::new(0.0, 0.0))),
            _ => {
                let (gt, gtx) = self.centrifugal_tilde(t, x, z, true);
                let ph = (i * d * d / (4.0 * t)).exp();
                Ok((ph * gt, ph * (gtx - i * d / (2.0 * t) * gt)))
            }
        }
    }

    /// G alone, as in [`Green::kernel`]; skips the derivative where that saves work.
    pub fn kernel_value(&self, t: f64, x: f64, z: C64) -> Result<C64, GreensError> {
        match &self.kind {
            Kind::Hankel { .. } | Kind::Bessel { .. } => {
                self.check(t, x, z)?;
                let d = z - x;
                let (gt, _) = self.centrifugal_tilde(t, x, z, false);
                Ok((C64::new(0.0, 1.0) * d * d / (4.0 * t)).exp() * gt)
            }
            _ => self.kernel(t, x, z).map(|v| v.0),
        }
    }

    pub fn eval(&self, t: f64, x: f64, z: C64) -> Result<GreenEvaluation, GreensError> {
        self.check(t, x, z)?;
        let i = C64::new(0.0, 1.0);
        let a_t = 1.0 / (4.0 * t);
        let d = z - x;
        let phase = i * a_t * d * d;
        let (gtilde, gtilde_dx) = match &self.kind {
            Kind::Free => (1.0 / (2.0 * (i * PI * t).sqrt()), C64::new(0.0, 0.0)),
            Kind::Point(c) => {
                let (g, gx) = point::kernel(c, t, x, z, -phase);
                (g, gx + 2.0 * i * a_t * d * g)
            }
            _ => self.centrifugal_tilde(t, x, z, true),
        };
        Ok(GreenEvaluation { value: phase.exp() * gtilde, gtilde, gtilde_dx, a_t })
    }

    pub fn growth_coefficients(&self, t: f64, x: f64) -> GrowthCoefficients {
        let (a0, a1, b1) = match &self.kind {
            Kind::Free => (1.0 / (2.0 * (PI * t).sqrt()), 0.0, 0.0),
            Kind::Hankel { c_nu, d_prime, .. } => {
                let a0 = c_nu / (2.0 * (2.0 * t).sqrt());
                (a0, centrifugal_a1(a0, *d_prime, 4.0, t, x), 1.0)
            }
            Kind::Bessel { d_nu, d_prime, .. } => {
                let a0 = d_nu / (2.0 * t).sqrt();
                (a0, centrifugal_a1(a0, *d_prime, 2.0, t, x), 1.0)
            }
            Kind::Point(c) => {
                let (a0, a1) = point::growth(c, t, x);
                (a0, a1, 1.0)
            }
        };
        GrowthCoefficients { a0, b0: 0.0, a1, b1, p: 1.0 }
    }

    /// i∂ₜG − (−∂ₓ²G + V G) by central differences.
    pub fn schrodinger_residual(&self, t: f64, x: f64, z: C64, h_t: f64, h_x: f64) -> Result<C64, GreensError> {
        if !(h_t > 0.0 && h_t < t / 10.0) {
            return Err(GreensError::Domain(format!("h_t = {h_t} must lie in (0, t/10)")));
        }
        if !(h_x > 0.0 && h_x < x.abs() / 10.0) {
            return Err(GreensError::Domain(format!("h_x = {h_x} must lie in (0, |x|/10)")));
        }
        let g = |tt: f64, xx: f64| self.eval(tt, xx, z).map(|e| e.value);
        let dt = (g(t + h_t, x)? - g(t - h_t, x)?) / (2.0 * h_t);
        let g0 = g(t, x)?;
        let dxx = (g(t, x + h_x)? - 2.0 * g0 + g(t, x - h_x)?) / (h_x * h_x);
        Ok(C64::new(0.0, 1.0) * dt + dxx - self.spec.potential(x) * g0)
    }
}

/// |∂ₓG̃| ≤ |G̃|(1/(2|x|) + |z|/(2t)) + √|xz|·|z|·|e^{iw}f′|/(2·scale·t²), with
/// |e^{iw}f′| ≤ D′(|w|^{−1/2} + |w|^{−3/2}); the factor |z| is absorbed into e^{|z|}.
fn centrifugal_a1(a0: f64, d_prime: f64, scale: f64, t: f64, x: f64) -> f64 {
    let k = d_prime * (2.0 * t).sqrt() / (2.0 * scale * t * t);
    a0 / (2.0 * x.abs()) + k * 2.0 * t / x.abs() + a0 / (2.0 * t) + k
}

/// Convenience wrapper: validate `spec` and evaluate once.
pub fn eval_green(spec: &GreensFunctionSpec, t: f64, x: f64, z: C64) -> Result<GreenEvaluation, GreensError> {
    Green::new(*spec)?.eval(t, x, z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_diagonal() {
        let g = Green::new(GreensFunctionSpec::Free).unwrap();
        let t: f64 = 0.37;
        let e = g.eval(t, 1.3, C64::new(1.3, 0.0)).unwrap();
        let want = 1.0 / (2.0 * C64::new(0.0, PI * t).sqrt());
        assert!((e.value - want).norm() < 1e-15);
    }

    #[test]
    fn centrifugal_support() {
        let g = Green::new(GreensFunctionSpec::CentrifugalAttractive { lambda: -0.1 }).unwrap();
        let e = g.eval(0.5, 1.0, C64::new(-0.5, 0.2)).unwrap();
        assert_eq!(e.value, C64::new(0.0, 0.0));
    }

    #[test]
    fn neumann_and_dirichlet_matrices() {
        let d = transmission_matrices(&GreensFunctionSpec::PointInteraction { phi: 0.0, a_j: C64::new(-1.0, 0.0), b_j: C64::new(0.0, 0.0) });
        assert_eq!(d.m[0][0], C64::new(2.0, 0.0));
        assert_eq!(d.n[0][0], C64::new(0.0, 0.0));
        let n = transmission_matrices(&GreensFunctionSpec::PointInteraction { phi: 0.0, a_j: C64::new(1.0, 0.0), b_j: C64::new(0.0, 0.0) });
        assert_eq!(n.m[1][1], C64::new(0.0, 0.0));
        assert_eq!(n.n[1][1], C64::new(0.0, 2.0));
        assert_eq!(n.n[0][1], C64::new(0.0, 0.0));
    }

    #[test]
    fn rejects_critical_lambda() {
        assert!(matches!(
            Green::new(GreensFunctionSpec::CentrifugalAttractive { lambda: -0.25 }),
            Err(GreensError::Unsupported(_))
        ));
    }
}
