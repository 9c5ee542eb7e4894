//! Rotated-contour Fresnel integrals
//!
//! ```text
//! e^{iθ} ∫₀^∞ e^{ia(ye^{iθ} − x)²} f(ye^{iθ}) dy
//! ```
//!
//! and their ε-regularized real-line counterparts.

pub mod adaptive;
pub mod gauss;

pub use adaptive::{integrate_pieces, neville_at_zero, truncation_point, Piece, QuadOutcome};

use crate::superosc::GrowthBound;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum QuadratureError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("growth exponent p = {0} is not below 2")]
    Growth(f64),
    #[error("no convergence after {evaluations} evaluations (estimate {best}, error {error:e})")]
    Accuracy { best: C64, error: f64, evaluations: usize },
}

/// Which sector the integrand is known to be analytic on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Positive,
    Both,
}

/// Rotation angle θ ∈ (0, π/2), sector side and strip depth h of D_{θ,h}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorSpec {
    pub theta: f64,
    pub side: Side,
    pub h: f64,
}

impl SectorSpec {
    pub fn new(theta: f64, side: Side, h: f64) -> Result<Self, QuadratureError> {
        if !(theta > 0.0 && theta < FRAC_PI_2) {
            return Err(QuadratureError::Precondition(format!("θ = {theta} outside (0, π/2)")));
        }
        if !(h >= 0.0) {
            return Err(QuadratureError::Precondition(format!("strip depth h = {h} is negative")));
        }
        Ok(SectorSpec { theta, side, h })
    }

    pub fn both(theta: f64) -> Result<Self, QuadratureError> {
        Self::new(theta, Side::Both, 0.0)
    }

    pub fn positive(theta: f64) -> Result<Self, QuadratureError> {
        Self::new(theta, Side::Positive, 0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub max_nodes: usize,
    /// Tail cut: the envelope at Y* is at most rel_tol·truncation_safety times its peak.
    pub truncation_safety: f64,
    /// Absolute error accepted regardless of the size of the result.
    pub abs_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { rel_tol: 1e-12, max_nodes: 1 << 21, truncation_safety: 1e-3, abs_tol: 0.0 }
    }
}

impl QuadratureConfig {
    pub fn new(rel_tol: f64, max_nodes: usize, truncation_safety: f64) -> Result<Self, QuadratureError> {
        let c = QuadratureConfig { rel_tol, max_nodes, truncation_safety, abs_tol: 0.0 };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), QuadratureError> {
        if !(self.rel_tol >= 1e-14 && self.rel_tol < 1.0) {
            return Err(QuadratureError::Precondition(format!("rel_tol = {} outside [1e-14, 1)", self.rel_tol)));
        }
        if self.max_nodes == 0 || self.max_nodes > 1 << 22 {
            return Err(QuadratureError::Precondition(format!("max_nodes = {} outside [1, 2^22]", self.max_nodes)));
        }
        if !(self.truncation_safety > 0.0 && self.truncation_safety <= 1.0) {
            return Err(QuadratureError::Precondition(format!(
                "truncation_safety = {} outside (0, 1]",
                self.truncation_safety
            )));
        }
        if !(self.abs_tol >= 0.0 && self.abs_tol.is_finite()) {
            return Err(QuadratureError::Precondition(format!("abs_tol = {} must be finite and nonnegative", self.abs_tol)));
        }
        Ok(())
    }

    /// Envelope ratio at which tails are dropped.
    pub fn tail_level(&self) -> f64 {
        self.rel_tol * self.truncation_safety
    }
}

/// f together with its growth bound, the phase strength a and the phase center x.
pub struct RotatedIntegrand<F> {
    f: F,
    pub bound: GrowthBound,
    pub a: f64,
    pub x: f64,
}

impl<F: Fn(C64) -> C64> RotatedIntegrand<F> {
    pub fn new(f: F, bound: GrowthBound, a: f64, x: f64) -> Result<Self, QuadratureError> {
        if !(bound.p < 2.0) {
            return Err(QuadratureError::Growth(bound.p));
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(QuadratureError::Precondition(format!("phase strength a = {a} must be positive")));
        }
        if !x.is_finite() {
            return Err(QuadratureError::Precondition("phase center must be finite".into()));
        }
        Ok(RotatedIntegrand { f, bound, a, x })
    }

    pub fn eval_f(&self, z: C64) -> C64 {
        (self.f)(z)
    }
}

/// Gaussian factor e^{−ε(z − y₀)²}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Regularizer {
    pub eps: f64,
    pub y0: f64,
}

impl Regularizer {
    fn check(&self, a: f64, theta: Option<f64>) -> Result<(), QuadratureError> {
        if !(self.eps > 0.0) {
            return Err(QuadratureError::Precondition(format!("ε = {} must be positive", self.eps)));
        }
        if let Some(th) = theta {
            let ceiling = 2.0 * a / th.tan();
            if self.eps >= ceiling {
                return Err(QuadratureError::Precondition(format!("ε = {} not below 2a/tan θ = {ceiling}", self.eps)));
            }
        }
        Ok(())
    }
}

struct Ray {
    origin: f64,
    dir: C64,
    jac: C64,
}

fn ray_piece<'a, F: Fn(C64) -> C64>(
    ri: &'a RotatedIntegrand<F>,
    ray: Ray,
    reg: Option<Regularizer>,
    cfg: &QuadratureConfig,
) -> Result<Piece<'a>, QuadratureError> {
    let (a, x) = (ri.a, ri.x);
    let c = ray.origin - x;
    let (sphi, s2phi) = (ray.dir.im, 2.0 * ray.dir.re * ray.dir.im);
    let gb = ri.bound;
    let (eps, off, c2phi) = match reg {
        Some(r) => (r.eps, ray.origin - r.y0, ray.dir.re * ray.dir.re - ray.dir.im * ray.dir.im),
        None => (0.0, 0.0, 0.0),
    };
    let cosphi = ray.dir.re;
    let log_env = move |y: f64| {
        gb.a.max(1e-300).ln() + gb.b * (ray.origin.abs() + y).powf(gb.p)
            - a * (y * y * s2phi + 2.0 * c * y * sphi)
            - eps * (off * off + 2.0 * off * y * cosphi + y * y * c2phi)
    };
    let damping = a * s2phi + eps * c2phi;
    if !(damping > 0.0) {
        return Err(QuadratureError::Precondition("ray has no Gaussian damping".into()));
    }
    let y_star = truncation_point(&log_env, 0.0, 1.0 / damping.sqrt(), cfg.tail_level())?;
    let (origin, dir, jac) = (ray.origin, ray.dir, ray.jac);
    Ok(Piece {
        g: Box::new(move |y: f64| {
            let z = origin + y * dir;
            let d = z - x;
            let mut e = C64::new(0.0, a) * d * d;
            if let Some(r) = reg {
                let q = z - r.y0;
                e -= r.eps * q * q;
            }
            jac * e.exp() * ri.eval_f(z)
        }),
        lo: 0.0,
        hi: y_star,
        rate: Box::new(move |y: f64| {
            let z = origin + y * dir;
            2.0 * a * (z - x).norm() + gb.b * gb.p * (origin.abs() + y).max(1.0).powf(gb.p - 1.0)
                + 2.0 * eps * (z - reg.map_or(0.0, |r| r.y0)).norm()
                + 1.0
        }),
    })
}

fn rotated<F: Fn(C64) -> C64>(
    ri: &RotatedIntegrand<F>,
    s: &SectorSpec,
    origin: f64,
    full: bool,
    reg: Option<Regularizer>,
    cfg: &QuadratureConfig,
) -> Result<QuadOutcome, QuadratureError> {
    cfg.validate()?;
    SectorSpec::new(s.theta, s.side, s.h)?;
    if let Some(r) = reg {
        r.check(ri.a, Some(s.theta))?;
    }
    let e = C64::from_polar(1.0, s.theta);
    let mut pieces = vec![ray_piece(ri, Ray { origin, dir: e, jac: e }, reg, cfg)?];
    if full {
        if s.side != Side::Both {
            return Err(QuadratureError::Precondition("full-line integral needs a double sector".into()));
        }
        pieces.push(ray_piece(ri, Ray { origin, dir: -e, jac: e }, reg, cfg)?);
    }
    integrate_pieces(&pieces, cfg)
}

/// e^{iθ} ∫₀^∞ e^{ia(ye^{iθ} − x)²} f(ye^{iθ}) dy.
pub fn fresnel_halfline<F: Fn(C64) -> C64>(
    ri: &RotatedIntegrand<F>,
    s: &SectorSpec,
    cfg: &QuadratureConfig,
) -> Result<QuadOutcome, QuadratureError> {
    rotated(ri, s, 0.0, false, None, cfg)
}

/// e^{iθ} ∫_ℝ e^{ia(ye^{iθ} − x)²} f(ye^{iθ}) dy.
pub fn fresnel_fullline<F: Fn(C64) -> C64>(
    ri: &RotatedIntegrand<F>,
    s: &SectorSpec,
    cfg: &QuadratureConfig,
) -> Result<QuadOutcome, QuadratureError> {
    rotated(ri, s, 0.0, true, None, cfg)
}

/// Full-line rotated integral with the factor e^{−ε(z − y₀)²} included.
///
/// Equal to [`regularized_real`] for 0 < ε < 2a/tan θ.
pub fn fresnel_fullline_regularized<F: Fn(C64) -> C64>(
    ri: &RotatedIntegrand<F>,
    s: &SectorSpec,
    reg: Regularizer,
    cfg: &QuadratureConfig,
) -> Result<QuadOutcome, QuadratureError> {
    rotated(ri, s, 0.0, true, Some(reg), cfg)
}

/// e^{iθ} ∫₀^∞ e^{ia(x₀ + ye^{iθ} − x)²} f(x₀ + ye^{iθ}) dy.
pub fn shifted_halfline<F: Fn(C64) -> C64>(
    ri: &RotatedIntegrand<F>,
    x0: f64,
    s: &SectorSpec,
    cfg: &QuadratureConfig,
) -> Result<QuadOutcome, QuadratureError> {
    rotated(ri, s, x0, false, None, cfg)
}

/// Half-line rotated integral anchored at x₀ with the regularizer included.
pub fn shifted_halfline_regularized<F: Fn(C64) -> C64>(
    ri: &RotatedIntegrand<F>,
    x0: f64,
    s: &SectorSpec,
    reg: Regularizer,
    cfg: &QuadratureConfig,
) -> Result<QuadOutcome, QuadratureError> {
    rotated(ri, s, x0, false, Some(reg), cfg)
}

/// Real integration range of the regularized integral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RealRange {
    Full,
    From(f64),
}

/// ∫ e^{−ε(y − y₀)²} e^{ia(y − x)²} f(y) dy over the real range.
///
/// `theta`, when given, enforces the ceiling ε < 2a/tan θ under which this equals the
/// rotated form.
pub fn regularized_real<F: Fn(C64) -> C64>(
    ri: &RotatedIntegrand<F>,
    reg: Regularizer,
    range: RealRange,
    theta: Option<f64>,
    cfg: &QuadratureConfig,
) -> Result<QuadOutcome, QuadratureError> {
    cfg.validate()?;
    reg.check(ri.a, theta)?;
    let (a, x, gb, Regularizer { eps, y0 }) = (ri.a, ri.x, ri.bound, reg);
    let log_env = move |y: f64| gb.a.max(1e-300).ln() + gb.b * y.abs().powf(gb.p) - eps * (y - y0) * (y - y0);
    let scale = 1.0 / eps.sqrt();
    let level = cfg.tail_level();
    let right = y0 + truncation_point(&|s| log_env(y0 + s), 0.0, scale, level)?;
    let left = y0 - truncation_point(&|s| log_env(y0 - s), 0.0, scale, level)?;
    let g = move |y: f64| {
        let e = C64::new(-eps * (y - y0) * (y - y0), a * (y - x) * (y - x));
        e.exp() * ri.eval_f(C64::new(y, 0.0))
    };
    let rate = move |y: f64| 2.0 * a * (y - x).abs() + 2.0 * eps * (y - y0).abs() + gb.b * gb.p * y.abs().max(1.0).powf(gb.p - 1.0) + 1.0;
    let (lo, hi) = match range {
        RealRange::Full => (left, right),
        RealRange::From(x0) => (x0, right.max(x0)),
    };
    let piece = Piece { g: Box::new(g), lo, hi, rate: Box::new(rate) };
    integrate_pieces(&[piece], cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn one() -> RotatedIntegrand<impl Fn(C64) -> C64> {
        RotatedIntegrand::new(|_z: C64| C64::new(1.0, 0.0), GrowthBound::bounded(1.0), 1.0, 0.0).unwrap()
    }

    #[test]
    fn classical_fresnel() {
        let cfg = QuadratureConfig::default();
        let s = SectorSpec::both(FRAC_PI_4).unwrap();
        let v = fresnel_fullline(&one(), &s, &cfg).unwrap().value;
        let exact = PI.sqrt() * C64::from_polar(1.0, FRAC_PI_4);
        assert!((v - exact).norm() < 1e-12);
        let h = fresnel_halfline(&one(), &s, &cfg).unwrap().value;
        assert!((h - exact / 2.0).norm() < 1e-12);
    }

    #[test]
    fn growth_guard() {
        let r = RotatedIntegrand::new(|z: C64| (z * z / 2.0).exp(), GrowthBound { a: 1.0, b: 0.5, p: 2.0 }, 1.0, 0.0);
        assert!(matches!(r, Err(QuadratureError::Growth(_))));
    }

    #[test]
    fn epsilon_ceiling() {
        let cfg = QuadratureConfig::default();
        let reg = Regularizer { eps: 2.5, y0: 0.0 };
        assert!(regularized_real(&one(), reg, RealRange::Full, Some(FRAC_PI_4), &cfg).is_err());
    }
}
