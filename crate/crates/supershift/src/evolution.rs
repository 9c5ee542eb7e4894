//! Wave functions Ψ(t, x) = ∫ G(t, x, y) F(y) dy on rotated contours, boundary traces and
//! the scans behind the persistence and holomorphy checks.
//!
//! The contour is anchored at x. On the side of x it follows the real segment between 0
//! and x and then leaves along x + sgn(x)·y e^{iθ}. On the other side it is the ray
//! −sgn(x)·y e^{iθ} from the origin. The free kernel has no cut at Re z = 0 and uses the
//! full line x ± y e^{iθ}.

use crate::greens::{transmission_matrices, Green, GreensError, GreensFunctionSpec};
use crate::quadrature::gauss::gl_nodes;
use crate::quadrature::{integrate_pieces, neville_at_zero, truncation_point, Piece, QuadOutcome, QuadratureConfig, QuadratureError};
use crate::superosc::{build_supershift_plane_waves, GrowthBound, PlaneWaveSupershift, SuperoscError, SupershiftFamily};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

pub const DEFAULT_THETA: f64 = FRAC_PI_4;
/// Offset at which one-sided limits at 0± are sampled.
pub const BOUNDARY_DELTA: f64 = 1e-7;
/// ε/a(t) values for the regularized definition, extrapolated to ε = 0.
pub const PSI_EPS_LADDER: [f64; 6] = [0.04, 0.03, 0.02, 0.015, 0.01, 0.005];
pub const DEFAULT_COMPACT_SAMPLES: usize = 201;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EvolutionError {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error(transparent)]
    Green(#[from] GreensError),
    #[error(transparent)]
    Superosc(#[from] SuperoscError),
    #[error("quadrature at t = {t}, x = {x}: {source}")]
    Quadrature { t: f64, x: f64, source: QuadratureError },
    #[error("not available: {0}")]
    Capability(String),
}

/// An entire function together with bounds on its growth.
pub trait Source: Sync {
    fn eval(&self, z: C64) -> C64;
    /// |F(z)| ≤ A e^{B|z|^q} on ℂ.
    fn growth(&self) -> GrowthBound;
    /// Upper bound for ln|F(y)| on the real line, up to an additive constant.
    fn log_real_bound(&self, y: f64) -> f64 {
        let g = self.growth();
        g.a.max(1e-300).ln() + g.b * y.abs().powf(g.p)
    }
}

/// Initial condition F.
#[derive(Clone)]
pub enum InitialData {
    /// e^{ikz}; complex k is allowed.
    PlaneWave { k: C64 },
    /// Member F_n of a plane-wave supershift, in product form.
    Superosc(Arc<PlaneWaveSupershift>),
    /// (Σ c_j z^j) e^{ikz}.
    PolyExp { coeffs: Vec<C64>, k: f64 },
    Custom { f: Arc<dyn Fn(C64) -> C64 + Send + Sync>, bound: GrowthBound },
}

impl InitialData {
    pub fn plane_wave(k: f64) -> Self {
        InitialData::PlaneWave { k: C64::new(k, 0.0) }
    }

    pub fn superosc(k0: f64, kappa: f64, n: usize) -> Result<Self, SuperoscError> {
        Ok(InitialData::Superosc(Arc::new(build_supershift_plane_waves(k0, kappa, n)?)))
    }

    pub fn custom(f: impl Fn(C64) -> C64 + Send + Sync + 'static, bound: GrowthBound) -> Self {
        InitialData::Custom { f: Arc::new(f), bound }
    }
}

impl fmt::Debug for InitialData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialData::PlaneWave { k } => write!(f, "PlaneWave {{ k: {k} }}"),
            InitialData::Superosc(s) => write!(f, "Superosc {{ k0: {}, kappa: {}, n: {} }}", s.k0, s.kappa, s.n),
            InitialData::PolyExp { coeffs, k } => write!(f, "PolyExp {{ coeffs: {coeffs:?}, k: {k} }}"),
            InitialData::Custom { bound, .. } => write!(f, "Custom {{ bound: {bound:?} }}"),
        }
    }
}

impl Source for InitialData {
    fn eval(&self, z: C64) -> C64 {
        match self {
            InitialData::PlaneWave { k } => (C64::new(0.0, 1.0) * k * z).exp(),
            InitialData::Superosc(s) => s.member(z),
            InitialData::PolyExp { coeffs, k } => {
                let p = coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c);
                p * (C64::new(0.0, *k) * z).exp()
            }
            InitialData::Custom { f, .. } => f(z),
        }
    }

    fn growth(&self) -> GrowthBound {
        match self {
            InitialData::PlaneWave { k } => GrowthBound { a: 1.0, b: k.norm(), p: 1.0 },
            InitialData::Superosc(s) => s.member_growth(),
            InitialData::PolyExp { coeffs, k } => {
                // |z|^j ≤ j! e^{|z|}
                let mut fact = 1.0;
                let mut a = 0.0;
                for (j, c) in coeffs.iter().enumerate() {
                    if j > 0 {
                        fact *= j as f64;
                    }
                    a += c.norm() * fact;
                }
                GrowthBound { a, b: k.abs() + if coeffs.len() > 1 { 1.0 } else { 0.0 }, p: 1.0 }
            }
            InitialData::Custom { bound, .. } => *bound,
        }
    }

    fn log_real_bound(&self, y: f64) -> f64 {
        match self {
            InitialData::PlaneWave { k } => -k.im * y,
            InitialData::Superosc(s) => {
                // |cos u + ir sin u|² = 1 + (r² − 1) sin²u
                let u = (s.k0 * y / s.n as f64).abs().min(1.0);
                let r = s.kappa / s.k0;
                0.5 * s.n as f64 * (1.0 + (r * r - 1.0) * u * u).ln()
            }
            InitialData::PolyExp { coeffs, .. } => {
                let r = y.abs().max(1.0);
                coeffs.iter().enumerate().map(|(j, c)| c.norm() * r.powi(j as i32)).sum::<f64>().max(1e-300).ln()
            }
            InitialData::Custom { bound, .. } => bound.a.max(1e-300).ln() + bound.b * y.abs().powf(bound.p),
        }
    }
}

struct FamilyMember<'a> {
    family: &'a dyn SupershiftFamily,
    kappa: C64,
}

impl Source for FamilyMember<'_> {
    fn eval(&self, z: C64) -> C64 {
        self.family.phi(self.kappa, z)
    }
    fn growth(&self) -> GrowthBound {
        self.family.growth(self.kappa)
    }
}

struct ShiftMember<'a> {
    family: &'a dyn SupershiftFamily,
    shift: &'a PlaneWaveSupershift,
}

impl Source for ShiftMember<'_> {
    fn eval(&self, z: C64) -> C64 {
        self.family.member(self.shift, z)
    }
    fn growth(&self) -> GrowthBound {
        self.family.member_growth(self.shift)
    }
    fn log_real_bound(&self, _y: f64) -> f64 {
        0.0
    }
}

/// One value of Ψ or Ψₓ with its quadrature diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsiValue {
    pub value: C64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl PsiValue {
    fn from_outcome(o: QuadOutcome) -> Self {
        PsiValue { value: o.value, error: o.error, evaluations: o.evaluations, converged: true }
    }

    fn from_result(r: Result<PsiValue, EvolutionError>) -> Self {
        match r {
            Ok(v) => v,
            Err(EvolutionError::Quadrature { source: QuadratureError::Accuracy { best, error, evaluations }, .. }) => {
                PsiValue { value: best, error, evaluations, converged: false }
            }
            Err(_) => PsiValue { value: C64::new(f64::NAN, f64::NAN), error: f64::INFINITY, evaluations: 0, converged: false },
        }
    }
}

/// Green's function, rotation angle and quadrature settings; F is supplied per call.
#[derive(Clone, Debug)]
pub struct Propagator {
    green: Green,
    theta: f64,
    cfg: QuadratureConfig,
}

fn check_point(t: f64, x: f64) -> Result<(), EvolutionError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(EvolutionError::Argument(format!("t = {t} must be positive")));
    }
    if x == 0.0 || !x.is_finite() {
        return Err(EvolutionError::Argument(format!("x = {x} must be finite and nonzero")));
    }
    Ok(())
}

impl Propagator {
    pub fn new(spec: GreensFunctionSpec, theta: f64, cfg: QuadratureConfig) -> Result<Self, EvolutionError> {
        if !(theta > 0.0 && theta < FRAC_PI_2) {
            return Err(EvolutionError::Argument(format!("θ = {theta} outside (0, π/2)")));
        }
        cfg.validate().map_err(|e| EvolutionError::Argument(e.to_string()))?;
        Ok(Propagator { green: Green::new(spec)?, theta, cfg })
    }

    pub fn green(&self) -> &Green {
        &self.green
    }

    pub fn spec(&self) -> &GreensFunctionSpec {
        &self.green.spec
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn cfg(&self) -> &QuadratureConfig {
        &self.cfg
    }

    fn check_source(&self, f: &dyn Source) -> Result<(), EvolutionError> {
        let q = f.growth().p;
        // the kernels all have p = 1, so max{p, q} < 2 reduces to q < 2
        if !(q < 2.0) {
            return Err(EvolutionError::Argument(format!("initial growth exponent q = {q} must be below 2")));
        }
        Ok(())
    }

    fn integrate(&self, f: &dyn Source, t: f64, x: f64, deriv: bool) -> Result<QuadOutcome, EvolutionError> {
        check_point(t, x)?;
        self.check_source(f)?;
        let green = &self.green;
        let e = C64::from_polar(1.0, self.theta);
        let sx = x.signum();
        let gb = f.growth();
        let ln_a = gb.a.max(1e-300).ln();
        let damp = (2.0 * self.theta).sin() / (4.0 * t);
        let level = self.cfg.tail_level();
        // Results near a node of Ψ (Dirichlet data at x → 0) cancel far below the size of
        // the integrand; the error is judged against |F| near x instead.
        let sigma = 1.0 / damp.sqrt();
        let f_scale = [0.0, 0.5, 1.0, 2.0, 3.0]
            .iter()
            .map(|&s| f.eval(x + sx * s * sigma * e).norm() * (-damp * s * s * sigma * sigma).exp())
            .fold(0.0, f64::max);
        let mut cfg = self.cfg;
        let kernel_scale = if deriv { 1.0 / t.sqrt() } else { 1.0 };
        cfg.abs_tol = cfg.abs_tol.max(1e-2 * cfg.rel_tol * f_scale * kernel_scale);
        let kern = move |z: C64| {
            let v = if deriv { green.kernel(t, x, z).map(|v| v.1) } else { green.kernel_value(t, x, z) };
            v.unwrap_or(C64::new(f64::NAN, f64::NAN))
        };
        let ray = |origin: f64, dir: C64| -> Result<Piece<'_>, EvolutionError> {
            let log_env = move |y: f64| {
                let r = origin.abs() + y;
                let extra = if deriv { (1.0 + (r + x.abs()) / t).ln() } else { 0.0 };
                ln_a + gb.b * r.powf(gb.p) - damp * y * y + extra
            };
            let hi = truncation_point(&log_env, 0.0, 1.0 / damp.sqrt(), level)
                .map_err(|source| EvolutionError::Quadrature { t, x, source })?;
            Ok(Piece {
                g: Box::new(move |y: f64| {
                    let z = origin + y * dir;
                    e * kern(z) * f.eval(z)
                }),
                lo: 0.0,
                hi,
                rate: Box::new(move |y: f64| {
                    let z = origin + y * dir;
                    ((z - x).norm() + x.abs() + z.norm()) / (2.0 * t) + gb.b * gb.p * (origin.abs() + y).max(1.0).powf(gb.p - 1.0) + 1.0
                }),
            })
        };
        let segment = || Piece {
            g: Box::new(move |y: f64| {
                let z = C64::new(y, 0.0);
                kern(z) * f.eval(z)
            }),
            lo: x.min(0.0),
            hi: x.max(0.0),
            rate: Box::new(move |y: f64| ((y - x).abs() + x.abs() + y.abs()) / (2.0 * t) + gb.b + 1.0),
        };
        let pieces = match self.green.spec {
            GreensFunctionSpec::Free => vec![ray(x, e)?, ray(x, -e)?],
            GreensFunctionSpec::PointInteraction { .. } => vec![segment(), ray(x, sx * e)?, ray(0.0, -sx * e)?],
            _ => vec![segment(), ray(x, sx * e)?],
        };
        integrate_pieces(&pieces, &cfg).map_err(|source| EvolutionError::Quadrature { t, x, source })
    }

    /// Ψ(t, x; F).
    pub fn psi(&self, f: &dyn Source, t: f64, x: f64) -> Result<PsiValue, EvolutionError> {
        self.integrate(f, t, x, false).map(PsiValue::from_outcome)
    }

    /// Ψₓ(t, x; F), differentiating the kernel under the integral.
    pub fn psi_dx(&self, f: &dyn Source, t: f64, x: f64) -> Result<PsiValue, EvolutionError> {
        self.integrate(f, t, x, true).map(PsiValue::from_outcome)
    }

    /// ∫_ℝ e^{−ε(y−y₀)²} G(t, x, y) F(y) dy along the real line.
    pub fn psi_regularized(&self, f: &dyn Source, t: f64, x: f64, eps: f64, y0: f64) -> Result<PsiValue, EvolutionError> {
        check_point(t, x)?;
        self.check_source(f)?;
        let ceiling = 2.0 / (4.0 * t) / self.theta.tan();
        if !(eps > 0.0 && eps < ceiling) {
            return Err(EvolutionError::Argument(format!("ε = {eps} outside (0, 2a/tan θ = {ceiling})")));
        }
        let green = &self.green;
        let log_env = |y: f64| f.log_real_bound(y) - eps * (y - y0) * (y - y0);
        let scale = 1.0 / eps.sqrt();
        let level = self.cfg.tail_level();
        let qerr = |source| EvolutionError::Quadrature { t, x, source };
        let right = y0 + truncation_point(&|s| log_env(y0 + s), 0.0, scale, level).map_err(qerr)?;
        let left = y0 - truncation_point(&|s| log_env(y0 - s), 0.0, scale, level).map_err(qerr)?;
        let b = f.growth().b;
        let piece = |lo: f64, hi: f64| Piece {
            g: Box::new(move |y: f64| {
                let z = C64::new(y, 0.0);
                let g = green.kernel_value(t, x, z).unwrap_or(C64::new(f64::NAN, f64::NAN));
                (-eps * (y - y0) * (y - y0)).exp() * g * f.eval(z)
            }),
            lo,
            hi,
            rate: Box::new(move |y: f64| ((y - x).abs() + x.abs() + y.abs()) / (2.0 * t) + 2.0 * eps * (y - y0).abs() + b + 1.0),
        };
        let mut pieces = Vec::new();
        match self.green.spec {
            GreensFunctionSpec::Free => pieces.push(piece(left, right)),
            _ => {
                let centrifugal = self.green.decoupled();
                if left < 0.0 && !(centrifugal && x > 0.0) {
                    pieces.push(piece(left, right.min(0.0)));
                }
                if right > 0.0 && !(centrifugal && x < 0.0) {
                    pieces.push(piece(left.max(0.0), right));
                }
            }
        }
        integrate_pieces(&pieces, &self.cfg).map(PsiValue::from_outcome).map_err(qerr)
    }

    /// Regularized values on the ladder ε = r·a(t), a = 1/(4t), extrapolated to ε = 0 (y₀ = 0).
    pub fn psi_regularized_limit(&self, f: &dyn Source, t: f64, x: f64, ladder: &[f64]) -> Result<C64, EvolutionError> {
        if ladder.len() < 2 {
            return Err(EvolutionError::Argument("ε ladder needs at least two values".into()));
        }
        let a = 1.0 / (4.0 * t);
        let eps: Vec<f64> = ladder.iter().map(|r| r * a).collect();
        let vals = eps
            .iter()
            .map(|&e| self.psi_regularized(f, t, x, e, 0.0).map(|v| v.value))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(neville_at_zero(&eps, &vals))
    }

    /// Exponents β₁, β₂ of the leading corrections c₁x^{β₁} + c₂x^{β₂} to Ψ(t, x) − Ψ(t, 0±).
    fn boundary_exponents(&self) -> [C64; 2] {
        let one = C64::new(1.0, 0.0);
        match (self.green.spec, self.green.order()) {
            (GreensFunctionSpec::CentrifugalAttractive { .. }, Some(nu)) => [0.5 - nu, 0.5 + nu],
            (GreensFunctionSpec::CentrifugalRepulsive { .. }, Some(nu)) => [0.5 + nu, 2.5 + nu],
            _ => [one, 2.0 * one],
        }
    }

    /// Limit x → 0± of a quantity sampled at ±δ, ±2δ, ±4δ.
    fn trace_at_zero(&self, side: f64, sample: impl Fn(f64) -> Result<C64, EvolutionError>) -> Result<C64, EvolutionError> {
        let d = side * BOUNDARY_DELTA;
        let v = [sample(d)?, sample(2.0 * d)?, sample(4.0 * d)?];
        Ok(extrapolate_to_zero(v, self.boundary_exponents()))
    }

    /// (Ψ(t, 0⁺), Ψ(t, 0⁻)).
    pub fn boundary_values(&self, f: &dyn Source, t: f64) -> Result<(C64, C64), EvolutionError> {
        let at = |x: f64| self.psi(f, t, x).map(|v| v.value);
        Ok((self.trace_at_zero(1.0, at)?, self.trace_at_zero(-1.0, at)?))
    }

    /// Ψ and Ψₓ at 0±. The centrifugal kernels have ∂ₓG̃ unbounded as x → 0, so their
    /// derivative traces are not offered.
    pub fn boundary_trace(&self, f: &dyn Source, t: f64) -> Result<BoundaryTrace, EvolutionError> {
        if self.green.decoupled() {
            return Err(EvolutionError::Capability("derivative traces of centrifugal kernels are unbounded at 0".into()));
        }
        let (psi_plus, psi_minus) = self.boundary_values(f, t)?;
        let at = |x: f64| self.psi_dx(f, t, x).map(|v| v.value);
        Ok(BoundaryTrace { psi_plus, psi_minus, dpsi_plus: self.trace_at_zero(1.0, at)?, dpsi_minus: self.trace_at_zero(-1.0, at)? })
    }

    /// ‖M(Ψ(0⁺), Ψ(0⁻))ᵀ − N(Ψₓ(0⁺), −Ψₓ(0⁻))ᵀ‖.
    pub fn transmission_residual(&self, f: &dyn Source, t: f64) -> Result<f64, EvolutionError> {
        let tc = transmission_matrices(&self.green.spec);
        if self.green.decoupled() {
            let (p, m) = self.boundary_values(f, t)?;
            return Ok(tc.residual(p, m, C64::new(0.0, 0.0), C64::new(0.0, 0.0)));
        }
        let b = self.boundary_trace(f, t)?;
        Ok(tc.residual(b.psi_plus, b.psi_minus, b.dpsi_plus, b.dpsi_minus))
    }

    /// i∂ₜΨ − (−∂ₓ²Ψ + VΨ) by central differences.
    pub fn psi_schrodinger_residual(&self, f: &dyn Source, t: f64, x: f64, h_t: f64, h_x: f64) -> Result<C64, EvolutionError> {
        if !(h_t > 0.0 && h_t < t) {
            return Err(EvolutionError::Argument(format!("h_t = {h_t} must lie in (0, t)")));
        }
        if !(h_x > 0.0 && h_x < x.abs()) {
            return Err(EvolutionError::Argument(format!("stencil x ± {h_x} crosses 0")));
        }
        let p = |tt: f64, xx: f64| self.psi(f, tt, xx).map(|v| v.value);
        let dt = (p(t + h_t, x)? - p(t - h_t, x)?) / (2.0 * h_t);
        let c = p(t, x)?;
        let dxx = (p(t, x + h_x)? - 2.0 * c + p(t, x - h_x)?) / (h_x * h_x);
        Ok(C64::new(0.0, 1.0) * dt + dxx - self.green.spec.potential(x) * c)
    }

    /// |Ψ(t, x; F) − F(x)| along a decreasing sequence of times.
    pub fn initial_recovery_scan(&self, f: &dyn Source, x: f64, t_seq: &[f64]) -> Result<Vec<RecoveryRow>, EvolutionError> {
        if t_seq.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(EvolutionError::Argument("t_seq must be strictly decreasing".into()));
        }
        check_point(t_seq.last().copied().unwrap_or(1.0), x)?;
        let fx = f.eval(C64::new(x, 0.0));
        Ok(t_seq
            .par_iter()
            .map(|&t| {
                let v = PsiValue::from_result(self.psi(f, t, x));
                RecoveryRow { t, error: (v.value - fx).norm(), converged: v.converged }
            })
            .collect())
    }

    /// Ψ on every point of the compact, in parallel.
    fn psi_on(&self, f: &dyn Source, t: f64, xs: &[f64]) -> Vec<PsiValue> {
        xs.par_iter().map(|&x| PsiValue::from_result(self.psi(f, t, x))).collect()
    }

    /// sup over the compact of |Ψ(t,·;F_n) − Ψ(t,·;φ_κ)| for each n, with F_n evaluated
    /// directly and through Σ_l C_l(n) Ψ(t,·;φ_{κ_l(n)}).
    ///
    /// The linearity residual is max|direct − summed| divided by Σ_l|C_l(n)|, the scale of
    /// the cancellation in the sum.
    pub fn supershift_scan(
        &self,
        family: &dyn SupershiftFamily,
        k0: f64,
        kappa: f64,
        n_seq: &[usize],
        t: f64,
        compact: &Compact,
    ) -> Result<Vec<SupershiftRow>, EvolutionError> {
        check_point(t, compact.lo)?;
        let xs = compact.points();
        let (ulo, uhi) = family.admissible();
        let target = self.psi_on(&FamilyMember { family, kappa: C64::new(kappa, 0.0) }, t, &xs);
        let mut cache: HashMap<(usize, usize), Vec<PsiValue>> = HashMap::new();
        let mut rows = Vec::with_capacity(n_seq.len());
        for &n in n_seq {
            let shift = build_supershift_plane_waves(k0, kappa, n)?;
            if shift.nodes.iter().any(|&k| k < ulo || k > uhi) {
                return Err(EvolutionError::Argument(format!("nodes of order {n} leave the admissible band [{ulo}, {uhi}]")));
            }
            let direct = self.psi_on(&ShiftMember { family, shift: &shift }, t, &xs);
            let mut summed = vec![C64::new(0.0, 0.0); xs.len()];
            let mut converged = direct.iter().chain(&target).all(|v| v.converged);
            for (j, (&c, &k)) in shift.coefficients.iter().zip(&shift.nodes).enumerate() {
                let g = gcd(j, n);
                let vals = cache
                    .entry((j / g, n / g))
                    .or_insert_with(|| self.psi_on(&FamilyMember { family, kappa: C64::new(k, 0.0) }, t, &xs));
                for (s, v) in summed.iter_mut().zip(vals.iter()) {
                    *s += c * v.value;
                    converged &= v.converged;
                }
            }
            let mass: f64 = shift.coefficients.iter().map(|c| c.abs()).sum();
            let sup_error = direct.iter().zip(&target).map(|(d, g)| (d.value - g.value).norm()).fold(0.0, f64::max);
            let lin = direct.iter().zip(&summed).map(|(d, s)| (d.value - s).norm()).fold(0.0, f64::max) / mass;
            rows.push(SupershiftRow { n, sup_error, linearity_residual: lin, step: compact.step(), converged });
        }
        Ok(rows)
    }

    /// ∮ Ψ(t, x; φ_κ) dκ around a triangle, m Gauss–Legendre nodes per edge.
    pub fn kappa_holomorphy_check(
        &self,
        family: &dyn SupershiftFamily,
        t: f64,
        x: f64,
        triangle: [C64; 3],
        m: usize,
    ) -> Result<HolomorphyReport, EvolutionError> {
        check_point(t, x)?;
        if m == 0 {
            return Err(EvolutionError::Argument("m must be positive".into()));
        }
        let rule = gl_nodes(m);
        let mut integral = C64::new(0.0, 0.0);
        let mut quad_error = 0.0;
        let mut evaluations = 0;
        let mut converged = true;
        for i in 0..3 {
            let (a, b) = (triangle[i], triangle[(i + 1) % 3]);
            let half = (b - a) / 2.0;
            if half.norm() == 0.0 {
                continue;
            }
            let mid = (a + b) / 2.0;
            let vals: Vec<PsiValue> = rule
                .par_iter()
                .map(|&(s, _)| PsiValue::from_result(self.psi(&FamilyMember { family, kappa: mid + half * s }, t, x)))
                .collect();
            for (v, &(_, w)) in vals.iter().zip(&rule) {
                integral += half * w * v.value;
                quad_error += half.norm() * w * v.error;
                evaluations += v.evaluations;
                converged &= v.converged;
            }
        }
        Ok(HolomorphyReport { integral, quad_error, evaluations, converged })
    }
}

/// c₀ from v_k = c₀ + c₁(2^k h)^{β₁} + c₂(2^k h)^{β₂}, k = 0, 1, 2.
fn extrapolate_to_zero(v: [C64; 3], beta: [C64; 2]) -> C64 {
    let two = C64::new(2.0, 0.0);
    let (r1, r2) = (two.powc(beta[0]), two.powc(beta[1]));
    let (d1, d2) = (v[1] - v[0], v[2] - v[1]);
    let a = (d2 - r2 * d1) / (r1 - r2);
    let b = d1 - a;
    v[0] - a / (r1 - 1.0) - b / (r2 - 1.0)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryTrace {
    pub psi_plus: C64,
    pub psi_minus: C64,
    pub dpsi_plus: C64,
    pub dpsi_minus: C64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveryRow {
    pub t: f64,
    pub error: f64,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupershiftRow {
    pub n: usize,
    pub sup_error: f64,
    pub linearity_residual: f64,
    /// Grid step of the compact sampling.
    pub step: f64,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolomorphyReport {
    pub integral: C64,
    /// Σ |dκ| · (quadrature error estimate of Ψ) over the nodes.
    pub quad_error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Uniform sampling of an interval [lo, hi] not containing 0, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Compact {
    pub lo: f64,
    pub hi: f64,
    pub samples: usize,
}

impl Compact {
    pub fn new(lo: f64, hi: f64, samples: usize) -> Result<Self, EvolutionError> {
        if !(lo < hi && lo.is_finite() && hi.is_finite()) {
            return Err(EvolutionError::Argument(format!("[{lo}, {hi}] is not an interval")));
        }
        if lo <= 0.0 && hi >= 0.0 {
            return Err(EvolutionError::Argument(format!("[{lo}, {hi}] contains 0")));
        }
        if samples < 2 {
            return Err(EvolutionError::Argument("need at least two samples".into()));
        }
        Ok(Compact { lo, hi, samples })
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.samples - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.samples).map(|i| if i + 1 == self.samples { self.hi } else { self.lo + i as f64 * self.step() }).collect()
    }
}

/// Propagator plus a fixed initial condition.
#[derive(Clone, Debug)]
pub struct EvolutionProblem {
    prop: Propagator,
    pub initial: InitialData,
}

/// Ψ on a (t, x) grid, stored t-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveField {
    pub t_grid: Vec<f64>,
    pub x_grid: Vec<f64>,
    pub values: Vec<PsiValue>,
    pub meta: FieldMeta,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldMeta {
    pub spec: GreensFunctionSpec,
    pub theta: f64,
    pub rel_tol: f64,
    pub evaluations: usize,
    pub unconverged: usize,
}

impl WaveField {
    pub fn get(&self, it: usize, ix: usize) -> &PsiValue {
        &self.values[it * self.x_grid.len() + ix]
    }
}

impl EvolutionProblem {
    pub fn new(spec: GreensFunctionSpec, initial: InitialData, theta: f64, cfg: QuadratureConfig) -> Result<Self, EvolutionError> {
        let prop = Propagator::new(spec, theta, cfg)?;
        prop.check_source(&initial)?;
        Ok(EvolutionProblem { prop, initial })
    }

    pub fn propagator(&self) -> &Propagator {
        &self.prop
    }

    pub fn evolve(&self, t: f64, x: f64) -> Result<PsiValue, EvolutionError> {
        self.prop.psi(&self.initial, t, x)
    }

    pub fn evolve_dx(&self, t: f64, x: f64) -> Result<PsiValue, EvolutionError> {
        self.prop.psi_dx(&self.initial, t, x)
    }

    /// Every cell is evaluated independently. Cells whose quadrature fails carry
    /// `converged = false` and the best available estimate.
    pub fn evolve_grid(&self, t_grid: &[f64], x_grid: &[f64]) -> Result<WaveField, EvolutionError> {
        if t_grid.is_empty() || x_grid.is_empty() {
            return Err(EvolutionError::Argument("empty grid".into()));
        }
        if t_grid.windows(2).any(|w| !(w[0] < w[1])) || x_grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(EvolutionError::Argument("grids must be strictly increasing".into()));
        }
        if t_grid.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
            return Err(EvolutionError::Argument("times must be positive".into()));
        }
        if x_grid.iter().any(|&x| x == 0.0 || !x.is_finite()) {
            return Err(EvolutionError::Argument("x grid must exclude 0".into()));
        }
        let cells: Vec<(f64, f64)> = t_grid.iter().flat_map(|&t| x_grid.iter().map(move |&x| (t, x))).collect();
        let values: Vec<PsiValue> = cells.par_iter().map(|&(t, x)| PsiValue::from_result(self.evolve(t, x))).collect();
        let meta = FieldMeta {
            spec: self.prop.green.spec,
            theta: self.prop.theta,
            rel_tol: self.prop.cfg.rel_tol,
            evaluations: values.iter().map(|v| v.evaluations).sum(),
            unconverged: values.iter().filter(|v| !v.converged).count(),
        };
        Ok(WaveField { t_grid: t_grid.to_vec(), x_grid: x_grid.to_vec(), values, meta })
    }

    pub fn boundary_values(&self, t: f64) -> Result<(C64, C64), EvolutionError> {
        self.prop.boundary_values(&self.initial, t)
    }

    pub fn boundary_trace(&self, t: f64) -> Result<BoundaryTrace, EvolutionError> {
        self.prop.boundary_trace(&self.initial, t)
    }

    pub fn transmission_residual(&self, t: f64) -> Result<f64, EvolutionError> {
        self.prop.transmission_residual(&self.initial, t)
    }

    pub fn initial_recovery_scan(&self, x: f64, t_seq: &[f64]) -> Result<Vec<RecoveryRow>, EvolutionError> {
        self.prop.initial_recovery_scan(&self.initial, x, t_seq)
    }

    pub fn psi_schrodinger_residual(&self, t: f64, x: f64, h_t: f64, h_x: f64) -> Result<C64, EvolutionError> {
        self.prop.psi_schrodinger_residual(&self.initial, t, x, h_t, h_x)
    }

    pub fn evolve_regularized_limit(&self, t: f64, x: f64) -> Result<C64, EvolutionError> {
        self.prop.psi_regularized_limit(&self.initial, t, x, &PSI_EPS_LADDER)
    }
}
