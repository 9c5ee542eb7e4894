//! Crank–Nicolson reference solver for the same Cauchy problems on [−L, L].
//!
//! The grid has a node at each side of the origin when an interface condition is imposed,
//! one node at 0 for the free particle and starts at ±x_min for the centrifugal potentials.
//! Interface rows enforce M(ψ₊, ψ₋)ᵀ = N(ψₓ₊, −ψₓ₋)ᵀ with one-sided second-order
//! differences, and are solved together with the CN rows by a banded LU.
//!
//! Non-decaying data is cut off by a smooth window ½erfc((|x| − 0.7L)/(0.05L)) and the
//! outer 15% carries the absorbing potential −iη((|x| − 0.85L)/(0.15L))².

mod band;

use crate::evolution::{Compact, EvolutionError, EvolutionProblem, Source};
use crate::greens::{transmission_matrices, GreensFunctionSpec, TransmissionCondition};
use crate::specfun::erf_c;
use band::Banded;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const WINDOW_CENTER: f64 = 0.7;
pub const WINDOW_WIDTH: f64 = 0.05;
pub const PAD_START: f64 = 0.85;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("scheme setup: {0}")]
    Setup(String),
    #[error("singular interface system")]
    Singular,
    #[error(transparent)]
    Evolution(#[from] EvolutionError),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Boundary {
    AbsorbingPad { strength: f64 },
    HardWall,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdScheme {
    /// Half-width of the domain.
    pub l: f64,
    /// Interior points per half-line.
    pub n_x: usize,
    pub n_t: usize,
    pub boundary: Boundary,
    /// Collar |x| < x_min removed for the centrifugal potentials.
    pub x_min: f64,
    /// Leading steps taken as two implicit Euler half-steps each, which damps the
    /// high-frequency error of data that violates the boundary condition.
    pub startup: usize,
}

impl Default for FdScheme {
    fn default() -> Self {
        FdScheme { l: 20.0, n_x: 1 << 12, n_t: 400, boundary: Boundary::AbsorbingPad { strength: 10.0 }, x_min: 0.05, startup: 2 }
    }
}

impl FdScheme {
    pub fn validate(&self) -> Result<(), OracleError> {
        if self.n_x < 16 || self.n_t < 16 {
            return Err(OracleError::Setup(format!("n_x = {}, n_t = {} must be at least 16", self.n_x, self.n_t)));
        }
        if self.startup > self.n_t {
            return Err(OracleError::Setup(format!("startup = {} exceeds n_t = {}", self.startup, self.n_t)));
        }
        if !(self.l > 0.0 && self.l.is_finite()) {
            return Err(OracleError::Setup(format!("L = {} must be positive", self.l)));
        }
        if !(self.x_min > 0.0 && self.x_min < 0.1 * self.l) {
            return Err(OracleError::Setup(format!("x_min = {} outside (0, L/10)", self.x_min)));
        }
        if let Boundary::AbsorbingPad { strength } = self.boundary {
            if !(strength >= 0.0 && strength.is_finite()) {
                return Err(OracleError::Setup(format!("pad strength {strength} must be nonnegative")));
            }
        }
        Ok(())
    }

    /// Same domain, spacing and time step halved.
    pub fn refined(&self) -> Self {
        FdScheme { n_x: 2 * self.n_x + 1, n_t: 2 * self.n_t, ..*self }
    }

    fn window(&self, x: f64) -> f64 {
        match self.boundary {
            Boundary::AbsorbingPad { .. } => {
                let u = (x.abs() - WINDOW_CENTER * self.l) / (WINDOW_WIDTH * self.l);
                erf_c(C64::new(u, 0.0)).map(|e| 0.5 * (1.0 - e.re)).unwrap_or(if u > 0.0 { 0.0 } else { 1.0 })
            }
            Boundary::HardWall => 1.0,
        }
    }

    fn pad(&self, x: f64) -> f64 {
        match self.boundary {
            Boundary::AbsorbingPad { strength } => {
                let u = (x.abs() - PAD_START * self.l) / ((1.0 - PAD_START) * self.l);
                if u > 0.0 {
                    strength * u * u
                } else {
                    0.0
                }
            }
            Boundary::HardWall => 0.0,
        }
    }
}

/// Nodes x₀ + i·h, i < len, stored from `start` in the solution vector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub x0: f64,
    pub h: f64,
    pub start: usize,
    pub len: usize,
}

impl Branch {
    fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.h
    }

    fn end(&self) -> f64 {
        self.x(self.len - 1)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CnSolution {
    pub t: f64,
    pub branches: Vec<Branch>,
    pub values: Vec<C64>,
    /// Largest |‖ψⁿ⁺¹‖ − ‖ψⁿ‖| / ‖ψⁿ‖ over the Crank–Nicolson steps.
    pub max_norm_drift: f64,
    /// Largest discrete transmission residual over the steps, relative to the trace size.
    pub max_interface_residual: f64,
}

impl CnSolution {
    /// Four-point Lagrange interpolation inside the branch containing x.
    pub fn interpolate(&self, x: f64) -> Option<C64> {
        let b = self.branches.iter().find(|b| x >= b.x0 - 1e-12 * b.h && x <= b.end() + 1e-12 * b.h)?;
        if b.len < 4 {
            return None;
        }
        let i = ((x - b.x0) / b.h).floor().max(0.0) as usize;
        let i0 = i.saturating_sub(1).min(b.len - 4);
        let s = (x - b.x(i0)) / b.h;
        let mut out = C64::new(0.0, 0.0);
        for j in 0..4 {
            let w: f64 = (0..4).filter(|&m| m != j).map(|m| (s - m as f64) / (j as f64 - m as f64)).product();
            out += w * self.values[b.start + i0 + j];
        }
        Some(out)
    }

    /// Discrete L² norm.
    pub fn norm(&self) -> f64 {
        norm(&self.values, &self.branches)
    }
}

fn norm(v: &[C64], branches: &[Branch]) -> f64 {
    branches.iter().map(|b| v[b.start..b.start + b.len].iter().map(|z| z.norm_sqr()).sum::<f64>() * b.h).sum::<f64>().sqrt()
}

/// Grid layout: branches and, when present, the indices of ψ(0⁻), ψ(0⁺).
fn layout(spec: &GreensFunctionSpec, s: &FdScheme) -> (Vec<Branch>, Option<(usize, usize)>) {
    let n = s.n_x;
    match spec {
        GreensFunctionSpec::Free => {
            let h = s.l / (n + 1) as f64;
            (vec![Branch { x0: -(n as f64) * h, h, start: 0, len: 2 * n + 1 }], None)
        }
        GreensFunctionSpec::PointInteraction { .. } => {
            let h = s.l / (n + 1) as f64;
            let left = Branch { x0: -(n as f64) * h, h, start: 0, len: n + 1 };
            let right = Branch { x0: 0.0, h, start: n + 1, len: n + 1 };
            (vec![left, right], Some((n, n + 1)))
        }
        _ => {
            let h = (s.l - s.x_min) / (n + 1) as f64;
            let left = Branch { x0: -(s.x_min + n as f64 * h), h, start: 0, len: n };
            let right = Branch { x0: s.x_min + h, h, start: n, len: n };
            (vec![left, right], None)
        }
    }
}

/// Interface row r: coefficients on (ψ₋₂, ψ₋₁, ψ₋₀, ψ₊₀, ψ₊₁, ψ₊₂), scaled by h.
fn interface_row(tc: &TransmissionCondition, r: usize, h: f64) -> [C64; 6] {
    let (m, n) = (tc.m[r], tc.n[r]);
    [n[1] * 0.5, -n[1] * 2.0, m[1] * h + n[1] * 1.5, m[0] * h + n[0] * 1.5, -n[0] * 2.0, n[0] * 0.5]
}

fn interface_residual(tc: &TransmissionCondition, v: &[C64], lm: usize, h: f64) -> f64 {
    let idx = [lm - 2, lm - 1, lm, lm + 1, lm + 2, lm + 3];
    let scale = idx.iter().map(|&i| v[i].norm()).fold(0.0, f64::max).max(1e-300);
    (0..2)
        .map(|r| interface_row(tc, r, h).iter().zip(idx).map(|(c, i)| c * v[i]).sum::<C64>().norm_sqr())
        .sum::<f64>()
        .sqrt()
        / (scale * h)
}

/// Largest potential accepted on the grid; λ/x² at the collar is far below this.
const V_LIMIT: f64 = 1e12;

/// Evolves F to t_final with `n_t` Crank–Nicolson steps.
pub fn cn_evolve(scheme: &FdScheme, spec: &GreensFunctionSpec, f: &dyn Fn(f64) -> C64, t_final: f64) -> Result<CnSolution, OracleError> {
    let tc = transmission_matrices(spec);
    run(scheme, spec, &|x| spec.potential(x), &tc, f, t_final)
}

/// Two half-lines joined by an arbitrary interface condition, with potential V.
pub fn cn_evolve_interface(
    scheme: &FdScheme,
    potential: &dyn Fn(f64) -> f64,
    tc: &TransmissionCondition,
    f: &dyn Fn(f64) -> C64,
    t_final: f64,
) -> Result<CnSolution, OracleError> {
    let shape = GreensFunctionSpec::PointInteraction { phi: 0.0, a_j: C64::new(-1.0, 0.0), b_j: C64::new(0.0, 0.0) };
    run(scheme, &shape, potential, tc, f, t_final)
}

fn run(
    scheme: &FdScheme,
    spec: &GreensFunctionSpec,
    potential: &dyn Fn(f64) -> f64,
    tc: &TransmissionCondition,
    f: &dyn Fn(f64) -> C64,
    t_final: f64,
) -> Result<CnSolution, OracleError> {
    scheme.validate()?;
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(OracleError::Setup(format!("t = {t_final} must be positive")));
    }
    let (branches, iface) = layout(spec, scheme);
    let nn: usize = branches.iter().map(|b| b.len).sum();
    let h = branches[0].h;
    let dt = t_final / scheme.n_t as f64;
    let mut psi = vec![C64::new(0.0, 0.0); nn];
    let mut pot = vec![C64::new(0.0, 0.0); nn];
    for b in &branches {
        for i in 0..b.len {
            let x = b.x(i);
            let v = if x == 0.0 { 0.0 } else { potential(x) };
            if !(v.abs() < V_LIMIT) {
                return Err(OracleError::Setup(format!("potential {v} at x = {x}")));
            }
            psi[b.start + i] = f(x) * scheme.window(x);
            pot[b.start + i] = C64::new(v, -scheme.pad(x));
        }
    }
    // |F| at the walls against its size on the inner half of the domain
    let inner = (0..=100)
        .map(|i| f(scheme.l * (i as f64 / 100.0 - 0.5)).norm())
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max);
    let edge = [scheme.l, -scheme.l].iter().map(|&x| f(x).norm() * scheme.window(x)).fold(0.0, f64::max);
    if !(edge <= 1e-6 * inner) {
        return Err(OracleError::Setup(format!("|F| at ±L is {edge:e} against {inner:e} inside; enlarge L or use the pad")));
    }

    let constraint = |i: usize| iface.is_some_and(|(lm, lp)| i == lm || i == lp);
    // H ψ with walls outside every branch
    let mut hmat = Banded::zeros(nn, 1, 1);
    let ih2 = 1.0 / (h * h);
    for b in &branches {
        for i in 0..b.len {
            let k = b.start + i;
            if constraint(k) {
                continue;
            }
            hmat.set(k, k, 2.0 * ih2 + pot[k]);
            if i > 0 {
                hmat.set(k, k - 1, C64::new(-ih2, 0.0));
            }
            if i + 1 < b.len {
                hmat.set(k, k + 1, C64::new(-ih2, 0.0));
            }
        }
    }
    let half = C64::new(0.0, 0.5 * dt);
    let mut lhs = Banded::zeros(nn, 3, 3);
    for k in 0..nn {
        if constraint(k) {
            continue;
        }
        for j in k.saturating_sub(1)..=(k + 1).min(nn - 1) {
            let delta = if j == k { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            lhs.set(k, j, delta + half * hmat.get(k, j));
        }
    }
    if let Some((lm, _)) = iface {
        for r in 0..2 {
            for (c, v) in interface_row(tc, r, h).into_iter().enumerate() {
                lhs.set(lm + r, lm + c - 2, v);
            }
        }
    }
    let lu = lhs.factor().ok_or(OracleError::Singular)?;

    let mut hpsi = vec![C64::new(0.0, 0.0); nn];
    let mut max_norm_drift: f64 = 0.0;
    let mut max_interface_residual: f64 = 0.0;
    let mut last = norm(&psi, &branches);
    for step in 0..scheme.n_t {
        if step < scheme.startup {
            // (I + iΔt/2·H) is also the implicit Euler matrix for a half-step
            for _ in 0..2 {
                for k in 0..nn {
                    if constraint(k) {
                        psi[k] = C64::new(0.0, 0.0);
                    }
                }
                lu.solve(&mut psi);
            }
            last = norm(&psi, &branches);
        } else {
            hmat.mul(&psi, &mut hpsi);
            for k in 0..nn {
                psi[k] = if constraint(k) { C64::new(0.0, 0.0) } else { psi[k] - half * hpsi[k] };
            }
            lu.solve(&mut psi);
            let now = norm(&psi, &branches);
            max_norm_drift = max_norm_drift.max((now - last).abs() / last.max(1e-300));
            last = now;
        }
        if let Some((lm, _)) = iface {
            max_interface_residual = max_interface_residual.max(interface_residual(tc, &psi, lm, h));
        }
    }
    Ok(CnSolution { t: t_final, branches, values: psi, max_norm_drift, max_interface_residual })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub sup: f64,
    pub l2: f64,
    /// (4/3)·sup|u_h − u_{h/2}| over the compact.
    pub cn_error_estimate: f64,
    /// max(1e−3, 5·cn_error_estimate).
    pub tolerance: f64,
    pub max_interface_residual: f64,
    pub passed: bool,
}

/// Contour values of the problem against CN at the scheme's resolution on the compact.
pub fn cross_validate(prob: &EvolutionProblem, scheme: &FdScheme, t: f64, compact: &Compact) -> Result<CrossValidation, OracleError> {
    let lim = 0.25 * scheme.l;
    if compact.lo < -lim || compact.hi > lim {
        return Err(OracleError::Setup(format!("compact [{}, {}] not inside ±L/4 = ±{lim}", compact.lo, compact.hi)));
    }
    let spec = prob.propagator().spec();
    if spec.is_centrifugal() && compact.lo.abs().min(compact.hi.abs()) < 2.0 * scheme.x_min {
        return Err(OracleError::Setup("compact reaches into the collar".into()));
    }
    let f = |x: f64| prob.initial.eval(C64::new(x, 0.0));
    let (coarse, fine) = rayon::join(|| cn_evolve(scheme, spec, &f, t), || cn_evolve(&scheme.refined(), spec, &f, t));
    let (coarse, fine) = (coarse?, fine?);
    let xs = compact.points();
    let contour = xs.par_iter().map(|&x| prob.evolve(t, x).map(|v| v.value)).collect::<Result<Vec<_>, _>>()?;
    let mut sup: f64 = 0.0;
    let mut l2 = 0.0;
    let mut est: f64 = 0.0;
    for (&x, c) in xs.iter().zip(&contour) {
        let (uc, uf) = (coarse.interpolate(x), fine.interpolate(x));
        let (uc, uf) = uc.zip(uf).ok_or_else(|| OracleError::Setup(format!("x = {x} is off the grid")))?;
        let d = (uc - c).norm();
        sup = sup.max(d);
        l2 += d * d * compact.step();
        est = est.max((uc - uf).norm() * 4.0 / 3.0);
    }
    let tolerance = (5.0 * est).max(1e-3);
    Ok(CrossValidation {
        sup,
        l2: l2.sqrt(),
        cn_error_estimate: est,
        tolerance,
        max_interface_residual: coarse.max_interface_residual,
        passed: sup < tolerance,
    })
}

/// log₂ of |u_h − u_{h/2}| / |u_{h/2} − u_{h/4}| (sup over the compact).
pub fn observed_order(
    scheme: &FdScheme,
    spec: &GreensFunctionSpec,
    f: &(dyn Fn(f64) -> C64 + Sync),
    t: f64,
    compact: &Compact,
) -> Result<f64, OracleError> {
    let s2 = scheme.refined();
    let runs = [*scheme, s2, s2.refined()]
        .par_iter()
        .map(|s| cn_evolve(s, spec, f, t))
        .collect::<Result<Vec<_>, _>>()?;
    let xs = compact.points();
    let diff = |a: &CnSolution, b: &CnSolution| {
        xs.iter().map(|&x| (a.interpolate(x).unwrap_or_default() - b.interpolate(x).unwrap_or_default()).norm()).fold(0.0, f64::max)
    };
    Ok((diff(&runs[0], &runs[1]) / diff(&runs[1], &runs[2])).log2())
}
