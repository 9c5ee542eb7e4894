//! Adaptive composite Gauss–Legendre on a union of finite pieces.
//!
//! Each panel carries a 24-point value and |I₂₄ − I₁₂| as its error estimate. The panel
//! with the largest estimate is bisected until the summed estimate drops below the
//! tolerance or the evaluation budget runs out.

use super::gauss::gl_rule;
use super::{QuadratureConfig, QuadratureError};
use num_complex::Complex64 as C64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

/// One finite piece of a path, parametrized by a real variable on [lo, hi].
///
/// `g` already includes the Jacobian. `rate` is a rough bound on |d/dy log g|, used to
/// size the initial panels so that each spans at most π/2 of phase.
pub struct Piece<'a> {
    pub g: Box<dyn Fn(f64) -> C64 + 'a>,
    pub lo: f64,
    pub hi: f64,
    pub rate: Box<dyn Fn(f64) -> f64 + 'a>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadOutcome {
    pub value: C64,
    pub error: f64,
    /// ∫|g| estimate, the scale against which cancellation is judged.
    pub l1: f64,
    pub evaluations: usize,
}

#[derive(Clone, Copy)]
struct Panel {
    piece: usize,
    lo: f64,
    hi: f64,
    value: C64,
    err: f64,
    l1: f64,
}

struct Keyed(f64, usize);

impl PartialEq for Keyed {
    fn eq(&self, o: &Self) -> bool {
        self.0.total_cmp(&o.0) == Ordering::Equal && self.1 == o.1
    }
}
impl Eq for Keyed {}
impl PartialOrd for Keyed {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Keyed {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.total_cmp(&o.0).then(o.1.cmp(&self.1))
    }
}

fn eval_panel(g: &dyn Fn(f64) -> C64, piece: usize, lo: f64, hi: f64) -> Panel {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut i12 = C64::new(0.0, 0.0);
    for &(x, w) in gl_rule(12) {
        i12 += w * g(mid + half * x);
    }
    let mut i24 = C64::new(0.0, 0.0);
    let mut l1 = 0.0;
    for &(x, w) in gl_rule(24) {
        let v = g(mid + half * x);
        i24 += w * v;
        l1 += w * v.norm();
    }
    let (i12, i24, l1) = (i12 * half, i24 * half, l1 * half.abs());
    let err = (i24 - i12).norm();
    Panel { piece, lo, hi, value: i24, err: if err.is_finite() { err } else { f64::INFINITY }, l1 }
}

const EVALS_PER_PANEL: usize = 36;

/// Integrates Σ_pieces ∫ g over the given pieces to the tolerance in `cfg`.
pub fn integrate_pieces(pieces: &[Piece<'_>], cfg: &QuadratureConfig) -> Result<QuadOutcome, QuadratureError> {
    let mut panels: Vec<Panel> = Vec::new();
    let mut evals = 0usize;
    for (idx, p) in pieces.iter().enumerate() {
        if !(p.lo.is_finite() && p.hi.is_finite()) {
            return Err(QuadratureError::Precondition(format!("non-finite piece [{}, {}]", p.lo, p.hi)));
        }
        if p.hi <= p.lo {
            continue;
        }
        let mut y = p.lo;
        while y < p.hi {
            let r0 = (p.rate)(y).abs().max(1e-300);
            let mut w = (FRAC_PI_2 / r0).min(p.hi - y);
            let r1 = (p.rate)(y + w).abs();
            if r1 > r0 {
                w = (FRAC_PI_2 / r1).min(w);
            }
            w = w.max(1e-12 * (p.hi - p.lo));
            let hi = if y + w >= p.hi * (1.0 - 1e-15) { p.hi } else { y + w };
            panels.push(eval_panel(&*p.g, idx, y, hi));
            evals += EVALS_PER_PANEL;
            if evals > cfg.max_nodes {
                let best = panels.iter().map(|p| p.value).sum();
                return Err(QuadratureError::Accuracy { best, error: f64::INFINITY, evaluations: evals });
            }
            y = hi;
        }
    }
    let mut heap: BinaryHeap<Keyed> = panels.iter().enumerate().map(|(i, p)| Keyed(p.err, i)).collect();
    loop {
        let value: C64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.err).sum();
        let l1: f64 = panels.iter().map(|p| p.l1).sum();
        let tol = (cfg.rel_tol * value.norm().max(1e-2 * l1)).max(64.0 * f64::EPSILON * l1).max(cfg.abs_tol);
        if err <= tol || panels.is_empty() {
            let mut sorted = panels.clone();
            sorted.sort_by(|a, b| a.piece.cmp(&b.piece).then(a.lo.total_cmp(&b.lo)));
            let value = pairwise(&sorted.iter().map(|p| p.value).collect::<Vec<_>>());
            return Ok(QuadOutcome { value, error: err, l1, evaluations: evals });
        }
        // Bisect the worst panels until the error drops by a useful fraction before re-summing.
        let target = err - 0.5 * (err - tol);
        let mut running = err;
        while running > target {
            let Some(Keyed(_, i)) = heap.pop() else { break };
            let p = panels[i];
            let mid = 0.5 * (p.lo + p.hi);
            if mid <= p.lo || mid >= p.hi || evals + 2 * EVALS_PER_PANEL > cfg.max_nodes {
                return Err(QuadratureError::Accuracy { best: value, error: err, evaluations: evals });
            }
            let g = &*pieces[p.piece].g;
            let left = eval_panel(g, p.piece, p.lo, mid);
            let right = eval_panel(g, p.piece, mid, p.hi);
            evals += 2 * EVALS_PER_PANEL;
            running += left.err + right.err - p.err;
            panels[i] = left;
            heap.push(Keyed(left.err, i));
            panels.push(right);
            heap.push(Keyed(right.err, panels.len() - 1));
        }
    }
}

fn pairwise(v: &[C64]) -> C64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise(a) + pairwise(b)
}

/// Smallest Y ≥ lo past the envelope peak with log_env(Y) ≤ peak + ln(level).
///
/// Walks outward in steps of `scale/4`, then bisects the last bracket.
pub fn truncation_point(log_env: &dyn Fn(f64) -> f64, lo: f64, scale: f64, level: f64) -> Result<f64, QuadratureError> {
    let step = 0.25 * scale;
    let drop = level.ln();
    let mut peak = log_env(lo);
    let mut prev = peak;
    let mut y = lo;
    for _ in 0..200_000 {
        let next = y + step;
        let v = log_env(next);
        if v.is_nan() {
            return Err(QuadratureError::Precondition(format!("envelope is NaN at {next}")));
        }
        peak = peak.max(v);
        if v < prev && v <= peak + drop {
            let (mut a, mut b) = (y, next);
            for _ in 0..60 {
                let m = 0.5 * (a + b);
                if log_env(m) <= peak + drop {
                    b = m;
                } else {
                    a = m;
                }
            }
            return Ok(b);
        }
        prev = v;
        y = next;
    }
    Err(QuadratureError::Precondition("envelope does not decay".into()))
}

/// Polynomial extrapolation of (h_i, v_i) to h = 0 by Neville's scheme.
pub fn neville_at_zero(h: &[f64], v: &[C64]) -> C64 {
    assert_eq!(h.len(), v.len());
    let mut p = v.to_vec();
    let n = p.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (h[i + m] * p[i] - h[i] * p[i + 1]) / (h[i + m] - h[i]);
        }
    }
    p[0]
}
