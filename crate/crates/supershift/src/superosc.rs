//! Superoscillating sequences F_n(z) = (cos(z/n) + ik sin(z/n))ⁿ = Σ_j C_j e^{ik_j z}
//! and plane-wave supershift families.

use crate::specfun::dd::{CDd, Dd};
use crate::specfun::ln_gamma_real;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SuperoscError {
    #[error("invalid argument: {0}")]
    Argument(String),
}

/// |f(z)| ≤ A e^{B|z|^p}, with p < 2.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthBound {
    pub a: f64,
    pub b: f64,
    pub p: f64,
}

impl GrowthBound {
    pub fn new(a: f64, b: f64, p: f64) -> Result<Self, SuperoscError> {
        if !(a >= 0.0 && b >= 0.0 && a.is_finite() && b.is_finite()) {
            return Err(SuperoscError::Argument(format!("need A, B ≥ 0, got A={a}, B={b}")));
        }
        if !(p > 0.0 && p < 2.0) {
            return Err(SuperoscError::Argument(format!("growth exponent must lie in (0,2), got {p}")));
        }
        Ok(GrowthBound { a, b, p })
    }

    /// Bounded functions: A e^{0·|z|}.
    pub fn bounded(a: f64) -> Self {
        GrowthBound { a, b: 0.0, p: 1.0 }
    }

    pub fn log_value(&self, r: f64) -> f64 {
        self.a.ln() + self.b * r.powf(self.p)
    }

    /// Bound of a product of two functions.
    pub fn product(&self, other: &GrowthBound) -> GrowthBound {
        let p = self.p.max(other.p);
        // B₁r^{p₁} + B₂r^{p₂} ≤ (B₁+B₂)(1 + r^p)
        let b = self.b + other.b;
        GrowthBound { a: self.a * other.a * b.exp(), b, p }
    }
}

/// How to evaluate F_n.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalForm {
    Sum,
    Product,
}

/// F_n(z) = Σ_j C_j e^{i k_j z}, k_j = 1 − 2j/n.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperoscillatingSequence {
    pub n: usize,
    pub k: f64,
    pub coefficients: Vec<f64>,
    pub frequencies: Vec<f64>,
}

fn binomial_coefficients(n: usize, k: f64) -> Vec<f64> {
    let p = 0.5 * (1.0 + k);
    let q = 0.5 * (1.0 - k);
    if n <= 50 {
        let mut out = Vec::with_capacity(n + 1);
        let mut binom = 1.0_f64;
        for j in 0..=n {
            out.push(binom * p.powi((n - j) as i32) * q.powi(j as i32));
            binom = binom * (n - j) as f64 / (j + 1) as f64;
        }
        return out;
    }
    let lf = |m: usize| ln_gamma_real(m as f64 + 1.0);
    (0..=n)
        .map(|j| {
            let lb = lf(n) - lf(j) - lf(n - j);
            let mag = lb + (n - j) as f64 * p.abs().ln() + j as f64 * q.abs().ln();
            let neg = (p < 0.0 && (n - j) % 2 == 1) ^ (q < 0.0 && j % 2 == 1);
            if neg {
                -mag.exp()
            } else {
                mag.exp()
            }
        })
        .collect()
}

/// Builds the sequence of order n with superoscillation frequency k, |k| > 1.
pub fn build_superosc(n: usize, k: f64) -> Result<SuperoscillatingSequence, SuperoscError> {
    if n == 0 {
        return Err(SuperoscError::Argument("n must be at least 1".into()));
    }
    if !(k.abs() > 1.0 && k.is_finite()) {
        return Err(SuperoscError::Argument(format!("|k| must exceed 1, got {k}")));
    }
    let frequencies = (0..=n).map(|j| 1.0 - 2.0 * j as f64 / n as f64).collect();
    Ok(SuperoscillatingSequence { n, k, coefficients: binomial_coefficients(n, k), frequencies })
}

impl SuperoscillatingSequence {
    pub fn eval(&self, z: C64, form: EvalForm) -> C64 {
        match form {
            EvalForm::Sum if self.n <= 50 => self.sum_dd(z),
            EvalForm::Sum => self
                .coefficients
                .iter()
                .zip(&self.frequencies)
                .map(|(&c, &kj)| c * (C64::new(0.0, kj) * z).exp())
                .sum(),
            EvalForm::Product => {
                let s = z / self.n as f64;
                (s.cos() + C64::new(0.0, self.k) * s.sin()).powu(self.n as u32)
            }
        }
    }

    // Terms reach (|k|+1)ⁿ/2ⁿ⁻¹ in size, so an f64 sum cancels badly. Coefficients
    // and powers of v = e^{iz/n} are carried in double-double; the rounding of v
    // itself only moves F_n by ~n·ε.
    fn sum_dd(&self, z: C64) -> C64 {
        let n = self.n;
        let half = Dd::from_f64(0.5);
        let p = (Dd::from_f64(1.0) + Dd::from_f64(self.k)) * half;
        let q = (Dd::from_f64(1.0) - Dd::from_f64(self.k)) * half;
        let mut pp = vec![Dd::from_f64(1.0); n + 1];
        let mut qq = vec![Dd::from_f64(1.0); n + 1];
        for m in 1..=n {
            pp[m] = pp[m - 1] * p;
            qq[m] = qq[m - 1] * q;
        }
        let v = CDd::from_c64((C64::new(0.0, 1.0) * z / n as f64).exp());
        let one = CDd::from_c64(C64::new(1.0, 0.0));
        let w = one / (v * v);
        let mut e = one;
        for _ in 0..n {
            e = e * v;
        }
        let mut binom = Dd::from_f64(1.0);
        let mut acc = CDd::default();
        for j in 0..=n {
            acc = acc + e.scale(binom * pp[n - j] * qq[j]);
            binom = binom * Dd::from_f64((n - j) as f64) / Dd::from_f64((j + 1) as f64);
            e = e * w;
        }
        acc.to_c64()
    }

    /// |F_n(z)| ≤ e^{|k||z|}.
    pub fn growth(&self) -> GrowthBound {
        GrowthBound { a: 1.0, b: self.k.abs(), p: 1.0 }
    }
}

/// sup over a polar grid on |z| ≤ R of |f(z) − g(z)| e^{−B|z|^q}.
///
/// The true supremum runs over all of ℂ, so this is a lower bound for it.
pub fn aq_distance<F, G>(f: F, g: G, b: f64, q: f64, r: f64, samples: usize) -> f64
where
    F: Fn(C64) -> C64,
    G: Fn(C64) -> C64,
{
    let mut best: f64 = (f(C64::new(0.0, 0.0)) - g(C64::new(0.0, 0.0))).norm();
    for i in 1..=samples {
        let rad = r * i as f64 / samples as f64;
        let w = (-b * rad.powf(q)).exp();
        for j in 0..samples {
            let z = C64::from_polar(rad, 2.0 * std::f64::consts::PI * j as f64 / samples as f64);
            best = best.max((f(z) - g(z)).norm() * w);
        }
    }
    best
}

/// A κ-indexed family φ_κ together with the band 𝒰 its members are drawn from.
pub trait SupershiftFamily: Sync {
    fn phi(&self, kappa: C64, z: C64) -> C64;
    fn growth(&self, kappa: C64) -> GrowthBound;
    /// Closed interval 𝒰 = [lo, hi] containing every κ_l(n).
    fn admissible(&self) -> (f64, f64);

    /// F_n(z) = Σ_l C_l(n) φ_{κ_l(n)}(z).
    fn member(&self, shift: &PlaneWaveSupershift, z: C64) -> C64 {
        shift.coefficients.iter().zip(&shift.nodes).map(|(&c, &k)| c * self.phi(C64::new(k, 0.0), z)).sum()
    }

    fn member_growth(&self, shift: &PlaneWaveSupershift) -> GrowthBound {
        let mass: f64 = shift.coefficients.iter().map(|c| c.abs()).sum();
        let g = shift.nodes.iter().map(|&k| self.growth(C64::new(k, 0.0)));
        let (a, b, p) = g.fold((0.0f64, 0.0f64, 0.0f64), |(a, b, p), g| (a.max(g.a), b.max(g.b), p.max(g.p)));
        GrowthBound { a: a * mass, b, p: if p > 0.0 { p } else { 1.0 } }
    }
}

/// Plane waves φ_κ(z) = e^{iκz}.
#[derive(Clone, Copy, Debug, Default)]
pub struct PlaneWaves;

impl SupershiftFamily for PlaneWaves {
    fn phi(&self, kappa: C64, z: C64) -> C64 {
        (C64::new(0.0, 1.0) * kappa * z).exp()
    }
    fn growth(&self, kappa: C64) -> GrowthBound {
        GrowthBound { a: 1.0, b: kappa.norm(), p: 1.0 }
    }
    fn admissible(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
    fn member(&self, shift: &PlaneWaveSupershift, z: C64) -> C64 {
        shift.member(z)
    }
    fn member_growth(&self, shift: &PlaneWaveSupershift) -> GrowthBound {
        shift.member_growth()
    }
}

/// Coefficients C_l(n) and nodes κ_l(n) ∈ [−k0, k0] of a plane-wave supershift towards κ.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneWaveSupershift {
    pub k0: f64,
    pub kappa: f64,
    pub n: usize,
    pub coefficients: Vec<f64>,
    pub nodes: Vec<f64>,
    seq: SuperoscillatingSequence,
}

pub fn build_supershift_plane_waves(k0: f64, kappa: f64, n: usize) -> Result<PlaneWaveSupershift, SuperoscError> {
    if !(k0 > 0.0) {
        return Err(SuperoscError::Argument(format!("k0 must be positive, got {k0}")));
    }
    if kappa.abs() <= k0 {
        return Err(SuperoscError::Argument(format!("|κ| = {} is inside [−k0, k0]", kappa.abs())));
    }
    let seq = build_superosc(n, kappa / k0)?;
    let nodes = seq.frequencies.iter().map(|&f| k0 * f).collect();
    Ok(PlaneWaveSupershift { k0, kappa, n, coefficients: seq.coefficients.clone(), nodes, seq })
}

impl PlaneWaveSupershift {
    /// F_n(z) = Σ_l C_l e^{iκ_l z}, evaluated in product form.
    pub fn member(&self, z: C64) -> C64 {
        self.seq.eval(z * self.k0, EvalForm::Product)
    }

    pub fn member_sum(&self, z: C64) -> C64 {
        self.seq.eval(z * self.k0, EvalForm::Sum)
    }

    pub fn target(&self, z: C64) -> C64 {
        (C64::new(0.0, self.kappa) * z).exp()
    }

    pub fn admissible(&self) -> (f64, f64) {
        (-self.k0, self.k0)
    }

    pub fn member_growth(&self) -> GrowthBound {
        GrowthBound { a: 1.0, b: self.kappa.abs(), p: 1.0 }
    }

    pub fn target_growth(&self) -> GrowthBound {
        GrowthBound { a: 1.0, b: self.kappa.abs(), p: 1.0 }
    }
}
