//! Bessel J_ν, Y_ν and Hankel H_ν^{(2)} for real or purely imaginary order, Re w > 0.
//!
//! |w| ≤ 25 uses the power series accumulated in double-double; H^{(2)} comes from
//! the reflection formula except deep in the lower half-plane, where it is recessive
//! and the integral
//!
//! ```text
//! H2_ν(w) = √(2/(πw)) e^{−i(w−νπ/2−π/4)} / Γ(ν+1/2) ∫₀^∞ e^{−u} u^{ν−1/2} (1 − iu/(2w))^{ν−1/2} du
//! ```
//!
//! is evaluated by exp-sinh quadrature instead. |w| > 25 uses the Hankel expansion.

use super::dd::{CDd, Dd};
use super::gamma::{ln_gamma, rgamma};
use super::SpecfunError;
use num_complex::Complex64 as C64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Crossover between power series and large-argument expansion.
pub const W_SWITCH: f64 = 17.0;
const ASYM_TERMS: usize = 40;
const SERIES_MAX_TERMS: usize = 120;
const LOWER_HALF_CUTOFF: f64 = -3.0;

/// Order ν of a Bessel function: a positive real or i times a positive real.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BesselOrder {
    Real(f64),
    Imaginary(f64),
}

impl BesselOrder {
    pub fn real(v: f64) -> Result<Self, SpecfunError> {
        if v.is_finite() && v > 0.0 {
            Ok(BesselOrder::Real(v))
        } else {
            Err(SpecfunError::UnsupportedOrder(format!("real order must be positive, got {v}")))
        }
    }

    pub fn imaginary(v: f64) -> Result<Self, SpecfunError> {
        if v.is_finite() && v > 0.0 {
            Ok(BesselOrder::Imaginary(v))
        } else {
            Err(SpecfunError::UnsupportedOrder(format!("imaginary order magnitude must be positive, got {v}")))
        }
    }

    /// ν = √(1/4 + λ) for the centrifugal potential λ/x².
    pub fn from_lambda(lambda: f64) -> Result<Self, SpecfunError> {
        let d = 0.25 + lambda;
        if d > 0.0 {
            Self::real(d.sqrt())
        } else if d < 0.0 {
            Self::imaginary((-d).sqrt())
        } else {
            Err(SpecfunError::UnsupportedOrder("ν = 0 (λ = −1/4) is not supported".into()))
        }
    }

    pub fn value(&self) -> C64 {
        match *self {
            BesselOrder::Real(v) => C64::new(v, 0.0),
            BesselOrder::Imaginary(v) => C64::new(0.0, v),
        }
    }

    fn is_integer(&self) -> bool {
        matches!(*self, BesselOrder::Real(v) if v == v.round())
    }
}

fn check_arg(w: C64) -> Result<(), SpecfunError> {
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Err(SpecfunError::Domain(format!("non-finite argument {w}")));
    }
    if w.re <= 0.0 {
        return Err(SpecfunError::Domain(format!("Re(w) must be positive, got {w}")));
    }
    Ok(())
}

fn exp_checked(z: C64) -> Result<C64, SpecfunError> {
    if z.re > 709.0 {
        Err(SpecfunError::Range(format!("exponential overflow (exponent {z})")))
    } else {
        Ok(z.exp())
    }
}

/// Σ_k (−w²/4)^k / (k! (ν+1)_k) in double-double.
fn series_sum(nu: C64, w: C64) -> C64 {
    let wd = CDd::from_c64(w);
    let q = (wd * wd).scale(Dd::from_f64(-0.25));
    let qmag = q.to_c64().norm();
    let mut term = CDd::from_c64(C64::new(1.0, 0.0));
    let mut sum = term;
    for k in 1..SERIES_MAX_TERMS {
        let kd = Dd::from_f64(k as f64);
        let den = CDd {
            re: kd * Dd::from_f64(nu.re) + kd * kd,
            im: kd * Dd::from_f64(nu.im),
        };
        term = term * q / den;
        sum = sum + term;
        let kf = k as f64;
        if kf * kf > qmag && term.norm1() <= 1e-19 * sum.norm1() {
            break;
        }
    }
    sum.to_c64()
}

fn j_series(nu: C64, w: C64) -> C64 {
    let pre = (nu * (w * 0.5).ln()).exp() * rgamma(nu + 1.0);
    pre * series_sum(nu, w)
}

/// e^{iw}H2_ν(w) and e^{−iw}H1_ν(w) from the Hankel expansion.
fn hankel_asym_scaled(nu: C64, w: C64) -> (C64, C64) {
    let mu = 4.0 * nu * nu;
    let inv = 1.0 / w;
    let mut a = C64::new(1.0, 0.0);
    let mut s2 = a;
    let mut s1 = a;
    let mut last = f64::INFINITY;
    let mut pow_i = C64::new(1.0, 0.0);
    for k in 1..=ASYM_TERMS {
        let kf = k as f64;
        a = a * (mu - (2.0 * kf - 1.0).powi(2)) / (8.0 * kf) * inv;
        let mag = a.norm();
        if mag > last || mag == 0.0 {
            break;
        }
        last = mag;
        pow_i *= C64::new(0.0, 1.0);
        s1 += pow_i * a;
        s2 += pow_i.conj() * a;
        if mag < 1e-17 {
            break;
        }
    }
    let amp = (2.0 / (PI * w)).sqrt();
    let phase = nu * FRAC_PI_2 + FRAC_PI_4;
    let h2s = amp * (C64::new(0.0, 1.0) * phase).exp() * s2;
    let h1s = amp * (C64::new(0.0, -1.0) * phase).exp() * s1;
    (h2s, h1s)
}

/// Exp-sinh quadrature of the H2 integral representation; returns e^{iw}H2_ν(w).
fn hankel2_integral_scaled(nu: C64, w: C64) -> C64 {
    let e = nu - 0.5;
    let c = C64::new(0.0, -0.5) / w;
    let f = |s: f64| -> C64 {
        let u = (FRAC_PI_2 * s.sinh()).exp();
        if u == 0.0 || u > 750.0 {
            return C64::new(0.0, 0.0);
        }
        let jac = u * FRAC_PI_2 * s.cosh();
        let lnu = u.ln();
        let base = 1.0 + c * u;
        (e * lnu + e * base.ln() - u).exp() * jac
    };
    let (lo, hi) = (-6.5, 3.5);
    let mut h = 0.125;
    let mut n = ((hi - lo) / h) as usize;
    let mut sum: C64 = (0..=n).map(|i| f(lo + i as f64 * h)).sum();
    let mut prev = sum * h;
    for _ in 0..4 {
        let mids: C64 = (0..n).map(|i| f(lo + (i as f64 + 0.5) * h)).sum();
        sum += mids;
        h *= 0.5;
        n *= 2;
        let cur = sum * h;
        let done = (cur - prev).norm() <= 1e-15 * cur.norm();
        prev = cur;
        if done {
            break;
        }
    }
    let amp = (2.0 / (PI * w)).sqrt();
    let phase = (C64::new(0.0, 1.0) * (nu * FRAC_PI_2 + FRAC_PI_4)).exp();
    amp * phase * (-ln_gamma(nu + 0.5)).exp() * prev
}

/// e^{iw}J_ν(w).
pub(crate) fn j_scaled_c(nu: C64, w: C64) -> C64 {
    if w.norm() > W_SWITCH {
        let (h2s, h1s) = hankel_asym_scaled(nu, w);
        let e2 = (C64::new(0.0, 2.0) * w).exp();
        0.5 * (e2 * h1s + h2s)
    } else {
        (C64::new(0.0, 1.0) * w).exp() * j_series(nu, w)
    }
}

/// e^{iw}H2_ν(w), ν not an integer.
pub(crate) fn h2_scaled_c(nu: C64, w: C64) -> C64 {
    if w.norm() > W_SWITCH {
        hankel_asym_scaled(nu, w).0
    } else if w.im < LOWER_HALF_CUTOFF {
        hankel2_integral_scaled(nu, w)
    } else {
        let jp = j_series(nu, w);
        let jm = j_series(-nu, w);
        let e = (C64::new(0.0, PI) * nu).exp();
        let s = (nu * PI).sin();
        let h2 = (jm - e * jp) / (C64::new(0.0, -1.0) * s);
        (C64::new(0.0, 1.0) * w).exp() * h2
    }
}

/// d/dw of J_ν, scaled by e^{iw}.
pub(crate) fn j_deriv_scaled_c(nu: C64, w: C64) -> C64 {
    nu / w * j_scaled_c(nu, w) - j_scaled_c(nu + 1.0, w)
}

/// d/dw of H2_ν, scaled by e^{iw}.
pub(crate) fn h2_deriv_scaled_c(nu: C64, w: C64) -> C64 {
    nu / w * h2_scaled_c(nu, w) - h2_scaled_c(nu + 1.0, w)
}

fn unscale(v: C64, w: C64) -> Result<C64, SpecfunError> {
    Ok(v * exp_checked(C64::new(0.0, -1.0) * w)?)
}

fn check_hankel_order(nu: BesselOrder) -> Result<(), SpecfunError> {
    if nu.is_integer() {
        Err(SpecfunError::UnsupportedOrder(format!("integer order {nu:?} needs the log series")))
    } else {
        Ok(())
    }
}

pub fn bessel_j(nu: BesselOrder, w: C64) -> Result<C64, SpecfunError> {
    check_arg(w)?;
    let v = nu.value();
    if w.norm() <= W_SWITCH {
        return Ok(j_series(v, w));
    }
    let (h2s, h1s) = hankel_asym_scaled(v, w);
    let eplus = exp_checked(C64::new(0.0, 1.0) * w)?;
    let eminus = exp_checked(C64::new(0.0, -1.0) * w)?;
    Ok(0.5 * (eplus * h1s + eminus * h2s))
}

pub fn bessel_j_deriv(nu: BesselOrder, w: C64) -> Result<C64, SpecfunError> {
    check_arg(w)?;
    let v = nu.value();
    if w.norm() <= W_SWITCH {
        return Ok(v / w * j_series(v, w) - j_series(v + 1.0, w));
    }
    unscale(j_deriv_scaled_c(v, w), w)
}

pub fn hankel2(nu: BesselOrder, w: C64) -> Result<C64, SpecfunError> {
    check_arg(w)?;
    check_hankel_order(nu)?;
    unscale(h2_scaled_c(nu.value(), w), w)
}

pub fn hankel2_deriv(nu: BesselOrder, w: C64) -> Result<C64, SpecfunError> {
    check_arg(w)?;
    check_hankel_order(nu)?;
    unscale(h2_deriv_scaled_c(nu.value(), w), w)
}

/// Y_ν = (J_ν cos νπ − J_{−ν}) / sin νπ, non-integer order only.
pub fn bessel_y(nu: BesselOrder, w: C64) -> Result<C64, SpecfunError> {
    check_arg(w)?;
    check_hankel_order(nu)?;
    let v = nu.value();
    if w.norm() > W_SWITCH {
        let (h2s, h1s) = hankel_asym_scaled(v, w);
        let eplus = exp_checked(C64::new(0.0, 1.0) * w)?;
        let eminus = exp_checked(C64::new(0.0, -1.0) * w)?;
        return Ok((eplus * h1s - eminus * h2s) / C64::new(0.0, 2.0));
    }
    Ok((j_series(v, w) * (v * PI).cos() - j_series(-v, w)) / (v * PI).sin())
}

/// e^{iw}H2_ν(w), the oscillation-free factor used inside the centrifugal propagator.
pub fn hankel2_scaled(nu: BesselOrder, w: C64) -> Result<C64, SpecfunError> {
    check_arg(w)?;
    check_hankel_order(nu)?;
    Ok(h2_scaled_c(nu.value(), w))
}

/// e^{iw}J_ν(w).
pub fn bessel_j_scaled(nu: BesselOrder, w: C64) -> Result<C64, SpecfunError> {
    check_arg(w)?;
    Ok(j_scaled_c(nu.value(), w))
}

/// Series and asymptotic values at the same point, for continuity checks across `W_SWITCH`.
pub fn branch_pair_j(nu: BesselOrder, w: C64) -> (C64, C64) {
    let v = nu.value();
    let (h2s, h1s) = hankel_asym_scaled(v, w);
    let asym = 0.5 * ((C64::new(0.0, 1.0) * w).exp() * h1s + (C64::new(0.0, -1.0) * w).exp() * h2s);
    (j_series(v, w), asym)
}

/// Same as [`branch_pair_j`] for H2: the small-argument branch (reflection form, or the
/// integral below the real axis) against the expansion.
pub fn branch_pair_h2(nu: BesselOrder, w: C64) -> (C64, C64) {
    let v = nu.value();
    let series = if w.im < LOWER_HALF_CUTOFF {
        (C64::new(0.0, -1.0) * w).exp() * hankel2_integral_scaled(v, w)
    } else {
        let e = (C64::new(0.0, PI) * v).exp();
        let s = (v * PI).sin();
        (j_series(-v, w) - e * j_series(v, w)) / (C64::new(0.0, -1.0) * s)
    };
    let asym = (C64::new(0.0, -1.0) * w).exp() * hankel_asym_scaled(v, w).0;
    (series, asym)
}

/// Integral-representation value of H2 (unscaled), exposed for cross-checks.
pub fn hankel2_by_integral(nu: BesselOrder, w: C64) -> Result<C64, SpecfunError> {
    check_arg(w)?;
    unscale(hankel2_integral_scaled(nu.value(), w), w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn half_order_closed_forms() {
        let nu = BesselOrder::Real(0.5);
        for x in [0.1, 1.0, 7.3, 24.0, 31.0, 80.0] {
            let w = C64::new(x, 0.0);
            let amp = (2.0 / (PI * x)).sqrt();
            let j = bessel_j(nu, w).unwrap();
            assert!((j.re - amp * x.sin()).abs() < 1e-12 * amp, "J x={x}");
            let h = hankel2(nu, w).unwrap();
            let want = C64::new(0.0, amp) * C64::new(0.0, -x).exp();
            assert!(rel(h, want) < 1e-12, "H2 x={x}");
        }
    }

    #[test]
    fn integral_matches_reflection_near_real_axis() {
        for nu in [BesselOrder::Real(0.3), BesselOrder::Imaginary(0.8), BesselOrder::Real(1.2)] {
            for w in [C64::new(3.0, -0.5), C64::new(1.0, 0.5), C64::new(10.0, -1.0)] {
                let a = hankel2_by_integral(nu, w).unwrap();
                let (b, _) = branch_pair_h2(nu, w);
                assert!(rel(a, b) < 1e-12, "{nu:?} {w}");
            }
        }
    }

    #[test]
    fn integer_order_rejected_for_hankel() {
        assert!(hankel2(BesselOrder::Real(1.0), C64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn left_half_plane_rejected() {
        assert!(bessel_j(BesselOrder::Real(0.3), C64::new(-1.0, 0.0)).is_err());
    }

    #[test]
    fn lambda_to_order() {
        assert_eq!(BesselOrder::from_lambda(-3.0 / 16.0).unwrap(), BesselOrder::Real(0.25));
        assert_eq!(BesselOrder::from_lambda(-0.5).unwrap(), BesselOrder::Imaginary(0.5));
        assert!(BesselOrder::from_lambda(-0.25).is_err());
    }
}
