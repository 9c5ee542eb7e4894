//! Complex error function and Λ(z) = e^{z²}(1 − erf(z)).
//!
//! Regions for Λ on Re z ≥ 0:
//!
//! | region            | method                                   |
//! |-------------------|------------------------------------------|
//! | \|z\| ≤ 1.5       | Taylor series Σ (−z)ⁿ / Γ(n/2 + 1)       |
//! | 1.5 < \|z\| < 6   | Laplace integral (2/√π)∫₀^∞ e^{−t²−2zt}dt |
//! | \|z\| ≥ 6         | Laplace continued fraction               |
//!
//! Re z < 0 goes through Λ(z) = 2e^{z²} − Λ(−z).

use super::SpecfunError;
use crate::quadrature::gauss::gl_rule;
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
const EXP_MAX: f64 = 709.0;

fn lambda_taylor(z: C64) -> C64 {
    let z2 = z * z;
    let mut even = C64::new(1.0, 0.0);
    let mut odd = -z * FRAC_2_SQRT_PI;
    let mut sum = even + odd;
    for m in 1..200 {
        let mf = m as f64;
        even *= z2 / mf;
        odd *= z2 / (mf + 0.5);
        let step = even + odd;
        sum += step;
        if step.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

fn lambda_laplace(z: C64) -> C64 {
    let rule = gl_rule(20);
    let t_end = -z.re + (z.re * z.re + 40.0).sqrt();
    let width = (8.0 / (2.0 * z.norm())).min(1.5);
    let panels = (t_end / width).ceil().max(1.0) as usize;
    let w = t_end / panels as f64;
    let mut acc = C64::new(0.0, 0.0);
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * w;
        let half = 0.5 * w;
        let mut part = C64::new(0.0, 0.0);
        for &(node, weight) in rule {
            let t = mid + half * node;
            part += weight * (-(t * t) - 2.0 * z * t).exp();
        }
        acc += part * half;
    }
    acc * FRAC_2_SQRT_PI
}

fn lambda_cf(z: C64) -> C64 {
    let terms = if z.norm() >= 8.0 { 40 } else { 200 };
    let mut f = z;
    for k in (1..=terms).rev() {
        f = z + (0.5 * k as f64) / f;
    }
    1.0 / (PI.sqrt() * f)
}

/// Λ(z) on the closed right half-plane, where it is bounded by 1.
pub(crate) fn lambda_right(z: C64) -> C64 {
    debug_assert!(z.re >= 0.0);
    let r = z.norm();
    if r <= 1.5 {
        lambda_taylor(z)
    } else if r < 6.0 {
        lambda_laplace(z)
    } else {
        lambda_cf(z)
    }
}

/// Λ(z) = e^{z²}(1 − erf(z)).
pub fn lambda_fn(z: C64) -> Result<C64, SpecfunError> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(SpecfunError::Domain(format!("non-finite argument {z}")));
    }
    if z.re >= 0.0 {
        return Ok(lambda_right(z));
    }
    let z2 = z * z;
    if z2.re > EXP_MAX {
        return Err(SpecfunError::Range(format!("e^(z^2) overflows at z = {z}")));
    }
    Ok(2.0 * z2.exp() - lambda_right(-z))
}

/// Λ′(z) = 2zΛ(z) − 2/√π.
pub fn lambda_deriv(z: C64) -> Result<C64, SpecfunError> {
    Ok(2.0 * z * lambda_fn(z)? - FRAC_2_SQRT_PI)
}

/// Λ(u)·e^{c}, combining exponentials so the product stays finite whenever it is.
pub(crate) fn lambda_exp(u: C64, c: C64) -> C64 {
    if u.re >= 0.0 {
        lambda_right(u) * c.exp()
    } else {
        2.0 * (u * u + c).exp() - lambda_right(-u) * c.exp()
    }
}

fn erf_taylor(z: C64) -> C64 {
    let z2 = z * z;
    let mut pow = z;
    let mut sum = z;
    for n in 1..200 {
        let nf = n as f64;
        pow *= -z2 / nf;
        let step = pow / (2.0 * nf + 1.0);
        sum += step;
        if step.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum * FRAC_2_SQRT_PI
}

/// erf(z) for complex z.
pub fn erf_c(z: C64) -> Result<C64, SpecfunError> {
    if !(z.re.is_finite() && z.im.is_finite()) || z.norm() >= 1e6 {
        return Err(SpecfunError::Range(format!("|z| too large: {z}")));
    }
    if z.norm() <= 1.5 {
        return Ok(erf_taylor(z));
    }
    if z.re < 0.0 {
        return erf_c(-z).map(|v| -v);
    }
    let mz2 = -(z * z);
    if mz2.re > EXP_MAX {
        return Err(SpecfunError::Range(format!("e^(-z^2) overflows at z = {z}")));
    }
    Ok(1.0 - mz2.exp() * lambda_right(z))
}
