//! Complex special functions: erf, Λ, Bessel J_ν / Y_ν and Hankel H_ν^{(2)}.

pub(crate) mod dd;
mod bessel;
mod erf;
mod gamma;

pub use bessel::{
    bessel_j, bessel_j_deriv, bessel_j_scaled, bessel_y, branch_pair_h2, branch_pair_j, hankel2,
    hankel2_by_integral, hankel2_deriv, hankel2_scaled, BesselOrder, W_SWITCH,
};
pub(crate) use bessel::{h2_deriv_scaled_c, h2_scaled_c, j_deriv_scaled_c, j_scaled_c};
pub use erf::{erf_c, lambda_deriv, lambda_fn};
pub(crate) use erf::lambda_exp;
pub use gamma::{gamma, ln_gamma, ln_gamma_real, rgamma};

use num_complex::Complex64 as C64;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SpecfunError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("unsupported order: {0}")]
    UnsupportedOrder(String),
}

/// Which function an ODE residual or bound refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BesselKind {
    J,
    H2,
}

fn value_and_deriv(kind: BesselKind, nu: BesselOrder, w: C64) -> Result<(C64, C64), SpecfunError> {
    match kind {
        BesselKind::J => Ok((bessel_j(nu, w)?, bessel_j_deriv(nu, w)?)),
        BesselKind::H2 => Ok((hankel2(nu, w)?, hankel2_deriv(nu, w)?)),
    }
}

/// Normalized residual of w²f″ + wf′ + (w² − ν²)f.
///
/// f″ comes from a five-point difference of the analytic f′ with step 2·10⁻³·min(|w|, 5); the
/// residual is divided by |w²f″| + |wf′| + |(w² − ν²)f|.
pub fn bessel_ode_residual(kind: BesselKind, nu: BesselOrder, w: C64) -> Result<f64, SpecfunError> {
    let h = 2e-3 * w.norm().min(5.0);
    let d = |s: f64| value_and_deriv(kind, nu, w + s).map(|p| p.1);
    let (f, fp) = value_and_deriv(kind, nu, w)?;
    let fpp = (d(-2.0 * h)? - 8.0 * d(-h)? + 8.0 * d(h)? - d(2.0 * h)?) / (12.0 * h);
    let v = nu.value();
    let a = w * w * fpp;
    let b = w * fp;
    let c = (w * w - v * v) * f;
    Ok((a + b + c).norm() / (a.norm() + b.norm() + c.norm()))
}

/// Polar sample of the closed right sector used for measured bound constants.
pub fn sector_sample(arg_max: f64, r_min: f64, r_max: f64, n_r: usize, n_arg: usize) -> Vec<C64> {
    let mut pts = Vec::with_capacity(n_r * n_arg);
    let (l0, l1) = (r_min.ln(), r_max.ln());
    for i in 0..n_r {
        let r = (l0 + (l1 - l0) * i as f64 / (n_r - 1).max(1) as f64).exp();
        for j in 0..n_arg {
            let a = arg_max * j as f64 / (n_arg - 1).max(1) as f64;
            pts.push(C64::from_polar(r, a));
        }
    }
    pts
}

/// Measured sup of |f(w)|·√|w|·e^{−|Im w|} over `pts`, f = H2_ν or J_ν.
pub fn decay_constant(kind: BesselKind, nu: BesselOrder, pts: &[C64]) -> Result<f64, SpecfunError> {
    let mut best: f64 = 0.0;
    for &w in pts {
        let scaled = match kind {
            BesselKind::H2 => hankel2_scaled(nu, w)?,
            BesselKind::J => bessel_j_scaled(nu, w)?,
        };
        // |e^{iw}f(w)| = |f(w)| e^{−Im w}; for J on Im w < 0 switch to e^{−|Im w|}.
        let mag = if kind == BesselKind::J && w.im < 0.0 {
            scaled.norm() * (2.0 * w.im).exp()
        } else {
            scaled.norm()
        };
        best = best.max(mag * w.norm().sqrt());
    }
    Ok(best)
}

/// Measured sup of |f′(w)| e^{−|Im w|} / (|w|^{−1/2} + |w|^{−3/2}) over `pts`.
pub fn deriv_decay_constant(kind: BesselKind, nu: BesselOrder, pts: &[C64]) -> Result<f64, SpecfunError> {
    let v = nu.value();
    let mut best: f64 = 0.0;
    for &w in pts {
        if w.re <= 0.0 {
            return Err(SpecfunError::Domain(format!("Re(w) must be positive, got {w}")));
        }
        let scaled = match kind {
            BesselKind::H2 => h2_deriv_scaled_c(v, w),
            BesselKind::J => j_deriv_scaled_c(v, w),
        };
        let mag = if kind == BesselKind::J && w.im < 0.0 {
            scaled.norm() * (2.0 * w.im).exp()
        } else {
            scaled.norm()
        };
        let r = w.norm();
        best = best.max(mag / (r.powf(-0.5) + r.powf(-1.5)));
    }
    Ok(best)
}
