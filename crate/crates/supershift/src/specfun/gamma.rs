//! Complex Gamma function, Lanczos form (g = 7, nine terms) with reflection.

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

const G: f64 = 7.0;
const P: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// log Γ(z). The imaginary part is only defined modulo 2π; callers exponentiate.
pub fn ln_gamma(z: C64) -> C64 {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return C64::from(PI).ln() - s.ln() - ln_gamma(1.0 - z);
    }
    let z = z - 1.0;
    let mut x = C64::from(P[0]);
    for (i, &p) in P.iter().enumerate().skip(1) {
        x += p / (z + i as f64);
    }
    let t = z + G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

pub fn gamma(z: C64) -> C64 {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return PI / (s * gamma(1.0 - z));
    }
    ln_gamma(z).exp()
}

/// 1/Γ(z), entire; exact zero at the poles of Γ.
pub fn rgamma(z: C64) -> C64 {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return C64::new(0.0, 0.0);
    }
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return s * gamma(1.0 - z) / PI;
    }
    (-ln_gamma(z)).exp()
}

/// Real log Γ for x > 0.
pub fn ln_gamma_real(x: f64) -> f64 {
    ln_gamma(C64::new(x, 0.0)).re
}
