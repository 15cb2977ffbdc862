//! Complex gamma function and generalized binomial coefficients.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const POLE_TOL: f64 = 1e-14;

/// Distance from `z` to the nearest nonpositive integer, or `None` if `Re z > 0.5`.
fn pole_distance(z: Complex64) -> Option<f64> {
    if z.re > 0.5 {
        return None;
    }
    let k = z.re.round().min(0.0);
    Some(Complex64::new(z.re - k, z.im).norm())
}

fn is_pole(z: Complex64) -> bool {
    matches!(pole_distance(z), Some(d) if d <= POLE_TOL)
}

/// log Γ(z) for Re z ≥ 1/2, not branch-corrected.
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut a = Complex64::new(LANCZOS[0], 0.0);
    let t = z + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += *c / (z + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
}

fn sin_pi(z: Complex64) -> Complex64 {
    // reduce the real part first so sin(πz) keeps full relative accuracy near integers
    let n = z.re.round();
    let w = Complex64::new(z.re - n, z.im);
    let s = (w * PI).sin();
    if (n as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// A logarithm of Γ(z). The imaginary part is not reduced to the principal branch,
/// so only `exp` of the result is meaningful.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::Pole(z));
    }
    if z.re < 0.5 {
        Ok(Complex64::new(PI.ln(), 0.0) - sin_pi(z).ln() - ln_gamma_right(1.0 - z))
    } else {
        Ok(ln_gamma_right(z))
    }
}

/// Γ(z) with reflection for Re z < 1/2.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("gamma of non-finite argument {z}")));
    }
    if is_pole(z) {
        return Err(Error::Pole(z));
    }
    if z.re < 0.5 {
        let g = ln_gamma_right(1.0 - z).exp();
        Ok(PI / (sin_pi(z) * g))
    } else {
        Ok(ln_gamma_right(z).exp())
    }
}

/// 1/Γ(z), an entire function: exactly zero at the poles of Γ.
pub fn recip_gamma(z: Complex64) -> Complex64 {
    if is_pole(z) {
        return Complex64::new(0.0, 0.0);
    }
    if z.re < 0.5 {
        sin_pi(z) * ln_gamma_right(1.0 - z).exp() / PI
    } else {
        (-ln_gamma_right(z)).exp()
    }
}

/// Generalized binomial coefficient C(z, k) = z(z−1)···(z−k+1)/k! by the product formula.
pub fn binom(z: Complex64, k: u32) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for j in 0..k {
        acc *= (z - j as f64) / (j + 1) as f64;
    }
    acc
}
