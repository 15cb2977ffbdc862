use super::linalg::{lstsq, CMatrix};
use num_complex::Complex64;

/// Least-squares amplitudes `a_i` with `y(t) ≈ Σ a_i e^{λ_i t}`.
pub fn expsum_fit(ts: &[f64], ys: &[Complex64], exponents: &[Complex64]) -> Vec<Complex64> {
    let a = CMatrix::from_fn(ts.len(), exponents.len(), |i, j| (exponents[j] * ts[i]).exp());
    lstsq(&a, ys)
}

/// Value at `x = 0` of the interpolating polynomial through `(xs, ys)` (Neville).
pub fn neville_at_zero(xs: &[f64], ys: &[Complex64]) -> Complex64 {
    let n = xs.len();
    let mut p = ys.to_vec();
    for k in 1..n {
        for i in 0..n - k {
            p[i] = (xs[i + k] * p[i] - xs[i] * p[i + 1]) / (xs[i + k] - xs[i]);
        }
    }
    p[0]
}

/// Roots of `c[0] + c[1] x + … + c[d] x^d` by Durand–Kerner iteration.
pub fn poly_roots(c: &[Complex64]) -> Vec<Complex64> {
    let d = c.len() - 1;
    let lead = c[d];
    let monic: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    let eval = |x: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, ci| acc * x + ci);
    let radius = 1.0 + monic[..d].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..d).map(|k| seed.powu(k as u32) * radius * 0.5).collect();
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..d {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-16 * radius {
            break;
        }
    }
    // one Newton polish per root
    for zi in z.iter_mut() {
        let dm: Vec<Complex64> = (1..=d).map(|k| monic[k] * k as f64).collect();
        let deriv = dm.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, ci| acc * *zi + ci);
        if deriv.norm() > 0.0 {
            *zi -= eval(*zi) / deriv;
        }
    }
    z
}

/// Central difference of `g` at 0 with one Richardson step:
/// `(4 D(h/2) − D(h)) / 3`, `D(h) = (g(h) − g(−h)) / 2h`. Returns the extrapolated
/// derivative and the plain central difference at step `h`.
pub fn richardson_derivative<G: Fn(f64) -> Vec<Complex64>>(g: G, h: f64) -> (Vec<Complex64>, Vec<Complex64>) {
    let d = |h: f64| -> Vec<Complex64> {
        let (p, m) = (g(h), g(-h));
        p.iter().zip(&m).map(|(a, b)| (a - b) / (2.0 * h)).collect()
    };
    let dh = d(h);
    let dh2 = d(h / 2.0);
    let r = dh2.iter().zip(&dh).map(|(a, b)| (4.0 * a - b) / 3.0).collect();
    (r, dh)
}
