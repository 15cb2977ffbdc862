use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyCertificate {
    pub value: Complex64,
    /// `|value_fine − value_coarse|` for the last doubling.
    pub error_estimate: f64,
    pub refinement_levels: u32,
    pub nodes: usize,
}

/// Sum of `f` over the `n` equispaced nodes `θ_j = θ0 + 2πj/n`.
fn node_sum<F: Fn(f64) -> Complex64>(f: &F, n: usize, theta0: f64) -> Complex64 {
    let h = 2.0 * PI / n as f64;
    let mut s = Complex64::new(0.0, 0.0);
    for j in 0..n {
        s += f(theta0 + h * j as f64);
    }
    s
}

/// Mean value `(1/2π)∫₀^{2π} f` by the trapezoid on `n0·2^levels` nodes; the
/// estimate compares against the previous level. `levels ≥ 1`.
pub fn quad_periodic<F: Fn(f64) -> Complex64>(f: F, n0: usize, levels: u32) -> AccuracyCertificate {
    let levels = levels.max(1);
    let mut n = n0.max(1);
    let mut sum = node_sum(&f, n, 0.0);
    let mut coarse = sum / n as f64;
    let mut fine = coarse;
    for _ in 0..levels {
        // new nodes sit halfway between the old ones
        sum += node_sum(&f, n, PI / n as f64);
        n *= 2;
        coarse = fine;
        fine = sum / n as f64;
    }
    AccuracyCertificate {
        value: fine,
        error_estimate: (fine - coarse).norm(),
        refinement_levels: levels,
        nodes: n,
    }
}

/// Doubles from `n0` nodes until the change is at most `tol` or `max_nodes` is reached.
pub fn quad_periodic_adaptive<F: Fn(f64) -> Complex64>(
    f: F,
    n0: usize,
    tol: impl Fn(Complex64) -> f64,
    max_nodes: usize,
) -> AccuracyCertificate {
    let mut n = n0.max(2);
    let mut sum = node_sum(&f, n, 0.0);
    let mut prev = sum / n as f64;
    let mut levels = 0;
    loop {
        sum += node_sum(&f, n, PI / n as f64);
        n *= 2;
        levels += 1;
        let cur = sum / n as f64;
        let err = (cur - prev).norm();
        if err <= tol(cur) || n >= max_nodes {
            return AccuracyCertificate {
                value: cur,
                error_estimate: err,
                refinement_levels: levels,
                nodes: n,
            };
        }
        prev = cur;
    }
}

type Rule = Arc<(Vec<f64>, Vec<f64>)>;

fn rule_cache() -> &'static Mutex<HashMap<usize, Rule>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Gauss–Legendre nodes and weights on [−1, 1] (Newton on P_n, cached).
pub fn gauss_legendre(n: usize) -> Rule {
    if let Some(r) = rule_cache().lock().unwrap().get(&n) {
        return r.clone();
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    let r = Arc::new((x, w));
    rule_cache().lock().unwrap().insert(n, r.clone());
    r
}

pub fn integrate_gl<F: FnMut(f64) -> Complex64>(mut f: F, a: f64, b: f64, n: usize) -> Complex64 {
    let rule = gauss_legendre(n);
    let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
    let mut s = Complex64::new(0.0, 0.0);
    for (x, w) in rule.0.iter().zip(rule.1.iter()) {
        s += *w * f(mid + half * x);
    }
    s * half
}

pub fn integrate_gl_panels<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    panels: usize,
    n: usize,
) -> Complex64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| integrate_gl(&mut f, a + h * i as f64, a + h * (i + 1) as f64, n))
        .sum()
}

/// `∫₀^{s_max} e^{−zs} f(s) ds` by panelled Gauss–Legendre with panel length ≤ 0.5.
pub fn laplace_quad<F: FnMut(f64) -> Complex64>(mut f: F, z: Complex64, s_max: f64) -> Complex64 {
    let panels = ((s_max / 0.5).ceil() as usize).max(1);
    integrate_gl_panels(|s| (-z * s).exp() * f(s), 0.0, s_max, panels, 24)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trapezoid_trivial() {
        let c = quad_periodic(|_| Complex64::new(1.0, 0.0), 8, 1);
        assert_eq!(c.value, Complex64::new(1.0, 0.0));
        for k in 1..6 {
            let c = quad_periodic(|t| Complex64::from_polar(1.0, k as f64 * t), 16, 1);
            assert!(c.value.norm() < 1e-14);
        }
    }

    #[test]
    fn certificate_bounds_error() {
        // mean of 1/(2 − cos θ) is 1/√3
        let exact = 1.0 / 3f64.sqrt();
        for levels in 1..4 {
            let c = quad_periodic(|t| Complex64::new(1.0 / (2.0 - t.cos()), 0.0), 4, levels);
            assert!((c.value.re - exact).abs() <= c.error_estimate.max(1e-15));
        }
    }

    #[test]
    fn gauss_legendre_exactness() {
        for n in [1, 2, 5, 12, 40] {
            let r = gauss_legendre(n);
            let sw: f64 = r.1.iter().sum();
            assert!((sw - 2.0).abs() < 1e-13);
            let deg = 2 * n - 1;
            let v = integrate_gl(|x| Complex64::new(x.powi(deg as i32 - 1), 0.0), 0.0, 1.0, n);
            assert!((v.re - 1.0 / deg as f64).abs() < 1e-13);
        }
    }

    #[test]
    fn laplace_of_exponential() {
        let z = Complex64::new(2.0, 1.0);
        let lam = Complex64::new(-0.5, 1.0);
        let v = laplace_quad(|s| (lam * s).exp(), z, 40.0);
        assert!((v - 1.0 / (z - lam)).norm() < 1e-13);
    }
}
