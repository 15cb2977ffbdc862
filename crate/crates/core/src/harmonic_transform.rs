//! Fourier transform on PSU(1,1) for band-limited functions of compact τ-support:
//! principal-series coefficients `a_mn(r)`, discrete-series coefficients, inversion
//! and the Plancherel norm.
//!
//! Measure: `dg = sinh τ dτ dφ dψ` with `φ, ψ ∈ [0, 2π)`. Then
//! `a_mn(r) = 4π² ∫ Π_mn(τ) conj(B^{−1/2+ir}_{mn}(cosh τ)) sinh τ dτ` and the inverse
//! carries the prefactor `1/(4π²)`.

use crate::error::{Error, Result};
use crate::matrix_elements::{jacobi_b_block, jacobi_b_ode_sweep, jacobi_b_quad, TruncationParams};
use crate::oracle::{gauss_legendre, integrate_gl_panels};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::Arc;

/// One `(m, n)` slice as a function of τ.
pub type SliceFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

pub type Evaluator = Arc<dyn Fn(f64, f64, f64) -> Complex64 + Send + Sync>;

/// `f(φ, τ, ψ)` supported in `τ ≤ tau_max`, band-limited to `|m|, |n| ≤ band`.
#[derive(Clone)]
pub struct GroupFunction {
    eval: Evaluator,
    pub tau_max: f64,
    pub band: usize,
}

impl std::fmt::Debug for GroupFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupFunction").field("tau_max", &self.tau_max).field("band", &self.band).finish()
    }
}

impl GroupFunction {
    pub fn new(tau_max: f64, band: usize, eval: Evaluator) -> Result<Self> {
        if !(tau_max > 0.0 && tau_max.is_finite()) {
            return Err(Error::Domain(format!("tau_max = {tau_max} must be positive")));
        }
        Ok(GroupFunction { eval, tau_max, band })
    }

    pub fn zero(tau_max: f64, band: usize) -> Self {
        GroupFunction { eval: Arc::new(|_, _, _| Complex64::new(0.0, 0.0)), tau_max, band }
    }

    /// `Σ slice_mn(τ) e^{−imφ} e^{−inψ}`.
    pub fn from_slices(
        tau_max: f64,
        slices: Vec<(i32, i32, SliceFn)>,
    ) -> Result<Self> {
        let band = slices.iter().map(|s| s.0.unsigned_abs().max(s.1.unsigned_abs())).max().unwrap_or(0) as usize;
        GroupFunction::new(
            tau_max,
            band,
            Arc::new(move |phi, tau, psi| {
                slices
                    .iter()
                    .map(|(m, n, f)| f(tau) * Complex64::from_polar(1.0, -(*m as f64) * phi - (*n as f64) * psi))
                    .sum()
            }),
        )
    }

    pub fn eval(&self, phi: f64, tau: f64, psi: f64) -> Complex64 {
        if tau > self.tau_max {
            return Complex64::new(0.0, 0.0);
        }
        (self.eval)(phi, tau, psi)
    }

    pub fn scale(&self, c: Complex64) -> GroupFunction {
        let f = self.eval.clone();
        GroupFunction { eval: Arc::new(move |a, b, d| c * f(a, b, d)), ..self.clone() }
    }

    pub fn add(&self, other: &GroupFunction) -> GroupFunction {
        let (f, g) = (self.eval.clone(), other.eval.clone());
        GroupFunction {
            eval: Arc::new(move |a, b, d| f(a, b, d) + g(a, b, d)),
            tau_max: self.tau_max.max(other.tau_max),
            band: self.band.max(other.band),
        }
    }
}

fn band_index(band: usize, m: i32) -> usize {
    (m + band as i32) as usize
}

/// All `Π_mn(τ)`, `|m|, |n| ≤ band`, at one `τ`, indexed `[m + band][n + band]`.
/// Samples on a `4(B+1)`-point grid; modes beyond the band must vanish to 1e−8.
pub fn fourier_slices_at(f: &GroupFunction, tau: f64) -> Result<Vec<Vec<Complex64>>> {
    let b = f.band as i32;
    let n = 4 * (f.band + 1);
    let h = 2.0 * PI / n as f64;
    let mut samples = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            samples[i * n + j] = f.eval(h * i as f64, tau, h * j as f64);
        }
    }
    let half = (n / 2) as i32;
    let modes: Vec<i32> = (-half + 1..half).collect();
    let mut all = vec![vec![Complex64::new(0.0, 0.0); modes.len()]; modes.len()];
    // separable DFT: first along ψ, then φ
    let mut rows = vec![vec![Complex64::new(0.0, 0.0); modes.len()]; n];
    for i in 0..n {
        for (k, &q) in modes.iter().enumerate() {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                s += samples[i * n + j] * Complex64::from_polar(1.0, q as f64 * h * j as f64);
            }
            rows[i][k] = s / n as f64;
        }
    }
    for (a, &p) in modes.iter().enumerate() {
        for k in 0..modes.len() {
            let mut s = Complex64::new(0.0, 0.0);
            for (i, row) in rows.iter().enumerate() {
                s += row[k] * Complex64::from_polar(1.0, p as f64 * h * i as f64);
            }
            all[a][k] = s / n as f64;
        }
    }
    let scale = all.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max);
    let mut out = vec![vec![Complex64::new(0.0, 0.0); 2 * f.band + 1]; 2 * f.band + 1];
    for (a, &p) in modes.iter().enumerate() {
        for (k, &q) in modes.iter().enumerate() {
            if p.abs() <= b && q.abs() <= b {
                out[band_index(f.band, p)][band_index(f.band, q)] = all[a][k];
            } else if all[a][k].norm() > 1e-8 * scale.max(1e-300) {
                return Err(Error::Accuracy {
                    what: "band limit",
                    coarse: all[a][k],
                    fine: Complex64::new(0.0, 0.0),
                    estimate: all[a][k].norm(),
                });
            }
        }
    }
    Ok(out)
}

/// `Π_mn(τ) = (1/4π²) ∫∫ f e^{imφ} e^{inψ} dφ dψ` on a τ-grid.
pub fn fourier_slice(f: &GroupFunction, m: i32, n: i32, tau_grid: &[f64]) -> Result<Vec<Complex64>> {
    if m.unsigned_abs() as usize > f.band || n.unsigned_abs() as usize > f.band {
        return Ok(vec![Complex64::new(0.0, 0.0); tau_grid.len()]);
    }
    tau_grid
        .iter()
        .map(|&t| Ok(fourier_slices_at(f, t)?[band_index(f.band, m)][band_index(f.band, n)]))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteCoeff {
    pub m: i32,
    pub n: i32,
    /// lowest weight; the matrix element is `B^{j−1}_{mn}`
    pub j: u32,
    pub b: Complex64,
    /// `1/‖B^{j−1}_{mn}‖²` in `L²(sinh τ dτ)`
    pub weight: f64,
}

#[derive(Debug, Clone)]
pub struct TransformData {
    pub band: usize,
    pub r_grid: Vec<f64>,
    /// `a_mn(r)` indexed `[m + band][n + band][r]`
    pub principal: Vec<Vec<Vec<Complex64>>>,
    pub discrete: Vec<DiscreteCoeff>,
    /// `max |a_mn(r)|² r tanh(πr)` over the last 5% of the r-grid
    pub tail_estimate: f64,
}

impl TransformData {
    /// `a_mn` on the r-grid; zero outside the band.
    pub fn a(&self, m: i32, n: i32) -> Vec<Complex64> {
        if m.unsigned_abs() as usize > self.band || n.unsigned_abs() as usize > self.band {
            return vec![Complex64::new(0.0, 0.0); self.r_grid.len()];
        }
        self.principal[band_index(self.band, m)][band_index(self.band, n)].clone()
    }

    pub fn scale(&self, c: Complex64) -> TransformData {
        let mut out = self.clone();
        for row in out.principal.iter_mut() {
            for v in row.iter_mut() {
                for x in v.iter_mut() {
                    *x *= c;
                }
            }
        }
        for d in out.discrete.iter_mut() {
            d.b *= c;
        }
        out.tail_estimate *= c.norm_sqr();
        out
    }
}

fn check_r_grid(r_grid: &[f64]) -> Result<()> {
    if r_grid.len() < 2 {
        return Err(Error::Domain("r grid needs at least two nodes".into()));
    }
    if (r_grid[0]).abs() > 1e-14 || r_grid.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
        return Err(Error::Domain("r grid must start at 0 and be nonnegative".into()));
    }
    let h = r_grid[1] - r_grid[0];
    for w in r_grid.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h.max(1.0) || h <= 0.0 {
            return Err(Error::Domain("r grid must be uniform and increasing".into()));
        }
    }
    Ok(())
}

pub fn uniform_r_grid(r_max: f64, nodes: usize) -> Vec<f64> {
    let h = r_max / (nodes - 1) as f64;
    (0..nodes).map(|i| h * i as f64).collect()
}

fn plancherel_density(r: f64) -> f64 {
    r * (PI * r).tanh()
}

// trapezoid weights on a uniform grid from 0; the integrand is even in r
fn trapezoid_weights(r_grid: &[f64]) -> Vec<f64> {
    let h = r_grid[1] - r_grid[0];
    let k = r_grid.len();
    (0..k).map(|i| if i == 0 || i == k - 1 { h / 2.0 } else { h } * plancherel_density(r_grid[i])).collect()
}

const TAU_PANEL: f64 = 0.25;
const TAU_PANEL_NODES: usize = 16;

fn tau_nodes(tau_max: f64) -> (Vec<f64>, Vec<f64>) {
    let panels = ((tau_max / TAU_PANEL).ceil() as usize).max(1);
    let w = (tau_max) / panels as f64;
    let gl = gauss_legendre(TAU_PANEL_NODES);
    let mut xs = Vec::new();
    let mut ws = Vec::new();
    for p in 0..panels {
        let a = p as f64 * w;
        for (x, wt) in gl.0.iter().zip(&gl.1) {
            xs.push(a + 0.5 * w * (x + 1.0));
            ws.push(0.5 * w * wt);
        }
    }
    (xs, ws)
}

fn principal_l(r: f64) -> Complex64 {
    Complex64::new(-0.5, r)
}

/// `‖B^l_{mn}‖²` in `L²([0, ∞), sinh τ dτ)` for a square-integrable matrix element.
pub fn discrete_norm_sq(l: Complex64, m: i32, n: i32, p: &TruncationParams) -> Result<f64> {
    // |B|² sinh τ ~ e^{−(2l+1)τ} with l ≥ −1/2 the larger of l, −1−l
    let decay = 2.0 * l.re.max(-1.0 - l.re) + 1.0;
    if decay <= 0.0 {
        return Err(Error::Domain(format!("B^{l}_({m},{n}) is not square integrable")));
    }
    let head = integrate_gl_panels(
        |t| {
            let b = jacobi_b_quad(l, m as f64, n as f64, t, p).unwrap_or(Complex64::new(f64::NAN, 0.0));
            Complex64::new(b.norm_sqr() * t.sinh(), 0.0)
        },
        0.0,
        3.0,
        12,
        16,
    )
    .re;
    if !head.is_finite() {
        return Err(Error::Domain(format!("B^{l}_({m},{n}) quadrature failed")));
    }
    let end = 3.0 + 36.0 / decay;
    let steps = (((end - 3.0) / 2e-3) as usize + 1) & !1;
    let h = (end - 3.0) / steps as f64;
    let mut acc = 0.0;
    let mut i = 0usize;
    jacobi_b_ode_sweep(l, m, n, 3.0, end, h, p, |t, v| {
        if i <= steps {
            let w = if i == 0 || i == steps { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * v.norm_sqr() * t.sinh();
        }
        i += 1;
    })?;
    Ok(head + acc * h / 3.0)
}

/// Forward transform: principal coefficients on `r_grid`, discrete coefficients for
/// `mn > 0`, `1 ≤ j ≤ min(|m|, |n|)`.
pub fn forward(f: &GroupFunction, r_grid: &[f64], p: &TruncationParams) -> Result<TransformData> {
    check_r_grid(r_grid)?;
    let band = f.band;
    let size = 2 * band + 1;
    let (taus, wts) = tau_nodes(f.tau_max);
    let slices: Vec<Vec<Vec<Complex64>>> =
        taus.iter().map(|&t| fourier_slices_at(f, t)).collect::<Result<_>>()?;
    // weighted slices 4π² Π_mn(τ) sinh τ w
    let ws: Vec<Vec<Vec<Complex64>>> = slices
        .iter()
        .zip(taus.iter().zip(&wts))
        .map(|(s, (t, w))| {
            s.iter().map(|row| row.iter().map(|x| x * (4.0 * PI * PI * t.sinh() * w)).collect()).collect()
        })
        .collect();
    let per_r: Vec<Vec<Vec<Complex64>>> = r_grid
        .par_iter()
        .map(|&r| {
            let l = principal_l(r);
            let mut acc = vec![vec![Complex64::new(0.0, 0.0); size]; size];
            for (ti, &t) in taus.iter().enumerate() {
                let blk = jacobi_b_block(l, t, band)?;
                for i in 0..size {
                    for j in 0..size {
                        acc[i][j] += ws[ti][i][j] * blk[i][j].conj();
                    }
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut principal = vec![vec![vec![Complex64::new(0.0, 0.0); r_grid.len()]; size]; size];
    for (ri, acc) in per_r.iter().enumerate() {
        for i in 0..size {
            for j in 0..size {
                principal[i][j][ri] = acc[i][j];
            }
        }
    }
    let start = r_grid.len() - (r_grid.len() / 20).max(1);
    let mut tail_estimate: f64 = 0.0;
    for row in &principal {
        for v in row {
            for ri in start..r_grid.len() {
                tail_estimate = tail_estimate.max(v[ri].norm_sqr() * plancherel_density(r_grid[ri]));
            }
        }
    }
    let mut discrete = Vec::new();
    let b = band as i32;
    for m in -b..=b {
        for n in -b..=b {
            if m * n <= 0 {
                continue;
            }
            for j in 1..=(m.abs().min(n.abs()) as u32) {
                let l = Complex64::new(j as f64 - 1.0, 0.0);
                let mut acc = Complex64::new(0.0, 0.0);
                for (ti, &t) in taus.iter().enumerate() {
                    acc += ws[ti][band_index(band, m)][band_index(band, n)]
                        * jacobi_b_quad(l, m as f64, n as f64, t, p)?.conj();
                }
                let weight = 1.0 / discrete_norm_sq(l, m, n, p)?;
                discrete.push(DiscreteCoeff { m, n, j, b: acc, weight });
            }
        }
    }
    Ok(TransformData { band, r_grid: r_grid.to_vec(), principal, discrete, tail_estimate })
}

/// Reconstructed `Π_mn(τ)` for all `|m|, |n| ≤ band`, with an r-quadrature error estimate
/// from comparing the full trapezoid to the one on every second node.
pub fn inverse_slices_at(td: &TransformData, tau: f64, p: &TruncationParams) -> Result<(Vec<Vec<Complex64>>, f64)> {
    let size = 2 * td.band + 1;
    let w = trapezoid_weights(&td.r_grid);
    let coarse_grid: Vec<f64> = td.r_grid.iter().step_by(2).copied().collect();
    let wc = if coarse_grid.len() >= 2 { trapezoid_weights(&coarse_grid) } else { vec![0.0; coarse_grid.len()] };
    let mut fine = vec![vec![Complex64::new(0.0, 0.0); size]; size];
    let mut coarse = vec![vec![Complex64::new(0.0, 0.0); size]; size];
    for (ri, &r) in td.r_grid.iter().enumerate() {
        let blk = jacobi_b_block(principal_l(r), tau, td.band)?;
        for i in 0..size {
            for j in 0..size {
                let term = td.principal[i][j][ri] * blk[i][j];
                fine[i][j] += w[ri] * term;
                if ri % 2 == 0 {
                    coarse[i][j] += wc[ri / 2] * term;
                }
            }
        }
    }
    let mut err: f64 = 0.0;
    for i in 0..size {
        for j in 0..size {
            err = err.max((fine[i][j] - coarse[i][j]).norm());
        }
    }
    for d in &td.discrete {
        let l = Complex64::new(d.j as f64 - 1.0, 0.0);
        let v = jacobi_b_quad(l, d.m as f64, d.n as f64, tau, p)?;
        fine[band_index(td.band, d.m)][band_index(td.band, d.n)] += d.weight * d.b * v;
    }
    let c = 1.0 / (4.0 * PI * PI);
    for row in fine.iter_mut() {
        for x in row.iter_mut() {
            *x *= c;
        }
    }
    Ok((fine, err * c))
}

/// Inverse transform as an evaluator. Each evaluation sums the r-grid at that τ.
pub fn inverse(td: &TransformData, p: &TruncationParams) -> Result<GroupFunction> {
    let td = Arc::new(td.clone());
    let p = *p;
    let band = td.band;
    let tau_max = f64::INFINITY;
    Ok(GroupFunction {
        eval: Arc::new(move |phi, tau, psi| {
            let (s, _) = match inverse_slices_at(&td, tau, &p) {
                Ok(x) => x,
                Err(_) => return Complex64::new(f64::NAN, f64::NAN),
            };
            let b = band as i32;
            let mut acc = Complex64::new(0.0, 0.0);
            for m in -b..=b {
                for n in -b..=b {
                    acc += s[band_index(band, m)][band_index(band, n)]
                        * Complex64::from_polar(1.0, -(m as f64) * phi - (n as f64) * psi);
                }
            }
            acc
        }),
        tau_max,
        band,
    })
}

/// Reconstruction residual `max |Π̃_mn(τ) − Π_mn(τ)|` over a τ-grid. Fails with an
/// accuracy error when the r-quadrature estimate exceeds `tol`.
pub fn round_trip_residual(
    f: &GroupFunction,
    td: &TransformData,
    tau_grid: &[f64],
    tol: f64,
    p: &TruncationParams,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &t in tau_grid {
        let orig = fourier_slices_at(f, t)?;
        let (rec, est) = inverse_slices_at(td, t, p)?;
        if est > tol {
            return Err(Error::Accuracy {
                what: "r grid",
                coarse: Complex64::new(est, 0.0),
                fine: Complex64::new(0.0, 0.0),
                estimate: est,
            });
        }
        for (a, b) in orig.iter().flatten().zip(rec.iter().flatten()) {
            worst = worst.max((a - b).norm());
        }
    }
    Ok(worst)
}

/// Pointwise `max |F − F̃|` on `tau_grid × (φ, ψ)` with `n_angles` equispaced angles each.
pub fn round_trip_pointwise(
    f: &GroupFunction,
    td: &TransformData,
    tau_grid: &[f64],
    n_angles: usize,
    p: &TruncationParams,
) -> Result<f64> {
    let b = td.band as i32;
    let h = 2.0 * PI / n_angles as f64;
    let mut worst: f64 = 0.0;
    for &t in tau_grid {
        let (rec, _) = inverse_slices_at(td, t, p)?;
        for i in 0..n_angles {
            for j in 0..n_angles {
                let (phi, psi) = (h * i as f64, h * j as f64);
                let mut v = Complex64::new(0.0, 0.0);
                for m in -b..=b {
                    for n in -b..=b {
                        v += rec[band_index(td.band, m)][band_index(td.band, n)]
                            * Complex64::from_polar(1.0, -(m as f64) * phi - (n as f64) * psi);
                    }
                }
                worst = worst.max((v - f.eval(phi, t, psi)).norm());
            }
        }
    }
    Ok(worst)
}

/// `(1/4π²) [Σ ∫ |a_mn|² r tanh(πr) dr + Σ w |b|²]`.
pub fn plancherel_norm(td: &TransformData) -> f64 {
    let w = trapezoid_weights(&td.r_grid);
    let mut s = 0.0;
    for row in &td.principal {
        for v in row {
            s += v.iter().zip(&w).map(|(a, wi)| a.norm_sqr() * wi).sum::<f64>();
        }
    }
    s += td.discrete.iter().map(|d| d.weight * d.b.norm_sqr()).sum::<f64>();
    s / (4.0 * PI * PI)
}

/// `∫ |F|² dg` by trapezoid in `φ, ψ` and Gauss–Legendre in `τ`.
pub fn direct_norm(f: &GroupFunction) -> f64 {
    let n = 4 * (f.band + 1);
    let h = 2.0 * PI / n as f64;
    let (taus, wts) = tau_nodes(f.tau_max);
    let mut s = 0.0;
    for (t, w) in taus.iter().zip(&wts) {
        let mut inner = 0.0;
        for i in 0..n {
            for j in 0..n {
                inner += f.eval(h * i as f64, *t, h * j as f64).norm_sqr();
            }
        }
        s += inner * h * h * t.sinh() * w;
    }
    s
}

/// Smooth bump `exp(−1/(1 − (τ/τ_max)²))·e` on `[0, τ_max)`, 0 beyond.
pub fn bump(tau: f64, tau_max: f64) -> f64 {
    let x = tau / tau_max;
    if x >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - x * x)).exp()
    }
}

/// Gaussian `exp(−τ²/(2σ²))` multiplied by the smooth cutoff [`bump`].
pub fn gaussian_bump(tau: f64, sigma: f64, tau_max: f64) -> f64 {
    (-(tau * tau) / (2.0 * sigma * sigma)).exp() * bump(tau, tau_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn slices_of_a_pure_phase() {
        let f = GroupFunction::from_slices(3.0, vec![(2, 1, Arc::new(|t: f64| c(bump(t, 3.0), 0.0)))]).unwrap();
        let s = fourier_slices_at(&f, 1.2).unwrap();
        for m in -2i32..=2 {
            for n in -2i32..=2 {
                let v = s[band_index(2, m)][band_index(2, n)];
                if (m, n) == (2, 1) {
                    assert!((v - bump(1.2, 3.0)).norm() < 1e-14);
                } else {
                    assert!(v.norm() < 1e-14);
                }
            }
        }
        let wide = GroupFunction::new(3.0, 1, Arc::new(|phi, _, _| Complex64::from_polar(1.0, 3.0 * phi))).unwrap();
        assert!(fourier_slices_at(&wide, 1.0).is_err());
    }

    #[test]
    fn discrete_norms_match_formal_degree() {
        let p = TruncationParams::default();
        // ‖B^{j−1}_{mn}‖² = (j − 1/2)^{−1} Γ(|n|+j)Γ(|m|−j+1) / (Γ(|m|+j)Γ(|n|−j+1))
        let g = |x: f64| crate::special_fn::gamma(c(x, 0.0)).unwrap().re;
        for (j, m, n) in [(1u32, 1, 1), (1, 2, 3), (2, 2, 2), (2, -3, -2), (3, 5, 3), (1, -1, -3)] {
            let v = discrete_norm_sq(c(j as f64 - 1.0, 0.0), m, n, &p).unwrap();
            let (jf, am, an) = (j as f64, m.abs() as f64, n.abs() as f64);
            let want = g(an + jf) * g(am - jf + 1.0) / (g(am + jf) * g(an - jf + 1.0)) / (jf - 0.5);
            assert!((v - want).abs() < 1e-8 * want, "{j} {m} {n}: {v} {want}");
        }
    }

    #[test]
    fn zero_function() {
        let p = TruncationParams::default();
        let f = GroupFunction::zero(2.0, 1);
        let td = forward(&f, &uniform_r_grid(4.0, 41), &p).unwrap();
        assert_eq!(plancherel_norm(&td), 0.0);
        assert_eq!(direct_norm(&f), 0.0);
    }
}
