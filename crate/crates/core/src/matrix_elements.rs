//! Matrix coefficients `(T^χ_g)_{mn} = e^{−im'φ} e^{−in'ψ} B^l_{m'n'}(cosh τ)` and the
//! Jacobi functions `B^l_{mn}` by several independent methods.

use crate::error::{Error, Result};
use crate::group::{from_euler, to_euler, GroupElement};
use crate::oracle::AccuracyCertificate;
use crate::special_fn::{binom, gamma, recip_gamma};
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Series {
    Principal,
    Complementary,
    Discrete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Zero,
    Half,
}

impl Parity {
    pub fn value(self) -> f64 {
        match self {
            Parity::Zero => 0.0,
            Parity::Half => 0.5,
        }
    }
}

/// Representation label χ = (l, ε).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepIndex {
    l: Complex64,
    epsilon: Parity,
    series: Series,
}

impl RepIndex {
    /// First principal series, `l = −1/2 + ir`.
    pub fn principal(r: f64) -> Result<Self> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::Domain(format!("principal series needs r >= 0, got {r}")));
        }
        Ok(RepIndex { l: Complex64::new(-0.5, r), epsilon: Parity::Zero, series: Series::Principal })
    }

    pub fn complementary(l: f64) -> Result<Self> {
        if !(l > -1.0 && l < 0.0) || l == -0.5 {
            return Err(Error::Domain(format!("complementary series needs l in (-1,0) minus -1/2, got {l}")));
        }
        Ok(RepIndex { l: Complex64::new(l, 0.0), epsilon: Parity::Zero, series: Series::Complementary })
    }

    /// Discrete points: half-integral `l = n − 1/2`, and the integral labels `l ≥ 1`.
    pub fn discrete(l: f64) -> Result<Self> {
        if !(l >= 0.5 && (2.0 * l).fract() == 0.0) {
            return Err(Error::Domain(format!("discrete series needs 2l in Z, l >= 1/2, got {l}")));
        }
        Ok(RepIndex { l: Complex64::new(l, 0.0), epsilon: Parity::Zero, series: Series::Discrete })
    }

    /// Classify an arbitrary `l`.
    pub fn from_l(l: Complex64) -> Result<Self> {
        if (l.re + 0.5).abs() < 1e-15 && l.im >= 0.0 {
            return RepIndex::principal(l.im);
        }
        if l.im != 0.0 {
            return Err(Error::Domain(format!("l = {l} is not in the spectral set")));
        }
        if l.re < 0.0 {
            RepIndex::complementary(l.re)
        } else {
            RepIndex::discrete(l.re)
        }
    }

    pub fn with_epsilon(mut self, epsilon: Parity) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn l(&self) -> Complex64 {
        self.l
    }

    pub fn epsilon(&self) -> Parity {
        self.epsilon
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn r(&self) -> Option<f64> {
        (self.series == Series::Principal).then_some(self.l.im)
    }

    /// `s' = l + 1`, equal to `1/2 + ir` on the principal series.
    pub fn s_prime(&self) -> Complex64 {
        self.l + 1.0
    }

    /// `λ'² = s'(1 − s') = −l(l+1)`, equal to `1/4 + r²` on the principal series.
    pub fn lambda_sq(&self) -> Complex64 {
        -self.l * (self.l + 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationParams {
    pub quad_points: usize,
    pub series_terms: usize,
    pub fourier_cutoff: usize,
    pub resonance_depth: usize,
}

impl Default for TruncationParams {
    fn default() -> Self {
        TruncationParams { quad_points: 64, series_terms: 20_000, fourier_cutoff: 64, resonance_depth: 6 }
    }
}

impl TruncationParams {
    pub fn validate(&self) -> Result<()> {
        if self.quad_points < 16 || self.series_terms == 0 || self.fourier_cutoff == 0 {
            return Err(Error::Domain(format!("invalid truncation parameters {self:?}")));
        }
        Ok(())
    }
}

const QUAD_MAX_NODES: usize = 1 << 22;
const CERT_TOL: f64 = 1e-10;

fn check_weights(m: f64, n: f64) -> Result<f64> {
    let fm = m - m.floor();
    let fn_ = n - n.floor();
    if fm != fn_ || (fm != 0.0 && fm != 0.5) {
        return Err(Error::Domain(format!(
            "m = {m}, n = {n} must both be integers or both half-integers"
        )));
    }
    Ok(fm)
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::Domain(format!("tau = {tau} must be finite and >= 0")));
    }
    Ok(())
}

struct Contour {
    c: f64,
    s: f64,
    u: f64,
}

impl Contour {
    /// log of the integrand on `w = e^{u + iθ}`.
    #[inline]
    fn log_h(&self, l: Complex64, m: f64, n: f64, theta: f64) -> Complex64 {
        let w = Complex64::from_polar(self.u.exp(), theta);
        let a = self.c + self.s * w;
        let b = self.c + self.s / w;
        (l + n) * a.ln() + (l - n) * b.ln() + (m - n) * Complex64::new(self.u, theta)
    }

    /// `d/dτ` of the integrand divided by the integrand.
    #[inline]
    fn dlog_h(&self, l: Complex64, n: f64, theta: f64) -> Complex64 {
        let w = Complex64::from_polar(self.u.exp(), theta);
        let a = self.c + self.s * w;
        let b = self.c + self.s / w;
        (l + n) * (self.s + self.c * w) / (2.0 * a) + (l - n) * (self.s + self.c / w) / (2.0 * b)
    }
}

/// Circle `|w| = e^u` inside the analyticity annulus. The scan finds the sampled
/// minimum `M*` of `max|integrand|` over `|u| < 0.95 L`; the circle closest to
/// `|w| = 1` with `max|integrand| ≤ 10 M*` is used, so tiny coefficients keep their
/// relative accuracy while the node count stays moderate.
fn choose_contour(l: Complex64, m: f64, n: f64, tau: f64) -> (Contour, f64) {
    let (c, s) = ((tau / 2.0).cosh(), (tau / 2.0).sinh());
    let big_l = -(tau / 2.0).tanh().ln();
    const STEPS: usize = 40;
    const SAMPLES: usize = 48;
    let scan: Vec<(f64, f64)> = (0..=STEPS)
        .map(|i| {
            let u = 0.95 * big_l * (2.0 * i as f64 / STEPS as f64 - 1.0);
            let ct = Contour { c, s, u };
            let mx = (0..SAMPLES)
                .map(|j| ct.log_h(l, m, n, 2.0 * PI * j as f64 / SAMPLES as f64).re)
                .fold(f64::NEG_INFINITY, f64::max);
            (u, mx)
        })
        .collect();
    let best = scan.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
    let pick = scan
        .iter()
        .filter(|x| x.1 <= best + 10f64.ln())
        .min_by(|a, b| a.0.abs().partial_cmp(&b.0.abs()).unwrap())
        .copied()
        .unwrap_or((0.0, best));
    (Contour { c, s, u: pick.0 }, pick.1)
}

/// Certified trapezoid value of `B^l_{mn}(cosh τ)` from
/// `(1/2π)∮ (c + s w)^{l+n} (c + s/w)^{l−n} w^{m−n} dθ`.
pub fn jacobi_b_quad_cert(
    l: Complex64,
    m: f64,
    n: f64,
    tau: f64,
    p: &TruncationParams,
) -> Result<AccuracyCertificate> {
    check_tau(tau)?;
    check_weights(m, n)?;
    p.validate()?;
    if tau == 0.0 {
        let v = if m == n { 1.0 } else { 0.0 };
        return Ok(AccuracyCertificate {
            value: Complex64::new(v, 0.0),
            error_estimate: 0.0,
            refinement_levels: 1,
            nodes: 1,
        });
    }
    let (ct, logmax) = choose_contour(l, m, n, tau);
    let hmax = logmax.exp();
    let f = |th: f64| ct.log_h(l, m, n, th).exp();
    certify(f, p.quad_points, hmax, "jacobi_b_quad")
}

fn certify<F: Fn(f64) -> Complex64>(
    f: F,
    n0: usize,
    hmax: f64,
    what: &'static str,
) -> Result<AccuracyCertificate> {
    let floor = 64.0 * f64::EPSILON * hmax;
    let cert = crate::oracle::quad_periodic_adaptive(
        &f,
        n0,
        |v| (1e-15 * v.norm()).max(floor),
        QUAD_MAX_NODES,
    );
    if !(cert.value.re.is_finite() && cert.value.im.is_finite())
        || cert.error_estimate > CERT_TOL * cert.value.norm().max(1.0)
    {
        let half = crate::oracle::quad_periodic(&f, cert.nodes / 4, 1);
        return Err(Error::Accuracy {
            what,
            coarse: half.value,
            fine: cert.value,
            estimate: cert.error_estimate,
        });
    }
    Ok(cert)
}

pub fn jacobi_b_quad(l: Complex64, m: f64, n: f64, tau: f64, p: &TruncationParams) -> Result<Complex64> {
    jacobi_b_quad_cert(l, m, n, tau, p).map(|c| c.value)
}

/// Value and τ-derivative of `B^l_{mn}(cosh τ)` by the trapezoid (τ > 0).
pub fn jacobi_b_quad_with_derivative(
    l: Complex64,
    m: f64,
    n: f64,
    tau: f64,
    p: &TruncationParams,
) -> Result<(Complex64, Complex64)> {
    check_weights(m, n)?;
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::Domain(format!("derivative needs tau > 0, got {tau}")));
    }
    let (ct, logmax) = choose_contour(l, m, n, tau);
    let hmax = logmax.exp();
    let v = certify(|th| ct.log_h(l, m, n, th).exp(), p.quad_points, hmax, "jacobi_b_quad")?;
    let dmax = hmax * (l.norm() + n.abs() + 1.0) * (tau / 2.0).cosh().powi(2);
    let d = certify(
        |th| ct.log_h(l, m, n, th).exp() * ct.dlog_h(l, n, th),
        p.quad_points,
        dmax,
        "jacobi_b_quad derivative",
    )?;
    Ok((v.value, d.value))
}

/// Binomial series `Σ_k C(l+n,k) C(l−n,k+m−n) c^{2l−2k+n−m} s^{2k+m−n}`, k ≥ max(0, n−m),
/// with the value and the estimated truncation tail.
pub fn jacobi_b_series_cert(
    l: Complex64,
    m: i32,
    n: i32,
    tau: f64,
    p: &TruncationParams,
) -> Result<AccuracyCertificate> {
    check_tau(tau)?;
    p.validate()?;
    if tau == 0.0 {
        let v = if m == n { 1.0 } else { 0.0 };
        return Ok(AccuracyCertificate {
            value: Complex64::new(v, 0.0),
            error_estimate: 0.0,
            refinement_levels: 1,
            nodes: 1,
        });
    }
    let (c, s) = ((tau / 2.0).cosh(), (tau / 2.0).sinh());
    let (mf, nf) = (m as f64, n as f64);
    let d = m - n;
    let k0 = (n - m).max(0) as u32;
    let j0 = (k0 as i32 + d) as u32;
    let first = binom(l + nf, k0)
        * binom(l - nf, j0)
        * ((2.0 * l - 2.0 * k0 as f64 + nf - mf) * c.ln()).exp()
        * s.powi((2 * k0 as i32) + d);
    let q = (s / c) * (s / c);
    let mut term = first;
    let mut sum = term;
    let mut small_run = 0;
    let mut prev_abs = term.norm();
    let mut tail = 0.0;
    let mut k = k0 as f64;
    let mut j = j0 as f64;
    let mut count = 1usize;
    let mut converged = term.norm() == 0.0;
    while !converged {
        if count >= p.series_terms {
            break;
        }
        term *= (l + nf - k) / (k + 1.0) * (l - nf - j) / (j + 1.0) * q;
        k += 1.0;
        j += 1.0;
        count += 1;
        sum += term;
        let a = term.norm();
        if a == 0.0 {
            converged = true;
            tail = 0.0;
            break;
        }
        if a <= 1e-16 * sum.norm() {
            small_run += 1;
        } else {
            small_run = 0;
        }
        let ratio = a / prev_abs;
        prev_abs = a;
        if small_run >= 5 && ratio < 1.0 {
            tail = a * ratio / (1.0 - ratio);
            converged = true;
        }
    }
    if !converged || tail > 1e-12 * sum.norm().max(1e-300) {
        return Err(Error::Accuracy {
            what: "jacobi_b_series",
            coarse: sum - term,
            fine: sum,
            estimate: if converged { tail } else { term.norm() * q / (1.0 - q) },
        });
    }
    Ok(AccuracyCertificate { value: sum, error_estimate: tail, refinement_levels: 1, nodes: count })
}

pub fn jacobi_b_series(l: Complex64, m: i32, n: i32, tau: f64, p: &TruncationParams) -> Result<Complex64> {
    jacobi_b_series_cert(l, m, n, tau, p).map(|c| c.value)
}

/// All `B^l_{mn}(cosh τ)` with `|m|, |n| ≤ mmax` (ε = 0) from one set of unit-circle
/// nodes. Indexing is `[(m + mmax)][(n + mmax)]`. Accurate in absolute terms.
pub fn jacobi_b_block(l: Complex64, tau: f64, mmax: usize) -> Result<Vec<Vec<Complex64>>> {
    check_tau(tau)?;
    let size = 2 * mmax + 1;
    let mut out = vec![vec![Complex64::new(0.0, 0.0); size]; size];
    if tau == 0.0 {
        for (i, row) in out.iter_mut().enumerate() {
            row[i] = Complex64::new(1.0, 0.0);
        }
        return Ok(out);
    }
    let (c, s) = ((tau / 2.0).cosh(), (tau / 2.0).sinh());
    let big_l = -(tau / 2.0).tanh().ln();
    let want = 2.0 * size as f64 + 40.0 / big_l + 16.0;
    let nodes = (want as usize).next_power_of_two();
    if nodes > QUAD_MAX_NODES {
        return Err(Error::Domain(format!("tau = {tau} too large for the block evaluator")));
    }
    // acc[n][d] = Σ_j |x_j|^{2l} u_j^n e^{i d θ_j}, d = m − n
    let dsize = 2 * size - 1;
    let shift = (size - 1) as i64;
    let mut acc = vec![vec![Complex64::new(0.0, 0.0); dsize]; size];
    let h = 2.0 * PI / nodes as f64;
    for jn in 0..nodes {
        let th = h * jn as f64;
        let x = c + s * Complex64::from_polar(1.0, th);
        let base = (2.0 * l * x.norm().ln()).exp();
        let u = x / x.conj();
        let e = Complex64::from_polar(1.0, th);
        let mut un = base * u.powi(-(mmax as i32));
        for row in acc.iter_mut() {
            let mut ed = un * e.powi(-(shift as i32));
            for slot in row.iter_mut() {
                *slot += ed;
                ed *= e;
            }
            un *= u;
        }
    }
    for (mi, row) in out.iter_mut().enumerate() {
        for (ni, v) in row.iter_mut().enumerate() {
            let d = mi as i64 - ni as i64 + shift;
            *v = acc[ni][d as usize] / nodes as f64;
        }
    }
    Ok(out)
}

/// Integrates the radial equation
/// `f'' + coth τ f' − (m² + n² − 2mn cosh τ)/sinh²τ · f = l(l+1) f`
/// with classical RK4 from quadrature data at `tau0`, calling `visit(τ, f)` on the grid
/// `tau0 + k·h` up to `tau1`.
pub fn jacobi_b_ode_sweep<V: FnMut(f64, Complex64)>(
    l: Complex64,
    m: i32,
    n: i32,
    tau0: f64,
    tau1: f64,
    h: f64,
    p: &TruncationParams,
    mut visit: V,
) -> Result<()> {
    let (f0, d0) = jacobi_b_quad_with_derivative(l, m as f64, n as f64, tau0, p)?;
    let ll = l * (l + 1.0);
    let (mf, nf) = (m as f64, n as f64);
    let rhs = |t: f64, y: [Complex64; 2]| -> [Complex64; 2] {
        let sh = t.sinh();
        let pot = (mf * mf + nf * nf - 2.0 * mf * nf * t.cosh()) / (sh * sh);
        [y[1], (ll + pot) * y[0] - y[1] * (t.cosh() / sh)]
    };
    let steps = ((tau1 - tau0) / h).round() as usize;
    let mut y = [f0, d0];
    visit(tau0, y[0]);
    for k in 0..steps {
        let t = tau0 + h * k as f64;
        let k1 = rhs(t, y);
        let k2 = rhs(t + h / 2.0, [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]]);
        let k3 = rhs(t + h / 2.0, [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]]);
        let k4 = rhs(t + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        for i in 0..2 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        visit(tau0 + h * (k + 1) as f64, y[0]);
    }
    Ok(())
}

/// `B^l_{mn}(cosh τ)` for large τ by ODE continuation from τ = 3.
pub fn jacobi_b_ode(l: Complex64, m: i32, n: i32, tau: f64, p: &TruncationParams) -> Result<Complex64> {
    const START: f64 = 3.0;
    if tau <= START {
        return jacobi_b_quad(l, m as f64, n as f64, tau, p);
    }
    let steps = ((tau - START) / 2e-3).ceil().max(1.0);
    let h = (tau - START) / steps;
    let mut last = Complex64::new(0.0, 0.0);
    jacobi_b_ode_sweep(l, m, n, START, tau, h, p, |_, f| last = f)?;
    Ok(last)
}

/// Euler angles of `g` with `φ` extended to `[0, 4π)` so that `from_euler` returns `g` exactly.
fn exact_euler(g: &GroupElement) -> (f64, f64, f64) {
    let e = to_euler(g);
    let h = from_euler(&e).expect("to_euler returns valid angles");
    if h.distance(g) <= h.distance(&g.neg()) {
        (e.phi, e.tau, e.psi)
    } else {
        (e.phi + 2.0 * PI, e.tau, e.psi)
    }
}

/// `(T^χ_g)_{mn}` with `m, n` the shifted weights `m' = m + ε` (pass them already shifted).
pub fn matrix_element(chi: &RepIndex, g: &GroupElement, m: f64, n: f64, p: &TruncationParams) -> Result<Complex64> {
    let frac = check_weights(m, n)?;
    if frac != chi.epsilon().value() {
        return Err(Error::Domain(format!(
            "weights m = {m}, n = {n} do not match epsilon = {}",
            chi.epsilon().value()
        )));
    }
    let (phi, tau, psi) = exact_euler(g);
    let b = jacobi_b_quad(chi.l(), m, n, tau, p)?;
    Ok(Complex64::from_polar(1.0, -m * phi - n * psi) * b)
}

/// Both sides of `(T_{g1 g2})_{mn} = Σ_{|k|≤K} (T_{g1})_{mk} (T_{g2})_{kn}` (ε = 0).
pub fn compose_check(
    chi: &RepIndex,
    g1: &GroupElement,
    g2: &GroupElement,
    m: i32,
    n: i32,
    k_max: i32,
    p: &TruncationParams,
) -> Result<(Complex64, Complex64)> {
    let lhs = matrix_element(chi, &g1.compose(g2), m as f64, n as f64, p)?;
    let mut rhs = Complex64::new(0.0, 0.0);
    for k in -k_max..=k_max {
        let a = matrix_element(chi, g1, m as f64, k as f64, p)?;
        let b = matrix_element(chi, g2, k as f64, n as f64, p)?;
        rhs += a * b;
    }
    Ok((lhs, rhs))
}

/// Depth-0 coefficient of `e^{ls}` in `B^l_{mn}(cosh s)`:
/// `2^{−2l} Γ(2l+1) / (Γ(l+m+1) Γ(l−m+1))`.
pub fn leading_plus(l: Complex64, m: i32) -> Result<Complex64> {
    let mf = m as f64;
    Ok((-2.0 * l * 2f64.ln()).exp() * gamma(2.0 * l + 1.0)? * recip_gamma(l + mf + 1.0) * recip_gamma(l - mf + 1.0))
}

/// Depth-0 coefficient of `e^{(−1−l)s}` in `B^l_{mn}(cosh s)`:
/// `2^{2l+2} Γ(−2l−1) (−1)^{m+n} sin²(πl) Γ(l−n+1) Γ(l+n+1) / π²`.
pub fn leading_minus(l: Complex64, m: i32, n: i32) -> Result<Complex64> {
    let nf = n as f64;
    let sign = if (m + n).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let sp = (PI * l).sin();
    Ok(((2.0 * l + 2.0) * 2f64.ln()).exp()
        * gamma(-2.0 * l - 1.0)?
        * sign
        * sp
        * sp
        * gamma(l - nf + 1.0)?
        * gamma(l + nf + 1.0)?
        / (PI * PI))
}

/// Two-term large-`s` form of `B^l_{mn}(cosh s)` from the computed depth-0 coefficients.
pub fn asymptotic_b_mn(l: Complex64, m: i32, n: i32, s: f64) -> Result<Complex64> {
    if s < 3.0 {
        return Err(Error::Domain(format!("asymptotic form needs s >= 3, got {s}")));
    }
    Ok(leading_plus(l, m)? * (l * s).exp() + leading_minus(l, m, n)? * ((-1.0 - l) * s).exp())
}

/// Two-term large-`s` form of `B^l_{m0}(cosh s)`.
pub fn asymptotic_b(l: Complex64, m: i32, s: f64) -> Result<Complex64> {
    asymptotic_b_mn(l, m, 0, s)
}

/// The printed two-term form
/// `Γ²(l+1)/(2^{2l}√π Γ(l−m+1)Γ(l+m+1)) e^{ls} + (−1)^m Γ(l+1)/(2^{2l̄}√π) e^{l̄s}`.
pub fn asymptotic_b_printed(l: Complex64, m: i32, s: f64) -> Result<Complex64> {
    let mf = m as f64;
    let lb = l.conj();
    let g1 = gamma(l + 1.0)?;
    let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let a = g1 * g1 * recip_gamma(l - mf + 1.0) * recip_gamma(l + mf + 1.0)
        / ((2.0 * l * 2f64.ln()).exp() * PI.sqrt());
    let b = sign * g1 / ((2.0 * lb * 2f64.ln()).exp() * PI.sqrt());
    Ok(a * (l * s).exp() + b * (lb * s).exp())
}

/// Decay rate of the asymptotic-form error: with
/// `D(a) = sup_{s∈[a, a+w]} |form(s) − B(cosh s)|·e^{s/2}` (the envelope of the
/// relative deviation), returns `ln(D(a2)/D(a1)) / (a2 − a1)`. Values of `B` come
/// from ODE continuation, `w = π/|Im l|` (one oscillation) or 1 for real `l`.
pub fn asymptotic_decay_rate<F: Fn(f64) -> Result<Complex64>>(
    l: Complex64,
    m: i32,
    n: i32,
    form: F,
    a1: f64,
    a2: f64,
    p: &TruncationParams,
) -> Result<f64> {
    let w = if l.im.abs() > 1e-12 { PI / l.im.abs() } else { 1.0 };
    let h = 2e-3;
    let mut samples = Vec::new();
    jacobi_b_ode_sweep(l, m, n, 3.0, a2 + w, h, p, |t, f| samples.push((t, f)))?;
    let sup = |a: f64| -> Result<f64> {
        let mut mx = 0.0f64;
        for &(t, f) in samples.iter().filter(|x| x.0 >= a - 1e-12 && x.0 <= a + w + 1e-12) {
            mx = mx.max((form(t)? - f).norm() * (t / 2.0).exp());
        }
        Ok(mx)
    };
    Ok((sup(a2)? / sup(a1)?).ln() / (a2 - a1))
}

/// Variants of the unwrapped eigen-equation for `F(φ, τ) = e^{−ikφ} B^l_{km}(cosh τ)`:
/// `[−csch τ ∂_τ sinh τ ∂_τ − csch²τ (∂²_φ + 2im X(τ) ∂_φ − m²)] F = σ l(l+1) F`
/// with `X = sinh` (as printed) or `cosh`, and `σ = ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EigenVariant {
    pub cross_cosh: bool,
    pub eigen_sign: i8,
}

impl EigenVariant {
    pub const ALL: [EigenVariant; 4] = [
        EigenVariant { cross_cosh: false, eigen_sign: 1 },
        EigenVariant { cross_cosh: true, eigen_sign: 1 },
        EigenVariant { cross_cosh: false, eigen_sign: -1 },
        EigenVariant { cross_cosh: true, eigen_sign: -1 },
    ];

    pub fn label(&self) -> &'static str {
        match (self.cross_cosh, self.eigen_sign) {
            (false, 1) => "sinh cross term, +l(l+1) (as printed)",
            (true, 1) => "cosh cross term, +l(l+1)",
            (false, _) => "sinh cross term, -l(l+1)",
            (true, _) => "cosh cross term, -l(l+1)",
        }
    }
}

/// Relative residual of the eigen-equation by central differences of step `h`
/// in both φ and τ, evaluated at `(φ, τ)`.
pub fn eigen_residual(
    l: Complex64,
    k: i32,
    m: i32,
    phi: f64,
    tau: f64,
    h: f64,
    variant: EigenVariant,
    p: &TruncationParams,
) -> Result<f64> {
    let b = |t: f64| jacobi_b_quad(l, k as f64, m as f64, t, p);
    let ph = |f: f64| Complex64::from_polar(1.0, -(k as f64) * f);
    let big_f = |f: f64, t: f64| -> Result<Complex64> { Ok(ph(f) * b(t)?) };
    let f0 = big_f(phi, tau)?;
    let fp = big_f(phi, tau + h)?;
    let fm = big_f(phi, tau - h)?;
    let d_tau = (fp - fm) / (2.0 * h);
    let d2_tau = (fp - 2.0 * f0 + fm) / (h * h);
    let gp = big_f(phi + h, tau)?;
    let gm = big_f(phi - h, tau)?;
    let d_phi = (gp - gm) / (2.0 * h);
    let d2_phi = (gp - 2.0 * f0 + gm) / (h * h);
    let (sh, ch) = (tau.sinh(), tau.cosh());
    let x = if variant.cross_cosh { ch } else { sh };
    let mf = m as f64;
    let radial = -(d2_tau + ch / sh * d_tau);
    let angular = -(d2_phi + 2.0 * Complex64::i() * mf * x * d_phi - mf * mf * f0) / (sh * sh);
    let rhs = variant.eigen_sign as f64 * l * (l + 1.0) * f0;
    let scale = (l * (l + 1.0) * f0).norm().max(f0.norm()).max(1e-300);
    Ok((radial + angular - rhs).norm() / scale)
}
