//! Ruelle resonances of the geodesic flow on one irreducible component:
//! the resonance set σ(l), residue amplitudes γ^l_{mn}(λ), eigenfunctionals,
//! and correlation / resolvent evaluation by direct and spectral routes.
//!
//! Amplitudes come from the Frobenius expansion of the radial equation in
//! `x = e^{−τ}`: `B^l_{mn}(cosh τ) = Σ_± Σ_k γ^±_k x^{k+μ±}`, `μ+ = −l`, `μ− = l+1`,
//! seeded by the two depth-0 connection coefficients.

use crate::circle_model::TrigPolynomial;
use crate::error::{Error, Result};
use crate::matrix_elements::{
    jacobi_b_ode_sweep, jacobi_b_quad, leading_minus, leading_plus, TruncationParams,
};
use crate::oracle::{integrate_gl_panels, neville_at_zero, null_space, subspace_angle, svd_small, CMatrix};
use crate::special_fn::{gamma, recip_gamma};
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResonanceId {
    pub branch: Branch,
    pub depth: usize,
}

impl ResonanceId {
    pub fn new(branch: Branch, depth: usize) -> Self {
        ResonanceId { branch, depth }
    }

    /// `λ = l± − k` with `l+ = l`, `l− = −1 − l`.
    pub fn value(&self, l: Complex64) -> Complex64 {
        branch_top(l, self.branch) - self.depth as f64
    }
}

pub fn branch_top(l: Complex64, b: Branch) -> Complex64 {
    match b {
        Branch::Plus => l,
        Branch::Minus => -1.0 - l,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceTerm {
    pub id: ResonanceId,
    pub lambda: Complex64,
    pub amplitude: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchSelection {
    Both,
    Single,
}

fn is_resonant(l: Complex64) -> bool {
    l.im == 0.0 && (2.0 * l.re + 1.0).fract() == 0.0
}

fn check_l(l: Complex64) -> Result<()> {
    if !(l.re.is_finite() && l.im.is_finite()) {
        return Err(Error::Domain(format!("l = {l} is not finite")));
    }
    if (l.re + 0.5).abs() < 1e-12 && l.im.abs() < 1e-12 {
        return Err(Error::Unsupported(
            "l = -1/2: the two resonance branches collide (double poles)".into(),
        ));
    }
    Ok(())
}

/// Resonances up to depth `j`, sorted by `Re λ` descending (plus branch first on ties).
/// For `2l + 1 ∈ ℤ` only the `l − k` branch exists.
pub fn resonance_set(l: Complex64, j: usize, sel: BranchSelection) -> Result<Vec<ResonanceId>> {
    check_l(l)?;
    let mut ids: Vec<ResonanceId> = (0..=j).map(|k| ResonanceId::new(Branch::Plus, k)).collect();
    if sel == BranchSelection::Both && !is_resonant(l) {
        ids.extend((0..=j).map(|k| ResonanceId::new(Branch::Minus, k)));
    }
    ids.sort_by(|a, b| {
        let (va, vb) = (a.value(l).re, b.value(l).re);
        vb.partial_cmp(&va).unwrap().then(a.branch.cmp(&b.branch))
    });
    Ok(ids)
}

/// Frobenius coefficients `γ_0..γ_depth` of one branch of `B^l_{mn}`.
pub fn branch_coefficients(l: Complex64, m: i32, n: i32, branch: Branch, depth: usize) -> Result<Vec<Complex64>> {
    check_l(l)?;
    let resonant = is_resonant(l);
    let polynomial = resonant && l.re >= 0.0 && m.abs() as f64 <= l.re && n.abs() as f64 <= l.re;
    let (mu, g0) = match branch {
        Branch::Plus => (-l, leading_plus(l, m)?),
        Branch::Minus => {
            if resonant {
                if polynomial {
                    return Ok(vec![Complex64::new(0.0, 0.0); depth + 1]);
                }
                return Err(Error::Unsupported(format!(
                    "second Frobenius branch at l = {l}, m = {m}, n = {n} involves logarithms"
                )));
            }
            (l + 1.0, leading_minus(l, m, n)?)
        }
    };
    let big_l = l * (l + 1.0);
    let (mf, nf) = (m as f64, n as f64);
    let mut g = vec![Complex64::new(0.0, 0.0); depth + 1];
    g[0] = g0;
    let get = |g: &Vec<Complex64>, k: isize| if k < 0 { Complex64::new(0.0, 0.0) } else { g[k as usize] };
    for k in 1..=depth {
        let ki = k as isize;
        let e = |j: isize| mu + j as f64;
        let mut rhs = 2.0 * get(&g, ki - 2) * (e(ki - 2) * e(ki - 2) - big_l)
            - get(&g, ki - 4) * (e(ki - 4) * e(ki - 4) + e(ki - 4) - big_l)
            + 4.0 * (mf * mf + nf * nf) * get(&g, ki - 2)
            - 4.0 * mf * nf * (get(&g, ki - 1) + get(&g, ki - 3));
        if ki < 4 {
            // the x⁴ term contributes only for k ≥ 4
            rhs += Complex64::new(0.0, 0.0);
        }
        let den = e(ki) * e(ki) - e(ki) - big_l;
        if den.norm() < 1e-12 {
            let scale = g.iter().take(k).map(|x| x.norm()).fold(0.0, f64::max).max(1e-300);
            if polynomial && rhs.norm() <= 1e-9 * scale * (1.0 + big_l.norm() + mf * mf + nf * nf) {
                g[k] = Complex64::new(0.0, 0.0);
                continue;
            }
            return Err(Error::Unsupported(format!(
                "resonant Frobenius index k = {k} at l = {l}, m = {m}, n = {n}"
            )));
        }
        g[k] = rhs / den;
    }
    Ok(g)
}

/// True when the expansion of `B^l_{mn}` is a finite sum (integral `l`, `|m|, |n| ≤ l`).
pub fn terminates(l: Complex64, m: i32, n: i32) -> bool {
    is_resonant(l) && l.re >= 0.0 && m.abs() as f64 <= l.re && n.abs() as f64 <= l.re
}

/// `γ^l_{mn}(λ)` for `λ = id.value(l)`.
pub fn gamma_coefficient(l: Complex64, m: i32, n: i32, id: ResonanceId, _p: &TruncationParams) -> Result<Complex64> {
    let g = branch_coefficients(l, m, n, id.branch, id.depth)?;
    Ok(g[id.depth])
}

fn index_range(mmax: usize) -> impl Iterator<Item = i32> + Clone {
    let m = mmax as i32;
    -m..=m
}

/// `γ^l_{mn}(λ)` over `|m|, |n| ≤ mmax`, rows indexed by `m`.
pub fn amplitude_matrix(l: Complex64, id: ResonanceId, mmax: usize) -> Result<CMatrix> {
    let size = 2 * mmax + 1;
    let mut a = CMatrix::zeros(size, size);
    for (i, m) in index_range(mmax).enumerate() {
        for (j, n) in index_range(mmax).enumerate() {
            a[(i, j)] = branch_coefficients(l, m, n, id.branch, id.depth)?[id.depth];
        }
    }
    Ok(a)
}

/// All depths `0..=depth` of one branch at once.
pub fn amplitude_matrices(l: Complex64, branch: Branch, depth: usize, mmax: usize) -> Result<Vec<CMatrix>> {
    let size = 2 * mmax + 1;
    let mut out = vec![CMatrix::zeros(size, size); depth + 1];
    for (i, m) in index_range(mmax).enumerate() {
        for (j, n) in index_range(mmax).enumerate() {
            let g = branch_coefficients(l, m, n, branch, depth)?;
            for (k, gk) in g.iter().enumerate() {
                out[k][(i, j)] = *gk;
            }
        }
    }
    Ok(out)
}

/// `σ₂/σ₁` of a matrix.
pub fn rank_one_ratio(a: &CMatrix) -> f64 {
    let s = svd_small(a);
    if s.sigma[0] == 0.0 {
        return 0.0;
    }
    s.sigma.get(1).copied().unwrap_or(0.0) / s.sigma[0]
}

fn branches_of(l: Complex64) -> Vec<Branch> {
    if is_resonant(l) {
        vec![Branch::Plus]
    } else {
        vec![Branch::Plus, Branch::Minus]
    }
}

/// Truncated spectral sum `Σ_{k ≤ J} γ e^{λt}` over both branches, with the size
/// of the first omitted nonzero depth as tail estimate.
pub fn spectral_b(l: Complex64, m: i32, n: i32, t: f64, p: &TruncationParams) -> Result<(Complex64, f64)> {
    spectral_b_depth(l, m, n, t, p.resonance_depth)
}

pub fn spectral_b_depth(l: Complex64, m: i32, n: i32, t: f64, depth: usize) -> Result<(Complex64, f64)> {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut tail = 0.0;
    for b in branches_of(l) {
        let g = branch_coefficients(l, m, n, b, depth + 2)?;
        let top = branch_top(l, b);
        for (k, gk) in g.iter().enumerate().take(depth + 1) {
            sum += gk * ((top - k as f64) * t).exp();
        }
        let next = |k: usize| (g[k] * ((top - k as f64) * t).exp()).norm();
        tail += if g[depth + 1] != Complex64::new(0.0, 0.0) { next(depth + 1) } else { next(depth + 2) };
    }
    Ok((sum, tail))
}

/// All resonance terms of `B^l_{mn}` up to depth `J`, sorted like [`resonance_set`].
pub fn resonance_terms(l: Complex64, m: i32, n: i32, p: &TruncationParams) -> Result<Vec<ResonanceTerm>> {
    let ids = resonance_set(l, p.resonance_depth, BranchSelection::Both)?;
    let mut cache = std::collections::HashMap::new();
    for b in branches_of(l) {
        cache.insert(b, branch_coefficients(l, m, n, b, p.resonance_depth)?);
    }
    Ok(ids
        .into_iter()
        .map(|id| ResonanceTerm { id, lambda: id.value(l), amplitude: cache[&id.branch][id.depth] })
        .collect())
}

// ---------------------------------------------------------------------------
// ladder matrices and eigenfunctionals

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Plus,
    Minus,
}

/// Matrix of `X± = L_{J3} ∓ L_{J2}` on modes `|k| ≤ mmax`, column convention
/// (`[X]_{jk}` is the coefficient of `e_j` in `X e_k`).
pub fn x_matrix(sign: Ladder, l: Complex64, mmax: usize) -> CMatrix {
    let size = 2 * mmax + 1;
    let off = mmax as i32;
    let i = Complex64::i();
    let s = match sign {
        Ladder::Plus => -1.0,
        Ladder::Minus => 1.0,
    };
    let mut x = CMatrix::zeros(size, size);
    for k in -off..=off {
        let c = (k + off) as usize;
        let kf = k as f64;
        x[(c, c)] = -i * kf;
        if k > -off {
            x[(c - 1, c)] = s * i * (l + kf) / 2.0;
        }
        if k < off {
            x[(c + 1, c)] = s * i * (kf - l) / 2.0;
        }
    }
    x
}

/// Three-term annihilation relations for the depth-0 left factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Annihilator {
    /// `(i/2)(l−j+1) c_{j−1} − i j c_j − (i/2)(l+j+1) c_{j+1} = 0`, i.e. `X₊ c = 0`.
    Corrected,
    /// The printed relation on coefficients:
    /// `−i(l+m) c_{m−1} − i m c_m + (i/2)(l−m) c_{m+1} = 0`.
    PrintedCoefficients,
    /// The printed functional row `v*_m X₋` composed with `Σ c_m v*_m`:
    /// `(i/2)(l−j+1) c_{j−1} − i j c_j − i(l+j+1) c_{j+1} = 0`.
    PrintedFunctional,
}

/// Rows `|j| ≤ mmax − 1`, columns `|k| ≤ mmax`, so every row is complete.
pub fn annihilator_matrix(l: Complex64, mmax: usize, which: Annihilator) -> CMatrix {
    let i = Complex64::i();
    let rows = 2 * mmax - 1;
    let cols = 2 * mmax + 1;
    let mut a = CMatrix::zeros(rows, cols);
    let off = mmax as i32;
    for j in -(off - 1)..=(off - 1) {
        let r = (j + off - 1) as usize;
        let c = (j + off) as usize;
        let jf = j as f64;
        let (lo, mid, hi) = match which {
            Annihilator::Corrected => (i / 2.0 * (l - jf + 1.0), -i * jf, -i / 2.0 * (l + jf + 1.0)),
            Annihilator::PrintedCoefficients => (-i * (l + jf), -i * jf, i / 2.0 * (l - jf)),
            Annihilator::PrintedFunctional => (i / 2.0 * (l - jf + 1.0), -i * jf, -i * (l + jf + 1.0)),
        };
        a[(r, c - 1)] = lo;
        a[(r, c)] = mid;
        a[(r, c + 1)] = hi;
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightLabel {
    /// `c_m = 1/(Γ(l−m+1)Γ(l+m+1))`
    PhiLPlus,
    /// `c_m = 1/(Γ(l)Γ(l+m+1))`, the variant in the proof
    PhiLPlusProof,
    /// `c_m = (−1)^m`
    PhiLMinus,
    /// right factor of the `l` branch: constant
    PhiConjPlus,
    /// right factor of the `−1−l` branch: `(−1)^n Γ(l−n+1)Γ(l+n+1)`
    PhiConjMinus,
    /// printed right factor of the `−1−l` branch: `Γ²(l+1)Γ(l−n+1)Γ(l+n+1)/(2^{2l̄}√π)`
    PhiConjMinusPrinted,
    Raised(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    pub label: WeightLabel,
    pub mmax: usize,
    /// indexed by `m + mmax`
    pub coeffs: Vec<Complex64>,
}

impl WeightVector {
    pub fn get(&self, m: i32) -> Complex64 {
        let i = m + self.mmax as i32;
        if i < 0 || i as usize >= self.coeffs.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[i as usize]
        }
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Restriction to `|m| ≤ mmax`.
    pub fn truncate(&self, mmax: usize) -> WeightVector {
        let m = mmax as i32;
        WeightVector { label: self.label, mmax, coeffs: (-m..=m).map(|k| self.get(k)).collect() }
    }
}

/// Closed-form coefficient vectors over `|m| ≤ mmax`.
pub fn closed_form(l: Complex64, label: WeightLabel, mmax: usize) -> Result<WeightVector> {
    let sgn = |m: i32| if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let coeffs: Result<Vec<Complex64>> = index_range(mmax)
        .map(|m| {
            let mf = m as f64;
            Ok(match label {
                WeightLabel::PhiLPlus => recip_gamma(l - mf + 1.0) * recip_gamma(l + mf + 1.0),
                WeightLabel::PhiLPlusProof => recip_gamma(l) * recip_gamma(l + mf + 1.0),
                WeightLabel::PhiLMinus => Complex64::new(sgn(m), 0.0),
                WeightLabel::PhiConjPlus => Complex64::new(1.0, 0.0),
                WeightLabel::PhiConjMinus => sgn(m) * gamma(l - mf + 1.0)? * gamma(l + mf + 1.0)?,
                WeightLabel::PhiConjMinusPrinted => {
                    let g1 = gamma(l + 1.0)?;
                    g1 * g1 * gamma(l - mf + 1.0)? * gamma(l + mf + 1.0)?
                        / ((2.0 * l.conj() * 2f64.ln()).exp() * PI.sqrt())
                }
                WeightLabel::Raised(_) => {
                    return Err(Error::Domain("raised vectors come from raise_weights".into()))
                }
            })
        })
        .collect();
    Ok(WeightVector { label, mmax, coeffs: coeffs? })
}

#[derive(Debug, Clone)]
pub struct WeightReport {
    pub closed_form: WeightVector,
    /// Orthonormal basis of the null space of the corrected annihilator.
    pub null_space: Vec<Vec<Complex64>>,
    /// Normalized projection of the closed form onto that null space.
    pub null_vector: WeightVector,
    /// Angle between the closed form and the null space.
    pub angle: f64,
    /// `‖A c‖ / (‖A‖ ‖c‖)` for each annihilator variant.
    pub residual_corrected: f64,
    pub residual_printed_coefficients: f64,
    pub residual_printed_functional: f64,
}

fn rel_residual(a: &CMatrix, c: &[Complex64]) -> f64 {
    let r = a.mul_vec(c);
    let rn = r.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let cn = c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    rn / (a.frobenius() * cn).max(1e-300)
}

/// Closed form plus the numerically solved null space of the annihilation relation,
/// for the left-factor labels.
pub fn weight_vector(l: Complex64, label: WeightLabel, mmax: usize) -> Result<WeightReport> {
    if mmax < 2 {
        return Err(Error::Domain("weight vectors need mmax >= 2".into()));
    }
    let cf = closed_form(l, label, mmax)?;
    let corrected = annihilator_matrix(l, mmax, Annihilator::Corrected);
    let svd = svd_small(&corrected);
    let smax = svd.sigma[0];
    let ns = null_space(&corrected, 1e-10);
    if ns.is_empty() {
        let smin = svd.sigma.last().copied().unwrap_or(0.0);
        return Err(Error::NoEigenfunctional { ratio: smin / smax });
    }
    let angle = subspace_angle(&cf.coeffs, &ns);
    let mut proj = vec![Complex64::new(0.0, 0.0); cf.coeffs.len()];
    for b in &ns {
        let c: Complex64 = b.iter().zip(&cf.coeffs).map(|(x, y)| x.conj() * y).sum();
        for (pi, bi) in proj.iter_mut().zip(b) {
            *pi += c * bi;
        }
    }
    let pn = proj.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
    let proj: Vec<Complex64> = proj.iter().map(|x| x / pn).collect();
    Ok(WeightReport {
        residual_corrected: rel_residual(&corrected, &cf.coeffs),
        residual_printed_coefficients: rel_residual(
            &annihilator_matrix(l, mmax, Annihilator::PrintedCoefficients),
            &cf.coeffs,
        ),
        residual_printed_functional: rel_residual(
            &annihilator_matrix(l, mmax, Annihilator::PrintedFunctional),
            &cf.coeffs,
        ),
        null_vector: WeightVector { label, mmax, coeffs: proj },
        null_space: ns,
        closed_form: cf,
        angle,
    })
}

/// Depth-`k` left factor from the depth-0 one: `k` applications of `X₋`
/// (column action). The result is valid on `|m| ≤ w.mmax − k`.
pub fn raise_weights(w: &WeightVector, k: usize, l: Complex64) -> WeightVector {
    let x = x_matrix(Ladder::Minus, l, w.mmax);
    let mut c = w.coeffs.clone();
    for _ in 0..k {
        c = x.mul_vec(&c);
    }
    let out = WeightVector { label: WeightLabel::Raised(k), mmax: w.mmax, coeffs: c };
    out.truncate(w.mmax.saturating_sub(k))
}

/// Depth-`k` right factor from the depth-0 one: `w^{(k)ᵀ} = w^{(0)ᵀ} X₊^k` (row action).
pub fn lower_weights(w: &WeightVector, k: usize, l: Complex64) -> WeightVector {
    let xt = x_matrix(Ladder::Plus, l, w.mmax).transpose();
    let mut c = w.coeffs.clone();
    for _ in 0..k {
        c = xt.mul_vec(&c);
    }
    let out = WeightVector { label: WeightLabel::Raised(k), mmax: w.mmax, coeffs: c };
    out.truncate(w.mmax.saturating_sub(k))
}

/// Leading left and right singular vectors of an amplitude matrix.
pub fn rank_one_factors(a: &CMatrix) -> (Vec<Complex64>, Vec<Complex64>) {
    let s = svd_small(a);
    // a ≈ σ u v^H, right factor as a plain vector w with a ≈ u wᵀ
    let w: Vec<Complex64> = s.v.column(0).iter().map(|x| x.conj() * s.sigma[0]).collect();
    (s.u.column(0), w)
}

/// Relative residuals of the intertwining identities on the interior block
/// `|m|, |n| ≤ mmax − 1` for depths `0..depth`:
/// `X₋Γ_k − Γ_{k+1}X₋`, `X₊Γ_{k+1} − Γ_kX₊`, and the end conditions `Γ_0X₋ = 0`, `X₊Γ_0 = 0`.
#[derive(Debug, Clone)]
pub struct IntertwiningReport {
    pub lowering: Vec<f64>,
    pub raising: Vec<f64>,
    pub top_right: f64,
    pub top_left: f64,
}

pub fn intertwining_residuals(l: Complex64, branch: Branch, depth: usize, mmax: usize) -> Result<IntertwiningReport> {
    let gam = amplitude_matrices(l, branch, depth + 1, mmax + 1)?;
    let xm = x_matrix(Ladder::Minus, l, mmax + 1);
    let xp = x_matrix(Ladder::Plus, l, mmax + 1);
    let inner = |a: &CMatrix| a.submatrix(1, a.rows - 1, 1, a.cols - 1);
    let rel = |a: &CMatrix, b: &CMatrix| {
        let (a, b) = (inner(a), inner(b));
        a.sub(&b).frobenius() / a.frobenius().max(b.frobenius()).max(1e-300)
    };
    let lowering = (0..depth).map(|k| rel(&xm.mul(&gam[k]), &gam[k + 1].mul(&xm))).collect();
    let raising = (0..depth).map(|k| rel(&xp.mul(&gam[k + 1]), &gam[k].mul(&xp))).collect();
    let scale0 = inner(&gam[0]).frobenius() * xm.frobenius() / (xm.rows as f64).sqrt();
    let top_right = inner(&gam[0].mul(&xm)).frobenius() / scale0;
    let top_left = inner(&xp.mul(&gam[0])).frobenius() / scale0;
    Ok(IntertwiningReport { lowering, raising, top_right, top_left })
}

// ---------------------------------------------------------------------------
// correlations and the resolvent

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrelationMethod {
    Direct,
    Spectral,
}

fn pairs(f: &TrigPolynomial, g: &TrigPolynomial) -> Vec<(i32, i32, Complex64)> {
    let mut out = Vec::new();
    for (m, fm) in f.iter() {
        for (n, gn) in g.iter() {
            let w = fm * gn.conj();
            if w != Complex64::new(0.0, 0.0) {
                out.push((m, n, w));
            }
        }
    }
    out
}

/// `C_l(F, G)(t) = Σ_{m,n} F_m conj(G_n) B^l_{mn}(cosh t)`.
pub fn correlation(
    l: Complex64,
    f: &TrigPolynomial,
    g: &TrigPolynomial,
    t: f64,
    method: CorrelationMethod,
    p: &TruncationParams,
) -> Result<Complex64> {
    correlation_with_tail(l, f, g, t, method, p).map(|x| x.0)
}

/// As [`correlation`], also returning the spectral tail estimate (0 for direct).
pub fn correlation_with_tail(
    l: Complex64,
    f: &TrigPolynomial,
    g: &TrigPolynomial,
    t: f64,
    method: CorrelationMethod,
    p: &TruncationParams,
) -> Result<(Complex64, f64)> {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut tail = 0.0;
    for (m, n, w) in pairs(f, g) {
        match method {
            CorrelationMethod::Direct => sum += w * jacobi_b_quad(l, m as f64, n as f64, t, p)?,
            CorrelationMethod::Spectral => {
                let (v, e) = spectral_b(l, m, n, t, p)?;
                sum += w * v;
                tail += w.norm() * e;
            }
        }
    }
    Ok((sum, tail))
}

/// Residue of `Ĉ_l(F, G)` at a resonance: `Σ F_m conj(G_n) γ^l_{mn}(λ)`.
pub fn residue(l: Complex64, f: &TrigPolynomial, g: &TrigPolynomial, id: ResonanceId) -> Result<Complex64> {
    let mut s = Complex64::new(0.0, 0.0);
    for (m, n, w) in pairs(f, g) {
        s += w * branch_coefficients(l, m, n, id.branch, id.depth)?[id.depth];
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResolventMethod {
    /// `∫₀^{s0} e^{−zs} C(s) ds + Σ_λ R_λ e^{(λ−z)s0}/(z − λ)`; `split = 0` is the
    /// plain truncated pole sum `Σ R_λ/(z − λ)`.
    Rational { split: f64 },
    /// Quadrature of `e^{−zs} C(s)` on `[0, ∞)` from the direct correlation.
    Laplace,
}

impl ResolventMethod {
    pub fn rational() -> Self {
        ResolventMethod::Rational { split: 2.0 }
    }
}

const POLE_GUARD: f64 = 1e-6;
const LAPLACE_MARGIN: f64 = 0.1;
const HEAD_END: f64 = 3.0;
const ODE_STEP: f64 = 2e-3;

fn max_re_lambda(l: Complex64) -> f64 {
    branches_of(l).iter().map(|b| branch_top(l, *b).re).fold(f64::NEG_INFINITY, f64::max)
}

/// `Ĉ_l(F, G)(z) = ∫₀^∞ e^{−zs} C_l(F, G)(s) ds`, continued meromorphically by the
/// rational method.
pub fn resolvent_correlation(
    l: Complex64,
    f: &TrigPolynomial,
    g: &TrigPolynomial,
    z: Complex64,
    method: ResolventMethod,
    p: &TruncationParams,
) -> Result<Complex64> {
    Ok(resolvent_correlation_many(l, f, g, &[z], method, p)?[0])
}

pub fn resolvent_correlation_many(
    l: Complex64,
    f: &TrigPolynomial,
    g: &TrigPolynomial,
    zs: &[Complex64],
    method: ResolventMethod,
    p: &TruncationParams,
) -> Result<Vec<Complex64>> {
    check_l(l)?;
    match method {
        ResolventMethod::Rational { split } => rational(l, f, g, zs, split, p),
        ResolventMethod::Laplace => laplace(l, f, g, zs, p),
    }
}

fn head_integral(
    l: Complex64,
    prs: &[(i32, i32, Complex64)],
    zs: &[Complex64],
    end: f64,
    p: &TruncationParams,
) -> Result<Vec<Complex64>> {
    if end <= 0.0 {
        return Ok(vec![Complex64::new(0.0, 0.0); zs.len()]);
    }
    // sample C on the Gauss–Legendre nodes once, then integrate for every z
    let panels = ((end / 0.5).ceil() as usize).max(1);
    let mut nodes = Vec::new();
    integrate_gl_panels(
        |s| {
            nodes.push(s);
            Complex64::new(0.0, 0.0)
        },
        0.0,
        end,
        panels,
        24,
    );
    let mut cvals = Vec::with_capacity(nodes.len());
    for &s in &nodes {
        let mut c = Complex64::new(0.0, 0.0);
        for &(m, n, w) in prs {
            c += w * jacobi_b_quad(l, m as f64, n as f64, s, p)?;
        }
        cvals.push(c);
    }
    Ok(zs
        .iter()
        .map(|&z| {
            let mut it = cvals.iter();
            integrate_gl_panels(|s| (-z * s).exp() * it.next().unwrap(), 0.0, end, panels, 24)
        })
        .collect())
}

fn rational(
    l: Complex64,
    f: &TrigPolynomial,
    g: &TrigPolynomial,
    zs: &[Complex64],
    split: f64,
    p: &TruncationParams,
) -> Result<Vec<Complex64>> {
    if !(split >= 0.0 && split.is_finite()) {
        return Err(Error::Domain(format!("split time {split} must be >= 0")));
    }
    let ids = resonance_set(l, p.resonance_depth, BranchSelection::Both)?;
    let mut res = Vec::with_capacity(ids.len());
    for id in &ids {
        res.push((id.value(l), residue(l, f, g, *id)?));
    }
    for &z in zs {
        for (lam, _) in &res {
            let d = (z - lam).norm();
            if d < POLE_GUARD {
                return Err(Error::PoleProximity { z, pole: *lam, distance: d });
            }
        }
    }
    let prs = pairs(f, g);
    let head = head_integral(l, &prs, zs, split, p)?;
    Ok(zs
        .iter()
        .zip(head)
        .map(|(&z, h)| h + res.iter().map(|(lam, r)| r * ((lam - z) * split).exp() / (z - lam)).sum::<Complex64>())
        .collect())
}

fn laplace(
    l: Complex64,
    f: &TrigPolynomial,
    g: &TrigPolynomial,
    zs: &[Complex64],
    p: &TruncationParams,
) -> Result<Vec<Complex64>> {
    let top = max_re_lambda(l);
    let delta = zs.iter().map(|z| z.re - top).fold(f64::INFINITY, f64::min);
    if delta <= LAPLACE_MARGIN - 1e-12 {
        return Err(Error::Domain(format!(
            "Laplace quadrature needs Re z > {} (max Re lambda + {LAPLACE_MARGIN})",
            top + LAPLACE_MARGIN
        )));
    }
    let prs = pairs(f, g);
    if prs.is_empty() {
        return Ok(vec![Complex64::new(0.0, 0.0); zs.len()]);
    }
    let mut out = head_integral(l, &prs, zs, HEAD_END, p)?;
    // envelope scale for the cut-off: Σ|F||G| (|N+| + |N−|)
    let mut k = 0.0;
    for &(m, n, w) in &prs {
        let mut a = 0.0;
        for b in branches_of(l) {
            a += branch_coefficients(l, m, n, b, 0)?[0].norm();
        }
        k += w.norm() * a.max(1.0);
    }
    let mut s_max = HEAD_END + ((k.max(1.0)).ln() + 25.0) / delta;
    s_max = s_max.min(4000.0);
    let steps = (((s_max - HEAD_END) / ODE_STEP).ceil() as usize + 1) & !1;
    let h = (s_max - HEAD_END) / steps as f64;
    let mut csum = vec![Complex64::new(0.0, 0.0); steps + 1];
    for &(m, n, w) in &prs {
        let mut idx = 0;
        jacobi_b_ode_sweep(l, m, n, HEAD_END, s_max, h, p, |_, v| {
            if idx < csum.len() {
                csum[idx] += w * v;
            }
            idx += 1;
        })?;
    }
    for (zi, &z) in zs.iter().enumerate() {
        // composite Simpson on the ODE grid
        let mut acc = Complex64::new(0.0, 0.0);
        let step = (-z * h).exp();
        let mut e = (-z * HEAD_END).exp();
        for (i, c) in csum.iter().enumerate() {
            let wgt = if i == 0 || i == steps { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += wgt * e * c;
            e *= step;
        }
        let body = acc * h / 3.0;
        // tail estimate from the last unit of the grid
        let last = ((1.0 / h) as usize).min(steps);
        let env = (steps - last..=steps)
            .map(|i| (csum[i] * (-z * (HEAD_END + h * i as f64)).exp()).norm())
            .fold(0.0, f64::max);
        let tail = env / (z.re - top);
        let total = out[zi] + body;
        if tail > 1e-9 * total.norm().max(1.0) {
            return Err(Error::Accuracy { what: "laplace tail", coarse: total, fine: total, estimate: tail });
        }
        out[zi] = total;
    }
    Ok(out)
}

/// Residue of `Ĉ_l(F, G)` at `λ0 ∈ σ(l)` with `Re λ0` maximal, from Laplace values at
/// `z = λ0 + δ`, `δ ∈ [0.1, 1]`. The product `(z − λ0) Π (z − λ)` over the other
/// resonances within distance 2.5 is extrapolated polynomially to `δ = 0`.
pub fn extract_residue(
    l: Complex64,
    f: &TrigPolynomial,
    g: &TrigPolynomial,
    lambda0: Complex64,
    p: &TruncationParams,
) -> Result<Complex64> {
    let deltas = [0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.6, 0.8, 1.0];
    let zs: Vec<Complex64> = deltas.iter().map(|d| lambda0 + d).collect();
    let vals = resolvent_correlation_many(l, f, g, &zs, ResolventMethod::Laplace, p)?;
    let near: Vec<Complex64> = resonance_set(l, 4, BranchSelection::Both)?
        .iter()
        .map(|id| id.value(l))
        .filter(|lam| (lam - lambda0).norm() > 1e-9 && (lam - lambda0).norm() < 2.5)
        .collect();
    let q: Vec<Complex64> = zs
        .iter()
        .zip(&vals)
        .map(|(&z, v)| v * (z - lambda0) * near.iter().map(|lam| z - lam).product::<Complex64>())
        .collect();
    let q0 = neville_at_zero(&deltas, &q);
    let den: Complex64 = near.iter().map(|lam| lambda0 - lam).product();
    Ok(q0 / den)
}
