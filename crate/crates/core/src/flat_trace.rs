//! Poincaré maps of closed geodesics from the adjoint action, Lefschetz
//! determinants, and flat-trace atoms built from a length spectrum.

use crate::error::{Error, Result};
use crate::group::geodesic_element;
use crate::oracle::{null_vector, poly_roots, CMatrix};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Primitive lengths with multiplicities, sorted ascending.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LengthSpectrum {
    entries: Vec<(f64, u32)>,
}

impl LengthSpectrum {
    /// Sorts and merges lengths equal to 1e−12 relative.
    pub fn new(mut entries: Vec<(f64, u32)>) -> Result<Self> {
        for &(t, mult) in &entries {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Domain(format!("primitive length {t} must be positive")));
            }
            if mult == 0 {
                return Err(Error::Domain(format!("multiplicity of length {t} must be positive")));
            }
        }
        entries.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut merged: Vec<(f64, u32)> = Vec::with_capacity(entries.len());
        for (t, mult) in entries {
            match merged.last_mut() {
                Some(last) if (t - last.0).abs() <= 1e-12 * t => last.1 += mult,
                _ => merged.push((t, mult)),
            }
        }
        Ok(LengthSpectrum { entries: merged })
    }

    pub fn entries(&self) -> &[(f64, u32)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightConvention {
    /// `T#/(2 sinh(nT#/2))`
    Theorem1,
    /// `T#/|det(I − P_γ^n)|`
    Determinant,
}

impl WeightConvention {
    pub fn name(&self) -> &'static str {
        match self {
            WeightConvention::Theorem1 => "theorem1",
            WeightConvention::Determinant => "determinant",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PeriodConvention {
    /// `T# = 4π/r`
    Statement,
    /// `T# = 2π/r`
    Proof,
}

impl PeriodConvention {
    pub fn name(&self) -> &'static str {
        match self {
            PeriodConvention::Statement => "statement",
            PeriodConvention::Proof => "proof",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceAtom {
    pub time: f64,
    pub weight: f64,
    pub n: u32,
    pub t_sharp: f64,
    pub convention: WeightConvention,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoincareMap {
    pub expansion: f64,
    pub contraction: f64,
}

fn k_basis() -> [[[Complex64; 2]; 2]; 3] {
    let z = Complex64::new(0.0, 0.0);
    let h = Complex64::new(0.5, 0.0);
    let ih = Complex64::new(0.0, 0.5);
    [[[z, h], [h, z]], [[z, -ih], [ih, z]], [[ih, z], [z, -ih]]]
}

fn mat_mul(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut c = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// Coordinates of a traceless `su(1,1)` matrix in `{K1, K2, K3}`.
fn k_coords(x: &[[Complex64; 2]; 2]) -> [f64; 3] {
    let i = Complex64::i();
    let a = x[0][1] + x[1][0];
    let b = i * (x[0][1] - x[1][0]);
    let c = -2.0 * i * x[0][0];
    [a.re, b.re, c.re]
}

/// `Ad_{g_t}` in the basis `{K1, K2, K3}`; column `j` holds the image of `K_j`.
pub fn adjoint_matrix(t: f64) -> [[f64; 3]; 3] {
    let g = geodesic_element(t);
    let gm = g.matrix();
    let gi = g.inverse().matrix();
    let mut out = [[0.0; 3]; 3];
    for (j, k) in k_basis().iter().enumerate() {
        let img = mat_mul(&mat_mul(&gm, k), &gi);
        let c = k_coords(&img);
        for i in 0..3 {
            out[i][j] = c[i];
        }
    }
    out
}

fn det3(a: &[[f64; 3]; 3]) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

/// Eigenvalues of a real 3×3 matrix from its characteristic polynomial, sorted by real part.
pub fn eigenvalues3(a: &[[f64; 3]; 3]) -> Vec<Complex64> {
    let tr = a[0][0] + a[1][1] + a[2][2];
    let m2 = a[0][0] * a[1][1] - a[0][1] * a[1][0] + a[0][0] * a[2][2] - a[0][2] * a[2][0] + a[1][1] * a[2][2]
        - a[1][2] * a[2][1];
    let d = det3(a);
    // λ³ − tr λ² + m2 λ − d
    let c = [Complex64::new(-d, 0.0), Complex64::new(m2, 0.0), Complex64::new(-tr, 0.0), Complex64::new(1.0, 0.0)];
    let mut r = poly_roots(&c);
    r.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap());
    r
}

/// Eigenpairs of `Ad_{g_t}` with eigenvectors in `K` coordinates, sorted by eigenvalue.
pub fn adjoint_eigenvectors(t: f64) -> Vec<(f64, [f64; 3])> {
    let a = adjoint_matrix(t);
    eigenvalues3(&a)
        .into_iter()
        .map(|lam| {
            let m = CMatrix::from_fn(3, 3, |i, j| Complex64::new(a[i][j] - if i == j { lam.re } else { 0.0 }, 0.0));
            let (v, _) = null_vector(&m);
            // real representative with a positive leading entry
            let k = (0..3).max_by(|&x, &y| v[x].norm().partial_cmp(&v[y].norm()).unwrap()).unwrap();
            let phase = v[k].conj() / v[k].norm();
            let mut w = [0.0; 3];
            for i in 0..3 {
                w[i] = (v[i] * phase).re;
            }
            (lam.re, w)
        })
        .collect()
}

pub fn poincare_map(t_sharp: f64) -> Result<PoincareMap> {
    if !(t_sharp > 0.0 && t_sharp.is_finite()) {
        return Err(Error::Domain(format!("period {t_sharp} must be positive")));
    }
    // the small eigenvalue is ill-conditioned in the characteristic polynomial for
    // large T, so it is taken as the reciprocal of the large one of Ad(g_{−T})
    let up = eigenvalues3(&adjoint_matrix(t_sharp));
    let down = eigenvalues3(&adjoint_matrix(-t_sharp));
    Ok(PoincareMap { expansion: up[2].re, contraction: 1.0 / down[2].re })
}

impl PoincareMap {
    pub fn log_expansion(&self) -> f64 {
        self.expansion.ln()
    }

    /// Map of the `n`-th iterate of the orbit.
    pub fn power(&self, n: u32) -> PoincareMap {
        PoincareMap { expansion: self.expansion.powi(n as i32), contraction: self.contraction.powi(n as i32) }
    }
}

/// `|det(I − P)| = |(1 − e^T)(1 − e^{−T})|`, evaluated through `expm1`.
pub fn lefschetz_det(pm: &PoincareMap) -> f64 {
    let (a, b) = (pm.expansion.ln(), pm.contraction.ln());
    (a.exp_m1() * b.exp_m1()).abs()
}


/// Atoms `weight·δ(t − nT#)` for `1 ≤ n ≤ n_max`, sorted by time.
pub fn trace_atoms(ls: &LengthSpectrum, n_max: u32, conv: WeightConvention) -> Result<Vec<TraceAtom>> {
    let mut out = Vec::with_capacity(ls.len() * n_max as usize);
    for &(t, mult) in ls.entries() {
        let pm = match conv {
            WeightConvention::Determinant => Some(poincare_map(t)?),
            WeightConvention::Theorem1 => None,
        };
        for n in 1..=n_max {
            let w = match &pm {
                None => t / (2.0 * (n as f64 * t / 2.0).sinh()),
                Some(pm) => t / lefschetz_det(&pm.power(n)),
            };
            out.push(TraceAtom {
                time: n as f64 * t,
                weight: mult as f64 * w,
                n,
                t_sharp: t,
                convention: conv,
            });
        }
    }
    out.sort_by(|a, b| a.time.partial_cmp(&b.time).unwrap().then(a.t_sharp.partial_cmp(&b.t_sharp).unwrap()));
    Ok(out)
}

pub fn period(r: f64, conv: PeriodConvention) -> f64 {
    match conv {
        PeriodConvention::Statement => 4.0 * PI / r,
        PeriodConvention::Proof => 2.0 * PI / r,
    }
}

pub fn periods_from_spectrum(r_values: &[f64], conv: PeriodConvention) -> Result<LengthSpectrum> {
    let mut entries = Vec::with_capacity(r_values.len());
    for &r in r_values {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Domain(format!("spectral parameter r = {r} must be positive")));
        }
        entries.push((period(r, conv), 1));
    }
    LengthSpectrum::new(entries)
}

/// The closed-form determinant value printed for the Poincaré map, `−2 sinh T`.
pub fn printed_determinant(t_sharp: f64) -> f64 {
    -2.0 * t_sharp.sinh()
}
