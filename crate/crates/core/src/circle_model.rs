//! The circle realization of `T^χ` on trigonometric polynomials
//! `f(θ) = Σ_k c_k e^{−ikθ}`: the group action by sampling, and the Lie algebra
//! by exact mode algebra.
//!
//! On a single mode `e_k = e^{−ikθ}`:
//! `L_{J1} e_k = ½[(l+k) e_{k−1} + (l−k) e_{k+1}]`,
//! `L_{J2} e_k = (i/2)[(l+k) e_{k−1} + (k−l) e_{k+1}]`, `L_{J3} e_k = −ik e_k`.

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::matrix_elements::{RepIndex, TruncationParams};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    coeffs: BTreeMap<i32, Complex64>,
}

impl TrigPolynomial {
    pub fn zero() -> Self {
        TrigPolynomial { coeffs: BTreeMap::new() }
    }

    /// `e^{−ikθ}`.
    pub fn mode(k: i32) -> Self {
        let mut f = TrigPolynomial::zero();
        f.coeffs.insert(k, Complex64::new(1.0, 0.0));
        f
    }

    pub fn from_coeffs<I: IntoIterator<Item = (i32, Complex64)>>(it: I) -> Self {
        let mut f = TrigPolynomial::zero();
        for (k, c) in it {
            f.add_to(k, c);
        }
        f
    }

    pub fn coeff(&self, k: i32) -> Complex64 {
        self.coeffs.get(&k).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, Complex64)> + '_ {
        self.coeffs.iter().map(|(k, c)| (*k, *c))
    }

    pub fn add_to(&mut self, k: i32, c: Complex64) {
        *self.coeffs.entry(k).or_default() += c;
    }

    /// Largest `|k|` with a stored coefficient.
    pub fn cutoff(&self) -> i32 {
        self.coeffs.keys().map(|k| k.abs()).max().unwrap_or(0)
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        self.iter().map(|(k, c)| c * Complex64::from_polar(1.0, -(k as f64) * theta)).sum()
    }

    pub fn scale(&self, a: Complex64) -> Self {
        TrigPolynomial::from_coeffs(self.iter().map(|(k, c)| (k, a * c)))
    }

    pub fn add(&self, o: &TrigPolynomial) -> Self {
        let mut r = self.clone();
        for (k, c) in o.iter() {
            r.add_to(k, c);
        }
        r
    }

    pub fn sub(&self, o: &TrigPolynomial) -> Self {
        self.add(&o.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Largest coefficient difference.
    pub fn max_diff(&self, o: &TrigPolynomial) -> f64 {
        self.sub(o).coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `⟨f, g⟩ = Σ f_k conj(g_k)`.
    pub fn inner(&self, o: &TrigPolynomial) -> Complex64 {
        self.iter().map(|(k, c)| c * o.coeff(k).conj()).sum()
    }
}

fn act_sampled(chi: &RepIndex, g: &GroupElement, f: &TrigPolynomial, k_out: usize) -> TrigPolynomial {
    let (a, b) = (g.alpha(), g.beta());
    let l = chi.l();
    let eps = chi.epsilon().value();
    let n = 2 * k_out + 1;
    let h = 2.0 * PI / n as f64;
    let vals: Vec<Complex64> = (0..n)
        .map(|j| {
            let th = h * j as f64;
            let e = Complex64::from_polar(1.0, th);
            let x = b * e + a.conj();
            let th2 = ((a * e + b.conj()) / x).arg();
            let w = (2.0 * l * x.norm().ln()).exp() * Complex64::from_polar(1.0, 2.0 * eps * x.arg());
            w * f.eval(th2)
        })
        .collect();
    let kmax = k_out as i32;
    TrigPolynomial::from_coeffs((-kmax..=kmax).map(|k| {
        let c: Complex64 = vals
            .iter()
            .enumerate()
            .map(|(j, v)| v * Complex64::from_polar(1.0, k as f64 * h * j as f64))
            .sum();
        (k, c / n as f64)
    }))
}

/// `(T_g f)(θ) = (βe^{iθ} + ᾱ)^{l+ε} (β̄e^{−iθ} + α)^{l−ε} f(θ')`,
/// `e^{iθ'} = (αe^{iθ} + β̄)/(βe^{iθ} + ᾱ)`, sampled on `2K+1` nodes,
/// `K = p.fourier_cutoff`. The alias error is certified against `2K`.
pub fn act(chi: &RepIndex, g: &GroupElement, f: &TrigPolynomial, p: &TruncationParams) -> Result<TrigPolynomial> {
    if g.det_defect() > 1e-10 {
        return Err(Error::Domain("group element is not quasi-unitary".into()));
    }
    let k = p.fourier_cutoff;
    if f.cutoff() as usize > k {
        return Err(Error::Domain(format!("input cutoff {} exceeds K = {k}", f.cutoff())));
    }
    let coarse = act_sampled(chi, g, f, k);
    let fine = act_sampled(chi, g, f, 2 * k);
    let fine_trunc = TrigPolynomial::from_coeffs(fine.iter().filter(|(j, _)| j.unsigned_abs() as usize <= k));
    let err = coarse.max_diff(&fine_trunc);
    if err > 1e-9 * f.norm().max(1.0) {
        return Err(Error::Accuracy {
            what: "circle_model::act",
            coarse: Complex64::new(coarse.norm(), 0.0),
            fine: Complex64::new(fine_trunc.norm(), 0.0),
            estimate: err,
        });
    }
    Ok(fine_trunc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    J1,
    J2,
    J3,
}

impl Generator {
    /// The one-parameter subgroup whose derivative at 0 is this generator.
    pub fn flow(self, t: f64) -> GroupElement {
        match self {
            Generator::J1 => GroupElement::omega1(t),
            Generator::J2 => GroupElement::omega2(t),
            Generator::J3 => GroupElement::omega3(t),
        }
    }
}

pub fn lie_derivative(which: Generator, l: Complex64, f: &TrigPolynomial) -> TrigPolynomial {
    let i = Complex64::i();
    let mut r = TrigPolynomial::zero();
    for (k, c) in f.iter() {
        let kf = k as f64;
        match which {
            Generator::J1 => {
                r.add_to(k - 1, c * (l + kf) / 2.0);
                r.add_to(k + 1, c * (l - kf) / 2.0);
            }
            Generator::J2 => {
                r.add_to(k - 1, c * i * (l + kf) / 2.0);
                r.add_to(k + 1, c * i * (kf - l) / 2.0);
            }
            Generator::J3 => r.add_to(k, c * (-i * kf)),
        }
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// `L+ e_k = (k − l) e_{k+1}`, `L− e_k = (−k − l) e_{k−1}`.
pub fn ladder(sign: Sign, l: Complex64, f: &TrigPolynomial) -> TrigPolynomial {
    TrigPolynomial::from_coeffs(f.iter().map(|(k, c)| {
        let kf = k as f64;
        match sign {
            Sign::Plus => (k + 1, c * (kf - l)),
            Sign::Minus => (k - 1, c * (-kf - l)),
        }
    }))
}

/// `L3 = i∂θ`, `L3 e_k = k e_k`.
pub fn l3(f: &TrigPolynomial) -> TrigPolynomial {
    TrigPolynomial::from_coeffs(f.iter().map(|(k, c)| (k, c * k as f64)))
}

/// `X± = L_{J3} ∓ L_{J2}`.
pub fn x_op(sign: Sign, l: Complex64, f: &TrigPolynomial) -> TrigPolynomial {
    let a = lie_derivative(Generator::J3, l, f);
    let b = lie_derivative(Generator::J2, l, f);
    match sign {
        Sign::Plus => a.sub(&b),
        Sign::Minus => a.add(&b),
    }
}

/// `−L_{J1}² − L_{J2}² + L_{J3}²`.
pub fn casimir(l: Complex64, f: &TrigPolynomial) -> TrigPolynomial {
    let sq = |g: Generator| lie_derivative(g, l, &lie_derivative(g, l, f));
    sq(Generator::J3).sub(&sq(Generator::J1)).sub(&sq(Generator::J2))
}

/// The scalar by which the Casimir acts on `e_k`.
pub fn casimir_scalar(l: Complex64, k: i32) -> Complex64 {
    casimir(l, &TrigPolynomial::mode(k)).coeff(k)
}

/// `[A, B] f = A(B f) − B(A f)`.
pub fn commutator<A, B>(a: A, b: B, f: &TrigPolynomial) -> TrigPolynomial
where
    A: Fn(&TrigPolynomial) -> TrigPolynomial,
    B: Fn(&TrigPolynomial) -> TrigPolynomial,
{
    a(&b(f)).sub(&b(&a(f)))
}

/// Symmetric difference `(T_{exp(hX)} − T_{exp(−hX)}) f / 2h` with one Richardson step.
pub fn finite_diff(
    chi: &RepIndex,
    which: Generator,
    f: &TrigPolynomial,
    h: f64,
    p: &TruncationParams,
) -> Result<TrigPolynomial> {
    let k = p.fourier_cutoff as i32;
    let sample = |t: f64| -> Result<Vec<Complex64>> {
        let g = act(chi, &which.flow(t), f, p)?;
        Ok((-k..=k).map(|j| g.coeff(j)).collect())
    };
    let mut evals = std::collections::HashMap::new();
    for t in [h, -h, h / 2.0, -h / 2.0] {
        evals.insert(t.to_bits(), sample(t)?);
    }
    let (d, _) = crate::oracle::richardson_derivative(|t| evals[&t.to_bits()].clone(), h);
    Ok(TrigPolynomial::from_coeffs((-k..=k).zip(d)))
}
