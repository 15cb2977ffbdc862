//! SU(1,1) elements, Euler angles, the Cayley isomorphism with SL(2,ℝ)
//! and the one-parameter subgroups used by the flow.
//!
//! An element is stored by its first row `(α, β)` of
//! `g = [[α, β], [β̄, ᾱ]]` with `|α|² − |β|² = 1`.
//!
//! The geodesic flow is right translation by `omega1(t)`. The Cayley image of
//! the diagonal subgroup `a_t` is `omega2(−t)`, and
//! `omega2(−t) = omega3(−π/2) · omega1(t) · omega3(π/2)`.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

const UNIMODULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    alpha: Complex64,
    beta: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles {
    pub phi: f64,
    pub tau: f64,
    pub psi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sl2Element {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

fn cis(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, x)
}

/// Reduce `x` into `[lo, lo + period)`.
fn wrap(x: f64, lo: f64, period: f64) -> f64 {
    let mut y = (x - lo).rem_euclid(period) + lo;
    if y >= lo + period {
        y -= period;
    }
    y
}

impl GroupElement {
    /// Checked constructor. The tolerance is relative to `|α|² + |β|²` so that
    /// long geodesic segments keep validating.
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let g = GroupElement { alpha, beta };
        let d = g.det_defect();
        if !d.is_finite() || d > UNIMODULAR_TOL {
            return Err(Error::Domain(format!(
                "|alpha|^2 - |beta|^2 = {} is not 1",
                alpha.norm_sqr() - beta.norm_sqr()
            )));
        }
        Ok(g)
    }

    pub(crate) fn new_unchecked(alpha: Complex64, beta: Complex64) -> Self {
        GroupElement { alpha, beta }
    }

    pub fn identity() -> Self {
        GroupElement::new_unchecked(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    /// `| |α|² − |β|² − 1 |` scaled by `|α|² + |β|²`.
    pub fn det_defect(&self) -> f64 {
        let a = self.alpha.norm_sqr();
        let b = self.beta.norm_sqr();
        (a - b - 1.0).abs() / (a + b)
    }

    /// Nutation subgroup, `g_τ = [[cosh τ/2, sinh τ/2], [sinh τ/2, cosh τ/2]]`.
    pub fn omega1(t: f64) -> Self {
        GroupElement::new_unchecked(
            Complex64::new((t / 2.0).cosh(), 0.0),
            Complex64::new((t / 2.0).sinh(), 0.0),
        )
    }

    pub fn omega2(t: f64) -> Self {
        GroupElement::new_unchecked(
            Complex64::new((t / 2.0).cosh(), 0.0),
            Complex64::new(0.0, (t / 2.0).sinh()),
        )
    }

    /// Rotation subgroup `h_t = diag(e^{it/2}, e^{−it/2})`.
    pub fn omega3(t: f64) -> Self {
        GroupElement::new_unchecked(cis(t / 2.0), Complex64::new(0.0, 0.0))
    }

    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let (a1, b1) = (self.alpha, self.beta);
        let (a2, b2) = (other.alpha, other.beta);
        GroupElement::new_unchecked(a1 * a2 + b1 * b2.conj(), a1 * b2 + b1 * a2.conj())
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement::new_unchecked(self.alpha.conj(), -self.beta)
    }

    pub fn neg(&self) -> GroupElement {
        GroupElement::new_unchecked(-self.alpha, -self.beta)
    }

    /// Representative of the PSU(1,1) class: `Re α > 0`, or `Im α > 0` when `Re α = 0`.
    pub fn canonical(&self) -> GroupElement {
        let a = self.alpha;
        if a.re > 0.0 || (a.re == 0.0 && a.im > 0.0) {
            *self
        } else {
            self.neg()
        }
    }

    /// The full 2×2 matrix, row major.
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        [
            [self.alpha, self.beta],
            [self.beta.conj(), self.alpha.conj()],
        ]
    }

    pub fn distance(&self, other: &GroupElement) -> f64 {
        (self.alpha - other.alpha).norm().max((self.beta - other.beta).norm())
    }

    /// Distance in PSU(1,1), i.e. up to the sign of the matrix.
    pub fn projective_distance(&self, other: &GroupElement) -> f64 {
        self.distance(other).min(self.distance(&other.neg()))
    }
}

pub fn compose(g1: &GroupElement, g2: &GroupElement) -> GroupElement {
    g1.compose(g2)
}

impl EulerAngles {
    pub fn new(phi: f64, tau: f64, psi: f64) -> Result<Self> {
        let e = EulerAngles { phi, tau, psi };
        e.validate()?;
        Ok(e)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.tau.is_finite() || self.tau < 0.0 {
            return Err(Error::Domain(format!("tau = {} must be finite and >= 0", self.tau)));
        }
        if !(0.0..2.0 * PI).contains(&self.phi) {
            return Err(Error::Domain(format!("phi = {} outside [0, 2pi)", self.phi)));
        }
        if !(-2.0 * PI..2.0 * PI).contains(&self.psi) {
            return Err(Error::Domain(format!("psi = {} outside [-2pi, 2pi)", self.psi)));
        }
        Ok(())
    }
}

/// `g(φ, τ, ψ) = omega3(φ) · omega1(τ) · omega3(ψ)`.
pub fn from_euler(e: &EulerAngles) -> Result<GroupElement> {
    e.validate()?;
    let (c, s) = ((e.tau / 2.0).cosh(), (e.tau / 2.0).sinh());
    Ok(GroupElement::new_unchecked(
        c * cis((e.phi + e.psi) / 2.0),
        s * cis((e.phi - e.psi) / 2.0),
    ))
}

/// Inverse of [`from_euler`] on PSU(1,1): `from_euler(to_euler(g)) = ±g`.
/// At `τ = 0` only `φ + ψ` is determined and `ψ = 0` is returned.
pub fn to_euler(g: &GroupElement) -> EulerAngles {
    let tau = 2.0 * g.beta.norm().asinh();
    if g.beta.norm() == 0.0 {
        let phi = wrap(2.0 * g.alpha.arg(), 0.0, 2.0 * PI);
        return EulerAngles { phi, tau: 0.0, psi: 0.0 };
    }
    let a = g.alpha.arg();
    let b = g.beta.arg();
    // (φ, ψ) = (a + b, a − b) modulo the lattice generated by (2π, 2π) and (2π, −2π)
    let mut phi = a + b;
    let mut psi = a - b;
    let shift = ((phi - wrap(phi, 0.0, 2.0 * PI)) / (2.0 * PI)).round();
    phi -= 2.0 * PI * shift;
    psi -= 2.0 * PI * shift;
    psi = wrap(psi, -2.0 * PI, 4.0 * PI);
    EulerAngles { phi: wrap(phi, 0.0, 2.0 * PI), tau, psi }
}

impl Sl2Element {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || (det - 1.0).abs() > UNIMODULAR_TOL * (a * a + b * b + c * c + d * d).max(1.0) {
            return Err(Error::Domain(format!("ad - bc = {det} is not 1")));
        }
        Ok(Sl2Element { a, b, c, d })
    }

    pub fn identity() -> Self {
        Sl2Element { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Sl2Element { a: c, b: -s, c: s, d: c }
    }

    /// `a_t = diag(e^{t/2}, e^{−t/2})`.
    pub fn diagonal(t: f64) -> Self {
        Sl2Element { a: (t / 2.0).exp(), b: 0.0, c: 0.0, d: (-t / 2.0).exp() }
    }

    /// `n_u = [[1, u], [0, 1]]`.
    pub fn unipotent(u: f64) -> Self {
        Sl2Element { a: 1.0, b: u, c: 0.0, d: 1.0 }
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn mul(&self, o: &Sl2Element) -> Sl2Element {
        Sl2Element {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

/// Conjugation `g = h' g' h'^{-1}` with `h' = (1/√2)[[1, i], [i, 1]]`, in closed form.
pub fn cayley(gp: &Sl2Element) -> GroupElement {
    let Sl2Element { a, b, c, d } = *gp;
    GroupElement::new_unchecked(
        Complex64::new((a + d) / 2.0, (c - b) / 2.0),
        Complex64::new((b + c) / 2.0, (d - a) / 2.0),
    )
}

/// Geodesic flow element `omega1(t)`.
pub fn geodesic_element(t: f64) -> GroupElement {
    GroupElement::omega1(t)
}

/// Cayley image of `a_t`, which equals `omega2(−t)`.
pub fn iwasawa_geodesic_element(t: f64) -> GroupElement {
    cayley(&Sl2Element::diagonal(t))
}

/// Cayley image of `n_u`.
pub fn horocycle_element(u: f64) -> GroupElement {
    cayley(&Sl2Element::unipotent(u))
}

/// Density of the Haar measure in Euler coordinates with the `1/(8π²)` normalization.
pub fn haar_weight(tau: f64) -> f64 {
    tau.sinh() / (8.0 * PI * PI)
}
