//! Quick invariant suites and the discrepancy report.

use crate::commands::{transform_input, Outcome};
use crate::config::RunConfig;
use crate::output::{document, json_text, num};
use hypflow_core::circle_model::{casimir_scalar, commutator, lie_derivative, x_op, Generator, Sign, TrigPolynomial};
use hypflow_core::flat_trace::{adjoint_matrix, eigenvalues3, trace_atoms, LengthSpectrum, WeightConvention};
use hypflow_core::harmonic_transform::{direct_norm, forward, plancherel_norm, round_trip_pointwise, uniform_r_grid};
use hypflow_core::matrix_elements::{compose_check, jacobi_b_block, jacobi_b_quad, jacobi_b_series, matrix_element};
use hypflow_core::oracle::{null_space, subspace_angle};
use hypflow_core::report::{all_findings, Finding};
use hypflow_core::resonances::{
    amplitude_matrix, annihilator_matrix, branch_coefficients, rank_one_factors, rank_one_ratio, resolvent_correlation, spectral_b_depth,
    Annihilator, Branch, ResolventMethod, ResonanceId,
};
use hypflow_core::{Complex64, EulerAngles, GroupElement, RepIndex, Result, TruncationParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use std::f64::consts::TAU;
use std::time::Instant;

struct Suite {
    name: &'static str,
    passed: bool,
    measurements: Vec<(String, f64)>,
    seconds: f64,
}

type Measured = Result<(bool, Vec<(String, f64)>)>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(q: Complex64, s: Complex64) -> f64 {
    if s == c(0.0, 0.0) {
        return q.norm();
    }
    (q - s).norm() / q.norm().max(s.norm())
}

fn matrix_elements(p: &TruncationParams) -> Measured {
    let mut worst: f64 = 0.0;
    for l in [c(-0.5, 1.0), c(-0.3, 0.0), c(2.0, 0.0)] {
        for m in -3..=3 {
            for n in -3..=3 {
                for tau in [0.5, 2.0] {
                    let q = jacobi_b_quad(l, m as f64, n as f64, tau, p)?;
                    let s = jacobi_b_series(l, m, n, tau, p)?;
                    worst = worst.max(rel(q, s));
                }
            }
        }
    }
    Ok((worst <= 1e-8, vec![("max_relative_disagreement".into(), worst)]))
}

fn identity_rotation(p: &TruncationParams) -> Measured {
    let chi = RepIndex::principal(1.0)?;
    let mut id_err: f64 = 0.0;
    let mut rot_err: f64 = 0.0;
    for m in -4..=4 {
        for n in -4..=4 {
            let b = jacobi_b_quad(chi.l(), m as f64, n as f64, 0.0, p)?;
            let want = if m == n { 1.0 } else { 0.0 };
            id_err = id_err.max((b - want).norm());
            for t in [0.3, 1.7, 4.0] {
                let v = matrix_element(&chi, &GroupElement::omega3(t), m as f64, n as f64, p)?;
                let want = if m == n { Complex64::from_polar(1.0, -(m as f64) * t) } else { c(0.0, 0.0) };
                rot_err = rot_err.max((v - want).norm());
            }
        }
    }
    Ok((id_err <= 1e-12 && rot_err <= 1e-12, vec![("identity".into(), id_err), ("rotation".into(), rot_err)]))
}

fn homomorphism(p: &TruncationParams) -> Measured {
    let chi = RepIndex::principal(1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..3 {
        let mut g = || -> Result<GroupElement> {
            let e = EulerAngles::new(rng.gen_range(0.0..TAU), rng.gen_range(0.0..1.0), rng.gen_range(0.0..TAU))?;
            hypflow_core::group::from_euler(&e)
        };
        let (g1, g2) = (g()?, g()?);
        for (m, n) in [(0, 0), (1, -2), (3, 2)] {
            let (a, b) = compose_check(&chi, &g1, &g2, m, n, 48, p)?;
            worst = worst.max((a - b).norm());
        }
    }
    Ok((worst <= 1e-6, vec![("max_composition_residual".into(), worst)]))
}

fn unitarity() -> Measured {
    let l = c(-0.5, 1.0);
    let mut worst: f64 = 0.0;
    // at tau = 3 the rows beyond |k| = 96 still carry about 1e-2 of the mass for |m| = 4
    for (tau, k) in [(1.0, 96usize), (2.0, 96), (3.0, 200)] {
        let blk = jacobi_b_block(l, tau, k)?;
        for m in -4i32..=4 {
            let j = (m + k as i32) as usize;
            let s: f64 = blk.iter().map(|row| row[j].norm_sqr()).sum();
            worst = worst.max((s - 1.0).abs());
        }
    }
    Ok((worst <= 1e-6, vec![("max_column_defect".into(), worst)]))
}

fn algebra() -> Measured {
    let l = c(-0.5, 1.3);
    let f = TrigPolynomial::from_coeffs((-4..=4).map(|k| (k, c(1.0 / (1.0 + k as f64 * k as f64), 0.1 * k as f64))));
    let j1 = |g: &TrigPolynomial| lie_derivative(Generator::J1, l, g);
    let xp = |g: &TrigPolynomial| x_op(Sign::Plus, l, g);
    let xm = |g: &TrigPolynomial| x_op(Sign::Minus, l, g);
    let e1 = commutator(j1, xp, &f).max_diff(&xp(&f));
    let e2 = commutator(j1, xm, &f).max_diff(&xm(&f).scale(c(-1.0, 0.0)));
    let e3 = commutator(xm, xp, &f).max_diff(&j1(&f).scale(c(2.0, 0.0)));
    let cas0 = casimir_scalar(l, 0);
    let spread = (-10..=10).map(|k| (casimir_scalar(l, k) - cas0).norm()).fold(0.0, f64::max);
    let sym = (casimir_scalar(-1.0 - l, 3) - cas0).norm();
    let worst = e1.max(e2).max(e3);
    Ok((
        worst <= 1e-13 && spread <= 1e-13 && sym <= 1e-13,
        vec![("commutators".into(), worst), ("casimir_spread".into(), spread), ("casimir_symmetry".into(), sym)],
    ))
}

fn rank_one() -> Measured {
    let l = c(-0.5, 1.0);
    let mut ratio: f64 = 0.0;
    for branch in [Branch::Plus, Branch::Minus] {
        for depth in 0..=3 {
            ratio = ratio.max(rank_one_ratio(&amplitude_matrix(l, ResonanceId { branch, depth }, 6)?));
        }
    }
    let a = amplitude_matrix(l, ResonanceId { branch: Branch::Plus, depth: 0 }, 6)?;
    let (u, _) = rank_one_factors(&a);
    let ns = null_space(&annihilator_matrix(l, 6, Annihilator::Corrected), 1e-10);
    let angle = subspace_angle(&u, &ns);
    Ok((ratio <= 1e-6 && angle <= 1e-5, vec![("max_sigma2_over_sigma1".into(), ratio), ("null_space_angle".into(), angle)]))
}

fn spectral_expansion(p: &TruncationParams) -> Measured {
    let l = c(-0.5, 1.0);
    let mut worst: f64 = 0.0;
    for (m, n) in [(0, 0), (2, -1), (3, 3)] {
        for t in [4.0, 5.0, 6.0] {
            let q = jacobi_b_quad(l, m as f64, n as f64, t, p)?;
            let (s, _) = spectral_b_depth(l, m, n, t, 6)?;
            worst = worst.max(rel(q, s));
        }
    }
    Ok((worst <= 1e-4, vec![("max_relative_error_J6".into(), worst)]))
}

fn resolvent(p: &TruncationParams) -> Measured {
    let l = c(-0.5, 1.0);
    let f = TrigPolynomial::from_coeffs([(0, c(1.0, 0.0)), (1, c(0.5, 0.0))]);
    let g = TrigPolynomial::mode(0);
    let z = c(2.0, 0.0);
    let a = resolvent_correlation(l, &f, &g, z, ResolventMethod::rational(), p)?;
    let b = resolvent_correlation(l, &f, &g, z, ResolventMethod::Laplace, p)?;
    let d = (a - b).norm();
    Ok((d <= 1e-5, vec![("rational_vs_laplace".into(), d)]))
}

fn flat_trace() -> Measured {
    let mut spec_err: f64 = 0.0;
    for t in [0.5, 2.0, 5.0] {
        let ev = eigenvalues3(&adjoint_matrix(t));
        let want = [(-t).exp(), 1.0, t.exp()];
        for (e, w) in ev.iter().zip(want) {
            spec_err = spec_err.max((e - w).norm() / w);
        }
    }
    let ls = LengthSpectrum::new(vec![(1.0, 1), (2.3, 2), (4.1, 1)])?;
    let a = trace_atoms(&ls, 6, WeightConvention::Theorem1)?;
    let d = trace_atoms(&ls, 6, WeightConvention::Determinant)?;
    let mut ratio_err: f64 = 0.0;
    for (x, y) in a.iter().zip(&d) {
        let want = 1.0 / (2.0 * (x.time / 2.0).sinh());
        ratio_err = ratio_err.max((y.weight / x.weight - want).abs() / want);
    }
    Ok((spec_err <= 1e-10 && ratio_err <= 1e-12, vec![("adjoint_spectrum".into(), spec_err), ("weight_ratio".into(), ratio_err)]))
}

fn transform(p: &TruncationParams) -> Measured {
    let f = transform_input(&[0, 1], &[0, 1], 3.0)?;
    let td = forward(&f, &uniform_r_grid(12.0, 600), p)?;
    let taus: Vec<f64> = (0..=15).map(|i| 0.2 * i as f64).collect();
    let res = round_trip_pointwise(&f, &td, &taus, 8, p)?;
    let dn = direct_norm(&f);
    let pr = (plancherel_norm(&td) - dn).abs() / dn;
    Ok((res <= 1e-3 && pr <= 1e-3, vec![("round_trip".into(), res), ("plancherel_relative".into(), pr)]))
}

/// Error decrease from depth 6 to depth 7, reported only.
fn increment_ratio() -> Result<Finding> {
    let l = c(-0.5, 1.0);
    let p = TruncationParams::default();
    let mut worst = f64::INFINITY;
    for (m, n) in [(0, 0), (1, 0), (2, -1), (3, 1)] {
        let adds = [Branch::Plus, Branch::Minus]
            .iter()
            .map(|b| branch_coefficients(l, m, n, *b, 7).map(|c| c[7].norm()))
            .collect::<Result<Vec<f64>>>()?;
        if adds.iter().all(|a| *a == 0.0) {
            continue;
        }
        let (mut e6, mut e7) = (0.0f64, 0.0f64);
        for t in [4.0, 4.5, 5.0, 5.5, 6.0] {
            let q = jacobi_b_quad(l, m as f64, n as f64, t, &p)?;
            e6 = e6.max((spectral_b_depth(l, m, n, t, 6)?.0 - q).norm() / q.norm());
            e7 = e7.max((spectral_b_depth(l, m, n, t, 7)?.0 - q).norm() / q.norm());
        }
        worst = worst.min(e6 / e7);
    }
    let target = (0.9f64 * 4.0).exp();
    Ok(Finding {
        id: "j",
        title: "error ratio per extra resonance depth",
        measurements: vec![("min_ratio_J6_over_J7".into(), worst), ("target".into(), target)],
        agrees: worst >= target,
    })
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    let p = cfg.params;
    let mut suites = Vec::new();
    let mut push = |name: &'static str, f: &dyn Fn() -> Measured| -> Result<()> {
        let t0 = Instant::now();
        let (passed, measurements) = f()?;
        let seconds = t0.elapsed().as_secs_f64();
        eprintln!("{} {:<20} {:>7.2}s  {}", if passed { "PASS" } else { "FAIL" }, name, seconds, fmt_meas(&measurements));
        suites.push(Suite { name, passed, measurements, seconds });
        Ok(())
    };
    push("matrix_elements", &|| matrix_elements(&p))?;
    push("identity_rotation", &|| identity_rotation(&p))?;
    push("homomorphism", &|| homomorphism(&p))?;
    push("unitarity", &unitarity)?;
    push("algebra", &algebra)?;
    push("rank_one", &rank_one)?;
    push("spectral_expansion", &|| spectral_expansion(&p))?;
    push("resolvent", &|| resolvent(&p))?;
    push("flat_trace", &flat_trace)?;
    push("transform", &|| transform(&p))?;

    let mut findings = all_findings(&p)?;
    findings.push(increment_ratio()?);
    for f in &findings {
        eprintln!("NOTE {} {:<44} {}  {}", f.id, f.title, if f.agrees { "agrees " } else { "differs" }, fmt_meas(&f.measurements));
    }

    let ok = suites.iter().all(|s| s.passed);
    let meas = |m: &[(String, f64)]| Value::Object(m.iter().map(|(k, v)| (k.clone(), num(*v))).collect::<Map<_, _>>());
    let mut b = Map::new();
    b.insert("passed".into(), Value::Bool(ok));
    b.insert(
        "suites".into(),
        Value::Array(
            suites
                .iter()
                .map(|s| json!({"name": s.name, "passed": s.passed, "measurements": meas(&s.measurements)}))
                .collect(),
        ),
    );
    b.insert(
        "discrepancies".into(),
        Value::Array(
            findings
                .iter()
                .map(|f| json!({"id": f.id, "title": f.title, "agrees": f.agrees, "measurements": meas(&f.measurements)}))
                .collect(),
        ),
    );
    let total: f64 = suites.iter().map(|s| s.seconds).sum();
    eprintln!("{} suites in {:.1}s: {}", suites.len(), total, if ok { "all passed" } else { "FAILED" });
    Ok(Outcome { text: json_text(&document("verify", b)), ok })
}

fn fmt_meas(m: &[(String, f64)]) -> String {
    m.iter().map(|(k, v)| format!("{k}={v:.3e}")).collect::<Vec<_>>().join(" ")
}
