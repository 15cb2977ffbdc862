//! Acceptance run: one PASS/FAIL line per criterion.

use hypflow_core::circle_model::{
    act, casimir_scalar, commutator, finite_diff, lie_derivative, x_op, Generator, Sign, TrigPolynomial,
};
use hypflow_core::flat_trace::{
    adjoint_matrix, eigenvalues3, period, periods_from_spectrum, trace_atoms, LengthSpectrum, PeriodConvention,
    WeightConvention,
};
use hypflow_core::group::{from_euler, to_euler};
use hypflow_core::harmonic_transform::{
    direct_norm, forward, gaussian_bump, plancherel_norm, SliceFn, round_trip_pointwise, uniform_r_grid, GroupFunction,
};
use hypflow_core::matrix_elements::{jacobi_b_block, jacobi_b_quad, jacobi_b_series, matrix_element};
use hypflow_core::oracle::{null_space, subspace_angle};
use hypflow_core::resonances::{
    amplitude_matrix, annihilator_matrix, branch_coefficients, extract_residue, rank_one_factors, rank_one_ratio,
    resolvent_correlation, spectral_b_depth, Annihilator, Branch, ResolventMethod, ResonanceId,
};
use hypflow_core::{Complex64, EulerAngles, GroupElement, RepIndex, Result, TruncationParams};
use rayon::prelude::*;
use std::f64::consts::PI;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

type Criterion = fn() -> Result<Outcome>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn zero() -> Complex64 {
    c(0.0, 0.0)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm())
}

fn criterion_1() -> Result<Outcome> {
    let p = TruncationParams::default();
    let ls = [c(-0.5, 0.5), c(-0.5, 1.0), c(-0.5, 2.0), c(-0.3, 0.0), c(1.0, 0.0), c(2.0, 0.0)];
    let mut pts = Vec::new();
    for &l in &ls {
        for m in -6..=6 {
            for n in -6..=6 {
                for tau in [0.25, 0.5, 1.0, 2.0, 4.0] {
                    pts.push((l, m, n, tau));
                }
            }
        }
    }
    let errs: Vec<(f64, bool, bool)> = pts
        .par_iter()
        .map(|&(l, m, n, tau)| {
            let q = jacobi_b_quad(l, m as f64, n as f64, tau, &p)?;
            let s = jacobi_b_series(l, m, n, tau, &p)?;
            // an exactly vanishing series is a structural zero; quadrature must return noise only
            Ok(if s == zero() { (q.norm(), q.norm() < 1e-12, true) } else { (rel(q, s), rel(q, s) <= 1e-8, false) })
        })
        .collect::<Result<_>>()?;
    let worst = errs.iter().filter(|e| !e.2).map(|e| e.0).fold(0.0, f64::max);
    let zeros = errs.iter().filter(|e| e.2).count();
    Ok(Outcome {
        pass: errs.iter().all(|e| e.1),
        detail: format!("{} points, max relative disagreement {worst:.2e} (tol 1e-8), {zeros} structural zeros", pts.len()),
    })
}

fn criterion_2() -> Result<Outcome> {
    let p = TruncationParams::default();
    let mut id: f64 = 0.0;
    for l in [c(-0.5, 1.0), c(-0.3, 0.0), c(2.0, 0.0), c(0.7, 0.4)] {
        for m in -6..=6 {
            for n in -6..=6 {
                let b = jacobi_b_quad(l, m as f64, n as f64, 0.0, &p)?;
                id = id.max((b - if m == n { 1.0 } else { 0.0 }).norm());
            }
        }
    }
    let mut rot: f64 = 0.0;
    for chi in [RepIndex::principal(1.0)?, RepIndex::complementary(-0.3)?] {
        for t in [0.1, 1.0, 2.5, 5.0] {
            let g = GroupElement::omega3(t);
            for m in -6..=6 {
                for n in -6..=6 {
                    let v = matrix_element(&chi, &g, m as f64, n as f64, &p)?;
                    let want = if m == n { Complex64::from_polar(1.0, -(m as f64) * t) } else { zero() };
                    rot = rot.max((v - want).norm());
                }
            }
        }
    }
    Ok(Outcome {
        pass: id <= 1e-12 && rot <= 1e-12,
        detail: format!("identity {id:.2e}, rotation {rot:.2e} (tol 1e-12)"),
    })
}

/// `(T_g)_{mk}` for `|m|, |k| ≤ kmax` by the block evaluator and the Euler phases.
fn t_block(l: Complex64, g: &GroupElement, kmax: usize) -> Result<Vec<Vec<Complex64>>> {
    let e = to_euler(g);
    let mut b = jacobi_b_block(l, e.tau, kmax)?;
    let k = kmax as i32;
    for (mi, row) in b.iter_mut().enumerate() {
        for (ni, v) in row.iter_mut().enumerate() {
            let (m, n) = ((mi as i32 - k) as f64, (ni as i32 - k) as f64);
            *v *= Complex64::from_polar(1.0, -m * e.phi - n * e.psi);
        }
    }
    Ok(b)
}

fn criterion_3() -> Result<Outcome> {
    use rand::{Rng, SeedableRng};
    let p = TruncationParams::default();
    let chi = RepIndex::principal(1.0)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let mut pairs = Vec::new();
    for _ in 0..20 {
        let mut g = || -> Result<GroupElement> {
            from_euler(&EulerAngles::new(rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0 * PI))?)
        };
        pairs.push((g()?, g()?));
    }
    const K: usize = 96;
    let comp: Vec<f64> = pairs
        .par_iter()
        .map(|(g1, g2)| {
            let (a, b) = (t_block(chi.l(), g1, K)?, t_block(chi.l(), g2, K)?);
            let g12 = g1.compose(g2);
            let mut worst: f64 = 0.0;
            for m in -4i32..=4 {
                for n in -4i32..=4 {
                    let lhs = matrix_element(&chi, &g12, m as f64, n as f64, &p)?;
                    let (mi, ni) = ((m + K as i32) as usize, (n + K as i32) as usize);
                    let rhs: Complex64 = (0..=2 * K).map(|k| a[mi][k] * b[k][ni]).sum();
                    worst = worst.max((lhs - rhs).norm());
                }
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    let comp = comp.into_iter().fold(0.0, f64::max);
    let pk = TruncationParams { fourier_cutoff: 160, ..Default::default() };
    let mut actd: f64 = 0.0;
    for (g1, _) in pairs.iter().take(6) {
        for n in -4..=4 {
            let tf = act(&chi, g1, &TrigPolynomial::mode(n), &pk)?;
            for m in -4..=4 {
                actd = actd.max((tf.coeff(m) - matrix_element(&chi, g1, m as f64, n as f64, &p)?).norm());
            }
        }
    }
    Ok(Outcome {
        pass: comp <= 1e-6 && actd <= 1e-8,
        detail: format!("composition {comp:.2e} (tol 1e-6), act vs matrix elements {actd:.2e} (tol 1e-8)"),
    })
}

fn criterion_4() -> Result<Outcome> {
    const K: usize = 96;
    let mut worst: f64 = 0.0;
    let mut at = (0.0, 0.0, 0);
    for r in [0.5, 1.0, 2.0] {
        let l = c(-0.5, r);
        for tau in [0.5, 1.0, 1.5, 2.0, 2.5, 3.0] {
            let b = jacobi_b_block(l, tau, K)?;
            for m in -4i32..=4 {
                let j = (m + K as i32) as usize;
                let s: f64 = b.iter().map(|row| row[j].norm_sqr()).sum();
                if (s - 1.0).abs() > worst {
                    worst = (s - 1.0).abs();
                    at = (r, tau, m);
                }
            }
        }
    }
    Ok(Outcome {
        pass: worst <= 1e-6,
        detail: format!("max |sum - 1| = {worst:.2e} at r = {}, tau = {}, m = {} (tol 1e-6)", at.0, at.1, at.2),
    })
}

fn criterion_5() -> Result<Outcome> {
    let mut comm: f64 = 0.0;
    let mut cas: f64 = 0.0;
    for l in [c(-0.5, 1.0), c(-0.3, 0.0), c(-0.5, 2.5)] {
        let f = TrigPolynomial::from_coeffs((-6..=6).map(|k| (k, c(1.0 / (1.0 + k as f64 * k as f64), 0.2 * k as f64))));
        let j1 = |g: &TrigPolynomial| lie_derivative(Generator::J1, l, g);
        let j2 = |g: &TrigPolynomial| lie_derivative(Generator::J2, l, g);
        let j3 = |g: &TrigPolynomial| lie_derivative(Generator::J3, l, g);
        let xp = |g: &TrigPolynomial| x_op(Sign::Plus, l, g);
        let xm = |g: &TrigPolynomial| x_op(Sign::Minus, l, g);
        let scale = f.norm() * (1.0 + l.norm()).powi(2) * 36.0;
        for e in [
            commutator(j1, xp, &f).max_diff(&xp(&f)),
            commutator(j1, xm, &f).max_diff(&xm(&f).scale(c(-1.0, 0.0))),
            commutator(xm, xp, &f).max_diff(&j1(&f).scale(c(2.0, 0.0))),
            // so(2,1) brackets
            commutator(j1, j2, &f).max_diff(&j3(&f).scale(c(-1.0, 0.0))),
            commutator(j2, j3, &f).max_diff(&j1(&f)),
            commutator(j3, j1, &f).max_diff(&j2(&f)),
        ] {
            comm = comm.max(e / scale);
        }
        let c0 = casimir_scalar(l, 0);
        for k in -20..=20 {
            // rounding grows with the k^2 terms that cancel
            let size = c0.norm().max((k * k) as f64 + l.norm_sqr());
            cas = cas.max((casimir_scalar(l, k) - c0).norm() / size);
            cas = cas.max((casimir_scalar(-1.0 - l, k) - c0).norm() / size);
        }
    }
    let chi = RepIndex::principal(1.0)?;
    let p = TruncationParams { fourier_cutoff: 24, ..Default::default() };
    let f = TrigPolynomial::from_coeffs([(0, c(1.0, 0.0)), (2, c(0.3, -0.2)), (-3, c(0.0, 0.5))]);
    let mut fd: f64 = 0.0;
    for g in [Generator::J1, Generator::J2, Generator::J3] {
        let num = finite_diff(&chi, g, &f, 1e-3, &p)?;
        fd = fd.max(num.max_diff(&lie_derivative(g, chi.l(), &f)));
    }
    Ok(Outcome {
        pass: comm <= 1e-14 && cas <= 1e-14 && fd <= 1e-4,
        detail: format!(
            "commutators {comm:.2e}, Casimir spread {cas:.2e} (relative to operand size, tol 1e-14), finite difference {fd:.2e} (tol 1e-4)"
        ),
    })
}

fn criterion_6() -> Result<Outcome> {
    let p = TruncationParams::default();
    let ts: Vec<f64> = (0..=8).map(|i| 4.0 + 0.25 * i as f64).collect();
    let target = (0.9f64 * 4.0).exp();
    let mut cases = Vec::new();
    for r in [0.5, 1.0, 2.0] {
        for m in -3..=3 {
            for n in -3..=3 {
                cases.push((c(-0.5, r), m, n));
            }
        }
    }
    // (sup relative error at J = 6, sup at J = 7, whether depth 7 adds anything)
    let rows: Vec<(f64, f64, bool)> = cases
        .par_iter()
        .map(|&(l, m, n)| {
            let (mut e6, mut e7) = (0.0f64, 0.0f64);
            for &t in &ts {
                let q = jacobi_b_quad(l, m as f64, n as f64, t, &p)?;
                e6 = e6.max(rel(spectral_b_depth(l, m, n, t, 6)?.0, q));
                e7 = e7.max(rel(spectral_b_depth(l, m, n, t, 7)?.0, q));
            }
            let mut adds = false;
            for b in [Branch::Plus, Branch::Minus] {
                adds |= branch_coefficients(l, m, n, b, 7)?[7] != zero();
            }
            Ok((e6, e7, adds))
        })
        .collect::<Result<_>>()?;
    let worst6 = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let ratio = rows.iter().filter(|r| r.2).map(|r| r.0 / r.1).fold(f64::INFINITY, f64::min);
    Ok(Outcome {
        pass: worst6 <= 1e-4 && ratio >= target,
        detail: format!(
            "J = 6 error {worst6:.2e} (tol 1e-4); min error ratio J6/J7 {ratio:.2} (need >= e^3.6 = {target:.2})"
        ),
    })
}

fn criterion_7() -> Result<Outcome> {
    let mut ratio: f64 = 0.0;
    let mut angle: f64 = 0.0;
    for l in [c(-0.5, 0.5), c(-0.5, 1.0), c(-0.5, 2.0)] {
        for branch in [Branch::Plus, Branch::Minus] {
            for depth in 0..=3 {
                ratio = ratio.max(rank_one_ratio(&amplitude_matrix(l, ResonanceId { branch, depth }, 6)?));
            }
            let (u, _) = rank_one_factors(&amplitude_matrix(l, ResonanceId { branch, depth: 0 }, 6)?);
            let ns = null_space(&annihilator_matrix(l, 6, Annihilator::Corrected), 1e-10);
            angle = angle.max(subspace_angle(&u, &ns));
        }
    }
    Ok(Outcome {
        pass: ratio <= 1e-6 && angle <= 1e-5,
        detail: format!("max sigma2/sigma1 {ratio:.2e} (tol 1e-6), null-space angle {angle:.2e} (tol 1e-5)"),
    })
}

fn criterion_8() -> Result<Outcome> {
    let p = TruncationParams { resonance_depth: 16, ..Default::default() };
    let mut worst: f64 = 0.0;
    let mut res: f64 = 0.0;
    for l in [c(-0.5, 1.0), c(-0.5, 0.5)] {
        let f = TrigPolynomial::from_coeffs([(0, c(1.0, 0.0)), (1, c(0.5, -0.25))]);
        let g = TrigPolynomial::from_coeffs([(0, c(1.0, 0.0)), (-1, c(0.0, 0.4))]);
        for z in [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 1.0)] {
            let a = resolvent_correlation(l, &f, &g, z, ResolventMethod::rational(), &p)?;
            let b = resolvent_correlation(l, &f, &g, z, ResolventMethod::Laplace, &p)?;
            worst = worst.max(rel(a, b));
        }
        let top = ResonanceId { branch: Branch::Plus, depth: 0 };
        let want = hypflow_core::resonances::residue(l, &f, &g, top)?;
        let got = extract_residue(l, &f, &g, top.value(l), &p)?;
        res = res.max(rel(got, want));
    }
    Ok(Outcome {
        pass: worst <= 1e-5 && res <= 1e-4,
        detail: format!("rational vs Laplace {worst:.2e} (tol 1e-5), residue extraction {res:.2e} (tol 1e-4)"),
    })
}

fn criterion_9() -> Result<Outcome> {
    let mut spec: f64 = 0.0;
    for i in 1..=50 {
        let t = 0.1 * i as f64;
        let ev = eigenvalues3(&adjoint_matrix(t));
        for (e, w) in ev.iter().zip([(-t).exp(), 1.0, t.exp()]) {
            spec = spec.max((e - w).norm() / w);
        }
    }
    let lengths: Vec<(f64, u32)> = (0..1000).map(|i| (0.5 + 0.0137 * i as f64, 1 + (i % 3) as u32)).collect();
    let ls = LengthSpectrum::new(lengths)?;
    let t0 = Instant::now();
    let a = trace_atoms(&ls, 20, WeightConvention::Theorem1)?;
    let d = trace_atoms(&ls, 20, WeightConvention::Determinant)?;
    let secs = t0.elapsed().as_secs_f64();
    let mut ratio: f64 = 0.0;
    for (x, y) in a.iter().zip(&d) {
        let want = 1.0 / (2.0 * (x.n as f64 * x.t_sharp / 2.0).sinh());
        ratio = ratio.max((y.weight / x.weight - want).abs() / want);
    }
    let rs = [0.5, 1.0, 3.0];
    let st = periods_from_spectrum(&rs, PeriodConvention::Statement)?;
    let pr = periods_from_spectrum(&rs, PeriodConvention::Proof)?;
    let tables = st.len() == 3
        && pr.len() == 3
        && rs.iter().all(|&r| (period(r, PeriodConvention::Statement) - 4.0 * PI / r).abs() < 1e-15 * 4.0 * PI / r)
        && rs.iter().all(|&r| (period(r, PeriodConvention::Proof) - 2.0 * PI / r).abs() < 1e-15 * 2.0 * PI / r);
    Ok(Outcome {
        pass: spec <= 1e-10 && ratio <= 1e-12 && a.len() == 20_000 && tables && secs <= 1.0,
        detail: format!(
            "adjoint spectrum {spec:.2e} (tol 1e-10), weight ratio {ratio:.2e}, {} atoms in {secs:.3}s (budget 1s), period tables {}",
            a.len(),
            if tables { "ok" } else { "wrong" }
        ),
    })
}

fn criterion_10() -> Result<Outcome> {
    let p = TruncationParams::default();
    let mut slices: Vec<(i32, i32, SliceFn)> = Vec::new();
    for (m, n, cr, ci) in [(0, 0, 1.0, 0.0), (1, 1, 0.5, 0.2), (2, -1, 0.0, 0.3), (-3, -2, 0.25, -0.1), (3, 3, 0.2, 0.0), (-1, 2, 0.1, 0.1)] {
        let k = i32::abs(m - n);
        let a = c(cr, ci);
        slices.push((m, n, Arc::new(move |t: f64| a * (t / 2.0).tanh().powi(k) * gaussian_bump(t, 0.7, 3.0))));
    }
    let f = GroupFunction::from_slices(3.0, slices)?;
    let td = forward(&f, &uniform_r_grid(12.0, 600), &p)?;
    let taus: Vec<f64> = (0..=30).map(|i| 0.1 * i as f64).collect();
    let res = round_trip_pointwise(&f, &td, &taus, 12, &p)?;
    let dn = direct_norm(&f);
    let pn = plancherel_norm(&td);
    let pr = (pn - dn).abs() / dn;
    Ok(Outcome {
        pass: f.band <= 3 && res <= 1e-3 && pr <= 1e-3,
        detail: format!("band {}, pointwise round trip {res:.2e} (tol 1e-3), Plancherel {pr:.2e} (tol 1e-3)", f.band),
    })
}

fn criterion_11() -> Result<Outcome> {
    let dir = std::env::temp_dir().join(format!("hypflow-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let out_path = dir.join("verify.json");
    let out = Command::new(env!("CARGO_BIN_EXE_hypflow"))
        .args(["verify", "--out"])
        .arg(&out_path)
        .output()
        .expect("run hypflow verify");
    let text = std::fs::read_to_string(&out_path).unwrap_or_default();
    let _ = std::fs::remove_dir_all(&dir);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap_or(serde_json::Value::Null);
    let empty = Vec::new();
    let disc = v["discrepancies"].as_array().unwrap_or(&empty);
    let has = |id: &str| disc.iter().any(|d| d["id"] == id && d["measurements"].as_object().is_some_and(|m| !m.is_empty()));
    let ids = ["a", "b", "c", "d"];
    let all = ids.iter().all(|i| has(i));
    let code = out.status.code();
    Ok(Outcome {
        pass: all && code == Some(0) && v["schema_version"] == 1,
        detail: format!(
            "verify exit {:?}, report items {} present, {} discrepancy entries",
            code,
            if all { "a-d" } else { "missing" },
            disc.len()
        ),
    })
}

fn main() {
    let criteria: [(u32, Criterion); 11] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
    ];
    let budgets = [(1, 60.0), (6, 120.0), (10, 120.0), (11, 600.0)];
    let mut failed = 0;
    for (id, run) in criteria {
        let t0 = Instant::now();
        let out = run();
        let secs = t0.elapsed().as_secs_f64();
        let budget = budgets.iter().find(|b| b.0 == id).map(|b| b.1);
        let (pass, detail) = match out {
            Ok(o) => (o.pass && budget.is_none_or(|b| secs <= b), o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let limit = budget.map(|b| format!(", budget {b:.0}s")).unwrap_or_default();
        println!("criterion {id:>2}: {}  {detail}  [{secs:.1}s{limit}]", if pass { "PASS" } else { "FAIL" });
        failed += usize::from(!pass);
    }
    println!("{} of 11 criteria passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
