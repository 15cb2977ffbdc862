use hypflow_core::circle_model::{act, casimir, commutator, lie_derivative, x_op, Generator, Sign, TrigPolynomial};
use hypflow_core::flat_trace::{trace_atoms, LengthSpectrum, WeightConvention};
use hypflow_core::group::{cayley, from_euler, to_euler};
use hypflow_core::harmonic_transform::{bump, forward, uniform_r_grid, GroupFunction};
use hypflow_core::resonances::{amplitude_matrix, rank_one_ratio, Branch, ResonanceId};
use hypflow_core::special_fn::{binom, gamma};
use hypflow_core::{Complex64, EulerAngles, GroupElement, RepIndex, Sl2Element, TruncationParams};
use proptest::prelude::*;
use std::f64::consts::PI;
use std::sync::Arc;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn euler() -> impl Strategy<Value = EulerAngles> {
    (0.0..2.0 * PI, 0.0..2.5f64, -2.0 * PI..2.0 * PI).prop_map(|(a, t, b)| EulerAngles::new(a, t, b).unwrap())
}

fn element() -> impl Strategy<Value = GroupElement> {
    euler().prop_map(|e| from_euler(&e).unwrap())
}

fn poly(k: i32) -> impl Strategy<Value = TrigPolynomial> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), (2 * k + 1) as usize)
        .prop_map(move |v| TrigPolynomial::from_coeffs(v.into_iter().enumerate().map(|(i, (a, b))| (i as i32 - k, c(a, b)))))
}

fn close(g: &GroupElement, h: &GroupElement, tol: f64) -> bool {
    g.projective_distance(h) < tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composition_is_associative(a in element(), b in element(), d in element()) {
        let l = a.compose(&b).compose(&d);
        let r = a.compose(&b.compose(&d));
        prop_assert!(l.distance(&r) < 1e-9 * (1.0 + l.alpha().norm()));
        prop_assert!(l.det_defect() < 1e-11);
    }

    #[test]
    fn inverse_cancels(a in element()) {
        prop_assert!(a.compose(&a.inverse()).distance(&GroupElement::identity()) < 1e-10);
    }

    #[test]
    fn euler_round_trip(a in element()) {
        let e = to_euler(&a);
        prop_assert!(e.validate().is_ok());
        prop_assert!(close(&from_euler(&e).unwrap(), &a, 1e-9));
    }

    #[test]
    fn cayley_is_a_homomorphism(t1 in -2.0..2.0f64, u in -2.0..2.0f64, th in 0.0..6.0f64, t2 in -2.0..2.0f64) {
        let a = Sl2Element::diagonal(t1).mul(&Sl2Element::unipotent(u));
        let b = Sl2Element::rotation(th).mul(&Sl2Element::diagonal(t2));
        let lhs = cayley(&a.mul(&b));
        let rhs = cayley(&a).compose(&cayley(&b));
        prop_assert!(close(&lhs, &rhs, 1e-10));
    }

    #[test]
    fn gamma_recurrence_and_reflection(re in -4.5..6.0f64, im in -3.0..3.0f64) {
        let z = c(re, im);
        prop_assume!((z - z.re.round()).norm() > 1e-3);
        let g = gamma(z).unwrap();
        let g1 = gamma(z + 1.0).unwrap();
        prop_assert!((g1 - z * g).norm() <= 1e-12 * g1.norm().max(1.0));
        let refl = g * gamma(1.0 - z).unwrap() * (PI * z).sin();
        prop_assert!((refl - PI).norm() < 1e-11 * refl.norm().max(PI));
    }

    #[test]
    fn pascal_rule(re in -3.0..5.0f64, im in -2.0..2.0f64, k in 0u32..12) {
        let z = c(re, im);
        let lhs = binom(z + 1.0, k + 1);
        let rhs = binom(z, k) + binom(z, k + 1);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
    }

    #[test]
    fn ladder_commutators(f in poly(5), re in -0.4..0.0f64, im in 0.0..3.0f64) {
        let l = c(re, im);
        let j1 = |g: &TrigPolynomial| lie_derivative(Generator::J1, l, g);
        let xp = |g: &TrigPolynomial| x_op(Sign::Plus, l, g);
        let xm = |g: &TrigPolynomial| x_op(Sign::Minus, l, g);
        let scale = f.norm() * (1.0 + l.norm()) * 10.0;
        prop_assert!(commutator(j1, xp, &f).sub(&xp(&f)).norm() < 1e-12 * scale);
        prop_assert!(commutator(j1, xm, &f).add(&xm(&f)).norm() < 1e-12 * scale);
        prop_assert!(commutator(xm, xp, &f).sub(&j1(&f).scale(c(2.0, 0.0))).norm() < 1e-12 * scale);
        for g in [Generator::J1, Generator::J2, Generator::J3] {
            let gg = |h: &TrigPolynomial| lie_derivative(g, l, h);
            let cas = |h: &TrigPolynomial| casimir(l, h);
            prop_assert!(commutator(cas, gg, &f).norm() < 1e-10 * scale * scale);
        }
    }

    #[test]
    fn casimir_symmetry(k in -8i32..8, re in -0.45..0.0f64, im in 0.0..3.0f64) {
        let l = c(re, im);
        let a = casimir(l, &TrigPolynomial::mode(k)).coeff(k);
        let b = casimir(-1.0 - l, &TrigPolynomial::mode(k)).coeff(k);
        prop_assert!((a - b).norm() < 1e-12 * (1.0 + a.norm()));
        prop_assert!((a + l * (l + 1.0)).norm() < 1e-12 * (1.0 + a.norm()));
    }

    #[test]
    fn lengths_sorted_and_merged(v in prop::collection::vec((0.1..20.0f64, 1u32..4), 0..40)) {
        let total: u32 = v.iter().map(|x| x.1).sum();
        let ls = LengthSpectrum::new(v).unwrap();
        prop_assert!(ls.entries().windows(2).all(|w| w[0].0 < w[1].0));
        prop_assert_eq!(ls.entries().iter().map(|x| x.1).sum::<u32>(), total);
    }

    #[test]
    fn trace_weight_identities(t in 0.05..12.0f64) {
        let ls = LengthSpectrum::new(vec![(t, 1)]).unwrap();
        let a = trace_atoms(&ls, 8, WeightConvention::Theorem1).unwrap();
        let d = trace_atoms(&ls, 8, WeightConvention::Determinant).unwrap();
        for (x, y) in a.iter().zip(&d) {
            let want = 1.0 / (2.0 * (x.n as f64 * t / 2.0).sinh());
            prop_assert!(((y.weight / x.weight) - want).abs() <= 1e-12 * want.max(1.0));
            prop_assert!((x.time - x.n as f64 * t).abs() < 1e-12 * x.time);
        }
        prop_assert!(a.windows(2).all(|w| w[1].weight < w[0].weight));
    }

    #[test]
    fn amplitudes_rank_one(r in 0.3..3.0f64, k in 0usize..4, minus in any::<bool>()) {
        let branch = if minus { Branch::Minus } else { Branch::Plus };
        let a = amplitude_matrix(c(-0.5, r), ResonanceId::new(branch, k), 5).unwrap();
        prop_assert!(rank_one_ratio(&a) < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn act_is_linear_and_multiplicative(f in poly(2), g in poly(2), a in (-1.0..1.0f64, -1.0..1.0f64),
                                       e1 in (0.0..6.0f64, 0.0..0.6f64, 0.0..6.0f64),
                                       e2 in (0.0..6.0f64, 0.0..0.6f64, 0.0..6.0f64),
                                       r in 0.2..2.0f64) {
        let chi = RepIndex::principal(r).unwrap();
        let p = TruncationParams { fourier_cutoff: 64, ..Default::default() };
        let g1 = from_euler(&EulerAngles::new(e1.0, e1.1, e1.2).unwrap()).unwrap();
        let g2 = from_euler(&EulerAngles::new(e2.0, e2.1, e2.2).unwrap()).unwrap();
        let a = c(a.0, a.1);
        let lin = act(&chi, &g1, &f.scale(a).add(&g), &p).unwrap();
        let sep = act(&chi, &g1, &f, &p).unwrap().scale(a).add(&act(&chi, &g1, &g, &p).unwrap());
        prop_assert!(lin.max_diff(&sep) < 1e-12 * (1.0 + f.norm() + g.norm()));
        let two = act(&chi, &g1, &act(&chi, &g2, &f, &p).unwrap(), &p).unwrap();
        let one = act(&chi, &g1.compose(&g2), &f, &p).unwrap();
        prop_assert!(two.max_diff(&one) < 1e-8 * (1.0 + f.norm()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn transform_is_linear(a in (-1.0..1.0f64, -1.0..1.0f64), w in 0.3..1.0f64) {
        let p = TruncationParams::default();
        let f = GroupFunction::from_slices(1.0, vec![
            (0, 0, Arc::new(move |t: f64| c(bump(t, 1.0) * (-w * t * t).exp(), 0.0))),
        ]).unwrap();
        let g = GroupFunction::from_slices(1.0, vec![
            (1, 1, Arc::new(|t: f64| c(0.0, bump(t, 1.0)))),
        ]).unwrap();
        let a = c(a.0, a.1);
        let grid = uniform_r_grid(4.0, 21);
        let lhs = forward(&f.scale(a).add(&g), &grid, &p).unwrap();
        let tf = forward(&f, &grid, &p).unwrap();
        let tg = forward(&g, &grid, &p).unwrap();
        for m in -1..=1 {
            for n in -1..=1 {
                for ((x, y), z) in lhs.a(m, n).iter().zip(tf.a(m, n)).zip(tg.a(m, n)) {
                    prop_assert!((x - (a * y + z)).norm() < 1e-10);
                }
            }
        }
        let find = |td: &hypflow_core::harmonic_transform::TransformData, m: i32, n: i32, j: u32| {
            td.discrete.iter().find(|x| (x.m, x.n, x.j) == (m, n, j)).map(|x| x.b).unwrap_or_default()
        };
        prop_assert!(!lhs.discrete.is_empty());
        for d in &lhs.discrete {
            let want = a * find(&tf, d.m, d.n, d.j) + find(&tg, d.m, d.n, d.j);
            prop_assert!((d.b - want).norm() < 1e-10);
        }
    }
}
