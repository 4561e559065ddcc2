//! Randomized property suites, 128 cases each from fixed seeds.

use catalan_frobenius::frobenius::FrobeniusPoint;
use catalan_frobenius::givental::{flat_vars, LinearHamiltonian};
use catalan_frobenius::kdv::{dilaton_residual, string_residual};
use catalan_frobenius::lax::compare_ops;
use catalan_frobenius::operators::{big_x_var, x_var, Operator, EXACT};
use catalan_frobenius::rational::Q;
use catalan_frobenius::scalar::Scalar;
use catalan_frobenius::series::{Cap, LambdaObject, Monomial, Series, Truncation, Var};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, RngSeed};
use std::collections::BTreeMap;
use std::sync::Arc;

fn config(seed: u64) -> Config {
    Config {
        cases: 128,
        rng_algorithm: RngAlgorithm::ChaCha,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    }
}

fn q() -> impl Strategy<Value = Q> {
    (-9i64..=9, 1i64..=6).prop_map(|(n, d)| Q::new(n, d))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (q(), q()).prop_map(|(a, b)| &Scalar::rat(a) + &(&Scalar::rat(b) * &Scalar::psi()))
}

fn abe() -> [Var; 3] {
    [Var::named("a"), Var::named("b"), Var::eps()]
}

fn degree_cap(max: i64) -> Arc<Truncation> {
    Truncation::new(vec![Cap::degree("deg", &abe(), max)])
}

/// Polynomial in `a`, `b`, `ε` built from `(i, j, k, c)` rows.
fn poly(rows: &[(i32, i32, i32, Scalar)], tr: &Arc<Truncation>, vars: [Var; 3]) -> Series {
    let mut s = Series::zero(tr);
    for (i, j, k, c) in rows {
        s.add_term(Monomial::from_pairs(&[(vars[0], *i), (vars[1], *j), (vars[2], *k)]), c.clone());
    }
    s
}

fn rows(min_total: i32) -> impl Strategy<Value = Vec<(i32, i32, i32, Scalar)>> {
    prop::collection::vec((0i32..=3, 0i32..=3, 0i32..=2, scalar()), 1..6)
        .prop_map(move |v| v.into_iter().filter(|(i, j, k, _)| i + j + k >= min_total).collect())
}

fn same(a: &Series, b: &Series) -> bool {
    a.sub(b).is_zero()
}

proptest! {
    #![proptest_config(config(0x5eed_0001))]

    #[test]
    fn ring_laws(ra in rows(0), rb in rows(0), rc in rows(0)) {
        let tr = degree_cap(5);
        let (a, b, c) = (poly(&ra, &tr, abe()), poly(&rb, &tr, abe()), poly(&rc, &tr, abe()));
        prop_assert!(same(&a.add(&b).mul(&c), &a.mul(&c).add(&b.mul(&c))));
        prop_assert!(same(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c))));
        prop_assert!(same(&a.mul(&b), &b.mul(&a)));
    }
}

proptest! {
    #![proptest_config(config(0x5eed_0002))]

    #[test]
    fn truncation_coherence(ra in rows(0), rb in rows(1)) {
        let (big, small) = (degree_cap(7), degree_cap(3));
        let (a7, b7) = (poly(&ra, &big, abe()), poly(&rb, &big, abe()));
        let (a3, b3) = (poly(&ra, &small, abe()), poly(&rb, &small, abe()));
        prop_assert!(same(&a7.mul(&b7).with_truncation(&small), &a3.mul(&b3)));
        prop_assert!(same(&a7.mul(&b7.exp().unwrap()).with_truncation(&small), &a3.mul(&b3.exp().unwrap())));
    }
}

proptest! {
    #![proptest_config(config(0x5eed_0003))]

    #[test]
    fn exp_log_inversion(rf in rows(1)) {
        let tr = degree_cap(6);
        let f = poly(&rf, &tr, abe());
        prop_assert!(same(&f.exp().unwrap().log().unwrap(), &f));
        let one_plus = Series::one(&tr).add(&f);
        prop_assert!(same(&one_plus.log().unwrap().exp().unwrap(), &one_plus));
        prop_assert!(same(&one_plus.inverse().unwrap().mul(&one_plus), &Series::one(&tr)));
    }
}

fn lambda_object() -> impl Strategy<Value = LambdaObject> {
    prop::collection::vec((-5i32..=5, 0u8..=1, scalar()), 1..6).prop_map(|v| {
        let mut o = LambdaObject::scalar_zero((-8, 8));
        for (m, p, c) in v {
            if m == -1 && p == 1 {
                continue;
            }
            o.add_scalar_term(m, p, c);
        }
        o
    })
}

proptest! {
    #![proptest_config(config(0x5eed_0004))]

    #[test]
    fn lambda_derivative_inverts_integration(f in lambda_object()) {
        let back = f.integrate().unwrap().derivative();
        prop_assert_eq!(back.sub(&f).is_zero(), true);
    }
}

fn point() -> impl Strategy<Value = FrobeniusPoint> {
    (q(), (1i64..=5, 1i64..=4), prop::bool::ANY).prop_filter_map("singular point", |(t1, (n, d), two)| {
        let r = Q::new(n, d);
        let t2 = if two { &(&r * &r) * &(&r * &r) } else { &Q::from_int(4) * &(&(&r * &r) * &(&r * &r)) };
        FrobeniusPoint::new(t1, t2).ok()
    })
}

fn vec2() -> impl Strategy<Value = [Q; 2]> {
    (q(), q()).prop_map(|(a, b)| [a, b])
}

/// Third derivatives of `F = (t¹)²t²/2 + (t²)² log t²/2`.
fn prepotential_third(t2: &Q, a: usize, b: usize, c: usize) -> Q {
    let mut idx = [a, b, c];
    idx.sort();
    match idx {
        [0, 0, 1] => Q::one(),
        [1, 1, 1] => t2.recip(),
        _ => Q::zero(),
    }
}

proptest! {
    #![proptest_config(config(0x5eed_0005))]

    #[test]
    fn wdvv_and_idempotents(p in point(), x in vec2(), y in vec2(), z in vec2()) {
        let low = p.lowered_constants();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    prop_assert_eq!(&low[a][b][c], &prepotential_third(&p.t2, a, b, c));
                }
            }
        }
        let left = p.product(&p.product(&x, &y), &z);
        let right = p.product(&x, &p.product(&y, &z));
        prop_assert_eq!(left, right);
        let e = p.idempotents();
        for i in 0..2 {
            for j in 0..2 {
                let prod = p.product(&e[i], &e[j]);
                let expect = if i == j { e[i].clone() } else { [Q::zero(), Q::zero()] };
                prop_assert_eq!(prod, expect);
            }
        }
        let unit = [&e[0][0] + &e[1][0], &e[0][1] + &e[1][1]];
        prop_assert_eq!(unit, [Q::one(), Q::zero()]);
        let euler = p.euler();
        let from_u = [
            &(&p.u1 * &e[0][0]) + &(&p.u2 * &e[1][0]),
            &(&p.u1 * &e[0][1]) + &(&p.u2 * &e[1][1]),
        ];
        prop_assert_eq!(euler, from_u);
    }
}

fn hamiltonian() -> impl Strategy<Value = LinearHamiltonian> {
    prop::collection::vec((-3i64..=2, scalar(), scalar()), 1..5).prop_map(|v| {
        let mut coeffs = BTreeMap::new();
        for (l, a, b) in v {
            coeffs.insert(l, [a, b]);
        }
        LinearHamiltonian { coeffs }
    })
}

fn fock_poly() -> impl Strategy<Value = Vec<(usize, usize, usize, usize, Scalar)>> {
    prop::collection::vec((0usize..3, 0usize..2, 0usize..3, 0usize..2, scalar()), 1..5)
}

proptest! {
    #![proptest_config(config(0x5eed_0006))]

    #[test]
    fn quantized_linear_commutator(f1 in hamiltonian(), f2 in hamiltonian(), rows in fock_poly()) {
        let vars = flat_vars(2);
        let tr = Truncation::none();
        let mut f = Series::one(&tr);
        for (a, al, b, be, c) in rows {
            f.add_term(Monomial::from_pairs(&[(vars[a][al], 1)]).mul(&Monomial::from_pairs(&[(vars[b][be], 1)])), c);
        }
        let lhs = f1.apply(&f2.apply(&f, &vars), &vars).sub(&f2.apply(&f1.apply(&f, &vars), &vars));
        let rhs = f.scale(&f1.omega(&f2));
        prop_assert!(same(&lhs, &rhs));
    }
}

fn parts() -> impl Strategy<Value = (u32, Vec<u32>)> {
    (0u32..=3, prop::collection::vec(0u32..=6, 0..=4)).prop_filter("unstable", |(g, p)| 2 * *g as i64 - 2 + p.len() as i64 + 1 > 0)
}

proptest! {
    #![proptest_config(config(0x5eed_0007))]

    #[test]
    fn string_and_dilaton((g, p) in parts()) {
        prop_assert!(string_residual(g, &p).is_zero());
        prop_assert!(dilaton_residual(g, &p).is_zero());
    }
}

/// Polynomial coefficient in `x`, `X`, `ε`.
fn coefficient() -> impl Strategy<Value = Series> {
    prop::collection::vec((0i32..=2, 0i32..=2, 0i32..=1, -4i64..=4), 1..4).prop_map(|v| {
        let tr = Truncation::none();
        let rows: Vec<_> = v.into_iter().map(|(i, j, k, c)| (i, j, k, Scalar::int(c))).collect();
        poly(&rows, &tr, [x_var(), big_x_var(), Var::eps()])
    })
}

fn difference_operator() -> impl Strategy<Value = Operator> {
    prop::collection::vec((-2i32..=2, coefficient()), 1..4)
        .prop_map(|v| Operator::from_terms(v.into_iter().map(|(s, f)| ((0, s), f)), EXACT, 1))
}

fn pseudo_differential_operator() -> impl Strategy<Value = Operator> {
    prop::collection::vec((-2i32..=1, coefficient()), 1..4)
        .prop_map(|v| Operator::from_terms(v.into_iter().map(|(d, f)| ((d, 0), f)), 6, 1))
}

proptest! {
    #![proptest_config(config(0x5eed_0008))]

    #[test]
    fn difference_operator_algebra(a in difference_operator(), b in difference_operator(), c in difference_operator()) {
        prop_assert!(compare_ops("assoc", &a.mul(&b).mul(&c), &a.mul(&b.mul(&c))).ok());
        let ab = a.mul(&b);
        prop_assert!(compare_ops("split", &ab, &ab.plus_shift().add(&ab.minus_shift())).ok());
        prop_assert!(ab.minus_shift().terms().all(|(&(_, s), _)| s < 0));
        let sym = a.left_symbol().mul(&b.right_symbol());
        let res = sym.coefficient_of(Var::lambda(), 0);
        prop_assert!(same(&res, &ab.residue_shift()));
    }
}

proptest! {
    #![proptest_config(config(0x5eed_0009))]

    #[test]
    fn pseudo_differential_algebra(a in pseudo_differential_operator(), b in pseudo_differential_operator(), c in pseudo_differential_operator()) {
        let left = a.mul(&b).mul(&c);
        let right = a.mul(&b.mul(&c));
        let chk = compare_ops("assoc", &left, &right);
        prop_assert!(chk.ok(), "{:?}", chk.first_residual);
        let ab = a.mul(&b);
        prop_assert!(compare_ops("split", &ab, &ab.plus_d().add(&ab.minus_d())).ok());
        prop_assert!(ab.plus_d().terms().all(|(&(d, _), _)| d >= 0));
        let adj = a.mul(&b).adjoint();
        prop_assert!(compare_ops("adjoint", &adj, &b.adjoint().mul(&a.adjoint())).ok());
    }
}
