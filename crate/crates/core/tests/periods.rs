use catalan_frobenius::periods::*;
use catalan_frobenius::rational::Q;
use catalan_frobenius::scalar::Scalar;
use catalan_frobenius::series::LambdaObject;

fn window(l: i32) -> (i32, i32) {
    (-14, l.abs() + 3)
}

fn vanishes_inside(f: &LambdaObject, w: (i32, i32)) -> bool {
    f.terms().all(|(m, _, c)| m <= w.0 || m >= w.1 || c.is_zero())
}

#[test]
fn closed_and_explicit_agree() {
    for l in -4..=4 {
        for i in 1..=2 {
            let w = window(l);
            let a = period_special(l, &basis(i), w, Representation::Closed).unwrap();
            let b = period_special(l, &basis(i), w, Representation::Infty).unwrap();
            let (a, b) = (a.lambda().unwrap(), b.lambda().unwrap());
            assert_eq!(a[0], b[0], "level {l}, e{i}, first component");
            assert_eq!(a[1], b[1], "level {l}, e{i}, second component");
        }
    }
}

#[test]
fn ode_residual_vanishes_at_infinity() {
    for l in -4..=4 {
        for rep in [Representation::Closed, Representation::Infty] {
            let w = window(l);
            let v = period_special(l, &basis(2), w, rep).unwrap();
            let r = lambda_ode_residual(v.lambda().unwrap(), l);
            assert!(vanishes_inside(&r[0], w) && vanishes_inside(&r[1], w), "level {l}: {:?}", r);
        }
    }
}

#[test]
fn ode_residual_vanishes_near_ui() {
    for l in -4..=4 {
        for i in 1..=2 {
            let p = period_near_ui(i, l, 8);
            let r = p.ode_residual(l);
            assert!(r.coeffs.is_empty(), "level {l}, u{i}: {:?}", r.coeffs);
        }
    }
}

#[test]
fn puiseux_leading_matches_normalization() {
    for l in -4..=4 {
        for i in 1..=2 {
            let (m, c) = period_near_ui(i, l, 4).leading().unwrap();
            assert_eq!(m, -2 * l - 1);
            assert_eq!(c, normalization_leading(i, l), "level {l}, u{i}");
        }
    }
}

#[test]
fn derivative_raises_level_near_ui() {
    for i in 1..=2 {
        for l in -4..=3 {
            let d = period_near_ui(i, l, 8).derivative();
            let next = period_near_ui(i, l + 1, 8);
            for m in -2 * l - 3..=d.valid_max {
                assert_eq!(d.coefficient(m), next.coefficient(m), "u{i}, level {l}, s^{m}");
            }
        }
    }
}

#[test]
fn second_point_mirrors_first() {
    let p1 = period_near_ui(1, 0, 6);
    let p2 = period_near_ui(2, 0, 6);
    for k in 0..=6 {
        let m = 2 * k - 1;
        let sign = Scalar::int(if k % 2 == 0 { 1 } else { -1 });
        let c1 = p1.coefficient(m);
        let c2 = p2.coefficient(m);
        assert_eq!(c2[0], &(&Scalar::i() * &sign) * &c1[0]);
        assert_eq!(c2[1], -&(&(&Scalar::i() * &sign) * &c1[1]));
    }
}

#[test]
fn polynomial_parts_differentiate_down_the_levels() {
    for l in -6..=-2 {
        for i in 1..=2 {
            let w = (-2, 8);
            let p = polynomial_part(i, l, w);
            let q = polynomial_part(i, l + 1, w);
            assert_eq!(p[0].derivative(), q[0]);
            assert_eq!(p[1].derivative(), q[1]);
        }
    }
}

#[test]
fn minus_one_difference_is_constant() {
    let w = window(-1);
    let diff = [Scalar::one(), Scalar::int(-1)];
    let v = period_special(-1, &diff, w, Representation::Infty).unwrap();
    let v = v.lambda().unwrap();
    let pii = &Scalar::pi() * &Scalar::i();
    assert_eq!(v[0], LambdaObject::scalar_monomial(-&pii, 0, 0, w));
    assert!(v[1].is_zero());
}

#[test]
fn nonnegative_levels_do_not_see_the_label_split() {
    for l in 0..=3 {
        let w = window(l);
        let a = period_special(l, &basis(1), w, Representation::Closed).unwrap();
        let b = period_special(l, &basis(2), w, Representation::Closed).unwrap();
        assert_eq!(a.lambda().unwrap()[0], b.lambda().unwrap()[0]);
    }
}

#[test]
fn w_function_values() {
    let e1 = basis(1);
    let e2 = basis(2);
    let w = w_function(&e1, &e1);
    assert_eq!(w.rational(), (vec![Scalar::zero(), Scalar::one()], vec![Scalar::int(-4), Scalar::zero(), Scalar::one()]));
    let diff = [Scalar::one(), Scalar::int(-1)];
    assert!(w_function(&diff, &e2).coefficient.is_zero());
    let two = [Scalar::int(2), Scalar::zero()];
    assert_eq!(w_function(&two, &two).coefficient, Scalar::int(4));
    let a = [Scalar::frac(1, 3), Scalar::int(5)];
    assert_eq!(w_function(&a, &a).coefficient, (&a[0] + &a[1]).pow(2));
}

#[test]
fn w_function_matches_period_pairing() {
    let w = (-12, 2);
    let a = [Scalar::int(3), Scalar::frac(-1, 2)];
    let b = [Scalar::int(1), Scalar::int(4)];
    let ia = period_special(0, &a, w, Representation::Closed).unwrap();
    let ib = period_special(0, &b, w, Representation::Closed).unwrap();
    let pairing = eta_pairing(ia.lambda().unwrap(), ib.lambda().unwrap()).unwrap();
    let expected = w_function(&a, &b).expand(w);
    for m in -11..=2 {
        assert_eq!(pairing.scalar_coefficient(m, 0), expected.scalar_coefficient(m, 0), "λ^{m}");
    }
}

#[test]
fn monodromy_generators() {
    let g1 = MonodromyElement::new(vec![1]);
    let g2 = MonodromyElement::new(vec![2]);
    let e1 = basis(1);
    let e2 = basis(2);
    assert_eq!(monodromy_apply(&g1, &e1), [Scalar::int(-1), Scalar::zero()]);
    assert_eq!(monodromy_apply(&g1, &e2), [Scalar::int(-2), Scalar::one()]);
    assert_eq!(monodromy_apply(&g2, &e1), [Scalar::one(), Scalar::int(-2)]);
    assert_eq!(monodromy_apply(&g2, &e2), [Scalar::zero(), Scalar::int(-1)]);
    assert_eq!(MonodromyElement::new(vec![1, 1]).matrix(), [[1, 0], [0, 1]]);
    assert_eq!(MonodromyElement::new(vec![2, 2]).matrix(), [[1, 0], [0, 1]]);
    let a = [Scalar::rat(Q::new(2, 3)), Scalar::int(7)];
    let s = &a[0] + &a[1];
    let out = monodromy_apply(&MonodromyElement::new(vec![2, 1]), &a);
    assert_eq!(out, [&a[0] - &s.scale(&Q::from_int(2)), &a[1] + &s.scale(&Q::from_int(2))]);
}

#[test]
fn window_errors() {
    assert!(matches!(period_special(2, &basis(1), (-2, 2), Representation::Closed), Err(PeriodError::Window(-2, 2, -3))));
    assert!(matches!(period_special(0, &[Scalar::one(), Scalar::one()], (-4, 2), Representation::U1), Err(PeriodError::Label)));
}
