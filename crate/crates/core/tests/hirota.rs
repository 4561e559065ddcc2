use catalan_frobenius::hirota::*;
use catalan_frobenius::rational::{factorial, harmonic, Q};
use catalan_frobenius::scalar::Scalar;
use catalan_frobenius::series::{Cap, Monomial, Series, Truncation, Var};

fn full_source(psi: &Scalar) -> HqeSource {
    HqeSource::new(&HqeCaps::default(), psi, 2, 1).unwrap()
}

fn total_nonzero(r: &HqeReport) -> usize {
    r.instances.iter().map(|i| i.nonzero.len()).sum()
}

#[test]
fn residues_vanish_with_symbolic_psi() {
    let r = verify_hqe(&full_source(&Scalar::psi()), 2, &[-1, 0, 1]).unwrap();
    assert_eq!(r.instances.len(), 9);
    for i in &r.instances {
        assert!(i.ok(), "n={} k={}: {:?}", i.n, i.k, i.nonzero);
        assert!(i.monomials_checked > 0);
    }
}

#[test]
fn residues_vanish_at_rational_psi() {
    for psi in [Scalar::zero(), Scalar::frac(-3, 2)] {
        let r = verify_hqe(&full_source(&psi), 2, &[-1, 0, 1]).unwrap();
        assert!(r.ok(), "psi={}", psi.to_text());
    }
}

#[test]
fn larger_k_at_low_degree() {
    let caps = HqeCaps { degree_max: 2, index_max: 1, eps_window: (-2, 1), psi_degree_max: 4 };
    let r = verify_hqe_at(&caps, &Scalar::psi(), 3, &[-2, 2]).unwrap();
    assert!(r.ok());
}

#[test]
fn single_coefficient_mutations_are_detected() {
    let tr = Truncation::none();
    let eps = Var::eps();
    let cases: Vec<Vec<(Var, i32)>> = vec![
        vec![(eps, -2), (Var::t(1, 0), 2), (Var::t(2, 1), 1), (Var::t(1, 1), 1)],
        vec![(eps, -2), (Var::t(1, 2), 1), (Var::t(2, 0), 3)],
        vec![(eps, 0), (Var::t(1, 0), 1), (Var::t(1, 1), 1)],
        vec![(eps, 2), (Var::t(1, 0), 2)],
        vec![(eps, -2), (Var::t(1, 1), 2)],
    ];
    for pairs in cases {
        let m = Monomial::from_pairs(&pairs);
        let src = full_source(&Scalar::psi()).with_perturbation(Series::term(m.clone(), Scalar::frac(1, 7), &tr));
        let r = verify_hqe(&src, 2, &[-1, 0, 1]).unwrap();
        assert!(!r.ok(), "perturbation {m:?} went unnoticed");
    }
}

#[test]
fn every_block_order_is_needed() {
    let src = full_source(&Scalar::zero());
    let orders = src.orders();
    assert_eq!(orders, vec![2, 4]);
    for o in orders {
        let r = verify_hqe(&full_source(&Scalar::zero()).without_order(o), 2, &[-1, 0, 1]).unwrap();
        assert!(total_nonzero(&r) > 0, "order {o}");
    }
}

/// `σ(Σ λ^{ℓ+1}η^1_ℓ/(ℓ+1)! − 2Σ λ^ℓ 𝔥(ℓ)η^2_ℓ/ℓ!)`, written out independently.
fn exponent(sigma: i64, index_max: usize, tr: &std::sync::Arc<Truncation>) -> Series {
    let lam = Var::lambda();
    let mut e = Series::zero(tr);
    for l in 0..=index_max {
        let c = &Q::from_int(sigma) / &factorial(l as u32 + 1);
        e.add_term(Monomial::from_pairs(&[(lam, l as i32 + 1), (eta(1, l), 1)]), Scalar::rat(c));
    }
    for l in 1..=index_max {
        let c = &(&Q::from_int(-2 * sigma) * &harmonic(l as u32)) / &factorial(l as u32);
        e.add_term(Monomial::from_pairs(&[(lam, l as i32), (eta(2, l), 1)]), Scalar::rat(c));
    }
    e
}

#[test]
fn trivial_potential_reproduces_the_prefactors() {
    let caps = HqeCaps { degree_max: 3, index_max: 2, eps_window: (-2, 2), psi_degree_max: 6 };
    let src = HqeSource::new(&caps, &Scalar::zero(), 2, 1).unwrap().trivial();
    let etas: Vec<Var> = (0..=2).map(|l| eta(1, l)).chain((1..=2).map(|l| eta(2, l))).collect();
    let tr = Truncation::new(vec![Cap::degree("degree", &etas, 3)]);
    for k in [-1i32, 0, 1] {
        let f = hqe_integrand(&src, &HqeInstance { n: 0, k, lambda_window: None }).unwrap();
        let plus = exponent(1, 2, &tr).exp().unwrap();
        let minus = exponent(-1, 2, &tr).exp().unwrap();
        let lam = Var::lambda();
        let mut expected: std::collections::BTreeMap<i32, Series> = Default::default();
        for (s, shift, sign) in [(&plus, k, 1), (&minus, -k, -1)] {
            for (m, c) in s.iter() {
                let p = m.exponent(lam) + shift;
                let slot = expected.entry(p).or_insert_with(|| Series::zero(&tr));
                slot.add_term(m.without(lam), c.scale(&Q::from_int(sign)));
            }
        }
        let (lo, hi) = f.window();
        for p in lo..=hi {
            let got = f.coefficient(p, 0);
            let want = expected.get(&p).cloned().unwrap_or_else(|| Series::zero(&tr));
            let got: Vec<_> = got.sorted_terms();
            let want: Vec<_> = want.sorted_terms();
            assert_eq!(got, want, "k={k}, λ^{p}");
        }
    }
}

#[test]
fn zero_degree_slice_for_k_one() {
    let caps = HqeCaps { degree_max: 0, index_max: 2, eps_window: (-2, 2), psi_degree_max: 4 };
    let src = HqeSource::new(&caps, &Scalar::psi(), 0, 1).unwrap();
    let f = hqe_integrand(&src, &HqeInstance { n: 0, k: 1, lambda_window: None }).unwrap();
    assert!(f.shift(-1).residue_at_infinity().unwrap().is_zero());
    assert!(f.coefficient(0, 0).is_zero());
    assert!(!f.is_zero());
}

#[test]
fn k_zero_degree_zero_integrand_vanishes() {
    let caps = HqeCaps { degree_max: 0, index_max: 1, eps_window: (-2, 2), psi_degree_max: 4 };
    let src = HqeSource::new(&caps, &Scalar::psi(), 2, 0).unwrap();
    let f = hqe_integrand(&src, &HqeInstance { n: 2, k: 0, lambda_window: None }).unwrap();
    assert!(f.is_zero());
}

#[test]
fn narrow_lambda_window_is_rejected() {
    let src = full_source(&Scalar::zero());
    let need = src.required_window(1);
    let err = hqe_integrand(&src, &HqeInstance { n: 0, k: 1, lambda_window: Some((need.0 + 1, need.1)) }).unwrap_err();
    assert_eq!(err, HqeError::Window(need.0 + 1, need.1, need.0, need.1));
    assert!(matches!(verify_hqe(&src, 3, &[0]), Err(HqeError::Budget(3, 2))));
}
