use catalan_frobenius::calibration::*;
use catalan_frobenius::frobenius::FrobeniusPoint;
use catalan_frobenius::matrix::Mat2;
use catalan_frobenius::rational::Q;
use catalan_frobenius::scalar::Scalar;

fn points() -> Vec<FrobeniusPoint> {
    vec![FrobeniusPoint::special(), FrobeniusPoint::new(Q::zero(), Q::from_int(16)).unwrap(), FrobeniusPoint::new(Q::new(1, 3), Q::from_int(4)).unwrap()]
}

#[test]
fn recursion_and_residue_routes_agree() {
    for p in points() {
        for psi in [Scalar::psi(), Scalar::zero(), Scalar::frac(3, 7)] {
            let a = s_matrix(&p, 8, &psi);
            let b = s_matrix_residue_form(&p, 8, &psi);
            for k in 0..=8 {
                assert_eq!(a.mats[k], b.mats[k], "k = {k} at {:?}", p);
            }
        }
    }
}

#[test]
fn s_recursion_and_symplectic() {
    for p in points() {
        let s = s_matrix(&p, 8, &Scalar::psi());
        for k in 1..=8 {
            assert!(s.recursion_residual(k).is_zero());
        }
        assert!(s.symplectic_product().is_identity());
    }
}

#[test]
fn parity_at_special_point() {
    let s = s_matrix(&FrobeniusPoint::special(), 10, &Scalar::psi());
    for k in 0..=10 {
        if k % 2 == 0 {
            assert!(s.mats[k].is_diagonal());
        } else {
            assert!(s.mats[k].is_antidiagonal());
        }
    }
}

#[test]
fn generic_first_terms() {
    let sym = s_matrix_residue_symbolic(2, &Scalar::psi());
    let p = FrobeniusPoint::new(Q::new(1, 3), Q::from_int(4)).unwrap();
    let s = s_matrix(&p, 2, &Scalar::psi());
    let t1 = Scalar::frac(1, 3);
    let t2 = Scalar::int(4);
    let pl = &Scalar::psi() + &Scalar::log_t2();
    assert_eq!(s.mats[1], Mat2::new(t1.clone(), pl.clone(), t2.clone(), t1.clone()));
    assert_eq!(s.mats[2].m[1][0], &t1 * &t2);
    assert_eq!(format!("{:?}", sym[2][1][0]), "(1)*t1*t2");
}

#[test]
fn r_routes_and_symplectic() {
    for p in points() {
        let a = r_matrix(&p, 8).unwrap();
        let b = r_matrix_recursive(&p, 8).unwrap();
        assert_eq!(a, b);
        for k in 0..8 {
            assert!(a.recursion_residual(k).is_zero());
        }
        assert!(a.symplectic_product().is_identity());
    }
}

#[test]
fn r1_integration_coefficient() {
    assert_eq!(c_prefactor_r1_coefficient(&FrobeniusPoint::special()), Q::new(-1, 8));
    assert_eq!(c_prefactor(&FrobeniusPoint::special()), Scalar::zero());
}

#[test]
fn densities() {
    let h = hamiltonian_density(1, 0, &Scalar::zero());
    assert_eq!(format!("{:?}", h), "(1)*t1*t2");
    let h = hamiltonian_density(1, -1, &Scalar::zero());
    println!("h1,-1 = {:?}", h);
    let h = hamiltonian_density(2, 0, &Scalar::zero());
    println!("h2,0 = {:?}", h);
}
