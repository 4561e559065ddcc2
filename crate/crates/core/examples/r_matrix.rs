//! `R_k` from the closed form and from the recursion.

use catalan_frobenius::calibration::{r_matrix, r_matrix_recursive};
use catalan_frobenius::frobenius::FrobeniusPoint;
use catalan_frobenius::rational::Q;

fn main() {
    let p = FrobeniusPoint::new(Q::zero(), Q::from_int(16)).expect("point");
    let closed = r_matrix(&p, 5).expect("closed form");
    let rec = r_matrix_recursive(&p, 5).expect("recursion");
    for (k, (a, b)) in closed.mats.iter().zip(&rec.mats).enumerate() {
        println!("R_{k} = {:?}  same: {}", a.to_text(), a == b);
    }
    println!("R(-z)^T R(z) = 1: {}", closed.symplectic_product().is_identity());
}
