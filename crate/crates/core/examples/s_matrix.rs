//! `S_k` at the special point by the recursion and by residues, with ψ kept symbolic.

use catalan_frobenius::calibration::{s_matrix, s_matrix_residue_form, s_matrix_special_closed};
use catalan_frobenius::frobenius::FrobeniusPoint;
use catalan_frobenius::scalar::Scalar;

fn main() {
    let order = std::env::args().nth(1).map(|a| a.parse().expect("order")).unwrap_or(6);
    let p = FrobeniusPoint::special();
    let psi = Scalar::psi();
    let rec = s_matrix(&p, order, &psi);
    let res = s_matrix_residue_form(&p, order, &psi);
    for k in 0..=order {
        let agree = rec.mats[k] == res.mats[k] && rec.mats[k] == s_matrix_special_closed(k, &psi);
        println!("S_{k} = {:?}  routes agree: {agree}", rec.mats[k].to_text());
    }
    println!("S(-z)^T S(z) = 1: {}", rec.symplectic_product().is_identity());
}
