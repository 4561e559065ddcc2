//! Residues of the Hirota quadratic equations with ψ symbolic.

use catalan_frobenius::hirota::{verify_hqe_at, HqeCaps};
use catalan_frobenius::scalar::Scalar;

fn main() {
    let caps = HqeCaps { degree_max: 2, ..HqeCaps::default() };
    let r = verify_hqe_at(&caps, &Scalar::psi(), 2, &[-1, 0, 1]).expect("hqe");
    for i in &r.instances {
        println!("n={} k={} monomials={} nonzero={}", i.n, i.k, i.monomials_checked, i.nonzero.len());
    }
    println!("all residues vanish: {}", r.ok());
}
