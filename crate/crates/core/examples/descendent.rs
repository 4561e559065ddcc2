//! Low coefficients of `log 𝒟` at `t¹ = 0, t² = 1`.

use catalan_frobenius::givental::{coefficient_rows, descendent_potential, TimeSlots};
use catalan_frobenius::scalar::Scalar;

fn main() {
    let p = descendent_potential(&[(0, 3), (1, 1)], 1, &Scalar::zero(), TimeSlots::All).expect("potential");
    for row in coefficient_rows(&p) {
        println!("g={} {:?} {}", row.genus, row.monomial, row.value);
    }
}
