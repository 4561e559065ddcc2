//! Prints `v`, `u`, `φ`, `ρ` of the tau frame as JSON.
//!
//! `cargo run --release --example lax_data -- 3 0`

use catalan_frobenius::lax::{lax_data, LaxCaps, TauFrame};
use catalan_frobenius::scalar::Scalar;

fn main() {
    let mut args = std::env::args().skip(1);
    let weight: u32 = args.next().map(|a| a.parse().expect("weight")).unwrap_or(3);
    let psi = args.next().map(|a| Scalar::parse(&a).expect("psi")).unwrap_or_else(Scalar::zero);
    let frame = TauFrame::new(&LaxCaps { weight_max: weight }, &psi).expect("frame");
    println!("{}", serde_json::to_string_pretty(&lax_data(&frame)).unwrap());
}
