//! Extended NLS identities and the log positive-part comparison.

use catalan_frobenius::lax::{verify_nls, Flow, LaxCaps, TauFrame};
use catalan_frobenius::scalar::Scalar;

fn main() {
    let w = std::env::args().nth(1).map(|a| a.parse().expect("weight")).unwrap_or(4);
    let frame = TauFrame::new(&LaxCaps { weight_max: w }, &Scalar::psi()).expect("frame");
    let r = verify_nls(&frame, &Flow::all()).expect("nls");
    for c in r.checks.iter().chain(&r.diagnostics) {
        println!("{:<50} weight {} terms {} ok {}", c.name, c.weight_checked, c.compared_terms, c.ok());
    }
}
