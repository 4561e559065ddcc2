//! Period vectors of level `l` at infinity and near `u₁`.

use catalan_frobenius::periods::{basis, period_near_ui, period_special, Representation};

fn main() {
    let l: i32 = std::env::args().nth(1).map(|a| a.parse().expect("level")).unwrap_or(-1);
    let window = (-8, l.abs() + 1);
    for rep in [Representation::Closed, Representation::Infty] {
        let v = period_special(l, &basis(1), window, rep).expect("period");
        println!("{}", serde_json::to_string(&v.to_json()).unwrap());
    }
    let near = period_near_ui(1, l, 4);
    println!("ODE residual near u1 vanishes: {}", near.ode_residual(l).coeffs.is_empty());
}
