//! Product, metric and canonical frame at a point `t¹,t²`.
//!
//! `cargo run --example frobenius -- 1/3 4`

use catalan_frobenius::frobenius::{FrobeniusPoint, FrobeniusReport};
use catalan_frobenius::rational::Q;

fn main() {
    let mut args = std::env::args().skip(1);
    let t1 = args.next().map(|a| Q::parse(&a).expect("t1")).unwrap_or_else(Q::zero);
    let t2 = args.next().map(|a| Q::parse(&a).expect("t2")).unwrap_or_else(Q::one);
    let p = FrobeniusPoint::new(t1, t2).expect("point");
    println!("{}", serde_json::to_string_pretty(&FrobeniusReport::new(&p)).unwrap());
    let e = p.idempotents();
    println!("e1 * e1 = {:?}", p.product(&e[0], &e[0]));
}
