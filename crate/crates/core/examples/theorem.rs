//! Polygon gluing counts against the descendent potential.

use catalan_frobenius::catalan::{verify_gluing_counts, TheoremParams};

fn main() {
    let params = TheoremParams { genus_max: 1, n_max: 2, k_max: 4, euler_max: 2 };
    let r = verify_gluing_counts(&params).expect("pipeline");
    for c in &r.comparisons {
        println!("g={} k={:?} pipeline={} count={} ok={}", c.genus, c.k, c.pipeline, c.count, c.matches);
    }
    println!("all match: {}", r.ok());
}
