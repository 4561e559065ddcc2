//! Rooted gluings of polygons and the Catalan numbers.
//!
//! `cargo run --release --example catalan -- 1 4`

use catalan_frobenius::catalan::{catalan_number, count_maps_bruteforce};

fn main() {
    let args: Vec<u32> = std::env::args().skip(1).map(|a| a.parse().expect("integer")).collect();
    let (genus, profile) = match args.split_first() {
        Some((g, rest)) if !rest.is_empty() => (*g, rest.to_vec()),
        _ => (0, vec![6]),
    };
    let bound = profile.iter().sum();
    let count = count_maps_bruteforce(genus, &profile, bound).expect("profile");
    println!("C_{{{genus}; {profile:?}}} = {count}");
    for m in 0..=5 {
        println!("Cat({m}) = {}", catalan_number(m));
    }
}
