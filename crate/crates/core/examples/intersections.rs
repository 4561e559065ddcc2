//! ψ-class intersection numbers up to genus 2.

use catalan_frobenius::kdv::intersection_table;

fn main() {
    for row in intersection_table(2, 3) {
        println!("g={} {:?} {}", row.genus, row.parts, row.value);
    }
}
