//! Witten–Kontsevich intersection numbers and the KdV free energy.
//!
//! Numbers come from the DVV recursion
//!
//! ```text
//! ⟨τ_{k+1} τ_D⟩_g = 1/(2k+3)!! [ Σ_j (2k+2d_j+1)!!/(2d_j−1)!! ⟨τ_{d_j+k} τ_{D∖j}⟩_g
//!                  + ½ Σ_{r+s=k−1} (2r+1)!!(2s+1)!! ( ⟨τ_r τ_s τ_D⟩_{g−1}
//!                  + Σ ⟨τ_r τ_I⟩_{g₁} ⟨τ_s τ_J⟩_{g₂} ) ]
//! ```
//!
//! together with the string equation for leading `τ_0`. The free energy is
//! `log τ = Σ ε^{2g−2}/n! Σ ⟨τ_{a_1}…τ_{a_n}⟩_g ∏ T_{a_i}` with the stable
//! terms only (`n ≥ 1`; the genus-one constant is dropped).

use crate::rational::Q;
use crate::scalar::Scalar;
use crate::series::{Monomial, Series, Truncation, Var};
use rustc_hash::FxHashMap;
use std::sync::{Arc, OnceLock, RwLock};

type Key = (u32, Vec<u32>);

fn cache() -> &'static RwLock<FxHashMap<Key, Q>> {
    static C: OnceLock<RwLock<FxHashMap<Key, Q>>> = OnceLock::new();
    C.get_or_init(|| RwLock::new(FxHashMap::default()))
}

/// `(2n−1)!!` with `(−1)!! = 1`.
fn double_factorial_odd(n: i64) -> Q {
    let mut acc = Q::one();
    let mut k = 2 * n - 1;
    while k > 1 {
        acc = &acc * &Q::from_int(k);
        k -= 2;
    }
    acc
}

/// `⟨τ_{a_1} … τ_{a_n}⟩_g`; zero off the dimension constraint.
pub fn intersection_number(g: u32, parts: &[u32]) -> Q {
    let n = parts.len() as i64;
    let sum: i64 = parts.iter().map(|a| *a as i64).sum();
    if 3 * g as i64 - 3 + n != sum || n == 0 {
        return Q::zero();
    }
    let mut key = parts.to_vec();
    key.sort_unstable();
    let key = (g, key);
    if let Some(v) = cache().read().unwrap().get(&key) {
        return v.clone();
    }
    let v = compute(g, &key.1);
    cache().write().unwrap().insert(key, v.clone());
    v
}

fn compute(g: u32, sorted: &[u32]) -> Q {
    if g == 0 && sorted == [0, 0, 0] {
        return Q::one();
    }
    if g == 1 && sorted == [1] {
        return Q::new(1, 24);
    }
    // string equation
    if sorted[0] == 0 {
        let rest = &sorted[1..];
        let mut acc = Q::zero();
        for j in 0..rest.len() {
            if rest[j] == 0 {
                continue;
            }
            let mut v = rest.to_vec();
            v[j] -= 1;
            acc += &intersection_number(g, &v);
        }
        return acc;
    }
    // DVV on the largest index
    let top = *sorted.last().unwrap();
    let k = top as i64 - 1;
    let d: Vec<u32> = sorted[..sorted.len() - 1].to_vec();
    let mut acc = Q::zero();
    for j in 0..d.len() {
        let dj = d[j] as i64;
        let coef = &double_factorial_odd(k + dj + 1) / &double_factorial_odd(dj);
        let mut v = d.clone();
        v[j] = (dj + k) as u32;
        acc += &(&coef * &intersection_number(g, &v));
    }
    let half = Q::new(1, 2);
    for r in 0..k {
        let s = k - 1 - r;
        let coef = &(&double_factorial_odd(r + 1) * &double_factorial_odd(s + 1)) * &half;
        if g >= 1 {
            let mut v = d.clone();
            v.push(r as u32);
            v.push(s as u32);
            acc += &(&coef * &intersection_number(g - 1, &v));
        }
        let m = d.len();
        for mask in 0..(1u64 << m) {
            let mut left = vec![r as u32];
            let mut right = vec![s as u32];
            for (i, di) in d.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    left.push(*di);
                } else {
                    right.push(*di);
                }
            }
            for g1 in 0..=g {
                let a = intersection_number(g1, &left);
                if a.is_zero() {
                    continue;
                }
                let b = intersection_number(g - g1, &right);
                acc += &(&coef * &(&a * &b));
            }
        }
    }
    &acc / &double_factorial_odd(k + 2)
}

/// `⟨τ_{3g−2}⟩_g = 1/(24^g g!)`.
pub fn one_point_closed_form(g: u32) -> Q {
    &Q::from_int(24).pow(g as i32).recip() / &crate::rational::factorial(g)
}

/// Genus-zero closed form `(n−3)!/∏ a_i!` when `Σa_i = n−3`.
pub fn genus_zero_closed_form(parts: &[u32]) -> Q {
    let n = parts.len() as i64;
    let s: i64 = parts.iter().map(|a| *a as i64).sum();
    if n < 3 || s != n - 3 {
        return Q::zero();
    }
    let mut v = crate::rational::factorial((n - 3) as u32);
    for a in parts {
        v = &v / &crate::rational::factorial(*a);
    }
    v
}

/// Non-decreasing sequences of length `n` with entries in `0..=max_entry` summing to `total`.
pub fn multisets(n: usize, total: u32, max_entry: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, total: u32, lo: u32, max_entry: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut a = lo;
        while a <= max_entry && a * (n as u32) <= total {
            cur.push(a);
            rec(n - 1, total - a, a, max_entry, cur, out);
            cur.pop();
            a += 1;
        }
    }
    let mut out = Vec::new();
    rec(n, total, 0, max_entry, &mut Vec::new(), &mut out);
    out
}

/// Non-decreasing sequences of length `n` with entries in `0..=max_entry`.
pub fn multisets_bounded(n: usize, max_entry: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for total in 0..=(n as u32 * max_entry) {
        out.extend(multisets(n, total, max_entry));
    }
    out
}

/// Which stable `(g, n)` blocks to populate.
#[derive(Clone, Debug)]
pub struct TauWindow {
    pub genus_max: u32,
    /// Largest number of insertions for genus `g` is `n_max[g]`.
    pub n_max: Vec<u32>,
}

impl TauWindow {
    pub fn uniform(genus_max: u32, n_max: u32) -> TauWindow {
        TauWindow { genus_max, n_max: vec![n_max; genus_max as usize + 1] }
    }
}

/// `log τ(Δ^{1/2} T, Δ ε²)` in the variables `vars[a] = T_a`.
///
/// Terms with an index beyond `vars.len()−1` or outside the truncation are skipped.
pub fn tau_log(
    window: &TauWindow,
    vars: &[Var],
    delta_root: &Scalar,
    trunc: &Arc<Truncation>,
) -> Series {
    let eps = Var::eps();
    let delta = delta_root * delta_root;
    let delta_inv = delta.inverse().expect("nonzero Δ");
    let mut out = Series::zero(trunc);
    let max_index = vars.len() as u32 - 1;
    for g in 0..=window.genus_max {
        let n_lo = if g == 0 { 3 } else { 1 };
        for n in n_lo..=window.n_max[g as usize] {
            let total = 3 * g + n - 3;
            let scale = {
                let dg = if g == 0 { delta_inv.clone() } else { delta.pow(g - 1) };
                &dg * &delta_root.pow(n)
            };
            for parts in multisets(n as usize, total, max_index) {
                let v = intersection_number(g, &parts);
                if v.is_zero() {
                    continue;
                }
                let mut pairs: Vec<(Var, i32)> = vec![(eps, 2 * g as i32 - 2)];
                let mut mult: FxHashMap<u32, u32> = FxHashMap::default();
                for a in &parts {
                    pairs.push((vars[*a as usize], 1));
                    *mult.entry(*a).or_default() += 1;
                }
                let mut c = v;
                for m in mult.values() {
                    c = &c / &crate::rational::factorial(*m);
                }
                out.add_term(Monomial::from_pairs(&pairs), scale.scale(&c));
            }
        }
    }
    out
}

/// One row of the intersection table.
#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionRow {
    pub genus: u32,
    pub parts: Vec<u32>,
    pub value: Q,
}

/// All nonzero numbers with `g ≤ genus_max` and `1 ≤ n ≤ n_max`.
pub fn intersection_table(genus_max: u32, n_max: u32) -> Vec<IntersectionRow> {
    let mut rows = Vec::new();
    for g in 0..=genus_max {
        for n in 1..=n_max {
            let total = 3 * g as i64 + n as i64 - 3;
            if total < 0 {
                continue;
            }
            for parts in multisets(n as usize, total as u32, total as u32) {
                let v = intersection_number(g, &parts);
                if !v.is_zero() {
                    rows.push(IntersectionRow { genus: g, parts, value: v });
                }
            }
        }
    }
    rows
}

/// String-equation residual `⟨τ_0 τ_A⟩ − Σ_j ⟨τ_{a_j − 1} τ_{A∖j}⟩`.
pub fn string_residual(g: u32, parts: &[u32]) -> Q {
    let mut with0 = vec![0];
    with0.extend_from_slice(parts);
    let mut rhs = Q::zero();
    for j in 0..parts.len() {
        if parts[j] > 0 {
            let mut v = parts.to_vec();
            v[j] -= 1;
            rhs += &intersection_number(g, &v);
        }
    }
    if g == 0 && parts.len() == 2 && parts == [0, 0] {
        rhs += &Q::one();
    }
    &intersection_number(g, &with0) - &rhs
}

/// Dilaton-equation residual `⟨τ_1 τ_A⟩ − (2g−2+n)⟨τ_A⟩`.
pub fn dilaton_residual(g: u32, parts: &[u32]) -> Q {
    let mut with1 = vec![1];
    with1.extend_from_slice(parts);
    let n = parts.len() as i64;
    let mut rhs = &Q::from_int(2 * g as i64 - 2 + n) * &intersection_number(g, parts);
    if g == 1 && parts.is_empty() {
        rhs = Q::new(1, 24);
    }
    &intersection_number(g, &with1) - &rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(intersection_number(0, &[0, 0, 0]), Q::one());
        assert_eq!(intersection_number(1, &[1]), Q::new(1, 24));
        assert_eq!(intersection_number(0, &[0, 0]), Q::zero());
        assert_eq!(intersection_number(2, &[4]), Q::new(1, 1152));
        assert_eq!(intersection_number(2, &[2, 3]), Q::new(29, 5760));
        assert_eq!(intersection_number(1, &[1, 1]), Q::new(1, 24));
    }
}
