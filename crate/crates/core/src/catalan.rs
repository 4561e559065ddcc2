//! Generalized Catalan numbers by brute-force gluing of rooted polygons, and
//! the residue identities for the functions `ξ̃^α` on the curve `x = z + 1/z`.
//!
//! Sides of the polygons are labelled `0..N`. The face permutation `σ` sends a
//! side to the next side of its polygon, a gluing is a fixed-point-free
//! involution `α`, and the vertices of the glued surface are the cycles of
//! `σ∘α`. With `E = N/2` edges and `F = n` faces, `V − E + F = 2 − 2g`.

use crate::frobenius::FrobeniusPoint;
use crate::rational::{factorial, Q};
use crate::scalar::Scalar;
use crate::givental::{descendent_potential, GiventalError, TimeSlots};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

/// Default cap on the total number of sides.
pub const DEFAULT_BOUND: u32 = 14;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CatalanError {
    #[error("brute-force bound: {0} sides exceed {1}")]
    Bound(u32, u32),
    #[error("polygons need at least one side")]
    EmptyPolygon,
}

/// Counts of connected gluings by genus, plus all gluings (connected or not).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GluingCensus {
    pub by_genus: BTreeMap<u32, u64>,
    pub total: u64,
    pub connected: u64,
}

struct Layout {
    sigma: Vec<u8>,
    face: Vec<u8>,
    n_faces: usize,
}

impl Layout {
    fn new(profile: &[u32]) -> Layout {
        let mut sigma = Vec::new();
        let mut face = Vec::new();
        let mut start = 0u8;
        for (f, k) in profile.iter().enumerate() {
            for j in 0..*k as u8 {
                sigma.push(start + (j + 1) % *k as u8);
                face.push(f as u8);
            }
            start += *k as u8;
        }
        Layout { sigma, face, n_faces: profile.len() }
    }

    /// `(vertices, connected)` for a complete matching.
    fn inspect(&self, alpha: &[u8]) -> (u32, bool) {
        let n = alpha.len();
        let mut seen = [false; 64];
        let mut cycles = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            cycles += 1;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.sigma[alpha[x] as usize] as usize;
            }
        }
        let mut parent: [u8; 16] = [0; 16];
        for (i, p) in parent.iter_mut().enumerate() {
            *p = i as u8;
        }
        fn find(p: &mut [u8; 16], mut x: u8) -> u8 {
            while p[x as usize] != x {
                p[x as usize] = p[p[x as usize] as usize];
                x = p[x as usize];
            }
            x
        }
        let mut comps = self.n_faces;
        for s in 0..n {
            let a = find(&mut parent, self.face[s]);
            let b = find(&mut parent, self.face[alpha[s] as usize]);
            if a != b {
                parent[a as usize] = b;
                comps -= 1;
            }
        }
        (cycles, comps == 1)
    }
}

fn enumerate(layout: &Layout, alpha: &mut Vec<u8>, census: &mut GluingCensus) {
    let n = alpha.len();
    let first = match alpha.iter().position(|a| *a == u8::MAX) {
        Some(i) => i,
        None => {
            census.total += 1;
            let (v, connected) = layout.inspect(alpha);
            if connected {
                census.connected += 1;
                let e = n as i64 / 2;
                let f = layout.n_faces as i64;
                let chi = v as i64 - e + f;
                let g2 = 2 - chi;
                assert!(g2 >= 0 && g2 % 2 == 0, "non-integral genus");
                *census.by_genus.entry((g2 / 2) as u32).or_default() += 1;
            }
            return;
        }
    };
    for j in first + 1..n {
        if alpha[j] != u8::MAX {
            continue;
        }
        alpha[first] = j as u8;
        alpha[j] = first as u8;
        enumerate(layout, alpha, census);
        alpha[first] = u8::MAX;
        alpha[j] = u8::MAX;
    }
}

fn merge(mut a: GluingCensus, b: GluingCensus) -> GluingCensus {
    a.total += b.total;
    a.connected += b.connected;
    for (g, c) in b.by_genus {
        *a.by_genus.entry(g).or_default() += c;
    }
    a
}

fn census_cache() -> &'static Mutex<BTreeMap<Vec<u32>, GluingCensus>> {
    static C: OnceLock<Mutex<BTreeMap<Vec<u32>, GluingCensus>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// Enumerates every side-pairing of the ordered, rooted polygons.
pub fn gluing_census(profile: &[u32], bound: u32) -> Result<GluingCensus, CatalanError> {
    if profile.iter().any(|k| *k == 0) {
        return Err(CatalanError::EmptyPolygon);
    }
    let n: u32 = profile.iter().sum();
    if n > bound {
        return Err(CatalanError::Bound(n, bound));
    }
    if let Some(c) = census_cache().lock().unwrap().get(profile) {
        return Ok(c.clone());
    }
    let layout = Layout::new(profile);
    let census = if n % 2 == 1 {
        GluingCensus::default()
    } else {
        (1..n as usize)
            .into_par_iter()
            .map(|j| {
                let mut alpha = vec![u8::MAX; n as usize];
                alpha[0] = j as u8;
                alpha[j] = 0;
                let mut c = GluingCensus::default();
                enumerate(&layout, &mut alpha, &mut c);
                c
            })
            .reduce(GluingCensus::default, merge)
    };
    census_cache().lock().unwrap().insert(profile.to_vec(), census.clone());
    Ok(census)
}

/// `C_{g; k_1,…,k_n}`.
pub fn count_maps_bruteforce(genus: u32, profile: &[u32], bound: u32) -> Result<u64, CatalanError> {
    Ok(gluing_census(profile, bound)?.by_genus.get(&genus).copied().unwrap_or(0))
}

/// `D_{g;k} = C_{g;k}/(k_1⋯k_n)`.
pub fn unrooted_weight(genus: u32, profile: &[u32], bound: u32) -> Result<Q, CatalanError> {
    let c = count_maps_bruteforce(genus, profile, bound)?;
    let prod: i64 = profile.iter().map(|k| *k as i64).product();
    Ok(Q::new(c as i64, prod))
}

/// Catalan numbers `(2m)!/(m!(m+1)!)`.
pub fn catalan_number(m: u32) -> Q {
    &factorial(2 * m) / &(&factorial(m) * &factorial(m + 1))
}

/// Power series in `z` (index = exponent), truncated at a fixed length.
type Pz = Vec<Scalar>;

fn pz_mul(a: &Pz, b: &Pz, len: usize) -> Pz {
    let mut out = vec![Scalar::zero(); len];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j >= len {
                break;
            }
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

fn pz_derivative(a: &Pz) -> Pz {
    let mut out: Pz = (1..a.len()).map(|k| a[k].scale(&Q::from_int(k as i64))).collect();
    out.push(Scalar::zero());
    out
}

/// `ξ̃^α(z)` built from `ξ^j = Δ_j^{-1/2}/(p_j − z)` and `Ψ^{-1}` at `(0,1)`.
pub fn xi_tilde(alpha: usize, len: usize) -> Pz {
    let p = FrobeniusPoint::special();
    let dinv = p.delta_inv_roots();
    let psi_inv = p.psi_inv();
    // 1/(p − z) = Σ z^k / p^{k+1}
    let xi = |j: usize| -> Pz {
        let pj: i64 = if j == 0 { 1 } else { -1 };
        (0..len).map(|k| dinv[j].scale(&Q::from_int(pj.pow(k as u32 + 1)).recip())).collect()
    };
    let xs = [xi(0), xi(1)];
    (0..len)
        .map(|k| &(&psi_inv.m[alpha - 1][0] * &xs[0][k]) + &(&psi_inv.m[alpha - 1][1] * &xs[1][k]))
        .collect()
}

/// `res_{z=0} x^{k+1}/(k+1)! · d(−d/dx)^a ξ̃^α(z)` with `x = z + z^{-1}`.
pub fn xi_residue_identity(alpha: usize, k: i64, a: u32) -> Scalar {
    assert!(k >= -1 && (alpha == 1 || alpha == 2));
    let len = (k + a as i64 + 6) as usize;
    // 1/x'(z) = −z²/(1 − z²)
    let inv_dx: Pz = (0..len).map(|j| if j >= 2 && j % 2 == 0 { Scalar::int(-1) } else { Scalar::zero() }).collect();
    let mut g = xi_tilde(alpha, len);
    for _ in 0..a {
        g = pz_mul(&pz_derivative(&g), &inv_dx, len).iter().map(|c| -c).collect();
    }
    let dg = pz_derivative(&g);
    // x^{k+1} = Σ_j C(k+1, j) z^{k+1−2j}; residue pairs z^{e} with dg_{−1−e}.
    let m = (k + 1) as u32;
    let mut acc = Scalar::zero();
    for j in 0..=m {
        let e = m as i64 - 2 * j as i64;
        let idx = -1 - e;
        if idx >= 0 && (idx as usize) < dg.len() {
            acc = &acc + &dg[idx as usize].scale(&crate::rational::binomial(m as i64, j as i64));
        }
    }
    acc.scale(&factorial(m).recip())
}

/// Parameters of a theorem check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremParams {
    pub genus_max: u32,
    pub n_max: u32,
    pub k_max: u32,
    /// Largest `2g − 2 + n` included.
    pub euler_max: i32,
}

impl Default for TheoremParams {
    fn default() -> Self {
        TheoremParams { genus_max: 2, n_max: 3, k_max: 5, euler_max: 3 }
    }
}

impl TheoremParams {
    /// The `(g, n)` blocks covered, `n ≥ 1`.
    pub fn blocks(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for g in 0..=self.genus_max {
            for n in 1..=self.n_max {
                if 2 * g as i32 - 2 + n as i32 <= self.euler_max {
                    out.push((g, n));
                }
            }
        }
        out
    }
}

/// One coefficient compared against brute force.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremComparison {
    pub genus: u32,
    pub k: Vec<u32>,
    pub pipeline: String,
    pub brute_force: String,
    pub count: u64,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub params: TheoremParams,
    pub comparisons: Vec<TheoremComparison>,
    pub mismatches: Vec<TheoremComparison>,
}

impl TheoremReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty() && !self.comparisons.is_empty()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TheoremError {
    #[error(transparent)]
    Givental(#[from] GiventalError),
    #[error(transparent)]
    Catalan(#[from] CatalanError),
    #[error("coefficient for genus {0}, k = {1:?} is not rational: {2}")]
    Irrational(u32, Vec<u32>, String),
}

/// Compares `∂^n log 𝒟 / ∂t^1_{k_1}⋯∂t^1_{k_n}` at `t^2_0 = 1`, `ψ = 0` with
/// `C_{g; k_1+1, …, k_n+1} / ∏ (k_i+1)!` for every block and every
/// non-decreasing `k` with entries up to `k_max`.
pub fn verify_gluing_counts(params: &TheoremParams) -> Result<TheoremReport, TheoremError> {
    let blocks = params.blocks();
    let d = descendent_potential(&blocks, params.k_max, &Scalar::zero(), TimeSlots::FirstOnly)?;
    let bound = params.n_max * (params.k_max + 1);
    let mut comparisons = Vec::new();
    for (g, n) in blocks {
        for k in crate::kdv::multisets_bounded(n as usize, params.k_max) {
            let ins: Vec<(usize, usize)> = k.iter().map(|a| (1usize, *a as usize)).collect();
            let value = d.correlator(g, &ins)?;
            let value = value.as_rational().ok_or_else(|| TheoremError::Irrational(g, k.clone(), value.to_text()))?;
            let profile: Vec<u32> = k.iter().map(|a| a + 1).collect();
            let count = count_maps_bruteforce(g, &profile, bound)?;
            let mut expect = Q::from_int(count as i64);
            for p in &profile {
                expect = &expect / &factorial(*p);
            }
            comparisons.push(TheoremComparison {
                genus: g,
                k: k.clone(),
                pipeline: value.to_string(),
                brute_force: expect.to_string(),
                count,
                matches: value == expect,
            });
        }
    }
    let mismatches = comparisons.iter().filter(|c| !c.matches).cloned().collect();
    Ok(TheoremReport { params: params.clone(), comparisons, mismatches })
}

/// `(z + w) Σ C_{0;k_1+1,k_2+1}/((k_1+1)!(k_2+1)!) z^{k_1} w^{k_2}` at `[z^a w^b]`.
pub fn two_point_bridge(a: usize, b: usize, bound: u32) -> Result<Q, CatalanError> {
    let c = |k1: usize, k2: usize| -> Result<Q, CatalanError> {
        let n = count_maps_bruteforce(0, &[k1 as u32 + 1, k2 as u32 + 1], bound)?;
        Ok(&Q::from_int(n as i64) / &(&factorial(k1 as u32 + 1) * &factorial(k2 as u32 + 1)))
    };
    let mut acc = Q::zero();
    if a >= 1 {
        acc = &acc + &c(a - 1, b)?;
    }
    if b >= 1 {
        acc = &acc + &c(a, b - 1)?;
    }
    Ok(acc)
}

/// The coefficient `[z^a w^b]` of the explicit two-point double series.
pub fn two_point_series(a: usize, b: usize) -> Q {
    let f = |m: usize| factorial(m as u32);
    match (a % 2, b % 2) {
        (0, 1) => (&(&f(a / 2) * &f(a / 2)) * &(&f(b / 2) * &f(b / 2 + 1))).recip(),
        (1, 0) => (&(&f(a / 2) * &f(a / 2 + 1)) * &(&f(b / 2) * &f(b / 2))).recip(),
        _ => Q::zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(count_maps_bruteforce(0, &[2], DEFAULT_BOUND).unwrap(), 1);
        assert_eq!(count_maps_bruteforce(0, &[4], DEFAULT_BOUND).unwrap(), 2);
        assert_eq!(count_maps_bruteforce(1, &[4], DEFAULT_BOUND).unwrap(), 1);
        assert_eq!(count_maps_bruteforce(0, &[6], DEFAULT_BOUND).unwrap(), 5);
        assert_eq!(count_maps_bruteforce(0, &[1, 1], DEFAULT_BOUND).unwrap(), 1);
    }

    #[test]
    fn xi_closed_forms() {
        let len = 8;
        let x1 = xi_tilde(1, len);
        let x2 = xi_tilde(2, len);
        for k in 0..len {
            let odd = if k % 2 == 1 { Scalar::one() } else { Scalar::zero() };
            let even = if k % 2 == 0 { Scalar::one() } else { Scalar::zero() };
            assert_eq!(x1[k], odd);
            assert_eq!(x2[k], even);
        }
    }

    #[test]
    fn residue_matches_s_matrix() {
        let p = FrobeniusPoint::special();
        let table = crate::calibration::s_matrix(&p, 8, &Scalar::psi());
        for alpha in 1..=2 {
            for k in -1..6i64 {
                for a in 0..8u32 {
                    let r = xi_residue_identity(alpha, k, a);
                    if a as i64 > k {
                        assert!(r.is_zero(), "alpha={alpha} k={k} a={a}: {r}");
                    } else {
                        let s = table.get((k - a as i64) as usize);
                        assert_eq!(r, s.m[alpha - 1][0], "alpha={alpha} k={k} a={a}");
                    }
                }
            }
        }
    }

    #[test]
    fn theorem_small() {
        let params = TheoremParams { genus_max: 1, n_max: 2, k_max: 3, euler_max: 1 };
        let r = verify_gluing_counts(&params).unwrap();
        assert!(r.ok(), "{:#?}", r.mismatches);
    }
}
