//! Residue form of the descendent Hirota quadratic equations.
//!
//! Both copies of `𝒟` are evaluated on the symmetric slice
//! `q = x + εη`, `q̄ = x − εη` with `x` the expansion point, so the constraint
//! `q^2_0 − q̄^2_0 = kε` becomes `η^2_0 = k/2`. Writing `σ = ±1` for the two
//! bracket terms, the arguments of the two factors are `x ± εŶ_σ` with
//!
//! ```text
//! Ŷ^1_ℓ = η^1_ℓ − σ ℓ!/λ^{ℓ+1}
//! Ŷ^2_0 = (k − σ)/2 − Σ_{ℓ≥1} λ^ℓ η^2_ℓ / ℓ!
//! Ŷ^2_ℓ = η^2_ℓ
//! ```
//!
//! so `log 𝒟(x + εŶ) + log 𝒟(x − εŶ) = 2 Σ_{n even} ε^{2g−2+n} F_{g,n}(Ŷ)`, and
//! the exponential prefactor is `σ(Σ λ^{ℓ+1}η^1_ℓ/(ℓ+1)! − 2 Σ λ^ℓ 𝔥(ℓ) η^2_ℓ/ℓ!)`.
//!
//! Caps: `deg_η ≤ degree_max`, internal `ε`-power `≤ eps_window.1 + degree_max`,
//! and `u = (λ-power) − (index_max+1)·deg_η ≥ −U`. Every ingredient has
//! `u ≤ 0`, so the three caps cut out an ideal. The `ε`-power reported for a
//! coefficient of `η^β` is the power of `ε` in front of `(q − q̄)^β`.

use crate::calibration::s_matrix;
use crate::frobenius::FrobeniusPoint;
use crate::givental::{ancestor_canonical, canonical_vars, w_kernel, FlowWindow, GiventalError};
use crate::matrix::Mat2;
use crate::rational::{factorial, harmonic, Q};
use crate::scalar::Scalar;
use crate::series::{Cap, LambdaError, LambdaObject, Monomial, Series, SeriesError, Truncation, Var};
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum HqeError {
    #[error(transparent)]
    Givental(#[from] GiventalError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Lambda(#[from] LambdaError),
    #[error("lambda window [{0}, {1}] too small: need [{2}, {3}]")]
    Window(i32, i32, i32, i32),
    #[error("prefactor mismatch {0} is not a multiple of psi")]
    Prefactor(String),
    #[error("n = {0} exceeds the n_max = {1} the source was built for")]
    Budget(u32, u32),
}

/// Truncation parameters of a Hirota run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HqeCaps {
    pub degree_max: u32,
    pub index_max: u32,
    pub eps_window: (i32, i32),
    /// Largest power of `ψ` kept when a prefactor has to be expanded.
    pub psi_degree_max: u32,
}

impl Default for HqeCaps {
    fn default() -> Self {
        HqeCaps { degree_max: 3, index_max: 2, eps_window: (-2, 2), psi_degree_max: 8 }
    }
}

/// Calibration constant: a formal symbol or a rational value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PsiChoice {
    Symbolic,
    Value(String),
}

impl PsiChoice {
    pub fn scalar(&self) -> Scalar {
        match self {
            PsiChoice::Symbolic => Scalar::psi(),
            PsiChoice::Value(v) => Scalar::parse(v).expect("rational psi"),
        }
    }
}

/// One equation of the family.
#[derive(Clone, Debug, PartialEq)]
pub struct HqeInstance {
    pub n: u32,
    pub k: i32,
    /// Explicit `λ`-window for the integrand; derived from the caps when absent.
    pub lambda_window: Option<(i32, i32)>,
}

/// `η^1_ℓ` or `η^2_ℓ`.
pub fn eta(alpha: usize, l: usize) -> Var {
    Var::named(&format!("eta{alpha}_{l}"))
}

/// Everything that does not depend on `(n, k, σ)`.
#[derive(Clone)]
pub struct HqeSource {
    pub caps: HqeCaps,
    pub psi: Scalar,
    pub n_max: u32,
    pub k_abs_max: u32,
    /// Largest `t^1` index whose shift can reach the residue.
    pub t_index_max: usize,
    trunc: Arc<Truncation>,
    coeff_trunc: Arc<Truncation>,
    /// Stable blocks with even `n`, grouped by `2g − 2 + n`, in `T^i_b`.
    blocks: BTreeMap<i32, Series>,
    /// `(Ψ S_l)` for `l ≤ t_index_max`.
    psi_s: Vec<Mat2>,
    /// `W_{(α,a),(β,b)}` for `a, b ≤ t_index_max`.
    w: Vec<Vec<Mat2>>,
    canon: Vec<[Var; 2]>,
    perturbation: Option<Series>,
}

fn eta_vars(index_max: u32) -> Vec<Var> {
    let mut v: Vec<Var> = (0..=index_max as usize).map(|l| eta(1, l)).collect();
    v.extend((1..=index_max as usize).map(|l| eta(2, l)));
    v
}

impl HqeSource {
    /// Builds the source for `n ≤ n_max` and `|k| ≤ k_abs_max`.
    pub fn new(caps: &HqeCaps, psi: &Scalar, n_max: u32, k_abs_max: u32) -> Result<HqeSource, HqeError> {
        let d = caps.degree_max as i64;
        let i1 = caps.index_max as i64 + 1;
        let u_cap = n_max as i64 + k_abs_max as i64 + i1 * d;
        let eps_cap = caps.eps_window.1 as i64 + d;
        let etas = eta_vars(caps.index_max);
        let lam = Var::lambda();
        let mut u_weights: Vec<(Var, i32)> = etas.iter().map(|v| (*v, i1 as i32)).collect();
        u_weights.push((lam, -1));
        let trunc = Truncation::new(vec![
            Cap::degree("degree", &etas, d),
            Cap::new("eps", vec![(Var::eps(), 1)], eps_cap.max(0)),
            Cap::new("lambda", u_weights, u_cap),
        ]);
        let coeff_trunc = Truncation::new(vec![Cap::degree("degree", &etas, d), Cap::new("eps", vec![(Var::eps(), 1)], eps_cap.max(0))]);
        let t_index_max = (u_cap.max(1) - 1) as usize;

        let mut targets = Vec::new();
        for g in 0..=((eps_cap + 2) / 2) as u32 {
            let mut n = 2;
            while 2 * g as i64 - 2 + n as i64 <= eps_cap {
                if 2 * g + n > 2 {
                    targets.push((g, n));
                }
                n += 2;
            }
        }
        let base = FrobeniusPoint::special();
        let mut blocks: BTreeMap<i32, Series> = BTreeMap::new();
        let canon;
        if targets.is_empty() {
            canon = canonical_vars(0);
        } else {
            let w = FlowWindow::for_targets(&targets);
            canon = canonical_vars(w.index_max);
            let is_t: FxHashMap<Var, ()> = canon.iter().flat_map(|p| p.iter().map(|v| (*v, ()))).collect();
            let anc = ancestor_canonical(&base, &w, None)?;
            for (m, c) in anc.iter() {
                let e = m.exponent(Var::eps());
                let n: i32 = m.pairs().filter(|(v, _)| is_t.contains_key(v)).map(|(_, k)| k).sum();
                let g = (e + 2) / 2;
                if n % 2 != 0 || !targets.contains(&(g as u32, n as u32)) {
                    continue;
                }
                let key = e + n;
                let slot = blocks.entry(key).or_insert_with(|| Series::zero(&trunc));
                slot.add_term(m.without(Var::eps()), c.clone());
            }
        }
        let order = 2 * t_index_max + 3;
        let s_tab = s_matrix(&base, order, psi).mats;
        let psi_m = base.psi();
        let psi_s = (0..=t_index_max).map(|l| psi_m.mul(&s_tab[l])).collect();
        let w = w_kernel(&s_tab, t_index_max);
        Ok(HqeSource {
            caps: caps.clone(),
            psi: psi.clone(),
            n_max,
            k_abs_max,
            t_index_max,
            trunc,
            coeff_trunc,
            blocks,
            psi_s,
            w,
            canon,
            perturbation: None,
        })
    }

    /// Adds `δ` (a series in `ε` and `t^α_a`) to `log 𝒟`.
    pub fn with_perturbation(mut self, delta: Series) -> HqeSource {
        self.perturbation = Some(delta);
        self
    }

    /// Drops `log 𝒟` entirely, leaving only the exponential prefactors.
    pub fn trivial(mut self) -> HqeSource {
        self.blocks.clear();
        self.w = vec![vec![Mat2::zero(); self.w.len()]; self.w.len()];
        self
    }

    /// Removes the stable blocks with `2g − 2 + n = order`.
    pub fn without_order(mut self, order: i32) -> HqeSource {
        self.blocks.remove(&order);
        self
    }

    /// The orders `2g − 2 + n` of the stable blocks present.
    pub fn orders(&self) -> Vec<i32> {
        self.blocks.keys().copied().collect()
    }

    /// Lowest and highest `λ`-power of the integrand for `(n, k)`.
    pub fn required_window(&self, k: i32) -> (i32, i32) {
        let d = self.caps.degree_max as i32;
        let i1 = self.caps.index_max as i32 + 1;
        let u_cap = self.n_max as i32 + self.k_abs_max as i32 + i1 * d;
        (-u_cap - k.abs(), i1 * d + k.abs())
    }

    fn shifts(&self, k: i32, sigma: i32) -> [Vec<Series>; 2] {
        let tr = &self.trunc;
        let lam = Var::lambda();
        let im = self.caps.index_max as usize;
        let mut y1 = Vec::new();
        let mut y2 = Vec::new();
        for c in 0..=self.t_index_max {
            let mut s = Series::zero(tr);
            if c <= im {
                s.add_term(Monomial::var(eta(1, c)), Scalar::one());
            }
            s.add_term(Monomial::from_pairs(&[(lam, -(c as i32) - 1)]), Scalar::rat(&factorial(c as u32) * &Q::from_int(-sigma as i64)));
            y1.push(s);
            let mut s = Series::zero(tr);
            if c == 0 {
                s.add_term(Monomial::one(), Scalar::frac((k - sigma) as i64, 2));
                for l in 1..=im {
                    let m = Monomial::from_pairs(&[(lam, l as i32), (eta(2, l), 1)]);
                    s.add_term(m, Scalar::rat(-&factorial(l as u32).recip()));
                }
            } else if c <= im {
                s.add_term(Monomial::var(eta(2, c)), Scalar::one());
            }
            y2.push(s);
        }
        [y1, y2]
    }

    fn prefactor_exponent(&self, sigma: i32) -> Series {
        let lam = Var::lambda();
        let mut s = Series::zero(&self.trunc);
        let sg = Q::from_int(sigma as i64);
        for l in 0..=self.caps.index_max as usize {
            let m = Monomial::from_pairs(&[(lam, l as i32 + 1), (eta(1, l), 1)]);
            s.add_term(m, Scalar::rat(&sg / &factorial(l as u32 + 1)));
            if l >= 1 {
                let m = Monomial::from_pairs(&[(lam, l as i32), (eta(2, l), 1)]);
                let c = &(&harmonic(l as u32) / &factorial(l as u32)) * &Q::from_int(-2 * sigma as i64);
                s.add_term(m, Scalar::rat(c));
            }
        }
        s
    }

    /// `log 𝒟(x + εŶ) + log 𝒟(x − εŶ)`, constants in `log 𝒟` dropped.
    fn doubled_potential(&self, y: &[Vec<Series>; 2]) -> Result<Series, HqeError> {
        let tr = &self.trunc;
        let eps = Var::eps();
        let mut out = Series::zero(tr);
        // (0,2) block: ½ε^{-2}W(t,t), doubled
        let top = self.t_index_max;
        for a in 0..=top {
            for al in 0..2 {
                if y[al][a].is_zero() {
                    continue;
                }
                for b in 0..=top {
                    for be in 0..2 {
                        let c = &self.w[a][b].m[al][be];
                        if c.is_zero() || y[be][b].is_zero() {
                            continue;
                        }
                        out.add_assign(&y[al][a].mul(&y[be][b]).scale(c));
                    }
                }
            }
        }
        if !self.blocks.is_empty() {
            let mut subs = Vec::new();
            for (b, pair) in self.canon.iter().enumerate() {
                for (i, v) in pair.iter().enumerate() {
                    let mut tau = Series::zero(tr);
                    for l in 0..=top.saturating_sub(b) {
                        if b + l > top {
                            break;
                        }
                        for al in 0..2 {
                            let c = &self.psi_s[l].m[i][al];
                            if !c.is_zero() {
                                tau.add_assign(&y[al][b + l].scale(c));
                            }
                        }
                    }
                    subs.push((*v, tau));
                }
            }
            let parts: Result<Vec<Series>, SeriesError> = self
                .blocks
                .par_iter()
                .map(|(e, blk)| {
                    let v = blk.substitute_many(&subs)?;
                    Ok(v.mul_monomial(&Monomial::from_pairs(&[(eps, *e)]), &Scalar::int(2)))
                })
                .collect();
            for p in parts? {
                out.add_assign(&p);
            }
        }
        if let Some(delta) = &self.perturbation {
            for (m, c) in delta.iter() {
                let mut n = 0;
                let mut acc = Series::constant(c.clone(), tr);
                for (v, e) in m.pairs() {
                    if v == eps {
                        continue;
                    }
                    let (alpha, a) = parse_time(v).expect("perturbation in t variables");
                    n += e;
                    let val = if a <= top { y[alpha - 1][a].clone() } else { Series::zero(tr) };
                    acc = acc.mul(&val.pow(e as u32));
                }
                if n % 2 == 0 {
                    let shift = Monomial::from_pairs(&[(eps, m.exponent(eps) + n)]);
                    out.add_assign(&acc.mul_monomial(&shift, &Scalar::int(2)));
                }
            }
        }
        Ok(out)
    }

    /// `(c_σ, X_σ)` with `exp(prefactor + doubled potential) = e^{c_σ} X_σ`.
    fn bracket(&self, k: i32, sigma: i32) -> Result<(Scalar, Series), HqeError> {
        let y = self.shifts(k, sigma);
        let mut ex = self.doubled_potential(&y)?;
        ex.add_assign(&self.prefactor_exponent(sigma));
        let c = ex.constant_term();
        let x = ex.sub(&Series::constant(c.clone(), &self.trunc)).exp()?;
        Ok((c, x))
    }

    fn to_lambda(&self, s: &Series, shift: i32, window: (i32, i32)) -> LambdaObject {
        let lam = Var::lambda();
        let mut out = LambdaObject::zero(window, &self.coeff_trunc);
        let mut groups: BTreeMap<i32, Series> = BTreeMap::new();
        for (m, c) in s.iter() {
            let p = m.exponent(lam) + shift;
            groups.entry(p).or_insert_with(|| Series::zero(&self.coeff_trunc)).add_term(m.without(lam), c.clone());
        }
        for (p, c) in groups {
            out.add_term(p, 0, c);
        }
        out
    }
}

fn parse_time(v: Var) -> Option<(usize, usize)> {
    let name = v.name();
    let rest = name.strip_prefix('t')?;
    let (a, b) = rest.split_once('_')?;
    Some((a.parse().ok()?, b.parse().ok()?))
}

/// `e^{δ}` as a polynomial in `ψ` up to degree `p_max`, for `δ = aψ`.
fn exp_psi_multiple(delta: &Scalar, p_max: u32) -> Result<Scalar, HqeError> {
    if delta.is_zero() {
        return Ok(Scalar::one());
    }
    let a = delta.psi_coefficient(1);
    if &(&a * &Scalar::psi()) != delta {
        return Err(HqeError::Prefactor(delta.to_text()));
    }
    let mut acc = Scalar::one();
    let mut term = Scalar::one();
    for j in 1..=p_max {
        term = (&term * delta).scale(&Q::new(1, j as i64));
        acc = &acc + &term;
    }
    Ok(acc)
}

fn truncate_psi(c: &Scalar, p_max: u32) -> Scalar {
    let mut acc = Scalar::zero();
    for p in 0..=p_max.min(c.psi_degree()) {
        acc = &acc + &(&c.psi_coefficient(p) * &Scalar::psi().pow(p));
    }
    acc
}

/// Both bracket terms for one `k`, normalised by the `σ = +` constant.
pub struct HqeBrackets {
    pub k: i32,
    plus: Series,
    minus: Series,
    minus_factor: Scalar,
    expanded: bool,
}

/// Computes the two bracket terms for `k` (independent of `n`).
pub fn hqe_brackets(src: &HqeSource, k: i32) -> Result<HqeBrackets, HqeError> {
    let (cp, xp) = src.bracket(k, 1)?;
    let (cm, xm) = src.bracket(k, -1)?;
    // e^{kψ/2 + c_+} X_+ λ^k − e^{−kψ/2 + c_−} X_− λ^{−k}
    let half = Scalar::frac(k as i64, 2);
    let psi = &src.psi;
    let delta = &(&cm - &cp) - &(&(&half * psi) + &(&half * psi));
    let expanded = !delta.is_zero();
    let minus_factor = exp_psi_multiple(&delta, src.caps.psi_degree_max)?;
    Ok(HqeBrackets { k, plus: xp, minus: xm, minus_factor, expanded })
}

/// The bracketed expression as a `λ`-Laurent object (common scalar factor removed).
pub fn hqe_integrand(src: &HqeSource, inst: &HqeInstance) -> Result<LambdaObject, HqeError> {
    let need = src.required_window(inst.k);
    let window = match inst.lambda_window {
        Some(w) if w.0 > need.0 || w.1 < need.1 => return Err(HqeError::Window(w.0, w.1, need.0, need.1)),
        Some(w) => w,
        None => need,
    };
    if inst.n > src.n_max {
        return Err(HqeError::Budget(inst.n, src.n_max));
    }
    let br = hqe_brackets(src, inst.k)?;
    Ok(integrand_from(src, &br, window))
}

fn integrand_from(src: &HqeSource, br: &HqeBrackets, window: (i32, i32)) -> LambdaObject {
    let plus = src.to_lambda(&br.plus, br.k, window);
    let minus = src.to_lambda(&br.minus, -br.k, window).scale(&br.minus_factor);
    plus.sub(&minus)
}

/// One surviving residue coefficient.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidueTerm {
    pub monomial: BTreeMap<String, i32>,
    /// Power of `ε` in front of `∏(q − q̄)^β`.
    pub eps_power: i32,
    pub value: String,
}

/// Outcome for one `(n, k)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HqeInstanceReport {
    pub n: u32,
    pub k: i32,
    pub lambda_window: (i32, i32),
    pub monomials_checked: usize,
    pub max_monomial: String,
    pub nonzero: Vec<ResidueTerm>,
}

impl HqeInstanceReport {
    pub fn ok(&self) -> bool {
        self.nonzero.is_empty()
    }
}

/// Outcome of a full run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HqeReport {
    pub caps: HqeCaps,
    pub psi: String,
    pub t_index_max: usize,
    pub instances: Vec<HqeInstanceReport>,
}

impl HqeReport {
    pub fn ok(&self) -> bool {
        self.instances.iter().all(|r| r.ok())
    }
}

fn residue_report(src: &HqeSource, br: &HqeBrackets, n: u32) -> Result<HqeInstanceReport, HqeError> {
    let window = src.required_window(br.k);
    let f = integrand_from(src, br, window);
    let res = f.shift(n as i32 - 1).residue_at_infinity()?;
    let etas = eta_vars(src.caps.index_max);
    let (lo, hi) = src.caps.eps_window;
    let eps = Var::eps();
    let mut nonzero = Vec::new();
    for (m, c) in res.sorted_terms() {
        let deg = m.degree_in(&etas);
        let e = m.exponent(eps) - deg;
        if e < lo || e > hi {
            continue;
        }
        let c = if br.expanded { truncate_psi(&c, src.caps.psi_degree_max) } else { c };
        if c.is_zero() {
            continue;
        }
        let monomial = m.pairs().filter(|(v, _)| *v != eps).map(|(v, k)| (v.name(), k)).collect();
        nonzero.push(ResidueTerm { monomial, eps_power: e, value: c.to_text() });
    }
    let d = src.caps.degree_max as usize;
    let nv = etas.len();
    let mut count = 0usize;
    for deg in 0..=d {
        let mons = binom(nv + deg - 1, deg);
        let e_lo = lo.max(-(deg as i32));
        let e_hi = hi;
        if e_hi >= e_lo {
            count += mons * (e_hi - e_lo + 1) as usize;
        }
    }
    let max_monomial = format!("eta^{d} eps^{hi} (eta index <= {})", src.caps.index_max);
    Ok(HqeInstanceReport { n, k: br.k, lambda_window: window, monomials_checked: count, max_monomial, nonzero })
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Residues of `λ^{n−1}·integrand` for all `n ≤ n_max`, `k ∈ k_set`.
pub fn verify_hqe(src: &HqeSource, n_max: u32, k_set: &[i32]) -> Result<HqeReport, HqeError> {
    if n_max > src.n_max {
        return Err(HqeError::Budget(n_max, src.n_max));
    }
    let brackets: Result<Vec<HqeBrackets>, HqeError> = k_set.par_iter().map(|k| hqe_brackets(src, *k)).collect();
    let brackets = brackets?;
    let mut instances = Vec::new();
    for br in &brackets {
        for n in 0..=n_max {
            instances.push(residue_report(src, br, n)?);
        }
    }
    Ok(HqeReport { caps: src.caps.clone(), psi: src.psi.to_text(), t_index_max: src.t_index_max, instances })
}

/// Convenience wrapper building the source and running the check.
pub fn verify_hqe_at(caps: &HqeCaps, psi: &Scalar, n_max: u32, k_set: &[i32]) -> Result<HqeReport, HqeError> {
    let kmax = k_set.iter().map(|k| k.unsigned_abs()).max().unwrap_or(0);
    let src = HqeSource::new(caps, psi, n_max, kmax)?;
    verify_hqe(&src, n_max, k_set)
}
