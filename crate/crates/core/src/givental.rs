//! Quantized symplectic operators, the ancestor potential `𝒜 = Ψ̂ R̂ ∏ τ` and
//! the descendent potential `𝒟 = C Ŝ^{-1} 𝒜` in the time variables.
//!
//! The `R̂`-action is computed on the logarithm. With `F(s) = log e^{s r̂} τ`,
//!
//! ```text
//! ∂_s F = V F + (ε²/2) Σ K_{(i,a),(j,b)} (∂_{ia}∂_{jb} F + ∂_{ia}F ∂_{jb}F)
//! V = −Σ (T^i_a − δ_{a,1} Δ_i^{-1/2}) (r_ℓ)^j_i ∂/∂T^j_{a+ℓ}
//! K_{(i,a),(j,b)} = (−1)^b (r_{a+b+1})^i_j
//! ```
//!
//! and `F = Σ_n g_n s^n` is solved order by order. Each application of `V`,
//! of the second-derivative term or of the product term raises
//! `D = 3g − 3 + n − Σa` by at least one and never lowers `g` or
//! `Φ = g + n + D`, so the expansion stops once `D` passes its cap.

use crate::calibration::{r_matrix, s_matrix, RMatrixError};
use crate::frobenius::FrobeniusPoint;
use crate::kdv::{tau_log, TauWindow};
use crate::matrix::{Mat2, MatrixSeries};
use crate::rational::Q;
use crate::scalar::Scalar;
use crate::series::{Monomial, Series, Truncation, Var};
use rustc_hash::FxHashMap;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GiventalError {
    #[error("cap starvation at (g, n) = ({0}, {1})")]
    CapStarvation(u32, u32),
    #[error("ancestor potential needs the point (0, 1)")]
    UnsupportedBase,
    #[error(transparent)]
    RMatrix(#[from] RMatrixError),
    #[error("non-rational coefficient {0} for monomial {1}")]
    Irrational(String, String),
}

/// A linear vector `f = Σ_l I^l (−z)^l ∈ V((z))`, components in the basis `φ_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearHamiltonian {
    /// `l ↦ (I^l)^i` (upper components).
    pub coeffs: BTreeMap<i64, [Scalar; 2]>,
}

fn lower(v: &[Scalar; 2]) -> [Scalar; 2] {
    [v[1].clone(), v[0].clone()]
}

fn pairing(a: &[Scalar; 2], b: &[Scalar; 2]) -> Scalar {
    &(&a[0] * &b[1]) + &(&a[1] * &b[0])
}

impl LinearHamiltonian {
    /// `Ω(f, g) = res_z (f(−z), g(z))`.
    pub fn omega(&self, o: &LinearHamiltonian) -> Scalar {
        let mut acc = Scalar::zero();
        for (l, v) in &self.coeffs {
            if let Some(w) = o.coeffs.get(&(-1 - l)) {
                let sign = if (l + 1).rem_euclid(2) == 0 { 1 } else { -1 };
                acc = &acc + &pairing(v, w).scale(&Q::from_int(sign));
            }
        }
        acc
    }

    /// `f̂ F = Σ_l ε(−1)^{l+1}(I^l)^i ∂F/∂q^i_l + ε^{-1}(I^{−l−1})_i q^i_l F`.
    pub fn apply(&self, f: &Series, vars: &[[Var; 2]]) -> Series {
        let eps = Var::eps();
        let tr = f.truncation();
        let mut out = Series::zero(tr);
        for (l, v) in &self.coeffs {
            if *l >= 0 && (*l as usize) < vars.len() {
                let sign = if (l + 1) % 2 == 0 { 1 } else { -1 };
                for i in 0..2 {
                    if v[i].is_zero() {
                        continue;
                    }
                    let d = f.derivative(vars[*l as usize][i]);
                    out.add_assign(&d.mul_monomial(&Monomial::var(eps), &v[i].scale(&Q::from_int(sign))));
                }
            }
            if *l < 0 {
                let k = (-1 - l) as usize;
                if k >= vars.len() {
                    continue;
                }
                let low = lower(v);
                for i in 0..2 {
                    if low[i].is_zero() {
                        continue;
                    }
                    let m = Monomial::from_pairs(&[(eps, -1), (vars[k][i], 1)]);
                    out.add_assign(&f.mul_monomial(&m, &low[i]));
                }
            }
        }
        out
    }
}

/// Kind of quantized quadratic operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    /// `Σ_{ℓ≥1} s_ℓ z^{-ℓ}`.
    LowerTriangular,
    /// `Σ_{ℓ≥1} r_ℓ z^ℓ`.
    UpperTriangular,
}

/// `m̂` for `m = log M`, with its induced kernels.
#[derive(Clone, Debug)]
pub struct QuantizedOperator {
    pub kind: OperatorKind,
    pub matrix_log: MatrixSeries,
}

impl QuantizedOperator {
    pub fn from_r(r: &MatrixSeries) -> QuantizedOperator {
        QuantizedOperator { kind: OperatorKind::UpperTriangular, matrix_log: r.log() }
    }

    pub fn from_s(s: &MatrixSeries) -> QuantizedOperator {
        QuantizedOperator { kind: OperatorKind::LowerTriangular, matrix_log: s.log() }
    }

    fn m(&self, l: usize) -> Mat2 {
        self.matrix_log.coeff(l)
    }

    /// Applies `m̂` once to a function of `q^i_a = vars[a][i]`, with metric `metric`
    /// (`η` in the flat frame, `Id` in the canonical frame).
    pub fn apply(&self, f: &Series, vars: &[[Var; 2]], metric: &Mat2) -> Series {
        let eps = Var::eps();
        let tr = f.truncation();
        let top = vars.len();
        let mut out = Series::zero(tr);
        match self.kind {
            OperatorKind::UpperTriangular => {
                // (ε²/2) Σ (−1)^b ∂_{ia}∂_{jb} (r_{a+b+1})^i_k η^{kj} − Σ q^i_a ∂_{j,a+ℓ} (r_ℓ)^j_i
                let inv = metric.inverse().expect("metric");
                let e2 = Monomial::from_pairs(&[(eps, 2)]);
                for a in 0..top {
                    for b in 0..top {
                        let k = r_upper(&self.m(a + b + 1), &inv);
                        let sign = if b % 2 == 0 { 1 } else { -1 };
                        for i in 0..2 {
                            for j in 0..2 {
                                if k.m[i][j].is_zero() {
                                    continue;
                                }
                                let d = f.derivative(vars[a][i]).derivative(vars[b][j]);
                                out.add_assign(&d.mul_monomial(&e2, &k.m[i][j].scale(&Q::new(sign, 2))));
                            }
                        }
                    }
                }
                for a in 0..top {
                    for l in 1..top - a {
                        let r = self.m(l);
                        for i in 0..2 {
                            for j in 0..2 {
                                if r.m[j][i].is_zero() {
                                    continue;
                                }
                                let d = f.derivative(vars[a + l][j]);
                                out.add_assign(&d.mul_monomial(&Monomial::var(vars[a][i]), &(-&r.m[j][i])));
                            }
                        }
                    }
                }
            }
            OperatorKind::LowerTriangular => {
                // (1/2ε²) Σ (−1)^{b+1} q^i_a q^j_b (s_{a+b+1})^k_i η_{kj} − Σ q^i_{a+ℓ} ∂_{ja} (s_ℓ)^j_i
                let em2 = Monomial::from_pairs(&[(eps, -2)]);
                for a in 0..top {
                    for b in 0..top {
                        let k = self.m(a + b + 1).transpose().mul(metric);
                        let sign = if b % 2 == 1 { 1 } else { -1 };
                        for i in 0..2 {
                            for j in 0..2 {
                                if k.m[i][j].is_zero() {
                                    continue;
                                }
                                let m = em2.mul(&Monomial::var(vars[a][i])).mul(&Monomial::var(vars[b][j]));
                                out.add_assign(&f.mul_monomial(&m, &k.m[i][j].scale(&Q::new(sign, 2))));
                            }
                        }
                    }
                }
                for a in 0..top {
                    for l in 1..top - a {
                        let s = self.m(l);
                        for i in 0..2 {
                            for j in 0..2 {
                                if s.m[j][i].is_zero() {
                                    continue;
                                }
                                let d = f.derivative(vars[a][j]);
                                out.add_assign(&d.mul_monomial(&Monomial::var(vars[a + l][i]), &(-&s.m[j][i])));
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// `(r)^i_k η^{kj}` as a matrix indexed `[i][j]`.
fn r_upper(r: &Mat2, eta_inv: &Mat2) -> Mat2 {
    r.mul(eta_inv)
}

/// Window of the `R̂` flow.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlowWindow {
    pub genus_max: u32,
    pub d_max: u32,
    pub phi_max: u32,
    pub index_max: u32,
}

impl FlowWindow {
    /// Smallest window producing every stable `(g, n)` in `targets`.
    pub fn for_targets(targets: &[(u32, u32)]) -> FlowWindow {
        let stable: Vec<(u32, u32)> = targets.iter().copied().filter(|(g, n)| 2 * *g + *n > 2).collect();
        let genus_max = stable.iter().map(|t| t.0).max().unwrap_or(0);
        let d_max = stable.iter().map(|(g, n)| 3 * g + n - 3).max().unwrap_or(0);
        let phi_max = stable.iter().map(|(g, n)| 4 * g + 2 * n - 3).max().unwrap_or(0);
        let index_max = (2 * genus_max + phi_max).saturating_sub(3);
        FlowWindow { genus_max, d_max, phi_max, index_max }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Stats {
    g: i64,
    n: i64,
    d: i64,
}

struct CanonFrame {
    vars: Vec<[Var; 2]>,
    index: FxHashMap<Var, (usize, usize)>,
}

impl CanonFrame {
    fn new(index_max: u32) -> CanonFrame {
        let vars: Vec<[Var; 2]> = (0..=index_max as usize).map(|a| [Var::canon(1, a), Var::canon(2, a)]).collect();
        let mut index = FxHashMap::default();
        for (a, pair) in vars.iter().enumerate() {
            index.insert(pair[0], (0, a));
            index.insert(pair[1], (1, a));
        }
        CanonFrame { vars, index }
    }

    fn stats(&self, m: &Monomial) -> Stats {
        let mut n = 0;
        let mut sa = 0;
        let mut e = 0;
        for (v, k) in m.pairs() {
            if let Some((_, a)) = self.index.get(&v) {
                n += k as i64;
                sa += (*a as i64) * k as i64;
            } else {
                e = k as i64;
            }
        }
        let g = (e + 2) / 2;
        Stats { g, n, d: 3 * g - 3 + n - sa }
    }
}

fn admissible(s: Stats, w: &FlowWindow) -> bool {
    s.g <= w.genus_max as i64 && s.d <= w.d_max as i64 && s.g + s.n + s.d <= w.phi_max as i64 && s.d >= 0
}

type Terms = FxHashMap<Monomial, Scalar>;

fn push(out: &mut Terms, m: Monomial, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let slot = out.entry(m).or_default();
    *slot = &*slot + &c;
}

fn flow_step(
    frame: &CanonFrame,
    w: &FlowWindow,
    r: &[Mat2],
    dinv: &[Scalar; 2],
    gs: &[Terms],
) -> Terms {
    let n = gs.len() - 1;
    let cur = &gs[n];
    let eps = Var::eps();
    let mut out: Terms = FxHashMap::default();
    let top = frame.vars.len();
    let rk = |l: usize| -> Mat2 { r.get(l).cloned().unwrap_or_default() };
    for (m, c) in cur {
        let st = frame.stats(m);
        let tv: Vec<(usize, usize, i32)> = m
            .pairs()
            .filter_map(|(v, e)| frame.index.get(&v).map(|(i, a)| (*i, *a, e)))
            .collect();
        // linear part
        for &(j, b, e) in &tv {
            let base = m.with_exponent(frame.vars[b][j], e - 1);
            let ce = c.scale(&Q::from_int(e as i64));
            for l in 1..=b {
                let a = b - l;
                let rl = rk(l);
                for i in 0..2 {
                    let rji = &rl.m[j][i];
                    if rji.is_zero() {
                        continue;
                    }
                    let nm = base.mul(&Monomial::var(frame.vars[a][i]));
                    if admissible(frame.stats(&nm), w) {
                        push(&mut out, nm, -&(&ce * rji));
                    }
                    if a == 1 && admissible(frame.stats(&base), w) {
                        push(&mut out, base.clone(), &(&ce * rji) * &dinv[i]);
                    }
                }
            }
        }
        // second derivatives
        if st.d + 1 > w.d_max as i64 || st.g + 1 > w.genus_max as i64 {
            continue;
        }
        for (x, &(i, a, ea)) in tv.iter().enumerate() {
            for (y, &(j, b, _)) in tv.iter().enumerate() {
                if x == y && ea < 2 {
                    continue;
                }
                if a + b + 1 >= r.len() {
                    continue;
                }
                let k = &rk(a + b + 1).m[i][j];
                if k.is_zero() {
                    continue;
                }
                let m1 = m.with_exponent(frame.vars[a][i], ea - 1);
                let e2 = m1.exponent(frame.vars[b][j]);
                let m2 = m1.with_exponent(frame.vars[b][j], e2 - 1);
                let m2 = m2.with_exponent(eps, m.exponent(eps) + 2);
                if !admissible(frame.stats(&m2), w) {
                    continue;
                }
                let sign = if b % 2 == 0 { 1 } else { -1 };
                let coef = c.scale(&Q::new(sign * ea as i64 * e2 as i64, 2));
                push(&mut out, m2, &coef * k);
            }
        }
    }
    // products of first derivatives
    for p in 0..=n {
        let q = n - p;
        for (m1, c1) in &gs[p] {
            let s1 = frame.stats(m1);
            for (m2, c2) in &gs[q] {
                let s2 = frame.stats(m2);
                let g = s1.g + s2.g;
                if g > w.genus_max as i64 || s1.d + s2.d + 1 > w.d_max as i64 {
                    continue;
                }
                if s1.g + s1.n + s1.d + s2.g + s2.n + s2.d - 1 > w.phi_max as i64 {
                    continue;
                }
                for (v1, e1) in m1.pairs() {
                    let Some(&(i, a)) = frame.index.get(&v1) else { continue };
                    for (v2, e2) in m2.pairs() {
                        let Some(&(j, b)) = frame.index.get(&v2) else { continue };
                        if a + b + 1 >= r.len() || a + b + 1 > top + top {
                            continue;
                        }
                        let k = &rk(a + b + 1).m[i][j];
                        if k.is_zero() {
                            continue;
                        }
                        let d1 = m1.with_exponent(v1, e1 - 1);
                        let d2 = m2.with_exponent(v2, e2 - 1);
                        let mut nm = d1.mul(&d2);
                        nm = nm.with_exponent(eps, m1.exponent(eps) + m2.exponent(eps) + 2);
                        if !admissible(frame.stats(&nm), w) {
                            continue;
                        }
                        let sign = if b % 2 == 0 { 1 } else { -1 };
                        let coef = &(c1 * c2).scale(&Q::new(sign * e1 as i64 * e2 as i64, 2)) * k;
                        push(&mut out, nm, coef);
                    }
                }
            }
        }
    }
    let inv = Q::from_int(n as i64 + 1).recip();
    out.into_iter().filter(|(_, c)| !c.is_zero()).map(|(m, c)| (m, c.scale(&inv))).collect()
}

fn to_series(t: Terms) -> Series {
    let tr = Truncation::none();
    let mut s = Series::zero(&tr);
    for (m, c) in t {
        s.add_term(m, c);
    }
    s
}

/// `log ᵗR̂ ∏_i τ(Δ_i^{1/2} T^i, Δ_i ε²)` in the canonical times `T^i_a`.
///
/// `r_override` replaces `log R` (used to check that `R = Id` is inert).
pub fn ancestor_canonical(p: &FrobeniusPoint, w: &FlowWindow, r_override: Option<&[Mat2]>) -> Result<Series, GiventalError> {
    let frame = CanonFrame::new(w.index_max);
    let order = (w.d_max as usize + 2).max(2);
    let r: Vec<Mat2> = match r_override {
        Some(r) => r.to_vec(),
        None => r_matrix(p, order)?.series().log().coeffs,
    };
    let roots = p.delta_roots();
    let dinv = p.delta_inv_roots();
    let tr = Truncation::none();
    let n_max: Vec<u32> = (0..=w.genus_max).map(|g| w.phi_max.saturating_sub(g)).collect();
    let window = TauWindow { genus_max: w.genus_max, n_max };
    let mut g0: Terms = FxHashMap::default();
    for i in 0..2 {
        let vars: Vec<Var> = frame.vars.iter().map(|pair| pair[i]).collect();
        let f = tau_log(&window, &vars, &roots[i], &tr);
        for (m, c) in f.iter() {
            if admissible(frame.stats(m), w) {
                push(&mut g0, m.clone(), c.clone());
            }
        }
    }
    let mut gs = vec![g0];
    loop {
        let next = flow_step(&frame, w, &r, &dinv, &gs);
        if next.is_empty() {
            break;
        }
        gs.push(next);
    }
    let mut total: Terms = FxHashMap::default();
    for g in gs {
        for (m, c) in g {
            push(&mut total, m, c);
        }
    }
    Ok(to_series(total.into_iter().filter(|(_, c)| !c.is_zero()).collect()))
}

/// Keeps the terms of a series in the variables `vars` whose `(g, n)` is listed.
fn restrict_gn(f: &Series, targets: &[(u32, u32)], is_time: &dyn Fn(Var) -> bool) -> Series {
    f.filter(|m| {
        let e = m.exponent(Var::eps());
        let n: i32 = m.pairs().filter(|(v, _)| is_time(*v)).map(|(_, k)| k).sum();
        let g = (e + 2) / 2;
        (e + 2) % 2 == 0 && targets.iter().any(|(tg, tn)| *tg as i32 == g && *tn as i32 == n)
    })
}

/// Which descendent time variables survive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeSlots {
    All,
    /// Only `t^1_a` (the `t^2` slots sit at the expansion point).
    FirstOnly,
}

/// A potential as a truncated series in `t^α_a` (shifted to the base point).
#[derive(Clone, Debug)]
pub struct PotentialSeries {
    pub log: Series,
    pub descendent: bool,
    pub psi: Scalar,
    pub base: FrobeniusPoint,
    pub index_max: u32,
    pub targets: Vec<(u32, u32)>,
}

impl PotentialSeries {
    /// `∂^n log / ∂t^{α_1}_{a_1}⋯` at zero for the `ε^{2g−2}` part.
    pub fn correlator(&self, genus: u32, insertions: &[(usize, usize)]) -> Result<Scalar, GiventalError> {
        let n = insertions.len() as u32;
        if !self.targets.contains(&(genus, n)) {
            return Err(GiventalError::CapStarvation(genus, n));
        }
        if insertions.iter().any(|(_, a)| *a as u32 > self.index_max) {
            return Err(GiventalError::CapStarvation(genus, n));
        }
        let mut pairs: Vec<(Var, i32)> = vec![(Var::eps(), 2 * genus as i32 - 2)];
        let mut mult: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for (alpha, a) in insertions {
            *mult.entry((*alpha, *a)).or_default() += 1;
        }
        let mut sym = Q::one();
        for ((alpha, a), k) in &mult {
            pairs.push((Var::t(*alpha, *a), *k as i32));
            sym = &sym * &crate::rational::factorial(*k);
        }
        Ok(self.log.coefficient(&Monomial::from_pairs(&pairs)).scale(&sym))
    }
}

/// `log 𝒜` in the flat times at `(0,1)`: `T^i_a = Σ_α Ψ_{iα} t^α_a`.
pub fn ancestor_potential(targets: &[(u32, u32)], index_max: u32, base: &FrobeniusPoint) -> Result<PotentialSeries, GiventalError> {
    let w = FlowWindow::for_targets(targets);
    let can = ancestor_canonical(base, &w, None)?;
    let frame = CanonFrame::new(w.index_max);
    let can = restrict_gn(&can, targets, &|v| frame.index.contains_key(&v));
    let psi = base.psi();
    let mut map: FxHashMap<Var, Vec<(Var, Scalar)>> = FxHashMap::default();
    for a in 0..=w.index_max as usize {
        for i in 0..2 {
            let image = if a as u32 <= index_max {
                (0..2).map(|al| (Var::t(al + 1, a), psi.m[i][al].clone())).collect()
            } else {
                Vec::new()
            };
            map.insert(frame.vars[a][i], image);
        }
    }
    Ok(PotentialSeries {
        log: can.linear_change(&map),
        descendent: false,
        psi: Scalar::zero(),
        base: base.clone(),
        index_max,
        targets: targets.to_vec(),
    })
}

/// `W_{(α,a),(β,b)} = [z^a w^b] (Σ S_m^ᵀ η S_n z^m w^n − η)/(z + w)`.
pub fn w_kernel(s: &[Mat2], k_max: usize) -> Vec<Vec<Mat2>> {
    assert!(s.len() >= 2 * k_max + 3, "S table too short");
    let eta = Mat2::eta();
    let x = |m: usize, n: usize| -> Mat2 {
        let v = s[m].transpose().mul(&eta).mul(&s[n]);
        if m == 0 && n == 0 {
            v.sub(&eta)
        } else {
            v
        }
    };
    let mut w = vec![vec![Mat2::zero(); k_max + 1]; k_max + 1];
    for (a, row) in w.iter_mut().enumerate() {
        for (b, slot) in row.iter_mut().enumerate() {
            let mut acc = Mat2::zero();
            for j in 0..=b {
                let t = x(a + 1 + j, b - j);
                acc = if j % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
            }
            *slot = acc;
        }
    }
    w
}

/// Divisibility defect `Σ_j (−1)^j X_{j, N−j}` of the numerator by `z + w`.
pub fn w_divisibility_defect(s: &[Mat2], total: usize) -> Mat2 {
    let eta = Mat2::eta();
    let mut acc = Mat2::zero();
    for j in 0..=total {
        let mut v = s[j].transpose().mul(&eta).mul(&s[total - j]);
        if total == 0 {
            v = v.sub(&eta);
        }
        acc = if j % 2 == 0 { acc.add(&v) } else { acc.sub(&v) };
    }
    acc
}

/// `[ε^{-2} t^1_a] log 𝒟 = η_{1α}(S_{a+2})^α_1`.
pub fn unstable_01(a: usize, psi: &Scalar) -> Scalar {
    let s = s_matrix(&FrobeniusPoint::special(), a + 2, psi);
    Mat2::eta().mul(s.get(a + 2)).m[0][0].clone()
}

/// `[ε^{-2} t^1_a t^1_b]`-correlator from the quadratic kernel.
pub fn unstable_02(a: usize, b: usize, psi: &Scalar) -> Scalar {
    let k = a.max(b);
    let s = s_matrix(&FrobeniusPoint::special(), 2 * k + 3, psi);
    w_kernel(&s.mats, k)[a][b].m[0][0].clone()
}

/// `[z^a w^b]` of `Σ z^{2p}w^{2q+1}/((p!)²q!(q+1)!) + z^{2p+1}w^{2q}/(p!(p+1)!(q!)²)`
/// divided by `z + w`.
pub fn two_point_explicit(a: usize, b: usize) -> Q {
    let f = crate::rational::factorial;
    let y = |m: usize, n: usize| -> Q {
        match (m % 2, n % 2) {
            (0, 1) => {
                let (p, q) = ((m / 2) as u32, (n / 2) as u32);
                (&(&f(p) * &f(p)) * &(&f(q) * &f(q + 1))).recip()
            }
            (1, 0) => {
                let (p, q) = ((m / 2) as u32, (n / 2) as u32);
                (&(&f(p) * &f(p + 1)) * &(&f(q) * &f(q))).recip()
            }
            _ => Q::zero(),
        }
    };
    let mut acc = Q::zero();
    for j in 0..=b {
        let t = y(a + 1 + j, b - j);
        acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
    }
    acc
}

/// `log 𝒟` around `t^1_0 = 0, t^2_0 = 1` for the requested `(g, n)` blocks.
///
/// Stable blocks come from the ancestor potential through
/// `T^i_b = Σ_ℓ (Ψ S_ℓ)_{iα} t^α_{b+ℓ}`; the `(0,2)` block is `½ε^{-2} W(t,t)` and
/// the `(0,1)` block is `ε^{-2} W_{(1,0),(β,a+1)} t^β_a`. Constants are dropped.
pub fn descendent_potential(
    targets: &[(u32, u32)],
    index_max: u32,
    psi: &Scalar,
    slots: TimeSlots,
) -> Result<PotentialSeries, GiventalError> {
    let keep = move |al: usize, _a: usize| match slots {
        TimeSlots::All => true,
        TimeSlots::FirstOnly => al == 0,
    };
    descendent_potential_in(targets, index_max, psi, &keep)
}

/// [`descendent_potential`] keeping only the times `t^{α+1}_a` with `keep(α, a)`.
pub fn descendent_potential_in(
    targets: &[(u32, u32)],
    index_max: u32,
    psi: &Scalar,
    keep: &(dyn Fn(usize, usize) -> bool + Sync),
) -> Result<PotentialSeries, GiventalError> {
    let base = FrobeniusPoint::special();
    let k = index_max as usize;
    let w = FlowWindow::for_targets(targets);
    let s_tab = s_matrix(&base, 2 * k + 5, psi).mats;
    let can = ancestor_canonical(&base, &w, None)?;
    let frame = CanonFrame::new(w.index_max);
    let can = restrict_gn(&can, targets, &|v| frame.index.contains_key(&v));
    let psi_m = base.psi();
    let alphas: Vec<usize> = vec![0, 1];
    let mut map: FxHashMap<Var, Vec<(Var, Scalar)>> = FxHashMap::default();
    for b in 0..=w.index_max as usize {
        for i in 0..2 {
            let mut lin = Vec::new();
            for l in 0..=(k.saturating_sub(b)) {
                if b + l > k {
                    break;
                }
                let ps = psi_m.mul(&s_tab[l]);
                for &al in &alphas {
                    if keep(al, b + l) && !ps.m[i][al].is_zero() {
                        lin.push((Var::t(al + 1, b + l), ps.m[i][al].clone()));
                    }
                }
            }
            map.insert(frame.vars[b][i], lin);
        }
    }
    let mut log = can.linear_change(&map);
    let tr = log.truncation().clone();
    let eps = Var::eps();
    let wk = w_kernel(&s_tab, k + 1);
    if targets.contains(&(0, 1)) {
        for a in 0..=k {
            for &be in alphas.iter().filter(|&&be| keep(be, a)) {
                let c = wk[0][a + 1].m[0][be].clone();
                log.add_assign(&Series::term(Monomial::from_pairs(&[(eps, -2), (Var::t(be + 1, a), 1)]), c, &tr));
            }
        }
    }
    if targets.contains(&(0, 2)) {
        for a in 0..=k {
            for b in 0..=k {
                for &al in alphas.iter().filter(|&&al| keep(al, a)) {
                    for &be in alphas.iter().filter(|&&be| keep(be, b)) {
                        let c = wk[a][b].m[al][be].scale(&Q::new(1, 2));
                        let m = Monomial::from_pairs(&[(eps, -2), (Var::t(al + 1, a), 1)]).mul(&Monomial::var(Var::t(be + 1, b)));
                        log.add_assign(&Series::term(m, c, &tr));
                    }
                }
            }
        }
    }
    Ok(PotentialSeries { log, descendent: true, psi: psi.clone(), base, index_max, targets: targets.to_vec() })
}

/// One entry of a descendent listing.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoefficientRow {
    pub genus: u32,
    pub monomial: BTreeMap<String, i32>,
    pub value: String,
}

/// Rows of `log 𝒟` sorted by genus and monomial.
pub fn coefficient_rows(p: &PotentialSeries) -> Vec<CoefficientRow> {
    let eps = Var::eps();
    let mut rows: Vec<CoefficientRow> = p
        .log
        .sorted_terms()
        .into_iter()
        .map(|(m, c)| {
            let e = m.exponent(eps);
            let monomial: BTreeMap<String, i32> = m.pairs().filter(|(v, _)| *v != eps).map(|(v, k)| (v.name(), k)).collect();
            CoefficientRow { genus: ((e + 2) / 2) as u32, monomial, value: c.to_text() }
        })
        .collect();
    rows.sort_by(|a, b| a.genus.cmp(&b.genus).then_with(|| a.monomial.cmp(&b.monomial)));
    rows
}

/// Fails on the first coefficient with an `i` or `√2` part.
pub fn check_rational(p: &PotentialSeries) -> Result<(), GiventalError> {
    for (m, c) in p.log.iter() {
        if !c.is_real_rational_part_only() {
            return Err(GiventalError::Irrational(c.to_text(), format!("{m:?}")));
        }
    }
    Ok(())
}

/// `log C` at the point, for reports.
pub fn log_prefactor(p: &FrobeniusPoint) -> Scalar {
    crate::calibration::c_prefactor(p)
}

/// The canonical-frame variables up to `index_max`, as `[a][i]`.
pub fn canonical_vars(index_max: u32) -> Vec<[Var; 2]> {
    CanonFrame::new(index_max).vars
}

/// The flat-frame variables up to `index_max`, as `[a][α]`.
pub fn flat_vars(index_max: u32) -> Vec<[Var; 2]> {
    (0..=index_max as usize).map(|a| [Var::t(1, a), Var::t(2, a)]).collect()
}

/// `Truncation::none()` re-exported for callers building test functions.
pub fn free_truncation() -> Arc<Truncation> {
    Truncation::none()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_values() {
        let z = Scalar::zero();
        assert_eq!(unstable_01(1, &z), Scalar::frac(1, 2));
        assert_eq!(unstable_01(3, &z), Scalar::frac(1, 12));
        assert_eq!(unstable_01(2, &z), Scalar::zero());
    }

    #[test]
    fn two_point_matches_explicit() {
        let z = Scalar::zero();
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(unstable_02(a, b, &z), Scalar::rat(two_point_explicit(a, b)), "({a},{b})");
            }
        }
    }

    #[test]
    fn genus_one_one_point() {
        let d = descendent_potential(&[(1, 1)], 3, &Scalar::zero(), TimeSlots::FirstOnly).unwrap();
        assert_eq!(d.correlator(1, &[(1, 3)]).unwrap(), Scalar::frac(1, 24));
    }
}
