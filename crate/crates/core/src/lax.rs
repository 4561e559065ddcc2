//! Extended Toda and extended NLS data extracted from `𝒟`.
//!
//! `log 𝒟` is expanded around `t = 0` with `x = t^2_0` and `X = t^1_0` kept as
//! variables together with `t^1_1` and `t^2_1`. Everything is exact up to the
//! filtration weight (time degree plus `ε`-power, minus operator order for
//! `D` and, where used, `Λ`).
//!
//! Toda quantities follow the `𝒟′(x ± ε/2)` convention
//! (`v`, `u`, `log Q = log 𝒟′(x+ε/2) − log 𝒟′(x−ε/2)`, `P^+`); NLS quantities use
//! `𝒟″(x)` (`φ`, `ρ`, `P`, `P̃`), which is the same data moved by `ε/2`.

use crate::givental::{descendent_potential_in, GiventalError};
use crate::operators::{
    apply_eps_dx_series, bernoulli_coefficients, big_x_var, eps_d, free, keep_weight, min_weight, shift_x, weight, x_var, Operator,
    OperatorError, EXACT,
};
use crate::rational::{factorial, harmonic, Q};
use crate::scalar::Scalar;
use crate::series::{Cap, Monomial, Series, SeriesError, Truncation, Var};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LaxError {
    #[error(transparent)]
    Givental(#[from] GiventalError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error("constant term {0} where zero was expected")]
    Constant(String),
    #[error("unsupported flow {0}")]
    Flow(String),
    #[error("weight {0} outside 1..=6")]
    Weight(i64),
}

/// Caps of a Lax run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaxCaps {
    /// Largest filtration weight of `log 𝒟` kept.
    pub weight_max: u32,
}

impl Default for LaxCaps {
    fn default() -> Self {
        LaxCaps { weight_max: 4 }
    }
}

impl LaxCaps {
    /// Weight `degree_max + eps_hi`, the largest weight that fits both caps.
    pub fn from_degree_eps(degree_max: u32, eps_window: (i32, i32)) -> LaxCaps {
        LaxCaps { weight_max: (degree_max as i64 + eps_window.1.max(0) as i64).max(1) as u32 }
    }
}

/// A flow `∂/∂q^i_ℓ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Flow {
    pub i: u8,
    pub l: u8,
}

impl Flow {
    pub const fn new(i: u8, l: u8) -> Flow {
        Flow { i, l }
    }

    pub fn all() -> Vec<Flow> {
        vec![Flow::new(1, 0), Flow::new(1, 1), Flow::new(2, 0), Flow::new(2, 1)]
    }

    /// The time variable the flow differentiates in.
    pub fn var(&self) -> Result<Var, LaxError> {
        match (self.i, self.l) {
            (1, 0) => Ok(big_x_var()),
            (2, 0) => Ok(x_var()),
            (1 | 2, 1) => Ok(Var::t(self.i as usize, 1)),
            _ => Err(LaxError::Flow(self.to_string())),
        }
    }

    pub fn parse(text: &str) -> Option<Flow> {
        let (a, b) = text.trim().split_once(':')?;
        let f = Flow::new(a.trim().parse().ok()?, b.trim().parse().ok()?);
        f.var().ok().map(|_| f)
    }
}

impl fmt::Display for Flow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.i, self.l)
    }
}

/// `exp f` for `f` without constant term, up to `λ`-weighted weight `bound`.
fn exp_bounded(f: &Series, bound: i64) -> Result<Series, LaxError> {
    if !f.constant_term().is_zero() {
        return Err(LaxError::Constant(f.constant_term().to_text()));
    }
    let lam = Var::lambda();
    let mut vars: BTreeSet<Var> = BTreeSet::new();
    for (m, _) in f.iter() {
        for (v, _) in m.pairs() {
            vars.insert(v);
        }
    }
    let weights: Vec<(Var, i32)> = vars.into_iter().map(|v| (v, if v == lam { -1 } else { 1 })).collect();
    let tr = Truncation::new(vec![Cap::new("weight", weights, bound)]);
    Ok(f.with_truncation(&tr).exp()?.with_truncation(free()))
}

/// Weight of a symbol monomial, `λ^{-1}` counting `+1`.
pub fn symbol_weight(m: &Monomial) -> i64 {
    weight(m) - 2 * m.exponent(Var::lambda()) as i64
}

fn scalar_series(c: Scalar) -> Series {
    Series::constant(c, free())
}

/// The times kept by the frame.
pub fn frame_times() -> Vec<Var> {
    vec![big_x_var(), x_var(), Var::t(1, 1), Var::t(2, 1)]
}

/// `log 𝒟` with the derived Toda and NLS data.
#[derive(Clone, Debug)]
pub struct TauFrame {
    pub caps: LaxCaps,
    pub psi: Scalar,
    pub weight: i64,
    /// `log 𝒟` with `t^1_ℓ` up to `ℓ = weight + 1`.
    pub log_tau: Series,
    /// `log 𝒟` on the frame times only.
    pub log_tau0: Series,
    pub v: Series,
    pub u: Series,
    pub exp_u: Series,
    pub exp_minus_u: Series,
    /// `log Q` for `Q = 𝒟′(x+ε/2)/𝒟′(x−ε/2)`.
    pub log_q: Series,
    pub phi: Series,
    pub rho: Series,
    /// Symbol of `P`, exact to symbol weight `weight + 1`.
    pub p_symbol: Series,
    /// Symbol of `P̃`.
    pub pt_symbol: Series,
}

impl TauFrame {
    pub fn new(caps: &LaxCaps, psi: &Scalar) -> Result<TauFrame, LaxError> {
        let w = caps.weight_max as i64;
        if !(1..=6).contains(&w) {
            return Err(LaxError::Weight(w));
        }
        let mut targets = Vec::new();
        for g in 0..=((w + 1) / 2) as u32 {
            for n in 1..=(w + 2) as u32 {
                if 2 * g as i64 - 2 + n as i64 <= w {
                    targets.push((g, n));
                }
            }
        }
        let keep = |al: usize, a: usize| al == 0 || a <= 1;
        let pot = descendent_potential_in(&targets, (w + 1) as u32, psi, &keep)?;
        let log_tau = keep_weight(&pot.log.with_truncation(free()), w);
        let frame: BTreeSet<Var> = frame_times().into_iter().chain([Var::eps()]).collect();
        let log_tau0 = log_tau.filter(|m| m.pairs().all(|(v, _)| frame.contains(&v)));
        let sh = |s: Q| shift_x(&log_tau0, &s);
        let (fp, fm, fmm) = (sh(Q::new(1, 2)), sh(Q::new(-1, 2)), sh(Q::new(-3, 2)));
        let psi_s = scalar_series(psi.clone());
        let v = keep_weight(&eps_d(&fp.sub(&fm), big_x_var()), w);
        let u = keep_weight(&fp.sub(&fm.scale_q(&Q::from_int(2))).add(&fmm).sub(&psi_s), w);
        let exp_u = exp_bounded(&u, w)?;
        let exp_minus_u = exp_bounded(&u.neg(), w)?;
        let log_q = keep_weight(&fp.sub(&fm), w);
        let (f1, fm1) = (sh(Q::one()), sh(Q::from_int(-1)));
        let phi = keep_weight(&eps_d(&log_tau0.sub(&fm1), big_x_var()), w);
        let log_rho = keep_weight(&f1.sub(&log_tau0.scale_q(&Q::from_int(2))).add(&fm1).sub(&psi_s), w);
        let rho = exp_bounded(&log_rho, w)?;
        let p_symbol = Self::dressing_symbol(&log_tau, &log_tau0, w, -1)?;
        let pt_symbol = Self::dressing_symbol(&log_tau, &log_tau0, w, 1)?;
        Ok(TauFrame {
            caps: caps.clone(),
            psi: psi.clone(),
            weight: w,
            log_tau,
            log_tau0,
            v,
            u,
            exp_u,
            exp_minus_u,
            log_q,
            phi,
            rho,
            p_symbol,
            pt_symbol,
        })
    }

    /// `exp(log 𝒟(t^1_ℓ + sign·ε ℓ!/λ^{ℓ+1}) − log 𝒟)` on the frame times.
    fn dressing_symbol(log_tau: &Series, log_tau0: &Series, w: i64, sign: i64) -> Result<Series, LaxError> {
        let eps = Var::eps();
        let lam = Var::lambda();
        let mut subs = Vec::new();
        for l in 0..=(w + 1) as usize {
            let t = Var::t(1, l);
            let c = Scalar::rat(&factorial(l as u32) * &Q::from_int(sign));
            let shift = Series::term(Monomial::from_pairs(&[(eps, 1), (lam, -(l as i32) - 1)]), c, free());
            let value = if l <= 1 { Series::var(t, free()).add(&shift) } else { shift };
            subs.push((t, value));
        }
        let moved = log_tau.substitute_many(&subs)?;
        let g = moved.sub(log_tau0).filter(|m| symbol_weight(m) <= w + 1);
        exp_bounded(&g, w + 1)
    }

    pub fn symbol_prec(&self) -> i64 {
        self.weight + 1
    }

    /// `L = Λ + v + e^u Λ^{-1}`.
    pub fn lax_l(&self, shift_weight: i64) -> Operator {
        Operator::from_terms(
            [((0, 1), scalar_series(Scalar::one())), ((0, 0), self.v.clone()), ((0, -1), self.exp_u.clone())],
            self.weight,
            shift_weight,
        )
    }

    /// `P^+ = Σ p_k(x − ε/2) Λ^{-k}`, shift weight 1.
    pub fn p_plus(&self) -> Operator {
        Operator::from_left_symbol(&self.p_symbol, false, self.symbol_prec(), 1).conjugate_shift(&Q::new(-1, 2))
    }

    /// `P(D)`.
    pub fn p_operator(&self) -> Operator {
        Operator::from_left_symbol(&self.p_symbol, true, self.symbol_prec(), 1)
    }

    /// `P̃(D)`.
    pub fn pt_operator(&self) -> Operator {
        Operator::from_left_symbol(&self.pt_symbol, true, self.symbol_prec(), 1)
    }

    /// `w_{-k}` for `k = 1..=k_max` from `−εP^+_x (P^+)^{-1} = 2Σ w_k Λ^k`,
    /// each with the weight up to which it is exact.
    pub fn w_negative(&self, k_max: i32) -> Result<Vec<(Series, i64)>, LaxError> {
        let pp = self.p_plus();
        let a = pp.eps_derivative(x_var()).mul(&pp.inverse()?).scale_q(&Q::new(-1, 2));
        Ok((1..=k_max)
            .map(|k| {
                let b = a.prec() - k as i64;
                (keep_weight(&a.coeff(0, -k), b), b)
            })
            .collect())
    }

    /// `w_0 = ψ/2 + (ε/2)Λ(Λ−1)^{-1}∂_x u`.
    pub fn w0_bernoulli(&self) -> Series {
        let b = bernoulli_coefficients(self.weight as usize + 4, true);
        scalar_series(self.psi.scale(&Q::new(1, 2))).add(&apply_eps_dx_series(&self.u, &b).scale_q(&Q::new(1, 2)))
    }

    /// `w_0 = (ε/2) ∂_x log Q`.
    pub fn w0_from_q(&self) -> Series {
        eps_d(&self.log_q, x_var()).scale_q(&Q::new(1, 2))
    }

    /// `(ε/2)(Λ−1)^{-1}∂_x v`.
    pub fn w_minus1_bernoulli(&self) -> Series {
        let b = bernoulli_coefficients(self.weight as usize + 4, false);
        apply_eps_dx_series(&self.v, &b).scale_q(&Q::new(1, 2))
    }

    /// `w_k = ∏_{j=1}^k e^{-u(x+jε)} · w_{-k}(x+kε)` with its exact weight.
    pub fn w_positive(&self, k: i32, w_neg: &[(Series, i64)]) -> (Series, i64) {
        let (wk, b) = &w_neg[(k - 1) as usize];
        let bound = (*b).min(self.weight);
        let mut acc = shift_x(wk, &Q::from_int(k as i64));
        for j in 1..=k {
            let e = shift_x(&self.exp_minus_u, &Q::from_int(j as i64));
            acc = keep_weight(&acc.mul(&e), bound);
        }
        (acc, bound)
    }

    /// `log L` restricted to `Λ^{-k_neg..=k_pos}`, shift weight 0.
    pub fn log_l(&self, k_neg: i32, k_pos: i32) -> Result<Operator, LaxError> {
        let kk = k_neg.max(k_pos).max(1);
        let wn = self.w_negative(kk)?;
        let mut terms = vec![((0, 0), self.w0_bernoulli())];
        let mut prec = self.weight;
        for k in 1..=k_neg {
            let (s, b) = &wn[(k - 1) as usize];
            terms.push(((0, -k), s.clone()));
            prec = prec.min(*b);
        }
        for k in 1..=k_pos {
            let (s, b) = self.w_positive(k, &wn);
            terms.push(((0, k), s));
            prec = prec.min(b);
        }
        Ok(Operator::from_terms(terms, prec, 0))
    }

    /// `Q(x)/Q(x − kε) · e^{-kψ}`.
    pub fn q_ratio(&self, k: i32) -> Result<Series, LaxError> {
        let d = self.log_q.sub(&shift_x(&self.log_q, &Q::from_int(-(k as i64))));
        let c = d.constant_term();
        let expect = self.psi.scale(&Q::from_int(k as i64));
        if c != expect {
            return Err(LaxError::Constant(c.to_text()));
        }
        exp_bounded(&d.sub(&scalar_series(expect)), self.weight)
    }

    /// `σ(a Λ^k) = Q (e^ψ Λ)^{-k} a Q^{-1}` termwise (shift weight 0).
    pub fn sigma(&self, a: &Operator) -> Result<Operator, LaxError> {
        let mut acc = Operator::zero(a.prec().min(self.weight), 0);
        for (&(d, k), f) in a.terms() {
            assert_eq!(d, 0, "sigma acts on difference operators");
            let r = self.q_ratio(k)?;
            let c = r.mul(&shift_x(f, &Q::from_int(-(k as i64))));
            acc = acc.add(&Operator::from_terms([((0, -k), c)], acc.prec(), 0));
        }
        Ok(acc)
    }

    /// `S̃ = D − φ`.
    pub fn s_tilde(&self) -> Operator {
        Operator::from_terms([((1, 0), scalar_series(Scalar::one())), ((0, 0), self.phi.neg())], self.weight, 1)
    }

    /// `T̃ = D² − Dφ + ρ`.
    pub fn t_tilde(&self) -> Operator {
        let d = Operator::d_power(1, 1);
        let phi = Operator::function(&self.phi, self.weight, 1);
        let rho = Operator::function(&self.rho, self.weight, 1);
        Operator::d_power(2, 1).sub(&d.mul(&phi)).add(&rho)
    }

    /// `𝓛 = D + ρ(D − φ)^{-1}`.
    pub fn nls_l(&self) -> Result<Operator, LaxError> {
        let rho = Operator::function(&self.rho, self.weight, 1);
        Ok(Operator::d_power(1, 1).add(&rho.mul(&self.s_tilde().inverse()?)))
    }

    /// `(log 𝓛)_−` from the `w_{-k}`, `k ≤ k_max`, moved to the `𝒟″` convention:
    /// `Σ_k w_{-k} Λ^{-k}(Λ(D − φ(x−ε))^{-1})^k`.
    pub fn log_nls_minus(&self, k_max: i32) -> Result<Operator, LaxError> {
        let wn = self.w_negative(k_max)?;
        let phi82 = shift_x(&self.phi, &Q::new(-1, 2));
        let s_inv = Operator::from_terms([((1, 0), scalar_series(Scalar::one())), ((0, 0), phi82.neg())], self.weight, 0).inverse()?;
        let step = Operator::shift(1, 0).mul(&s_inv);
        let mut acc = Operator::zero(EXACT, 0);
        let mut power = Operator::one(0);
        for k in 1..=k_max {
            power = power.mul(&step);
            let (w, b) = &wn[(k - 1) as usize];
            let term = Operator::function(w, *b, 0).mul(&Operator::shift(-k, 0)).mul(&power);
            acc = acc.add(&term);
        }
        // the omitted summands k > k_max have weight ≥ k_max + 1
        let prec = acc.prec().min(k_max as i64);
        let moved = acc.terms().map(|(&(d, s), f)| ((d, s), shift_x(f, &Q::new(1, 2))));
        Ok(Operator::from_terms(moved, prec, 1))
    }
}

/// Outcome of one identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    /// Weight up to which both sides are exact.
    pub weight_checked: i64,
    /// Monomials on the left-hand side inside the checked weight.
    pub compared_terms: usize,
    pub residual_terms: usize,
    pub first_residual: Option<String>,
}

impl IdentityCheck {
    pub fn ok(&self) -> bool {
        self.residual_terms == 0
    }
}

fn fmt_term(key: Option<(i32, i32)>, m: &Monomial, c: &Scalar) -> String {
    match key {
        Some((d, s)) => format!("D^{d} L^{s}: {} * {m:?}", c.to_text()),
        None => format!("{} * {m:?}", c.to_text()),
    }
}

/// Compares two operators at the common precision.
pub fn compare_ops(name: &str, lhs: &Operator, rhs: &Operator) -> IdentityCheck {
    let prec = lhs.prec().min(rhs.prec());
    let (l, r) = (lhs.restrict(prec), rhs.restrict(prec));
    let res = l.sub(&r);
    let listing = res.listing();
    IdentityCheck {
        name: name.to_string(),
        weight_checked: prec,
        compared_terms: l.size(),
        residual_terms: listing.len(),
        first_residual: listing.first().map(|(k, m, c)| fmt_term(Some(*k), m, c)),
    }
}

/// Compares two series on monomials of weight `≤ bound`.
pub fn compare_series(name: &str, lhs: &Series, rhs: &Series, bound: i64) -> IdentityCheck {
    let l = keep_weight(lhs, bound);
    let r = keep_weight(rhs, bound);
    let res = l.sub(&r).sorted_terms();
    IdentityCheck {
        name: name.to_string(),
        weight_checked: bound,
        compared_terms: l.len(),
        residual_terms: res.len(),
        first_residual: res.first().map(|(m, c)| fmt_term(None, m, c)),
    }
}

/// A named group of identity checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaxReport {
    pub caps: LaxCaps,
    pub psi: String,
    pub checks: Vec<IdentityCheck>,
    /// Diagnostics that are reported but not asserted.
    pub diagnostics: Vec<IdentityCheck>,
}

impl LaxReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok())
    }

    pub fn check(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().chain(self.diagnostics.iter()).find(|c| c.name == name)
    }
}

/// `A^i_ℓ`, with `log L` passed in for `i = 2`.
pub fn a_operator(flow: Flow, l_op: &Operator, log_l: Option<&Operator>) -> Operator {
    let l = flow.l as u32;
    match flow.i {
        1 => l_op.pow(l + 1).scale_q(&factorial(l + 1).recip()),
        _ => {
            let log_l = log_l.expect("log L required");
            let shifted = log_l.sub(&Operator::monomial(Scalar::rat(harmonic(l)), 0, 0, l_op.shift_weight()));
            l_op.pow(l).mul(&shifted).scale_q(&(&Q::from_int(2) * &factorial(l).recip()))
        }
    }
}

/// Residual of `ε∂L/∂q^i_ℓ = [(A^i_ℓ)_+, L]` on the components `Λ^{-1..=1}`,
/// together with the `Λ^0` component of the right-hand side.
fn toda_flow(frame: &TauFrame, flow: Flow) -> Result<(IdentityCheck, Series, i64), LaxError> {
    let l_op = frame.lax_l(0);
    let log_l = if flow.i == 2 { Some(frame.log_l(1, 3)?) } else { None };
    let a = a_operator(flow, &l_op, log_l.as_ref());
    let rhs = a.plus_shift().shift_range(0, 2).commutator(&l_op).shift_range(-1, 1);
    let lhs = l_op.eps_derivative(flow.var()?);
    let chk = compare_ops(&format!("toda flow {flow}"), &lhs, &rhs);
    Ok((chk, rhs.coeff(0, 0), rhs.prec().min(lhs.prec())))
}

/// Extended Toda identities.
pub fn verify_toda(frame: &TauFrame, flows: &[Flow]) -> Result<LaxReport, LaxError> {
    let w = frame.weight;
    let mut checks = Vec::new();
    let mut diagnostics = Vec::new();

    let l1 = frame.lax_l(1);
    let pp = frame.p_plus();
    let dressed = pp.mul(&Operator::shift(1, 1)).mul(&pp.inverse()?);
    checks.push(compare_ops("dressing P+ L P+^-1 = L", &dressed, &l1));

    let q_prev = shift_x(&frame.log_q, &Q::from_int(-1));
    let psi_s = scalar_series(frame.psi.clone());
    let lhs = frame.u.add(&psi_s);
    checks.push(compare_series("u + psi = log Q - log Q(x-eps)", &lhs, &frame.log_q.sub(&q_prev), w));
    let ratio = frame.q_ratio(1)?;
    checks.push(compare_series("e^u = e^-psi Q/Q(x-eps)", &frame.exp_u, &ratio, w));
    checks.push(compare_series("w0 = (eps/2) Q^-1 Q_x", &frame.w0_bernoulli(), &frame.w0_from_q(), w));

    let wn = frame.w_negative(1)?;
    let (w1, b1) = &wn[0];
    let bern = frame.w_minus1_bernoulli();
    let eps = Var::eps();
    let low: Vec<i32> = {
        let mut es: Vec<i32> = keep_weight(w1, *b1).iter().map(|(m, _)| m.exponent(eps)).collect();
        es.sort();
        es.dedup();
        es.into_iter().take(2).collect()
    };
    let pick = |s: &Series| keep_weight(s, *b1).filter(|m| low.contains(&m.exponent(eps)));
    checks.push(compare_series("w_-1 = (eps/2)(L-1)^-1 v_x, lowest two eps orders", &pick(w1), &pick(&bern), *b1));
    diagnostics.push(compare_series("w_-1 = (eps/2)(L-1)^-1 v_x, all orders", w1, &bern, *b1));

    let sig_l = frame.sigma(&frame.lax_l(0))?;
    checks.push(compare_ops("sigma(L) = L", &sig_l, &frame.lax_l(0)));
    let l2 = frame.lax_l(0).pow(2);
    checks.push(compare_ops("sigma(L^2) = L^2", &frame.sigma(&l2)?, &l2));

    let x_big = big_x_var();
    let shift1 = shift_x(&frame.exp_u, &Q::one());
    checks.push(compare_series("eps v_X = (L-1) e^u", &eps_d(&frame.v, x_big), &shift1.sub(&frame.exp_u), w));
    let vprev = shift_x(&frame.v, &Q::from_int(-1));
    checks.push(compare_series("eps u_X = (1-L^-1) v", &eps_d(&frame.u, x_big), &frame.v.sub(&vprev), w));

    let results: Vec<Result<(Flow, IdentityCheck, Series, i64), LaxError>> =
        flows.par_iter().map(|f| toda_flow(frame, *f).map(|(c, s, p)| (*f, c, s, p))).collect();
    for r in results {
        let (flow, chk, rhs0, prec) = r?;
        checks.push(chk);
        if flow == Flow::new(2, 1) {
            let t21 = Var::t(2, 1);
            let direct = eps_d(&frame.v, t21);
            checks.push(compare_series("eps dv/dq2_1: Lax equation = direct", &rhs0, &direct, prec));
            let route_a = eps_d(&rhs0, x_big);
            let route_b = eps_d(&shift1.sub(&frame.exp_u), t21);
            checks.push(compare_series("flows 1:0 and 2:1 commute on v", &route_a, &route_b, prec));
        }
    }
    Ok(LaxReport { caps: frame.caps.clone(), psi: frame.psi.to_text(), checks, diagnostics })
}

/// Extended NLS identities.
pub fn verify_nls(frame: &TauFrame, flows: &[Flow]) -> Result<LaxReport, LaxError> {
    let w = frame.weight;
    let mut checks = Vec::new();
    let mut diagnostics = Vec::new();
    let x_big = big_x_var();

    checks.push(compare_series("phi(x) = v(x - eps/2)", &frame.phi, &shift_x(&frame.v, &Q::new(-1, 2)), w));
    checks.push(compare_series("rho(x) = e^u(x + eps/2)", &frame.rho, &shift_x(&frame.exp_u, &Q::new(1, 2)), w));
    let shift1 = shift_x(&frame.exp_u, &Q::one());
    checks.push(compare_series("eps v_X = (L-1) e^u", &eps_d(&frame.v, x_big), &shift1.sub(&frame.exp_u), w));
    let vprev = shift_x(&frame.v, &Q::from_int(-1));
    checks.push(compare_series("eps u_X = (1-L^-1) v", &eps_d(&frame.u, x_big), &frame.v.sub(&vprev), w));

    let nl = frame.nls_l()?;
    let s = frame.s_tilde();
    let t = frame.t_tilde();
    checks.push(compare_ops("T S^-1 = D + rho (D - phi)^-1", &t.mul(&s.inverse()?), &nl));
    let one = Q::one();
    let s1 = s.conjugate_shift(&one);
    let t1 = t.conjugate_shift(&one);
    checks.push(compare_ops("S(x+eps)^-1 T(x+eps) = D + rho (D - phi)^-1", &s1.inverse()?.mul(&t1), &nl));

    let p = frame.p_operator();
    let p_inv = p.inverse()?;
    let log_minus = frame.log_nls_minus(w as i32 + 1)?;
    checks.push(compare_ops("P D P^-1 = L", &p.mul(&Operator::d_power(1, 1)).mul(&p_inv), &nl));

    let pt = frame.pt_operator();
    let pt_neg = pt.map_coeffs(|f| f.clone());
    let pt_neg = Operator::from_terms(
        pt_neg.terms().map(|(&(d, s0), f)| ((d, s0), if d.rem_euclid(2) == 0 { f.clone() } else { f.neg() })),
        pt.prec(),
        1,
    );
    checks.push(compare_ops("Pt(-D)* = P(D)^-1", &pt_neg.adjoint(), &p_inv));

    for flow in flows {
        match flow.i {
            1 => {
                let l = flow.l as u32;
                let a = nl.pow(l + 1).scale_q(&factorial(l + 1).recip()).minus_d();
                let var = flow.var()?;
                let lhs = p.eps_derivative(var);
                checks.push(compare_ops(&format!("sato {flow}"), &lhs, &a.mul(&p).neg()));
                let lhs_l = nl.eps_derivative(var);
                checks.push(compare_ops(&format!("lax corollary {flow}"), &lhs_l, &a.neg().commutator(&nl)));
            }
            _ if flow.l == 0 => {
                let minus = log_minus.scale_q(&Q::from_int(2));
                let lhs = p.eps_derivative(x_var());
                checks.push(compare_ops(&format!("sato {flow}"), &lhs, &minus.mul(&p).neg()));
            }
            _ => {}
        }
    }

    let step1 = p.eps_derivative(x_var()).mul(&p_inv).scale_q(&Q::new(-1, 2));
    let prec = step1.prec().min(log_minus.prec());
    for k in 1..=2 {
        let bound = prec - k as i64;
        let a = keep_weight(&step1.coeff(-(k as i32), 0), bound);
        let b = keep_weight(&log_minus.coeff(-(k as i32), 0), bound);
        checks.push(compare_series(&format!("log consistency D^-{k}"), &a, &b, bound));
    }
    diagnostics.extend(log_positive_diagnostic(frame)?);

    Ok(LaxReport { caps: frame.caps.clone(), psi: frame.psi.to_text(), checks, diagnostics })
}

/// Summands `k = 0, 1, 2` of the two positive parts of `log 𝓛`:
/// `w_k Λ^k S^k` against `S^k w_k(x−ε) Λ^k`, `S = (D − φ)Λ^{-1}`.
fn log_positive_diagnostic(frame: &TauFrame) -> Result<Vec<IdentityCheck>, LaxError> {
    let wn = frame.w_negative(2)?;
    let phi82 = shift_x(&frame.phi, &Q::new(-1, 2));
    let s_op = Operator::from_terms([((1, 0), scalar_series(Scalar::one())), ((0, 0), phi82.neg())], frame.weight, 0)
        .mul(&Operator::shift(-1, 0));
    let mut out = Vec::new();
    for k in 0..=2 {
        let (wk, b) = if k == 0 { (frame.w0_bernoulli(), frame.weight) } else { frame.w_positive(k, &wn) };
        let sk = s_op.pow(k as u32);
        let left = Operator::function(&wk, b, 0).mul(&Operator::shift(k, 0)).mul(&sk);
        let right = sk.mul(&Operator::function(&shift_x(&wk, &Q::from_int(-1)), b, 0)).mul(&Operator::shift(k, 0));
        out.push(compare_ops(&format!("log positive part, summand {k}"), &left, &right));
    }
    Ok(out)
}

/// Fundamental-lemma instance: `P = D^{-k}`, `Q = B(X)` with `B` of degree 2.
///
/// Returns both sides as series in `X` and `X̄`.
pub fn fundamental_lemma_instance(b: [Q; 3]) -> (Series, Series) {
    let x_big = big_x_var();
    let xb = Var::named("Xbar");
    let eps = Var::eps();
    let bpoly = |v: Var| -> Series {
        let mut s = Series::zero(free());
        for (j, c) in b.iter().enumerate() {
            s.add_term(Monomial::from_pairs(&[(v, j as i32)]), Scalar::rat(c.clone()));
        }
        s
    };
    // Left: [λ^{-1}] of λ^{-1}·B(X̄)·Σ_m (X − X̄)^m λ^m / (ε^m m!), i.e. the m = 0 term.
    let lhs = bpoly(xb);
    // Right: ε · ε^{-1} [D^{-1}] of D^{-1} B(X) Σ_n u^n D^n/(ε^n n!), with u = X − X̄.
    let op = Operator::d_power(-1, 1).mul(&Operator::function(&bpoly(x_big), 4, 1));
    let u = Series::var(x_big, free()).sub(&Series::var(xb, free()));
    let mut rhs = Series::zero(free());
    for ((d, _), f) in op.terms() {
        let n = -1 - d;
        if n < 0 {
            continue;
        }
        let un = u.pow(n as u32).scale_q(&factorial(n as u32).recip()).mul_monomial(&Monomial::from_pairs(&[(eps, -n)]), &Scalar::one());
        rhs.add_assign(&f.mul(&un));
    }
    (lhs, rhs)
}

/// `v`, `u`, `φ`, `ρ` as sorted `(monomial, value)` rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaxData {
    pub weight_max: u32,
    pub psi: String,
    pub v: Vec<(String, String)>,
    pub u: Vec<(String, String)>,
    pub phi: Vec<(String, String)>,
    pub rho: Vec<(String, String)>,
}

fn rows(s: &Series) -> Vec<(String, String)> {
    let mut v: Vec<(String, String)> = s.sorted_terms().into_iter().map(|(m, c)| (format!("{m:?}"), c.to_text())).collect();
    v.sort();
    v
}

pub fn lax_data(frame: &TauFrame) -> LaxData {
    LaxData {
        weight_max: frame.caps.weight_max,
        psi: frame.psi.to_text(),
        v: rows(&frame.v),
        u: rows(&frame.u),
        phi: rows(&frame.phi),
        rho: rows(&frame.rho),
    }
}

/// Smallest weight present, for non-vacuity checks.
pub fn lowest_weight(s: &Series) -> i64 {
    min_weight(s)
}
