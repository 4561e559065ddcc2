//! Difference and pseudo-differential operators with series coefficients.
//!
//! A term `a·D^d Λ^s` stores the coefficient on the left, with `D = ε∂_X` and
//! `Λ f(x) = f(x + ε) Λ`. `D` and `Λ` commute. Shifts are Taylor expansions in
//! `ε`, so they act on polynomials exactly.
//!
//! Every term carries the weight `wt(a) − d − w_Λ·s`, where `wt` is the total
//! degree of a monomial in all variables (times and `ε`) and `w_Λ` is 0 or 1.
//! `D^{-1}` then raises weight, so inverses truncate to finite sums. An
//! operator is exact for weights `≤ prec`; products propagate this bound.

use crate::rational::{factorial, Q};
use crate::scalar::Scalar;
use crate::series::{Monomial, Series, Truncation, Var};
use rustc_hash::FxHashMap;
use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

/// Precision of operators that are known completely.
pub const EXACT: i64 = i64::MAX / 8;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OperatorError {
    #[error("operator has no invertible leading term")]
    NoLeadingTerm,
    #[error("operator remainder has weight {0} < 1 after factoring the leading term")]
    NotUnipotent(i64),
    #[error("exact operator with an infinite expansion")]
    Unbounded,
    #[error("shift weights differ: {0} vs {1}")]
    ShiftWeight(i64, i64),
}

/// The untruncated series ring shared by all operator coefficients.
pub fn free() -> &'static Arc<Truncation> {
    static T: OnceLock<Arc<Truncation>> = OnceLock::new();
    T.get_or_init(Truncation::none)
}

/// Lattice variable `x` (the `t^2_0` direction).
pub fn x_var() -> Var {
    Var::t(2, 0)
}

/// Continuous variable `X` (the `t^1_0` direction).
pub fn big_x_var() -> Var {
    Var::t(1, 0)
}

pub fn weight(m: &Monomial) -> i64 {
    m.total_degree() as i64
}

pub fn min_weight(f: &Series) -> i64 {
    f.iter().map(|(m, _)| weight(m)).min().unwrap_or(EXACT)
}

/// Terms of weight `≤ bound`.
pub fn keep_weight(f: &Series, bound: i64) -> Series {
    if bound >= EXACT {
        return f.clone();
    }
    f.filter(|m| weight(m) <= bound)
}

/// `a·b` restricted to weight `≤ bound`.
pub fn mul_bounded(a: &Series, b: &Series, bound: i64) -> Series {
    let wb: Vec<(&Monomial, &Scalar, i64)> = b.iter().map(|(m, c)| (m, c, weight(m))).collect();
    let mut acc: FxHashMap<Monomial, Scalar> = FxHashMap::default();
    for (ma, ca) in a.iter() {
        let wa = weight(ma);
        for (mb, cb, w) in &wb {
            if bound < EXACT && wa + w > bound {
                continue;
            }
            let m = ma.mul(mb);
            let c = ca * *cb;
            match acc.get_mut(&m) {
                Some(v) => *v = &*v + &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
    }
    let mut out = Series::zero(free());
    for (m, c) in acc {
        out.add_term(m, c);
    }
    out
}

/// `f(x + sε)`.
pub fn shift_x(f: &Series, s: &Q) -> Series {
    if s.is_zero() {
        return f.clone();
    }
    let x = x_var();
    let eps = Var::eps();
    let mut out = Series::zero(free());
    for (m, c) in f.iter() {
        let a = m.exponent(x);
        if a <= 0 {
            out.add_term(m.clone(), c.clone());
            continue;
        }
        let mut sp = Q::one();
        for j in 0..=a {
            let coef = &crate::rational::binomial(a as i64, j as i64) * &sp;
            let mm = m.with_exponent(x, a - j).mul(&Monomial::from_pairs(&[(eps, j)]));
            out.add_term(mm, c.scale(&coef));
            sp = &sp * s;
        }
    }
    out
}

/// `ε ∂f/∂v`.
pub fn eps_d(f: &Series, v: Var) -> Series {
    f.derivative(v).mul_monomial(&Monomial::var(Var::eps()), &Scalar::one())
}

/// `Σ_n c_n (ε∂_x)^n f`.
pub fn apply_eps_dx_series(f: &Series, coeffs: &[Q]) -> Series {
    let mut out = Series::zero(free());
    let mut cur = f.clone();
    for c in coeffs {
        if cur.is_zero() {
            break;
        }
        out.add_assign(&cur.scale_q(c));
        cur = eps_d(&cur, x_var());
    }
    out
}

/// Taylor coefficients of `z/(1 − e^{−z})` (`plus = true`) or `z/(e^z − 1)`.
pub fn bernoulli_coefficients(order: usize, plus: bool) -> Vec<Q> {
    // (e^z − 1)/z = Σ z^n/(n+1)!, inverted termwise.
    let a: Vec<Q> = (0..=order).map(|n| factorial(n as u32 + 1).recip()).collect();
    let mut b = vec![Q::zero(); order + 1];
    b[0] = Q::one();
    for n in 1..=order {
        let mut acc = Q::zero();
        for k in 1..=n {
            acc = &acc + &(&a[k] * &b[n - k]);
        }
        b[n] = -&acc;
    }
    if plus {
        // z/(1 − e^{−z}) = z/(e^z − 1) + z
        b[1] = &b[1] + &Q::one();
    }
    b
}

/// `C(i, l)` for any integer `i`.
fn gen_binomial(i: i64, l: i64) -> Q {
    let mut acc = Q::one();
    for k in 0..l {
        acc = &acc * &Q::from_int(i - k);
    }
    &acc * &factorial(l as u32).recip()
}

fn sat_add(a: i64, b: i64) -> i64 {
    if a >= EXACT || b >= EXACT {
        EXACT
    } else {
        (a + b).min(EXACT)
    }
}

/// Laurent series in `D` and `Λ` with left coefficients.
#[derive(Clone, Debug)]
pub struct Operator {
    terms: BTreeMap<(i32, i32), Series>,
    prec: i64,
    shift_weight: i64,
}

/// An operator with only `Λ` powers.
pub type DifferenceOperator = Operator;
/// An operator in `D = ε∂_X`, possibly with shift factors.
pub type PseudoDiffOperator = Operator;

impl Operator {
    pub fn zero(prec: i64, shift_weight: i64) -> Operator {
        Operator { terms: BTreeMap::new(), prec, shift_weight }
    }

    /// `c·D^d Λ^s`, exact.
    pub fn monomial(c: Scalar, d: i32, s: i32, shift_weight: i64) -> Operator {
        let mut o = Operator::zero(EXACT, shift_weight);
        if !c.is_zero() {
            o.terms.insert((d, s), Series::constant(c, free()));
        }
        o
    }

    pub fn one(shift_weight: i64) -> Operator {
        Operator::monomial(Scalar::one(), 0, 0, shift_weight)
    }

    /// `D^k`.
    pub fn d_power(k: i32, shift_weight: i64) -> Operator {
        Operator::monomial(Scalar::one(), k, 0, shift_weight)
    }

    /// `Λ^s`.
    pub fn shift(s: i32, shift_weight: i64) -> Operator {
        Operator::monomial(Scalar::one(), 0, s, shift_weight)
    }

    /// Multiplication by `f`, known for weights `≤ prec`.
    pub fn function(f: &Series, prec: i64, shift_weight: i64) -> Operator {
        Operator::from_terms([((0, 0), f.clone())], prec, shift_weight)
    }

    pub fn from_terms<I: IntoIterator<Item = ((i32, i32), Series)>>(it: I, prec: i64, shift_weight: i64) -> Operator {
        let mut o = Operator::zero(prec, shift_weight);
        for (k, f) in it {
            o.add_at(k, &f);
        }
        o.clean();
        o
    }

    fn add_at(&mut self, k: (i32, i32), f: &Series) {
        match self.terms.get_mut(&k) {
            Some(v) => v.add_assign(f),
            None => {
                self.terms.insert(k, f.clone());
            }
        }
    }

    fn bound_at(&self, d: i32, s: i32, prec: i64) -> i64 {
        if prec >= EXACT {
            EXACT
        } else {
            prec + d as i64 + self.shift_weight * s as i64
        }
    }

    fn clean(&mut self) {
        let prec = self.prec;
        let keys: Vec<(i32, i32)> = self.terms.keys().copied().collect();
        for (d, s) in keys {
            let b = self.bound_at(d, s, prec);
            let f = keep_weight(&self.terms[&(d, s)], b);
            if f.is_zero() {
                self.terms.remove(&(d, s));
            } else {
                self.terms.insert((d, s), f);
            }
        }
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn shift_weight(&self) -> i64 {
        self.shift_weight
    }

    /// Lowers the precision to `prec`.
    pub fn restrict(&self, prec: i64) -> Operator {
        let mut o = self.clone();
        o.prec = o.prec.min(prec);
        o.clean();
        o
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i32, i32), &Series)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, d: i32, s: i32) -> Series {
        self.terms.get(&(d, s)).cloned().unwrap_or_else(|| Series::zero(free()))
    }

    /// Smallest term weight, `EXACT` for the zero operator.
    pub fn min_wt(&self) -> i64 {
        self.terms
            .iter()
            .map(|(&(d, s), f)| min_weight(f) - d as i64 - self.shift_weight * s as i64)
            .min()
            .unwrap_or(EXACT)
    }

    pub fn max_d(&self) -> Option<i32> {
        self.terms.keys().map(|k| k.0).max()
    }

    fn check(&self, o: &Operator) {
        assert_eq!(self.shift_weight, o.shift_weight, "{}", OperatorError::ShiftWeight(self.shift_weight, o.shift_weight));
    }

    pub fn add(&self, o: &Operator) -> Operator {
        self.check(o);
        let mut r = self.clone();
        r.prec = self.prec.min(o.prec);
        for (k, f) in &o.terms {
            r.add_at(*k, f);
        }
        r.clean();
        r
    }

    pub fn sub(&self, o: &Operator) -> Operator {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Operator {
        self.scale(&Scalar::int(-1))
    }

    pub fn scale(&self, c: &Scalar) -> Operator {
        let mut r = self.clone();
        for f in r.terms.values_mut() {
            *f = f.scale(c);
        }
        r.clean();
        r
    }

    pub fn scale_q(&self, c: &Q) -> Operator {
        self.scale(&Scalar::rat(c.clone()))
    }

    /// Composition.
    pub fn mul(&self, o: &Operator) -> Operator {
        self.check(o);
        let sw = self.shift_weight;
        let prec = sat_add(self.prec, o.min_wt()).min(sat_add(o.prec, self.min_wt()));
        let x_big = big_x_var();
        let mut out: BTreeMap<(i32, i32), Series> = BTreeMap::new();
        let mut shifted: FxHashMap<((i32, i32), i32), Vec<Series>> = FxHashMap::default();
        let wts_b: Vec<((i32, i32), i64)> = o.terms.iter().map(|(&(j, t), f)| ((j, t), min_weight(f) - j as i64 - sw * t as i64)).collect();
        for (&(i, s), a) in &self.terms {
            let wa = min_weight(a) - i as i64 - sw * s as i64;
            for &((j, t), wb) in &wts_b {
                if prec < EXACT && wa + wb > prec {
                    continue;
                }
                let derivs = shifted.entry(((j, t), s)).or_insert_with(|| vec![shift_x(&o.terms[&(j, t)], &Q::from_int(s as i64))]);
                let mut l: i64 = 0;
                loop {
                    if i >= 0 && l > i as i64 {
                        break;
                    }
                    if prec < EXACT && wa + wb + l > prec {
                        break;
                    }
                    while derivs.len() <= l as usize {
                        let next = eps_d(derivs.last().unwrap(), x_big);
                        derivs.push(next);
                    }
                    let db = &derivs[l as usize];
                    if db.is_zero() {
                        break;
                    }
                    assert!(!(i < 0 && prec >= EXACT), "{}", OperatorError::Unbounded);
                    let d = i + j - l as i32;
                    let bound = if prec >= EXACT { EXACT } else { prec + d as i64 + sw * (s + t) as i64 };
                    let prod = mul_bounded(a, db, bound).scale_q(&gen_binomial(i as i64, l));
                    match out.get_mut(&(d, s + t)) {
                        Some(v) => v.add_assign(&prod),
                        None => {
                            out.insert((d, s + t), prod);
                        }
                    }
                    l += 1;
                }
            }
        }
        let mut r = Operator { terms: out, prec, shift_weight: sw };
        r.clean();
        r
    }

    pub fn pow(&self, n: u32) -> Operator {
        let mut acc = Operator::one(self.shift_weight);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `A B − B A`.
    pub fn commutator(&self, o: &Operator) -> Operator {
        self.mul(o).sub(&o.mul(self))
    }

    fn select<F: Fn(i32, i32) -> bool>(&self, keep: F) -> Operator {
        let mut r = self.clone();
        r.terms.retain(|k, _| keep(k.0, k.1));
        r
    }

    /// Part with `D`-exponent `≥ 0`.
    pub fn plus_d(&self) -> Operator {
        self.select(|d, _| d >= 0)
    }

    /// Part with `D`-exponent `< 0`.
    pub fn minus_d(&self) -> Operator {
        self.select(|d, _| d < 0)
    }

    /// Part with `Λ`-exponent `≥ 0`.
    pub fn plus_shift(&self) -> Operator {
        self.select(|_, s| s >= 0)
    }

    /// Part with `Λ`-exponent `< 0`.
    pub fn minus_shift(&self) -> Operator {
        self.select(|_, s| s < 0)
    }

    /// Terms with `Λ`-exponent in `lo..=hi`.
    pub fn shift_range(&self, lo: i32, hi: i32) -> Operator {
        self.select(|_, s| lo <= s && s <= hi)
    }

    /// `Λ^s A Λ^{-s}`: every coefficient taken at `x + sε`.
    pub fn conjugate_shift(&self, s: &Q) -> Operator {
        let mut r = self.clone();
        for f in r.terms.values_mut() {
            *f = shift_x(f, s);
        }
        r
    }

    /// Coefficient-wise `ε ∂/∂v`.
    pub fn eps_derivative(&self, v: Var) -> Operator {
        let mut r = self.clone();
        for f in r.terms.values_mut() {
            *f = eps_d(f, v);
        }
        r.terms.retain(|_, f| !f.is_zero());
        r
    }

    /// Coefficient-wise map.
    pub fn map_coeffs<F: Fn(&Series) -> Series>(&self, f: F) -> Operator {
        let mut r = self.clone();
        for c in r.terms.values_mut() {
            *c = f(c);
        }
        r.clean();
        r
    }

    /// Formal adjoint: `(a D^d Λ^s)* = Λ^{-s}(−D)^d a`.
    pub fn adjoint(&self) -> Operator {
        let sw = self.shift_weight;
        let mut acc = Operator::zero(EXACT, sw);
        for (&(d, s), a) in &self.terms {
            let sign = if d.rem_euclid(2) == 0 { 1 } else { -1 };
            let left = Operator::monomial(Scalar::int(sign), d, -s, sw);
            let f = Operator::function(a, self.bound_at(d, s, self.prec), sw);
            acc = acc.add(&left.mul(&f));
        }
        acc.prec = acc.prec.min(self.prec);
        acc.clean();
        acc
    }

    /// Inverse by factoring out the lightest term `c D^d Λ^s`, `c` a scalar.
    pub fn inverse(&self) -> Result<Operator, OperatorError> {
        let sw = self.shift_weight;
        let mut best: Option<((i32, i32), i64)> = None;
        for (&(d, s), f) in &self.terms {
            let w = min_weight(f) - d as i64 - sw * s as i64;
            let better = match best {
                None => true,
                Some(((bd, bs), bw)) => w < bw || (w == bw && (d, s) > (bd, bs)),
            };
            if better {
                best = Some(((d, s), w));
            }
        }
        let ((d, s), _) = best.ok_or(OperatorError::NoLeadingTerm)?;
        let lead = &self.terms[&(d, s)];
        if lead.len() != 1 || min_weight(lead) != 0 {
            return Err(OperatorError::NoLeadingTerm);
        }
        let c = lead.constant_term();
        let ci = c.inverse().ok_or(OperatorError::NoLeadingTerm)?;
        let lead_inv = Operator::monomial(ci, -d, -s, sw);
        let mut rest = self.clone();
        rest.terms.remove(&(d, s));
        if rest.is_zero() {
            return Ok(lead_inv);
        }
        if rest.prec >= EXACT {
            return Err(OperatorError::Unbounded);
        }
        let n = lead_inv.mul(&rest).neg();
        let w = n.min_wt();
        if w < 1 {
            return Err(OperatorError::NotUnipotent(w));
        }
        let mut sum = Operator::one(sw);
        let mut power = Operator::one(sw);
        loop {
            power = power.mul(&n).restrict(n.prec);
            if power.is_zero() {
                break;
            }
            sum = sum.add(&power);
        }
        sum.prec = sum.prec.min(n.prec);
        sum.clean();
        Ok(sum.mul(&lead_inv))
    }

    /// Coefficient of `D^{-1}`.
    pub fn residue_d(&self) -> Series {
        self.coeff(-1, 0)
    }

    /// Coefficient of `Λ^0`.
    pub fn residue_shift(&self) -> Series {
        self.coeff(0, 0)
    }

    /// `Σ a_s λ^s` for a difference operator.
    pub fn left_symbol(&self) -> Series {
        let lam = Var::lambda();
        let mut out = Series::zero(free());
        for (&(_, s), a) in &self.terms {
            out.add_assign(&a.mul_monomial(&Monomial::from_pairs(&[(lam, s)]), &Scalar::one()));
        }
        out
    }

    /// `Σ ã_s λ^s` with `A = Σ Λ^s ã_s`, i.e. `ã_s(x) = a_s(x − sε)`.
    pub fn right_symbol(&self) -> Series {
        let lam = Var::lambda();
        let mut out = Series::zero(free());
        for (&(_, s), a) in &self.terms {
            let sh = shift_x(a, &Q::from_int(-(s as i64)));
            out.add_assign(&sh.mul_monomial(&Monomial::from_pairs(&[(lam, s)]), &Scalar::one()));
        }
        out
    }

    /// Lifts a left symbol in `λ` to `Σ a_k D^k` (`in_d`) or `Σ a_k Λ^k`.
    pub fn from_left_symbol(sym: &Series, in_d: bool, prec: i64, shift_weight: i64) -> Operator {
        let lam = Var::lambda();
        let mut by: BTreeMap<(i32, i32), Series> = BTreeMap::new();
        for (m, c) in sym.iter() {
            let k = m.exponent(lam);
            let key = if in_d { (k, 0) } else { (0, k) };
            by.entry(key).or_insert_with(|| Series::zero(free())).add_term(m.without(lam), c.clone());
        }
        Operator::from_terms(by, prec, shift_weight)
    }

    /// All stored terms as `((d, s), monomial, value)`, sorted.
    pub fn listing(&self) -> Vec<((i32, i32), Monomial, Scalar)> {
        let mut v = Vec::new();
        for (k, f) in &self.terms {
            for (m, c) in f.sorted_terms() {
                v.push((*k, m, c));
            }
        }
        v
    }

    /// Number of stored monomials.
    pub fn size(&self) -> usize {
        self.terms.values().map(|f| f.len()).sum()
    }
}
