//! Truncated multivariate formal series over [`Scalar`].
//!
//! A [`Series`] is a finite map from [`Monomial`]s to coefficients together
//! with a shared [`Truncation`]. Every operation discards monomials outside
//! the truncation as soon as they are produced.
//!
//! Invariants:
//! - no stored coefficient is zero,
//! - every stored monomial is admitted by the truncation,
//! - binary operations require equal truncations.

mod lambda;
mod monomial;
mod truncation;
mod var;

pub use lambda::{LambdaError, LambdaObject};
pub use monomial::Monomial;
pub use truncation::{Cap, CapError, CapProfile, Truncation, MAX_CAPS};
pub use var::Var;

use crate::rational::Q;
use crate::scalar::Scalar;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// Errors raised by series operations.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("non-nilpotent exponent: {0}")]
    NonNilpotent(String),
    #[error("logarithm needs constant term 1, found {0}")]
    NotUnit(String),
    #[error("substitution of a non-monomial into a negative power of {0}")]
    NonInvertibleSubstitution(String),
    #[error("series has no inverse: {0}")]
    NotInvertible(String),
}

/// Truncated formal series.
#[derive(Clone)]
pub struct Series {
    terms: FxHashMap<Monomial, Scalar>,
    trunc: Arc<Truncation>,
}

impl PartialEq for Series {
    fn eq(&self, o: &Series) -> bool {
        self.terms == o.terms
    }
}

impl Series {
    pub fn zero(trunc: &Arc<Truncation>) -> Series {
        Series { terms: FxHashMap::default(), trunc: trunc.clone() }
    }

    pub fn constant(c: Scalar, trunc: &Arc<Truncation>) -> Series {
        let mut s = Series::zero(trunc);
        s.add_term(Monomial::one(), c);
        s
    }

    pub fn one(trunc: &Arc<Truncation>) -> Series {
        Series::constant(Scalar::one(), trunc)
    }

    pub fn var(v: Var, trunc: &Arc<Truncation>) -> Series {
        Series::term(Monomial::var(v), Scalar::one(), trunc)
    }

    pub fn term(m: Monomial, c: Scalar, trunc: &Arc<Truncation>) -> Series {
        let mut s = Series::zero(trunc);
        s.add_term(m, c);
        s
    }

    pub fn truncation(&self) -> &Arc<Truncation> {
        &self.trunc
    }

    /// Re-truncates into another (usually smaller) ideal.
    pub fn with_truncation(&self, trunc: &Arc<Truncation>) -> Series {
        let mut s = Series::zero(trunc);
        for (m, c) in &self.terms {
            s.add_term(m.clone(), c.clone());
        }
        s
    }

    /// Adds `c·m`, dropping it when outside the truncation.
    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() || !self.trunc.admits(&m) {
            return;
        }
        self.add_term_unchecked(m, c);
    }

    fn add_term_unchecked(&mut self, m: Monomial, c: Scalar) {
        use std::collections::hash_map::Entry;
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                let s = &*e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    /// Terms in canonical graded-lex order.
    pub fn sorted_terms(&self) -> Vec<(Monomial, Scalar)> {
        let mut v: Vec<(Monomial, Scalar)> = self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        v.sort_by(|a, b| a.0.graded_lex_cmp(&b.0));
        v
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&Monomial::one())
    }

    fn check_trunc(&self, o: &Series) {
        assert!(Arc::ptr_eq(&self.trunc, &o.trunc) || *self.trunc == *o.trunc, "truncation mismatch");
    }

    pub fn add(&self, o: &Series) -> Series {
        self.check_trunc(o);
        let (mut big, small) = if self.len() >= o.len() { (self.clone(), o) } else { (o.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term_unchecked(m.clone(), c.clone());
        }
        big
    }

    pub fn add_assign(&mut self, o: &Series) {
        self.check_trunc(o);
        for (m, c) in &o.terms {
            self.add_term_unchecked(m.clone(), c.clone());
        }
    }

    pub fn sub(&self, o: &Series) -> Series {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Series {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, k: &Scalar) -> Series {
        if k.is_zero() {
            return Series::zero(&self.trunc);
        }
        self.map_coeffs(|c| c * k)
    }

    pub fn scale_q(&self, k: &Q) -> Series {
        self.scale(&Scalar::rat(k.clone()))
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coeffs<F: Fn(&Scalar) -> Scalar>(&self, f: F) -> Series {
        let mut s = Series::zero(&self.trunc);
        for (m, c) in &self.terms {
            let d = f(c);
            if !d.is_zero() {
                s.terms.insert(m.clone(), d);
            }
        }
        s
    }

    /// Multiplies every monomial by `m` (re-truncating).
    pub fn mul_monomial(&self, m: &Monomial, c: &Scalar) -> Series {
        let mut s = Series::zero(&self.trunc);
        for (k, v) in &self.terms {
            s.add_term(k.mul(m), v * c);
        }
        s
    }

    pub fn mul(&self, o: &Series) -> Series {
        self.check_trunc(o);
        let tr = &self.trunc;
        let nc = tr.num_caps();
        let wa: Vec<(&Monomial, &Scalar, [i64; MAX_CAPS])> = self.terms.iter().map(|(m, c)| (m, c, tr.weights(m))).collect();
        let wb: Vec<(&Monomial, &Scalar, [i64; MAX_CAPS])> = o.terms.iter().map(|(m, c)| (m, c, tr.weights(m))).collect();
        let caps: Vec<i64> = tr.caps().iter().map(|c| c.max).collect();
        let mut out = Series::zero(tr);
        for (ma, ca, wa_) in &wa {
            for (mb, cb, wb_) in &wb {
                let mut ok = true;
                for k in 0..nc {
                    if wa_[k] + wb_[k] > caps[k] {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    out.add_term_unchecked(ma.mul(mb), *ca * *cb);
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Series {
        let mut acc = Series::one(&self.trunc);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    fn check_nilpotent(&self) -> Result<(), SeriesError> {
        for m in self.terms.keys() {
            if !self.trunc.is_nilpotent(m) {
                return Err(SeriesError::NonNilpotent(format!("{m:?}")));
            }
        }
        Ok(())
    }

    /// `Σ s^n / n!`; the constant term must vanish and every other term must
    /// raise some cap weight.
    pub fn exp(&self) -> Result<Series, SeriesError> {
        self.check_nilpotent()?;
        let mut result = Series::one(&self.trunc);
        let mut power = Series::one(&self.trunc);
        let mut n = 0i64;
        loop {
            n += 1;
            power = power.mul(self).scale_q(&Q::new(1, n));
            if power.is_zero() {
                break;
            }
            result.add_assign(&power);
        }
        Ok(result)
    }

    /// `log s` for `s = 1 + nilpotent`.
    pub fn log(&self) -> Result<Series, SeriesError> {
        let c = self.constant_term();
        if !c.is_one() {
            return Err(SeriesError::NotUnit(c.to_text()));
        }
        let x = self.sub(&Series::one(&self.trunc));
        x.check_nilpotent()?;
        let mut result = Series::zero(&self.trunc);
        let mut power = Series::one(&self.trunc);
        let mut n = 0i64;
        loop {
            n += 1;
            power = power.mul(&x);
            if power.is_zero() {
                break;
            }
            let sign = if n % 2 == 1 { 1 } else { -1 };
            result.add_assign(&power.scale_q(&Q::new(sign, n)));
        }
        Ok(result)
    }

    /// Inverse of `c + nilpotent` with `c` an invertible scalar.
    pub fn inverse(&self) -> Result<Series, SeriesError> {
        let c = self.constant_term();
        let ci = c.inverse().ok_or_else(|| SeriesError::NotInvertible(c.to_text()))?;
        let x = self.scale(&ci).sub(&Series::one(&self.trunc));
        x.check_nilpotent()?;
        let mut result = Series::one(&self.trunc);
        let mut power = Series::one(&self.trunc);
        let mut sign = 1i64;
        loop {
            power = power.mul(&x);
            sign = -sign;
            if power.is_zero() {
                break;
            }
            result.add_assign(&power.scale_q(&Q::from_int(sign)));
        }
        Ok(result.scale(&ci))
    }

    /// Partial derivative `∂/∂v`.
    pub fn derivative(&self, v: Var) -> Series {
        let mut s = Series::zero(&self.trunc);
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e != 0 {
                s.add_term(m.with_exponent(v, e - 1), c.scale(&Q::from_int(e as i64)));
            }
        }
        s
    }

    /// Part of the series with `deg_v = e`, with `v` removed.
    pub fn coefficient_of(&self, v: Var, e: i32) -> Series {
        let mut s = Series::zero(&self.trunc);
        for (m, c) in &self.terms {
            if m.exponent(v) == e {
                s.add_term(m.without(v), c.clone());
            }
        }
        s
    }

    /// Sets `v = 0` (terms with negative powers of `v` are kept only if absent).
    pub fn at_zero(&self, v: Var) -> Series {
        self.coefficient_of(v, 0)
    }

    /// Keeps only the terms satisfying `pred`.
    pub fn filter<F: Fn(&Monomial) -> bool>(&self, pred: F) -> Series {
        let mut s = Series::zero(&self.trunc);
        for (m, c) in &self.terms {
            if pred(m) {
                s.terms.insert(m.clone(), c.clone());
            }
        }
        s
    }

    /// Substitutes `value` for `v`. Negative powers of `v` need a single-term `value`.
    pub fn substitute(&self, v: Var, value: &Series) -> Result<Series, SeriesError> {
        self.check_trunc(value);
        let mut groups: FxHashMap<i32, Series> = FxHashMap::default();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            let rest = m.without(v);
            groups.entry(e).or_insert_with(|| Series::zero(&self.trunc)).add_term_unchecked(rest, c.clone());
        }
        let mut keys: Vec<i32> = groups.keys().copied().collect();
        keys.sort();
        let mut out = Series::zero(&self.trunc);
        let max_pos = keys.iter().copied().filter(|e| *e > 0).max().unwrap_or(0);
        let mut powers: Vec<Series> = vec![Series::one(&self.trunc)];
        for _ in 0..max_pos {
            let next = powers.last().unwrap().mul(value);
            powers.push(next);
        }
        for e in keys {
            let g = &groups[&e];
            if e >= 0 {
                out.add_assign(&g.mul(&powers[e as usize]));
            } else {
                let terms: Vec<(&Monomial, &Scalar)> = value.terms.iter().collect();
                if terms.len() != 1 {
                    return Err(SeriesError::NonInvertibleSubstitution(v.name()));
                }
                let (m, c) = terms[0];
                let ci = c.inverse().ok_or_else(|| SeriesError::NonInvertibleSubstitution(v.name()))?;
                let inv_m: Vec<(Var, i32)> = m.pairs().map(|(x, k)| (x, -k)).collect();
                let inv_m = Monomial::from_pairs(&inv_m);
                let mut pm = Monomial::one();
                let mut pc = Scalar::one();
                for _ in 0..(-e) {
                    pm = pm.mul(&inv_m);
                    pc = &pc * &ci;
                }
                out.add_assign(&g.mul_monomial(&pm, &pc));
            }
        }
        Ok(out)
    }

    /// Substitutes several variables at once, each by its own value (values must
    /// not contain the substituted variables).
    pub fn substitute_many(&self, subs: &[(Var, Series)]) -> Result<Series, SeriesError> {
        let mut cur = self.clone();
        for (v, val) in subs {
            cur = cur.substitute(*v, val)?;
        }
        Ok(cur)
    }

    /// Linear change of variables `v ↦ Σ c_w w` applied simultaneously.
    pub fn linear_change(&self, map: &FxHashMap<Var, Vec<(Var, Scalar)>>) -> Series {
        let mut out = Series::zero(&self.trunc);
        for (m, c) in &self.terms {
            let mut acc: Vec<(Monomial, Scalar)> = vec![(Monomial::one(), c.clone())];
            for (v, e) in m.pairs() {
                let image: Vec<(Monomial, Scalar)> = match map.get(&v) {
                    Some(lin) => lin.iter().map(|(w, k)| (Monomial::var(*w), k.clone())).collect(),
                    None => vec![(Monomial::var(v), Scalar::one())],
                };
                assert!(e >= 0 || map.get(&v).is_none(), "linear change of an inverted variable");
                for _ in 0..e.max(0) {
                    let mut next: FxHashMap<Monomial, Scalar> = FxHashMap::default();
                    for (am, ac) in &acc {
                        for (im, ic) in &image {
                            let nm = am.mul(im);
                            if !self.trunc.admits(&nm) {
                                continue;
                            }
                            let val = ac * ic;
                            let slot = next.entry(nm).or_default();
                            *slot = &*slot + &val;
                        }
                    }
                    acc = next.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                }
                if e < 0 {
                    let pm = Monomial::from_pairs(&[(v, e)]);
                    acc = acc.into_iter().map(|(am, ac)| (am.mul(&pm), ac)).collect();
                }
            }
            for (am, ac) in acc {
                out.add_term(am, ac);
            }
        }
        out
    }

    /// Checks that every coefficient is a plain rational (no `i`, `√2`, symbols).
    pub fn is_rational(&self) -> bool {
        self.terms.values().all(|c| c.as_rational().is_some())
    }

    /// Serialization into the documented JSON layout.
    pub fn to_json(&self) -> Vec<SeriesTermJson> {
        let eps = Var::eps();
        self.sorted_terms()
            .into_iter()
            .map(|(m, c)| SeriesTermJson {
                monomial: m.pairs().filter(|(v, _)| *v != eps).map(|(v, e)| (v.name(), e)).collect(),
                eps: m.exponent(eps),
                value: c.to_text(),
            })
            .collect()
    }

    /// Inverse of [`Series::to_json`].
    pub fn from_json(items: &[SeriesTermJson], trunc: &Arc<Truncation>) -> Option<Series> {
        let mut s = Series::zero(trunc);
        for it in items {
            let mut pairs: Vec<(Var, i32)> = it.monomial.iter().map(|(n, e)| (Var::named(n), *e)).collect();
            pairs.push((Var::eps(), it.eps));
            s.add_term(Monomial::from_pairs(&pairs), Scalar::parse(&it.value)?);
        }
        Some(s)
    }
}

/// One serialized term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesTermJson {
    pub monomial: std::collections::BTreeMap<String, i32>,
    pub eps: i32,
    pub value: String,
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.sorted_terms().iter().map(|(m, c)| format!("({c})*{m:?}")).collect();
        f.write_str(&parts.join(" + "))
    }
}
