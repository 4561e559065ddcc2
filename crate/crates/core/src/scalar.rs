//! The coefficient ring `Q[ψ, ℓ, π][i, r] / (i² + 1, r² − 2)`.
//!
//! `ψ` is the calibration constant, `ℓ` stands for the opaque symbol
//! `log t²` and `π` only shows up inside the polynomial parts of period
//! vectors (always together with `i`). Elements are sparse sums of
//! `rational · ψ^a ℓ^b π^c · basis` with basis in `{1, i, r, i·r}`.
//!
//! Invariants:
//! - terms are sorted by key and no coefficient is zero,
//! - `i² → −1` and `r² → 2` are reduced eagerly on multiplication.

use crate::rational::Q;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

const BASIS_BITS: u32 = 2;
const FIELD_BITS: u32 = 8;
const PSI_SHIFT: u32 = BASIS_BITS;
const LOG_SHIFT: u32 = BASIS_BITS + FIELD_BITS;
const PI_SHIFT: u32 = BASIS_BITS + 2 * FIELD_BITS;
const FIELD_MASK: u32 = (1 << FIELD_BITS) - 1;

/// Basis element of the quadratic extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Unit {
    One = 0,
    I = 1,
    R = 2,
    IR = 3,
}

impl Unit {
    fn from_bits(b: u32) -> Unit {
        match b & 3 {
            0 => Unit::One,
            1 => Unit::I,
            2 => Unit::R,
            _ => Unit::IR,
        }
    }
}

/// `(result, factor)` for the product of two basis elements.
fn unit_mul(a: u32, b: u32) -> (u32, i64) {
    // bit 0 = i, bit 1 = r
    let i_count = (a & 1) + (b & 1);
    let r_count = ((a >> 1) & 1) + ((b >> 1) & 1);
    let mut factor = 1i64;
    if i_count == 2 {
        factor = -factor;
    }
    if r_count == 2 {
        factor *= 2;
    }
    ((i_count & 1) | ((r_count & 1) << 1), factor)
}

fn key(unit: u32, psi: u32, log: u32, pi: u32) -> u32 {
    assert!(psi <= FIELD_MASK && log <= FIELD_MASK && pi <= FIELD_MASK, "symbol exponent overflow");
    unit | (psi << PSI_SHIFT) | (log << LOG_SHIFT) | (pi << PI_SHIFT)
}

fn key_mul(a: u32, b: u32) -> (u32, i64) {
    let (u, f) = unit_mul(a & 3, b & 3);
    let psi = ((a >> PSI_SHIFT) & FIELD_MASK) + ((b >> PSI_SHIFT) & FIELD_MASK);
    let log = ((a >> LOG_SHIFT) & FIELD_MASK) + ((b >> LOG_SHIFT) & FIELD_MASK);
    let pi = ((a >> PI_SHIFT) & FIELD_MASK) + ((b >> PI_SHIFT) & FIELD_MASK);
    (key(u, psi, log, pi), f)
}

/// Element of the exact coefficient ring.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: Vec<(u32, Q)>,
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar { terms: Vec::new() }
    }

    pub fn one() -> Scalar {
        Scalar::rat(Q::one())
    }

    pub fn rat(q: Q) -> Scalar {
        if q.is_zero() {
            Scalar::zero()
        } else {
            Scalar { terms: vec![(0, q)] }
        }
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::rat(Q::from_int(n))
    }

    pub fn frac(n: i64, d: i64) -> Scalar {
        Scalar::rat(Q::new(n, d))
    }

    pub fn i() -> Scalar {
        Scalar { terms: vec![(Unit::I as u32, Q::one())] }
    }

    /// `r = √2`.
    pub fn sqrt2() -> Scalar {
        Scalar { terms: vec![(Unit::R as u32, Q::one())] }
    }

    pub fn psi() -> Scalar {
        Scalar { terms: vec![(key(0, 1, 0, 0), Q::one())] }
    }

    /// The opaque symbol `log t²`.
    pub fn log_t2() -> Scalar {
        Scalar { terms: vec![(key(0, 0, 1, 0), Q::one())] }
    }

    pub fn pi() -> Scalar {
        Scalar { terms: vec![(key(0, 0, 0, 1), Q::one())] }
    }

    /// Single term `q · ψ^psi ℓ^log π^pi · unit`.
    pub fn monomial(q: Q, unit: Unit, psi: u32, log: u32, pi: u32) -> Scalar {
        if q.is_zero() {
            return Scalar::zero();
        }
        Scalar { terms: vec![(key(unit as u32, psi, log, pi), q)] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// Iterator over `(coefficient, unit, ψ-exp, ℓ-exp, π-exp)`.
    pub fn terms(&self) -> impl Iterator<Item = (&Q, Unit, u32, u32, u32)> {
        self.terms.iter().map(|(k, q)| {
            (q, Unit::from_bits(*k), (k >> PSI_SHIFT) & FIELD_MASK, (k >> LOG_SHIFT) & FIELD_MASK, (k >> PI_SHIFT) & FIELD_MASK)
        })
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The value as a plain rational, if it is one.
    pub fn as_rational(&self) -> Option<Q> {
        match self.terms.as_slice() {
            [] => Some(Q::zero()),
            [(0, q)] => Some(q.clone()),
            _ => None,
        }
    }

    /// True when only the unit `1` occurs (no `i`, no `√2`).
    pub fn is_real_rational_part_only(&self) -> bool {
        self.terms.iter().all(|(k, _)| k & 3 == 0)
    }

    pub fn has_symbols(&self) -> bool {
        self.terms.iter().any(|(k, _)| k >> PSI_SHIFT != 0)
    }

    pub fn psi_degree(&self) -> u32 {
        self.terms.iter().map(|(k, _)| (k >> PSI_SHIFT) & FIELD_MASK).max().unwrap_or(0)
    }

    fn from_unsorted(mut v: Vec<(u32, Q)>) -> Scalar {
        v.sort_by_key(|(k, _)| *k);
        let mut out: Vec<(u32, Q)> = Vec::with_capacity(v.len());
        for (k, q) in v {
            if let Some(last) = out.last_mut() {
                if last.0 == k {
                    last.1 += &q;
                    continue;
                }
            }
            out.push((k, q));
        }
        out.retain(|(_, q)| !q.is_zero());
        Scalar { terms: out }
    }

    pub fn scale(&self, q: &Q) -> Scalar {
        if q.is_zero() {
            return Scalar::zero();
        }
        Scalar { terms: self.terms.iter().map(|(k, c)| (*k, c * q)).collect() }
    }

    /// Complex conjugation `i → −i`.
    pub fn conj(&self) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(k, c)| (*k, if k & 1 == 1 { -c } else { c.clone() })).collect() }
    }

    /// Galois conjugation `r → −r`.
    pub fn conj_r(&self) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(k, c)| (*k, if k & 2 == 2 { -c } else { c.clone() })).collect() }
    }

    /// Inverse for symbol-free elements of `Q[i, √2]`.
    pub fn inverse(&self) -> Option<Scalar> {
        if self.is_zero() || self.has_symbols() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Some(Scalar::rat(q.recip()));
        }
        // multiply by all Galois conjugates to land in Q
        let a = self * &self.conj();
        let b = &a * &a.conj_r();
        let n = b.as_rational()?;
        if n.is_zero() {
            return None;
        }
        let num = &(&self.conj() * &a.conj_r());
        Some(num.scale(&n.recip()))
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes rational values for `ψ` and/or `ℓ`.
    pub fn eval_symbols(&self, psi: Option<&Q>, log: Option<&Q>) -> Scalar {
        let mut v = Vec::new();
        for (k, c) in &self.terms {
            let pp = (k >> PSI_SHIFT) & FIELD_MASK;
            let lp = (k >> LOG_SHIFT) & FIELD_MASK;
            let pi = (k >> PI_SHIFT) & FIELD_MASK;
            let mut c = c.clone();
            let mut np = pp;
            let mut nl = lp;
            if let Some(p) = psi {
                c = &c * &p.pow(pp as i32);
                np = 0;
            }
            if let Some(l) = log {
                c = &c * &l.pow(lp as i32);
                nl = 0;
            }
            v.push((key(k & 3, np, nl, pi), c));
        }
        Scalar::from_unsorted(v)
    }

    /// Coefficient of `ψ^p` (as a scalar free of `ψ`).
    pub fn psi_coefficient(&self, p: u32) -> Scalar {
        let v = self
            .terms
            .iter()
            .filter(|(k, _)| (k >> PSI_SHIFT) & FIELD_MASK == p)
            .map(|(k, c)| (k & !(FIELD_MASK << PSI_SHIFT), c.clone()))
            .collect();
        Scalar::from_unsorted(v)
    }

    /// Formal derivative in `ψ`.
    pub fn d_psi(&self) -> Scalar {
        let v = self
            .terms
            .iter()
            .filter(|(k, _)| (k >> PSI_SHIFT) & FIELD_MASK > 0)
            .map(|(k, c)| {
                let p = (k >> PSI_SHIFT) & FIELD_MASK;
                ((k & !(FIELD_MASK << PSI_SHIFT)) | ((p - 1) << PSI_SHIFT), c * &Q::from_int(p as i64))
            })
            .collect();
        Scalar::from_unsorted(v)
    }

    /// Canonical text form: `p/q`, `p/q*i`, `p/q*r`, `p/q*i*r`, with symbols appended.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (idx, (c, unit, pp, lp, pi)) in self.terms().enumerate() {
            let body = c.to_string();
            if idx > 0 {
                if c.signum() < 0 {
                    s.push('-');
                } else {
                    s.push('+');
                }
                s.push_str(body.trim_start_matches('-'));
            } else {
                s.push_str(&body);
            }
            match unit {
                Unit::One => {}
                Unit::I => s.push_str("*i"),
                Unit::R => s.push_str("*r"),
                Unit::IR => s.push_str("*i*r"),
            }
            for (name, e) in [("psi", pp), ("log_t2", lp), ("pi", pi)] {
                if e == 1 {
                    s.push_str(&format!("*{name}"));
                } else if e > 1 {
                    s.push_str(&format!("*{name}^{e}"));
                }
            }
        }
        s
    }

    /// Inverse of [`Scalar::to_text`].
    pub fn parse(text: &str) -> Option<Scalar> {
        let text = text.trim();
        let mut acc = Scalar::zero();
        let mut pieces = Vec::new();
        let mut start = 0;
        let bytes = text.as_bytes();
        for (idx, ch) in bytes.iter().enumerate() {
            if (*ch == b'+' || *ch == b'-') && idx > 0 && bytes[idx - 1] != b'^' {
                pieces.push(&text[start..idx]);
                start = idx;
            }
        }
        pieces.push(&text[start..]);
        for piece in pieces {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            let (sign, body) = match piece.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, piece.strip_prefix('+').unwrap_or(piece)),
            };
            let mut factors = body.split('*');
            let coef = Q::parse(factors.next()?)?;
            let mut term = Scalar::rat(if sign < 0 { -coef } else { coef });
            for f in factors {
                let (name, e) = match f.split_once('^') {
                    Some((n, e)) => (n, e.parse::<u32>().ok()?),
                    None => (f, 1),
                };
                let base = match name {
                    "i" => Scalar::i(),
                    "r" => Scalar::sqrt2(),
                    "psi" => Scalar::psi(),
                    "log_t2" => Scalar::log_t2(),
                    "pi" => Scalar::pi(),
                    _ => return None,
                };
                term = &term * &base.pow(e);
            }
            acc += &term;
        }
        Some(acc)
    }
}

impl From<Q> for Scalar {
    fn from(q: Q) -> Scalar {
        Scalar::rat(q)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::int(n)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            let (ka, qa) = &self.terms[i];
            let (kb, qb) = &o.terms[j];
            if ka < kb {
                out.push((*ka, qa.clone()));
                i += 1;
            } else if kb < ka {
                out.push((*kb, qb.clone()));
                j += 1;
            } else {
                let s = qa + qb;
                if !s.is_zero() {
                    out.push((*ka, s));
                }
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&o.terms[j..]);
        Scalar { terms: out }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(k, q)| (*k, -q)).collect() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.terms.is_empty() || o.terms.is_empty() {
            return Scalar::zero();
        }
        if self.terms.len() == 1 && self.terms[0].0 == 0 {
            return o.scale(&self.terms[0].1);
        }
        if o.terms.len() == 1 && o.terms[0].0 == 0 {
            return self.scale(&o.terms[0].1);
        }
        let mut v = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (ka, qa) in &self.terms {
            for (kb, qb) in &o.terms {
                let (k, f) = key_mul(*ka, *kb);
                let mut c = qa * qb;
                if f != 1 {
                    c = &c * &Q::from_int(f);
                }
                v.push((k, c));
            }
        }
        Scalar::from_unsorted(v)
    }
}

macro_rules! owned_scalar_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$m(&o)
            }
        }
    };
}
owned_scalar_binop!(Add, add);
owned_scalar_binop!(Sub, sub);
owned_scalar_binop!(Mul, mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = &*self + o;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = &*self - o;
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_relations() {
        let i = Scalar::i();
        let r = Scalar::sqrt2();
        assert_eq!(&i * &i, Scalar::int(-1));
        assert_eq!(&r * &r, Scalar::int(2));
        let ir = &i * &r;
        assert_eq!(&ir * &ir, Scalar::int(-2));
    }

    #[test]
    fn inverse_in_extension() {
        let x = &(&Scalar::int(1) + &Scalar::i()) + &Scalar::sqrt2();
        let y = x.inverse().unwrap();
        assert_eq!(&x * &y, Scalar::one());
    }

    #[test]
    fn text_round_trip() {
        let x = &(&Scalar::frac(-3, 4) + &(&Scalar::i() * &Scalar::psi())) + &Scalar::frac(1, 2) * Scalar::sqrt2() * Scalar::log_t2();
        let t = x.to_text();
        assert_eq!(Scalar::parse(&t).unwrap(), x);
    }
}
