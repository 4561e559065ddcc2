//! Exact rationals with an inline machine-word fast path.
//!
//! Values whose numerator and denominator fit in 62 bits are stored inline;
//! anything larger spills into a heap `BigRational`. The representation is
//! canonical (reduced, positive denominator, small whenever possible), so
//! structural equality and hashing agree with numeric equality.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

const LIMIT: i128 = 1 << 62;

#[derive(Clone)]
enum Repr {
    Small(i64, i64),
    Big(Box<BigRational>),
}

/// An exact rational number.
#[derive(Clone)]
pub struct Q(Repr);

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Q {
    pub fn zero() -> Q {
        Q(Repr::Small(0, 1))
    }

    pub fn one() -> Q {
        Q(Repr::Small(1, 1))
    }

    pub fn from_int(n: i64) -> Q {
        Q::from_i128(n as i128, 1)
    }

    /// `n/d`; panics on a zero denominator.
    pub fn new(n: i64, d: i64) -> Q {
        Q::from_i128(n as i128, d as i128)
    }

    fn from_i128(n: i128, d: i128) -> Q {
        assert!(d != 0, "zero denominator");
        let (mut n, mut d) = if d < 0 { (-n, -d) } else { (n, d) };
        let g = gcd_i128(n, d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        if n.abs() < LIMIT && d < LIMIT {
            Q(Repr::Small(n as i64, d as i64))
        } else {
            Q(Repr::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))))
        }
    }

    fn from_big(r: BigRational) -> Q {
        if let (Some(n), Some(d)) = (r.numer().to_i128(), r.denom().to_i128()) {
            if n.abs() < LIMIT && d < LIMIT {
                return Q(Repr::Small(n as i64, d as i64));
            }
        }
        Q(Repr::Big(Box::new(r)))
    }

    pub fn from_bigint(n: BigInt) -> Q {
        Q::from_big(BigRational::from_integer(n))
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(b) => {
                if b.is_positive() {
                    1
                } else if b.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn abs(&self) -> Q {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn recip(&self) -> Q {
        match &self.0 {
            Repr::Small(n, d) => Q::from_i128(*d as i128, *n as i128),
            Repr::Big(b) => Q::from_big(b.recip()),
        }
    }

    pub fn pow(&self, e: i32) -> Q {
        if e < 0 {
            return self.recip().pow(-e);
        }
        let mut acc = Q::one();
        let mut base = self.clone();
        let mut e = e as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Exact square root when the value is a square of a rational.
    pub fn sqrt_exact(&self) -> Option<Q> {
        if self.signum() < 0 {
            return None;
        }
        let n = self.numer();
        let d = self.denom();
        let rn = n.sqrt();
        let rd = d.sqrt();
        if &rn * &rn == n && &rd * &rd == d {
            Some(Q::from_big(BigRational::new(rn, rd)))
        } else {
            None
        }
    }

    /// Parses `p`, `-p`, `p/q`.
    pub fn parse(s: &str) -> Option<Q> {
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            let n: BigInt = a.trim().parse().ok()?;
            let d: BigInt = b.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Q::from_big(BigRational::new(n, d)))
        } else {
            let n: BigInt = s.parse().ok()?;
            Some(Q::from_bigint(n))
        }
    }
}

impl Default for Q {
    fn default() -> Self {
        Q::zero()
    }
}

impl From<i64> for Q {
    fn from(n: i64) -> Q {
        Q::from_int(n)
    }
}

impl From<i32> for Q {
    fn from(n: i32) -> Q {
        Q::from_int(n as i64)
    }
}

impl From<BigRational> for Q {
    fn from(r: BigRational) -> Q {
        Q::from_big(r)
    }
}

impl PartialEq for Q {
    fn eq(&self, other: &Q) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => a == c && b == d,
            (Repr::Big(a), Repr::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Q {}

impl Hash for Q {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Repr::Big(b) => {
                1u8.hash(state);
                b.numer().hash(state);
                b.denom().hash(state);
            }
        }
    }
}

impl PartialOrd for Q {
    fn partial_cmp(&self, other: &Q) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Q {
    fn cmp(&self, other: &Q) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128))),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl<'a> Add<&'a Q> for &'a Q {
    type Output = Q;
    fn add(self, o: &Q) -> Q {
        match (&self.0, &o.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if b == d {
                    Q::from_i128(*a as i128 + *c as i128, *b as i128)
                } else {
                    Q::from_i128(*a as i128 * *d as i128 + *c as i128 * *b as i128, *b as i128 * *d as i128)
                }
            }
            _ => Q::from_big(self.to_big() + o.to_big()),
        }
    }
}

impl<'a> Sub<&'a Q> for &'a Q {
    type Output = Q;
    fn sub(self, o: &Q) -> Q {
        match (&self.0, &o.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if b == d {
                    Q::from_i128(*a as i128 - *c as i128, *b as i128)
                } else {
                    Q::from_i128(*a as i128 * *d as i128 - *c as i128 * *b as i128, *b as i128 * *d as i128)
                }
            }
            _ => Q::from_big(self.to_big() - o.to_big()),
        }
    }
}

impl<'a> Mul<&'a Q> for &'a Q {
    type Output = Q;
    fn mul(self, o: &Q) -> Q {
        match (&self.0, &o.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if *a == 0 || *c == 0 {
                    return Q::zero();
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                let g1 = gcd_i128(a, d);
                let g2 = gcd_i128(c, b);
                let n = (a / g1) * (c / g2);
                let m = (b / g2) * (d / g1);
                if n.abs() < LIMIT && m < LIMIT {
                    Q(Repr::Small(n as i64, m as i64))
                } else {
                    Q(Repr::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(m)))))
                }
            }
            _ => Q::from_big(self.to_big() * o.to_big()),
        }
    }
}

impl<'a> Div<&'a Q> for &'a Q {
    type Output = Q;
    fn div(self, o: &Q) -> Q {
        self * &o.recip()
    }
}

impl Neg for &Q {
    type Output = Q;
    fn neg(self) -> Q {
        match &self.0 {
            Repr::Small(n, d) => Q(Repr::Small(-n, *d)),
            Repr::Big(b) => Q::from_big(-(**b).clone()),
        }
    }
}

impl Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Q> for Q {
            type Output = Q;
            fn $m(self, o: Q) -> Q {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Q> for Q {
            type Output = Q;
            fn $m(self, o: &Q) -> Q {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<Q> for &'a Q {
            type Output = Q;
            fn $m(self, o: Q) -> Q {
                self.$m(&o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl AddAssign<&Q> for Q {
    fn add_assign(&mut self, o: &Q) {
        *self = &*self + o;
    }
}

impl SubAssign<&Q> for Q {
    fn sub_assign(&mut self, o: &Q) {
        *self = &*self - o;
    }
}

impl MulAssign<&Q> for Q {
    fn mul_assign(&mut self, o: &Q) {
        *self = &*self * o;
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) => {
                if b.denom().is_one() {
                    write!(f, "{}", b.numer())
                } else {
                    write!(f, "{}/{}", b.numer(), b.denom())
                }
            }
        }
    }
}

impl fmt::Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `n!` as an exact rational.
pub fn factorial(n: u32) -> Q {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Q::from_bigint(acc)
}

/// Binomial coefficient `C(n, k)` (zero outside `0 ≤ k ≤ n`).
pub fn binomial(n: i64, k: i64) -> Q {
    if k < 0 || n < 0 || k > n {
        return Q::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k {
        acc *= n - j;
        acc = acc.div_floor(&BigInt::from(j + 1));
    }
    Q::from_bigint(acc)
}

/// Harmonic number `1 + 1/2 + … + 1/n`, zero for `n = 0`.
pub fn harmonic(n: u32) -> Q {
    let mut acc = Q::zero();
    for k in 1..=n {
        acc = &acc + &Q::new(1, k as i64);
    }
    acc
}

/// Rising factorial `(1/2)_n` for any integer `n` (negative `n` via `Γ` shift).
pub fn half_pochhammer(n: i64) -> Q {
    let half = Q::new(1, 2);
    let mut acc = Q::one();
    if n >= 0 {
        for j in 0..n {
            acc = &acc * &(&half + &Q::from_int(j));
        }
    } else {
        for j in 1..=(-n) {
            acc = &acc / &(&half - &Q::from_int(j));
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_and_big_agree() {
        let a = Q::new(1 << 40, 3);
        let b = &(&a * &a) * &a;
        let c = &b / &(&a * &a);
        assert_eq!(c, a);
        assert_eq!(format!("{}", Q::new(6, -4)), "-3/2");
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(half_pochhammer(0), Q::one());
        assert_eq!(half_pochhammer(2), Q::new(3, 4));
        assert_eq!(half_pochhammer(-1), Q::from_int(-2));
        assert_eq!(harmonic(3), Q::new(11, 6));
        assert_eq!(binomial(6, 3), Q::from_int(20));
    }
}
