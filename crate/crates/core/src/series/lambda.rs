//! Laurent series in `λ` with at most one power of `log λ`.

use super::{Series, Truncation};
use crate::rational::Q;
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LambdaError {
    #[error("logarithmic residue undefined")]
    LogResidue,
    #[error("log-degree would exceed 1")]
    LogDegree,
    #[error("lambda window [{0}, {1}] too small: need {2}")]
    Window(i32, i32, i32),
}

/// `Σ c_{m,p} λ^m (log λ)^p`, `p ∈ {0, 1}`, `m` inside a window.
///
/// Terms falling outside the window are dropped, the same way a [`Series`]
/// drops monomials outside its truncation.
#[derive(Clone, PartialEq)]
pub struct LambdaObject {
    terms: BTreeMap<(i32, u8), Series>,
    window: (i32, i32),
    trunc: Arc<Truncation>,
}

impl LambdaObject {
    pub fn zero(window: (i32, i32), trunc: &Arc<Truncation>) -> LambdaObject {
        LambdaObject { terms: BTreeMap::new(), window, trunc: trunc.clone() }
    }

    /// Scalar-coefficient object without series variables.
    pub fn scalar_zero(window: (i32, i32)) -> LambdaObject {
        LambdaObject::zero(window, &Truncation::none())
    }

    /// `c λ^m (log λ)^p`.
    pub fn monomial(c: Series, m: i32, p: u8, window: (i32, i32)) -> LambdaObject {
        let mut o = LambdaObject::zero(window, &c.truncation().clone());
        o.add_term(m, p, c);
        o
    }

    /// Scalar term `c λ^m (log λ)^p` without series variables.
    pub fn scalar_monomial(c: Scalar, m: i32, p: u8, window: (i32, i32)) -> LambdaObject {
        let tr = Truncation::none();
        LambdaObject::monomial(Series::constant(c, &tr), m, p, window)
    }

    pub fn window(&self) -> (i32, i32) {
        self.window
    }

    pub fn truncation(&self) -> &Arc<Truncation> {
        &self.trunc
    }

    pub fn add_term(&mut self, m: i32, p: u8, c: Series) {
        assert!(p <= 1, "log-degree above 1");
        if c.is_zero() || m < self.window.0 || m > self.window.1 {
            return;
        }
        let e = self.terms.entry((m, p)).or_insert_with(|| Series::zero(&self.trunc));
        e.add_assign(&c);
        if e.is_zero() {
            self.terms.remove(&(m, p));
        }
    }

    pub fn add_scalar_term(&mut self, m: i32, p: u8, c: Scalar) {
        let s = Series::constant(c, &self.trunc);
        self.add_term(m, p, s);
    }

    pub fn coefficient(&self, m: i32, p: u8) -> Series {
        self.terms.get(&(m, p)).cloned().unwrap_or_else(|| Series::zero(&self.trunc))
    }

    /// Scalar value of a coefficient whose series is constant.
    pub fn scalar_coefficient(&self, m: i32, p: u8) -> Scalar {
        self.coefficient(m, p).constant_term()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, u8, &Series)> {
        self.terms.iter().map(|((m, p), c)| (*m, *p, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn log_degree(&self) -> u8 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn add(&self, o: &LambdaObject) -> LambdaObject {
        let mut r = self.clone();
        for ((m, p), c) in &o.terms {
            r.add_term(*m, *p, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &LambdaObject) -> LambdaObject {
        self.add(&o.scale(&Scalar::int(-1)))
    }

    pub fn scale(&self, k: &Scalar) -> LambdaObject {
        let mut r = LambdaObject::zero(self.window, &self.trunc);
        for ((m, p), c) in &self.terms {
            r.add_term(*m, *p, c.scale(k));
        }
        r
    }

    /// Multiplies every coefficient by a series.
    pub fn mul_series(&self, s: &Series) -> LambdaObject {
        let mut r = LambdaObject::zero(self.window, &self.trunc);
        for ((m, p), c) in &self.terms {
            r.add_term(*m, *p, c.mul(s));
        }
        r
    }

    /// Multiplies by `λ^k`.
    pub fn shift(&self, k: i32) -> LambdaObject {
        let mut r = LambdaObject::zero(self.window, &self.trunc);
        for ((m, p), c) in &self.terms {
            r.add_term(m + k, *p, c.clone());
        }
        r
    }

    pub fn mul(&self, o: &LambdaObject) -> Result<LambdaObject, LambdaError> {
        let mut r = LambdaObject::zero(self.window, &self.trunc);
        for ((m1, p1), c1) in &self.terms {
            for ((m2, p2), c2) in &o.terms {
                let m = m1 + m2;
                if m < self.window.0 || m > self.window.1 {
                    continue;
                }
                if p1 + p2 > 1 {
                    return Err(LambdaError::LogDegree);
                }
                r.add_term(m, p1 + p2, c1.mul(c2));
            }
        }
        Ok(r)
    }

    /// `d/dλ`.
    pub fn derivative(&self) -> LambdaObject {
        let mut r = LambdaObject::zero(self.window, &self.trunc);
        for ((m, p), c) in &self.terms {
            if *m != 0 {
                r.add_term(m - 1, *p, c.scale_q(&Q::from_int(*m as i64)));
            }
            if *p == 1 {
                r.add_term(m - 1, 0, c.clone());
            }
        }
        r
    }

    /// Formal antiderivative with `∂^{-1}λ^{-1} = log λ` and
    /// `∂^{-1}(λ^m log λ) = λ^{m+1}/(m+1)·(log λ − 1/(m+1))`.
    pub fn integrate(&self) -> Result<LambdaObject, LambdaError> {
        let mut r = LambdaObject::zero((self.window.0, self.window.1 + 1), &self.trunc);
        for ((m, p), c) in &self.terms {
            match (*m, *p) {
                (-1, 0) => r.add_term(0, 1, c.clone()),
                (-1, _) => return Err(LambdaError::LogDegree),
                (m, 0) => r.add_term(m + 1, 0, c.scale_q(&Q::new(1, (m + 1) as i64))),
                (m, _) => {
                    let k = Q::new(1, (m + 1) as i64);
                    r.add_term(m + 1, 1, c.scale_q(&k));
                    r.add_term(m + 1, 0, c.scale_q(&(-(&k * &k))));
                }
            }
        }
        Ok(r)
    }

    /// `res_{λ=∞} f dλ = −[λ^{-1}] f`.
    pub fn residue_at_infinity(&self) -> Result<Series, LambdaError> {
        if self.log_degree() > 0 {
            return Err(LambdaError::LogResidue);
        }
        Ok(self.coefficient(-1, 0).neg())
    }
}

impl fmt::Debug for LambdaObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((m, p), c)| if *p == 0 { format!("[{c:?}]λ^{m}") } else { format!("[{c:?}]λ^{m}·logλ") })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}
