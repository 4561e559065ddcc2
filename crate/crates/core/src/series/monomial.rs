//! Sparse exponent vectors.

use super::var::Var;
use std::cmp::Ordering;
use std::fmt;

/// Finitely supported exponent vector, sorted by variable id, no zero entries.
/// Exponents are signed so that invertible generators (`ε`, `λ`) fit the same type.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Box<[(u16, i16)]>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Box::new([]))
    }

    pub fn var(v: Var) -> Monomial {
        Monomial::from_pairs(&[(v, 1)])
    }

    pub fn from_pairs(pairs: &[(Var, i32)]) -> Monomial {
        let mut v: Vec<(u16, i16)> = Vec::with_capacity(pairs.len());
        for (var, e) in pairs {
            v.push((var.0, i16::try_from(*e).expect("exponent overflow")));
        }
        v.sort_by_key(|p| p.0);
        let mut out: Vec<(u16, i16)> = Vec::with_capacity(v.len());
        for (id, e) in v {
            if let Some(last) = out.last_mut() {
                if last.0 == id {
                    last.1 += e;
                    continue;
                }
            }
            out.push((id, e));
        }
        out.retain(|p| p.1 != 0);
        Monomial(out.into_boxed_slice())
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Var, i32)> + '_ {
        self.0.iter().map(|(id, e)| (Var(*id), *e as i32))
    }

    pub(crate) fn raw(&self) -> &[(u16, i16)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: Var) -> i32 {
        match self.0.binary_search_by_key(&v.0, |p| p.0) {
            Ok(i) => self.0[i].1 as i32,
            Err(_) => 0,
        }
    }

    /// Sum of exponents over the given variables.
    pub fn degree_in(&self, vars: &[Var]) -> i32 {
        vars.iter().map(|v| self.exponent(*v)).sum()
    }

    pub fn total_degree(&self) -> i32 {
        self.0.iter().map(|p| p.1 as i32).sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let a = &self.0;
        let b = &o.0;
        if a.is_empty() {
            return o.clone();
        }
        if b.is_empty() {
            return self.clone();
        }
        let mut out: Vec<(u16, i16)> = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out.into_boxed_slice())
    }

    /// The monomial with the exponent of `v` replaced by `e`.
    pub fn with_exponent(&self, v: Var, e: i32) -> Monomial {
        let mut out: Vec<(u16, i16)> = self.0.iter().copied().filter(|p| p.0 != v.0).collect();
        if e != 0 {
            out.push((v.0, i16::try_from(e).expect("exponent overflow")));
            out.sort_by_key(|p| p.0);
        }
        Monomial(out.into_boxed_slice())
    }

    pub fn without(&self, v: Var) -> Monomial {
        self.with_exponent(v, 0)
    }

    fn named_pairs(&self) -> Vec<(String, i32)> {
        let mut v: Vec<(String, i32)> = self.pairs().map(|(v, e)| (v.name(), e)).collect();
        v.sort();
        v
    }

    /// Graded-lex order: total degree first, then variable names.
    pub fn graded_lex_cmp(&self, o: &Monomial) -> Ordering {
        self.total_degree().cmp(&o.total_degree()).then_with(|| self.named_pairs().cmp(&o.named_pairs()))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .named_pairs()
            .into_iter()
            .map(|(v, e)| if e == 1 { v } else { format!("{v}^{e}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}
