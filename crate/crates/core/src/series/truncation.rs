//! Truncation ideals and the user-facing cap profile.
//!
//! A [`Truncation`] is a list of linear weights with upper bounds. A monomial
//! survives when every weight stays within its bound. As long as every
//! monomial that can occur has non-negative weights, the discarded set is an
//! ideal: nothing thrown away can come back through multiplication.

use super::monomial::Monomial;
use super::var::Var;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Maximum number of simultaneous caps.
pub const MAX_CAPS: usize = 6;

/// One linear weight with an upper bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cap {
    pub name: String,
    pub weights: Vec<(Var, i32)>,
    pub max: i64,
}

impl Cap {
    pub fn new(name: &str, weights: Vec<(Var, i32)>, max: i64) -> Cap {
        Cap { name: name.to_string(), weights, max }
    }

    /// `Σ_{v ∈ vars} deg_v ≤ max`.
    pub fn degree(name: &str, vars: &[Var], max: i64) -> Cap {
        Cap::new(name, vars.iter().map(|v| (*v, 1)).collect(), max)
    }
}

/// A conjunction of caps; cheap to clone through `Arc`.
#[derive(Debug)]
pub struct Truncation {
    caps: Vec<Cap>,
    dense: Vec<Vec<i32>>,
}

impl PartialEq for Truncation {
    fn eq(&self, o: &Truncation) -> bool {
        self.caps == o.caps
    }
}

impl Truncation {
    pub fn new(caps: Vec<Cap>) -> Arc<Truncation> {
        assert!(caps.len() <= MAX_CAPS, "too many caps");
        let dense = caps
            .iter()
            .map(|c| {
                let n = c.weights.iter().map(|(v, _)| v.id() + 1).max().unwrap_or(0);
                let mut d = vec![0i32; n];
                for (v, w) in &c.weights {
                    d[v.id()] += *w;
                }
                d
            })
            .collect();
        Arc::new(Truncation { caps, dense })
    }

    /// No truncation at all (only safe for polynomial data).
    pub fn none() -> Arc<Truncation> {
        Truncation::new(Vec::new())
    }

    pub fn caps(&self) -> &[Cap] {
        &self.caps
    }

    pub fn num_caps(&self) -> usize {
        self.caps.len()
    }

    #[inline]
    pub fn weights(&self, m: &Monomial) -> [i64; MAX_CAPS] {
        let mut out = [0i64; MAX_CAPS];
        for (k, d) in self.dense.iter().enumerate() {
            let mut s = 0i64;
            for (id, e) in m.raw() {
                if let Some(w) = d.get(*id as usize) {
                    s += (*w as i64) * (*e as i64);
                }
            }
            out[k] = s;
        }
        out
    }

    #[inline]
    pub fn admits_weights(&self, w: &[i64; MAX_CAPS]) -> bool {
        self.caps.iter().enumerate().all(|(k, c)| w[k] <= c.max)
    }

    #[inline]
    pub fn admits(&self, m: &Monomial) -> bool {
        self.admits_weights(&self.weights(m))
    }

    /// True when some cap weight of `m` is strictly positive and none is negative,
    /// so powers of `m` eventually leave the truncation.
    pub fn is_nilpotent(&self, m: &Monomial) -> bool {
        let w = self.weights(m);
        let n = self.caps.len();
        w[..n].iter().all(|x| *x >= 0) && w[..n].iter().any(|x| *x > 0)
    }
}

/// User-facing truncation parameters.
///
/// `eps_window.1` and `degree_max` combine into the joint cap
/// `ε-exponent + 2·degree ≤ eps_max + 2·degree_max`, which is an ideal because
/// the lowest ε-power attached to a degree-`d` time monomial is `ε^{-2d}`.
/// The lower ends of the windows are applied as output filters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapProfile {
    pub genus_max: u32,
    pub eps_window: (i32, i32),
    pub degree_max: u32,
    pub index_max: u32,
    pub lambda_degree_window: (i32, i32),
}

impl Default for CapProfile {
    fn default() -> Self {
        CapProfile { genus_max: 2, eps_window: (-2, 2), degree_max: 3, index_max: 2, lambda_degree_window: (-16, 16) }
    }
}

/// Reasons a cap profile can be rejected.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CapError {
    #[error("eps window is empty: {0} > {1}")]
    EmptyEpsWindow(i32, i32),
    #[error("lambda window is empty: {0} > {1}")]
    EmptyLambdaWindow(i32, i32),
}

impl CapProfile {
    pub fn validate(&self) -> Result<(), CapError> {
        if self.eps_window.0 > self.eps_window.1 {
            return Err(CapError::EmptyEpsWindow(self.eps_window.0, self.eps_window.1));
        }
        if self.lambda_degree_window.0 > self.lambda_degree_window.1 {
            return Err(CapError::EmptyLambdaWindow(self.lambda_degree_window.0, self.lambda_degree_window.1));
        }
        Ok(())
    }

    /// Time variables `t^α_a` for `α ∈ {1,2}`, `a ≤ index_max`.
    pub fn time_vars(&self) -> Vec<Var> {
        let mut v = Vec::new();
        for a in 0..=self.index_max as usize {
            for alpha in 1..=2 {
                v.push(Var::t(alpha, a));
            }
        }
        v
    }

    /// Degree cap plus the joint ε/degree cap over the given time variables.
    pub fn truncation(&self, times: &[Var]) -> Arc<Truncation> {
        let eps = Var::eps();
        let mut joint: Vec<(Var, i32)> = times.iter().map(|v| (*v, 2)).collect();
        joint.push((eps, 1));
        Truncation::new(vec![
            Cap::degree("degree", times, self.degree_max as i64),
            Cap::new("eps+2deg", joint, self.eps_window.1 as i64 + 2 * self.degree_max as i64),
        ])
    }

    /// Whether a monomial lies in the requested output window.
    pub fn in_window(&self, m: &Monomial, times: &[Var]) -> bool {
        let e = m.exponent(Var::eps());
        let l = m.exponent(Var::lambda());
        let d = m.degree_in(times);
        e >= self.eps_window.0
            && e <= self.eps_window.1
            && d <= self.degree_max as i32
            && l >= self.lambda_degree_window.0
            && l <= self.lambda_degree_window.1
    }
}
