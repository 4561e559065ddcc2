//! The rank-2 Frobenius manifold with metric `[[0,1],[1,0]]` and product
//! `∂₂•∂₂ = ∂₁/t²`.
//!
//! Points are restricted to `t²` with an exact fourth root in `Q(√2)`:
//! `t² = s⁴` or `t² = 4s⁴` with `s > 0` rational.

use crate::matrix::Mat2;
use crate::rational::Q;
use crate::scalar::Scalar;
use serde::Serialize;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PointError {
    #[error("semisimplicity lost: 4t2 = (t1)^2")]
    Discriminant,
    #[error("t2 must be nonzero")]
    ZeroT2,
    #[error("no exact fourth root of t2 = {0} in Q(sqrt 2)")]
    NoRoot(String),
}

/// A semisimple point `(t¹, t²)` with its derived roots.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusPoint {
    pub t1: Q,
    pub t2: Q,
    /// `√t²` (rational).
    pub sqrt_t2: Q,
    /// `(t²)^{1/4}`, either rational or a rational multiple of `√2`.
    pub quarter_root_t2: Scalar,
    pub u1: Q,
    pub u2: Q,
}

/// Rational fourth root of `x`, if any.
fn fourth_root(x: &Q) -> Option<Q> {
    x.sqrt_exact()?.sqrt_exact()
}

impl FrobeniusPoint {
    /// The special point `(0, 1)`.
    pub fn special() -> FrobeniusPoint {
        FrobeniusPoint::new(Q::zero(), Q::one()).expect("special point")
    }

    pub fn new(t1: Q, t2: Q) -> Result<FrobeniusPoint, PointError> {
        if t2.is_zero() {
            return Err(PointError::ZeroT2);
        }
        if &Q::from_int(4) * &t2 == &t1 * &t1 {
            return Err(PointError::Discriminant);
        }
        let quarter = if let Some(s) = fourth_root(&t2) {
            Scalar::rat(s)
        } else if let Some(s) = fourth_root(&(&t2 / &Q::from_int(4))) {
            &Scalar::rat(s) * &Scalar::sqrt2()
        } else {
            return Err(PointError::NoRoot(t2.to_string()));
        };
        let sqrt_t2 = t2.sqrt_exact().expect("square root exists when fourth root does");
        let two_s = &Q::from_int(2) * &sqrt_t2;
        let u1 = &t1 + &two_s;
        let u2 = &t1 - &two_s;
        Ok(FrobeniusPoint { t1, t2, sqrt_t2, quarter_root_t2: quarter, u1, u2 })
    }

    /// `c_{αβ}^γ` as `c[α][β][γ]` (0-based).
    pub fn product_constants(&self) -> [[[Q; 2]; 2]; 2] {
        let z = Q::zero;
        let o = Q::one;
        [[[o(), z()], [z(), o()]], [[z(), o()], [self.t2.recip(), z()]]]
    }

    /// `c_{αβγ} = c_{αβ}^δ η_{δγ}`.
    pub fn lowered_constants(&self) -> [[[Q; 2]; 2]; 2] {
        let c = self.product_constants();
        let mut out: [[[Q; 2]; 2]; 2] = Default::default();
        for a in 0..2 {
            for b in 0..2 {
                for g in 0..2 {
                    out[a][b][g] = c[a][b][1 - g].clone();
                }
            }
        }
        out
    }

    /// Product of two tangent vectors in flat components.
    pub fn product(&self, x: &[Q; 2], y: &[Q; 2]) -> [Q; 2] {
        let c = self.product_constants();
        let mut out = [Q::zero(), Q::zero()];
        for a in 0..2 {
            for b in 0..2 {
                let xy = &x[a] * &y[b];
                for g in 0..2 {
                    out[g] += &(&xy * &c[a][b][g]);
                }
            }
        }
        out
    }

    /// Euler field `E = t¹∂₁ + 2t²∂₂`.
    pub fn euler(&self) -> [Q; 2] {
        [self.t1.clone(), &Q::from_int(2) * &self.t2]
    }

    /// Intersection form `g = [[2, t¹],[t¹, 2t²]]`.
    pub fn intersection_form(&self) -> Mat2 {
        Mat2::new(
            Scalar::int(2),
            Scalar::rat(self.t1.clone()),
            Scalar::rat(self.t1.clone()),
            Scalar::rat(&Q::from_int(2) * &self.t2),
        )
    }

    /// `g^{αβ} = E^ε c_ε^{αβ}` with the upper index raised by `η`.
    pub fn intersection_form_from_product(&self) -> Mat2 {
        let c = self.product_constants();
        let e = self.euler();
        let mut g = [[Q::zero(), Q::zero()], [Q::zero(), Q::zero()]];
        for a in 0..2 {
            for b in 0..2 {
                for eps in 0..2 {
                    // η^{αμ} = δ_{μ, 1−α}
                    g[a][b] += &(&e[eps] * &c[eps][1 - a][b]);
                }
            }
        }
        Mat2::new(
            Scalar::rat(g[0][0].clone()),
            Scalar::rat(g[0][1].clone()),
            Scalar::rat(g[1][0].clone()),
            Scalar::rat(g[1][1].clone()),
        )
    }

    /// `𝒰 = E• = [[t¹, 2],[2t², t¹]]`.
    pub fn u_operator(&self) -> Mat2 {
        Mat2::new(
            Scalar::rat(self.t1.clone()),
            Scalar::int(2),
            Scalar::rat(&Q::from_int(2) * &self.t2),
            Scalar::rat(self.t1.clone()),
        )
    }

    pub fn mu() -> Mat2 {
        Mat2::diag(Scalar::frac(1, 2), Scalar::frac(-1, 2))
    }

    /// Canonical idempotents `∂/∂u^i` in flat components: `(1/2, ±√t²/2)`.
    pub fn idempotents(&self) -> [[Q; 2]; 2] {
        let h = Q::new(1, 2);
        let s = &self.sqrt_t2 * &h;
        [[h.clone(), s.clone()], [h, -s]]
    }

    /// `(Δ_1, Δ_2) = (2/√t², −2/√t²)`.
    pub fn deltas(&self) -> [Q; 2] {
        let d = &Q::from_int(2) / &self.sqrt_t2;
        [d.clone(), -d]
    }

    /// `(Δ_1^{1/2}, Δ_2^{1/2}) = (√2 q^{-1}, i√2 q^{-1})`, `q = (t²)^{1/4}`.
    pub fn delta_roots(&self) -> [Scalar; 2] {
        let qi = self.quarter_root_t2.inverse().expect("nonzero root");
        let a = &Scalar::sqrt2() * &qi;
        let b = &Scalar::i() * &a;
        [a, b]
    }

    /// `Δ_i^{-1/2} = Ψ^i_1`.
    pub fn delta_inv_roots(&self) -> [Scalar; 2] {
        let r = self.delta_roots();
        [r[0].inverse().unwrap(), r[1].inverse().unwrap()]
    }

    /// `Ψ = (1/√2)[[q, q⁻¹],[−i q, i q⁻¹]]`; rows are canonical indices.
    pub fn psi(&self) -> Mat2 {
        let q = self.quarter_root_t2.clone();
        let qi = q.inverse().unwrap();
        let s = Scalar::sqrt2().inverse().unwrap();
        let i = Scalar::i();
        Mat2::new(q.clone(), qi.clone(), -&(&i * &q), &i * &qi).scale(&s)
    }

    pub fn psi_inv(&self) -> Mat2 {
        self.psi().inverse().expect("Ψ invertible")
    }

    pub fn canonical_u(&self) -> Mat2 {
        Mat2::diag(Scalar::rat(self.u1.clone()), Scalar::rat(self.u2.clone()))
    }

    pub fn v_matrix() -> Mat2 {
        let h = Scalar::frac(1, 2);
        Mat2::new(Scalar::zero(), &Scalar::i() * &h, -&(&Scalar::i() * &h), Scalar::zero())
    }

    /// Collected matrices for reports.
    pub fn frame(&self) -> FrameMatrices {
        FrameMatrices {
            psi: self.psi(),
            psi_inv: self.psi_inv(),
            mu: FrobeniusPoint::mu(),
            u: self.u_operator(),
            v: FrobeniusPoint::v_matrix(),
            delta_roots: self.delta_roots(),
        }
    }
}

/// Frame data at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameMatrices {
    pub psi: Mat2,
    pub psi_inv: Mat2,
    pub mu: Mat2,
    pub u: Mat2,
    pub v: Mat2,
    pub delta_roots: [Scalar; 2],
}

/// JSON form of all point data.
#[derive(Serialize)]
pub struct FrobeniusReport {
    pub t1: String,
    pub t2: String,
    pub u1: String,
    pub u2: String,
    pub sqrt_t2: String,
    pub quarter_root_t2: String,
    pub eta: [[String; 2]; 2],
    pub product_constants: Vec<(usize, usize, usize, String)>,
    pub intersection_form: [[String; 2]; 2],
    pub u_operator: [[String; 2]; 2],
    pub mu: [[String; 2]; 2],
    pub psi: [[String; 2]; 2],
    pub psi_inv: [[String; 2]; 2],
    pub v: [[String; 2]; 2],
    pub canonical_u: [[String; 2]; 2],
    pub delta_roots: [String; 2],
}

impl FrobeniusReport {
    pub fn new(p: &FrobeniusPoint) -> FrobeniusReport {
        let c = p.product_constants();
        let mut pc = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                for g in 0..2 {
                    pc.push((a + 1, b + 1, g + 1, c[a][b][g].to_string()));
                }
            }
        }
        let f = p.frame();
        FrobeniusReport {
            t1: p.t1.to_string(),
            t2: p.t2.to_string(),
            u1: p.u1.to_string(),
            u2: p.u2.to_string(),
            sqrt_t2: p.sqrt_t2.to_string(),
            quarter_root_t2: p.quarter_root_t2.to_text(),
            eta: Mat2::eta().to_text(),
            product_constants: pc,
            intersection_form: p.intersection_form().to_text(),
            u_operator: f.u.to_text(),
            mu: f.mu.to_text(),
            psi: f.psi.to_text(),
            psi_inv: f.psi_inv.to_text(),
            v: f.v.to_text(),
            canonical_u: p.canonical_u().to_text(),
            delta_roots: [f.delta_roots[0].to_text(), f.delta_roots[1].to_text()],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn special_point_frame() {
        let p = FrobeniusPoint::special();
        assert_eq!(p.u1, Q::from_int(2));
        assert_eq!(p.u2, Q::from_int(-2));
        let psi = p.psi();
        let s = Scalar::sqrt2().inverse().unwrap();
        assert_eq!(psi, Mat2::new(s.clone(), s.clone(), -&(&Scalar::i() * &s), &Scalar::i() * &s));
        assert_eq!(psi.mul(&p.psi_inv()), Mat2::identity());
        assert_eq!(psi.mul(&FrobeniusPoint::mu()).mul(&p.psi_inv()), FrobeniusPoint::v_matrix());
        assert_eq!(psi.mul(&p.u_operator()).mul(&p.psi_inv()), p.canonical_u());
        assert_eq!(psi, p.psi_inv().transpose().mul(&Mat2::eta()));
    }

    #[test]
    fn rejects_bad_points() {
        assert_eq!(FrobeniusPoint::new(Q::one(), Q::new(1, 4)), Err(PointError::Discriminant));
        assert!(matches!(FrobeniusPoint::new(Q::zero(), Q::from_int(3)), Err(PointError::NoRoot(_))));
        assert!(FrobeniusPoint::new(Q::zero(), Q::from_int(4)).is_ok());
    }
}
