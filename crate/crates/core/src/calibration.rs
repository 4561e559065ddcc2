//! Calibration `S(z) = Σ S_k z^{-k}`, the canonical-frame series
//! `R(z) = Σ R_k z^k`, the prefactor `C` and Hamiltonian densities.
//!
//! `log t²` is carried as the opaque symbol `ℓ` of [`Scalar`]; at `t² = 1`
//! it is replaced by zero.

use crate::frobenius::FrobeniusPoint;
use crate::matrix::{Mat2, MatrixSeries};
use crate::rational::{factorial, half_pochhammer, harmonic, Q};
use crate::scalar::Scalar;
use crate::series::{Series, Truncation, Var};
use std::collections::BTreeMap;
use std::sync::Arc;

/// The nilpotent `R = [[0,2],[0,0]]` of the Levelt normal form.
pub fn levelt_r() -> Mat2 {
    Mat2::from_ints(0, 2, 0, 0)
}

/// `log t²` at the point: `0` when `t² = 1`, the symbol `ℓ` otherwise.
pub fn log_t2_value(p: &FrobeniusPoint) -> Scalar {
    if p.t2.is_one() {
        Scalar::zero()
    } else {
        Scalar::log_t2()
    }
}

/// `S_0..S_K` at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct SMatrixTable {
    pub point: FrobeniusPoint,
    pub psi: Scalar,
    pub mats: Vec<Mat2>,
}

impl SMatrixTable {
    pub fn get(&self, k: usize) -> &Mat2 {
        &self.mats[k]
    }

    pub fn order(&self) -> usize {
        self.mats.len() - 1
    }

    /// `S*(z) := η⁻¹ S(z)ᵀ η`.
    pub fn series(&self) -> MatrixSeries {
        MatrixSeries::new(self.mats.clone())
    }

    /// `S*(−z) S(z)`, which should be the identity.
    pub fn symplectic_product(&self) -> MatrixSeries {
        self.series().eta_adjoint().reflect().mul(&self.series())
    }

    /// Recursion residual `k S_k + S_k μ − μ S_k − 𝒰 S_{k−1} + S_{k−1} R`.
    pub fn recursion_residual(&self, k: usize) -> Mat2 {
        let mu = FrobeniusPoint::mu();
        let u = self.point.u_operator();
        let s = &self.mats[k];
        let prev = &self.mats[k - 1];
        s.scale_q(&Q::from_int(k as i64))
            .add(&s.mul(&mu))
            .sub(&mu.mul(s))
            .sub(&u.mul(prev))
            .add(&prev.mul(&levelt_r()))
    }
}

/// Solves `k S_k + [S_k, μ] = 𝒰 S_{k−1} − S_{k−1}R` entrywise.
pub fn s_matrix(p: &FrobeniusPoint, order: usize, psi: &Scalar) -> SMatrixTable {
    let mu = [Q::new(1, 2), Q::new(-1, 2)];
    let u = p.u_operator();
    let r = levelt_r();
    let mut mats = vec![Mat2::identity()];
    for k in 1..=order {
        let prev = &mats[k - 1];
        let rhs = u.mul(prev).sub(&prev.mul(&r));
        let mut s = Mat2::zero();
        for a in 0..2 {
            for b in 0..2 {
                let c = &(&Q::from_int(k as i64) + &mu[b]) - &mu[a];
                if c.is_zero() {
                    assert!(rhs.m[a][b].is_zero(), "resonant entry with nonzero right side");
                    s.m[a][b] = psi + &log_t2_value(p);
                } else {
                    s.m[a][b] = rhs.m[a][b].scale(&c.recip());
                }
            }
        }
        mats.push(s);
    }
    SMatrixTable { point: p.clone(), psi: psi.clone(), mats }
}

/// Laurent polynomial in `ζ` with series coefficients, restricted to a window.
#[derive(Clone, Debug)]
struct Zeta {
    terms: BTreeMap<i32, Series>,
    lo: i32,
    hi: i32,
}

impl Zeta {
    fn zero(lo: i32, hi: i32) -> Zeta {
        Zeta { terms: BTreeMap::new(), lo, hi }
    }

    fn add_term(&mut self, j: i32, c: Series) {
        if j < self.lo || j > self.hi || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&j) {
            Some(e) => e.add_assign(&c),
            None => {
                self.terms.insert(j, c);
            }
        }
    }

    fn coeff(&self, j: i32, tr: &Arc<Truncation>) -> Series {
        self.terms.get(&j).cloned().unwrap_or_else(|| Series::zero(tr))
    }

    fn mul(&self, o: &Zeta) -> Zeta {
        let mut r = Zeta::zero(self.lo, self.hi);
        for (i, a) in &self.terms {
            for (j, b) in &o.terms {
                r.add_term(i + j, a.mul(b));
            }
        }
        r
    }

    fn add(&self, o: &Zeta) -> Zeta {
        let mut r = self.clone();
        for (j, c) in &o.terms {
            r.add_term(*j, c.clone());
        }
        r
    }

    fn scale(&self, k: &Scalar) -> Zeta {
        let mut r = Zeta::zero(self.lo, self.hi);
        for (j, c) in &self.terms {
            r.add_term(*j, c.scale(k));
        }
        r
    }
}

/// Superpotential `f = ζ + t¹ + t²ζ⁻¹` and the formal logarithm, with `t¹, t²`
/// kept as series variables.
struct Superpotential {
    tr: Arc<Truncation>,
    f: Zeta,
    log_f: Zeta,
    lo: i32,
    hi: i32,
}

impl Superpotential {
    fn new(width: i32) -> Superpotential {
        let tr = Truncation::none();
        let (lo, hi) = (-width, width);
        let t1 = Series::var(Var::named("t1"), &tr);
        let t2 = Series::var(Var::named("t2"), &tr);
        let t2_inv = Series::term(crate::series::Monomial::from_pairs(&[(Var::named("t2"), -1)]), Scalar::one(), &tr);
        let one = Series::one(&tr);
        let mut f = Zeta::zero(lo, hi);
        f.add_term(1, one.clone());
        f.add_term(0, t1.clone());
        f.add_term(-1, t2.clone());

        // ζ ~ 0: ½ log(fζ) = ½ log t² + ½ log(1 + y), y = (t¹ζ + ζ²)/t².
        let mut y = Zeta::zero(lo, hi);
        y.add_term(1, t1.mul(&t2_inv));
        y.add_term(2, t2_inv.clone());
        // ζ ~ ∞: ½ log(f/ζ) = ½ log(1 + y'), y' = t¹ζ⁻¹ + t²ζ⁻².
        let mut yp = Zeta::zero(lo, hi);
        yp.add_term(-1, t1);
        yp.add_term(-2, t2);

        let half = Scalar::frac(1, 2);
        let mut log_f = Zeta::zero(lo, hi);
        log_f.add_term(0, Series::constant(&half * &Scalar::log_t2(), &tr));
        for part in [&y, &yp] {
            let mut power = Zeta::zero(lo, hi);
            power.add_term(0, one.clone());
            for n in 1..=hi.max(-lo) {
                power = power.mul(part);
                let sign = if n % 2 == 1 { 1 } else { -1 };
                log_f = log_f.add(&power.scale(&Scalar::frac(sign, 2 * n as i64)));
            }
        }
        Superpotential { tr, f, log_f, lo, hi }
    }

    fn f_power(&self, k: u32) -> Zeta {
        let mut p = Zeta::zero(self.lo, self.hi);
        p.add_term(0, Series::one(&self.tr));
        for _ in 0..k {
            p = p.mul(&self.f);
        }
        p
    }

    /// `res (ζ^shift · expr) dζ`, i.e. the coefficient of `ζ^{-1-shift}`.
    fn residue(&self, expr: &Zeta, shift: i32) -> Series {
        expr.coeff(-1 - shift, &self.tr)
    }

    /// `2 f^m/m! (log~ f + c)`.
    fn log_block(&self, m: u32, c: &Scalar) -> Zeta {
        let mut bracket = self.log_f.clone();
        bracket.add_term(0, Series::constant(c.clone(), &self.tr));
        let k = &Scalar::int(2) * &Scalar::rat(factorial(m).recip());
        self.f_power(m).mul(&bracket).scale(&k)
    }
}

/// Evaluates a series in `t1, t2` (and `ℓ`) at a numeric point.
fn eval_at(s: &Series, p: &FrobeniusPoint) -> Scalar {
    let tr = s.truncation().clone();
    let v = s
        .substitute(Var::named("t1"), &Series::constant(Scalar::rat(p.t1.clone()), &tr))
        .and_then(|x| x.substitute(Var::named("t2"), &Series::constant(Scalar::rat(p.t2.clone()), &tr)))
        .expect("numeric substitution");
    assert!(v.iter().all(|(m, _)| m.is_one()), "leftover variables");
    let c = v.constant_term();
    if p.t2.is_one() {
        c.eval_symbols(None, Some(&Q::zero()))
    } else {
        c
    }
}

/// Symbolic residue-form entries of `S_k` as series in `t1, t2`.
pub fn s_matrix_residue_symbolic(order: usize, psi: &Scalar) -> Vec<[[Series; 2]; 2]> {
    let sp = Superpotential::new(order as i32 + 3);
    let tr = sp.tr.clone();
    let mut out = Vec::new();
    for k in 0..=order {
        if k == 0 {
            let one = Series::one(&tr);
            let z = Series::zero(&tr);
            out.push([[one.clone(), z.clone()], [z, one]]);
            continue;
        }
        let fk = sp.f_power(k as u32).scale(&Scalar::rat(factorial(k as u32).recip()));
        let c = &psi.scale(&Q::new(1, 2)) - &Scalar::rat(harmonic(k as u32 - 1));
        let g2 = sp.log_block(k as u32 - 1, &c);
        out.push([[sp.residue(&fk, -1), sp.residue(&g2, -1)], [sp.residue(&fk, 0), sp.residue(&g2, 0)]]);
    }
    out
}

/// `S_k` from the superpotential residue formula, evaluated at the point.
pub fn s_matrix_residue_form(p: &FrobeniusPoint, order: usize, psi: &Scalar) -> SMatrixTable {
    let sym = s_matrix_residue_symbolic(order, psi);
    let mats = sym
        .iter()
        .map(|e| Mat2::new(eval_at(&e[0][0], p), eval_at(&e[0][1], p), eval_at(&e[1][0], p), eval_at(&e[1][1], p)))
        .collect();
    SMatrixTable { point: p.clone(), psi: psi.clone(), mats }
}

/// Closed form of `S_k` at `(0,1)`: even `k = 2m` diagonal, odd `k = 2m+1` antidiagonal.
pub fn s_matrix_special_closed(k: usize, psi: &Scalar) -> Mat2 {
    let m = (k / 2) as u32;
    if k % 2 == 0 {
        let a = Scalar::rat(factorial(m).pow(2).recip());
        let d = if m == 0 {
            Scalar::one()
        } else {
            let num = &(psi + &Scalar::rat(Q::new(1, m as i64))) - &Scalar::rat(&Q::from_int(2) * &harmonic(m));
            num.scale(&(&factorial(m) * &factorial(m - 1)).recip())
        };
        Mat2::diag(a, d)
    } else {
        let b = (psi - &Scalar::rat(&Q::from_int(2) * &harmonic(m))).scale(&factorial(m).pow(2).recip());
        let c = Scalar::rat((&factorial(m + 1) * &factorial(m)).recip());
        Mat2::new(Scalar::zero(), b, c, Scalar::zero())
    }
}

/// `R_0..R_K` in the normalized canonical frame.
#[derive(Clone, Debug, PartialEq)]
pub struct RMatrixTable {
    pub point: FrobeniusPoint,
    pub mats: Vec<Mat2>,
}

impl RMatrixTable {
    pub fn series(&self) -> MatrixSeries {
        MatrixSeries::new(self.mats.clone())
    }

    /// `R(z) R*(−z)` with `R* = Rᵀ` in the orthonormal frame.
    pub fn symplectic_product(&self) -> MatrixSeries {
        self.series().mul(&self.series().transpose().reflect())
    }

    /// `[R_{k+1}, U] − (V + k) R_k`.
    pub fn recursion_residual(&self, k: usize) -> Mat2 {
        let u = self.point.canonical_u();
        let v = FrobeniusPoint::v_matrix();
        let lhs = self.mats[k + 1].commutator(&u);
        let rhs = v.add(&Mat2::identity().scale_q(&Q::from_int(k as i64))).mul(&self.mats[k]);
        lhs.sub(&rhs)
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RMatrixError {
    #[error("u1 = u2: point is not semisimple")]
    Degenerate,
}

/// Closed form `((½)_{k−1}(½)_k/k!)·M_k·(u₂−u₁)^{-k}`.
pub fn r_matrix(p: &FrobeniusPoint, order: usize) -> Result<RMatrixTable, RMatrixError> {
    let du = &p.u2 - &p.u1;
    if du.is_zero() {
        return Err(RMatrixError::Degenerate);
    }
    let mats = (0..=order)
        .map(|k| {
            let ki = k as i64;
            let pref = &(&half_pochhammer(ki - 1) * &half_pochhammer(ki)) / &factorial(k as u32);
            let pref = &pref * &du.pow(-(ki as i32));
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let i = Scalar::i();
            Mat2::new(
                Scalar::frac(sign, 2),
                i.scale(&Q::from_int(ki)),
                i.scale(&Q::from_int(sign * ki)),
                Scalar::frac(-1, 2),
            )
            .scale_q(&pref)
        })
        .collect();
    Ok(RMatrixTable { point: p.clone(), mats })
}

/// `R_k` from `[R_{k+1}, U] = (V+k)R_k`: off-diagonal entries from the
/// commutator, diagonal ones from the diagonal part of the next equation.
pub fn r_matrix_recursive(p: &FrobeniusPoint, order: usize) -> Result<RMatrixTable, RMatrixError> {
    let u = [p.u1.clone(), p.u2.clone()];
    let du = &u[1] - &u[0];
    if du.is_zero() {
        return Err(RMatrixError::Degenerate);
    }
    let v = FrobeniusPoint::v_matrix();
    let mut mats = vec![Mat2::identity()];
    for k in 0..order {
        let rhs = v.add(&Mat2::identity().scale_q(&Q::from_int(k as i64))).mul(&mats[k]);
        let mut next = Mat2::zero();
        // [X, U]_{ij} = X_{ij}(u_j − u_i)
        next.m[0][1] = rhs.m[0][1].scale(&(&u[1] - &u[0]).recip());
        next.m[1][0] = rhs.m[1][0].scale(&(&u[0] - &u[1]).recip());
        let vx = v.mul(&next);
        let kk = Q::from_int(k as i64 + 1).recip();
        next.m[0][0] = (-&vx.m[0][0]).scale(&kk);
        next.m[1][1] = (-&vx.m[1][1]).scale(&kk);
        mats.push(next);
    }
    Ok(RMatrixTable { point: p.clone(), mats })
}

/// `log C = −(1/16) log t²`, as a scalar in the symbol `ℓ`.
pub fn c_prefactor(p: &FrobeniusPoint) -> Scalar {
    log_t2_value(p).scale(&Q::new(-1, 16))
}

/// Coefficient `κ` of `log t²` in `∫ (R_1)^1_1 du¹ + (R_1)^2_2 du²`.
///
/// The `dt¹` part cancels; the `dt²` part is `κ dt²/t²`.
pub fn c_prefactor_r1_coefficient(p: &FrobeniusPoint) -> Q {
    let r = r_matrix(p, 1).expect("semisimple");
    let r11 = r.mats[1].m[0][0].as_rational().expect("rational");
    let r22 = r.mats[1].m[1][1].as_rational().expect("rational");
    assert!((&r11 + &r22).is_zero());
    // du^1/dt² = 1/√t², du^2/dt² = −1/√t²
    let inv = p.sqrt_t2.recip();
    &(&(&r11 * &inv) - &(&r22 * &inv)) * &p.t2
}

/// `h_{α,p}` as a series in `t1, t2` (with `t2^{-1}` allowed), `p ≥ −1`.
pub fn hamiltonian_density(alpha: usize, p: i64, psi: &Scalar) -> Series {
    assert!(p >= -1 && (alpha == 1 || alpha == 2));
    let sp = Superpotential::new(p as i32 + 5);
    if alpha == 1 {
        let m = (p + 2) as u32;
        let e = sp.f_power(m).scale(&Scalar::rat(factorial(m).recip()));
        sp.residue(&e, 0)
    } else {
        let m = (p + 1) as u32;
        let c = &psi.scale(&Q::new(1, 2)) - &Scalar::rat(harmonic(m));
        sp.residue(&sp.log_block(m, &c), 0)
    }
}

/// `θ_α = Σ_{p ≥ 0} h_{α,p−1} z^{-p}` truncated at `z^{-order}`.
pub fn theta(alpha: usize, order: usize, psi: &Scalar) -> Vec<Series> {
    (0..=order).map(|p| hamiltonian_density(alpha, p as i64 - 1, psi)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn special_values() {
        let p = FrobeniusPoint::special();
        let psi = Scalar::psi();
        let s = s_matrix(&p, 5, &psi);
        assert_eq!(s.mats[1], Mat2::new(Scalar::zero(), psi.clone(), Scalar::one(), Scalar::zero()));
        assert_eq!(s.mats[3], Mat2::new(Scalar::zero(), &psi - &Scalar::int(2), Scalar::frac(1, 2), Scalar::zero()));
        for k in 0..=5 {
            assert_eq!(s.mats[k], s_matrix_special_closed(k, &psi), "k = {k}");
        }
    }

    #[test]
    fn r_first_term() {
        let p = FrobeniusPoint::special();
        let r = r_matrix(&p, 1).unwrap();
        let expect = Mat2::new(Scalar::frac(1, 2), Scalar::i(), Scalar::i(), Scalar::frac(-1, 2)).scale_q(&Q::new(-1, 8));
        assert_eq!(r.mats[1], expect);
    }
}
