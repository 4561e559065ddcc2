//! 2×2 matrices over [`Scalar`] and truncated matrix power series.

use crate::rational::Q;
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A 2×2 matrix; `m[row][col]`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Mat2 {
    pub m: [[Scalar; 2]; 2],
}

impl Mat2 {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Mat2 {
        Mat2 { m: [[a, b], [c, d]] }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Mat2 {
        Mat2::new(Scalar::int(a), Scalar::int(b), Scalar::int(c), Scalar::int(d))
    }

    pub fn zero() -> Mat2 {
        Mat2::default()
    }

    pub fn identity() -> Mat2 {
        Mat2::from_ints(1, 0, 0, 1)
    }

    pub fn diag(a: Scalar, d: Scalar) -> Mat2 {
        Mat2::new(a, Scalar::zero(), Scalar::zero(), d)
    }

    /// The flat metric `[[0,1],[1,0]]`.
    pub fn eta() -> Mat2 {
        Mat2::from_ints(0, 1, 1, 0)
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.m[r][c]
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().flatten().all(|x| x.is_zero())
    }

    pub fn is_diagonal(&self) -> bool {
        self.m[0][1].is_zero() && self.m[1][0].is_zero()
    }

    pub fn is_antidiagonal(&self) -> bool {
        self.m[0][0].is_zero() && self.m[1][1].is_zero()
    }

    pub fn add(&self, o: &Mat2) -> Mat2 {
        let f = |r: usize, c: usize| &self.m[r][c] + &o.m[r][c];
        Mat2::new(f(0, 0), f(0, 1), f(1, 0), f(1, 1))
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        let f = |r: usize, c: usize| &self.m[r][c] - &o.m[r][c];
        Mat2::new(f(0, 0), f(0, 1), f(1, 0), f(1, 1))
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let f = |r: usize, c: usize| &(&self.m[r][0] * &o.m[0][c]) + &(&self.m[r][1] * &o.m[1][c]);
        Mat2::new(f(0, 0), f(0, 1), f(1, 0), f(1, 1))
    }

    pub fn scale(&self, k: &Scalar) -> Mat2 {
        let f = |r: usize, c: usize| &self.m[r][c] * k;
        Mat2::new(f(0, 0), f(0, 1), f(1, 0), f(1, 1))
    }

    pub fn scale_q(&self, k: &Q) -> Mat2 {
        self.scale(&Scalar::rat(k.clone()))
    }

    pub fn neg(&self) -> Mat2 {
        self.scale(&Scalar::int(-1))
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.m[0][0].clone(), self.m[1][0].clone(), self.m[0][1].clone(), self.m[1][1].clone())
    }

    pub fn trace(&self) -> Scalar {
        &self.m[0][0] + &self.m[1][1]
    }

    pub fn det(&self) -> Scalar {
        &(&self.m[0][0] * &self.m[1][1]) - &(&self.m[0][1] * &self.m[1][0])
    }

    /// Inverse when the determinant is an invertible scalar.
    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det().inverse()?;
        let adj = Mat2::new(self.m[1][1].clone(), -&self.m[0][1], -&self.m[1][0], self.m[0][0].clone());
        Some(adj.scale(&d))
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, o: &Mat2) -> Mat2 {
        self.mul(o).sub(&o.mul(self))
    }

    /// `η⁻¹ Aᵀ η` for the flat metric.
    pub fn eta_adjoint(&self) -> Mat2 {
        let e = Mat2::eta();
        e.mul(&self.transpose()).mul(&e)
    }

    pub fn map<F: Fn(&Scalar) -> Scalar>(&self, f: F) -> Mat2 {
        Mat2::new(f(&self.m[0][0]), f(&self.m[0][1]), f(&self.m[1][0]), f(&self.m[1][1]))
    }

    /// Entries as text, row-major.
    pub fn to_text(&self) -> [[String; 2]; 2] {
        [[self.m[0][0].to_text(), self.m[0][1].to_text()], [self.m[1][0].to_text(), self.m[1][1].to_text()]]
    }

    pub fn from_text(t: &[[String; 2]; 2]) -> Option<Mat2> {
        Some(Mat2::new(
            Scalar::parse(&t[0][0])?,
            Scalar::parse(&t[0][1])?,
            Scalar::parse(&t[1][0])?,
            Scalar::parse(&t[1][1])?,
        ))
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1])
    }
}

/// `Σ_{k=0}^{K} c_k x^k`, where `x` is `z` or `z^{-1}` depending on context.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatrixSeries {
    pub coeffs: Vec<Mat2>,
}

impl MatrixSeries {
    pub fn new(coeffs: Vec<Mat2>) -> MatrixSeries {
        assert!(!coeffs.is_empty());
        MatrixSeries { coeffs }
    }

    pub fn identity(order: usize) -> MatrixSeries {
        let mut c = vec![Mat2::zero(); order + 1];
        c[0] = Mat2::identity();
        MatrixSeries { coeffs: c }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Mat2 {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &MatrixSeries) -> MatrixSeries {
        let n = self.order().min(o.order());
        MatrixSeries { coeffs: (0..=n).map(|k| self.coeffs[k].add(&o.coeffs[k])).collect() }
    }

    pub fn sub(&self, o: &MatrixSeries) -> MatrixSeries {
        let n = self.order().min(o.order());
        MatrixSeries { coeffs: (0..=n).map(|k| self.coeffs[k].sub(&o.coeffs[k])).collect() }
    }

    pub fn scale_q(&self, k: &Q) -> MatrixSeries {
        MatrixSeries { coeffs: self.coeffs.iter().map(|c| c.scale_q(k)).collect() }
    }

    pub fn mul(&self, o: &MatrixSeries) -> MatrixSeries {
        let n = self.order().min(o.order());
        let mut out = vec![Mat2::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        MatrixSeries { coeffs: out }
    }

    /// `x ↦ −x`.
    pub fn reflect(&self) -> MatrixSeries {
        MatrixSeries {
            coeffs: self.coeffs.iter().enumerate().map(|(k, c)| if k % 2 == 1 { c.neg() } else { c.clone() }).collect(),
        }
    }

    pub fn transpose(&self) -> MatrixSeries {
        MatrixSeries { coeffs: self.coeffs.iter().map(|c| c.transpose()).collect() }
    }

    pub fn eta_adjoint(&self) -> MatrixSeries {
        MatrixSeries { coeffs: self.coeffs.iter().map(|c| c.eta_adjoint()).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.coeffs[0] == Mat2::identity() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Logarithm of a series with constant term `Id`.
    pub fn log(&self) -> MatrixSeries {
        assert_eq!(self.coeffs[0], Mat2::identity(), "log needs constant term Id");
        let n = self.order();
        let mut x = self.clone();
        x.coeffs[0] = Mat2::zero();
        let mut out = MatrixSeries { coeffs: vec![Mat2::zero(); n + 1] };
        let mut power = MatrixSeries::identity(n);
        for k in 1..=n {
            power = power.mul(&x);
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out = out.add(&power.scale_q(&Q::new(sign, k as i64)));
        }
        out
    }

    /// Exponential of a series with zero constant term.
    pub fn exp(&self) -> MatrixSeries {
        assert!(self.coeffs[0].is_zero(), "exp needs zero constant term");
        let n = self.order();
        let mut out = MatrixSeries::identity(n);
        let mut power = MatrixSeries::identity(n);
        for k in 1..=n {
            power = power.mul(self).scale_q(&Q::new(1, k as i64));
            out = out.add(&power);
        }
        out
    }

    /// Inverse of a series with invertible constant term.
    pub fn inverse(&self) -> Option<MatrixSeries> {
        let n = self.order();
        let c0i = self.coeffs[0].inverse()?;
        let mut out = vec![Mat2::zero(); n + 1];
        out[0] = c0i.clone();
        for k in 1..=n {
            let mut acc = Mat2::zero();
            for j in 1..=k {
                acc = acc.add(&self.coeffs[j].mul(&out[k - j]));
            }
            out[k] = c0i.mul(&acc).neg();
        }
        Some(MatrixSeries { coeffs: out })
    }
}

/// Serialized matrix table entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixEntryJson {
    pub k: usize,
    pub matrix: [[String; 2]; 2],
}

pub fn table_to_json(coeffs: &[Mat2]) -> Vec<MatrixEntryJson> {
    coeffs.iter().enumerate().map(|(k, m)| MatrixEntryJson { k, matrix: m.to_text() }).collect()
}
