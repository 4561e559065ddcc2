//! Period vectors `I^{(l)}_a` at the point `(0, 1)`, where `u¹ = −u² = 2` and
//!
//! ```text
//! I^{(0)}_{e_1} = I^{(0)}_{e_2} = (1, λ/2)ᵗ (λ² − 4)^{-1/2}.
//! ```
//!
//! Three representations are produced: the `λ → ∞` expansion obtained from
//! the closed form by differentiation or formal integration, the explicit
//! asymptotic formulas at infinity, and Puiseux expansions near `u^i`.

use crate::matrix::Mat2;
use crate::rational::{factorial, half_pochhammer, harmonic, Q};
use crate::scalar::Scalar;
use crate::series::{LambdaError, LambdaObject};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PeriodError {
    #[error("lambda window [{0}, {1}] cannot hold the leading term λ^{2}")]
    Window(i32, i32, i32),
    #[error("Puiseux expansions exist only for basis labels e1 or e2")]
    Label,
    #[error(transparent)]
    Lambda(#[from] LambdaError),
}

/// How a period vector is represented.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    /// Derived from `(1, λ/2)ᵗ(λ²−4)^{-1/2}` by `∂_λ` or `∂_λ^{-1}`, plus `P_i` for `l < 0`.
    Closed,
    /// `I^{(l)}_{asy}` for `l ≥ 0`, `I^{(l)}_{formal} + P_i^{(l)}` for `l < 0`.
    Infty,
    /// Puiseux series at `u¹ = 2`.
    U1,
    /// Puiseux series at `u² = −2`.
    U2,
}

impl std::str::FromStr for Representation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "closed" => Ok(Representation::Closed),
            "infty" => Ok(Representation::Infty),
            "u1" => Ok(Representation::U1),
            "u2" => Ok(Representation::U2),
            _ => Err(format!("unknown representation {s}")),
        }
    }
}

/// Laurent series `Σ c_m s^m` in `s = (λ − center)^{1/2}`, vector valued.
#[derive(Clone, Debug, PartialEq)]
pub struct Puiseux {
    pub center: Q,
    pub coeffs: BTreeMap<i32, [Scalar; 2]>,
    /// Coefficients are exact for exponents `≤ valid_max`.
    pub valid_max: i32,
}

impl Puiseux {
    fn zero(center: Q, valid_max: i32) -> Puiseux {
        Puiseux { center, coeffs: BTreeMap::new(), valid_max }
    }

    fn add(&mut self, m: i32, c: [Scalar; 2]) {
        if m > self.valid_max {
            return;
        }
        let e = self.coeffs.entry(m).or_insert_with(|| [Scalar::zero(), Scalar::zero()]);
        e[0] = &e[0] + &c[0];
        e[1] = &e[1] + &c[1];
        if e[0].is_zero() && e[1].is_zero() {
            self.coeffs.remove(&m);
        }
    }

    pub fn coefficient(&self, m: i32) -> [Scalar; 2] {
        self.coeffs.get(&m).cloned().unwrap_or_else(|| [Scalar::zero(), Scalar::zero()])
    }

    /// `d/dλ = (2s)^{-1} d/ds`.
    pub fn derivative(&self) -> Puiseux {
        let mut out = Puiseux::zero(self.center.clone(), self.valid_max - 2);
        for (m, c) in &self.coeffs {
            let k = Q::new(*m as i64, 2);
            out.add(m - 2, [c[0].scale(&k), c[1].scale(&k)]);
        }
        out
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn leading(&self) -> Option<(i32, [Scalar; 2])> {
        self.coeffs.iter().next().map(|(m, c)| (*m, c.clone()))
    }

    /// `(𝒰 − λ)∂_λ I − (μ + l + 1/2) I` with `λ = center + s²`, trimmed to the exact range.
    pub fn ode_residual(&self, l: i32) -> Puiseux {
        let d = self.derivative();
        let u = Mat2::from_ints(0, 2, 2, 0);
        let lam0 = Scalar::rat(self.center.clone());
        let mu = [Q::new(1, 2), Q::new(-1, 2)];
        let lq = Q::from_int(l as i64);
        let half = Q::new(1, 2);
        let mut out = Puiseux::zero(self.center.clone(), d.valid_max);
        for (m, c) in &d.coeffs {
            let mut v = [Scalar::zero(), Scalar::zero()];
            for r in 0..2 {
                v[r] = &(&u.m[r][0] * &c[0]) + &(&u.m[r][1] * &c[1]);
                v[r] = &v[r] - &(&lam0 * &c[r]);
            }
            out.add(*m, v);
            out.add(m + 2, [-&c[0], -&c[1]]);
        }
        for (m, c) in &self.coeffs {
            let k0 = -&(&(&mu[0] + &lq) + &half);
            let k1 = -&(&(&mu[1] + &lq) + &half);
            out.add(*m, [c[0].scale(&k0), c[1].scale(&k1)]);
        }
        out
    }
}

/// A period vector at `(0, 1)`.
#[derive(Clone, Debug)]
pub struct PeriodVector {
    pub level: i32,
    pub label: [Scalar; 2],
    pub representation: Representation,
    pub body: PeriodBody,
}

#[derive(Clone, Debug)]
pub enum PeriodBody {
    Lambda([LambdaObject; 2]),
    Puiseux(Puiseux),
}

fn check_window(window: (i32, i32), lead: i32) -> Result<(), PeriodError> {
    if lead < window.0 || lead > window.1 {
        return Err(PeriodError::Window(window.0, window.1, lead));
    }
    Ok(())
}

/// `P_i^{(l)}` for `l < 0`; zero for `l ≥ 0`.
pub fn polynomial_part(i: usize, l: i32, window: (i32, i32)) -> [LambdaObject; 2] {
    let mut first = LambdaObject::scalar_zero(window);
    let mut second = LambdaObject::scalar_zero(window);
    if l >= 0 {
        return [first, second];
    }
    let top = -l - 1;
    let pii = &Scalar::pi() * &Scalar::i();
    let shift = if i == 2 { pii.clone() } else { Scalar::zero() };
    for a in 0..=top / 2 {
        let j = top - 2 * a;
        let h = &Scalar::rat(harmonic(a as u32)) + &shift;
        let d = &(&factorial(a as u32) * &factorial(a as u32)) * &factorial(j as u32);
        first.add_scalar_term(j, 0, h.scale(&d.recip()));
    }
    if top >= 1 {
        for a in 0..=(top - 1) / 2 {
            let j = top - 1 - 2 * a;
            let mut h = Scalar::rat(&harmonic(a as u32) + &harmonic(a as u32 + 1));
            if i == 2 {
                h = &h + &pii.scale(&Q::from_int(2));
            }
            let d = &(&factorial(a as u32) * &factorial(a as u32 + 1)) * &factorial(j as u32);
            second.add_scalar_term(j, 0, h.scale(&(&Q::new(-1, 2) / &d)));
        }
    }
    [first, second]
}

/// `λ^{-1}`-expansion of `(1, λ/2)ᵗ(λ² − 4)^{-1/2}` down to `λ^{lo}`.
fn base_expansion(lo: i32, window: (i32, i32)) -> [LambdaObject; 2] {
    let mut first = LambdaObject::scalar_zero(window);
    let mut second = LambdaObject::scalar_zero(window);
    let mut s = 0;
    while -2 * s - 1 >= lo {
        let c = crate::rational::binomial(2 * s as i64, s as i64);
        first.add_scalar_term(-2 * s - 1, 0, Scalar::rat(c.clone()));
        second.add_scalar_term(-2 * s, 0, Scalar::rat(&c * &Q::new(1, 2)));
        s += 1;
    }
    [first, second]
}

/// `I^{(l)}_{asy}` for `l ≥ 0` from the explicit coefficient formulas.
pub fn asymptotic_explicit(l: i32, window: (i32, i32)) -> [LambdaObject; 2] {
    assert!(l >= 0);
    let mut first = LambdaObject::scalar_zero(window);
    let mut second = LambdaObject::scalar_zero(window);
    if l == 0 {
        let mut s = 0;
        while -2 * s >= window.0 {
            let c = crate::rational::binomial(2 * s as i64, s as i64);
            first.add_scalar_term(-2 * s - 1, 0, Scalar::rat(c.clone()));
            second.add_scalar_term(-2 * s, 0, Scalar::rat(&c * &Q::new(1, 2)));
            s += 1;
        }
        return [first, second];
    }
    let sign = Q::from_int(if l % 2 == 0 { 1 } else { -1 });
    let mut s = 0;
    while -2 * s - l - 1 >= window.0 {
        let m = -2 * s - l - 1;
        let base = &sign * &(&factorial((2 * s + l) as u32) / &(&factorial(s as u32) * &factorial(s as u32 + 1)));
        first.add_scalar_term(m, 0, Scalar::rat(&base * &Q::from_int(s as i64 + 1)));
        second.add_scalar_term(m - 1, 0, Scalar::rat(&base * &Q::from_int((2 * s + l + 1) as i64)));
        s += 1;
    }
    [first, second]
}

/// `I^{(-l)}_{formal}` for `l > 0` from the explicit coefficient formula.
pub fn formal_explicit(l: i32, window: (i32, i32)) -> [LambdaObject; 2] {
    assert!(l > 0);
    let mut first = LambdaObject::scalar_zero(window);
    let mut second = LambdaObject::scalar_zero(window);
    let sign = Q::from_int(if l % 2 == 0 { 1 } else { -1 });
    let mut s = 0i32;
    while 2 * s <= l - 1 {
        let j = l - 2 * s - 1;
        let d = &(&factorial(s as u32) * &factorial(s as u32)) * &factorial(j as u32);
        first.add_scalar_term(j, 1, Scalar::rat(d.recip()));
        first.add_scalar_term(j, 0, Scalar::rat(-&(&harmonic(j as u32) / &d)));
        s += 1;
    }
    let mut s = (l + 1) / 2;
    while l - 2 * s - 1 >= window.0 {
        let v = &factorial((2 * s - l) as u32) / &(&factorial(s as u32) * &factorial(s as u32));
        first.add_scalar_term(l - 2 * s - 1, 0, Scalar::rat(&v * &sign));
        s += 1;
    }
    second.add_scalar_term(l, 0, Scalar::rat(&Q::new(1, 2) / &factorial(l as u32)));
    let mut s = 1;
    while 2 * s <= l {
        let j = l - 2 * s;
        let d = &(&factorial(s as u32) * &factorial(s as u32 - 1)) * &factorial(j as u32);
        second.add_scalar_term(j, 1, Scalar::rat(-&d.recip()));
        second.add_scalar_term(j, 0, Scalar::rat(&harmonic(j as u32) / &d));
        s += 1;
    }
    let mut s = (l + 2) / 2;
    while l - 2 * s >= window.0 {
        let v = &factorial((2 * s - l - 1) as u32) / &(&factorial(s as u32) * &factorial(s as u32 - 1));
        second.add_scalar_term(l - 2 * s, 0, Scalar::rat(&v * &sign));
        s += 1;
    }
    [first, second]
}

fn combine(label: &[Scalar; 2], parts: [[LambdaObject; 2]; 2]) -> [LambdaObject; 2] {
    let [p1, p2] = parts;
    [p1[0].scale(&label[0]).add(&p2[0].scale(&label[1])), p1[1].scale(&label[0]).add(&p2[1].scale(&label[1]))]
}

/// `I^{(l)}_e` at infinity for a single basis vector `e_i` (`i ∈ {1, 2}`).
fn single_lambda(i: usize, l: i32, window: (i32, i32), rep: Representation) -> Result<[LambdaObject; 2], PeriodError> {
    let lead = if l >= 0 { -l - 1 } else { -l };
    check_window(window, lead)?;
    let wide = (window.0 - l.abs() - 2, window.1 + 2);
    let body = match rep {
        Representation::Closed => {
            let mut v = base_expansion(wide.0, wide);
            if l >= 0 {
                for _ in 0..l {
                    v = [v[0].derivative(), v[1].derivative()];
                }
            } else {
                for _ in 0..(-l) {
                    v = [v[0].integrate()?, v[1].integrate()?];
                }
            }
            v
        }
        _ => {
            if l >= 0 {
                asymptotic_explicit(l, wide)
            } else {
                formal_explicit(-l, wide)
            }
        }
    };
    let p = polynomial_part(i, l, wide);
    let full = [body[0].add(&p[0]), body[1].add(&p[1])];
    Ok([restrict(&full[0], window), restrict(&full[1], window)])
}

fn restrict(f: &LambdaObject, window: (i32, i32)) -> LambdaObject {
    let mut out = LambdaObject::zero(window, f.truncation());
    for (m, p, c) in f.terms() {
        out.add_term(m, p, c.clone());
    }
    out
}

/// `I^{(l)}_a` at `λ → ∞` with `λ`-degrees in `window`.
pub fn period_special(l: i32, label: &[Scalar; 2], window: (i32, i32), rep: Representation) -> Result<PeriodVector, PeriodError> {
    let body = match rep {
        Representation::Closed | Representation::Infty => {
            let parts = [single_lambda(1, l, window, rep)?, single_lambda(2, l, window, rep)?];
            PeriodBody::Lambda(combine(label, parts))
        }
        Representation::U1 | Representation::U2 => {
            let i = if rep == Representation::U1 { 1 } else { 2 };
            let (own, other) = (label[i - 1].clone(), label[2 - i].clone());
            if !other.is_zero() {
                return Err(PeriodError::Label);
            }
            let p = period_near_ui(i, l, (window.1 - window.0).max(1) as u32);
            let mut scaled = Puiseux::zero(p.center.clone(), p.valid_max);
            for (m, c) in &p.coeffs {
                scaled.add(*m, [&c[0] * &own, &c[1] * &own]);
            }
            PeriodBody::Puiseux(scaled)
        }
    };
    Ok(PeriodVector { level: l, label: label.clone(), representation: rep, body })
}

/// `∂_λ^n (λ − u)^{1/2} = Γ(3/2)/Γ(3/2 − n) · (λ − u)^{1/2 − n}`; the rational factor.
fn half_power_factor(n: i32) -> Q {
    let mut acc = Q::one();
    if n >= 0 {
        for j in 0..n {
            acc = &acc * &(&Q::new(1, 2) - &Q::from_int(j as i64));
        }
    } else {
        for j in 1..=(-n) {
            acc = &acc / &(&Q::new(1, 2) + &Q::from_int(j as i64));
        }
    }
    acc
}

/// Puiseux expansion of `I^{(l)}_{e_i}` near `u^i` with `order + 1` terms.
pub fn period_near_ui(i: usize, l: i32, order: u32) -> Puiseux {
    assert!(i == 1 || i == 2);
    let center = if i == 1 { Q::from_int(2) } else { Q::from_int(-2) };
    let valid_max = 2 * order as i32 - 2 * l - 1;
    let mut out = Puiseux::zero(center, valid_max);
    let unit = if i == 1 { Scalar::one() } else { Scalar::i() };
    for k in 0..=order as i32 {
        let four = Q::from_int(4).pow(-k);
        let pref = if i == 1 && k % 2 == 1 { -&four } else { four };
        let pref = &pref / &factorial(k as u32);
        let a = &half_pochhammer(k as i64) * &half_pochhammer(k as i64);
        let b0 = &(&half_pochhammer(k as i64 + 1) * &half_pochhammer(k as i64)) * &Q::new(2, (2 * k - 1) as i64);
        let b = if i == 1 { -&b0 } else { b0 };
        let n = l - k + 1;
        let f = &pref * &half_power_factor(n);
        out.add(1 - 2 * n, [unit.scale(&(&f * &a)), unit.scale(&(&f * &b))]);
    }
    out
}

/// `(−1)^l Γ(l + 1/2)/√(2π) · Ψ^{-1} e_i = (−1)^l (1/2)_l/√2 · Ψ^{-1} e_i`, the
/// leading coefficient of [`period_near_ui`].
pub fn normalization_leading(i: usize, l: i32) -> [Scalar; 2] {
    let sign = if l.rem_euclid(2) == 0 { 1 } else { -1 };
    let g = &half_pochhammer(l as i64) * &Q::from_int(sign);
    let psi_inv = crate::frobenius::FrobeniusPoint::special().psi_inv();
    let s = Scalar::sqrt2().inverse().unwrap();
    [(&psi_inv.m[0][i - 1] * &s).scale(&g), (&psi_inv.m[1][i - 1] * &s).scale(&g)]
}

/// `(𝒰 − λ)∂_λ I − (μ + l + 1/2) I` on a `λ`-expansion; exact strictly inside the window.
pub fn lambda_ode_residual(v: &[LambdaObject; 2], l: i32) -> [LambdaObject; 2] {
    let d = [v[0].derivative(), v[1].derivative()];
    let ud = [d[1].scale(&Scalar::int(2)), d[0].scale(&Scalar::int(2))];
    let ld = [d[0].shift(1), d[1].shift(1)];
    let m0 = Scalar::rat(&Q::from_int(l as i64) + &Q::one());
    let m1 = Scalar::rat(Q::from_int(l as i64));
    [ud[0].sub(&ld[0]).sub(&v[0].scale(&m0)), ud[1].sub(&ld[1]).sub(&v[1].scale(&m1))]
}

/// `W_{a,b} = (I^{(0)}_a, I^{(0)}_b)` as `c · λ/((λ − 2)(λ + 2))`.
#[derive(Clone, Debug, PartialEq)]
pub struct WFunction {
    pub coefficient: Scalar,
}

impl WFunction {
    /// Numerator and denominator polynomial coefficients in ascending powers of `λ`.
    pub fn rational(&self) -> (Vec<Scalar>, Vec<Scalar>) {
        (vec![Scalar::zero(), self.coefficient.clone()], vec![Scalar::int(-4), Scalar::zero(), Scalar::one()])
    }

    /// `λ^{-1}`-expansion inside `window`.
    pub fn expand(&self, window: (i32, i32)) -> LambdaObject {
        let mut out = LambdaObject::scalar_zero(window);
        let mut k = 0;
        while -1 - 2 * k >= window.0 {
            out.add_scalar_term(-1 - 2 * k, 0, self.coefficient.scale(&Q::from_int(4).pow(k)));
            k += 1;
        }
        out
    }
}

/// `W_{a,b}(t_sp, λ) = (a₁ + a₂)(b₁ + b₂) λ/(λ² − 4)`.
pub fn w_function(a: &[Scalar; 2], b: &[Scalar; 2]) -> WFunction {
    WFunction { coefficient: &(&a[0] + &a[1]) * &(&b[0] + &b[1]) }
}

/// `η`-pairing of two `λ`-expansions, used to cross-check [`w_function`].
pub fn eta_pairing(x: &[LambdaObject; 2], y: &[LambdaObject; 2]) -> Result<LambdaObject, LambdaError> {
    Ok(x[0].mul(&y[1])?.add(&x[1].mul(&y[0])?))
}

/// `G = −(1/2)[[1, 1], [1, 1]]`.
pub fn monodromy_form() -> [[Q; 2]; 2] {
    let h = Q::new(-1, 2);
    [[h.clone(), h.clone()], [h.clone(), h]]
}

/// A word in `γ₁, γ₂`, applied right to left.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonodromyElement {
    pub word: Vec<u8>,
}

impl MonodromyElement {
    pub fn new(word: Vec<u8>) -> MonodromyElement {
        assert!(word.iter().all(|g| *g == 1 || *g == 2));
        MonodromyElement { word }
    }

    /// Integer matrix of the action on `C²` (columns are images of `e₁`, `e₂`).
    pub fn matrix(&self) -> [[i64; 2]; 2] {
        let mut m = [[1, 0], [0, 1]];
        for g in &self.word {
            let r = reflection(*g as usize);
            m = mul2(&m, &r);
        }
        m
    }
}

fn mul2(a: &[[i64; 2]; 2], b: &[[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

/// Matrix of `v ↦ v − 2<v, e_g>/<e_g, e_g> e_g`.
fn reflection(g: usize) -> [[i64; 2]; 2] {
    let gm = monodromy_form();
    let w = g - 1;
    let mut m = [[0; 2]; 2];
    for col in 0..2 {
        let ratio = &gm[col][w] / &gm[w][w];
        let k = (&ratio * &Q::from_int(2)).numer();
        let k: i64 = k.try_into().expect("small integer");
        for row in 0..2 {
            let delta = if row == col { 1 } else { 0 };
            let ew = if row == w { 1 } else { 0 };
            m[row][col] = delta - k * ew;
        }
    }
    m
}

/// `γ a`.
pub fn monodromy_apply(g: &MonodromyElement, a: &[Scalar; 2]) -> [Scalar; 2] {
    let m = g.matrix();
    let mut out = [Scalar::zero(), Scalar::zero()];
    for row in 0..2 {
        for col in 0..2 {
            out[row] = &out[row] + &a[col].scale(&Q::from_int(m[row][col]));
        }
    }
    out
}

/// JSON form of a period vector.
#[derive(Serialize)]
pub struct PeriodJson {
    pub level: i32,
    pub label: [String; 2],
    pub representation: Representation,
    /// Either `λ^m (log λ)^p` terms or `s^m` terms with `s² = λ − center`.
    pub center: Option<String>,
    pub terms: Vec<PeriodTermJson>,
}

#[derive(Serialize)]
pub struct PeriodTermJson {
    pub component: usize,
    pub power: i32,
    pub log_power: u8,
    pub value: String,
}

impl PeriodVector {
    pub fn to_json(&self) -> PeriodJson {
        let mut terms = Vec::new();
        let mut center = None;
        match &self.body {
            PeriodBody::Lambda(v) => {
                for (c, comp) in v.iter().enumerate() {
                    for (m, p, s) in comp.terms() {
                        terms.push(PeriodTermJson { component: c + 1, power: m, log_power: p, value: s.constant_term().to_text() });
                    }
                }
            }
            PeriodBody::Puiseux(p) => {
                center = Some(p.center.to_string());
                for (m, c) in &p.coeffs {
                    for (k, v) in c.iter().enumerate() {
                        if !v.is_zero() {
                            terms.push(PeriodTermJson { component: k + 1, power: *m, log_power: 0, value: v.to_text() });
                        }
                    }
                }
            }
        }
        PeriodJson {
            level: self.level,
            label: [self.label[0].to_text(), self.label[1].to_text()],
            representation: self.representation,
            center,
            terms,
        }
    }

    pub fn lambda(&self) -> Option<&[LambdaObject; 2]> {
        match &self.body {
            PeriodBody::Lambda(v) => Some(v),
            PeriodBody::Puiseux(_) => None,
        }
    }

    pub fn puiseux(&self) -> Option<&Puiseux> {
        match &self.body {
            PeriodBody::Puiseux(p) => Some(p),
            PeriodBody::Lambda(_) => None,
        }
    }
}

/// Basis label `e_i`.
pub fn basis(i: usize) -> [Scalar; 2] {
    if i == 1 {
        [Scalar::one(), Scalar::zero()]
    } else {
        [Scalar::zero(), Scalar::one()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_zero_leading_terms() {
        let v = period_special(0, &basis(1), (-6, 2), Representation::Closed).unwrap();
        let v = v.lambda().unwrap();
        assert_eq!(v[0].scalar_coefficient(-1, 0), Scalar::one());
        assert_eq!(v[0].scalar_coefficient(-3, 0), Scalar::int(2));
        assert_eq!(v[0].scalar_coefficient(-5, 0), Scalar::int(6));
        assert_eq!(v[1].scalar_coefficient(0, 0), Scalar::frac(1, 2));
        assert_eq!(v[1].scalar_coefficient(-2, 0), Scalar::one());
        assert_eq!(v[1].scalar_coefficient(-4, 0), Scalar::int(3));
    }

    #[test]
    fn polynomial_difference_at_minus_one() {
        let p1 = polynomial_part(1, -1, (-3, 3));
        let p2 = polynomial_part(2, -1, (-3, 3));
        let d0 = p2[0].sub(&p1[0]);
        let d1 = p2[1].sub(&p1[1]);
        assert_eq!(d0.scalar_coefficient(0, 0), &Scalar::pi() * &Scalar::i());
        assert!(d1.is_zero());
    }

    #[test]
    fn reflections() {
        let g1 = MonodromyElement::new(vec![1]);
        assert_eq!(g1.matrix(), [[-1, -2], [0, 1]]);
        let g2 = MonodromyElement::new(vec![2]);
        assert_eq!(g2.matrix(), [[1, 0], [-2, -1]]);
    }
}
