//! Acceptance suite: one line per criterion, nonzero exit on any failure.
//!
//! All comparisons are exact; the only tolerances are the wall-clock budgets below.

use catalan_frobenius::calibration::{r_matrix, r_matrix_recursive, s_matrix, s_matrix_residue_form, s_matrix_special_closed};
use catalan_frobenius::catalan::{
    catalan_number, count_maps_bruteforce, gluing_census, two_point_bridge, two_point_series, verify_gluing_counts,
    xi_residue_identity, TheoremParams,
};
use catalan_frobenius::frobenius::FrobeniusPoint;
use catalan_frobenius::givental::{flat_vars, two_point_explicit, unstable_01, unstable_02, LinearHamiltonian};
use catalan_frobenius::hirota::{verify_hqe, HqeCaps, HqeSource};
use catalan_frobenius::kdv::{dilaton_residual, string_residual};
use catalan_frobenius::lax::{verify_nls, verify_toda, Flow, IdentityCheck, LaxCaps, TauFrame};
use catalan_frobenius::matrix::Mat2;
use catalan_frobenius::rational::{factorial, Q};
use catalan_frobenius::scalar::Scalar;
use catalan_frobenius::series::{Cap, Monomial, Series, Truncation, Var};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, RngSeed, TestRunner};
use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

const S_ORDER: usize = 8;
const R_ORDER: usize = 8;
const LAX_WEIGHT: u32 = 5;
const PROPERTY_CASES: u32 = 128;

const BUDGET_FAST: Duration = Duration::from_secs(1);
const BUDGET_CATALAN: Duration = Duration::from_secs(10);
const BUDGET_LONG: Duration = Duration::from_secs(600);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn criterion(n: u32, title: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let o = f();
    let took = start.elapsed();
    let in_time = took <= budget;
    let pass = o.pass && in_time;
    println!(
        "[{}] {n}. {title}: {} ({:.2}s, budget {}s{})",
        if pass { "PASS" } else { "FAIL" },
        o.detail,
        took.as_secs_f64(),
        budget.as_secs(),
        if in_time { "" } else { ", over budget" },
    );
    pass
}

fn s_matrix_routes() -> Outcome {
    let p = FrobeniusPoint::special();
    let psi = Scalar::psi();
    let rec = s_matrix(&p, S_ORDER, &psi);
    let res = s_matrix_residue_form(&p, S_ORDER, &psi);
    let mut bad = Vec::new();
    for k in 0..=S_ORDER {
        if rec.mats[k] != res.mats[k] {
            bad.push(format!("routes differ at S_{k}"));
        }
        if k >= 1 && k <= 5 && rec.mats[k] != s_matrix_special_closed(k, &psi) {
            bad.push(format!("closed form differs at S_{k}"));
        }
    }
    let lit = [
        (1, Mat2::new(Scalar::zero(), psi.clone(), Scalar::one(), Scalar::zero())),
        (3, Mat2::new(Scalar::zero(), &psi - &Scalar::int(2), Scalar::frac(1, 2), Scalar::zero())),
        (4, Mat2::new(Scalar::frac(1, 4), Scalar::zero(), Scalar::zero(), &Scalar::frac(-5, 4) + &psi.scale(&Q::new(1, 2)))),
        (5, Mat2::new(Scalar::zero(), &Scalar::frac(-3, 4) + &psi.scale(&Q::new(1, 4)), Scalar::frac(1, 12), Scalar::zero())),
    ];
    for (k, m) in lit {
        if rec.mats[k] != m {
            bad.push(format!("S_{k} differs from the tabulated value"));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("S_0..S_{S_ORDER} agree, S_1..S_5 exact with symbolic psi") } else { bad.join("; ") })
}

fn r_matrix_routes() -> Outcome {
    let p = FrobeniusPoint::special();
    let (closed, rec) = match (r_matrix(&p, R_ORDER), r_matrix_recursive(&p, R_ORDER)) {
        (Ok(a), Ok(b)) => (a, b),
        (a, b) => return outcome(false, format!("construction failed: {:?} {:?}", a.err(), b.err())),
    };
    let same = closed == rec;
    let recursion = (0..R_ORDER).all(|k| closed.recursion_residual(k).is_zero());
    let symplectic = closed.symplectic_product().is_identity();
    outcome(same && recursion && symplectic, format!("closed = recursion: {same}, [R_k+1,U] = (V+k)R_k: {recursion}, symplectic: {symplectic}"))
}

fn double_factorial_odd(k: u32) -> u64 {
    (1..k as u64).step_by(2).product()
}

fn catalan_oracle() -> Outcome {
    let expected = [1u64, 2, 5, 14, 42];
    let mut bad = Vec::new();
    for m in 1..=5u32 {
        let c = count_maps_bruteforce(0, &[2 * m], 12).unwrap_or(u64::MAX);
        if c != expected[m as usize - 1] || Q::from_int(c as i64) != catalan_number(m) {
            bad.push(format!("C_0,{} = {c}", 2 * m));
        }
    }
    for k in 1..=12u32 {
        let total = gluing_census(&[k], 12).map(|c| c.total).unwrap_or(u64::MAX);
        let want = if k % 2 == 0 { double_factorial_odd(k) } else { 0 };
        if total != want {
            bad.push(format!("k = {k}: {total} pairings, expected {want}"));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "Catalan 1,2,5,14,42 and (k-1)!! pairings for k <= 12".to_string() } else { bad.join("; ") })
}

fn theorem() -> Outcome {
    let params = TheoremParams { genus_max: 2, n_max: 3, k_max: 5, euler_max: 3 };
    let r = match verify_gluing_counts(&params) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let mut bad: Vec<String> = r.mismatches.iter().map(|c| format!("g={} k={:?}: {} vs {}", c.genus, c.k, c.pipeline, c.brute_force)).collect();
    let zero = Scalar::zero();
    for m in 0..=4u32 {
        let closed = (&factorial(m + 1) * &factorial(m + 2)).recip();
        let a = 2 * m as usize + 1;
        let count = count_maps_bruteforce(0, &[a as u32 + 1], 14).unwrap_or(0);
        let brute = &Q::from_int(count as i64) / &factorial(a as u32 + 1);
        if unstable_01(a, &zero) != Scalar::rat(closed.clone()) || brute != closed {
            bad.push(format!("(0,1) closed form at m = {m}"));
        }
    }
    for p in 0..=4 {
        for q in 0..=4 {
            let series = two_point_series(p, q);
            if two_point_bridge(p, q, 14).ok() != Some(series) {
                bad.push(format!("(0,2) series at ({p},{q})"));
            }
            let count = count_maps_bruteforce(0, &[p as u32 + 1, q as u32 + 1], 14).unwrap_or(0);
            let brute = &Q::from_int(count as i64) / &(&factorial(p as u32 + 1) * &factorial(q as u32 + 1));
            if unstable_02(p, q, &zero) != Scalar::rat(two_point_explicit(p, q)) || two_point_explicit(p, q) != brute {
                bad.push(format!("(0,2) coefficient at ({p},{q})"));
            }
        }
    }
    let detail = if bad.is_empty() {
        format!("{} coefficients equal brute force; (0,1) and (0,2) closed forms exact", r.comparisons.len())
    } else {
        bad.join("; ")
    };
    outcome(bad.is_empty() && r.ok(), detail)
}

fn xi_bridge() -> Outcome {
    let table = s_matrix(&FrobeniusPoint::special(), 8, &Scalar::psi());
    let mut checked = 0;
    let mut bad = Vec::new();
    for alpha in 1..=2usize {
        for k in 0..=8i64 {
            for a in 0..=10u32 {
                let r = xi_residue_identity(alpha, k, a);
                let want = if a as i64 > k { Scalar::zero() } else { table.get((k - a as i64) as usize).m[alpha - 1][0].clone() };
                checked += 1;
                if r != want {
                    bad.push(format!("alpha={alpha} k={k} a={a}"));
                }
            }
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("{checked} residues exact") } else { bad.join("; ") })
}

fn hirota() -> Outcome {
    let caps = HqeCaps { degree_max: 3, index_max: 2, eps_window: (-2, 2), psi_degree_max: 8 };
    let src = match HqeSource::new(&caps, &Scalar::psi(), 2, 1) {
        Ok(s) => s,
        Err(e) => return outcome(false, e.to_string()),
    };
    let r = match verify_hqe(&src, 2, &[-1, 0, 1]) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let monomials: usize = r.instances.iter().map(|i| i.monomials_checked).sum();
    let nonzero: usize = r.instances.iter().map(|i| i.nonzero.len()).sum();
    let eps = Var::eps();
    let bump = Monomial::from_pairs(&[(eps, -2), (Var::t(1, 0), 2), (Var::t(2, 1), 1), (Var::t(1, 1), 1)]);
    let mutated = src.with_perturbation(Series::term(bump, Scalar::frac(1, 7), &Truncation::none()));
    let caught = match verify_hqe(&mutated, 2, &[-1, 0, 1]) {
        Ok(m) => !m.ok(),
        Err(_) => true,
    };
    outcome(
        r.ok() && monomials > 0 && caught,
        format!("{} instances, {monomials} monomials, {nonzero} nonzero residues; mutation detected: {caught}", r.instances.len()),
    )
}

fn lax_checks(checks: &[IdentityCheck], names: &[&str]) -> Outcome {
    let mut bad = Vec::new();
    for name in names {
        match checks.iter().find(|c| c.name == *name) {
            None => bad.push(format!("{name}: missing")),
            Some(c) if !c.ok() => bad.push(format!("{name}: residual {:?}", c.first_residual)),
            Some(c) if c.compared_terms == 0 => bad.push(format!("{name}: nothing compared")),
            _ => {}
        }
    }
    let terms: usize = names.iter().filter_map(|n| checks.iter().find(|c| c.name == *n)).map(|c| c.compared_terms).sum();
    outcome(bad.is_empty(), if bad.is_empty() { format!("{} identities, {terms} terms at weight {LAX_WEIGHT}", names.len()) } else { bad.join("; ") })
}

fn toda(frame: &TauFrame) -> Outcome {
    match verify_toda(frame, &Flow::all()) {
        Ok(r) => lax_checks(
            &r.checks,
            &[
                "toda flow 1:0",
                "toda flow 1:1",
                "toda flow 2:0",
                "e^u = e^-psi Q/Q(x-eps)",
                "w0 = (eps/2) Q^-1 Q_x",
                "w_-1 = (eps/2)(L-1)^-1 v_x, lowest two eps orders",
            ],
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn nls(frame: &TauFrame) -> Outcome {
    let (t, n) = match (verify_toda(frame, &Flow::all()), verify_nls(frame, &Flow::all())) {
        (Ok(t), Ok(n)) => (t, n),
        (t, n) => return outcome(false, format!("{:?} {:?}", t.err(), n.err())),
    };
    let all: Vec<IdentityCheck> = t.checks.into_iter().chain(n.checks).collect();
    lax_checks(
        &all,
        &[
            "eps v_X = (L-1) e^u",
            "eps u_X = (1-L^-1) v",
            "T S^-1 = D + rho (D - phi)^-1",
            "sato 1:0",
            "sato 1:1",
            "flows 1:0 and 2:1 commute on v",
        ],
    )
}

fn config(seed: u64) -> Config {
    Config {
        cases: PROPERTY_CASES,
        rng_algorithm: RngAlgorithm::ChaCha,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    }
}

fn q() -> impl Strategy<Value = Q> {
    (-9i64..=9, 1i64..=6).prop_map(|(n, d)| Q::new(n, d))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (q(), q()).prop_map(|(a, b)| &Scalar::rat(a) + &(&Scalar::rat(b) * &Scalar::psi()))
}

fn abe() -> [Var; 3] {
    [Var::named("a"), Var::named("b"), Var::eps()]
}

fn degree_cap(max: i64) -> Arc<Truncation> {
    Truncation::new(vec![Cap::degree("deg", &abe(), max)])
}

type Rows = Vec<(i32, i32, i32, Scalar)>;

fn poly(rows: &Rows, tr: &Arc<Truncation>) -> Series {
    let v = abe();
    let mut s = Series::zero(tr);
    for (i, j, k, c) in rows {
        s.add_term(Monomial::from_pairs(&[(v[0], *i), (v[1], *j), (v[2], *k)]), c.clone());
    }
    s
}

fn rows(min_total: i32) -> impl Strategy<Value = Rows> {
    prop::collection::vec((0i32..=3, 0i32..=3, 0i32..=2, scalar()), 1..6)
        .prop_map(move |v| v.into_iter().filter(|(i, j, k, _)| i + j + k >= min_total).collect())
}

fn same(a: &Series, b: &Series) -> bool {
    a.sub(b).is_zero()
}

fn hamiltonian() -> impl Strategy<Value = LinearHamiltonian> {
    prop::collection::vec((-3i64..=2, scalar(), scalar()), 1..5).prop_map(|v| {
        let mut coeffs = BTreeMap::new();
        for (l, a, b) in v {
            coeffs.insert(l, [a, b]);
        }
        LinearHamiltonian { coeffs }
    })
}

fn vec2() -> impl Strategy<Value = [Q; 2]> {
    (q(), q()).prop_map(|(a, b)| [a, b])
}

fn run_suite<S: Strategy>(seed: u64, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    TestRunner::new(config(seed)).run(&strategy, test).map_err(|e| e.to_string())
}

fn properties() -> Outcome {
    let mut results: Vec<(&str, Result<(), String>)> = Vec::new();

    let fock = prop::collection::vec((0usize..3, 0usize..2, 0usize..3, 0usize..2, scalar()), 1..5);
    results.push((
        "quantization commutator",
        run_suite(0xacc0_0001, (hamiltonian(), hamiltonian(), fock), |(f1, f2, rows)| {
            let vars = flat_vars(2);
            let mut f = Series::one(&Truncation::none());
            for (a, al, b, be, c) in rows {
                f.add_term(Monomial::from_pairs(&[(vars[a][al], 1)]).mul(&Monomial::from_pairs(&[(vars[b][be], 1)])), c);
            }
            let lhs = f1.apply(&f2.apply(&f, &vars), &vars).sub(&f2.apply(&f1.apply(&f, &vars), &vars));
            prop_assert!(same(&lhs, &f.scale(&f1.omega(&f2))));
            Ok(())
        }),
    ));

    let point = (q(), (1i64..=5, 1i64..=4), prop::bool::ANY).prop_filter_map("singular point", |(t1, (n, d), two)| {
        let r = Q::new(n, d);
        let r4 = &(&r * &r) * &(&r * &r);
        FrobeniusPoint::new(t1, if two { r4 } else { &Q::from_int(4) * &r4 }).ok()
    });
    results.push((
        "WDVV",
        run_suite(0xacc0_0002, (point, vec2(), vec2(), vec2()), |(p, x, y, z)| {
            prop_assert_eq!(p.product(&p.product(&x, &y), &z), p.product(&x, &p.product(&y, &z)));
            let low = p.lowered_constants();
            prop_assert_eq!(&low[0][0][1], &Q::one());
            prop_assert_eq!(&low[1][1][1], &p.t2.recip());
            prop_assert_eq!(&low[0][0][0], &Q::zero());
            prop_assert_eq!(&low[0][1][1], &Q::zero());
            Ok(())
        }),
    ));

    let parts = (0u32..=3, prop::collection::vec(0u32..=6, 0..=4)).prop_filter("unstable", |(g, p)| 2 * *g as i64 - 1 + p.len() as i64 > 0);
    results.push((
        "string and dilaton",
        run_suite(0xacc0_0003, parts, |(g, p)| {
            prop_assert!(string_residual(g, &p).is_zero());
            prop_assert!(dilaton_residual(g, &p).is_zero());
            Ok(())
        }),
    ));

    results.push((
        "truncation coherence",
        run_suite(0xacc0_0004, (rows(0), rows(1)), |(ra, rb)| {
            let (big, small) = (degree_cap(7), degree_cap(3));
            let (a7, b7) = (poly(&ra, &big), poly(&rb, &big));
            let (a3, b3) = (poly(&ra, &small), poly(&rb, &small));
            prop_assert!(same(&a7.mul(&b7).with_truncation(&small), &a3.mul(&b3)));
            prop_assert!(same(&a7.mul(&b7.exp().unwrap()).with_truncation(&small), &a3.mul(&b3.exp().unwrap())));
            Ok(())
        }),
    ));

    results.push((
        "exp/log inversion",
        run_suite(0xacc0_0005, rows(1), |rf| {
            let tr = degree_cap(6);
            let f = poly(&rf, &tr);
            prop_assert!(same(&f.exp().unwrap().log().unwrap(), &f));
            let one_plus = Series::one(&tr).add(&f);
            prop_assert!(same(&one_plus.log().unwrap().exp().unwrap(), &one_plus));
            Ok(())
        }),
    ));

    let failed: Vec<String> = results.iter().filter_map(|(n, r)| r.as_ref().err().map(|e| format!("{n}: {e}"))).collect();
    let detail = if failed.is_empty() {
        format!("{} suites x {PROPERTY_CASES} cases, fixed seeds, zero failures", results.len())
    } else {
        failed.join("; ")
    };
    outcome(failed.is_empty(), detail)
}

fn main() {
    let mut ok = true;
    ok &= criterion(1, "S-matrix routes and special values", BUDGET_FAST, s_matrix_routes);
    ok &= criterion(2, "R-matrix closed form, recursion, symplecticity", BUDGET_FAST, r_matrix_routes);
    ok &= criterion(3, "Catalan oracle", BUDGET_CATALAN, catalan_oracle);
    ok &= criterion(4, "gluing counts against log D", BUDGET_LONG, theorem);
    ok &= criterion(5, "xi-residue bridge", BUDGET_FAST, xi_bridge);
    ok &= criterion(6, "Hirota residues and mutation", BUDGET_LONG, hirota);
    let start = Instant::now();
    let frame = TauFrame::new(&LaxCaps { weight_max: LAX_WEIGHT }, &Scalar::psi());
    let setup = start.elapsed();
    match frame {
        Ok(frame) => {
            println!("       tau frame at weight {LAX_WEIGHT} built in {:.2}s", setup.as_secs_f64());
            ok &= criterion(7, "extended Toda", BUDGET_LONG, || toda(&frame));
            ok &= criterion(8, "extended NLS", BUDGET_LONG, || nls(&frame));
        }
        Err(e) => {
            println!("[FAIL] 7. extended Toda: tau frame failed: {e}");
            println!("[FAIL] 8. extended NLS: tau frame failed: {e}");
            ok = false;
        }
    }
    ok &= criterion(9, "property suites", BUDGET_LONG, properties);
    println!("acceptance: {}", if ok { "all criteria pass" } else { "FAILED" });
    if !ok {
        std::process::exit(1);
    }
}
