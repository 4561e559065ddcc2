use catalan_frobenius::lax::{
    fundamental_lemma_instance, lax_data, verify_nls, verify_toda, Flow, LaxCaps, LaxData, LaxReport, TauFrame,
};
use catalan_frobenius::operators::big_x_var;
use catalan_frobenius::rational::Q;
use catalan_frobenius::scalar::Scalar;
use catalan_frobenius::series::{Monomial, Series, Var};
use std::sync::OnceLock;

fn frame(w: u32, psi: Scalar) -> TauFrame {
    TauFrame::new(&LaxCaps { weight_max: w }, &psi).unwrap()
}

fn symbolic5() -> &'static TauFrame {
    static F: OnceLock<TauFrame> = OnceLock::new();
    F.get_or_init(|| frame(5, Scalar::psi()))
}

fn rational4() -> &'static TauFrame {
    static F: OnceLock<TauFrame> = OnceLock::new();
    F.get_or_init(|| frame(4, Scalar::frac(1, 3)))
}

fn assert_all(r: &LaxReport) {
    for c in &r.checks {
        assert!(c.ok(), "{} failed at weight {}: {:?}", c.name, c.weight_checked, c.first_residual);
        assert!(c.compared_terms > 0, "{} compared nothing", c.name);
    }
}

#[test]
fn toda_identities_with_symbolic_psi() {
    let r = verify_toda(symbolic5(), &Flow::all()).unwrap();
    assert_all(&r);
    for name in [
        "toda flow 1:0",
        "toda flow 1:1",
        "toda flow 2:0",
        "toda flow 2:1",
        "e^u = e^-psi Q/Q(x-eps)",
        "w0 = (eps/2) Q^-1 Q_x",
        "w_-1 = (eps/2)(L-1)^-1 v_x, lowest two eps orders",
        "flows 1:0 and 2:1 commute on v",
        "eps dv/dq2_1: Lax equation = direct",
        "sigma(L) = L",
    ] {
        assert!(r.check(name).is_some(), "missing {name}");
    }
}

#[test]
fn nls_identities_with_symbolic_psi() {
    let r = verify_nls(symbolic5(), &Flow::all()).unwrap();
    assert_all(&r);
    for name in ["sato 1:0", "sato 1:1", "sato 2:0", "T S^-1 = D + rho (D - phi)^-1", "Pt(-D)* = P(D)^-1"] {
        assert!(r.check(name).is_some(), "missing {name}");
    }
    assert!(r.check("log consistency D^-2").unwrap().weight_checked >= 2);
}

#[test]
fn identities_at_rational_psi() {
    let f = rational4();
    assert_all(&verify_toda(f, &[Flow::new(1, 0), Flow::new(1, 1), Flow::new(2, 0)]).unwrap());
    assert_all(&verify_nls(f, &[Flow::new(1, 0), Flow::new(1, 1), Flow::new(2, 0)]).unwrap());
}

#[test]
fn psi_does_not_survive_in_the_lattice_data() {
    let f = symbolic5();
    let r = rational4();
    let at = |s: &Series| s.map_coeffs(|c| c.eval_symbols(Some(&Q::new(1, 3)), None));
    let cut = |s: &Series| s.filter(|m| catalan_frobenius::operators::weight(m) <= 4);
    assert_eq!(cut(&at(&f.exp_u)).sub(&cut(&r.exp_u)).len(), 0);
    assert_eq!(cut(&at(&f.rho)).sub(&cut(&r.rho)).len(), 0);
}

#[test]
fn log_positive_parts_differ_termwise() {
    let r = verify_nls(rational4(), &[]).unwrap();
    let diffs: Vec<_> = r.diagnostics.iter().filter(|c| c.name.starts_with("log positive part")).collect();
    assert_eq!(diffs.len(), 3);
    for c in diffs {
        assert!(c.compared_terms > 0);
        assert!(!c.ok(), "{} unexpectedly agrees", c.name);
    }
}

#[test]
fn perturbed_v_is_detected() {
    let mut f = rational4().clone();
    let eps = Var::eps();
    let bump = Series::term(
        Monomial::from_pairs(&[(eps, 2), (big_x_var(), 1)]),
        Scalar::one(),
        catalan_frobenius::operators::free(),
    );
    f.v = f.v.add(&bump);
    let r = verify_toda(&f, &[Flow::new(1, 0)]).unwrap();
    for name in ["dressing P+ L P+^-1 = L", "eps v_X = (L-1) e^u", "toda flow 1:0"] {
        assert!(!r.check(name).unwrap().ok(), "{name} missed the perturbation");
    }
    let r = verify_nls(&f, &[]).unwrap();
    assert!(!r.check("phi(x) = v(x - eps/2)").unwrap().ok());
}

#[test]
fn perturbed_rho_breaks_the_nls_operator() {
    let mut f = rational4().clone();
    f.rho = f.rho.add(&Series::term(
        Monomial::from_pairs(&[(Var::t(1, 1), 2)]),
        Scalar::int(3),
        catalan_frobenius::operators::free(),
    ));
    let r = verify_nls(&f, &[Flow::new(1, 0)]).unwrap();
    assert!(!r.check("P D P^-1 = L").unwrap().ok());
    assert!(!r.check("sato 1:0").unwrap().ok());
}

#[test]
fn fundamental_lemma_polynomial_instances() {
    for b in [[1, 0, 0], [0, 1, 0], [0, 0, 1], [2, -3, 5], [-1, 7, -4]] {
        let (lhs, rhs) = fundamental_lemma_instance(b.map(Q::from_int));
        assert_eq!(lhs.sub(&rhs).len(), 0, "b = {b:?}");
        assert!(!lhs.is_zero());
    }
}

#[test]
fn lax_data_matches_golden_file() {
    let data = lax_data(&frame(3, Scalar::zero()));
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/lax_data_w3_psi0.json")).unwrap();
    let golden: LaxData = serde_json::from_str(&text).unwrap();
    assert_eq!(data, golden);
}

#[test]
fn lax_data_low_order_terms() {
    let data = lax_data(&frame(3, Scalar::zero()));
    let has = |rows: &[(String, String)], m: &str, c: &str| rows.iter().any(|(a, b)| a == m && b == c);
    assert!(has(&data.v, "t1_0", "1"));
    assert!(has(&data.u, "t1_1", "1"));
    assert!(has(&data.u, "t2_0", "1"));
    assert!(has(&data.u, "eps", "-1/2"));
    assert!(has(&data.phi, "t1_0", "1"));
}

#[test]
fn flow_parsing() {
    assert_eq!(Flow::parse("2:1"), Some(Flow::new(2, 1)));
    assert_eq!(Flow::parse("3:0"), None);
    assert_eq!(Flow::parse("x"), None);
    assert_eq!(Flow::new(1, 1).to_string(), "1:1");
}

#[test]
fn caps_mapping() {
    assert_eq!(LaxCaps::from_degree_eps(3, (-2, 2)).weight_max, 5);
    assert_eq!(LaxCaps::from_degree_eps(4, (-2, 0)).weight_max, 4);
}
