use dirlap_core::generators::{make_ladder, make_random_balanced, make_tree, LadderMeasure, LadderSpec, TreeSpec};
use dirlap_core::spectral::certificate::{maccretive_certificate, CertificateOptions};
use dirlap_core::spectral::cheeger::CheegerMethod;

#[test]
fn tree_certificate_is_positive() {
    let g = make_tree(&TreeSpec::new(4)).unwrap();
    let c = maccretive_certificate(&g, g.vertex("v0").unwrap(), 3, &CertificateOptions::default()).unwrap();
    assert!(c.verdict);
    assert_eq!(c.asymmetry_constant, 4.0);
    assert!(c.hypothesis("constant_measure").unwrap().supported);
    assert!(c.conclusion("m_sectorial").unwrap().supported);
    let cheeger = c.cheeger.as_ref().unwrap();
    assert!(!cheeger.exact && matches!(cheeger.method, CheegerMethod::Nested { .. }));
    assert!(cheeger.h > 0.0 && cheeger.holds);
    assert!(c.conclusion("m_sectorial_nonnegative_vertex").unwrap().supported);
}

#[test]
fn ladder_certificate_reports_growing_gamma() {
    let g = make_ladder(&LadderSpec::new(30, LadderMeasure::SqrtN)).unwrap();
    let c = maccretive_certificate(&g, g.vertex("x0").unwrap(), 20, &CertificateOptions::default()).unwrap();
    assert!(c.verdict);
    assert!(c.gamma_growing);
    assert!(!c.hypothesis("bounded_skew_part").unwrap().supported);
    assert!(c.hypothesis("bounded_asymmetry").unwrap().supported);
    assert!(c.hypothesis("cutoff_energy_bounded").unwrap().supported);
    assert!(c.asymmetry_constant <= 12.0);
    assert!(c.sector.holds);
}

#[test]
fn ladder_unit_measure_certificate_uses_cheeger() {
    let g = make_ladder(&LadderSpec::new(25, LadderMeasure::Unit)).unwrap();
    let c = maccretive_certificate(&g, g.vertex("x0").unwrap(), 10, &CertificateOptions::default()).unwrap();
    let cheeger = c.cheeger.as_ref().unwrap();
    // nested balls V_0..V_10 give 2·11/21
    assert_eq!(cheeger.h, 22.0 / 21.0);
    assert_eq!(cheeger.max_degree, 3);
    assert!(cheeger.holds);
}

#[test]
fn small_random_graph_gets_exact_cheeger() {
    let g = make_random_balanced(10, 2, 1.0).unwrap().with_unit_measure();
    let c = maccretive_certificate(&g, g.vertex("v0").unwrap(), 2, &CertificateOptions::default()).unwrap();
    let cheeger = c.cheeger.as_ref().unwrap();
    assert!(cheeger.exact);
    assert!(matches!(cheeger.method, CheegerMethod::BruteForce { certified: true, .. }));
    assert!(c.kirchhoff.balanced);
}

#[test]
fn certificate_is_deterministic() {
    let g = make_random_balanced(14, 9, 1.0).unwrap();
    let root = g.vertex("v3").unwrap();
    let a = serde_json::to_string(&maccretive_certificate(&g, root, 2, &CertificateOptions::default()).unwrap()).unwrap();
    let b = serde_json::to_string(&maccretive_certificate(&g, root, 2, &CertificateOptions::default()).unwrap()).unwrap();
    assert_eq!(a, b);
}
