use planar_crn::construct::{
    build_christopher, build_general, check_invariant_curve, classify_transversality,
    gradient_drift, product_curve, Stability,
};
use planar_crn::curves::{
    catalog, default_resolution, extract_ovals, parse_params, three_oval, CurveSpec, Window,
};
use planar_crn::poly::{int, Poly2, Rat};
use planar_crn::presets::{christopher_line, unit_square_drift};
use planar_crn::realize::check_s_n;

const TAU: f64 = 1e-9;

fn spec(name: &str, params: &str) -> CurveSpec {
    catalog(name, &parse_params(params).unwrap()).unwrap()
}

#[test]
fn gradient_drift_makes_every_positive_oval_stable() {
    for s in [
        spec("q-shifted", "mu=39"),
        spec("q-shifted", "mu=0"),
        spec("product", "delta1=1,delta2=2"),
        spec("wr-small", ""),
    ] {
        let ovals = extract_ovals(&s, 256).unwrap();
        let (f0, g0) = gradient_drift(&s.poly);
        let v = classify_transversality(&s.poly, &f0, &g0, &ovals, TAU).unwrap();
        assert!(
            v.tags().iter().all(|t| *t == Stability::Stable),
            "{}",
            s.name
        );
    }
}

#[test]
fn product_ovals_alternate_in_stability() {
    let deltas: Vec<Rat> = (1..=4).map(int).collect();
    let h = product_curve(&deltas).unwrap();
    let s = CurveSpec {
        name: "product".into(),
        poly: h.clone(),
        params: Default::default(),
        window: Window::square(0.0, 3.5),
        expected_ovals: Some(4),
    };
    let ovals = extract_ovals(&s, 512).unwrap();
    let (f0, g0) = unit_square_drift();
    let tags = classify_transversality(&h, &f0, &g0, &ovals, TAU)
        .unwrap()
        .tags();
    // Smallest oval belongs to delta = 1.
    let by_delta: Vec<Stability> = ovals.by_area().into_iter().map(|i| tags[i]).collect();
    assert_eq!(
        by_delta,
        [
            Stability::Unstable,
            Stability::Stable,
            Stability::Unstable,
            Stability::Stable
        ]
    );
}

#[test]
fn christopher_three_oval_system() {
    let h = three_oval();
    let sys = build_christopher(&h, &christopher_line()).unwrap();
    assert!(check_s_n(&sys, 4).member);
    let r = check_invariant_curve(&h, &sys).unwrap();
    assert_eq!(r.cofactor.unwrap(), &h.dx() + &h.dy());
    let ovals = extract_ovals(&spec("three-oval", ""), default_resolution("three-oval")).unwrap();
    assert_eq!(ovals.len(), 3);
    let one = Poly2::one();
    let tags = classify_transversality(&h, &one, &one, &ovals, TAU)
        .unwrap()
        .tags();
    assert!(tags.iter().all(|t| *t == Stability::Mixed));
}

#[test]
fn cofactor_ignores_eps_for_catalog_curves() {
    let (f0, g0) = unit_square_drift();
    let h = spec("h9", "").poly;
    let want = &(&f0 * &h.dx()) + &(&g0 * &h.dy());
    for eps in [0, 1, 7] {
        let sys = build_general(&h, &f0, &g0, &int(eps));
        assert_eq!(
            check_invariant_curve(&h, &sys).unwrap().cofactor.unwrap(),
            want
        );
    }
}
