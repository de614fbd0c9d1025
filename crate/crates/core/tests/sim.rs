use planar_crn::construct::{build_general, build_gradient, product_curve};
use planar_crn::crn::derive_mass_action;
use planar_crn::crn::PlanarSystem;
use planar_crn::curves::{catalog, extract_ovals, parse_params, CurveSpec, Window};
use planar_crn::poly::{int, rat, Rat};
use planar_crn::presets::{escher_system, linear_drift, lotka_volterra, unit_square_drift};
use planar_crn::realize::realize_s_n;
use planar_crn::sim::{integrate, monotone_residual_check, sweep, SimConfig, Status, Target};

fn target(spec: &CurveSpec, resolution: usize) -> Target {
    Target {
        h: spec.poly.clone(),
        ovals: extract_ovals(spec, resolution).unwrap(),
    }
}

fn fig5_starts() -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = (1..16)
        .map(|k| {
            let s = k as f64;
            match k / 4 {
                0 => (s, 0.0),
                1 => (4.0, s - 4.0),
                2 => (12.0 - s, 4.0),
                _ => (0.0, 16.0 - s),
            }
        })
        .collect();
    out.extend([(2.0, 1.0), (1.0, 2.0), (3.0, 3.0)]);
    out
}

fn q_shifted(mu: i64) -> CurveSpec {
    catalog("q-shifted", &parse_params(&format!("mu={mu}")).unwrap()).unwrap()
}

#[test]
fn error_scales_with_fifth_power_of_step() {
    // x' = 1 - x, y' = x - y on [0, 5].
    let sys = PlanarSystem::new("1 - x".parse().unwrap(), "x - y".parse().unwrap());
    let (x0, y0) = (3.0, 0.5);
    let t: f64 = 5.0;
    let e = (-t).exp();
    let exact = (
        1.0 + (x0 - 1.0) * e,
        1.0 + (x0 - 1.0) * t * e + (y0 - 1.0) * e,
    );
    let mut pts = Vec::new();
    for tol in [1e-5, 1e-6, 1e-7, 1e-8] {
        let cfg = SimConfig {
            rel_tol: tol,
            abs_tol: tol,
            t_max: t,
            ..Default::default()
        };
        let tr = integrate(&sys, (x0, y0), &cfg, None);
        let (_, x, y) = tr.terminal().unwrap();
        let err = (x - exact.0).abs().max((y - exact.1).abs());
        let mean_step = t / tr.accepted_steps as f64;
        pts.push((mean_step.ln(), err.ln()));
    }
    let n = pts.len() as f64;
    let (mx, my) = (
        pts.iter().map(|p| p.0).sum::<f64>() / n,
        pts.iter().map(|p| p.1).sum::<f64>() / n,
    );
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!((4.0..6.0).contains(&slope), "slope {slope}");
}

#[test]
fn sweep_preserves_order() {
    let spec = catalog("wr-small", &Default::default()).unwrap();
    let tg = target(&spec, 256);
    let (f0, g0) = linear_drift();
    let sys = build_general(&spec.poly, &f0, &g0, &int(1));
    let starts = fig5_starts();
    let cfg = SimConfig::default();
    let batch = sweep(&sys, &starts, &cfg, Some(&tg));
    for (s, tr) in starts.iter().zip(&batch) {
        assert_eq!(tr, &integrate(&sys, *s, &cfg, Some(&tg)));
    }
}

#[test]
fn mass_action_trajectories_stay_nonnegative() {
    let cfg = SimConfig {
        t_max: 20.0,
        ..Default::default()
    };
    let lv = derive_mass_action(&lotka_volterra(&int(1), &int(1), &int(1)));
    let escher = derive_mass_action(&realize_s_n(&escher_system()).unwrap());
    let spec = catalog("wr-small", &Default::default()).unwrap();
    let (f0, g0) = linear_drift();
    let wr = build_general(&spec.poly, &f0, &g0, &int(1));
    for sys in [lv, escher, wr] {
        for tr in sweep(&sys, &fig5_starts(), &cfg, None) {
            assert_ne!(tr.status, Status::LeftDomain);
            assert!(tr.samples.iter().all(|s| s.1.min(s.2) > -cfg.abs_tol));
        }
    }
}

#[test]
fn equilibria_on_the_curve_when_eps_is_zero() {
    let spec = catalog("wr-small", &Default::default()).unwrap();
    let tg = target(&spec, 256);
    let (f0, g0) = linear_drift();
    let sys = build_general(&spec.poly, &f0, &g0, &Rat::from_integer(0.into()));
    let cfg = SimConfig {
        stop_on_converge: false,
        ..Default::default()
    };
    let (f, g) = (sys.f.lower(), sys.g.lower());
    let half = SimConfig {
        rel_tol: cfg.rel_tol / 2.0,
        abs_tol: cfg.abs_tol / 2.0,
        ..cfg
    };
    let a = sweep(&sys, &fig5_starts(), &cfg, Some(&tg));
    let b = sweep(&sys, &fig5_starts(), &half, Some(&tg));
    for (ta, tb) in a.iter().zip(&b) {
        let (t, x, y) = ta.terminal().unwrap();
        assert_eq!(t, cfg.t_max);
        assert!(f.eval(x, y).hypot(g.eval(x, y)) < 1e-8);
        assert!(*ta.h_residuals.last().unwrap() < 1e-6);
        let (_, x2, y2) = tb.terminal().unwrap();
        let tol = |v: f64| 10.0 * (cfg.rel_tol * v.abs() + cfg.abs_tol);
        assert!(
            (x - x2).abs() < tol(x) && (y - y2).abs() < tol(y),
            "({x}, {y}) vs ({x2}, {y2})"
        );
    }
}

#[test]
fn gradient_residuals_decrease() {
    let spec = q_shifted(39);
    let tg = target(&spec, 256);
    let sys = build_gradient(&spec.poly, &int(1));
    let starts: Vec<(f64, f64)> = (0..20)
        .map(|k| (0.5 + (k % 5) as f64, 0.5 + 4.0 * (k / 5) as f64 / 3.0))
        .collect();
    for tr in sweep(&sys, &starts, &SimConfig::default(), Some(&tg)) {
        assert!(tr.is_converged());
        assert!(monotone_residual_check(&tr));
    }
}

#[test]
fn nearest_oval_is_stable_under_refinement() {
    let spec = q_shifted(39);
    let coarse = target(&spec, 128);
    let fine = target(&spec, 256);
    let sys = build_gradient(&spec.poly, &int(1));
    let starts = [(0.5, 0.5), (4.5, 0.5), (0.5, 4.5), (4.5, 4.5), (1.9, 2.1)];
    let a = sweep(&sys, &starts, &SimConfig::default(), Some(&coarse));
    let b = sweep(&sys, &starts, &SimConfig::default(), Some(&fine));
    for (ta, tb) in a.iter().zip(&b) {
        let (i, j) = (ta.oval().unwrap(), tb.oval().unwrap());
        let ca = coarse.ovals.bounds(i);
        let cb = fine.ovals.bounds(j);
        assert!((ca.0 - cb.0).abs() < 0.05 && (ca.3 - cb.3).abs() < 0.05);
    }
}

#[test]
fn product_system_settles_on_outer_oval() {
    let deltas: Vec<Rat> = (1..=4).map(int).collect();
    let spec = CurveSpec {
        name: "product".into(),
        poly: product_curve(&deltas).unwrap(),
        params: Default::default(),
        window: Window::square(0.0, 3.5),
        expected_ovals: Some(4),
    };
    let tg = target(&spec, 512);
    let outer = *tg.ovals.by_area().last().unwrap();
    let (f0, g0) = unit_square_drift();
    let sys = build_general(&spec.poly, &f0, &g0, &rat(1, 10));
    let corners = [(0.0, 0.0), (3.5, 0.0), (0.0, 3.5), (3.5, 3.5)];
    for tr in sweep(&sys, &corners, &SimConfig::default(), Some(&tg)) {
        assert_eq!(tr.oval(), Some(outer));
    }
}
