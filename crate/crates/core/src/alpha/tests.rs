use approx::assert_relative_eq;

use super::*;
use crate::manifold::Manifold;
use crate::problems::from_id;

#[test]
fn psi_examples() {
    assert_eq!(psi(0.0), 1.0);
    assert!(psi(psi_root()).abs() < 1e-15);
    assert_relative_eq!(psi(0.1), 0.62, epsilon = 1e-15);
    let mut prev = psi(0.0);
    for i in 1..=100 {
        let v = psi(psi_root() * i as f64 / 100.0);
        assert!(v < prev);
        prev = v;
    }
}

#[test]
fn constants_match_their_definitions() {
    let c = compute_constants();
    let r = c.residuals();
    for v in [r.alpha0, r.sigma, r.s0, r.nu0, r.t0] {
        assert!(v.abs() <= 1e-12, "{r:?}");
    }
    assert_relative_eq!(c.alpha0, 0.130716944, epsilon = 1e-8);
    assert_relative_eq!(c.sigma, 1.632843018, epsilon = 1e-8);
    assert_relative_eq!(c.s0, 0.103621842, epsilon = 1e-8);
    assert_relative_eq!(c.nu0, 0.069778332, epsilon = 1e-8);
    assert_relative_eq!(c.t0, 0.075262346, epsilon = 1e-8);
    assert_eq!(*constants(), c);
}

#[test]
fn classic_radius_examples() {
    let b = Spreading::Bounded(1.0);
    let r = gamma_radius(b, 1.0, f64::INFINITY).unwrap();
    assert_relative_eq!(r.value, (3.0 - 7f64.sqrt()) / 2.0, epsilon = 1e-15);
    assert_relative_eq!(r.value, 0.17712434446770464, epsilon = 1e-15);
    assert_eq!(r.binding_term, BindingTerm::CurvatureGammaTerm);

    let r = gamma_radius(b, 2.0, 0.05).unwrap();
    assert_eq!((r.value, r.binding_term), (0.05, BindingTerm::InjectivityRadius));

    let r = gamma_radius(Spreading::Bounded(2.0), 1.0, f64::INFINITY).unwrap();
    assert_relative_eq!(r.value, (4.0 - 14f64.sqrt()) / 2.0, epsilon = 1e-15);

    assert_eq!(gamma_radius(b, f64::INFINITY, 1.0), Err(Error::DegenerateRadius));
    assert_eq!(
        gamma_radius(Spreading::DeclaredUnbounded, 1.0, 1.0),
        Err(Error::UnboundedSpreading)
    );
    for g in [1e-3, 0.7, 1.0, 42.0] {
        let r = gamma_radius(b, g, f64::INFINITY).unwrap();
        assert_relative_eq!(r.value * 2.0 * g, 3.0 - 7f64.sqrt(), epsilon = 1e-14);
    }
}

#[test]
fn classic_radius_is_monotone() {
    let ks = [1.0, 1.5, 2.0, 5.0, 10.0, 100.0];
    let gs = [0.1, 0.5, 1.0, 3.0];
    let rs = [0.01, 0.1, 1.0, f64::INFINITY];
    let rad = |k: f64, g: f64, r: f64| gamma_radius(Spreading::Bounded(k), g, r).unwrap().value;
    for w in ks.windows(2) {
        for g in gs {
            for r in rs {
                assert!(rad(w[1], g, r) <= rad(w[0], g, r));
            }
        }
    }
    for w in gs.windows(2) {
        for k in ks {
            assert!(rad(k, w[1], 1.0) <= rad(k, w[0], 1.0));
        }
    }
    for w in rs.windows(2) {
        for k in ks {
            assert!(rad(k, 1.0, w[1]) >= rad(k, 1.0, w[0]));
        }
    }
}

#[test]
fn alternative_radius_examples() {
    let r = gamma_radius_alt(1.0, f64::INFINITY).unwrap();
    assert_relative_eq!(r.value, 0.069778332, epsilon = 1e-8);
    let r = gamma_radius_alt(1e9, 1.0).unwrap();
    assert_relative_eq!(r.value, 0.069778332e-9, epsilon = 1e-17);
    assert_eq!(r.binding_term, BindingTerm::AltGammaTerm);
    let r = gamma_radius_alt(0.001, 1.0).unwrap();
    assert_relative_eq!(r.value, 0.075262346, epsilon = 1e-8);
    assert_eq!(r.binding_term, BindingTerm::AltInjectivityTerm);
    assert_eq!(gamma_radius_alt(f64::INFINITY, 1.0), Err(Error::DegenerateRadius));
}

#[test]
fn comparator_examples() {
    let inf = f64::INFINITY;
    assert_eq!(radius_comparator(1.0, 1.0, inf).unwrap(), RadiusComparison::ClassicSharper);
    assert_eq!(radius_comparator(10.0, 1.0, inf).unwrap(), RadiusComparison::AltSharper);
    assert_eq!(radius_comparator(5.235326440, 1.0, inf).unwrap(), RadiusComparison::Equal);
    let k = crossover_by_bisection();
    assert_relative_eq!(k, constants().crossover_spreading(), epsilon = 1e-9);
    assert_relative_eq!(k, 5.235326440, epsilon = 1e-6);
}

#[test]
fn certify_examples() {
    let p = from_id("quad1d").unwrap();
    let m = p.manifold();
    let cert = alpha_certify(&p, &m.point(vec![1.1]).unwrap(), &GammaOptions::default());
    assert_eq!(cert.verdict, Verdict::Certified);
    assert_relative_eq!(cert.beta, 0.0954545454545, epsilon = 1e-12);
    assert_relative_eq!(cert.gamma.lower, 1.0 / 2.2, epsilon = 1e-12);
    assert_relative_eq!(cert.alpha_lower, 0.0433884297520, epsilon = 1e-12);
    let bound = cert.root_distance_bound.unwrap();
    // sigma * 0.21 / 2.2; the rounded hand value 0.1558625 is 2e-7 high
    assert_relative_eq!(bound, 1.632843018044 * 0.21 / 2.2, epsilon = 1e-11);
    assert_relative_eq!(bound, 0.1558625, epsilon = 5e-7);
    assert!(0.1 <= bound);
    assert_eq!(cert.alpha_upper, cert.beta * cert.gamma.upper);

    let cert = alpha_certify(&p, &m.point(vec![1.0]).unwrap(), &GammaOptions::default());
    assert_eq!(cert.verdict, Verdict::Certified);
    assert_eq!((cert.beta, cert.alpha_upper, cert.root_distance_bound), (0.0, 0.0, Some(0.0)));

    let cert = alpha_certify(&p, &m.point(vec![0.0]).unwrap(), &GammaOptions::default());
    assert_eq!(cert.verdict, Verdict::SingularDerivative);
    assert!(serde_json::to_string(&cert).unwrap().contains("\"inf\""));
}

#[test]
fn separation_examples() {
    let p = from_id("eigen:diag(1,2,3)").unwrap();
    let m = p.manifold();
    let e = |i: usize| {
        let mut v = vec![0.0; 3];
        v[i] = 1.0;
        m.point(v).unwrap()
    };
    for i in 0..3 {
        let r = separation_bound(&p, &e(i), &GammaOptions::default()).unwrap();
        assert!(r.value > 0.0 && r.value < std::f64::consts::FRAC_PI_2);
        for j in 0..3 {
            if i != j {
                assert!(crate::manifold::distance(&e(i), &e(j)) > r.value);
            }
        }
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let off = m.point(vec![s, 0.0, s]).unwrap();
    assert!(matches!(
        separation_bound(&p, &off, &GammaOptions::default()),
        Err(Error::NotAZero { .. })
    ));

    let lin = from_id("linear:3").unwrap();
    let r = separation_bound(&lin, &lin.known_zeros()[0], &GammaOptions::default()).unwrap();
    assert_eq!(r.value, f64::INFINITY);

    // unbounded spreading falls back to the alternative radius
    let h = from_id("hyper-shift:[0.3,-0.2]").unwrap();
    let r = separation_bound(&h, &h.known_zeros()[0], &GammaOptions::default()).unwrap();
    assert!(matches!(r.binding_term, BindingTerm::AltGammaTerm | BindingTerm::AltInjectivityTerm));
    assert_eq!(h.manifold(), Manifold::Hyperbolic(2));
}

#[test]
fn lemma_suite_on_eigen_field() {
    let p = from_id("eigen:diag(1,2,3)").unwrap();
    let zeta = p.manifold().point(vec![0.0, 0.0, 1.0]).unwrap();
    let report = lemma_suite(&p, &zeta, 60, 3, &GammaOptions::default()).unwrap();
    assert!(report.center_is_zero);
    for l in &report.lemmas {
        assert!(l.holds(), "{l:?}");
        assert!(l.samples > 0, "{l:?}");
    }
    assert!(report.all_hold);
    let empty = lemma_suite(&p, &zeta, 0, 3, &GammaOptions::default()).unwrap();
    assert!(empty.all_hold && empty.warning.is_some());
}

#[test]
fn lemma_scalar_checks() {
    assert!(lemmas::spreading_factor_check().holds);
    assert!(lemmas::spreading_contraction_check().holds);
    assert!(lemmas::binomial_series_check().holds);
    let nu = classic_factor(1.0);
    assert_relative_eq!(nu, 0.1771243444677046, epsilon = 1e-15);
    assert!(nu < 0.2928932);
    assert!(nu / psi(nu) <= 0.5 + 1e-15);
}

#[test]
fn basin_sweep_respects_theoretical_radius() {
    let p = from_id("eigen:diag(1,2,3)").unwrap();
    let zeta = p.manifold().point(vec![0.0, 0.0, 1.0]).unwrap();
    let opts = BasinOptions {
        samples_per_shell: 8,
        ..BasinOptions::default()
    };
    let report = basin_sweep(&p, &zeta, &GammaOptions::default(), &crate::newton::NewtonOptions::default(), &opts).unwrap();
    assert!(report.contract_holds);
    assert!(report.empirical_edge >= report.theoretical_radius);

    let far = BasinOptions {
        distances: vec![0.0, std::f64::consts::FRAC_PI_2],
        samples_per_shell: 8,
        ..opts
    };
    let report = basin_sweep(&p, &zeta, &GammaOptions::default(), &crate::newton::NewtonOptions::default(), &far).unwrap();
    assert_eq!(report.shells[0].passed, 8);
    assert!(report.shells[1].passed < 8);
}
