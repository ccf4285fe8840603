use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use approx::assert_relative_eq;
use nalgebra::DVector;

use super::*;

fn e(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

fn sphere2() -> Manifold {
    Manifold::Sphere(2)
}

fn pt(m: Manifold, c: Vec<f64>) -> Point {
    m.point(c).unwrap()
}

fn tan(z: &Point, c: Vec<f64>) -> Tangent {
    Tangent::new(z, DVector::from_vec(c)).unwrap()
}

#[test]
fn parses_and_prints_identifiers() {
    for id in ["euclidean:3", "sphere:2", "so:3", "o:4", "projective:3", "hyperbolic:2"] {
        let m: Manifold = id.parse().unwrap();
        assert_eq!(m.to_string(), id);
    }
    assert!("sphere".parse::<Manifold>().is_err());
    assert!("torus:2".parse::<Manifold>().is_err());
    assert!("so:1".parse::<Manifold>().is_err());
    assert!("sphere:0".parse::<Manifold>().is_err());
    assert_eq!(Manifold::Orthogonal { n: 4, special: true }.dimension(), 6);
}

#[test]
fn rejects_points_off_the_manifold() {
    assert!(sphere2().point(vec![1.0, 1.0, 0.0]).is_err());
    assert!(sphere2().point(vec![1.0, 0.0]).is_err());
    let h = Manifold::Hyperbolic(2);
    assert!(h.point(vec![-1.0, 0.0, 0.0]).is_err());
    let so3 = Manifold::Orthogonal { n: 3, special: true };
    let reflection = vec![-1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0];
    assert!(so3.point(reflection.clone()).is_err());
    let o3 = Manifold::Orthogonal { n: 3, special: false };
    assert!(o3.point(reflection).is_ok());
}

#[test]
fn sphere_exp_examples() {
    let z = pt(sphere2(), e(3, 0));
    let y = exp_map(&z, &z.zero_tangent());
    assert_eq!(y.to_vec(), e(3, 0));

    let u = tan(&z, vec![0.0, FRAC_PI_2, 0.0]);
    let y = exp_map(&z, &u);
    assert_relative_eq!(y.coords(), &DVector::from_vec(e(3, 1)), epsilon = 1e-15);
}

#[test]
fn so2_exp_is_a_rotation() {
    let so2 = Manifold::Orthogonal { n: 2, special: true };
    let id = so2.base_point();
    let t = FRAC_PI_4;
    let u = tan(&id, vec![0.0, -t, t, 0.0]);
    let r = exp_map(&id, &u);
    let expected = [t.cos(), -t.sin(), t.sin(), t.cos()];
    for (a, b) in r.coords().iter().zip(expected) {
        assert_relative_eq!(*a, b, epsilon = 1e-15);
    }
}

#[test]
fn sphere_log_examples() {
    let z = pt(sphere2(), e(3, 0));
    let y = pt(sphere2(), e(3, 1));
    let u = log_map(&z, &y).unwrap();
    assert_relative_eq!(u.coords(), &DVector::from_vec(vec![0.0, FRAC_PI_2, 0.0]), epsilon = 1e-15);

    for m in ["euclidean:3", "sphere:2", "so:3", "projective:3", "hyperbolic:2"] {
        let m: Manifold = m.parse().unwrap();
        let z = random_point(m, 3);
        assert_eq!(log_map(&z, &z).unwrap().norm(), 0.0, "{m}");
    }

    let anti = pt(sphere2(), vec![-1.0, 0.0, 0.0]);
    assert!(matches!(
        log_map(&z, &anti),
        Err(Error::OutOfInjectivityBall { .. })
    ));
}

#[test]
fn orthogonal_log_guard_is_the_spectral_chord() {
    let so3 = Manifold::Orthogonal { n: 3, special: true };
    let id = so3.base_point();
    // rotation by angle t: chord |I - R| = 2 sin(t/2) crosses 1 at t = pi/3
    for (t, ok) in [(1.0, true), (1.04, true), (1.05, false), (2.0, false)] {
        let u = tan(&id, vec![0.0, -t, 0.0, t, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let y = exp_map(&id, &u);
        assert_eq!(log_map(&id, &y).is_ok(), ok, "angle {t}");
    }
}

#[test]
fn distance_examples() {
    let a = pt(sphere2(), e(3, 0));
    let b = pt(sphere2(), e(3, 1));
    assert_relative_eq!(distance(&a, &b), FRAC_PI_2, epsilon = 1e-15);
    assert_eq!(distance(&a, &a), 0.0);

    let p3 = Manifold::Projective(3);
    let x = p3.project_point(e(4, 0)).unwrap();
    let y = p3.project_point(vec![-1.0, 0.0, 0.0, 0.0]).unwrap();
    assert_eq!(distance(&x, &y), 0.0);
    assert_eq!(x, y);
}

#[test]
fn transport_examples() {
    let z = pt(sphere2(), e(3, 0));
    let y = pt(sphere2(), e(3, 1));
    let v = tan(&z, e(3, 2));
    let w = transport(&z, &z, &v).unwrap();
    assert_eq!(w.coords(), v.coords());

    let w = transport(&z, &y, &v).unwrap();
    assert_relative_eq!(w.coords(), &DVector::from_vec(e(3, 2)), epsilon = 1e-15);

    // closed form: the unit geodesic direction at e1 arrives as -e1 at e2
    let v = tan(&z, e(3, 1));
    let w = transport(&z, &y, &v).unwrap();
    assert_relative_eq!(w.coords(), &DVector::from_vec(vec![-1.0, 0.0, 0.0]), epsilon = 1e-15);
}

#[test]
fn transport_carries_log_to_minus_log() {
    for id in ["sphere:4", "so:3", "projective:3", "hyperbolic:3", "euclidean:2"] {
        let m: Manifold = id.parse().unwrap();
        let mut rng = seeded_rng(11);
        for _ in 0..20 {
            let z = m.random_point_with(&mut rng);
            let r = injectivity_radius(&z).min(2.0);
            let u = random_tangent_of_norm(&z, 0.7 * r, &mut rng);
            let y = exp_map(&z, &u);
            let pu = transport(&z, &y, &u).unwrap();
            let back = log_map(&y, &z).unwrap();
            assert_relative_eq!(pu.coords(), &(-back.coords()), epsilon = 1e-10);
        }
    }
}

#[test]
fn transport_roundtrip_is_identity() {
    for id in ["sphere:2", "so:3", "hyperbolic:2", "projective:2"] {
        let m: Manifold = id.parse().unwrap();
        let mut rng = seeded_rng(5);
        for _ in 0..20 {
            let z = m.random_point_with(&mut rng);
            let r = injectivity_radius(&z).min(2.0);
            let u = random_tangent_of_norm(&z, 0.5 * r, &mut rng);
            let y = exp_map(&z, &u);
            let v = m.random_tangent_with(&z, &mut rng);
            let w = transport(&z, &y, &v).unwrap();
            let v2 = transport(&y, &z, &w).unwrap();
            assert_relative_eq!(v2.coords(), v.coords(), epsilon = 1e-12);
            assert!(m.tangent_residual(y.coords(), w.coords()) < 1e-12);
        }
    }
}

#[test]
fn injectivity_radii() {
    let cases = [
        ("sphere:5", PI),
        ("so:4", 1.0),
        ("o:3", 1.0),
        ("projective:3", FRAC_PI_2),
        ("euclidean:3", f64::INFINITY),
        ("hyperbolic:2", f64::INFINITY),
    ];
    for (id, r) in cases {
        let m: Manifold = id.parse().unwrap();
        let z = random_point(m, 1);
        assert_eq!(injectivity_radius(&z), r, "{id}");
    }
}

#[test]
fn radius_lipschitz_inequality() {
    // r_x - d(x, y) <= r_y holds identically for constant radii
    for id in ["sphere:2", "so:3", "projective:3", "euclidean:3", "hyperbolic:2"] {
        let m: Manifold = id.parse().unwrap();
        for s in 0..20 {
            let x = random_point(m, s);
            let y = random_point(m, s + 100);
            let lhs = injectivity_radius(&x) - distance(&x, &y);
            assert!(lhs.is_nan() || lhs <= injectivity_radius(&y), "{id}");
        }
    }
}

#[test]
fn spreading_constants() {
    for id in ["sphere:2", "so:3", "euclidean:3", "projective:2"] {
        let m: Manifold = id.parse().unwrap();
        assert_eq!(spreading_constant(&m.base_point()), Spreading::Bounded(1.0));
    }
    let h = Manifold::Hyperbolic(2);
    assert_eq!(spreading_constant(&h.base_point()), Spreading::DeclaredUnbounded);
    assert_relative_eq!(
        spreading_constant_in_ball(&h.base_point(), 1.0),
        1.1752011936438014,
        epsilon = 1e-15
    );
}

/// Jacobi-field comparison on the hyperboloid: two radial vectors of norm `rho`
/// separated by a small angle `eps` end `sinh(rho) eps` apart.
#[test]
fn hyperbolic_spreading_matches_jacobi_field_oracle() {
    let h = Manifold::Hyperbolic(2);
    let mut rng = seeded_rng(9);
    let rho = 1.0;
    for _ in 0..10 {
        let z = h.random_point_with(&mut rng);
        let frame = h.frame(z.coords());
        let eps: f64 = 1e-5;
        let u = &frame[0] * rho;
        let v = (&frame[0] * eps.cos() + &frame[1] * eps.sin()) * rho;
        let d = distance(&h.exp(z.coords(), &u), &h.exp(z.coords(), &v));
        let ratio = d / h.norm(z.coords(), &(&u - &v));
        assert_relative_eq!(ratio, rho.sinh() / rho, epsilon = 1e-6);

        // the ratio never exceeds the ball bound
        for _ in 0..50 {
            let a = random_tangent_of_norm(&z, rho * rand::Rng::random::<f64>(&mut rng), &mut rng);
            let b = random_tangent_of_norm(&z, rho * rand::Rng::random::<f64>(&mut rng), &mut rng);
            let d = distance(&exp_map(&z, &a), &exp_map(&z, &b));
            let sep = h.norm(z.coords(), &(a.coords() - b.coords()));
            assert!(d <= sep * rho.sinh() / rho + 1e-12);
        }
    }
}

#[test]
fn nonnegatively_curved_spreading_bound() {
    for id in ["sphere:2", "so:3", "projective:3"] {
        let m: Manifold = id.parse().unwrap();
        let mut rng = seeded_rng(21);
        for _ in 0..100 {
            let z = m.random_point_with(&mut rng);
            let r = injectivity_radius(&z);
            let a = random_tangent_of_norm(&z, 0.45 * r * rand::Rng::random::<f64>(&mut rng), &mut rng);
            let b = random_tangent_of_norm(&z, 0.45 * r * rand::Rng::random::<f64>(&mut rng), &mut rng);
            let d = distance(&exp_map(&z, &a), &exp_map(&z, &b));
            let sep = (a.coords() - b.coords()).norm();
            assert!(d <= sep + 1e-10, "{id}: {d} > {sep}");
        }
    }
}

#[test]
fn tangent_projection_examples() {
    let z = pt(sphere2(), e(3, 0));
    let w = DVector::from_vec(vec![0.0, 0.3, -0.2]);
    assert_eq!(tangent_projection(&z, &w).coords(), &w);
    assert_eq!(tangent_projection(&z, &DVector::from_vec(e(3, 0))).norm(), 0.0);
    let p = tangent_projection(&z, &DVector::from_vec(vec![1.0, 1.0, 0.0]));
    assert_eq!(p.to_vec(), e(3, 1));
}

#[test]
fn tangent_projection_is_idempotent_everywhere() {
    for id in ["sphere:3", "so:3", "hyperbolic:2", "projective:2"] {
        let m: Manifold = id.parse().unwrap();
        let mut rng = seeded_rng(2);
        let z = m.random_point_with(&mut rng);
        let w = gaussian_vector(&mut rng, m.ambient_dim());
        let p = tangent_projection(&z, &w);
        let pp = tangent_projection(&z, p.coords());
        assert_relative_eq!(p.coords(), pp.coords(), epsilon = 1e-14);
        assert!(m.tangent_residual(z.coords(), p.coords()) < 1e-12);
    }
}

#[test]
fn random_sampling_is_deterministic_and_valid() {
    for id in ["sphere:2", "so:3", "o:3", "hyperbolic:3", "projective:3", "euclidean:2"] {
        let m: Manifold = id.parse().unwrap();
        let a = random_point(m, 42);
        let b = random_point(m, 42);
        assert_eq!(a, b);
        assert!(m.point_residual(a.coords()) < 1e-12, "{id}");
        let t = random_tangent(&a, 7);
        assert_eq!(t, random_tangent(&a, 7));
        assert!(m.tangent_residual(a.coords(), t.coords()) < 1e-12, "{id}");
    }
}

#[test]
fn frames_are_orthonormal() {
    for id in ["sphere:4", "so:4", "hyperbolic:3", "projective:2", "euclidean:3"] {
        let m: Manifold = id.parse().unwrap();
        let z = random_point(m, 8);
        let f = m.frame(z.coords());
        assert_eq!(f.len(), m.dimension());
        for (i, a) in f.iter().enumerate() {
            assert!(m.tangent_residual(z.coords(), a) < 1e-12);
            for (j, b) in f.iter().enumerate() {
                let g = m.inner(z.coords(), a, b);
                assert_relative_eq!(g, if i == j { 1.0 } else { 0.0 }, epsilon = 1e-12);
            }
        }
    }
}

#[test]
fn geodesic_jets_sum_to_exp() {
    for id in ["sphere:2", "so:3", "hyperbolic:2", "euclidean:2"] {
        let m: Manifold = id.parse().unwrap();
        let mut rng = seeded_rng(4);
        let z = m.random_point_with(&mut rng);
        let u = random_tangent_of_norm(&z, 1.0, &mut rng);
        let jets = m.geodesic_jets(z.coords(), u.coords(), 30);
        let t = 0.4;
        let direct = m.exp(z.coords(), &(u.coords() * t));
        for (j, x) in jets.iter().zip(direct.coords().iter()) {
            assert_relative_eq!(j.eval(t), *x, epsilon = 1e-13);
        }
    }
}

#[test]
fn transport_back_jets_match_pointwise_transport() {
    for id in ["sphere:2", "so:3", "hyperbolic:2"] {
        let m: Manifold = id.parse().unwrap();
        let mut rng = seeded_rng(6);
        let z = m.random_point_with(&mut rng);
        let u = random_tangent_of_norm(&z, 1.0, &mut rng);
        let t = 0.3;
        let y = m.exp(z.coords(), &(u.coords() * t));
        let w = m.random_tangent_with(&y, &mut rng);
        let back = m.transport(y.coords(), z.coords(), w.coords()).unwrap();
        // constant-coefficient jets of w: transport-back is then a series in t
        let wj: Vec<Jet> = w.coords().iter().map(|c| Jet::constant(*c).resized(31)).collect();
        let pj = m.transport_back_jets(z.coords(), u.coords(), &wj);
        for (j, x) in pj.iter().zip(back.iter()) {
            assert_relative_eq!(j.eval(t), *x, epsilon = 1e-12);
        }
    }
}

#[test]
fn descriptor_reports_rules() {
    let d = Manifold::Sphere(2).descriptor();
    assert_eq!(d.dimension, 2);
    assert_eq!(d.injectivity_radius, PI);
    let json = serde_json::to_string(&Manifold::Euclidean(3).descriptor()).unwrap();
    assert!(json.contains("\"injectivity_radius\":\"inf\""));
}

#[test]
fn rotation_distance_small_and_large_angles() {
    let m = Manifold::Orthogonal { n: 3, special: true };
    // a start on which a general eigensolver used to stall
    let z = m
        .project_point(vec![
            0.5354941207963632, -0.7909656635687851, -0.29600568516115033, -0.25979143984124564, 0.17922308556858924,
            -0.9488875030183962, 0.8035884857174987, 0.5850234223127019, -0.10951319997055789,
        ])
        .unwrap();
    let mut rng = seeded_rng(3);
    for norm in [1e-9, 1e-4, 0.3, 2.0, 3.1] {
        let u = random_tangent_of_norm(&z, norm, &mut rng);
        let y = exp_map(&z, &u);
        let d = distance(&z, &y);
        assert!((d - norm).abs() <= 1e-12 * (1.0 + norm), "norm {norm}: {d}");
    }
    assert_eq!(distance(&z, &z), 0.0);
}
