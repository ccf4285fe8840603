//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::f64::consts::FRAC_PI_2;
use std::process::ExitCode;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::Rng;

use riem_alpha::alpha::{
    alpha_certify, basin_radii, binomial_series_check, compute_constants, crossover_by_bisection, lemma_suite,
    separation_bound, spreading_contraction_check, spreading_factor_check, Verdict,
};
use riem_alpha::calculus::{beta, gamma_estimate, newton_direction, GammaOptions};
use riem_alpha::manifold::{
    distance, exp_map, injectivity_radius, log_map, random_tangent_of_norm, seeded_rng, transport, Manifold, Point,
};
use riem_alpha::newton::{halving_factor, newton_sequence, NewtonOptions, Termination};
use riem_alpha::problems::{complex_invariants, complex_quadratic, from_id, quadratic_euclidean, stack, Problem};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: String) -> Outcome {
    Outcome { ok, detail }
}

fn constants_reproduction() -> Outcome {
    let printed = [
        ("alpha0", 0.130716944),
        ("sigma", 1.632843018),
        ("s0", 0.103621842),
        ("nu0", 0.069778332),
        ("t0", 0.075262346),
    ];
    let c = compute_constants();
    let got = [c.alpha0, c.sigma, c.s0, c.nu0, c.t0];
    let worst_value = printed
        .iter()
        .zip(got)
        .map(|((_, p), g)| (p - g).abs())
        .fold(0.0, f64::max);
    let r = c.residuals();
    let worst_residual = [r.alpha0, r.sigma, r.s0, r.nu0, r.t0].iter().map(|x| x.abs()).fold(0.0, f64::max);
    outcome(
        worst_value <= 1e-8 && worst_residual <= 1e-12,
        format!("max |value - printed| = {worst_value:.2e}, max residual = {worst_residual:.2e}"),
    )
}

fn sphere_basin_rate() -> Outcome {
    let p = from_id("eigen:diag(1,2,3)").unwrap();
    let zeta = p.manifold().point(vec![0.0, 0.0, 1.0]).unwrap();
    let radius = basin_radii(&p, &zeta, &GammaOptions::default()).unwrap().theoretical();
    let mut rng = seeded_rng(2024);
    let opts = NewtonOptions::default();
    let mut worst = f64::INFINITY;
    let mut failures = 0;
    for _ in 0..50 {
        let d = radius * rng.random_range(0.0..=1.0);
        let z0 = exp_map(&zeta, &random_tangent_of_norm(&zeta, d, &mut rng));
        let trace = newton_sequence(&p, &z0, &opts);
        let d0 = distance(&z0, &zeta);
        let last = trace.points.len() - 1;
        let mut ok = trace.termination == Termination::Converged || last >= 5;
        for k in 0..=5 {
            let dk = distance(&trace.points[k.min(last)], &zeta);
            let bound = halving_factor(k) * d0 + 1e-13;
            worst = worst.min(bound - dk);
            ok &= dk <= bound;
        }
        failures += usize::from(!ok);
    }
    outcome(
        failures == 0,
        format!("R = {radius:.6e}, 50 starts, {failures} failures, worst margin {worst:.2e}"),
    )
}

fn certified_starts(p: &Problem, count: usize, seed: u64) -> Vec<Point> {
    let zeros = p.known_zeros().to_vec();
    let mut rng = seeded_rng(seed);
    let opts = GammaOptions::default();
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 20 * count {
        attempts += 1;
        let zeta = &zeros[rng.random_range(0..zeros.len())];
        let rho = 0.2 * 10f64.powf(-3.0 * rng.random_range(0.0..1.0));
        let z0 = exp_map(zeta, &random_tangent_of_norm(zeta, rho.min(0.5 * injectivity_radius(zeta)), &mut rng));
        if alpha_certify(p, &z0, &opts).verdict == Verdict::Certified {
            out.push(z0);
        }
    }
    out
}

fn certificate_soundness() -> Outcome {
    let ids = [
        "quad1d",
        "quad2d",
        "eigen:diag(1,2,3)",
        "eigen:diag(1,2,3,4,5)",
        "so3-align:random:7",
    ];
    let opts = NewtonOptions::default();
    let mut total = 0;
    let mut failures = Vec::new();
    for (i, id) in ids.iter().enumerate() {
        let p = from_id(id).unwrap();
        let starts = certified_starts(&p, 20, 100 + i as u64);
        if starts.len() < 20 {
            failures.push(format!("{id}: only {} certified starts", starts.len()));
        }
        for z0 in starts {
            total += 1;
            let trace = newton_sequence(&p, &z0, &opts);
            let beta0 = trace.betas[0];
            let root = trace.last();
            let drift_ok = distance(root, &z0) <= riem_alpha::alpha::constants().sigma * beta0 + 1e-12;
            let steps_ok = trace
                .step_norms
                .iter()
                .enumerate()
                .all(|(k, s)| *s <= halving_factor(k) * beta0 + 1e-13);
            if trace.termination != Termination::Converged || !drift_ok || !steps_ok {
                failures.push(format!("{id}: {:?} drift_ok={drift_ok} steps_ok={steps_ok}", trace.termination));
            }
        }
    }
    outcome(
        failures.is_empty() && total == 100,
        if failures.is_empty() {
            format!("{total} certified starts converged within sigma*beta")
        } else {
            failures.join("; ")
        },
    )
}

/// `max_{|u|=1} |sum_j Dinv_ij u^T Q_j u|` by shifted symmetric power iteration.
fn quadratic_gamma_oracle(b: &DMatrix<f64>, q: &[DMatrix<f64>], z: &DVector<f64>) -> f64 {
    let n = z.len();
    let sym: Vec<DMatrix<f64>> = q.iter().map(|m| (m + m.transpose()) * 0.5).collect();
    let df = DMatrix::from_fn(n, n, |i, j| b[(i, j)] + 2.0 * (&sym[i] * z)[j]);
    let dinv = df.try_inverse().unwrap();
    let s: Vec<DMatrix<f64>> = (0..n)
        .map(|i| (0..n).fold(DMatrix::zeros(n, n), |acc, j| acc + &sym[j] * dinv[(i, j)]))
        .collect();
    let shift: f64 = s.iter().map(|m| m.norm_squared()).sum::<f64>() + 1.0;
    let value = |u: &DVector<f64>| DVector::from_fn(n, |i, _| u.dot(&(&s[i] * u)));
    let mut rng = seeded_rng(5);
    let mut best: f64 = 0.0;
    for start in 0..200 {
        let mut u = if start < n {
            DVector::from_fn(n, |j, _| if j == start { 1.0 } else { 0.0 })
        } else {
            DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0))
        };
        u.normalize_mut();
        for _ in 0..2000 {
            let y = value(&u);
            let mut next = s.iter().zip(y.iter()).fold(u.clone() * shift, |acc, (m, yi)| acc + m * &u * *yi);
            next.normalize_mut();
            let moved = (&next - &u).norm();
            u = next;
            if moved < 1e-15 {
                break;
            }
        }
        best = best.max(value(&u).norm());
    }
    best
}

fn exact_gamma_on_quadratics() -> Outcome {
    let mut rng = seeded_rng(44);
    let mut cases: Vec<(DMatrix<f64>, DVector<f64>, Vec<DMatrix<f64>>, DVector<f64>)> = vec![
        (
            DMatrix::zeros(1, 1),
            DVector::from_vec(vec![-1.0]),
            vec![DMatrix::from_element(1, 1, 1.0)],
            DVector::from_vec(vec![1.1]),
        ),
        (
            DMatrix::zeros(2, 2),
            DVector::from_vec(vec![-1.0, -4.0]),
            vec![
                DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]),
                DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]),
            ],
            DVector::from_vec(vec![0.9, 2.3]),
        ),
    ];
    for n in [2, 3, 4] {
        let b = DMatrix::identity(n, n) * 2.0 + DMatrix::from_fn(n, n, |_, _| rng.random_range(-0.5..0.5));
        let c = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        let q: Vec<DMatrix<f64>> = (0..n)
            .map(|_| DMatrix::from_fn(n, n, |_, _| rng.random_range(-0.5..0.5)))
            .collect();
        let z = DVector::from_fn(n, |_, _| rng.random_range(-0.3..0.3));
        cases.push((b, c, q, z));
    }
    let mut worst: f64 = 0.0;
    let mut contained = true;
    for (b, c, q, z) in &cases {
        let p = quadratic_euclidean(b, c, q).unwrap();
        let x = p.manifold().point(z.as_slice().to_vec()).unwrap();
        let g = gamma_estimate(&p, &x, &GammaOptions::default());
        let exact = quadratic_gamma_oracle(b, q, z);
        contained &= g.lower <= exact + 1e-8 && exact <= g.upper + 1e-8;
        worst = worst.max((g.lower - exact).abs());
    }
    outcome(
        contained && worst <= 1e-8,
        format!("{} quadratics, bracket contains gamma: {contained}, max |lower - gamma| = {worst:.2e}", cases.len()),
    )
}

fn lemma_inequalities() -> Outcome {
    let centers: Vec<(&str, Option<Vec<f64>>)> = vec![
        ("eigen:diag(1,2,3)", None),
        ("eigen:diag(1,2,3,4,5)", None),
        ("quad2d", None),
        ("so3-align:random:3", None),
        ("hyper-shift:[0.3,-0.2]", None),
        ("projective-eigen:diag(1,2,4)", None),
        ("eigen:diag(1,2,3)", Some(vec![0.2, 0.3, 0.9])),
    ];
    let opts = GammaOptions::default();
    let mut notes = Vec::new();
    let mut all = true;
    for (id, at) in centers {
        let p = from_id(id).unwrap();
        let x = match at {
            Some(v) => p.manifold().project_point(v).unwrap(),
            None => p.known_zeros()[0].clone(),
        };
        let report = lemma_suite(&p, &x, 200, 9, &opts).unwrap();
        let sampled = report.lemmas.iter().all(|l| l.holds());
        all &= sampled;
        if !sampled {
            let bad: Vec<String> = report
                .lemmas
                .iter()
                .filter(|l| !l.holds())
                .map(|l| format!("{} {}/{}", l.name, l.passed, l.samples))
                .collect();
            notes.push(format!("{id}: {}", bad.join(", ")));
        }
    }
    let scalar = [spreading_factor_check(), spreading_contraction_check(), binomial_series_check()];
    for s in &scalar {
        all &= s.holds;
        if !s.holds {
            notes.push(format!("{} fails (margin {:.2e})", s.name, s.worst_margin));
        }
    }
    outcome(
        all,
        if notes.is_empty() {
            "7 centers x 200 samples and the scalar checks hold".to_string()
        } else {
            notes.join("; ")
        },
    )
}

fn hermitian_reduction() -> Outcome {
    let opts = GammaOptions::default();
    let cases = [
        (complex_quadratic(1, None), vec![Complex::new(1.1, 0.2)]),
        (complex_quadratic(2, Some(6)), vec![Complex::new(0.3, -0.1), Complex::new(-0.2, 0.4)]),
    ];
    let mut worst: f64 = 0.0;
    for (cp, zc) in &cases {
        let rp = cp.realify();
        let z = DVector::from_vec(zc.clone());
        let ci = complex_invariants(cp, &z, &opts).unwrap();
        let x = rp.manifold().point(stack(&z).as_slice().to_vec()).unwrap();
        let g = gamma_estimate(&rp, &x, &opts);
        let step = exp_map(&x, &newton_direction(&rp, &x).unwrap());
        worst = worst
            .max((beta(&rp, &x) - ci.beta).abs())
            .max((g.lower - ci.gamma.lower).abs())
            .max((g.upper - ci.gamma.upper).abs())
            .max((step.coords() - stack(&ci.newton_point)).amax());
    }
    outcome(worst <= 1e-10, format!("z^2 - 1 and a 2-variable system, max difference {worst:.2e}"))
}

fn geometry_kernel() -> Outcome {
    let ids = ["sphere:2", "sphere:4", "so:3", "projective:3", "hyperbolic:2", "euclidean:3"];
    let mut worst = [0.0f64; 3];
    for (i, id) in ids.iter().enumerate() {
        let m: Manifold = id.parse().unwrap();
        let mut rng = seeded_rng(700 + i as u64);
        for _ in 0..1000 {
            let z = m.random_point_with(&mut rng);
            let r = injectivity_radius(&z);
            let cap = if r.is_finite() { 0.95 * r } else { 3.0 };
            let u = random_tangent_of_norm(&z, rng.random_range(0.0..cap), &mut rng);
            let y = exp_map(&z, &u);
            let back = log_map(&z, &y).unwrap();
            worst[0] = worst[0].max((back.coords() - u.coords()).norm());

            let v = m.random_tangent_with(&z, &mut rng);
            let w = transport(&z, &y, &v).unwrap();
            worst[1] = worst[1].max((w.norm() - v.norm()).abs());

            let t = rng.random_range(0.0..1.0);
            worst[2] = worst[2].max((distance(&z, &exp_map(&z, &u.scaled(t))) - t * u.norm()).abs());
        }
    }
    outcome(
        worst[0] <= 1e-10 && worst[1] <= 1e-12 && worst[2] <= 1e-10,
        format!(
            "6 manifolds x 1000: exp/log {:.1e}, transport {:.1e}, ray distance {:.1e}",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn radius_crossover() -> Outcome {
    let k = crossover_by_bisection();
    outcome((k - 5.235326440).abs() <= 1e-6, format!("K = {k:.12}"))
}

fn separation() -> Outcome {
    let p = from_id("eigen:diag(1,2,3)").unwrap();
    let m = p.manifold();
    let mut radii = Vec::new();
    for i in 0..3 {
        let mut e = vec![0.0; 3];
        e[i] = 1.0;
        let zeta = m.point(e).unwrap();
        radii.push(separation_bound(&p, &zeta, &GammaOptions::default()).unwrap().value);
    }
    let ok = radii.iter().all(|r| *r < FRAC_PI_2);
    outcome(ok, format!("R(e_i) = {radii:.4?} against pi/2"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("constants reproduction", constants_reproduction),
        ("quadratic rate on S^2", sphere_basin_rate),
        ("alpha-certificate soundness", certificate_soundness),
        ("exact gamma on quadratics", exact_gamma_on_quadratics),
        ("lemma inequalities", lemma_inequalities),
        ("hermitian reduction", hermitian_reduction),
        ("geometry kernel", geometry_kernel),
        ("radius crossover", radius_crossover),
        ("separation of eigenvector zeros", separation),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = check();
        failed += usize::from(!o.ok);
        println!(
            "{} {}. {name}: {} ({:.2}s)",
            if o.ok { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
