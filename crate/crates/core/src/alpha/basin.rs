//! Empirical quadratic basins compared with the theoretical radii.

use serde::Serialize;

use super::{basin_radii, BasinRadii};
use crate::calculus::GammaOptions;
use crate::error::Result;
use crate::manifold::{exp_map, injectivity_radius, random_tangent_of_norm, seeded_rng, Point, Tangent};
use crate::newton::{newton_sequence, verify_quadratic_bound, NewtonOptions};
use crate::problems::Problem;

#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BasinOptions {
    /// Starting distances from the zero; empty selects [`default_shells`].
    pub distances: Vec<f64>,
    pub samples_per_shell: usize,
    pub seed: u64,
    /// Number of Newton steps over which the quadratic bound is checked.
    pub depth: usize,
}

impl Default for BasinOptions {
    fn default() -> Self {
        BasinOptions {
            distances: Vec::new(),
            samples_per_shell: 32,
            seed: 0,
            depth: 5,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Shell {
    pub distance: f64,
    pub samples: usize,
    pub passed: usize,
    pub fraction: f64,
    pub within_theoretical_radius: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BasinReport {
    pub root: Point,
    pub radii: BasinRadii,
    #[serde(with = "crate::serde_f64")]
    pub theoretical_radius: f64,
    pub shells: Vec<Shell>,
    /// Largest shell distance up to which every sample satisfied the bound.
    pub empirical_edge: f64,
    /// Every shell inside the theoretical radius passed.
    pub contract_holds: bool,
}

/// Multiples of the theoretical radius, capped just below the injectivity radius.
pub fn default_shells(radius: f64, injectivity: f64) -> Vec<f64> {
    let cap = 0.999 * injectivity;
    let mut out: Vec<f64> = [0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0]
        .iter()
        .map(|m| m * radius)
        .filter(|d| d.is_finite() && *d < cap)
        .collect();
    if cap.is_finite() && out.last().is_some_and(|d| *d < cap) {
        out.push(cap);
    }
    out
}

/// Runs Newton from points at prescribed distances of `zeta` and records which
/// starts satisfy the doubly exponential bound relative to `zeta`.
pub fn basin_sweep(
    problem: &Problem,
    zeta: &Point,
    gamma: &GammaOptions,
    newton: &NewtonOptions,
    opts: &BasinOptions,
) -> Result<BasinReport> {
    let radii = basin_radii(problem, zeta, gamma)?;
    let theoretical = radii.theoretical();
    let distances = if opts.distances.is_empty() {
        default_shells(theoretical, injectivity_radius(zeta))
    } else {
        opts.distances.clone()
    };
    let mut rng = seeded_rng(opts.seed);
    let starts: Vec<(usize, Tangent)> = distances
        .iter()
        .enumerate()
        .flat_map(|(i, d)| {
            (0..opts.samples_per_shell)
                .map(|_| (i, random_tangent_of_norm(zeta, *d, &mut rng)))
                .collect::<Vec<_>>()
        })
        .collect();
    let verdicts = crate::par::map(&starts, |(i, u)| {
        let z0 = exp_map(zeta, u);
        let trace = newton_sequence(problem, &z0, newton);
        let ok = verify_quadratic_bound(&trace, Some(zeta), opts.depth).is_ok_and(|r| r.all_ok);
        (*i, ok)
    });
    let mut shells: Vec<Shell> = distances
        .iter()
        .map(|d| Shell {
            distance: *d,
            samples: 0,
            passed: 0,
            fraction: 1.0,
            within_theoretical_radius: *d <= theoretical,
        })
        .collect();
    for (i, ok) in verdicts {
        shells[i].samples += 1;
        shells[i].passed += usize::from(ok);
    }
    for s in &mut shells {
        if s.samples > 0 {
            s.fraction = s.passed as f64 / s.samples as f64;
        }
    }
    let mut order: Vec<&Shell> = shells.iter().collect();
    order.sort_by(|a, b| a.distance.total_cmp(&b.distance));
    let empirical_edge = order
        .iter()
        .take_while(|s| s.passed == s.samples)
        .last()
        .map_or(0.0, |s| s.distance);
    let contract_holds = shells
        .iter()
        .filter(|s| s.within_theoretical_radius)
        .all(|s| s.passed == s.samples);
    Ok(BasinReport {
        root: zeta.clone(),
        radii,
        theoretical_radius: theoretical,
        shells,
        empirical_edge,
        contract_holds,
    })
}
