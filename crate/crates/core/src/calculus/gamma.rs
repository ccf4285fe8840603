//! Bracketed estimates of the invariant `gamma`.
//!
//! For a unit direction `u` and `k >= 2`, `|Df(z)^-1 c_k(u)|^(1/(k-1))` with
//! `c_k(u) = D^k f(z) u^k / k!` is a lower bound of the `k`-th term of `gamma`.
//! The lower end of the bracket is the largest such value over a seeded set of
//! directions, locally refined by a pattern search on the unit sphere of `T_z`.
//! The upper end multiplies by the polarization constant `max_k (k^k/k!)^(1/(k-1))`
//! relating symmetric multilinear norms to their diagonal values.

use nalgebra::DVector;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::{output_coords, problem_jets, Linearization};
use crate::jet;
use crate::manifold::{seeded_rng, Point};
use crate::problems::Problem;

#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GammaOptions {
    pub k_max: usize,
    pub n_dirs: usize,
    pub seed: u64,
    /// Pattern-search refinement of the best sampled directions.
    pub refine: bool,
}

impl Default for GammaOptions {
    fn default() -> Self {
        GammaOptions {
            k_max: 12,
            n_dirs: 64,
            seed: 0,
            refine: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaBracket {
    #[serde(with = "crate::serde_f64")]
    pub lower: f64,
    #[serde(with = "crate::serde_f64")]
    pub upper: f64,
    /// Order attaining the lower end; 0 when every term vanished.
    pub k_hit: usize,
    pub truncation_order: usize,
    pub directions_sampled: usize,
}

impl GammaBracket {
    pub fn singular(opts: &GammaOptions) -> Self {
        GammaBracket {
            lower: f64::INFINITY,
            upper: f64::INFINITY,
            k_hit: 0,
            truncation_order: opts.k_max,
            directions_sampled: 0,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.upper.is_finite()
    }
}

/// `max_{2 <= k <= k_max} (k^k / k!)^(1/(k-1))`.
pub fn polarization_factor(k_max: usize) -> f64 {
    (2..=k_max.max(2))
        .map(|k| {
            let kf = k as f64;
            // log(k^k / k!) summed to avoid overflow
            let log_ratio: f64 = (1..=k).map(|i| (kf / i as f64).ln()).sum();
            (log_ratio / (kf - 1.0)).exp()
        })
        .fold(1.0, f64::max)
}

/// Unit directions in frame coordinates: the frame basis, the Newton direction
/// (when nonzero), then `n_dirs` seeded Gaussian directions.
pub fn direction_seeds(dim: usize, newton: Option<&DVector<f64>>, opts: &GammaOptions) -> Vec<DVector<f64>> {
    let mut seeds: Vec<DVector<f64>> = (0..dim)
        .map(|i| DVector::from_fn(dim, |j, _| if i == j { 1.0 } else { 0.0 }))
        .collect();
    if let Some(v) = newton {
        let n = v.norm();
        if n > 0.0 && n.is_finite() {
            seeds.push(v / n);
        }
    }
    let mut rng = seeded_rng(opts.seed);
    let mut drawn = 0;
    while drawn < opts.n_dirs {
        let g = DVector::<f64>::from_fn(dim, |_, _| StandardNormal.sample(&mut rng));
        let n = g.norm();
        if n > 1e-12 {
            seeds.push(g / n);
            drawn += 1;
        }
    }
    seeds
}

/// Per-direction score: the best `k` and its value.
fn score(terms: &[f64]) -> (f64, usize) {
    terms
        .iter()
        .enumerate()
        .fold((0.0, 0), |(best, kb), (i, v)| {
            if *v > best {
                (*v, i + 2)
            } else {
                (best, kb)
            }
        })
}

/// Coordinate search on the unit sphere with a parabolic step: along each axis the
/// score is sampled at `+-h`, and the vertex of the interpolating parabola is tried
/// as well.
fn refine<F>(start: &DVector<f64>, eval: &F) -> (f64, usize, DVector<f64>)
where
    F: Fn(&DVector<f64>) -> Vec<f64>,
{
    let dim = start.len();
    let mut a = start.clone();
    let (mut best, mut k_best) = score(&eval(&a));
    if dim < 2 {
        return (best, k_best, a);
    }
    let moved = |a: &DVector<f64>, i: usize, t: f64| {
        let mut trial = a.clone();
        trial[i] += t;
        let n = trial.norm();
        trial / n
    };
    let mut h = 0.25;
    let mut evals = 0usize;
    // the score is smooth at a maximum, so an O(h) step leaves an O(h^2) error
    while h > 1e-7 && evals < 2000 {
        let mut longest = 0.0f64;
        for i in 0..dim {
            let plus = moved(&a, i, h);
            let minus = moved(&a, i, -h);
            let (fp, kp) = score(&eval(&plus));
            let (fm, km) = score(&eval(&minus));
            evals += 2;
            let mut cand = vec![(fp, kp, h, plus), (fm, km, -h, minus)];
            let curvature = 2.0 * best - fp - fm;
            if curvature > 0.0 {
                let t = (h * (fp - fm) / (2.0 * curvature)).clamp(-2.0 * h, 2.0 * h);
                if t != 0.0 {
                    let v = moved(&a, i, t);
                    let (fv, kv) = score(&eval(&v));
                    evals += 1;
                    cand.push((fv, kv, t, v));
                }
            }
            for (f, k, t, v) in cand {
                if f > best {
                    best = f;
                    k_best = k;
                    a = v;
                    longest = t.abs();
                }
            }
        }
        if longest < 0.5 * h {
            h *= 0.25;
        }
    }
    (best, k_best, a)
}

/// Searches for the largest `gamma` term given a per-direction evaluator that
/// returns `|Df^-1 c_k(u)|^(1/(k-1))` for `k = 2..=k_max`.
///
/// Returns `(lower, k_hit)`. Shared by the real and complex pipelines so that both
/// explore the same directions.
pub fn gamma_search<F>(seeds: &[DVector<f64>], opts: &GammaOptions, eval: F) -> (f64, usize)
where
    F: Fn(&DVector<f64>) -> Vec<f64> + Sync + Send,
{
    let scored: Vec<(f64, usize)> = crate::par::map(seeds, |a| score(&eval(a)));
    let mut best = scored.iter().fold((0.0, 0), |acc, s| if s.0 > acc.0 { *s } else { acc });
    if opts.refine && best.0 > 0.0 {
        let mut order: Vec<usize> = (0..seeds.len()).collect();
        order.sort_by(|i, j| scored[*j].0.total_cmp(&scored[*i].0).then(i.cmp(j)));
        let starts: Vec<&DVector<f64>> = order.iter().take(4).map(|i| &seeds[*i]).collect();
        let refined: Vec<(f64, usize)> = crate::par::map(&starts, |a| {
            let (s, k, _) = refine(a, &eval);
            (s, k)
        });
        for r in refined {
            if r.0 > best.0 {
                best = r;
            }
        }
    }
    best
}

/// Bracket of `gamma(problem, z)` truncated at `opts.k_max`; `(inf, inf)` when the
/// derivative is singular.
pub fn gamma_estimate(problem: &Problem, z: &Point, opts: &GammaOptions) -> GammaBracket {
    let lin = match Linearization::new(problem, z) {
        Ok(l) => l,
        Err(_) => return GammaBracket::singular(opts),
    };
    gamma_from_linearization(problem, &lin, opts)
}

pub(crate) fn gamma_from_linearization(problem: &Problem, lin: &Linearization, opts: &GammaOptions) -> GammaBracket {
    let solver = match lin.solver() {
        Ok(s) => s,
        Err(_) => return GammaBracket::singular(opts),
    };
    let k_max = opts.k_max.max(2);
    let newton = lin.newton_coords().ok();
    let seeds = direction_seeds(lin.frame.dim(), newton.as_ref(), opts);
    let z = lin.frame.base();
    let eval = |a: &DVector<f64>| -> Vec<f64> {
        let u = lin.frame.ambient(a);
        let jets = problem_jets(problem, z, &u, k_max);
        (2..=k_max)
            .map(|k| {
                let c = DVector::from_vec(jet::coefficient(&jets, k));
                let y = solver.solve(&output_coords(problem, &lin.frame, &c));
                y.norm().powf(1.0 / (k as f64 - 1.0))
            })
            .collect()
    };
    let (lower, k_hit) = gamma_search(&seeds, opts, eval);
    GammaBracket {
        lower,
        upper: lower * polarization_factor(k_max),
        k_hit,
        truncation_order: k_max,
        directions_sampled: seeds.len(),
    }
}
