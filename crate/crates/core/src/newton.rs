//! The intrinsic Newton operator `N(z) = exp_z(-Df(z)^-1 f(z))` and its iterates.

use serde::Serialize;

use crate::alpha::constants;
use crate::calculus::newton_direction;
use crate::error::{Error, Result};
use crate::manifold::{distance, exp_map, injectivity_radius, Point};
use crate::problems::Problem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Termination {
    /// `beta` fell below the stopping tolerance; no further step was taken.
    Converged,
    MaxIter,
    SingularDerivative,
    /// The last step was longer than the injectivity radius at its base point.
    LeftInjectivityBall,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NewtonOptions {
    pub max_iter: usize,
    /// Threshold on `beta`, the Newton step length.
    pub stop_tol: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            max_iter: 64,
            stop_tol: 1e-14,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NewtonTrace {
    pub points: Vec<Point>,
    /// `d(z_{k+1}, z_k)`.
    pub step_norms: Vec<f64>,
    /// `beta(z_k)` for every recorded point; `inf` where the derivative is singular.
    #[serde(with = "crate::serde_f64::vec")]
    pub betas: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distances_to_root: Option<Vec<f64>>,
    pub termination: Termination,
}

impl NewtonTrace {
    pub fn last(&self) -> &Point {
        self.points.last().expect("a trace holds at least its start")
    }

    pub fn steps(&self) -> usize {
        self.step_norms.len()
    }

    /// Records `d(z_k, root)` for every point.
    pub fn with_root(mut self, root: &Point) -> Self {
        self.distances_to_root = Some(self.points.iter().map(|p| distance(p, root)).collect());
        self
    }

    /// `sum_{j < k} d(z_{j+1}, z_j)` for each `k`.
    pub fn cumulative_distances(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut out = vec![0.0];
        for s in &self.step_norms {
            acc += s;
            out.push(acc);
        }
        out
    }
}

pub fn newton_step(problem: &Problem, z: &Point) -> Result<Point> {
    let u = newton_direction(problem, z)?;
    Ok(exp_map(z, &u))
}

pub fn newton_sequence(problem: &Problem, z0: &Point, opts: &NewtonOptions) -> NewtonTrace {
    let mut points = vec![z0.clone()];
    let mut step_norms = Vec::new();
    let mut betas = Vec::new();
    let mut termination = Termination::MaxIter;
    for k in 0..=opts.max_iter {
        let z = &points[k];
        let u = match newton_direction(problem, z) {
            Ok(u) => u,
            Err(_) => {
                betas.push(f64::INFINITY);
                termination = Termination::SingularDerivative;
                break;
            }
        };
        let beta = u.norm();
        betas.push(beta);
        if beta < opts.stop_tol {
            termination = Termination::Converged;
            break;
        }
        if k == opts.max_iter {
            break;
        }
        let y = exp_map(z, &u);
        step_norms.push(distance(z, &y));
        let left = beta >= injectivity_radius(z);
        points.push(y);
        if left {
            let last = points.last().expect("just pushed");
            betas.push(newton_direction(problem, last).map_or(f64::INFINITY, |u| u.norm()));
            termination = Termination::LeftInjectivityBall;
            break;
        }
    }
    NewtonTrace {
        points,
        step_norms,
        betas,
        distances_to_root: None,
        termination,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundRow {
    pub k: usize,
    pub distance: f64,
    pub distance_bound: f64,
    pub distance_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step_bound: Option<f64>,
    pub step_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuadraticReport {
    pub initial_distance: f64,
    #[serde(with = "crate::serde_f64")]
    pub initial_beta: f64,
    pub rows: Vec<BoundRow>,
    /// `d(root, z_0)` against `sigma * beta(z_0)`.
    pub drift: f64,
    #[serde(with = "crate::serde_f64")]
    pub drift_bound: f64,
    pub drift_ok: bool,
    /// All distance and step bounds hold (the drift check is reported separately).
    pub all_ok: bool,
}

/// `(1/2)^(2^k - 1)`, zero once it underflows.
pub fn halving_factor(k: usize) -> f64 {
    if k >= 11 {
        return 0.0;
    }
    0.5f64.powi((1i32 << k) - 1)
}

/// Absolute slack for the distance bounds.
pub fn distance_floor(d0: f64) -> f64 {
    1e-13 * (1.0 + d0)
}

pub const STEP_FLOOR: f64 = 1e-13;
pub const DRIFT_FLOOR: f64 = 1e-12;

/// Checks `d(z_k, root) <= (1/2)^(2^k-1) d(z_0, root)` and
/// `d(z_{k+1}, z_k) <= (1/2)^(2^k-1) beta(z_0)` for `k <= depth`, plus the drift
/// bound `d(root, z_0) <= sigma beta(z_0)`.
///
/// A converged trace stops once `beta` is below tolerance; it is treated as
/// stationary from then on, so the later rows reuse its final point.
pub fn verify_quadratic_bound(trace: &NewtonTrace, root: Option<&Point>, depth: usize) -> Result<QuadraticReport> {
    let root = root.ok_or(Error::MissingRoot)?;
    let d0 = distance(&trace.points[0], root);
    let beta0 = trace.betas.first().copied().unwrap_or(f64::INFINITY);
    let last = trace.points.len() - 1;
    let rows_to = if trace.termination == Termination::Converged {
        depth
    } else {
        depth.min(last)
    };
    let floor = distance_floor(d0);
    let mut rows = Vec::with_capacity(rows_to + 1);
    for k in 0..=rows_to {
        let zk = &trace.points[k.min(last)];
        let dk = distance(zk, root);
        let bound = halving_factor(k) * d0;
        let step = if k < trace.step_norms.len() {
            Some(trace.step_norms[k])
        } else if trace.termination == Termination::Converged {
            Some(0.0)
        } else {
            None
        };
        let step_bound = step.map(|_| halving_factor(k) * beta0);
        let step_ok = match (step, step_bound) {
            (Some(s), Some(b)) => s <= b + STEP_FLOOR,
            _ => true,
        };
        rows.push(BoundRow {
            k,
            distance: dk,
            distance_bound: bound,
            distance_ok: dk <= bound + floor,
            step,
            step_bound,
            step_ok,
        });
    }
    let drift_bound = constants().sigma * beta0;
    let all_ok = rows.iter().all(|r| r.distance_ok && r.step_ok);
    Ok(QuadraticReport {
        initial_distance: d0,
        initial_beta: beta0,
        rows,
        drift: d0,
        drift_bound,
        drift_ok: d0 <= drift_bound + DRIFT_FLOOR,
        all_ok,
    })
}
