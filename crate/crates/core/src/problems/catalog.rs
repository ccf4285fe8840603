//! String-keyed registry of problems.
//!
//! Ids are `family` or `family:params`. Matrices are given inline as JSON row
//! arrays, as `diag(a,b,...)`, or through seeded generators such as
//! `random-spd:n:seed`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::Serialize;

use super::complex::{complex_quadratic, ComplexMapProblem};
use super::{eigen_field, hyperbolic_shift, projective_eigen_field, quadratic_euclidean, so3_alignment_map, Problem, ProblemKind};
use crate::error::{Error, Result};
use crate::manifold::{gaussian_vector, random_point, seeded_rng, Manifold};

#[derive(Clone, Debug, Serialize)]
pub struct ProblemInfo {
    pub id: String,
    pub kind: ProblemKind,
    pub manifold: String,
    pub description: String,
}

const EXAMPLES: &[(&str, &str)] = &[
    ("quad1d", "x^2 - 1 on the real line; zeros -1 and 1"),
    ("quad2d", "(x1^2 - 1, x2^2 - 4) on the plane; zeros (+-1, +-2)"),
    ("quad:random:3:0", "random quadratic system on R^n with a planted zero"),
    ("linear:3", "affine system Bx - c with a unique zero"),
    ("eigen:diag(1,2,3)", "Rayleigh field Ax - <x,Ax>x on the sphere"),
    ("eigen:random-spd:5:0", "Rayleigh field of a random SPD matrix; also accepts inline JSON matrices"),
    ("projective-eigen:diag(1,2,3)", "Rayleigh field on real projective space"),
    ("so3-align:random:0", "vee(skew(Q^T M)) on SO(3) with M = diag(2,1,1) R"),
    ("hyper-shift:[0.3,-0.2]", "spatial-coordinate shift on the hyperboloid"),
    ("complex-quad1d", "z^2 - 1 on C, realified to R^2"),
    ("complex-quad:2:0", "random complex quadratic system with a planted zero, realified"),
];

/// Representative ids of every registered family.
pub fn catalog_list() -> Vec<ProblemInfo> {
    EXAMPLES
        .iter()
        .map(|(id, description)| {
            let p = from_id(id).expect("catalog examples are valid");
            ProblemInfo {
                id: id.to_string(),
                kind: p.kind(),
                manifold: p.manifold().to_string(),
                description: description.to_string(),
            }
        })
        .collect()
}

fn bad(id: &str) -> Error {
    Error::UnknownProblem(id.to_string())
}

fn parse_usize(s: &str, id: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| bad(id))
}

fn parse_u64(s: &str, id: &str) -> Result<u64> {
    s.trim().parse().map_err(|_| bad(id))
}

/// Parses `diag(...)`, `random-spd:n:seed` or a JSON array of rows.
fn parse_symmetric(spec: &str, id: &str) -> Result<DMatrix<f64>> {
    if let Some(inner) = spec.strip_prefix("diag(").and_then(|s| s.strip_suffix(')')) {
        let d: Vec<f64> = inner
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| bad(id)))
            .collect::<Result<_>>()?;
        return Ok(DMatrix::from_diagonal(&DVector::from_vec(d)));
    }
    if let Some(rest) = spec.strip_prefix("random-spd:") {
        let (n, seed) = rest.split_once(':').ok_or_else(|| bad(id))?;
        return Ok(random_spd(parse_usize(n, id)?, parse_u64(seed, id)?));
    }
    parse_json_matrix(spec, id)
}

fn parse_json_matrix(spec: &str, id: &str) -> Result<DMatrix<f64>> {
    let rows: Vec<Vec<f64>> = serde_json::from_str(spec).map_err(|_| bad(id))?;
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if n == 0 || rows.iter().any(|r| r.len() != m) {
        return Err(Error::InvalidArgument(format!("ragged matrix in `{id}`")));
    }
    Ok(DMatrix::from_fn(n, m, |i, j| rows[i][j]))
}

/// `G G^T / n + I` for a seeded Gaussian `G`; eigenvalues are simple almost surely.
pub fn random_spd(n: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = seeded_rng(seed);
    let g = DMatrix::from_fn(n, n, |_, _| gaussian_vector(&mut rng, 1)[0]);
    let a = &g * g.transpose() / n as f64 + DMatrix::identity(n, n);
    (&a + a.transpose()) * 0.5
}

fn random_quadratic(n: usize, seed: u64) -> Result<Problem> {
    let mut rng = seeded_rng(seed);
    let zero = gaussian_vector(&mut rng, n);
    let b = DMatrix::identity(n, n) * 2.0 + DMatrix::from_fn(n, n, |_, _| rng.random_range(-0.5..0.5));
    let q: Vec<DMatrix<f64>> = (0..n)
        .map(|_| DMatrix::from_fn(n, n, |_, _| rng.random_range(-0.5..0.5)))
        .collect();
    // planted zero: c = -(B z + z^T Q_i z)
    let c = DVector::from_fn(n, |i, _| -((&b * &zero)[i] + zero.dot(&(&q[i] * &zero))));
    let p = quadratic_euclidean(&b, &c, &q)?;
    let m = p.manifold();
    Ok(p.with_zeros(vec![m.point(zero.as_slice().to_vec())?]))
}

fn linear(n: usize, seed: u64) -> Result<Problem> {
    let mut rng = seeded_rng(seed);
    let b = DMatrix::identity(n, n) + DMatrix::from_fn(n, n, |_, _| rng.random_range(-0.3..0.3));
    let c = gaussian_vector(&mut rng, n);
    let zero = b.clone().lu().solve(&c).ok_or(Error::SingularInput)?;
    let p = quadratic_euclidean(&b, &(-c), &[])?;
    let m = p.manifold();
    Ok(p.with_zeros(vec![m.point(zero.as_slice().to_vec())?]))
}

/// `diag(2, 1, 1) R` with `R` a seeded random rotation.
pub fn alignment_matrix(seed: u64) -> DMatrix<f64> {
    let r = random_point(Manifold::Orthogonal { n: 3, special: true }, seed);
    let r = DMatrix::from_row_slice(3, 3, r.coords().as_slice());
    DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 1.0, 1.0])) * r
}

fn realified(p: ComplexMapProblem) -> Problem {
    p.realify()
}

/// Looks up a problem by id.
pub fn from_id(id: &str) -> Result<Problem> {
    let id = id.trim();
    lookup(id).map(|p| p.named(id))
}

fn lookup(id: &str) -> Result<Problem> {
    let (family, params) = id.split_once(':').unwrap_or((id, ""));
    match (family, params) {
        ("quad1d", "") => {
            let p = quadratic_euclidean(
                &DMatrix::zeros(1, 1),
                &DVector::from_vec(vec![-1.0]),
                &[DMatrix::from_element(1, 1, 1.0)],
            )?;
            let m = p.manifold();
            Ok(p.with_zeros(vec![m.point(vec![-1.0])?, m.point(vec![1.0])?]))
        }
        ("quad2d", "") => {
            let q = vec![
                DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]),
                DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0]),
            ];
            let p = quadratic_euclidean(&DMatrix::zeros(2, 2), &DVector::from_vec(vec![-1.0, -4.0]), &q)?;
            let m = p.manifold();
            let mut zeros = Vec::new();
            for a in [-1.0, 1.0] {
                for b in [-2.0, 2.0] {
                    zeros.push(m.point(vec![a, b])?);
                }
            }
            Ok(p.with_zeros(zeros))
        }
        ("quad", rest) => {
            let parts: Vec<&str> = rest.split(':').collect();
            match parts.as_slice() {
                ["random", n, seed] => random_quadratic(parse_usize(n, id)?.max(1), parse_u64(seed, id)?),
                _ => Err(bad(id)),
            }
        }
        ("linear", rest) => {
            let parts: Vec<&str> = rest.split(':').collect();
            match parts.as_slice() {
                [n] => linear(parse_usize(n, id)?.max(1), 0),
                [n, seed] => linear(parse_usize(n, id)?.max(1), parse_u64(seed, id)?),
                _ => Err(bad(id)),
            }
        }
        ("eigen", spec) if !spec.is_empty() => eigen_field(&parse_symmetric(spec, id)?),
        ("projective-eigen", spec) if !spec.is_empty() => projective_eigen_field(&parse_symmetric(spec, id)?),
        ("so3-align", spec) if !spec.is_empty() => {
            let m = match spec.strip_prefix("random:") {
                Some(seed) => alignment_matrix(parse_u64(seed, id)?),
                None if spec == "identity" => DMatrix::identity(3, 3),
                None => parse_json_matrix(spec, id)?,
            };
            so3_alignment_map(&m)
        }
        ("hyper-shift", spec) if !spec.is_empty() => {
            let c: Vec<f64> = if spec.starts_with('[') {
                serde_json::from_str(spec).map_err(|_| bad(id))?
            } else {
                let (n, seed) = spec.split_once(':').ok_or_else(|| bad(id))?;
                let mut rng = seeded_rng(parse_u64(seed, id)?);
                gaussian_vector(&mut rng, parse_usize(n, id)?).scale(0.5).as_slice().to_vec()
            };
            hyperbolic_shift(&DVector::from_vec(c))
        }
        ("complex-quad1d", "") => Ok(realified(complex_quadratic(1, None))),
        ("complex-quad", rest) => {
            let (n, seed) = rest.split_once(':').ok_or_else(|| bad(id))?;
            Ok(realified(complex_quadratic(parse_usize(n, id)?.max(1), Some(parse_u64(seed, id)?))))
        }
        _ => Err(bad(id)),
    }
}
