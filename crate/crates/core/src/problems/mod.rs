//! Problem catalog: square systems `f: M -> R^n` and vector fields `X: M -> TM`,
//! each with the zeros an independent dense solver can certify, plus complex
//! systems and their realification.

mod catalog;
mod complex;

pub use catalog::{alignment_matrix, catalog_list, from_id, random_spd, ProblemInfo};
pub use complex::{
    complex_invariants, complex_quadratic, stack, unstack, CJet, ComplexFn, ComplexInvariants,
    ComplexMapProblem,
};

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::linalg::{max_asymmetry, polar_factor, row_major};
use crate::manifold::{distance, Manifold, Point};

/// A problem evaluated on ambient-coordinate jets.
pub type JetFn = dyn Fn(&[Jet]) -> Vec<Jet> + Send + Sync;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    /// `f: M -> R^n` with `n = dim M`.
    Map,
    /// `X: M -> TM`, valued in ambient coordinates.
    VectorField,
}

#[derive(Clone)]
pub struct Problem {
    name: String,
    manifold: Manifold,
    kind: ProblemKind,
    func: Arc<JetFn>,
    known_zeros: Vec<Point>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("manifold", &self.manifold)
            .field("kind", &self.kind)
            .field("known_zeros", &self.known_zeros.len())
            .finish()
    }
}

impl Problem {
    /// A square system on `manifold`; `f` must return `manifold.dimension()` jets.
    pub fn map<F>(name: impl Into<String>, manifold: Manifold, f: F) -> Self
    where
        F: Fn(&[Jet]) -> Vec<Jet> + Send + Sync + 'static,
    {
        Problem {
            name: name.into(),
            manifold,
            kind: ProblemKind::Map,
            func: Arc::new(f),
            known_zeros: Vec::new(),
        }
    }

    /// A tangent vector field; `f` returns ambient coordinates and must be tangent.
    pub fn vector_field<F>(name: impl Into<String>, manifold: Manifold, f: F) -> Self
    where
        F: Fn(&[Jet]) -> Vec<Jet> + Send + Sync + 'static,
    {
        Problem {
            kind: ProblemKind::VectorField,
            ..Problem::map(name, manifold, f)
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_zeros(mut self, zeros: Vec<Point>) -> Self {
        self.known_zeros = zeros;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn manifold(&self) -> Manifold {
        self.manifold
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    pub fn known_zeros(&self) -> &[Point] {
        &self.known_zeros
    }

    pub fn eval_jets(&self, x: &[Jet]) -> Vec<Jet> {
        (self.func)(x)
    }

    /// `f(z)` for maps, ambient `X(z)` for fields.
    pub fn evaluate(&self, z: &Point) -> DVector<f64> {
        crate::calculus::value(self, z)
    }

    /// The problem `c f`; it has the same zeros and Newton operator.
    pub fn scaled(&self, c: f64) -> Problem {
        let inner = Arc::clone(&self.func);
        Problem {
            name: format!("{}*{c}", self.name),
            func: Arc::new(move |x: &[Jet]| inner(x).into_iter().map(|j| j.scale(c)).collect()),
            ..self.clone()
        }
    }

    /// Known zero closest to `z`, with its distance.
    pub fn nearest_zero(&self, z: &Point) -> Option<(&Point, f64)> {
        self.known_zeros
            .iter()
            .map(|p| (p, distance(p, z)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }
}

fn mat_vec(a: &DMatrix<f64>, x: &[Jet]) -> Vec<Jet> {
    (0..a.nrows())
        .map(|i| x.iter().enumerate().map(|(j, xj)| xj.scale(a[(i, j)])).sum())
        .collect()
}

fn dot(a: &[Jet], b: &[Jet]) -> Jet {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Unit eigenvectors of a symmetric matrix, sorted by ascending eigenvalue, each
/// signed so that its largest-magnitude entry is positive.
pub fn symmetric_eigen(a: &DMatrix<f64>) -> (Vec<f64>, Vec<DVector<f64>>) {
    let eig = a.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..a.nrows()).collect();
    order.sort_by(|i, j| eig.eigenvalues[*i].total_cmp(&eig.eigenvalues[*j]));
    let values = order.iter().map(|i| eig.eigenvalues[*i]).collect();
    let vectors = order
        .iter()
        .map(|i| {
            let v = eig.eigenvectors.column(*i).into_owned();
            let pivot = v.iamax();
            let v = if v[pivot] < 0.0 { -v } else { v };
            let n = v.norm();
            v / n
        })
        .collect();
    (values, vectors)
}

fn check_symmetric(a: &DMatrix<f64>) -> Result<()> {
    if !a.is_square() || a.nrows() < 2 {
        return Err(Error::InvalidArgument(format!(
            "expected a square matrix of size at least 2, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let asymmetry = max_asymmetry(a);
    if !(asymmetry <= 1e-12) {
        return Err(Error::NotSymmetric { asymmetry });
    }
    Ok(())
}

fn rayleigh_field(a: DMatrix<f64>) -> impl Fn(&[Jet]) -> Vec<Jet> + Send + Sync + 'static {
    move |x: &[Jet]| {
        let ax = mat_vec(&a, x);
        let r = dot(x, &ax);
        ax.iter().zip(x).map(|(axi, xi)| axi - &(&r * xi)).collect()
    }
}

/// `X(x) = A x - <x, A x> x` on `S^(n-1)`; zeros are the unit eigenvectors of `A`.
pub fn eigen_field(a: &DMatrix<f64>) -> Result<Problem> {
    check_symmetric(a)?;
    let n = a.nrows();
    let m = Manifold::Sphere(n - 1);
    let (_, vectors) = symmetric_eigen(a);
    let zeros = vectors
        .iter()
        .flat_map(|v| [v.clone(), -v])
        .map(|v| m.project_point(v.as_slice().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Problem::vector_field(format!("eigen:{}", matrix_label(a)), m, rayleigh_field(a.clone())).with_zeros(zeros))
}

/// The same field on `P^(n-1)`; it is odd in `x` and therefore descends to the quotient.
pub fn projective_eigen_field(a: &DMatrix<f64>) -> Result<Problem> {
    check_symmetric(a)?;
    let n = a.nrows();
    let m = Manifold::Projective(n - 1);
    let (_, vectors) = symmetric_eigen(a);
    let zeros = vectors
        .iter()
        .map(|v| m.project_point(v.as_slice().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Problem::vector_field(
        format!("projective-eigen:{}", matrix_label(a)),
        m,
        rayleigh_field(a.clone()),
    )
    .with_zeros(zeros))
}

fn matrix_label(a: &DMatrix<f64>) -> String {
    let is_diag = (0..a.nrows()).all(|i| (0..a.ncols()).all(|j| i == j || a[(i, j)] == 0.0));
    if is_diag {
        let d: Vec<String> = a.diagonal().iter().map(|v| format!("{v}")).collect();
        format!("diag({})", d.join(","))
    } else {
        let rows: Vec<Vec<f64>> = (0..a.nrows()).map(|i| a.row(i).iter().copied().collect()).collect();
        serde_json::to_string(&rows).unwrap_or_default()
    }
}

/// `f_i(x) = c_i + sum_j b_ij x_j + sum_jk q_i[j,k] x_j x_k` on `R^n`.
pub fn quadratic_euclidean(
    b: &DMatrix<f64>,
    c: &DVector<f64>,
    q: &[DMatrix<f64>],
) -> Result<Problem> {
    let n = c.len();
    if b.nrows() != n || b.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.nrows().max(b.ncols()),
        });
    }
    if !q.is_empty() && (q.len() != n || q.iter().any(|m| m.nrows() != n || m.ncols() != n)) {
        return Err(Error::DimensionMismatch { expected: n, got: q.len() });
    }
    let (b, c, q) = (b.clone(), c.clone(), q.to_vec());
    Ok(Problem::map(
        format!("quadratic:{n}"),
        Manifold::Euclidean(n),
        move |x: &[Jet]| {
            let bx = mat_vec(&b, x);
            (0..n)
                .map(|i| {
                    let mut out = &bx[i] + c[i];
                    if let Some(qi) = q.get(i) {
                        let qx = mat_vec(qi, x);
                        out += dot(x, &qx);
                    }
                    out
                })
                .collect()
        },
    ))
}

fn skew_vee(s: &DMatrix<Jet>) -> Vec<Jet> {
    let half = |a: &Jet, b: &Jet| (a - b).scale(0.5);
    vec![
        half(&s[(2, 1)], &s[(1, 2)]),
        half(&s[(0, 2)], &s[(2, 0)]),
        half(&s[(1, 0)], &s[(0, 1)]),
    ]
}

/// `f(Q) = vee(skew(Q^T M))` on `SO(3)`; the polar factor of `M` is a zero when it is
/// a rotation.
pub fn so3_alignment_map(m: &DMatrix<f64>) -> Result<Problem> {
    if m.nrows() != 3 || m.ncols() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: m.nrows(),
        });
    }
    let cond = crate::linalg::condition_number(m);
    if !(cond <= crate::linalg::SINGULAR_CONDITION) {
        return Err(Error::SingularInput);
    }
    let manifold = Manifold::Orthogonal { n: 3, special: true };
    let mut zeros = Vec::new();
    if let Some(u) = polar_factor(m) {
        if u.determinant() > 0.0 {
            zeros.push(manifold.project_point(row_major(&u))?);
        }
    }
    let mm = m.clone();
    Ok(Problem::map(format!("so3-align:{}", matrix_label(m)), manifold, move |x: &[Jet]| {
        // (Q^T M)_ij = sum_k Q_ki M_kj
        let prod = DMatrix::from_fn(3, 3, |i, j| {
            (0..3).map(|k| x[k * 3 + i].scale(mm[(k, j)])).sum::<Jet>()
        });
        skew_vee(&prod)
    })
    .with_zeros(zeros))
}

/// `f(x) = (x_1 - c_1, ..., x_n - c_n)` on the hyperboloid, a map whose single zero
/// is the point with spatial part `c`.
pub fn hyperbolic_shift(c: &DVector<f64>) -> Result<Problem> {
    let n = c.len();
    if n == 0 {
        return Err(Error::InvalidArgument("shift needs at least one coordinate".into()));
    }
    let m = Manifold::Hyperbolic(n);
    let mut root = vec![(1.0 + c.norm_squared()).sqrt()];
    root.extend(c.iter());
    let zero = m.point(root)?;
    let c = c.clone();
    Ok(Problem::map(format!("hyper-shift:{n}"), m, move |x: &[Jet]| {
        (0..n).map(|i| &x[i + 1] - c[i]).collect()
    })
    .with_zeros(vec![zero]))
}
