//! Covariant calculus along geodesics.
//!
//! For a map `f` the `k`-th Taylor coefficient of `t -> f(exp_z(t u))` is
//! `D^k f(z) u^k / k!`; for a vector field the same holds for the field parallel
//! transported back to `T_z`. Both are computed by pushing the geodesic's jets
//! through the problem, which is exact up to rounding.

mod gamma;

pub use gamma::{
    direction_seeds, gamma_estimate, gamma_search, polarization_factor, GammaBracket,
    GammaOptions,
};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::jet::{self, Jet};
use crate::linalg::CheckedSolver;
use crate::manifold::{Point, Tangent};
use crate::problems::{Problem, ProblemKind};

/// Orthonormal basis of `T_z`, used to realise derivatives as square matrices.
#[derive(Clone, Debug)]
pub struct TangentFrame {
    base: Point,
    basis: Vec<DVector<f64>>,
}

impl TangentFrame {
    pub fn new(base: &Point) -> Self {
        TangentFrame {
            base: base.clone(),
            basis: base.manifold().frame(base.coords()),
        }
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn basis(&self) -> &[DVector<f64>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Frame coordinates of an ambient tangent vector.
    pub fn coords(&self, v: &DVector<f64>) -> DVector<f64> {
        let m = self.base.manifold();
        DVector::from_iterator(
            self.basis.len(),
            self.basis.iter().map(|b| m.inner(self.base.coords(), b, v)),
        )
    }

    pub fn ambient(&self, a: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.base.coords().len());
        for (ai, b) in a.iter().zip(&self.basis) {
            out.axpy(*ai, b, 1.0);
        }
        out
    }

    pub fn tangent(&self, a: &DVector<f64>) -> Tangent {
        Tangent::from_raw(&self.base, self.ambient(a))
    }

    /// Gram matrix of the basis; the identity up to rounding.
    pub fn gram(&self) -> DMatrix<f64> {
        let m = self.base.manifold();
        let n = self.basis.len();
        DMatrix::from_fn(n, n, |i, j| {
            m.inner(self.base.coords(), &self.basis[i], &self.basis[j])
        })
    }
}

/// Taylor coefficients `c_0..c_K` of a problem along a geodesic.
#[derive(Clone, Debug)]
pub struct GeodesicJet {
    pub base: Point,
    pub direction: Tangent,
    pub order: usize,
    /// `c_k = D^k f(z) u^k / k!`; ambient tangent vectors at `base` for vector fields.
    pub coefficients: Vec<DVector<f64>>,
}

impl GeodesicJet {
    /// Truncated Taylor polynomial evaluated at `t`.
    pub fn eval(&self, t: f64) -> DVector<f64> {
        let mut acc = DVector::zeros(self.coefficients[0].len());
        for c in self.coefficients.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }
}

/// Raw jets of the problem along `t -> exp_z(t v)`, transported back to `T_z`
/// for vector fields.
pub(crate) fn problem_jets(problem: &Problem, z: &Point, v: &DVector<f64>, order: usize) -> Vec<Jet> {
    let m = problem.manifold();
    let x = m.geodesic_jets(z.coords(), v, order);
    let out = problem.eval_jets(&x);
    match problem.kind() {
        ProblemKind::Map => out,
        ProblemKind::VectorField => m.transport_back_jets(z.coords(), v, &out),
    }
}

pub fn geodesic_jet(problem: &Problem, z: &Point, u: &Tangent, order: usize) -> Result<GeodesicJet> {
    check_manifold(problem, z)?;
    if order == 0 {
        return Err(Error::InvalidArgument("jet order must be at least 1".into()));
    }
    let jets = problem_jets(problem, z, u.coords(), order);
    let coefficients: Vec<DVector<f64>> = (0..=order)
        .map(|k| DVector::from_vec(jet::coefficient(&jets, k)))
        .collect();
    if let Some(k) = coefficients.iter().position(|c| c.iter().any(|x| !x.is_finite())) {
        return Err(Error::JetDivergence { order: k });
    }
    Ok(GeodesicJet {
        base: z.clone(),
        direction: u.clone(),
        order,
        coefficients,
    })
}

fn check_manifold(problem: &Problem, z: &Point) -> Result<()> {
    if problem.manifold() != z.manifold() {
        return Err(Error::InvalidArgument(format!(
            "problem lives on {}, point on {}",
            problem.manifold(),
            z.manifold()
        )));
    }
    Ok(())
}

/// Value of the problem at `z`: `f(z)` for maps, ambient `X(z)` for fields.
pub fn value(problem: &Problem, z: &Point) -> DVector<f64> {
    let out = problem.eval_jets(&jet::constants(z.coords().as_slice()));
    DVector::from_iterator(out.len(), out.iter().map(Jet::value))
}

/// `Df(z)` (or `DX(z)`) in a tangent frame, together with the value in the
/// matching output coordinates.
#[derive(Clone, Debug)]
pub struct Linearization {
    pub frame: TangentFrame,
    /// `f(z)` for maps; frame coordinates of `X(z)` for fields.
    pub value: DVector<f64>,
    /// Column `i` is the derivative along frame vector `i`.
    pub jacobian: DMatrix<f64>,
    pub solver: Result<CheckedSolver>,
}

impl Linearization {
    pub fn new(problem: &Problem, z: &Point) -> Result<Self> {
        check_manifold(problem, z)?;
        let frame = TangentFrame::new(z);
        let n = frame.dim();
        let raw = value(problem, z);
        let value = output_coords(problem, &frame, &raw);
        if value.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: value.len(),
            });
        }
        let mut jacobian = DMatrix::zeros(n, n);
        for (i, b) in frame.basis().iter().enumerate() {
            let jets = problem_jets(problem, z, b, 1);
            let d = DVector::from_vec(jet::coefficient(&jets, 1));
            jacobian.set_column(i, &output_coords(problem, &frame, &d));
        }
        let solver = CheckedSolver::new(&jacobian);
        Ok(Linearization {
            frame,
            value,
            jacobian,
            solver,
        })
    }

    pub fn solver(&self) -> Result<&CheckedSolver> {
        self.solver.as_ref().map_err(Clone::clone)
    }

    /// Frame coordinates of `-Df(z)^-1 f(z)`.
    pub fn newton_coords(&self) -> Result<DVector<f64>> {
        Ok(-self.solver()?.solve(&self.value))
    }
}

/// Expresses an output vector in the coordinates the Jacobian uses.
pub(crate) fn output_coords(problem: &Problem, frame: &TangentFrame, v: &DVector<f64>) -> DVector<f64> {
    match problem.kind() {
        ProblemKind::Map => v.clone(),
        ProblemKind::VectorField => frame.coords(v),
    }
}

pub fn newton_direction(problem: &Problem, z: &Point) -> Result<Tangent> {
    let lin = Linearization::new(problem, z)?;
    let a = lin.newton_coords()?;
    Ok(lin.frame.tangent(&a))
}

/// `|Df(z)^-1 f(z)|`, or `inf` where the derivative is singular.
pub fn beta(problem: &Problem, z: &Point) -> f64 {
    match newton_direction(problem, z) {
        Ok(u) => u.norm(),
        Err(_) => f64::INFINITY,
    }
}
