//! Dense linear-algebra helpers shared by the manifolds and the calculus layer.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Derivatives whose tangent-frame condition number exceeds this are treated as singular.
pub const SINGULAR_CONDITION: f64 = 1e14;

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let norm = a.iter().map(|x| x.abs()).fold(0.0, f64::max) * n as f64;
    let mut squarings = 0u32;
    if norm > 0.5 {
        squarings = (norm / 0.5).log2().ceil() as u32;
    }
    let scaled = a / 2f64.powi(squarings as i32);
    let mut result = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..=30 {
        term = &term * &scaled / k as f64;
        result += &term;
        if term.amax() < 1e-18 * result.amax() {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Principal square root by the Denman-Beavers iteration.
fn sqrtm(x: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let n = x.nrows();
    let mut y = x.clone();
    let mut z = DMatrix::identity(n, n);
    for _ in 0..100 {
        let y_inv = y.clone().try_inverse()?;
        let z_inv = z.clone().try_inverse()?;
        let y_next = (&y + z_inv) * 0.5;
        let z_next = (&z + y_inv) * 0.5;
        let delta = (&y_next - &y).amax();
        y = y_next;
        z = z_next;
        if delta <= 1e-16 * y.amax().max(1.0) {
            return Some(y);
        }
    }
    Some(y)
}

/// Matrix logarithm by inverse scaling and squaring: repeated square roots bring
/// the argument close to the identity, where the `atanh` series is used.
pub fn logm(x: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let n = x.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let mut m = x.clone();
    let mut roots = 0u32;
    while (&m - &id).norm() > 0.25 {
        m = sqrtm(&m)?;
        roots += 1;
        if roots > 60 {
            return None;
        }
    }
    // log M = 2 atanh(W), W = (M - I)(M + I)^-1
    let w = (&m - &id) * (&m + &id).try_inverse()?;
    let w2 = &w * &w;
    let mut power = w.clone();
    let mut sum = w.clone();
    for j in 1..40 {
        power = &power * &w2;
        let term = &power / (2 * j + 1) as f64;
        sum += &term;
        if term.amax() < 1e-18 {
            break;
        }
    }
    Some(sum * 2.0 * 2f64.powi(roots as i32))
}

pub fn spectral_norm(a: &DMatrix<f64>) -> f64 {
    a.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(0.0, |m, s| f64::max(m, *s))
}

/// Ratio of extreme singular values; `inf` for an exactly singular matrix.
pub fn condition_number(a: &DMatrix<f64>) -> f64 {
    let sv = a.clone().svd(false, false).singular_values;
    let max = sv.iter().fold(0.0, |m, s| f64::max(m, *s));
    let min = sv.iter().fold(f64::INFINITY, |m, s| f64::min(m, *s));
    if min == 0.0 || !min.is_finite() {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Nearest orthogonal matrix (polar factor) via the SVD.
pub fn polar_factor(a: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let svd = a.clone().svd(true, true);
    let u = svd.u?;
    let v_t = svd.v_t?;
    Some(u * v_t)
}

pub fn antisymmetric_part(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a - a.transpose()) * 0.5
}

pub fn max_asymmetry(a: &DMatrix<f64>) -> f64 {
    (a - a.transpose()).amax()
}

/// An LU-factored square operator whose conditioning has been checked.
#[derive(Clone, Debug)]
pub struct CheckedSolver {
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    pub condition: f64,
}

impl CheckedSolver {
    pub fn new(a: &DMatrix<f64>) -> Result<Self> {
        let condition = condition_number(a);
        if !(condition <= SINGULAR_CONDITION) {
            return Err(Error::SingularDerivative { condition });
        }
        Ok(CheckedSolver {
            lu: a.clone().lu(),
            condition,
        })
    }

    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        self.lu
            .solve(b)
            .expect("conditioning was checked at construction")
    }

    pub fn inverse(&self) -> DMatrix<f64> {
        self.lu
            .try_inverse()
            .expect("conditioning was checked at construction")
    }
}

pub fn row_major(m: &DMatrix<f64>) -> Vec<f64> {
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(m[(i, j)]);
        }
    }
    out
}

pub fn from_row_major(n: usize, data: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(n, n, data)
}
