//! Orthogonal groups with the bi-invariant Frobenius metric.
//!
//! Matrices are flattened row-major. Tangent vectors at `Q` are `Q A` with `A`
//! antisymmetric; geodesics are `Q exp(t A)` and parallel transport along them is
//! `Q B -> Q exp(t A / 2) B exp(t A / 2)`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::linalg::{antisymmetric_part, expm, from_row_major, logm, polar_factor, row_major, spectral_norm};

fn mat(n: usize, x: &DVector<f64>) -> DMatrix<f64> {
    from_row_major(n, x.as_slice())
}

fn vec(m: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_vec(row_major(m))
}

pub(super) fn residual(n: usize, special: bool, x: &DVector<f64>) -> f64 {
    let q = mat(n, x);
    let r = (q.transpose() * &q - DMatrix::identity(n, n)).norm();
    if special && q.determinant() <= 0.0 {
        return f64::INFINITY;
    }
    r
}

pub(super) fn tangent_residual(n: usize, z: &DVector<f64>, v: &DVector<f64>) -> f64 {
    let a = mat(n, z).transpose() * mat(n, v);
    (&a + a.transpose()).norm() * 0.5
}

pub(super) fn project(n: usize, special: bool, x: &DVector<f64>) -> Option<DVector<f64>> {
    let q = polar_factor(&mat(n, x))?;
    if special && q.determinant() < 0.0 {
        return None;
    }
    Some(vec(&q))
}

pub(super) fn project_tangent(n: usize, z: &DVector<f64>, w: &DVector<f64>) -> DVector<f64> {
    let q = mat(n, z);
    let a = antisymmetric_part(&(q.transpose() * mat(n, w)));
    vec(&(q * a))
}

pub(super) fn exp(n: usize, z: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
    let q = mat(n, z);
    let a = antisymmetric_part(&(q.transpose() * mat(n, v)));
    vec(&(q * expm(&a)))
}

pub(super) fn log(n: usize, z: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
    let q = mat(n, z);
    let p = mat(n, y);
    // the logarithm series converges iff |Q - P| < 1 in the spectral norm
    let chord = spectral_norm(&(&q - &p));
    if chord >= 1.0 {
        return Err(Error::OutOfInjectivityBall {
            distance: distance(n, z, y),
            radius: 1.0,
        });
    }
    let a = logm(&(q.transpose() * p)).ok_or(Error::OutOfInjectivityBall {
        distance: f64::NAN,
        radius: 1.0,
    })?;
    Ok(vec(&(q * antisymmetric_part(&a))))
}

/// Geodesic distance `|log(Q^T P)|_F`; infinite between the two components of `O(n)`.
///
/// The rotation angles of `R = Q^T P` come from the symmetric part, whose
/// eigenvalues are `cos(theta)`, paired with `|K v| = |sin(theta)|` for the
/// antisymmetric part `K`. Unlike a general eigensolver this always converges and
/// keeps full relative accuracy for small angles.
pub(super) fn distance(n: usize, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    let r = mat(n, x).transpose() * mat(n, y);
    if r.determinant() < 0.0 {
        return f64::INFINITY;
    }
    let sym = (&r + r.transpose()) * 0.5;
    let skew = antisymmetric_part(&r);
    let eig = sym.symmetric_eigen();
    (0..n)
        .map(|j| {
            let v = eig.eigenvectors.column(j);
            let a = (&skew * v).norm().atan2(eig.eigenvalues[j]);
            a * a
        })
        .sum::<f64>()
        .sqrt()
}

pub(super) fn transport(
    n: usize,
    z: &DVector<f64>,
    y: &DVector<f64>,
    v: &DVector<f64>,
) -> Result<DVector<f64>> {
    let u = log(n, z, y)?;
    let q = mat(n, z);
    let a = q.transpose() * mat(n, &u);
    let b = q.transpose() * mat(n, v);
    let half = expm(&(&a * 0.5));
    let p = mat(n, y);
    let out = p * half.transpose() * b * half;
    Ok(vec(&out))
}

pub(super) fn frame(n: usize, z: &DVector<f64>) -> Vec<DVector<f64>> {
    let q = mat(n, z);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut basis = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let mut e = DMatrix::zeros(n, n);
            e[(i, j)] = -s;
            e[(j, i)] = s;
            basis.push(vec(&(&q * e)));
        }
    }
    basis
}

pub(super) fn random(n: usize, special: bool, g: DVector<f64>) -> DVector<f64> {
    let qr = mat(n, &g).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if special && q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    vec(&q)
}

/// Row-major `n x n` matrix of jets.
struct JetMatrix {
    n: usize,
    entries: Vec<Jet>,
}

impl JetMatrix {
    /// `sum_k M^k t^k / k!` for a constant matrix `m`.
    fn exp_series(m: &DMatrix<f64>, order: usize) -> Self {
        let n = m.nrows();
        let mut coeffs = vec![vec![0.0; order + 1]; n * n];
        let mut power = DMatrix::<f64>::identity(n, n);
        for k in 0..=order {
            if k > 0 {
                power = &power * m / k as f64;
            }
            for i in 0..n {
                for j in 0..n {
                    coeffs[i * n + j][k] = power[(i, j)];
                }
            }
        }
        JetMatrix {
            n,
            entries: coeffs.into_iter().map(Jet::from_coeffs).collect(),
        }
    }

    fn from_jets(n: usize, entries: &[Jet]) -> Self {
        JetMatrix {
            n,
            entries: entries.to_vec(),
        }
    }

    fn mul(&self, other: &JetMatrix) -> JetMatrix {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(
                    (0..n)
                        .map(|k| &self.entries[i * n + k] * &other.entries[k * n + j])
                        .sum(),
                );
            }
        }
        JetMatrix { n, entries }
    }

    fn left_mul_const(&self, m: &DMatrix<f64>) -> JetMatrix {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(
                    (0..n)
                        .map(|k| self.entries[k * n + j].scale(m[(i, k)]))
                        .sum(),
                );
            }
        }
        JetMatrix { n, entries }
    }
}

pub(super) fn geodesic_jets(n: usize, z: &DVector<f64>, v: &DVector<f64>, order: usize) -> Vec<Jet> {
    let q = mat(n, z);
    let a = antisymmetric_part(&(q.transpose() * mat(n, v)));
    JetMatrix::exp_series(&a, order).left_mul_const(&q).entries
}

pub(super) fn transport_back_jets(n: usize, z: &DVector<f64>, v: &DVector<f64>, w: &[Jet]) -> Vec<Jet> {
    let order = w.iter().map(Jet::len).max().unwrap_or(1).saturating_sub(1);
    let q = mat(n, z);
    let a = antisymmetric_part(&(q.transpose() * mat(n, v)));
    // W(t) = Q exp(tA/2) B(t) exp(tA/2)  =>  B(t) = exp(-tA/2) Q^T W(t) exp(-tA/2)
    let half = JetMatrix::exp_series(&(&a * -0.5), order);
    let qt_w = JetMatrix::from_jets(n, w).left_mul_const(&q.transpose());
    half.mul(&qt_w).mul(&half).left_mul_const(&q).entries
}
