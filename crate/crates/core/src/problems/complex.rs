//! Complex square systems on `C^n` and their realification on `R^(2n)`.
//!
//! Coordinates are stacked as `[Re z; Im z]`. Because `Df(z)` is complex linear,
//! `Df(z)(u + iv) = f(z)` holds exactly when the realified derivative maps
//! `[u; v]` to `[Re f; Im f]`, so `beta`, `gamma` and the Newton step agree between
//! the two pipelines.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::Rng;

use crate::calculus::{direction_seeds, gamma_search, polarization_factor, GammaBracket, GammaOptions};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::linalg::SINGULAR_CONDITION;
use crate::manifold::{seeded_rng, Manifold};

use super::Problem;

pub type CJet = Complex<Jet>;
pub type ComplexFn = dyn Fn(&[CJet]) -> Vec<CJet> + Send + Sync;

#[derive(Clone)]
pub struct ComplexMapProblem {
    pub name: String,
    pub n: usize,
    func: Arc<ComplexFn>,
    pub known_zeros: Vec<DVector<Complex<f64>>>,
}

impl std::fmt::Debug for ComplexMapProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ComplexMapProblem")
            .field("name", &self.name)
            .field("n", &self.n)
            .finish()
    }
}

fn lift(c: Complex<f64>) -> CJet {
    Complex::new(Jet::constant(c.re), Jet::constant(c.im))
}

impl ComplexMapProblem {
    pub fn new<F>(name: impl Into<String>, n: usize, f: F) -> Self
    where
        F: Fn(&[CJet]) -> Vec<CJet> + Send + Sync + 'static,
    {
        ComplexMapProblem {
            name: name.into(),
            n,
            func: Arc::new(f),
            known_zeros: Vec::new(),
        }
    }

    pub fn eval_jets(&self, z: &[CJet]) -> Vec<CJet> {
        (self.func)(z)
    }

    pub fn evaluate(&self, z: &DVector<Complex<f64>>) -> DVector<Complex<f64>> {
        let x: Vec<CJet> = z.iter().map(|c| lift(*c)).collect();
        let out = self.eval_jets(&x);
        DVector::from_iterator(out.len(), out.iter().map(|c| Complex::new(c.re.value(), c.im.value())))
    }

    /// Jets of `t -> f(z + t u)`.
    fn jets_along(&self, z: &DVector<Complex<f64>>, u: &DVector<Complex<f64>>, order: usize) -> Vec<CJet> {
        let x: Vec<CJet> = z
            .iter()
            .zip(u.iter())
            .map(|(zi, ui)| Complex::new(Jet::linear(zi.re, ui.re, order), Jet::linear(zi.im, ui.im, order)))
            .collect();
        self.eval_jets(&x)
    }

    /// The complex derivative `Df(z)` as an `n x n` matrix.
    pub fn jacobian(&self, z: &DVector<Complex<f64>>) -> DMatrix<Complex<f64>> {
        let n = self.n;
        let mut j = DMatrix::zeros(n, n);
        for col in 0..n {
            let e = DVector::from_fn(n, |i, _| if i == col { Complex::new(1.0, 0.0) } else { Complex::new(0.0, 0.0) });
            let out = self.jets_along(z, &e, 1);
            for (row, c) in out.iter().enumerate() {
                j[(row, col)] = Complex::new(c.re.coeff(1), c.im.coeff(1));
            }
        }
        j
    }

    /// `f_R(x, y) = (Re f(x + iy), Im f(x + iy))` on `R^(2n)`.
    pub fn realify(&self) -> Problem {
        let n = self.n;
        let inner = Arc::clone(&self.func);
        let m = Manifold::Euclidean(2 * n);
        let zeros = self
            .known_zeros
            .iter()
            .map(|z| m.point(stack(z).as_slice().to_vec()))
            .collect::<Result<Vec<_>>>()
            .unwrap_or_default();
        Problem::map(self.name.clone(), m, move |x: &[Jet]| {
            let z: Vec<CJet> = (0..n).map(|i| Complex::new(x[i].clone(), x[n + i].clone())).collect();
            let out = inner(&z);
            let (re, im): (Vec<Jet>, Vec<Jet>) = out.into_iter().map(|c| (c.re, c.im)).unzip();
            re.into_iter().chain(im).collect()
        })
        .with_zeros(zeros)
    }
}

/// `[Re z; Im z]`.
pub fn stack(z: &DVector<Complex<f64>>) -> DVector<f64> {
    let n = z.len();
    DVector::from_fn(2 * n, |i, _| if i < n { z[i].re } else { z[i - n].im })
}

pub fn unstack(x: &DVector<f64>) -> DVector<Complex<f64>> {
    let n = x.len() / 2;
    DVector::from_fn(n, |i, _| Complex::new(x[i], x[n + i]))
}

/// `z^2 - 1` on `C` when `seed` is `None`; otherwise
/// `f_i(z) = sum_j b_ij w_j + q_i w_i^2` with `w = z - zeta` for a seeded planted zero.
pub fn complex_quadratic(n: usize, seed: Option<u64>) -> ComplexMapProblem {
    let Some(seed) = seed else {
        let mut p = ComplexMapProblem::new("complex-quad1d", 1, |z: &[CJet]| {
            vec![&z[0] * &z[0] - lift(Complex::new(1.0, 0.0))]
        });
        p.known_zeros = vec![DVector::from_element(1, Complex::new(-1.0, 0.0)), DVector::from_element(1, Complex::new(1.0, 0.0))];
        return p;
    };
    let mut rng = seeded_rng(seed);
    let mut c = || Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let zeta = DVector::from_fn(n, |_, _| c());
    let b = DMatrix::from_fn(n, n, |i, j| if i == j { Complex::new(2.0, 0.0) } else { Complex::new(0.0, 0.0) } + c() * 0.3);
    let q = DVector::from_fn(n, |_, _| c());
    let z0 = zeta.clone();
    let mut p = ComplexMapProblem::new(format!("complex-quad:{n}:{seed}"), n, move |z: &[CJet]| {
        let w: Vec<CJet> = z.iter().zip(z0.iter()).map(|(zi, c)| zi - lift(*c)).collect();
        (0..n)
            .map(|i| {
                let mut out = &w[i] * &w[i] * lift(q[i]);
                for (j, wj) in w.iter().enumerate() {
                    out = out + wj * lift(b[(i, j)]);
                }
                out
            })
            .collect()
    });
    p.known_zeros = vec![zeta];
    p
}

/// Invariants computed with complex arithmetic.
#[derive(Clone, Debug)]
pub struct ComplexInvariants {
    pub beta: f64,
    pub gamma: GammaBracket,
    /// `z - Df(z)^-1 f(z)`.
    pub newton_point: DVector<Complex<f64>>,
}

fn hermitian_norm(v: &DVector<Complex<f64>>) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// `beta`, `gamma` and the Newton step of a complex system, using the same
/// direction seeds as the real pipeline on its realification.
pub fn complex_invariants(
    p: &ComplexMapProblem,
    z: &DVector<Complex<f64>>,
    opts: &GammaOptions,
) -> Result<ComplexInvariants> {
    if z.len() != p.n {
        return Err(Error::DimensionMismatch { expected: p.n, got: z.len() });
    }
    let j = p.jacobian(z);
    let sv = j.clone().singular_values();
    let condition = sv.max() / sv.min();
    if !(condition <= SINGULAR_CONDITION) {
        return Err(Error::SingularDerivative { condition });
    }
    let lu = j.lu();
    let solve = |b: &DVector<Complex<f64>>| lu.solve(b).expect("conditioning was checked");
    let step = solve(&p.evaluate(z));
    let beta = hermitian_norm(&step);

    let k_max = opts.k_max.max(2);
    let newton = stack(&(-&step));
    let seeds = direction_seeds(2 * p.n, Some(&newton), opts);
    let eval = |a: &DVector<f64>| -> Vec<f64> {
        let jets = p.jets_along(z, &unstack(a), k_max);
        (2..=k_max)
            .map(|k| {
                let c = DVector::from_iterator(p.n, jets.iter().map(|c| Complex::new(c.re.coeff(k), c.im.coeff(k))));
                hermitian_norm(&solve(&c)).powf(1.0 / (k as f64 - 1.0))
            })
            .collect()
    };
    let (lower, k_hit) = gamma_search(&seeds, opts, eval);
    Ok(ComplexInvariants {
        beta,
        gamma: GammaBracket {
            lower,
            upper: lower * polarization_factor(k_max),
            k_hit,
            truncation_order: k_max,
            directions_sampled: seeds.len(),
        },
        newton_point: z - step,
    })
}
