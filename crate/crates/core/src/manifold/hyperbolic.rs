//! Hyperboloid model: `x_0 > 0`, `<x, x>_M = -x_0^2 + sum x_i^2 = -1`.

use nalgebra::DVector;

use crate::jet::Jet;

pub(crate) fn minkowski(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    -a[0] * b[0] + a.rows(1, a.len() - 1).dot(&b.rows(1, b.len() - 1))
}

pub(super) fn residual(x: &DVector<f64>) -> f64 {
    (minkowski(x, x) + 1.0).abs()
}

/// Keeps the spatial part and recomputes the time coordinate.
pub(super) fn project(x: &DVector<f64>) -> DVector<f64> {
    let mut y = x.clone();
    let spatial = x.rows(1, x.len() - 1).norm_squared();
    y[0] = (1.0 + spatial).sqrt();
    y
}

pub(super) fn exp(z: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
    let theta = minkowski(v, v).max(0.0).sqrt();
    if theta == 0.0 {
        return z.clone();
    }
    z * theta.cosh() + v * (theta.sinh() / theta)
}

/// `2 asinh(|x - y|_M / 2)`; the Minkowski chord of two hyperboloid points is spacelike.
pub(super) fn distance(x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    let d = x - y;
    let chord = minkowski(&d, &d).max(0.0).sqrt();
    2.0 * (chord / 2.0).asinh()
}

pub(super) fn log(z: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
    let d = distance(z, y);
    let w = y + z * minkowski(z, y);
    let s = minkowski(&w, &w).max(0.0).sqrt();
    if s == 0.0 || d == 0.0 {
        return DVector::zeros(z.len());
    }
    w * (d / s)
}

pub(super) fn transport(z: &DVector<f64>, y: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
    let denom = 1.0 - minkowski(z, y);
    v + (z + y) * (minkowski(y, v) / denom)
}

/// Minkowski Gram-Schmidt on the projected spatial coordinate directions.
pub(super) fn frame(z: &DVector<f64>) -> Vec<DVector<f64>> {
    let d = z.len();
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(d - 1);
    for i in 1..d {
        let mut w = DVector::zeros(d);
        w[i] = 1.0;
        for _ in 0..2 {
            w += z * minkowski(z, &w);
            for b in &basis {
                w -= b * minkowski(b, &w);
            }
        }
        let n = minkowski(&w, &w).max(0.0).sqrt();
        basis.push(w / n);
    }
    basis
}

pub(super) fn geodesic_jets(z: &DVector<f64>, v: &DVector<f64>, order: usize) -> Vec<Jet> {
    let s = minkowski(v, v).max(0.0).sqrt();
    if s == 0.0 {
        return z.iter().map(|c| Jet::constant(*c).resized(order + 1)).collect();
    }
    let cosh = Jet::cosh_series(s, order);
    let sinh = Jet::sinh_series(s, order);
    z.iter()
        .zip(v.iter())
        .map(|(zi, vi)| cosh.scale(*zi) + sinh.scale(vi / s))
        .collect()
}

fn minkowski_jets(a: &[Jet], b: &[Jet]) -> Jet {
    let spatial: Jet = a[1..].iter().zip(&b[1..]).map(|(x, y)| x * y).sum();
    spatial - &a[0] * &b[0]
}

pub(super) fn transport_back_jets(z: &DVector<f64>, v: &DVector<f64>, w: &[Jet]) -> Vec<Jet> {
    let s = minkowski(v, v).max(0.0).sqrt();
    if s == 0.0 {
        return w.to_vec();
    }
    let order = w.iter().map(Jet::len).max().unwrap_or(1).saturating_sub(1);
    let e_hat = v / s;
    let cosh = Jet::cosh_series(s, order);
    let sinh = Jet::sinh_series(s, order);
    // c(t) = z cosh + e sinh,  e(t) = z sinh + e cosh
    let c: Vec<Jet> = z
        .iter()
        .zip(e_hat.iter())
        .map(|(zi, ei)| cosh.scale(*zi) + sinh.scale(*ei))
        .collect();
    let e: Vec<Jet> = z
        .iter()
        .zip(e_hat.iter())
        .map(|(zi, ei)| sinh.scale(*zi) + cosh.scale(*ei))
        .collect();
    let wc = minkowski_jets(w, &c);
    let we = minkowski_jets(w, &e);
    // the boost sending c(t) -> z and e(t) -> e_hat, identity on the complement
    (0..z.len())
        .map(|i| {
            let mut out = w[i].clone();
            out += &wc * &c[i];
            out -= &we * &e[i];
            out -= wc.scale(z[i]);
            out += we.scale(e_hat[i]);
            out
        })
        .collect()
}
