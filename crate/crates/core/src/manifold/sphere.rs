use std::f64::consts::PI;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::jet::Jet;

pub(super) fn exp(z: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
    let theta = v.norm();
    if theta == 0.0 {
        return z.clone();
    }
    z * theta.cos() + v * (theta.sin() / theta)
}

/// `2 atan2(|x - y|, |x + y|)`: accurate at both ends of `[0, pi]`.
pub(super) fn distance(x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    2.0 * (x - y).norm().atan2((x + y).norm())
}

pub(super) fn log(z: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
    let theta = distance(z, y);
    if theta >= PI {
        return Err(Error::OutOfInjectivityBall {
            distance: theta,
            radius: PI,
        });
    }
    let w = y - z * z.dot(y);
    let s = w.norm();
    if s == 0.0 {
        if theta > 1e-8 {
            // |w| underflowed at the antipode
            return Err(Error::OutOfInjectivityBall {
                distance: theta,
                radius: PI,
            });
        }
        return Ok(DVector::zeros(z.len()));
    }
    Ok(w * (theta / s))
}

/// Rotation in the plane spanned by `z` and the geodesic direction.
pub(super) fn transport(
    z: &DVector<f64>,
    y: &DVector<f64>,
    v: &DVector<f64>,
) -> Result<DVector<f64>> {
    let u = log(z, y)?;
    let theta = u.norm();
    if theta == 0.0 {
        return Ok(v.clone());
    }
    let e = u / theta;
    let a = e.dot(v);
    Ok(v + (&e * (theta.cos() - 1.0) - z * theta.sin()) * a)
}

/// Gram-Schmidt against `z` over the standard basis, skipping near-dependent
/// candidates.
pub(super) fn frame(z: &DVector<f64>) -> Vec<DVector<f64>> {
    let d = z.len();
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(d - 1);
    let mut order: Vec<usize> = (0..d).collect();
    // least-aligned coordinate directions first
    order.sort_by(|a, b| z[*a].abs().total_cmp(&z[*b].abs()));
    for i in order {
        if basis.len() == d - 1 {
            break;
        }
        let mut w = DVector::zeros(d);
        w[i] = 1.0;
        for _ in 0..2 {
            w -= z * z.dot(&w);
            for b in &basis {
                w -= b * b.dot(&w);
            }
        }
        let n = w.norm();
        if n > 1e-6 {
            basis.push(w / n);
        }
    }
    basis
}

pub(super) fn geodesic_jets(z: &DVector<f64>, v: &DVector<f64>, order: usize) -> Vec<Jet> {
    let s = v.norm();
    if s == 0.0 {
        return z.iter().map(|c| Jet::constant(*c).resized(order + 1)).collect();
    }
    let cos = Jet::cos_series(s, order);
    let sin = Jet::sin_series(s, order);
    z.iter()
        .zip(v.iter())
        .map(|(zi, vi)| cos.scale(*zi) + sin.scale(vi / s))
        .collect()
}

fn dot(a: &[Jet], b: &[Jet]) -> Jet {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(super) fn transport_back_jets(z: &DVector<f64>, v: &DVector<f64>, w: &[Jet]) -> Vec<Jet> {
    let s = v.norm();
    if s == 0.0 {
        return w.to_vec();
    }
    let order = w.iter().map(Jet::len).max().unwrap_or(1).saturating_sub(1);
    let e_hat = v / s;
    let cos = Jet::cos_series(s, order);
    let sin = Jet::sin_series(s, order);
    // c(t) = z cos + e sin,  e(t) = -z sin + e cos
    let c: Vec<Jet> = z
        .iter()
        .zip(e_hat.iter())
        .map(|(zi, ei)| cos.scale(*zi) + sin.scale(*ei))
        .collect();
    let e: Vec<Jet> = z
        .iter()
        .zip(e_hat.iter())
        .map(|(zi, ei)| cos.scale(*ei) - sin.scale(*zi))
        .collect();
    let wc = dot(w, &c);
    let we = dot(w, &e);
    (0..z.len())
        .map(|i| {
            let mut out = w[i].clone();
            out -= &wc * &c[i];
            out -= &we * &e[i];
            out += wc.scale(z[i]);
            out += we.scale(e_hat[i]);
            out
        })
        .collect()
}
