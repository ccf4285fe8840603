use std::f64::consts::FRAC_PI_2;

use nalgebra::DVector;

use super::sphere;
use crate::error::{Error, Result};

/// Flips the representative so its first non-negligible coordinate is positive.
pub(super) fn canonical_sign(x: DVector<f64>) -> DVector<f64> {
    match x.iter().find(|c| c.abs() > 1e-12) {
        Some(c) if *c < 0.0 => -x,
        _ => x,
    }
}

/// Representative of `[y]` on the same side as `z`, and whether it was flipped.
fn aligned(z: &DVector<f64>, y: &DVector<f64>) -> (DVector<f64>, bool) {
    if z.dot(y) < 0.0 {
        (-y, true)
    } else {
        (y.clone(), false)
    }
}

pub(super) fn distance(x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    let (y, _) = aligned(x, y);
    sphere::distance(x, &y)
}

pub(super) fn log(z: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
    let (y, _) = aligned(z, y);
    let d = sphere::distance(z, &y);
    if d >= FRAC_PI_2 {
        return Err(Error::OutOfInjectivityBall {
            distance: d,
            radius: FRAC_PI_2,
        });
    }
    sphere::log(z, &y)
}

pub(super) fn transport(
    z: &DVector<f64>,
    y: &DVector<f64>,
    v: &DVector<f64>,
) -> Result<DVector<f64>> {
    let (y_rep, flipped) = aligned(z, y);
    let d = sphere::distance(z, &y_rep);
    if d >= FRAC_PI_2 {
        return Err(Error::OutOfInjectivityBall {
            distance: d,
            radius: FRAC_PI_2,
        });
    }
    let w = sphere::transport(z, &y_rep, v)?;
    // the antipodal map carries T_{-y} to T_y by negation
    Ok(if flipped { -w } else { w })
}
