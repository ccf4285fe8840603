//! Manifolds in ambient coordinates.
//!
//! Every manifold here is embedded in some `R^N`: points and tangent vectors are
//! stored as ambient coordinate vectors (matrices are flattened row-major). The
//! exponential map, its inverse, parallel transport and the geodesic jets used by
//! the calculus layer are all closed forms; nothing integrates an ODE.
//!
//! | id             | model                                  | `r_z`  | `K`         |
//! |----------------|----------------------------------------|--------|-------------|
//! | `euclidean:n`  | `R^n`                                  | `inf`  | 1           |
//! | `sphere:n`     | unit sphere in `R^(n+1)`               | `pi`   | 1           |
//! | `projective:n` | unit vectors modulo sign in `R^(n+1)`  | `pi/2` | 1           |
//! | `o:n`, `so:n`  | orthogonal `n x n` matrices            | 1      | 1           |
//! | `hyperbolic:n` | upper sheet of `<x,x>_M = -1`          | `inf`  | unbounded   |

mod hyperbolic;
mod orthogonal;
mod projective;
mod sphere;

use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::jet::Jet;

/// Tolerance of the point and tangent invariants.
pub const INVARIANT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Manifold {
    Euclidean(usize),
    Sphere(usize),
    Projective(usize),
    Orthogonal { n: usize, special: bool },
    Hyperbolic(usize),
}

/// Geodesic-spreading constant `K_z`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Spreading {
    Bounded(f64),
    DeclaredUnbounded,
}

impl Spreading {
    pub fn bounded(self) -> Option<f64> {
        match self {
            Spreading::Bounded(k) => Some(k),
            Spreading::DeclaredUnbounded => None,
        }
    }
}

/// Summary of the per-point rules a manifold supplies.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ManifoldDescriptor {
    pub id: String,
    pub dimension: usize,
    pub ambient_dim: usize,
    #[serde(with = "crate::serde_f64")]
    pub injectivity_radius: f64,
    pub spreading: Spreading,
    pub metric: &'static str,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    manifold: Manifold,
    coords: DVector<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tangent {
    base: Point,
    coords: DVector<f64>,
}

impl Point {
    pub fn manifold(&self) -> Manifold {
        self.manifold
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.coords.iter().copied().collect()
    }

    /// Builds a point without checking the invariant. Callers must already have
    /// a representative on the manifold.
    pub(crate) fn from_raw(manifold: Manifold, coords: DVector<f64>) -> Self {
        Point { manifold, coords }
    }

    pub fn zero_tangent(&self) -> Tangent {
        Tangent {
            base: self.clone(),
            coords: DVector::zeros(self.coords.len()),
        }
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coords.iter())
    }
}

impl Tangent {
    /// Wraps ambient coordinates as a tangent vector at `base`, checking tangency.
    pub fn new(base: &Point, coords: DVector<f64>) -> Result<Self> {
        let m = base.manifold;
        if coords.len() != m.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: m.ambient_dim(),
                got: coords.len(),
            });
        }
        let residual = m.tangent_residual(&base.coords, &coords);
        let scale = 1.0 + coords.amax();
        if residual > INVARIANT_TOL * scale {
            return Err(Error::InvalidPoint(format!(
                "vector is not tangent at the base point (residual {residual:e})"
            )));
        }
        Ok(Tangent {
            base: base.clone(),
            coords,
        })
    }

    pub(crate) fn from_raw(base: &Point, coords: DVector<f64>) -> Self {
        Tangent {
            base: base.clone(),
            coords,
        }
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        self.base.manifold.norm(&self.base.coords, &self.coords)
    }

    pub fn inner(&self, other: &Tangent) -> f64 {
        self.base
            .manifold
            .inner(&self.base.coords, &self.coords, &other.coords)
    }

    pub fn scaled(&self, s: f64) -> Tangent {
        Tangent {
            base: self.base.clone(),
            coords: &self.coords * s,
        }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.coords.iter().copied().collect()
    }
}

impl Serialize for Tangent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coords.iter())
    }
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Manifold::Euclidean(n) => write!(f, "euclidean:{n}"),
            Manifold::Sphere(n) => write!(f, "sphere:{n}"),
            Manifold::Projective(n) => write!(f, "projective:{n}"),
            Manifold::Orthogonal { n, special: true } => write!(f, "so:{n}"),
            Manifold::Orthogonal { n, special: false } => write!(f, "o:{n}"),
            Manifold::Hyperbolic(n) => write!(f, "hyperbolic:{n}"),
        }
    }
}

impl FromStr for Manifold {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidManifold(s.to_string());
        let (kind, n) = s.trim().split_once(':').ok_or_else(bad)?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        let m = match kind.trim() {
            "euclidean" => Manifold::Euclidean(n),
            "sphere" => Manifold::Sphere(n),
            "projective" => Manifold::Projective(n),
            "so" => Manifold::Orthogonal { n, special: true },
            "o" => Manifold::Orthogonal { n, special: false },
            "hyperbolic" => Manifold::Hyperbolic(n),
            _ => return Err(bad()),
        };
        if m.dimension() == 0 {
            return Err(bad());
        }
        Ok(m)
    }
}

impl Serialize for Manifold {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn minkowski(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    hyperbolic::minkowski(a, b)
}

impl Manifold {
    pub fn dimension(&self) -> usize {
        match *self {
            Manifold::Euclidean(n)
            | Manifold::Sphere(n)
            | Manifold::Projective(n)
            | Manifold::Hyperbolic(n) => n,
            Manifold::Orthogonal { n, .. } => n * n.saturating_sub(1) / 2,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match *self {
            Manifold::Euclidean(n) => n,
            Manifold::Sphere(n) | Manifold::Projective(n) | Manifold::Hyperbolic(n) => n + 1,
            Manifold::Orthogonal { n, .. } => n * n,
        }
    }

    pub fn descriptor(&self) -> ManifoldDescriptor {
        let probe = self.base_point();
        ManifoldDescriptor {
            id: self.to_string(),
            dimension: self.dimension(),
            ambient_dim: self.ambient_dim(),
            injectivity_radius: self.injectivity_radius(&probe),
            spreading: self.spreading_constant(&probe),
            metric: match self {
                Manifold::Hyperbolic(_) => "minkowski",
                Manifold::Orthogonal { .. } => "frobenius",
                _ => "euclidean",
            },
        }
    }

    /// A canonical point: origin, north pole `e_0`, or the identity matrix.
    pub fn base_point(&self) -> Point {
        let mut c = DVector::zeros(self.ambient_dim());
        match *self {
            Manifold::Euclidean(_) => {}
            Manifold::Sphere(_) | Manifold::Projective(_) | Manifold::Hyperbolic(_) => c[0] = 1.0,
            Manifold::Orthogonal { n, .. } => {
                for i in 0..n {
                    c[i * n + i] = 1.0;
                }
            }
        }
        Point::from_raw(*self, c)
    }

    /// Deviation of ambient coordinates from the constraint set.
    pub fn point_residual(&self, x: &DVector<f64>) -> f64 {
        match self {
            Manifold::Euclidean(_) => 0.0,
            Manifold::Sphere(_) | Manifold::Projective(_) => (x.norm() - 1.0).abs(),
            Manifold::Orthogonal { n, special } => orthogonal::residual(*n, *special, x),
            Manifold::Hyperbolic(_) => hyperbolic::residual(x),
        }
    }

    fn tangent_residual(&self, z: &DVector<f64>, v: &DVector<f64>) -> f64 {
        match self {
            Manifold::Euclidean(_) => 0.0,
            Manifold::Sphere(_) | Manifold::Projective(_) => z.dot(v).abs(),
            Manifold::Orthogonal { n, .. } => orthogonal::tangent_residual(*n, z, v),
            Manifold::Hyperbolic(_) => minkowski(z, v).abs(),
        }
    }

    /// Checks the ambient coordinates against the manifold invariant.
    pub fn point(&self, coords: Vec<f64>) -> Result<Point> {
        if coords.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: coords.len(),
            });
        }
        let x = DVector::from_vec(coords);
        if x.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPoint("non-finite coordinate".into()));
        }
        let residual = self.point_residual(&x);
        let scale = match self {
            Manifold::Hyperbolic(_) => x[0] * x[0],
            _ => 1.0,
        };
        if residual > INVARIANT_TOL * scale {
            return Err(Error::InvalidPoint(format!(
                "coordinates violate the {self} invariant (residual {residual:e})"
            )));
        }
        if let Manifold::Hyperbolic(_) = self {
            if x[0] <= 0.0 {
                return Err(Error::InvalidPoint("hyperboloid point on lower sheet".into()));
            }
        }
        Ok(self.finish_point(x))
    }

    /// Projects arbitrary ambient coordinates onto the manifold (normalization,
    /// polar factor, or recomputed time coordinate).
    pub fn project_point(&self, coords: Vec<f64>) -> Result<Point> {
        if coords.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: coords.len(),
            });
        }
        let x = DVector::from_vec(coords);
        let projected = match self {
            Manifold::Euclidean(_) => Some(x),
            Manifold::Sphere(_) | Manifold::Projective(_) => {
                let n = x.norm();
                (n > 0.0 && n.is_finite()).then(|| x / n)
            }
            Manifold::Orthogonal { n, special } => orthogonal::project(*n, *special, &x),
            Manifold::Hyperbolic(_) => Some(hyperbolic::project(&x)),
        };
        let x = projected.ok_or_else(|| {
            Error::InvalidPoint(format!("cannot project coordinates onto {self}"))
        })?;
        Ok(self.finish_point(x))
    }

    fn finish_point(&self, x: DVector<f64>) -> Point {
        let x = match self {
            Manifold::Projective(_) => projective::canonical_sign(x),
            _ => x,
        };
        Point::from_raw(*self, x)
    }

    /// Re-projects after a numerical update if drift exceeds the invariant tolerance.
    fn renormalize(&self, x: DVector<f64>) -> Point {
        if self.point_residual(&x) > INVARIANT_TOL {
            if let Ok(p) = self.project_point(x.iter().copied().collect()) {
                return p;
            }
        }
        self.finish_point(x)
    }

    pub fn inner(&self, _z: &DVector<f64>, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        match self {
            Manifold::Hyperbolic(_) => minkowski(a, b),
            _ => a.dot(b),
        }
    }

    pub fn norm(&self, z: &DVector<f64>, v: &DVector<f64>) -> f64 {
        self.inner(z, v, v).max(0.0).sqrt()
    }

    pub fn project_tangent(&self, z: &DVector<f64>, w: &DVector<f64>) -> DVector<f64> {
        match self {
            Manifold::Euclidean(_) => w.clone(),
            Manifold::Sphere(_) | Manifold::Projective(_) => w - z * z.dot(w),
            Manifold::Orthogonal { n, .. } => orthogonal::project_tangent(*n, z, w),
            Manifold::Hyperbolic(_) => w + z * minkowski(z, w),
        }
    }

    pub fn exp(&self, z: &DVector<f64>, v: &DVector<f64>) -> Point {
        let y = match self {
            Manifold::Euclidean(_) => z + v,
            Manifold::Sphere(_) | Manifold::Projective(_) => sphere::exp(z, v),
            Manifold::Orthogonal { n, .. } => orthogonal::exp(*n, z, v),
            Manifold::Hyperbolic(_) => hyperbolic::exp(z, v),
        };
        self.renormalize(y)
    }

    pub fn log(&self, z: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
        if z == y {
            return Ok(DVector::zeros(z.len()));
        }
        match self {
            Manifold::Euclidean(_) => Ok(y - z),
            Manifold::Sphere(_) => sphere::log(z, y),
            Manifold::Projective(_) => projective::log(z, y),
            Manifold::Orthogonal { n, .. } => orthogonal::log(*n, z, y),
            Manifold::Hyperbolic(_) => Ok(hyperbolic::log(z, y)),
        }
    }

    pub fn distance(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        match self {
            Manifold::Euclidean(_) => (y - x).norm(),
            Manifold::Sphere(_) => sphere::distance(x, y),
            Manifold::Projective(_) => projective::distance(x, y),
            Manifold::Orthogonal { n, .. } => orthogonal::distance(*n, x, y),
            Manifold::Hyperbolic(_) => hyperbolic::distance(x, y),
        }
    }

    pub fn transport(
        &self,
        z: &DVector<f64>,
        y: &DVector<f64>,
        v: &DVector<f64>,
    ) -> Result<DVector<f64>> {
        match self {
            Manifold::Euclidean(_) => Ok(v.clone()),
            Manifold::Sphere(_) => sphere::transport(z, y, v),
            Manifold::Projective(_) => projective::transport(z, y, v),
            Manifold::Orthogonal { n, .. } => orthogonal::transport(*n, z, y, v),
            Manifold::Hyperbolic(_) => Ok(hyperbolic::transport(z, y, v)),
        }
    }

    pub fn injectivity_radius(&self, _z: &Point) -> f64 {
        match self {
            Manifold::Euclidean(_) | Manifold::Hyperbolic(_) => f64::INFINITY,
            Manifold::Sphere(_) => std::f64::consts::PI,
            Manifold::Projective(_) => std::f64::consts::FRAC_PI_2,
            Manifold::Orthogonal { .. } => 1.0,
        }
    }

    pub fn spreading_constant(&self, _z: &Point) -> Spreading {
        match self {
            Manifold::Hyperbolic(_) => Spreading::DeclaredUnbounded,
            _ => Spreading::Bounded(1.0),
        }
    }

    /// Spreading constant restricted to tangent vectors of norm at most `rho`.
    /// On the hyperboloid the Rauch comparison gives `sinh(rho)/rho`.
    pub fn spreading_constant_in_ball(&self, _z: &Point, rho: f64) -> f64 {
        match self {
            Manifold::Hyperbolic(_) if rho > 0.0 => rho.sinh() / rho,
            _ => 1.0,
        }
    }

    /// Orthonormal basis of `T_z` in ambient coordinates.
    pub fn frame(&self, z: &DVector<f64>) -> Vec<DVector<f64>> {
        match self {
            Manifold::Euclidean(n) => (0..*n)
                .map(|i| DVector::from_fn(*n, |j, _| if i == j { 1.0 } else { 0.0 }))
                .collect(),
            Manifold::Sphere(_) | Manifold::Projective(_) => sphere::frame(z),
            Manifold::Orthogonal { n, .. } => orthogonal::frame(*n, z),
            Manifold::Hyperbolic(_) => hyperbolic::frame(z),
        }
    }

    /// Ambient jets of the geodesic `t -> exp_z(t v)`.
    pub fn geodesic_jets(&self, z: &DVector<f64>, v: &DVector<f64>, order: usize) -> Vec<Jet> {
        match self {
            Manifold::Euclidean(_) => crate::jet::affine_curve(z.as_slice(), v.as_slice(), order),
            Manifold::Sphere(_) | Manifold::Projective(_) => sphere::geodesic_jets(z, v, order),
            Manifold::Orthogonal { n, .. } => orthogonal::geodesic_jets(*n, z, v, order),
            Manifold::Hyperbolic(_) => hyperbolic::geodesic_jets(z, v, order),
        }
    }

    /// Given jets of a tangent field `w(t)` along the geodesic `t -> exp_z(t v)`,
    /// returns jets of its parallel transport back to `T_z`.
    pub fn transport_back_jets(&self, z: &DVector<f64>, v: &DVector<f64>, w: &[Jet]) -> Vec<Jet> {
        match self {
            Manifold::Euclidean(_) => w.to_vec(),
            Manifold::Sphere(_) | Manifold::Projective(_) => {
                sphere::transport_back_jets(z, v, w)
            }
            Manifold::Orthogonal { n, .. } => orthogonal::transport_back_jets(*n, z, v, w),
            Manifold::Hyperbolic(_) => hyperbolic::transport_back_jets(z, v, w),
        }
    }

    pub fn random_point_with(&self, rng: &mut ChaCha8Rng) -> Point {
        let d = self.ambient_dim();
        let g = gaussian_vector(rng, d);
        let x = match self {
            Manifold::Euclidean(_) => g,
            Manifold::Sphere(_) | Manifold::Projective(_) => {
                let n = g.norm();
                g / n
            }
            Manifold::Orthogonal { n, special } => orthogonal::random(*n, *special, g),
            Manifold::Hyperbolic(_) => hyperbolic::project(&(g * 0.7)),
        };
        self.finish_point(x)
    }

    pub fn random_tangent_with(&self, z: &Point, rng: &mut ChaCha8Rng) -> Tangent {
        let g = gaussian_vector(rng, self.ambient_dim());
        Tangent::from_raw(z, self.project_tangent(&z.coords, &g))
    }
}

pub(crate) fn gaussian_vector(rng: &mut ChaCha8Rng, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| StandardNormal.sample(rng))
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_same(a: &Point, b: &Point) -> Result<()> {
    if a.manifold != b.manifold {
        return Err(Error::InvalidArgument(format!(
            "points live on different manifolds ({} vs {})",
            a.manifold, b.manifold
        )));
    }
    Ok(())
}

pub fn exp_map(z: &Point, u: &Tangent) -> Point {
    debug_assert_eq!(z.manifold, u.base.manifold);
    z.manifold.exp(&z.coords, &u.coords)
}

pub fn log_map(z: &Point, y: &Point) -> Result<Tangent> {
    check_same(z, y)?;
    let v = z.manifold.log(&z.coords, &y.coords)?;
    Ok(Tangent::from_raw(z, v))
}

pub fn distance(x: &Point, y: &Point) -> f64 {
    debug_assert_eq!(x.manifold, y.manifold);
    x.manifold.distance(&x.coords, &y.coords)
}

pub fn transport(z: &Point, y: &Point, v: &Tangent) -> Result<Tangent> {
    check_same(z, y)?;
    let w = z.manifold.transport(&z.coords, &y.coords, &v.coords)?;
    Ok(Tangent::from_raw(y, w))
}

pub fn injectivity_radius(z: &Point) -> f64 {
    z.manifold.injectivity_radius(z)
}

pub fn spreading_constant(z: &Point) -> Spreading {
    z.manifold.spreading_constant(z)
}

pub fn spreading_constant_in_ball(z: &Point, rho: f64) -> f64 {
    z.manifold.spreading_constant_in_ball(z, rho)
}

pub fn tangent_projection(z: &Point, w: &DVector<f64>) -> Tangent {
    Tangent::from_raw(z, z.manifold.project_tangent(&z.coords, w))
}

pub fn random_point(manifold: Manifold, seed: u64) -> Point {
    manifold.random_point_with(&mut seeded_rng(seed))
}

pub fn random_tangent(z: &Point, seed: u64) -> Tangent {
    z.manifold.random_tangent_with(z, &mut seeded_rng(seed))
}

/// A random tangent vector of exactly the given norm.
pub fn random_tangent_of_norm(z: &Point, norm: f64, rng: &mut ChaCha8Rng) -> Tangent {
    loop {
        let t = z.manifold.random_tangent_with(z, rng);
        let n = t.norm();
        if n > 1e-8 {
            return t.scaled(norm / n);
        }
    }
}

#[cfg(test)]
mod tests;
