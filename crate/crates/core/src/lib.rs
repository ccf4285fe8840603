//! Intrinsic Newton iteration on Riemannian manifolds with alpha-theory certificates.
//!
//! The crate is organised bottom-up:
//!
//! - [`jet`]: truncated Taylor arithmetic used to read off covariant derivatives
//!   along geodesics.
//! - [`manifold`]: Euclidean space, spheres, real projective space, orthogonal
//!   groups and the hyperboloid, all in ambient coordinates.
//! - [`calculus`]: geodesic jets of problems, Newton directions, and the
//!   invariants `beta` and `gamma`.
//! - [`newton`]: the Newton operator, sequences and their quadratic-rate checks.
//! - [`alpha`]: universal constants, basin radii, the alpha certifier and the
//!   numerical lemma suite.
//! - [`problems`]: the problem catalog, including the Hermitian-to-real reduction.

pub mod alpha;
pub mod calculus;
pub mod error;
pub mod jet;
pub mod linalg;
pub mod manifold;
pub mod newton;
mod par;
pub mod problems;
pub mod serde_f64;

pub use error::{Error, Result};
pub use manifold::{Manifold, Point, Spreading, Tangent};
