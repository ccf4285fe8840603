//! Universal constants, basin radii and the alpha certifier.

mod basin;
mod lemmas;

pub use basin::{basin_sweep, default_shells, BasinOptions, BasinReport, Shell};
pub use lemmas::{
    binomial_series_check, lemma_suite, slack, spreading_contraction_check, spreading_factor_check, LemmaOutcome,
    LemmaReport, ScalarCheck,
};

use std::sync::OnceLock;

use serde::Serialize;

use crate::calculus::{gamma_estimate, newton_direction, GammaBracket, GammaOptions};
use crate::error::{Error, Result};
use crate::manifold::{injectivity_radius, spreading_constant, Point, Spreading};
use crate::problems::Problem;

/// `psi(u) = 1 - 4u + 2u^2`.
pub fn psi(u: f64) -> f64 {
    1.0 - 4.0 * u + 2.0 * u * u
}

/// Right end `1 - sqrt(2)/2` of the interval on which `psi` decreases to zero.
pub fn psi_root() -> f64 {
    1.0 - std::f64::consts::FRAC_1_SQRT_2
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TheoryConstants {
    pub alpha0: f64,
    pub sigma: f64,
    pub s0: f64,
    pub nu0: f64,
    pub t0: f64,
}

/// Residuals of the defining identities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConstantResiduals {
    /// `2 alpha0 - psi(alpha0)^2`.
    pub alpha0: f64,
    /// `sigma - sum (1/2)^(2^k - 1)`, recomputed with the series.
    pub sigma: f64,
    /// `s0` against its closed form.
    pub s0: f64,
    /// `nu0 / psi(nu0)^2 - alpha0`.
    pub nu0: f64,
    /// `t0` against its closed form.
    pub t0: f64,
}

/// Bisection for the root of an increasing function on `[lo, hi]`.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    debug_assert!(f(lo) <= 0.0 && f(hi) >= 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn sigma_series() -> f64 {
    let mut sum = 0.0;
    for k in 0..64 {
        let term = crate::newton::halving_factor(k);
        if term < 1e-18 {
            break;
        }
        sum += term;
    }
    sum
}

fn s0_closed_form(alpha0: f64, sigma: f64) -> f64 {
    let x = sigma * alpha0;
    1.0 / (sigma + (1.0 - x).powi(2) / psi(x) * (1.0 + sigma / (1.0 - x)))
}

fn t0_closed_form(s0: f64, nu0: f64) -> f64 {
    s0 / (s0 + (1.0 - nu0) / psi(nu0))
}

/// Computes the constants from their defining equations.
pub fn compute_constants() -> TheoryConstants {
    let hi = psi_root();
    // 2u - psi(u)^2 increases from -1 to a positive value on [0, hi]
    let alpha0 = bisect(|u| 2.0 * u - psi(u).powi(2), 0.0, hi);
    let sigma = sigma_series();
    let s0 = s0_closed_form(alpha0, sigma);
    // psi^2 decreases on [0, hi], so nu - alpha0 psi(nu)^2 increases: one root
    let nu0 = bisect(|v| v - alpha0 * psi(v).powi(2), 0.0, hi);
    let t0 = t0_closed_form(s0, nu0);
    TheoryConstants {
        alpha0,
        sigma,
        s0,
        nu0,
        t0,
    }
}

/// Memoized [`compute_constants`].
pub fn constants() -> &'static TheoryConstants {
    static CONSTANTS: OnceLock<TheoryConstants> = OnceLock::new();
    CONSTANTS.get_or_init(compute_constants)
}

impl TheoryConstants {
    pub fn residuals(&self) -> ConstantResiduals {
        ConstantResiduals {
            alpha0: 2.0 * self.alpha0 - psi(self.alpha0).powi(2),
            sigma: self.sigma - sigma_series(),
            s0: self.s0 - s0_closed_form(self.alpha0, self.sigma),
            nu0: self.nu0 / psi(self.nu0).powi(2) - self.alpha0,
            t0: self.t0 - t0_closed_form(self.s0, self.nu0),
        }
    }

    /// Spreading constant at which the classic and alternative radii coincide
    /// when the injectivity radius is infinite: `1/(2 nu0) + nu0 - 2`.
    pub fn crossover_spreading(&self) -> f64 {
        0.5 / self.nu0 + self.nu0 - 2.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BindingTerm {
    InjectivityRadius,
    CurvatureGammaTerm,
    AltInjectivityTerm,
    AltGammaTerm,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BasinRadius {
    #[serde(with = "crate::serde_f64")]
    pub value: f64,
    pub binding_term: BindingTerm,
    pub spreading_used: Spreading,
}

/// `(K + 2 - sqrt(K^2 + 4K + 2)) / 2`, evaluated as `1 / (K + 2 + sqrt(...))`
/// to avoid cancellation for large `K`.
pub fn classic_factor(k: f64) -> f64 {
    1.0 / (k + 2.0 + (k * k + 4.0 * k + 2.0).sqrt())
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_nan() || gamma < 0.0 {
        return Err(Error::InvalidArgument(format!("gamma must be nonnegative, got {gamma}")));
    }
    if gamma == f64::INFINITY {
        return Err(Error::DegenerateRadius);
    }
    Ok(())
}

fn check_radius(r: f64) -> Result<()> {
    if r.is_nan() || r <= 0.0 {
        return Err(Error::InvalidArgument(format!("injectivity radius must be positive, got {r}")));
    }
    Ok(())
}

/// `min(r, (K + 2 - sqrt(K^2 + 4K + 2)) / (2 gamma))`; refuses an unbounded `K`.
pub fn gamma_radius(k: Spreading, gamma: f64, r: f64) -> Result<BasinRadius> {
    let kv = k.bounded().ok_or(Error::UnboundedSpreading)?;
    if kv.is_nan() || kv < 1.0 {
        return Err(Error::InvalidArgument(format!("spreading constant must be at least 1, got {kv}")));
    }
    check_gamma(gamma)?;
    check_radius(r)?;
    let term = classic_factor(kv) / gamma;
    let (value, binding_term) = if r <= term {
        (r, BindingTerm::InjectivityRadius)
    } else {
        (term, BindingTerm::CurvatureGammaTerm)
    };
    Ok(BasinRadius {
        value,
        binding_term,
        spreading_used: k,
    })
}

/// `min(t0 r, nu0 / gamma)`; valid whatever the spreading constant.
pub fn gamma_radius_alt(gamma: f64, r: f64) -> Result<BasinRadius> {
    check_gamma(gamma)?;
    check_radius(r)?;
    let c = constants();
    let inj = c.t0 * r;
    let term = c.nu0 / gamma;
    let (value, binding_term) = if inj <= term {
        (inj, BindingTerm::AltInjectivityTerm)
    } else {
        (term, BindingTerm::AltGammaTerm)
    };
    Ok(BasinRadius {
        value,
        binding_term,
        spreading_used: Spreading::DeclaredUnbounded,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RadiusComparison {
    /// The classic radius is larger.
    ClassicSharper,
    AltSharper,
    Equal,
}

/// Relative tolerance under which the two radii are reported equal.
pub const RADIUS_EQUALITY_TOL: f64 = 1e-9;

pub fn radius_comparator(k: f64, gamma: f64, r: f64) -> Result<RadiusComparison> {
    let classic = gamma_radius(Spreading::Bounded(k), gamma, r)?.value;
    let alt = gamma_radius_alt(gamma, r)?.value;
    let scale = classic.abs().max(alt.abs());
    Ok(if (classic - alt).abs() <= RADIUS_EQUALITY_TOL * scale {
        RadiusComparison::Equal
    } else if classic > alt {
        RadiusComparison::ClassicSharper
    } else {
        RadiusComparison::AltSharper
    })
}

/// Bisection for the spreading constant at which the two implemented radius
/// formulas agree with `gamma = 1`, `r = inf`.
pub fn crossover_by_bisection() -> f64 {
    let diff = |k: f64| {
        let classic = gamma_radius(Spreading::Bounded(k), 1.0, f64::INFINITY).expect("valid inputs").value;
        let alt = gamma_radius_alt(1.0, f64::INFINITY).expect("valid inputs").value;
        // positive once the alternative radius wins
        alt - classic
    };
    bisect(diff, 1.0, 100.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Certified,
    NotCertified,
    SingularDerivative,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlphaCertificate {
    pub point: Point,
    #[serde(with = "crate::serde_f64")]
    pub beta: f64,
    pub gamma: GammaBracket,
    #[serde(with = "crate::serde_f64")]
    pub alpha_lower: f64,
    #[serde(with = "crate::serde_f64")]
    pub alpha_upper: f64,
    #[serde(with = "crate::serde_f64")]
    pub r_z: f64,
    pub verdict: Verdict,
    /// `sigma * beta`, present when certified.
    #[serde(with = "crate::serde_f64::option")]
    pub root_distance_bound: Option<f64>,
}

fn product(beta: f64, gamma: f64) -> f64 {
    // a zero with finite gamma has alpha = 0
    if beta == 0.0 && gamma.is_finite() {
        0.0
    } else {
        beta * gamma
    }
}

/// Certifies that Newton from `z` converges quadratically to a zero within
/// `sigma * beta`, using the upper end of the gamma bracket.
pub fn alpha_certify(problem: &Problem, z: &Point, opts: &GammaOptions) -> AlphaCertificate {
    let r_z = injectivity_radius(z);
    let beta = match newton_direction(problem, z) {
        Ok(u) => u.norm(),
        Err(_) => f64::INFINITY,
    };
    if !beta.is_finite() {
        return AlphaCertificate {
            point: z.clone(),
            beta,
            gamma: GammaBracket::singular(opts),
            alpha_lower: f64::INFINITY,
            alpha_upper: f64::INFINITY,
            r_z,
            verdict: Verdict::SingularDerivative,
            root_distance_bound: None,
        };
    }
    let gamma = gamma_estimate(problem, z, opts);
    let alpha_lower = product(beta, gamma.lower);
    let alpha_upper = product(beta, gamma.upper);
    let c = constants();
    let certified = beta <= c.s0 * r_z && alpha_upper < c.alpha0;
    AlphaCertificate {
        point: z.clone(),
        beta,
        gamma,
        alpha_lower,
        alpha_upper,
        r_z,
        verdict: if certified {
            Verdict::Certified
        } else {
            Verdict::NotCertified
        },
        root_distance_bound: certified.then(|| c.sigma * beta),
    }
}

/// Largest `beta` accepted as a zero by [`separation_bound`].
pub const ZERO_BETA_TOL: f64 = 1e-10;

/// Radius around a zero free of other zeros and of singular points: the classic
/// radius with the manifold's spreading constant, or the alternative radius when
/// that constant is unbounded.
pub fn separation_bound(problem: &Problem, zeta: &Point, opts: &GammaOptions) -> Result<BasinRadius> {
    let beta = crate::calculus::beta(problem, zeta);
    if !(beta <= ZERO_BETA_TOL) {
        return Err(Error::NotAZero { beta });
    }
    let gamma = gamma_estimate(problem, zeta, opts);
    let r = injectivity_radius(zeta);
    match spreading_constant(zeta) {
        k @ Spreading::Bounded(_) => gamma_radius(k, gamma.upper, r),
        Spreading::DeclaredUnbounded => gamma_radius_alt(gamma.upper, r),
    }
}

/// Both radii at a zero, computed from the upper end of the gamma bracket.
#[derive(Clone, Debug, Serialize)]
pub struct BasinRadii {
    pub gamma: GammaBracket,
    pub classic: Option<BasinRadius>,
    pub alt: BasinRadius,
}

impl BasinRadii {
    /// The classic radius where it applies, otherwise the alternative one.
    pub fn theoretical(&self) -> f64 {
        self.classic.map_or(self.alt.value, |c| c.value)
    }
}

pub fn basin_radii(problem: &Problem, zeta: &Point, opts: &GammaOptions) -> Result<BasinRadii> {
    let gamma = gamma_estimate(problem, zeta, opts);
    let r = injectivity_radius(zeta);
    let classic = match gamma_radius(spreading_constant(zeta), gamma.upper, r) {
        Ok(c) => Some(c),
        Err(Error::UnboundedSpreading) => None,
        Err(e) => return Err(e),
    };
    let alt = gamma_radius_alt(gamma.upper, r)?;
    Ok(BasinRadii { gamma, classic, alt })
}

#[cfg(test)]
mod tests;
