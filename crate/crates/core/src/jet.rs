//! Univariate truncated Taylor series ("jets").
//!
//! A [`Jet`] holds the coefficients `c_0, c_1, ..., c_K` of a power series in a
//! single real parameter `t`. Arithmetic is exact up to the truncation order, so
//! pushing the jet of a geodesic `t -> exp_z(t u)` through a problem yields the
//! normalized higher derivatives `D^k f(z) u^k / k!` without any differencing.
//!
//! Jets of different lengths may be mixed: missing coefficients are zero and the
//! result carries the longer length. Constants are therefore length-one jets, and
//! `Jet::zero()` is the empty jet.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Rem, Sub, SubAssign};

use num_traits::{Num, One, Zero};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Jet {
    coeffs: Vec<f64>,
}

impl Jet {
    pub fn constant(value: f64) -> Self {
        Jet { coeffs: vec![value] }
    }

    /// The series `value + slope * t` truncated at `order`.
    pub fn linear(value: f64, slope: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        if order >= 1 {
            coeffs[1] = slope;
        }
        Jet { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        Jet { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// Coefficient of `t^k`; zero past the stored length.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn value(&self) -> f64 {
        self.coeff(0)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Pads with zeros (or truncates) to exactly `len` coefficients.
    pub fn resized(mut self, len: usize) -> Self {
        self.coeffs.resize(len, 0.0);
        self
    }

    pub fn scale(&self, s: f64) -> Self {
        Jet {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Evaluates the truncated polynomial at `t` (Horner).
    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    /// Taylor coefficients of `cos(s t)` up to `order`.
    pub fn cos_series(s: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        let mut term = 1.0;
        for (k, c) in coeffs.iter_mut().enumerate() {
            if k > 0 {
                term *= s / k as f64;
            }
            *c = match k % 4 {
                0 => term,
                2 => -term,
                _ => 0.0,
            };
        }
        Jet { coeffs }
    }

    /// Taylor coefficients of `sin(s t)` up to `order`.
    pub fn sin_series(s: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        let mut term = 1.0;
        for (k, c) in coeffs.iter_mut().enumerate() {
            if k > 0 {
                term *= s / k as f64;
            }
            *c = match k % 4 {
                1 => term,
                3 => -term,
                _ => 0.0,
            };
        }
        Jet { coeffs }
    }

    /// Taylor coefficients of `cosh(s t)` up to `order`.
    pub fn cosh_series(s: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        let mut term = 1.0;
        for (k, c) in coeffs.iter_mut().enumerate() {
            if k > 0 {
                term *= s / k as f64;
            }
            if k % 2 == 0 {
                *c = term;
            }
        }
        Jet { coeffs }
    }

    /// Taylor coefficients of `sinh(s t)` up to `order`.
    pub fn sinh_series(s: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        let mut term = 1.0;
        for (k, c) in coeffs.iter_mut().enumerate() {
            if k > 0 {
                term *= s / k as f64;
            }
            if k % 2 == 1 {
                *c = term;
            }
        }
        Jet { coeffs }
    }

    pub fn recip(&self) -> Self {
        Jet::constant(1.0) / self
    }

    pub fn exp(&self) -> Self {
        let n = self.len();
        let mut out = vec![0.0; n];
        if n == 0 {
            return Jet::constant(1.0);
        }
        out[0] = self.coeffs[0].exp();
        // e' = a' e  =>  k e_k = sum_{j=1..k} j a_j e_{k-j}
        for k in 1..n {
            let s: f64 = (1..=k)
                .map(|j| j as f64 * self.coeffs[j] * out[k - j])
                .sum();
            out[k] = s / k as f64;
        }
        Jet { coeffs: out }
    }

    /// Returns `(sin a, cos a)`.
    pub fn sin_cos(&self) -> (Self, Self) {
        let n = self.len();
        if n == 0 {
            return (Jet::zero(), Jet::constant(1.0));
        }
        let mut s = vec![0.0; n];
        let mut c = vec![0.0; n];
        s[0] = self.coeffs[0].sin();
        c[0] = self.coeffs[0].cos();
        for k in 1..n {
            let mut ds = 0.0;
            let mut dc = 0.0;
            for j in 1..=k {
                let w = j as f64 * self.coeffs[j];
                ds += w * c[k - j];
                dc -= w * s[k - j];
            }
            s[k] = ds / k as f64;
            c[k] = dc / k as f64;
        }
        (Jet { coeffs: s }, Jet { coeffs: c })
    }

    pub fn sqrt(&self) -> Self {
        let n = self.len();
        if n == 0 {
            return Jet::zero();
        }
        let mut out = vec![0.0; n];
        out[0] = self.coeffs[0].sqrt();
        // r^2 = a  =>  2 r_0 r_k = a_k - sum_{j=1..k-1} r_j r_{k-j}
        for k in 1..n {
            let s: f64 = (1..k).map(|j| out[j] * out[k - j]).sum();
            out[k] = (self.coeffs[k] - s) / (2.0 * out[0]);
        }
        Jet { coeffs: out }
    }

    pub fn powi(&self, p: u32) -> Self {
        let mut acc = Jet::constant(1.0);
        for _ in 0..p {
            acc = &acc * self;
        }
        acc
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet{:?}", self.coeffs)
    }
}

impl From<f64> for Jet {
    fn from(v: f64) -> Self {
        Jet::constant(v)
    }
}

fn add_coeffs(a: &[f64], b: &[f64], sign: f64) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| a.get(k).copied().unwrap_or(0.0) + sign * b.get(k).copied().unwrap_or(0.0))
        .collect()
}

fn mul_coeffs(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    let mut out = vec![0.0; n];
    for (i, ai) in a.iter().enumerate() {
        if *ai == 0.0 {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(n - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn div_coeffs(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    let b0 = b.first().copied().unwrap_or(0.0);
    let mut out = vec![0.0; n];
    for k in 0..n {
        let mut s = a.get(k).copied().unwrap_or(0.0);
        for j in 1..=k.min(b.len().saturating_sub(1)) {
            s -= b[j] * out[k - j];
        }
        out[k] = s / b0;
    }
    out
}

macro_rules! jet_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Jet> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                Jet {
                    coeffs: $body(&self.coeffs, &rhs.coeffs),
                }
            }
        }
        impl $trait<Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                (&self).$method(rhs)
            }
        }
        impl $trait<Jet> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                self.$method(&rhs)
            }
        }
        impl $trait<f64> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: f64) -> Jet {
                self.$method(&Jet::constant(rhs))
            }
        }
        impl $trait<f64> for Jet {
            type Output = Jet;
            fn $method(self, rhs: f64) -> Jet {
                (&self).$method(&Jet::constant(rhs))
            }
        }
        impl $trait<&Jet> for f64 {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                Jet::constant(self).$method(rhs)
            }
        }
        impl $trait<Jet> for f64 {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                Jet::constant(self).$method(&rhs)
            }
        }
    };
}

jet_binop!(Add, add, |a: &[f64], b: &[f64]| add_coeffs(a, b, 1.0));
jet_binop!(Sub, sub, |a: &[f64], b: &[f64]| add_coeffs(a, b, -1.0));
jet_binop!(Mul, mul, mul_coeffs);
jet_binop!(Div, div, div_coeffs);

// `a % b = a - n b` with the integer `n = trunc(a_0 / b_0)` locally constant,
// which is what the derivative of a floating-point remainder is.
impl Rem<Jet> for Jet {
    type Output = Jet;
    fn rem(self, rhs: Jet) -> Jet {
        let n = (self.value() / rhs.value()).trunc();
        &self - &rhs.scale(n)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl AddAssign<&Jet> for Jet {
    fn add_assign(&mut self, rhs: &Jet) {
        if rhs.coeffs.len() > self.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), 0.0);
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl AddAssign<Jet> for Jet {
    fn add_assign(&mut self, rhs: Jet) {
        *self += &rhs;
    }
}

impl SubAssign<&Jet> for Jet {
    fn sub_assign(&mut self, rhs: &Jet) {
        if rhs.coeffs.len() > self.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), 0.0);
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl SubAssign<Jet> for Jet {
    fn sub_assign(&mut self, rhs: Jet) {
        *self -= &rhs;
    }
}

impl MulAssign<f64> for Jet {
    fn mul_assign(&mut self, rhs: f64) {
        for c in &mut self.coeffs {
            *c *= rhs;
        }
    }
}

impl Sum for Jet {
    fn sum<I: Iterator<Item = Jet>>(iter: I) -> Jet {
        iter.fold(Jet::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

impl<'a> Sum<&'a Jet> for Jet {
    fn sum<I: Iterator<Item = &'a Jet>>(iter: I) -> Jet {
        iter.fold(Jet::zero(), |mut acc, x| {
            acc += x;
            acc
        })
    }
}

impl Zero for Jet {
    fn zero() -> Self {
        Jet { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0.0)
    }
}

impl One for Jet {
    fn one() -> Self {
        Jet::constant(1.0)
    }
}

impl Num for Jet {
    type FromStrRadixErr = <f64 as Num>::FromStrRadixErr;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        f64::from_str_radix(s, radix).map(Jet::constant)
    }
}

/// Builds the ambient-coordinate jets of the affine curve `x + t v`.
pub fn affine_curve(x: &[f64], v: &[f64], order: usize) -> Vec<Jet> {
    x.iter()
        .zip(v)
        .map(|(xi, vi)| Jet::linear(*xi, *vi, order))
        .collect()
}

/// Coefficient `k` of every component, as a plain vector.
pub fn coefficient(jets: &[Jet], k: usize) -> Vec<f64> {
    jets.iter().map(|j| j.coeff(k)).collect()
}

/// Order-zero jets wrapping plain values; used to evaluate jet-generic code at a point.
pub fn constants(x: &[f64]) -> Vec<Jet> {
    x.iter().map(|v| Jet::constant(*v)).collect()
}
