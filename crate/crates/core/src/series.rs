//! Truncated power series over `Complex64`.
//!
//! A [`TruncatedSeries`] of order `n` stores the coefficients of
//! `z^0 ..= z^n`. Everything above `n` is unknown, so binary operations
//! always produce a result whose order is the minimum of the operands'.

use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default comparison tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// For identities that hold exactly in exact arithmetic.
    pub exact: f64,
    /// For quantities that went through a chain of computations.
    pub chained: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            exact: 1e-12,
            chained: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptySeries);
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Complex64::new(1.0, 0.0), order)
    }

    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// Builds a series from a closure giving the `n`-th coefficient.
    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Complex64) -> Self {
        Self {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    /// Taylor coefficients of `exp(c z)` through `order`.
    pub fn exp_scaled(c: Complex64, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut term = Complex64::new(1.0, 0.0);
        coeffs.push(term);
        for n in 1..=order {
            term = term * c / n as f64;
            coeffs.push(term);
        }
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of `z^n`, or `None` past the truncation order.
    pub fn coeff(&self, n: usize) -> Option<Complex64> {
        self.coeffs.get(n).copied()
    }

    /// Drops every term above `order`. Asking for a higher order than stored
    /// is a no-op; the series never pads.
    pub fn truncate(&self, order: usize) -> Self {
        let keep = (order + 1).min(self.coeffs.len());
        Self {
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    /// Cauchy product through `min(self.order, other.order)`.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|n| {
                (0..=n)
                    .map(|k| self.coeffs[k] * other.coeffs[n - k])
                    .sum::<Complex64>()
            })
            .collect();
        Self { coeffs }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
        }
    }

    /// The series of `f(R z)`: coefficient `n` is multiplied by `R^n`.
    pub fn scale_argument(&self, r: Complex64) -> Self {
        let mut pow = Complex64::new(1.0, 0.0);
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| {
                let out = a * pow;
                pow *= r;
                out
            })
            .collect();
        Self { coeffs }
    }

    /// Multiplicative inverse through the same order.
    pub fn reciprocal(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0 == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroConstantTerm);
        }
        let inv0 = a0.inv();
        let mut out = Vec::with_capacity(self.coeffs.len());
        out.push(inv0);
        for n in 1..self.coeffs.len() {
            let acc: Complex64 = (1..=n).map(|k| self.coeffs[k] * out[n - k]).sum();
            out.push(-acc * inv0);
        }
        Ok(Self { coeffs: out })
    }

    /// Term-by-term derivative. The result has order `self.order() - 1`;
    /// an order-0 series has no known derivative coefficients.
    pub fn derivative(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::InsufficientOrder { need: 1, have: 0 });
        }
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, &a)| a * n as f64)
                .collect(),
        })
    }

    /// `f'/f` through order `self.order() - 1`.
    pub fn log_derivative(&self) -> Result<Self> {
        if self.coeffs[0] == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroConstantTerm);
        }
        let d = self.derivative()?;
        Ok(d.mul(&self.reciprocal()?))
    }

    /// Horner evaluation of the stored polynomial part.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    /// Largest per-coefficient distance on the common order.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// Geometric coefficient envelope `|a_n| <= c * kappa^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthBound {
    pub c: f64,
    pub kappa: f64,
}

impl GrowthBound {
    pub const DEFAULT_DELTA: f64 = 0.05;

    /// Fits an envelope to the stored coefficients of `a`.
    ///
    /// `r` is the radius of the disc on which `a` is the Taylor series of an
    /// analytic function. The rate is `max(1 + delta, 1/r + delta)`, which
    /// collapses to `1 + delta` once `r >= 1`. The constant is the smallest
    /// one that covers every stored coefficient, floored at 1.
    pub fn fit(a: &TruncatedSeries, r: f64, delta: f64) -> Self {
        let kappa = if r >= 1.0 {
            1.0 + delta
        } else {
            (1.0 + delta).max(1.0 / r + delta)
        };
        let c = a
            .coeffs()
            .iter()
            .enumerate()
            .map(|(n, x)| x.norm() / kappa.powi(n as i32))
            .fold(1.0, f64::max);
        Self { c, kappa }
    }

    pub fn holds_for(&self, a: &TruncatedSeries) -> bool {
        a.coeffs()
            .iter()
            .enumerate()
            .all(|(n, x)| x.norm() <= self.c * self.kappa.powi(n as i32))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn factorials(order: usize, sign: f64) -> TruncatedSeries {
        let mut fact = 1.0;
        TruncatedSeries::from_fn(order, |n| {
            if n > 0 {
                fact *= n as f64;
            }
            c(sign.powi(n as i32) / fact, 0.0)
        })
    }

    #[test]
    fn telescoping_product() {
        let a = TruncatedSeries::from_real(&[1.0, 1.0, 0.0]).unwrap();
        let b = TruncatedSeries::from_real(&[1.0, -1.0, 0.0]).unwrap();
        let p = a.mul(&b);
        assert_eq!(p.order(), 2);
        assert_eq!(p.coeffs(), &[c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
    }

    #[test]
    fn multiplying_by_one_is_identity() {
        let f = TruncatedSeries::new(vec![c(2.0, 1.0), c(-1.0, 0.5), c(0.0, 3.0)]).unwrap();
        assert_eq!(f.mul(&TruncatedSeries::one(2)), f);
    }

    #[test]
    fn order_is_minimum_of_operands() {
        let a = TruncatedSeries::one(5);
        let b = TruncatedSeries::one(2);
        assert_eq!(a.mul(&b).order(), 2);
        assert_eq!((&a + &b).order(), 2);
    }

    #[test]
    fn exp_times_exp_minus_is_one() {
        let j = 20;
        let p = factorials(j, 1.0).mul(&factorials(j, -1.0));
        assert!((p.coeffs()[0] - c(1.0, 0.0)).norm() < 1e-15);
        for n in 1..=j {
            assert!(p.coeffs()[n].norm() < 1e-15, "n = {n}");
        }
    }

    #[test]
    fn geometric_reciprocal() {
        let f = TruncatedSeries::from_real(&[1.0, -1.0, 0.0, 0.0, 0.0]).unwrap();
        let g = f.reciprocal().unwrap();
        for x in g.coeffs() {
            assert!((x - c(1.0, 0.0)).norm() < 1e-15);
        }
        let one = TruncatedSeries::one(0).reciprocal().unwrap();
        assert_eq!(one.coeffs(), &[c(1.0, 0.0)]);
    }

    #[test]
    fn reciprocal_of_two_plus_z() {
        let f = TruncatedSeries::from_real(&[2.0, 1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let g = f.reciprocal().unwrap();
        for (n, x) in g.coeffs().iter().enumerate() {
            let expected = 0.5 * (-0.5f64).powi(n as i32);
            assert!((x - c(expected, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn reciprocal_rejects_zero_constant() {
        let f = TruncatedSeries::from_real(&[0.0, 1.0]).unwrap();
        assert_eq!(f.reciprocal(), Err(Error::ZeroConstantTerm));
        assert_eq!(f.log_derivative(), Err(Error::ZeroConstantTerm));
    }

    #[test]
    fn log_derivative_examples() {
        let one = TruncatedSeries::one(6).log_derivative().unwrap();
        assert_eq!(one.order(), 5);
        assert!(one.coeffs().iter().all(|x| x.norm() == 0.0));

        let e = factorials(15, 1.0).log_derivative().unwrap();
        assert!((e.coeffs()[0] - c(1.0, 0.0)).norm() < 1e-14);
        for x in &e.coeffs()[1..] {
            assert!(x.norm() < 1e-13);
        }

        let mut coeffs = vec![c(0.0, 0.0); 8];
        coeffs[0] = c(1.0, 0.0);
        coeffs[1] = c(-1.0, 0.0);
        let l = TruncatedSeries::new(coeffs)
            .unwrap()
            .log_derivative()
            .unwrap();
        for x in l.coeffs() {
            assert!((x - c(-1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn growth_bound_examples() {
        let a = TruncatedSeries::from_fn(12, |n| c(2f64.powi(n as i32), 0.0));
        let b = GrowthBound::fit(&a, 0.5, 0.01);
        assert!((b.kappa - 2.01).abs() < 1e-15);
        assert!((b.c - 1.0).abs() < 1e-15);
        assert!(b.holds_for(&a));

        let z = TruncatedSeries::zero(4);
        let b = GrowthBound::fit(&z, 0.25, 0.05);
        assert_eq!(b.c, 1.0);
        assert!((b.kappa - 4.05).abs() < 1e-15);

        let b = GrowthBound::fit(&a, 1.5, 0.1);
        assert!((b.kappa - 1.1).abs() < 1e-15);
        assert!(b.holds_for(&a));
    }

    #[test]
    fn scale_argument_cases() {
        let f = TruncatedSeries::from_real(&[1.0, 1.0]).unwrap();
        assert_eq!(
            f.scale_argument(c(0.5, 0.0)).coeffs(),
            &[c(1.0, 0.0), c(0.5, 0.0)]
        );
        assert_eq!(f.scale_argument(c(1.0, 0.0)), f);
        assert_eq!(
            f.scale_argument(c(0.0, 0.0)).coeffs(),
            &[c(1.0, 0.0), c(0.0, 0.0)]
        );
    }

    #[test]
    fn derivative_of_constant_has_no_coefficients() {
        assert!(TruncatedSeries::one(0).derivative().is_err());
        assert!(TruncatedSeries::new(vec![]).is_err());
    }
}
