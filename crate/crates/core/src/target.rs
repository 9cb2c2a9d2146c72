//! Functions to be approximated.
//!
//! Every pipeline needs two views of its target: pointwise values for
//! measuring sup-errors, and Taylor coefficients at the origin for the
//! coefficient matching. Builtins supply exact coefficients; anything else
//! goes through [`taylor_by_sampling`].

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

pub trait AnalyticFunction: Sync {
    fn eval(&self, z: Complex64) -> Complex64;

    /// Taylor coefficients at 0 through `order`.
    fn taylor(&self, order: usize) -> Result<TruncatedSeries>;
}

impl<T: AnalyticFunction + ?Sized> AnalyticFunction for &T {
    fn eval(&self, z: Complex64) -> Complex64 {
        (**self).eval(z)
    }
    fn taylor(&self, order: usize) -> Result<TruncatedSeries> {
        (**self).taylor(order)
    }
}

impl<T: AnalyticFunction + ?Sized> AnalyticFunction for Box<T> {
    fn eval(&self, z: Complex64) -> Complex64 {
        (**self).eval(z)
    }
    fn taylor(&self, order: usize) -> Result<TruncatedSeries> {
        (**self).taylor(order)
    }
}

/// `exp(c z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exp(pub Complex64);

impl AnalyticFunction for Exp {
    fn eval(&self, z: Complex64) -> Complex64 {
        (self.0 * z).exp()
    }
    fn taylor(&self, order: usize) -> Result<TruncatedSeries> {
        Ok(TruncatedSeries::exp_scaled(self.0, order))
    }
}

/// `1 + c z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine(pub Complex64);

impl AnalyticFunction for Affine {
    fn eval(&self, z: Complex64) -> Complex64 {
        1.0 + self.0 * z
    }
    fn taylor(&self, order: usize) -> Result<TruncatedSeries> {
        let mut s = TruncatedSeries::one(order).into_coeffs();
        if order >= 1 {
            s[1] = self.0;
        }
        TruncatedSeries::new(s)
    }
}

/// `1 / (1 - c z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometric(pub Complex64);

impl AnalyticFunction for Geometric {
    fn eval(&self, z: Complex64) -> Complex64 {
        (1.0 - self.0 * z).inv()
    }
    fn taylor(&self, order: usize) -> Result<TruncatedSeries> {
        Ok(TruncatedSeries::from_fn(order, |n| self.0.powu(n as u32)))
    }
}

/// A polynomial given by ascending coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial(pub Vec<Complex64>);

impl Polynomial {
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }
}

impl AnalyticFunction for Polynomial {
    fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.0, z)
    }
    fn taylor(&self, order: usize) -> Result<TruncatedSeries> {
        Ok(TruncatedSeries::from_fn(order, |n| {
            self.0.get(n).copied().unwrap_or_default()
        }))
    }
}

/// `num(z) / den(z)` with `den(0) != 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rational {
    pub num: Vec<Complex64>,
    pub den: Vec<Complex64>,
}

impl AnalyticFunction for Rational {
    fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.num, z) / horner(&self.den, z)
    }
    fn taylor(&self, order: usize) -> Result<TruncatedSeries> {
        let num = Polynomial(self.num.clone()).taylor(order)?;
        let den = Polynomial(self.den.clone()).taylor(order)?;
        Ok(num.mul(&den.reciprocal()?))
    }
}

/// `inner(s z)` for a real or complex scale `s`.
pub struct Dilated<F> {
    pub inner: F,
    pub scale: Complex64,
}

impl<F: AnalyticFunction> AnalyticFunction for Dilated<F> {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.inner.eval(self.scale * z)
    }
    fn taylor(&self, order: usize) -> Result<TruncatedSeries> {
        Ok(self.inner.taylor(order)?.scale_argument(self.scale))
    }
}

/// A plain closure whose Taylor coefficients are recovered numerically
/// from samples on the circle `|z| = radius`. The closure must be analytic
/// on a neighborhood of that closed disc.
pub struct Sampled<F> {
    pub f: F,
    pub radius: f64,
}

impl<F: Fn(Complex64) -> Complex64 + Sync> AnalyticFunction for Sampled<F> {
    fn eval(&self, z: Complex64) -> Complex64 {
        (self.f)(z)
    }
    fn taylor(&self, order: usize) -> Result<TruncatedSeries> {
        taylor_by_sampling(&self.f, self.radius, order)
    }
}

pub(crate) fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

/// Taylor coefficients from the trapezoidal rule applied to Cauchy's
/// integral on `|z| = radius`.
///
/// Aliasing makes coefficient `n` pick up `a_{n+M} radius^M` from the
/// `M` sample points, so `M` is kept well above `order`.
pub fn taylor_by_sampling(
    f: impl Fn(Complex64) -> Complex64,
    radius: f64,
    order: usize,
) -> Result<TruncatedSeries> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "sampling radius must be positive, got {radius}"
        )));
    }
    let m = (4 * (order + 1)).max(512).next_power_of_two();
    let samples: Vec<Complex64> = (0..m)
        .map(|k| f(Complex64::from_polar(radius, TAU * k as f64 / m as f64)))
        .collect();
    if let Some(bad) = samples
        .iter()
        .find(|v| !(v.re.is_finite() && v.im.is_finite()))
    {
        return Err(Error::InvalidArgument(format!(
            "target is not finite on the sampling circle ({bad})"
        )));
    }
    let mut scale = 1.0 / m as f64;
    let mut coeffs = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let acc: Complex64 = samples
            .iter()
            .enumerate()
            .map(|(k, &v)| {
                // exp(-2 pi i n k / m), with the index reduced first
                let idx = (n * k) % m;
                v * Complex64::from_polar(1.0, -TAU * idx as f64 / m as f64)
            })
            .sum();
        coeffs.push(acc * scale);
        scale /= radius;
    }
    TruncatedSeries::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampled_exp_matches_factorials() {
        let s = Sampled {
            f: |z: Complex64| z.exp(),
            radius: 0.9,
        };
        let t = s.taylor(30).unwrap();
        let exact = Exp(Complex64::new(1.0, 0.0)).taylor(30).unwrap();
        for n in 0..=30 {
            let err = (t.coeffs()[n] - exact.coeffs()[n]).norm();
            assert!(err < 1e-13 / 0.9f64.powi(n as i32), "n = {n}: {err}");
        }
    }

    #[test]
    fn rational_series() {
        let r = Rational {
            num: vec![Complex64::new(1.0, 0.0)],
            den: vec![Complex64::new(1.0, 0.0), Complex64::new(-0.5, 0.0)],
        };
        let g = Geometric(Complex64::new(0.5, 0.0)).taylor(10).unwrap();
        assert!(r.taylor(10).unwrap().max_abs_diff(&g) < 1e-15);
        let z = Complex64::new(0.3, -0.2);
        assert!((r.eval(z) - Geometric(Complex64::new(0.5, 0.0)).eval(z)).norm() < 1e-15);
    }

    #[test]
    fn dilation_scales_coefficients() {
        let d = Dilated {
            inner: Exp(Complex64::new(1.0, 0.0)),
            scale: Complex64::new(0.5, 0.0),
        };
        let t = d.taylor(4).unwrap();
        assert!((t.coeffs()[2] - Complex64::new(0.125, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn sampling_rejects_bad_radius() {
        assert!(taylor_by_sampling(|z| z, 0.0, 3).is_err());
        assert!(taylor_by_sampling(|_| Complex64::new(f64::NAN, 0.0), 0.5, 3).is_err());
    }
}
