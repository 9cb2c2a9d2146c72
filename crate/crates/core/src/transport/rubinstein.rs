//! `p(z) + z^k p*(z)`: a polynomial with every root on the unit circle
//! that tends to `p` on compact subsets of the disc as `k` grows.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::roots::polynomial_roots;
use crate::target::horner;

/// `p*(z) = z^m conj(p(1 / conj(z)))`: conjugated coefficients in reverse.
pub fn reversed_conjugate(p: &[Complex64]) -> Vec<Complex64> {
    p.iter().rev().map(|c| c.conj()).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RubinsteinApprox {
    /// Ascending coefficients of `p + z^k p*`.
    pub coeffs: Vec<Complex64>,
    /// Roots recovered numerically from `coeffs`.
    pub roots: Vec<Complex64>,
}

impl RubinsteinApprox {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.coeffs, z)
    }
}

/// Requires `p` to have no roots in the closed unit disc.
pub fn rubinstein_approx(p: &[Complex64], k: usize) -> Result<RubinsteinApprox> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let end = p.iter().rposition(|c| c.norm() != 0.0).map_or(0, |i| i + 1);
    let p = &p[..end];
    if p.is_empty() || p[0].norm() == 0.0 {
        return Err(Error::RootInsideDisc(0.0));
    }
    if let Some(min) = polynomial_roots(p)
        .iter()
        .map(|z| z.norm())
        .min_by(f64::total_cmp)
    {
        if min <= 1.0 {
            return Err(Error::RootInsideDisc(min));
        }
    }
    let star = reversed_conjugate(p);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); k + star.len()];
    for (n, &c) in p.iter().enumerate() {
        coeffs[n] += c;
    }
    for (n, &c) in star.iter().enumerate() {
        coeffs[n + k] += c;
    }
    let roots = polynomial_roots(&coeffs);
    Ok(RubinsteinApprox { coeffs, roots })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn linear_example() {
        let r = rubinstein_approx(&[c(-2.0, 0.0), c(1.0, 0.0)], 1).unwrap();
        assert_eq!(r.coeffs, vec![c(-2.0, 0.0), c(2.0, 0.0), c(-2.0, 0.0)]);
        for z in &r.roots {
            assert!((z.norm() - 1.0).abs() < 1e-12);
            assert!((z.re - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_polynomial() {
        let p = [c(1.0, 2.0)];
        let r = rubinstein_approx(&p, 5).unwrap();
        assert_eq!(r.roots.len(), 5);
        for z in &r.roots {
            assert!((z.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_roots_in_disc() {
        assert!(matches!(
            rubinstein_approx(&[c(-0.5, 0.0), c(1.0, 0.0)], 3),
            Err(Error::RootInsideDisc(_))
        ));
        assert!(matches!(
            rubinstein_approx(&[c(0.0, 0.0), c(1.0, 0.0)], 3),
            Err(Error::RootInsideDisc(_))
        ));
    }
}
