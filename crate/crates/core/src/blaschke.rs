//! Finite Blaschke products with every zero on `|w| = r`.
//!
//! A rational factor product built with denominator ratio `R = r^2`
//! against `z -> g(r z)` is rewritten in the variable `w = r z`. Each factor
//! becomes a unimodular constant times
//!
//! ```text
//! (alpha + w^j) / (1 + conj(alpha) w^j),   alpha = r^j conj(xi),
//! ```
//!
//! which is a disc automorphism composed with `w^j`, hence a Blaschke
//! product whose zeros are the `j`-th roots of `-alpha`, all of modulus `r`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{disc_grid, sup_distance};
use crate::matcher::{fit_centered, CenteredFit, FactorProduct, FitConfig};
use crate::target::{AnalyticFunction, Dilated};

const POLE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlaschkeTerm {
    pub j: usize,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub nu: u32,
}

impl BlaschkeTerm {
    /// `(log |value|, arg value)` at `wj = w^j`.
    fn log_eval(&self, wj: Complex64) -> Result<(f64, f64)> {
        let da = 1.0 + self.alpha.conj() * wj;
        let db = 1.0 + self.beta.conj() * wj;
        if da.norm() < POLE_TOL || db.norm() < POLE_TOL {
            return Err(Error::PoleHit {
                re: wj.re,
                im: wj.im,
            });
        }
        let a = (self.alpha + wj) / da;
        let b = (self.beta + wj) / db;
        let nu = self.nu as f64;
        let log_a = if self.nu == 0 {
            0.0
        } else {
            nu * a.norm().ln()
        };
        Ok((log_a + b.norm().ln(), nu * a.arg() + b.arg()))
    }
}

/// `c_B * C(w)` with `C` a finite Blaschke product.
///
/// `c_B` grows like `r^(-sum_j j (nu(j) + 1))` and leaves the `f64` range
/// well before `J = 60` at `r = 1/2`, so it is held as a logarithm.
#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeApproximant {
    log_c_b: f64,
    arg_c_b: f64,
    terms: Vec<BlaschkeTerm>,
    r: f64,
}

fn from_log(log_mod: f64, arg: f64) -> Complex64 {
    Complex64::from_polar(log_mod.exp(), arg.rem_euclid(TAU))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlaschkeZero {
    pub z: Complex64,
    pub multiplicity: u32,
}

impl BlaschkeApproximant {
    /// May be infinite; see [`Self::log_c_b`].
    pub fn c_b(&self) -> Complex64 {
        from_log(self.log_c_b, self.arg_c_b)
    }

    /// `(log |c_B|, arg c_B)`.
    pub fn log_c_b(&self) -> (f64, f64) {
        (self.log_c_b, self.arg_c_b)
    }

    pub fn terms(&self) -> &[BlaschkeTerm] {
        &self.terms
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// The Blaschke factor `C(w)` alone.
    pub fn inner(&self, w: Complex64) -> Result<Complex64> {
        let (m, a) = self.log_inner(w)?;
        Ok(from_log(m, a))
    }

    fn log_inner(&self, w: Complex64) -> Result<(f64, f64)> {
        self.terms.iter().try_fold((0.0, 0.0), |(m, a), t| {
            let (dm, da) = t.log_eval(w.powu(t.j as u32))?;
            Ok((m + dm, a + da))
        })
    }

    pub fn eval(&self, w: Complex64) -> Result<Complex64> {
        eval_blaschke(self, w)
    }

    pub fn zeros(&self) -> Vec<BlaschkeZero> {
        blaschke_zeros(self)
    }

    /// Zeros counted with multiplicity, `sum_j j (nu(j) + 1)`.
    pub fn zero_count(&self) -> usize {
        self.terms.iter().map(|t| t.j * (t.nu as usize + 1)).sum()
    }
}

/// Rewrites `product(w / r)` as `c_B * C(w)`.
///
/// The constant is the product of the pulled-out prefactors
/// `(xi_j r^-j)^nu(j) (eta_j r^-j)` and the leading constant; it is summed
/// in log-modulus and argument first so that `r^-j` powers cannot overflow
/// halfway.
pub fn to_blaschke(product: &FactorProduct, r: f64) -> Result<BlaschkeApproximant> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "r must lie in (0, 1), got {r}"
        )));
    }
    let expected = r * r;
    let lead = product.leading_constant();
    let mut log_mod = lead.norm().ln();
    let mut arg = lead.arg();
    let mut terms = Vec::with_capacity(product.len());
    let ln_r = r.ln();
    for f in product.factors() {
        match f.denom_r {
            Some(d) if (d - expected).abs() <= 1e-15 * expected.max(1e-300) => {}
            _ => return Err(Error::MissingDenominator { expected }),
        }
        let rj = r.powi(f.j as i32);
        let jf = f.j as f64;
        let nu = f.nu as f64;
        log_mod += nu * (f.xi.norm().ln() - jf * ln_r) + (f.eta.norm().ln() - jf * ln_r);
        arg += nu * f.xi.arg() + f.eta.arg();
        terms.push(BlaschkeTerm {
            j: f.j,
            alpha: f.xi.conj() * rj,
            beta: f.eta.conj() * rj,
            nu: f.nu,
        });
    }
    Ok(BlaschkeApproximant {
        log_c_b: log_mod,
        arg_c_b: arg.rem_euclid(TAU),
        terms,
        r,
    })
}

/// `c_B * C(w)`, combined in log form so that neither factor has to be
/// representable on its own.
pub fn eval_blaschke(b: &BlaschkeApproximant, w: Complex64) -> Result<Complex64> {
    let (m, a) = b.log_inner(w)?;
    Ok(from_log(b.log_c_b + m, b.arg_c_b + a))
}

/// Zeros of `C`: for each term, the `j`-th roots of `-alpha` (multiplicity
/// `nu`) and of `-beta` (multiplicity 1).
pub fn blaschke_zeros(b: &BlaschkeApproximant) -> Vec<BlaschkeZero> {
    let mut out = Vec::new();
    for t in &b.terms {
        for (c, mult) in [(t.alpha, t.nu), (t.beta, 1)] {
            if mult == 0 {
                continue;
            }
            out.extend(
                crate::matcher::nth_roots(-c, t.j)
                    .into_iter()
                    .map(|z| BlaschkeZero {
                        z,
                        multiplicity: mult,
                    }),
            );
        }
    }
    out
}

/// A complete approximation of `g` on `|w| <= r (1 - delta)`.
#[derive(Debug, Clone)]
pub struct BlaschkeFit {
    pub approximant: BlaschkeApproximant,
    pub centered: CenteredFit,
    /// Sup-error of `c_B C(w)` against `g`, measured in the `w` plane.
    pub sup_error: f64,
    pub radius: f64,
}

/// Builds `c_B * B` with all zeros on `|w| = r` approximating `g` within
/// `eps` on `|w| <= r (1 - delta)`.
///
/// `g` must be analytic and zero-free on a neighborhood of `|w| <= r`.
pub fn fit_blaschke(
    g: &dyn AnalyticFunction,
    r: f64,
    delta: f64,
    eps: f64,
    cfg: &FitConfig,
) -> Result<BlaschkeFit> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "r must lie in (0, 1), got {r}"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    let dilated = Dilated {
        inner: g,
        scale: Complex64::new(r, 0.0),
    };
    let centered = fit_centered(&dilated, 1.0 - delta, 1.0, eps, Some(r * r), cfg)?;
    let approximant = to_blaschke(&centered.product, r)?;
    let radius = r * (1.0 - delta);
    let pts = disc_grid(Complex64::new(0.0, 0.0), radius, cfg.grid);
    let sup_error = sup_distance(
        &pts,
        |w| g.eval(w),
        |w| {
            approximant
                .eval(w)
                .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
        },
    );
    Ok(BlaschkeFit {
        approximant,
        centered,
        sup_error,
        radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcher::CircleFactor;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_term() {
        let r = 0.5;
        let f = CircleFactor {
            j: 1,
            xi: c(1.0, 0.0),
            eta: c(-1.0, 0.0),
            nu: 1,
            denom_r: Some(r * r),
        };
        let p = FactorProduct::new(vec![f], c(1.0, 0.0)).unwrap();
        let b = to_blaschke(&p, r).unwrap();
        assert_eq!(b.terms()[0].alpha, c(0.5, 0.0));
        let w = c(-0.5, 0.0);
        assert!(b.eval(w).unwrap().norm() < 1e-15);
        let zs = b.zeros();
        assert_eq!(zs.len(), 2);
        assert!((zs[0].z - c(-0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn empty_product() {
        let p = FactorProduct::empty(c(2.0, -1.0)).unwrap();
        let b = to_blaschke(&p, 0.3).unwrap();
        assert!((b.c_b() - c(2.0, -1.0)).norm() < 1e-15);
        assert!(b.terms().is_empty());
        assert!(b.zeros().is_empty());
    }

    #[test]
    fn requires_matching_denominator() {
        let f = CircleFactor {
            j: 1,
            xi: c(1.0, 0.0),
            eta: c(-1.0, 0.0),
            nu: 1,
            denom_r: None,
        };
        let p = FactorProduct::new(vec![f], c(1.0, 0.0)).unwrap();
        assert!(matches!(
            to_blaschke(&p, 0.5),
            Err(Error::MissingDenominator { .. })
        ));
    }

    #[test]
    fn quadratic_zeros() {
        let b = BlaschkeApproximant {
            log_c_b: 0.0,
            arg_c_b: 0.0,
            terms: vec![BlaschkeTerm {
                j: 2,
                alpha: c(0.25, 0.0),
                beta: c(0.25, 0.0),
                nu: 1,
            }],
            r: 0.5,
        };
        let zs = b.zeros();
        for z in &zs {
            assert!((z.z.norm() - 0.5).abs() < 1e-15);
            assert!(z.z.re.abs() < 1e-15);
        }
        assert_eq!(b.zero_count(), 4);
    }

    #[test]
    fn zero_count_formula() {
        let t = |j, nu| BlaschkeTerm {
            j,
            alpha: c(0.1, 0.0),
            beta: c(0.1, 0.0),
            nu,
        };
        let b = BlaschkeApproximant {
            log_c_b: 0.0,
            arg_c_b: 0.0,
            terms: vec![t(1, 2), t(3, 0)],
            r: 0.5,
        };
        assert_eq!(b.zero_count(), 6);
        let listed: u32 = b.zeros().iter().map(|z| z.multiplicity).sum();
        assert_eq!(listed, 6);
    }

    #[test]
    fn value_at_origin() {
        let p = crate::matcher::match_factors(
            &crate::series::TruncatedSeries::from_real(&[0.3, -0.2, 0.1]).unwrap(),
            3,
            Some(0.36),
        )
        .unwrap();
        let b = to_blaschke(&p, 0.6).unwrap();
        let want = b
            .terms()
            .iter()
            .fold(b.c_b(), |acc, t| acc * t.alpha.powu(t.nu) * t.beta);
        assert!((b.eval(c(0.0, 0.0)).unwrap() - want).norm() < 1e-12 * want.norm());
        // and the product itself is 1 at the origin
        assert!((b.eval(c(0.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
    }
}
