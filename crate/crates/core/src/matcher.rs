//! Products of circle factors whose logarithmic derivative matches a target.
//!
//! The polynomial variant builds
//!
//! ```text
//! g_J(z) = prod_{j=1..J} (1 + xi_j z^j)^nu(j) (1 + eta_j z^j),  |xi_j| = |eta_j| = 1,
//! ```
//!
//! so every root of `g_J` lies on the unit circle. The rational variant
//! divides each factor by the same factor evaluated at `R z`, which leaves
//! the coefficients of the logarithmic derivative scaled by `1 - R^(k+1)`.
//!
//! Index `j` only contributes to coefficients `b_k` with `j | (k + 1)`, so
//! once `b_0 ..= b_(K-1)` are matched, later factors can never disturb them.
//! That is what makes the greedy construction in [`match_factors`] work.

use num_complex::Complex64;

use crate::annulus::decompose;
use crate::error::{Error, Result};
use crate::grid::disc_grid;
use crate::series::{GrowthBound, TruncatedSeries};
use crate::target::AnalyticFunction;

const POLE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleFactor {
    pub j: usize,
    pub xi: Complex64,
    pub eta: Complex64,
    pub nu: u32,
    /// `Some(R)` for the rational variant.
    pub denom_r: Option<f64>,
}

impl CircleFactor {
    /// Value of this factor at `z`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let zj = z.powu(self.j as u32);
        let mut num_xi = 1.0 + self.xi * zj;
        let mut num_eta = 1.0 + self.eta * zj;
        if let Some(r) = self.denom_r {
            let rj = r.powi(self.j as i32);
            let den_xi = 1.0 + self.xi * rj * zj;
            let den_eta = 1.0 + self.eta * rj * zj;
            if den_xi.norm() < POLE_TOL || den_eta.norm() < POLE_TOL {
                return Err(Error::PoleHit { re: z.re, im: z.im });
            }
            num_xi /= den_xi;
            num_eta /= den_eta;
        }
        Ok(num_xi.powu(self.nu) * num_eta)
    }

    /// Contribution `-(-1)^m j (nu xi^m + eta^m)` of this factor to `b_k`,
    /// where `m = (k+1)/j`; zero unless `j` divides `k + 1`. For rational
    /// factors the result is scaled by `1 - R^(k+1)`.
    fn logderiv_coeff(&self, k: usize) -> Complex64 {
        let n = k + 1;
        if n % self.j != 0 {
            return Complex64::new(0.0, 0.0);
        }
        let b = plain_contribution(self.j, n / self.j, self.xi, self.eta, self.nu);
        match self.denom_r {
            Some(r) => b * (1.0 - r.powi(n as i32)),
            None => b,
        }
    }
}

fn plain_contribution(j: usize, m: usize, xi: Complex64, eta: Complex64, nu: u32) -> Complex64 {
    let sign = if m % 2 == 0 { -1.0 } else { 1.0 };
    (xi.powu(m as u32) * nu as f64 + eta.powu(m as u32)) * (sign * j as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorProduct {
    factors: Vec<CircleFactor>,
    leading_constant: Complex64,
}

impl FactorProduct {
    /// Factors must carry consecutive indices `1, 2, ...`.
    pub fn new(factors: Vec<CircleFactor>, leading_constant: Complex64) -> Result<Self> {
        if leading_constant == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroConstantTerm);
        }
        for (i, f) in factors.iter().enumerate() {
            if f.j != i + 1 {
                return Err(Error::InvalidArgument(format!(
                    "factor at position {i} has index {}, expected {}",
                    f.j,
                    i + 1
                )));
            }
            if let Some(r) = f.denom_r {
                if !(0.0..1.0).contains(&r) {
                    return Err(Error::InvalidR(r));
                }
            }
        }
        Ok(Self {
            factors,
            leading_constant,
        })
    }

    pub fn empty(leading_constant: Complex64) -> Result<Self> {
        Self::new(Vec::new(), leading_constant)
    }

    pub fn factors(&self) -> &[CircleFactor] {
        &self.factors
    }

    pub fn leading_constant(&self) -> Complex64 {
        self.leading_constant
    }

    /// Truncation index `J`.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn with_leading_constant(mut self, c: Complex64) -> Result<Self> {
        if c == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroConstantTerm);
        }
        self.leading_constant = c;
        Ok(self)
    }

    /// The first `j` factors.
    pub fn truncated(&self, j: usize) -> Self {
        Self {
            factors: self.factors[..j.min(self.factors.len())].to_vec(),
            leading_constant: self.leading_constant,
        }
    }

    /// Appends a factor with the next index.
    pub fn push(&mut self, mut factor: CircleFactor) {
        factor.j = self.factors.len() + 1;
        self.factors.push(factor);
    }

    /// Degree of the polynomial variant, `sum_j j (nu(j) + 1)`.
    pub fn degree(&self) -> usize {
        self.factors.iter().map(|f| f.j * (f.nu as usize + 1)).sum()
    }

    /// Roots of the numerator with their multiplicities: the `j`-th roots
    /// of `-1/xi_j` (multiplicity `nu(j)`) and of `-1/eta_j`.
    pub fn numerator_roots(&self) -> Vec<(Complex64, u32)> {
        let mut out = Vec::new();
        for f in &self.factors {
            for (c, mult) in [(f.xi, f.nu), (f.eta, 1)] {
                if mult == 0 {
                    continue;
                }
                for root in nth_roots(-c.inv(), f.j) {
                    out.push((root, mult));
                }
            }
        }
        out
    }

    /// Value at `z`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        evaluate_product(self, z)
    }

    /// Taylor expansion of the whole product through `order`.
    pub fn expand(&self, order: usize) -> TruncatedSeries {
        let mut s = vec![Complex64::new(0.0, 0.0); order + 1];
        s[0] = self.leading_constant;
        for f in &self.factors {
            apply_factor(&mut s, f, false);
        }
        TruncatedSeries::new(s).expect("order + 1 >= 1 coefficients")
    }
}

/// All `j` solutions of `w^j = c`.
pub(crate) fn nth_roots(c: Complex64, j: usize) -> Vec<Complex64> {
    let modulus = c.norm().powf(1.0 / j as f64);
    let arg = c.arg();
    (0..j)
        .map(|k| {
            Complex64::from_polar(modulus, (arg + std::f64::consts::TAU * k as f64) / j as f64)
        })
        .collect()
}

/// Multiplies (or divides, if `invert`) the coefficient vector by `f`'s
/// expansion, in place. Each elementary factor `1 + c z^j` is sparse, so one
/// pass per elementary factor suffices.
fn apply_factor(s: &mut [Complex64], f: &CircleFactor, invert: bool) {
    let j = f.j;
    let rj = f.denom_r.map(|r| r.powi(j as i32));
    let mul = |s: &mut [Complex64], c: Complex64, divide: bool| {
        if divide {
            for n in j..s.len() {
                let prev = s[n - j];
                s[n] -= c * prev;
            }
        } else {
            for n in (j..s.len()).rev() {
                let prev = s[n - j];
                s[n] += c * prev;
            }
        }
    };
    for (c, count) in [(f.xi, f.nu), (f.eta, 1)] {
        for _ in 0..count {
            mul(s, c, invert);
            if let Some(rj) = rj {
                mul(s, c * rj, !invert);
            }
        }
    }
}

/// Coefficients `b_0 ..= b_K` of the logarithmic derivative of the factor
/// product. The leading constant does not enter.
pub fn logderiv_of_factors(product: &FactorProduct, k_max: usize) -> TruncatedSeries {
    TruncatedSeries::from_fn(k_max, |k| {
        product
            .factors
            .iter()
            .take_while(|f| f.j <= k + 1)
            .map(|f| f.logderiv_coeff(k))
            .sum()
    })
}

fn check_r(denom_r: Option<f64>) -> Result<()> {
    match denom_r {
        Some(r) if !(0.0..1.0).contains(&r) || !r.is_finite() => Err(Error::InvalidR(r)),
        _ => Ok(()),
    }
}

/// Chooses factors `1 ..= J` so the logarithmic derivative of the product
/// reproduces `target[0 ..= J-1]` (the coefficients of `f'/f`).
///
/// Stage `K` isolates the new index `K + 1`:
///
/// ```text
/// b_K = P_K + (K+1) (nu(K+1) xi_{K+1} + eta_{K+1}),
/// P_K = -sum_{j | K+1, j <= K} (-1)^((K+1)/j) j (nu(j) xi_j^((K+1)/j) + eta_j^((K+1)/j))
/// ```
///
/// and [`decompose`] picks the new triple from `(a_K - P_K)/(K+1)`. In the
/// rational variant `a_K` is first divided by `1 - R^(K+1)`.
///
/// The leading constant of the result is 1.
pub fn match_factors(
    target: &TruncatedSeries,
    j: usize,
    denom_r: Option<f64>,
) -> Result<FactorProduct> {
    if j == 0 {
        return Err(Error::InvalidArgument("J must be positive".into()));
    }
    check_r(denom_r)?;
    if target.order() + 1 < j {
        return Err(Error::InsufficientOrder {
            need: j - 1,
            have: target.order(),
        });
    }
    let mut factors: Vec<CircleFactor> = Vec::with_capacity(j);
    for k in 0..j {
        let n = k + 1;
        let partial: Complex64 = factors
            .iter()
            .filter(|f| n % f.j == 0)
            .map(|f| plain_contribution(f.j, n / f.j, f.xi, f.eta, f.nu))
            .sum();
        let a = target.coeffs()[k];
        let adjusted = match denom_r {
            Some(r) => a / (1.0 - r.powi(n as i32)),
            None => a,
        };
        let w = (adjusted - partial) / n as f64;
        let t = decompose(w, 1.0);
        factors.push(CircleFactor {
            j: n,
            xi: t.xi,
            eta: t.eta,
            nu: t.m,
            denom_r,
        });
    }
    FactorProduct::new(factors, Complex64::new(1.0, 0.0))
}

/// Direct coefficient matching: divide out one factor per index so that the
/// product agrees with `f` through `z^J`.
///
/// At stage `j` the running quotient is `1 + b_j z^j + ...`; the factor's
/// own `z^j` coefficient is `(1 - R^j)(nu xi + eta)` (with `R = 0` for
/// polynomials), so `b_j` is decomposed with `R0 = 1 - R^j` and the result
/// rescaled to the unit circle.
pub fn formal_match_direct(
    f: &TruncatedSeries,
    j: usize,
    denom_r: Option<f64>,
) -> Result<FactorProduct> {
    check_r(denom_r)?;
    let a0 = f.coeffs()[0];
    if a0 == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroConstantTerm);
    }
    if f.order() < j {
        return Err(Error::InsufficientOrder {
            need: j,
            have: f.order(),
        });
    }
    let mut quotient: Vec<Complex64> = f.coeffs()[..=j].iter().map(|&c| c / a0).collect();
    let mut factors = Vec::with_capacity(j);
    for idx in 1..=j {
        let r0 = match denom_r {
            Some(r) => 1.0 - r.powi(idx as i32),
            None => 1.0,
        };
        let t = decompose(quotient[idx], r0);
        let factor = CircleFactor {
            j: idx,
            xi: t.xi / r0,
            eta: t.eta / r0,
            nu: t.m,
            denom_r,
        };
        apply_factor(&mut quotient, &factor, true);
        factors.push(factor);
    }
    FactorProduct::new(factors, a0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuBoundReport {
    /// Smallest `C'` with `n nu(n) <= C' kappa^n` over the stored factors.
    pub c_prime: f64,
    pub holds: bool,
}

pub fn verify_nu_bound(product: &FactorProduct, bound: &GrowthBound) -> NuBoundReport {
    let c_prime = product
        .factors
        .iter()
        .map(|f| f.j as f64 * f.nu as f64 / bound.kappa.powi(f.j as i32))
        .fold(0.0, f64::max);
    NuBoundReport {
        c_prime,
        holds: c_prime.is_finite(),
    }
}

/// `c_tail J^2 kappa^J |z|^J / (1 - |z|)`, the envelope for the part of
/// the logarithmic-derivative series beyond index `J`.
pub fn tail_bound(j: usize, kappa: f64, z_abs: f64, c_tail: f64) -> Result<f64> {
    if !(z_abs >= 0.0 && z_abs * kappa < 1.0) {
        return Err(Error::DivergentTail {
            z_abs,
            limit: 1.0 / kappa,
        });
    }
    if z_abs == 0.0 {
        return Ok(0.0);
    }
    let jf = j as f64;
    Ok(c_tail * jf * jf * (kappa * z_abs).powi(j as i32) / (1.0 - z_abs))
}

pub fn evaluate_product(product: &FactorProduct, z: Complex64) -> Result<Complex64> {
    product
        .factors
        .iter()
        .try_fold(product.leading_constant, |acc, f| Ok(acc * f.eval(z)?))
}

/// Multiplier in front of the matched product. Since every factor is 1 at
/// the origin, it is just `f(0)`.
pub fn approximant_constant(f0: Complex64) -> Result<Complex64> {
    if f0 == Complex64::new(0.0, 0.0) || !(f0.re.is_finite() && f0.im.is_finite()) {
        return Err(Error::ZeroConstantTerm);
    }
    Ok(f0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitConfig {
    pub j_max: usize,
    pub growth_delta: f64,
    /// Side of the Cartesian grid used for sup-error estimates.
    pub grid: usize,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            j_max: 200,
            growth_delta: GrowthBound::DEFAULT_DELTA,
            grid: 41,
        }
    }
}

/// Result of a full fit on a centered disc.
#[derive(Debug, Clone)]
pub struct CenteredFit {
    pub product: FactorProduct,
    /// Logarithmic-derivative coefficients of the target, `J` of them.
    pub target_logderiv: TruncatedSeries,
    pub sup_error: f64,
    pub growth: GrowthBound,
    pub nu: NuBoundReport,
    /// `None` when `radius >= 1/kappa`, where the envelope says nothing.
    pub tail_bound: Option<f64>,
}

/// Smallest prefix of `full` whose sup-error against `reference` on `pts`
/// is below `budget`. Returns the index and its error.
pub fn select_truncation(
    full: &FactorProduct,
    pts: &[Complex64],
    reference: &[Complex64],
    budget: f64,
) -> Result<(usize, f64)> {
    use rayon::prelude::*;
    let mut values = vec![full.leading_constant; pts.len()];
    let mut best = f64::INFINITY;
    for (idx, f) in full.factors.iter().enumerate() {
        let err = values
            .par_iter_mut()
            .zip(pts.par_iter().zip(reference.par_iter()))
            .map(|(v, (&z, &want))| match f.eval(z) {
                Ok(x) => {
                    *v *= x;
                    let d = (*v - want).norm();
                    if d.is_nan() {
                        f64::INFINITY
                    } else {
                        d
                    }
                }
                Err(_) => {
                    *v = Complex64::new(f64::NAN, f64::NAN);
                    f64::INFINITY
                }
            })
            .reduce(|| 0.0, f64::max);
        best = best.min(err);
        if err < budget {
            return Ok((idx + 1, err));
        }
    }
    Err(Error::BudgetExceeded {
        j_max: full.len(),
        best_error: best,
    })
}

/// Matches `f` on the centered disc `|z| <= radius` and picks the smallest
/// `J` whose measured sup-error is below `eps`.
///
/// `analytic_radius` is the radius of a disc on which `f` is analytic and
/// zero-free; it only feeds the growth envelope.
pub fn fit_centered(
    f: &dyn AnalyticFunction,
    radius: f64,
    analytic_radius: f64,
    eps: f64,
    denom_r: Option<f64>,
    cfg: &FitConfig,
) -> Result<CenteredFit> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "approximation radius must lie in (0, 1), got {radius}"
        )));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "eps must be positive, got {eps}"
        )));
    }
    let series = f.taylor(cfg.j_max)?;
    let lead = approximant_constant(series.coeffs()[0])?;
    let logderiv = series.log_derivative()?;
    let full = match_factors(&logderiv, cfg.j_max, denom_r)?.with_leading_constant(lead)?;

    let pts = disc_grid(Complex64::new(0.0, 0.0), radius, cfg.grid);
    let reference: Vec<Complex64> = pts.iter().map(|&z| f.eval(z)).collect();
    let (j, sup_error) = select_truncation(&full, &pts, &reference, eps)?;

    let product = full.truncated(j);
    let target_logderiv = logderiv.truncate(j - 1);
    let growth = GrowthBound::fit(&target_logderiv, analytic_radius, cfg.growth_delta);
    let nu = verify_nu_bound(&product, &growth);
    let tail = tail_bound(j, growth.kappa, radius, nu.c_prime).ok();
    Ok(CenteredFit {
        product,
        target_logderiv,
        sup_error,
        growth,
        nu,
        tail_bound: tail,
    })
}
