//! Haar-random unitary matrices and their characteristic polynomials
//! `Lambda(z) = det(I - U* z)`, all of whose zeros sit on the unit circle.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::polar_grid;
use crate::roots::polynomial_roots;
use crate::series::TruncatedSeries;
use crate::target::{horner, AnalyticFunction};

/// Sorted eigenphases of one sampled matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenphaseSample {
    pub n: usize,
    pub phases: Vec<f64>,
    pub seed: u64,
}

/// The generator used for trial `stream` under `seed`. Trials use their
/// index as the stream, so results do not depend on scheduling.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// A Haar-distributed unitary: QR of a complex Ginibre matrix with the
/// phases of `diag(R)` moved into `Q`.
pub fn haar_unitary(n: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(n, n, |_, _| gaussian(rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for (k, mut col) in q.column_iter_mut().enumerate() {
        let d = r[(k, k)];
        let phase = if d.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            d / d.norm()
        };
        col *= phase;
    }
    q
}

pub fn sample_haar_with(n: usize, seed: u64, rng: &mut impl Rng) -> Result<EigenphaseSample> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "matrix dimension must be positive".into(),
        ));
    }
    loop {
        let u = haar_unitary(n, rng);
        // A failed Schur iteration has probability zero; draw again if it happens.
        if let Some(schur) = nalgebra::linalg::Schur::try_new(u, f64::EPSILON, 1000 * n) {
            let eig = schur
                .eigenvalues()
                .expect("complex Schur form is triangular");
            let mut phases: Vec<f64> = eig.iter().map(|z| z.arg().rem_euclid(TAU)).collect();
            for p in &mut phases {
                if *p >= TAU {
                    *p = 0.0;
                }
            }
            phases.sort_by(f64::total_cmp);
            return Ok(EigenphaseSample { n, phases, seed });
        }
    }
}

pub fn sample_haar(n: usize, seed: u64) -> Result<EigenphaseSample> {
    sample_haar_with(n, seed, &mut trial_rng(seed, 0))
}

/// `Lambda(z) = prod_k (1 - e^{-i theta_k} z)`, stored by coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct CharPoly {
    coeffs: TruncatedSeries,
}

impl CharPoly {
    pub fn from_phases(phases: &[f64]) -> Self {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &t in phases {
            let u = Complex64::from_polar(1.0, -t);
            c.push(Complex64::new(0.0, 0.0));
            for k in (1..c.len()).rev() {
                let prev = c[k - 1];
                c[k] -= u * prev;
            }
        }
        Self {
            coeffs: TruncatedSeries::new(c).expect("at least the constant term"),
        }
    }

    pub fn coeffs(&self) -> &TruncatedSeries {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.order()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.eval(z)
    }

    pub fn roots(&self) -> Vec<Complex64> {
        polynomial_roots(self.coeffs.coeffs())
    }
}

pub fn char_poly(s: &EigenphaseSample) -> CharPoly {
    CharPoly::from_phases(&s.phases)
}

/// `(Lambda'/Lambda, ..., Lambda^(n)/Lambda)` at `x`, by differentiating the
/// coefficient list directly.
pub fn logderiv_tuple(p: &CharPoly, x: f64, n: usize) -> Vec<Complex64> {
    let z = Complex64::new(x, 0.0);
    let mut c = p.coeffs.coeffs().to_vec();
    let base = horner(&c, z);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        c = c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &a)| a * k as f64)
            .collect();
        out.push(horner(&c, z) / base);
    }
    out
}

/// A Monte-Carlo proportion with its 95% Wilson score interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityEstimate {
    pub successes: usize,
    pub trials: usize,
    pub p_hat: f64,
    pub lo: f64,
    pub hi: f64,
}

const Z_95: f64 = 1.959_963_984_540_054;

pub fn wilson_interval(successes: usize, trials: usize) -> ProbabilityEstimate {
    if trials == 0 {
        return ProbabilityEstimate {
            successes,
            trials,
            p_hat: 0.0,
            lo: 0.0,
            hi: 1.0,
        };
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let mid = (p + z2 / (2.0 * n)) / denom;
    let half = Z_95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ProbabilityEstimate {
        successes,
        trials,
        p_hat: p,
        lo: (mid - half).max(0.0),
        hi: (mid + half).min(1.0),
    }
}

/// `max |Lambda - f|` over the 32 x 32 polar grid on `|z| <= r`, one value
/// per trial. This underestimates the true supremum.
pub fn trial_sup_errors(
    f: &dyn AnalyticFunction,
    r: f64,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "r must lie in (0, 1), got {r}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument(
            "matrix dimension must be positive".into(),
        ));
    }
    let f0 = f.eval(Complex64::new(0.0, 0.0));
    if (f0 - 1.0).norm() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "target must satisfy f(0) = 1, got {f0}"
        )));
    }
    let pts = polar_grid(r, 32, 32);
    let want: Vec<Complex64> = pts.iter().map(|&z| f.eval(z)).collect();
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = sample_haar_with(n, seed, &mut trial_rng(seed, t as u64))?;
            let lam = char_poly(&s);
            Ok(pts
                .iter()
                .zip(&want)
                .map(|(&z, &w)| (lam.eval(z) - w).norm())
                .fold(0.0, f64::max))
        })
        .collect()
}

/// Fraction of sampled `Lambda` within `eps` of `f` on the grid over
/// `|z| < r`.
pub fn approx_probability(
    f: &dyn AnalyticFunction,
    r: f64,
    eps: f64,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<ProbabilityEstimate> {
    Ok(approx_probability_sweep(f, r, &[eps], n, trials, seed)?[0])
}

/// As [`approx_probability`] for several tolerances over one set of trials.
pub fn approx_probability_sweep(
    f: &dyn AnalyticFunction,
    r: f64,
    eps: &[f64],
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<ProbabilityEstimate>> {
    let errs = trial_sup_errors(f, r, n, trials, seed)?;
    Ok(eps
        .iter()
        .map(|&e| wilson_interval(errs.iter().filter(|&&d| d < e).count(), trials))
        .collect())
}

/// Kolmogorov-Smirnov distance between the empirical law of `phases` and
/// the uniform law on `[0, 2 pi)`.
pub fn ks_uniform(phases: &[f64]) -> f64 {
    let mut x: Vec<f64> = phases.iter().map(|p| p / TAU).collect();
    x.sort_by(f64::total_cmp);
    let n = x.len() as f64;
    x.iter()
        .enumerate()
        .map(|(i, &u)| (u - i as f64 / n).max((i + 1) as f64 / n - u))
        .fold(0.0, f64::max)
}

/// Asymptotic 1% critical value of the one-sample KS statistic.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.627_61 / (n as f64).sqrt()
}

/// One histogram bin of a real or imaginary part of a tuple component.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramBin {
    /// 1-based derivative order.
    pub component: usize,
    pub imaginary: bool,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

/// Equal-width histograms of the real and imaginary parts of each tuple
/// component. Bins span the observed range of that part.
pub fn tuple_histogram(tuples: &[Vec<Complex64>], bins: usize) -> Vec<HistogramBin> {
    let bins = bins.max(1);
    let width = tuples.iter().map(Vec::len).min().unwrap_or(0);
    let mut out = Vec::new();
    for k in 0..width {
        for imaginary in [false, true] {
            let vals: Vec<f64> = tuples
                .iter()
                .map(|t| if imaginary { t[k].im } else { t[k].re })
                .filter(|v| v.is_finite())
                .collect();
            if vals.is_empty() {
                continue;
            }
            let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let step = if hi > lo {
                (hi - lo) / bins as f64
            } else {
                1.0
            };
            let mut counts = vec![0usize; bins];
            for v in vals {
                let b = (((v - lo) / step) as usize).min(bins - 1);
                counts[b] += 1;
            }
            out.extend(
                counts
                    .into_iter()
                    .enumerate()
                    .map(|(b, count)| HistogramBin {
                        component: k + 1,
                        imaginary,
                        lo: lo + step * b as f64,
                        hi: lo + step * (b + 1) as f64,
                        count,
                    }),
            );
        }
    }
    out
}
