//! Moving the centered constructions to an arbitrary disc inside the unit
//! disc through a disc automorphism.

mod mobius;
mod rubinstein;

pub use mobius::{disc_automorphism, pseudohyperbolic_distance, to_disc_spec, DiscSpec, MobiusMap};
pub use rubinstein::{reversed_conjugate, rubinstein_approx, RubinsteinApprox};

use num_complex::Complex64;

use crate::blaschke::{fit_blaschke, BlaschkeFit, BlaschkeZero};
use crate::error::{Error, Result};
use crate::grid::{disc_grid, sup_distance};
use crate::matcher::{fit_centered, CenteredFit, FactorProduct, FitConfig};
use crate::target::{AnalyticFunction, Sampled};

const VANISHING_TOL: f64 = 1e-9;
const CHECK_GRID: usize = 64;

fn nan() -> Complex64 {
    Complex64::new(f64::NAN, f64::NAN)
}

/// Radius of the slightly enlarged disc on which `f` is required to be
/// analytic and zero-free. Stays inside the unit disc.
fn inflated_radius(disc: &DiscSpec) -> f64 {
    let room = 1.0 - disc.center.norm();
    (1.05 * disc.radius).min(0.5 * (disc.radius + room))
}

/// Fails with [`Error::VanishingOnDisc`] if `|f|` drops below `1e-9` (or is
/// not finite) on a 64 x 64 grid over the enlarged disc, or if `f` winds
/// around the origin along its boundary. The second test catches simple
/// zeros that fall between grid points; the reported point is then the
/// grid minimum of `|f|`.
pub fn check_nonvanishing(f: &dyn AnalyticFunction, disc: &DiscSpec) -> Result<()> {
    let rho = inflated_radius(disc);
    let pts = disc_grid(disc.center, rho, CHECK_GRID);
    let mut smallest = (f64::INFINITY, disc.center);
    for z in pts {
        let v = f.eval(z).norm();
        if !(v >= VANISHING_TOL) {
            return Err(Error::VanishingOnDisc {
                value: v,
                re: z.re,
                im: z.im,
            });
        }
        if v < smallest.0 {
            smallest = (v, z);
        }
    }
    if winding_number(f, disc.center, rho) != 0 {
        let (value, z) = smallest;
        return Err(Error::VanishingOnDisc {
            value,
            re: z.re,
            im: z.im,
        });
    }
    Ok(())
}

fn winding_number(f: &dyn AnalyticFunction, center: Complex64, rho: f64) -> i64 {
    const N: usize = 2048;
    let vals: Vec<Complex64> = (0..=N)
        .map(|k| {
            f.eval(center + Complex64::from_polar(rho, std::f64::consts::TAU * k as f64 / N as f64))
        })
        .collect();
    let turn: f64 = vals.windows(2).map(|w| (w[1] / w[0]).arg()).sum();
    (turn / std::f64::consts::TAU).round() as i64
}

/// Largest order whose sampled Taylor coefficient at `radius` keeps
/// rounding noise under about `1e-4` relative to the samples.
fn sampled_order_cap(radius: f64) -> usize {
    if radius >= 1.0 {
        return usize::MAX;
    }
    (1e12f64.ln() / -radius.ln()).floor() as usize
}

/// Result of [`approx_poly_on_disc`].
#[derive(Debug, Clone)]
pub struct PolyOnDisc {
    pub disc: DiscSpec,
    /// Pulled-back target matched on `|z| <= pseudo_r`.
    pub stage1: CenteredFit,
    /// Pushed-forward first stage matched on `|w| <= s`.
    pub stage2: CenteredFit,
    pub s: f64,
    /// Every root lies on the unit circle.
    pub roots: Vec<(Complex64, u32)>,
    /// Sup-error of the final product against `f` on the disc.
    pub sup_error: f64,
}

impl PolyOnDisc {
    pub fn product(&self) -> &FactorProduct {
        &self.stage2.product
    }

    pub fn eval(&self, w: Complex64) -> Result<Complex64> {
        self.stage2.product.eval(w)
    }
}

/// Radius of the centered disc used by the second stage: it must contain
/// the target disc and stay away from the unit circle, where the pushed
/// forward product has its zeros.
pub fn second_stage_radius(disc: &DiscSpec) -> f64 {
    let outer = disc.center.norm() + disc.radius;
    (outer + 0.02).min(0.5 * (outer + 1.0))
}

/// A polynomial with every root on the unit circle approximating `f` on
/// `disc`.
///
/// Two centered fits, each with budget `eps`: the pullback `f o phi` on
/// `|z| <= pseudo_r`, then the first product composed with `phi^-1` on the
/// centered disc `|w| <= s` covering `disc`. The final error is at most
/// about `2 eps` and is measured, not assumed.
pub fn approx_poly_on_disc(
    f: &dyn AnalyticFunction,
    disc: &DiscSpec,
    eps: f64,
    cfg: &FitConfig,
) -> Result<PolyOnDisc> {
    check_nonvanishing(f, disc)?;
    let map = disc.map();
    let (rho1, _) = disc.preimage_moduli(inflated_radius(disc));
    let stage1 = if map.is_identity() {
        fit_centered(f, disc.pseudo_r, rho1, eps, None, cfg)?
    } else {
        let pulled = Sampled {
            f: |z: Complex64| f.eval(map.forward(z)),
            radius: rho1,
        };
        let capped = FitConfig {
            j_max: cfg.j_max.min(sampled_order_cap(rho1)),
            ..*cfg
        };
        fit_centered(&pulled, disc.pseudo_r, rho1, eps, None, &capped)?
    };

    let s = second_stage_radius(disc);
    let rho2 = 0.5 * (s + 1.0);
    let p1 = &stage1.product;
    let pushed = Sampled {
        f: |w: Complex64| p1.eval(map.inverse(w)).unwrap_or_else(|_| nan()),
        radius: rho2,
    };
    let capped = FitConfig {
        j_max: cfg.j_max.min(sampled_order_cap(rho2)),
        ..*cfg
    };
    let stage2 = fit_centered(&pushed, s, 1.0, eps, None, &capped)?;

    let pts = disc_grid(disc.center, disc.radius, cfg.grid);
    let q = &stage2.product;
    let sup_error = sup_distance(&pts, |w| f.eval(w), |w| q.eval(w).unwrap_or_else(|_| nan()));
    let roots = q.numerator_roots();
    Ok(PolyOnDisc {
        disc: *disc,
        stage1,
        stage2,
        s,
        roots,
        sup_error,
    })
}

/// `c_B * B(phi^-1(w))`, a Blaschke approximant carried to a general disc.
#[derive(Debug, Clone)]
pub struct TransportedBlaschke {
    pub map: MobiusMap,
    pub fit: BlaschkeFit,
}

impl TransportedBlaschke {
    pub fn c_b(&self) -> Complex64 {
        self.fit.approximant.c_b()
    }

    pub fn log_c_b(&self) -> (f64, f64) {
        self.fit.approximant.log_c_b()
    }

    pub fn eval(&self, w: Complex64) -> Result<Complex64> {
        self.fit.approximant.eval(self.map.inverse(w))
    }

    /// The Blaschke factor alone, without `c_B`.
    pub fn inner(&self, w: Complex64) -> Result<Complex64> {
        self.fit.approximant.inner(self.map.inverse(w))
    }

    /// Zeros in the `w` plane; all lie on the boundary of the target disc.
    pub fn zeros(&self) -> Vec<BlaschkeZero> {
        self.fit
            .approximant
            .zeros()
            .into_iter()
            .map(|z| BlaschkeZero {
                z: self.map.forward(z.z),
                multiplicity: z.multiplicity,
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct BlaschkeOnDisc {
    pub disc: DiscSpec,
    pub transported: TransportedBlaschke,
    /// Radius of the concentric disc where the error is controlled.
    pub inner_radius: f64,
    pub sup_error: f64,
}

/// A constant times a Blaschke product whose zeros lie on `|w - c| = radius`,
/// approximating `f` within `eps` on `|w - c| <= radius - delta`.
///
/// The inner disc pulls back into `|z| <= t` with `t < pseudo_r`, so the
/// centered construction runs with `r = pseudo_r` and relative margin
/// `1 - t / pseudo_r`.
pub fn approx_blaschke_on_disc(
    f: &dyn AnalyticFunction,
    disc: &DiscSpec,
    delta: f64,
    eps: f64,
    cfg: &FitConfig,
) -> Result<BlaschkeOnDisc> {
    if !(delta > 0.0 && delta < disc.radius) {
        return Err(Error::InvalidArgument(format!(
            "delta must lie in (0, {}), got {delta}",
            disc.radius
        )));
    }
    check_nonvanishing(f, disc)?;
    let map = disc.map();
    let inner_radius = disc.radius - delta;
    let (_, t) = disc.preimage_moduli(inner_radius);
    let rel = 1.0 - t / disc.pseudo_r;
    let fit = if map.is_identity() {
        fit_blaschke(f, disc.pseudo_r, rel, eps, cfg)?
    } else {
        let (rho1, _) = disc.preimage_moduli(inflated_radius(disc));
        let pulled = Sampled {
            f: |z: Complex64| f.eval(map.forward(z)),
            radius: rho1,
        };
        fit_blaschke(&pulled, disc.pseudo_r, rel, eps, cfg)?
    };
    let transported = TransportedBlaschke { map, fit };
    let pts = disc_grid(disc.center, inner_radius, cfg.grid);
    let sup_error = sup_distance(
        &pts,
        |w| f.eval(w),
        |w| transported.eval(w).unwrap_or_else(|_| nan()),
    );
    Ok(BlaschkeOnDisc {
        disc: *disc,
        transported,
        inner_radius,
        sup_error,
    })
}

/// `prod (w - a) / (1 - conj(a) w)` over the listed zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteBlaschke {
    pub zeros: Vec<Complex64>,
}

impl FiniteBlaschke {
    pub fn new(zeros: Vec<Complex64>) -> Result<Self> {
        if let Some(a) = zeros.iter().find(|a| !(a.norm() < 1.0)) {
            return Err(Error::ZeroOutsideDisc(a.norm()));
        }
        Ok(Self { zeros })
    }

    pub fn eval(&self, w: Complex64) -> Complex64 {
        self.zeros.iter().fold(Complex64::new(1.0, 0.0), |acc, &a| {
            acc * (w - a) / (1.0 - a.conj() * w)
        })
    }
}

/// `c0 * C1 * C2 ~ C1 * remainder`, where `C1` carries the prescribed zeros
/// and `C2` has all zeros on the boundary of the disc.
#[derive(Debug, Clone)]
pub struct PrescribedZeroFactorization {
    pub c1: FiniteBlaschke,
    pub c2: BlaschkeOnDisc,
    pub sup_error: f64,
}

impl PrescribedZeroFactorization {
    pub fn c0(&self) -> Complex64 {
        self.c2.transported.c_b()
    }

    pub fn log_c0(&self) -> (f64, f64) {
        self.c2.transported.log_c_b()
    }

    pub fn eval(&self, w: Complex64) -> Result<Complex64> {
        Ok(self.c1.eval(w) * self.c2.transported.eval(w)?)
    }
}

/// Approximates `C1 * remainder` on the disc shrunk by `delta`, where `C1`
/// is the finite Blaschke product with the given zeros and `remainder` is
/// zero-free near the disc.
pub fn factor_prescribed_zeros(
    zeros: &[Complex64],
    remainder: &dyn AnalyticFunction,
    disc: &DiscSpec,
    delta: f64,
    eps: f64,
    cfg: &FitConfig,
) -> Result<PrescribedZeroFactorization> {
    let c1 = FiniteBlaschke::new(zeros.to_vec())?;
    let c2 = approx_blaschke_on_disc(remainder, disc, delta, eps, cfg)?;
    let pts = disc_grid(disc.center, c2.inner_radius, cfg.grid);
    let sup_error = sup_distance(
        &pts,
        |w| c1.eval(w) * remainder.eval(w),
        |w| {
            c2.transported
                .eval(w)
                .map(|v| c1.eval(w) * v)
                .unwrap_or_else(|_| nan())
        },
    );
    Ok(PrescribedZeroFactorization { c1, c2, sup_error })
}
