use num_complex::Complex64;

use crate::error::{Error, Result};

/// `(z + a) / (1 + conj(a) z)`.
pub fn disc_automorphism(a: Complex64, z: Complex64) -> Complex64 {
    (z + a) / (1.0 + a.conj() * z)
}

/// `|z - w| / |1 - conj(w) z|` for `z, w` in the open unit disc.
pub fn pseudohyperbolic_distance(z: Complex64, w: Complex64) -> Result<f64> {
    for p in [z, w] {
        if !(p.norm() < 1.0) {
            return Err(Error::OutsideDisc(p.norm()));
        }
    }
    Ok(((z - w) / (1.0 - w.conj() * z)).norm())
}

/// `z -> rotation * alpha_a(z)`, an automorphism of the unit disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    pub a: Complex64,
    pub rotation: Complex64,
}

impl MobiusMap {
    pub fn new(a: Complex64, rotation: Complex64) -> Result<Self> {
        if !(a.norm() < 1.0) {
            return Err(Error::OutsideDisc(a.norm()));
        }
        if (rotation.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "rotation must be unimodular, got modulus {}",
                rotation.norm()
            )));
        }
        Ok(Self { a, rotation })
    }

    pub fn identity() -> Self {
        Self {
            a: Complex64::new(0.0, 0.0),
            rotation: Complex64::new(1.0, 0.0),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.a == Complex64::new(0.0, 0.0) && self.rotation == Complex64::new(1.0, 0.0)
    }

    pub fn forward(&self, z: Complex64) -> Complex64 {
        self.rotation * disc_automorphism(self.a, z)
    }

    pub fn inverse(&self, w: Complex64) -> Complex64 {
        disc_automorphism(-self.a, self.rotation.conj() * w)
    }
}

/// A Euclidean disc in the unit disc together with its pseudohyperbolic
/// description: the disc is `rotation * alpha_a(D(0, pseudo_r))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscSpec {
    pub center: Complex64,
    pub radius: f64,
    /// Real in the rotated frame.
    pub pseudo_a: Complex64,
    pub pseudo_r: f64,
    pub rotation: Complex64,
}

impl DiscSpec {
    pub fn map(&self) -> MobiusMap {
        MobiusMap {
            a: self.pseudo_a,
            rotation: self.rotation,
        }
    }

    /// Smallest and largest modulus of the preimage of the circle
    /// `|w - center| = rho`. The preimage is a circle symmetric about the
    /// real axis of the rotated frame, so both extremes sit on that axis.
    pub fn preimage_moduli(&self, rho: f64) -> (f64, f64) {
        let c = self.center.norm();
        let map = self.map();
        let lo = map.inverse(self.rotation * (c - rho)).norm();
        let hi = map.inverse(self.rotation * (c + rho)).norm();
        (lo.min(hi), lo.max(hi))
    }
}

/// Describes `D(center, radius)` as a rotated pseudohyperbolic disc.
///
/// With the center rotated onto the positive axis, the boundary meets the
/// real line at `x = |c| - radius` and `y = |c| + radius`. Then
/// `R = (1 + xy)/(x + y) > 1`, `a = R - sqrt(R^2 - 1)` and
/// `r = (y - a)/(1 - a y)`.
pub fn to_disc_spec(center: Complex64, radius: f64) -> Result<DiscSpec> {
    let c = center.norm();
    if !(radius > 0.0) || !(c + radius < 1.0) {
        return Err(Error::DiscNotInUnitDisc {
            center_abs: c,
            radius,
        });
    }
    let spec = if c == 0.0 {
        DiscSpec {
            center,
            radius,
            pseudo_a: Complex64::new(0.0, 0.0),
            pseudo_r: radius,
            rotation: Complex64::new(1.0, 0.0),
        }
    } else {
        let x = c - radius;
        let y = c + radius;
        let big_r = (1.0 + x * y) / (x + y);
        // R - sqrt(R^2 - 1) without the cancellation for large R
        let a = 1.0 / (big_r + ((big_r - 1.0) * (big_r + 1.0)).sqrt());
        let r = (y - a) / (1.0 - a * y);
        DiscSpec {
            center,
            radius,
            pseudo_a: Complex64::new(a, 0.0),
            pseudo_r: r,
            rotation: center / c,
        }
    };
    let map = spec.map();
    let worst = (0..100)
        .map(|k| {
            let z = Complex64::from_polar(spec.pseudo_r, std::f64::consts::TAU * k as f64 / 100.0);
            ((map.forward(z) - center).norm() - radius).abs()
        })
        .fold(0.0, f64::max);
    if worst > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "pseudohyperbolic description misses the boundary by {worst:e}"
        )));
    }
    Ok(spec)
}
