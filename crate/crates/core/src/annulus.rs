//! Writing a complex number as `m * xi + eta` with `|xi| = |eta| = R0`.
//!
//! For a fixed positive integer `m`, the admissible `m * xi` are the
//! intersection points of the circle `|zeta| = m R0` with the circle
//! `|w - zeta| = R0`. Such points exist exactly when
//! `(m - 1) R0 <= |w| <= (m + 1) R0`.

use num_complex::Complex64;

/// One representation `w = m * xi + eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusTriple {
    pub m: u32,
    pub xi: Complex64,
    pub eta: Complex64,
}

impl AnnulusTriple {
    pub fn reconstruct(&self) -> Complex64 {
        self.xi * self.m as f64 + self.eta
    }
}

/// Intersection of the two circles in the frame where `w` sits at
/// `rho > 0` on the real axis. Returns `(x, y, rho - x)` where the points
/// are `x ± iy`; `None` when the circles miss each other.
///
/// Every difference is written in factored form so that neither
/// `|w| << R0` nor `|w| >> R0` loses precision.
fn rotated_intersection(rho: f64, m: f64, r0: f64) -> Option<(f64, f64, f64)> {
    let big = m * r0;
    // R0^2 - (rho - m R0)^2
    let disc = ((m + 1.0) * r0 - rho) * (rho - (m - 1.0) * r0);
    if disc < 0.0 {
        return None;
    }
    // (m^2 - 1) R0^2
    let shift = ((m - 1.0) * r0) * ((m + 1.0) * r0);
    let x = (shift + rho * rho) / (2.0 * rho);
    let eta_x = (rho * rho - shift) / (2.0 * rho);
    // m^2 R0^2 - x^2 = disc * (m R0 + x) / (2 rho)
    let y = (disc * (big + x) / (2.0 * rho)).max(0.0).sqrt();
    Some((x, y, eta_x))
}

fn with_modulus(z: Complex64, modulus: f64) -> Complex64 {
    z * (modulus / z.norm())
}

/// Deterministic representation of `w`.
///
/// `m` is the smallest positive integer with `(m-1) R0 <= |w| <= (m+1) R0`.
/// Of the two candidate points for `m * xi`, the one with the larger
/// imaginary part wins, then the one with the larger real part.
/// `w = 0` gives `(1, R0, -R0)`.
///
/// # Panics
///
/// If `r0` is not a positive finite number or `w` is not finite.
pub fn decompose(w: Complex64, r0: f64) -> AnnulusTriple {
    assert!(r0 > 0.0 && r0.is_finite(), "R0 must be positive, got {r0}");
    assert!(w.re.is_finite() && w.im.is_finite(), "w must be finite");
    let rho = w.norm();
    if rho == 0.0 {
        return AnnulusTriple {
            m: 1,
            xi: Complex64::new(r0, 0.0),
            eta: Complex64::new(-r0, 0.0),
        };
    }
    let mut m = ((rho / r0) - 1.0).ceil().max(1.0);
    // Rounding in rho / r0 can put us one step off the valid band.
    let (x, y, eta_x) = loop {
        match rotated_intersection(rho, m, r0) {
            Some(sol) => break sol,
            None => m += 1.0,
        }
    };
    let rot = w / rho;
    let upper = rot * Complex64::new(x, y);
    let lower = rot * Complex64::new(x, -y);
    let take_upper = match upper.im.partial_cmp(&lower.im) {
        Some(std::cmp::Ordering::Greater) => true,
        Some(std::cmp::Ordering::Less) => false,
        _ => upper.re >= lower.re,
    };
    let (zeta, eta) = if take_upper {
        (upper, rot * Complex64::new(eta_x, -y))
    } else {
        (lower, rot * Complex64::new(eta_x, y))
    };
    let mi = m as u32;
    AnnulusTriple {
        m: mi,
        xi: with_modulus(zeta, r0),
        eta: with_modulus(eta, r0),
    }
}

/// Number of distinct representations for one value of `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RepresentationCount {
    pub m: u32,
    pub count: u32,
}

/// Enumerates every `m` admitting a representation of `w` and counts the
/// distinct `(xi, eta)` pairs for each. Tangent circles contribute one.
pub fn count_representations(w: Complex64, r0: f64) -> Vec<RepresentationCount> {
    assert!(r0 > 0.0 && r0.is_finite(), "R0 must be positive, got {r0}");
    let rho = w.norm();
    assert!(rho > 0.0, "w = 0 has infinitely many representations");
    let t = rho / r0;
    let lo = (t - 1.0).ceil().max(1.0) as u32;
    let hi = (t + 1.0).floor().max(1.0) as u32;
    let tangency_tol = 1e-12;
    (lo.saturating_sub(1).max(1)..=hi + 1)
        .filter_map(|m| {
            let offset = t - m as f64;
            let disc = (1.0 - offset) * (1.0 + offset);
            let count = if disc.abs() <= tangency_tol {
                1
            } else if disc > 0.0 {
                2
            } else {
                0
            };
            (count > 0).then_some(RepresentationCount { m, count })
        })
        .collect()
}

pub fn total_representations(w: Complex64, r0: f64) -> u32 {
    count_representations(w, r0).iter().map(|c| c.count).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(t: &AnnulusTriple, w: Complex64, r0: f64) {
        let resid = (t.reconstruct() - w).norm();
        assert!(resid <= 1e-12 * w.norm().max(1.0), "residual {resid}");
        assert!((t.xi.norm() - r0).abs() <= 1e-14 * r0);
        assert!((t.eta.norm() - r0).abs() <= 1e-14 * r0);
    }

    #[test]
    fn zero_is_fixed_pick() {
        let t = decompose(Complex64::new(0.0, 0.0), 1.0);
        assert_eq!(t.m, 1);
        assert_eq!(t.xi, Complex64::new(1.0, 0.0));
        assert_eq!(t.eta, Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn half_splits_symmetrically() {
        let w = Complex64::new(0.5, 0.0);
        let t = decompose(w, 1.0);
        assert_eq!(t.m, 1);
        let h = (1.0f64 - 0.0625).sqrt();
        assert!((t.xi - Complex64::new(0.25, h)).norm() < 1e-15);
        assert!((t.eta - Complex64::new(0.25, -h)).norm() < 1e-15);
        check(&t, w, 1.0);
    }

    #[test]
    fn three_and_a_half() {
        let w = Complex64::new(3.5, 0.0);
        let t = decompose(w, 1.0);
        assert_eq!(t.m, 3);
        // |zeta| = 3, |3.5 - zeta| = 1: x = (9 + 12.25 - 1) / 7
        let x: f64 = 20.25 / 7.0;
        let y = (9.0 - x * x).sqrt();
        assert!((t.xi * 3.0 - Complex64::new(x, y)).norm() < 1e-14);
        check(&t, w, 1.0);
    }

    #[test]
    fn tie_break_prefers_larger_real_part() {
        // On the imaginary axis both candidates share Im = x; the one with
        // positive real part must win.
        let w = Complex64::new(0.0, 1.5);
        let t = decompose(w, 1.0);
        assert_eq!(t.m, 1);
        let x: f64 = (1.0 + 2.25 - 1.0) / 3.0;
        let y = (1.0 - x * x).sqrt();
        assert!((t.xi - Complex64::new(y, x)).norm() < 1e-15);
        check(&t, w, 1.0);
    }

    #[test]
    fn tangent_case_at_two() {
        let w = Complex64::new(2.0, 0.0);
        let t = decompose(w, 1.0);
        assert_eq!(t.m, 1);
        assert!((t.xi - Complex64::new(1.0, 0.0)).norm() < 1e-7);
        check(&t, w, 1.0);
    }

    #[test]
    fn census_examples() {
        assert_eq!(total_representations(Complex64::new(3.5, 0.0), 1.0), 4);
        let c = count_representations(Complex64::new(3.5, 0.0), 1.0);
        assert_eq!(
            c,
            vec![
                RepresentationCount { m: 3, count: 2 },
                RepresentationCount { m: 4, count: 2 }
            ]
        );
        assert_eq!(total_representations(Complex64::new(0.5, 0.0), 1.0), 2);
        let c = count_representations(Complex64::new(2.0, 0.0), 1.0);
        assert_eq!(
            c,
            vec![
                RepresentationCount { m: 1, count: 1 },
                RepresentationCount { m: 2, count: 2 },
                RepresentationCount { m: 3, count: 1 }
            ]
        );
    }
}
