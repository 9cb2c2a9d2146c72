//! Sample points for sup-norm estimates on discs.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

/// Points of an `n x n` Cartesian grid over the bounding square that fall in
/// the closed disc, plus `4n` points on the boundary circle.
pub fn disc_grid(center: Complex64, radius: f64, n: usize) -> Vec<Complex64> {
    let n = n.max(2);
    let mut pts = Vec::with_capacity(n * n + 4 * n);
    for i in 0..n {
        for k in 0..n {
            let x = -radius + 2.0 * radius * i as f64 / (n - 1) as f64;
            let y = -radius + 2.0 * radius * k as f64 / (n - 1) as f64;
            let z = Complex64::new(x, y);
            if z.norm() <= radius {
                pts.push(center + z);
            }
        }
    }
    let ring = 4 * n;
    pts.extend(
        (0..ring).map(|k| center + Complex64::from_polar(radius, TAU * k as f64 / ring as f64)),
    );
    pts
}

/// `n_r x n_theta` polar grid on `0 < |z| <= radius`, radii `radius * i / n_r`.
pub fn polar_grid(radius: f64, n_r: usize, n_theta: usize) -> Vec<Complex64> {
    (1..=n_r)
        .flat_map(|i| {
            let rho = radius * i as f64 / n_r as f64;
            (0..n_theta).map(move |k| Complex64::from_polar(rho, TAU * k as f64 / n_theta as f64))
        })
        .collect()
}

/// Largest `|f(z) - g(z)|` over `pts`. NaN values count as infinite.
pub fn sup_distance(
    pts: &[Complex64],
    f: impl Fn(Complex64) -> Complex64 + Sync,
    g: impl Fn(Complex64) -> Complex64 + Sync,
) -> f64 {
    pts.par_iter()
        .map(|&z| {
            let d = (f(z) - g(z)).norm();
            if d.is_nan() {
                f64::INFINITY
            } else {
                d
            }
        })
        .reduce(|| 0.0, f64::max)
}
