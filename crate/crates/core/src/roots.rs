//! Polynomial roots for verification: eigenvalues of the companion matrix,
//! followed by a few guarded Newton steps on the original coefficients.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::target::horner;

fn derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, &a)| a * n as f64)
        .collect()
}

/// Roots of `sum_n coeffs[n] z^n`. Trailing zero coefficients are dropped,
/// so the result has `degree` entries, repeated roots included.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let end = coeffs
        .iter()
        .rposition(|c| c.norm() != 0.0)
        .map_or(0, |i| i + 1);
    let coeffs = &coeffs[..end];
    if coeffs.len() <= 1 {
        return Vec::new();
    }
    let degree = coeffs.len() - 1;
    let lead = coeffs[degree];
    let companion = DMatrix::<Complex64>::from_fn(degree, degree, |i, j| {
        if j == degree - 1 {
            -coeffs[i] / lead
        } else if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let deriv = derivative(coeffs);
    // The unshifted companion of z^n - c is a scaled permutation, on which
    // QR can stagnate; Aberth iteration takes over in that case.
    let start: Vec<Complex64> =
        match nalgebra::linalg::Schur::try_new(companion, f64::EPSILON, 200 * degree) {
            Some(schur) => schur
                .eigenvalues()
                .expect("complex Schur form is triangular")
                .iter()
                .copied()
                .collect(),
            None => aberth(coeffs, &deriv),
        };
    start
        .into_iter()
        .map(|z| polish(coeffs, &deriv, z))
        .collect()
}

fn aberth(coeffs: &[Complex64], deriv: &[Complex64]) -> Vec<Complex64> {
    let degree = coeffs.len() - 1;
    let lead = coeffs[degree].norm();
    // Cauchy bound on the root moduli
    let bound = 1.0
        + coeffs[..degree]
            .iter()
            .map(|c| c.norm() / lead)
            .fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| {
            Complex64::from_polar(
                0.5 * bound,
                0.4 + std::f64::consts::TAU * k as f64 / degree as f64,
            )
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..degree {
            let ratio = horner(coeffs, z[i]) / horner(deriv, z[i]);
            let repulsion: Complex64 = (0..degree)
                .filter(|&k| k != i)
                .map(|k| 1.0 / (z[i] - z[k]))
                .sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn polish(coeffs: &[Complex64], deriv: &[Complex64], mut z: Complex64) -> Complex64 {
    let mut val = horner(coeffs, z).norm();
    for _ in 0..8 {
        let d = horner(deriv, z);
        if d.norm() == 0.0 {
            break;
        }
        let next = z - horner(coeffs, z) / d;
        let next_val = horner(coeffs, next).norm();
        if !(next_val < val) {
            break;
        }
        z = next;
        val = next_val;
    }
    z
}
