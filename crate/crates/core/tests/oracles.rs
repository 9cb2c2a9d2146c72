use circle_approx::grid::{disc_grid, sup_distance};
use circle_approx::matcher::FitConfig;
use circle_approx::target::{AnalyticFunction, Polynomial};
use circle_approx::transport::{approx_poly_on_disc, rubinstein_approx, to_disc_spec};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Two unrelated routes to a unit-circle-rooted approximant of the same
/// polynomial should approach each other.
#[test]
fn transport_and_rubinstein_converge_together() {
    let p = vec![c(1.0, 0.0), c(-0.4, 0.2), c(0.1, 0.0)];
    let target = Polynomial(p.clone());
    let disc = to_disc_spec(c(0.2, -0.1), 0.3).unwrap();
    let pts = disc_grid(disc.center, disc.radius, 41);
    let gap = |eps: f64, k: usize| {
        let q = approx_poly_on_disc(&target, &disc, eps, &FitConfig::default()).unwrap();
        let r = rubinstein_approx(&p, k).unwrap();
        let own = sup_distance(&pts, |z| target.eval(z), |z| q.eval(z).unwrap());
        assert!(own < 2.0 * eps, "{own}");
        sup_distance(&pts, |z| q.eval(z).unwrap(), |z| r.eval(z))
    };
    let coarse = gap(1e-2, 5);
    let mid = gap(1e-4, 15);
    let fine = gap(1e-6, 30);
    assert!(mid < coarse && fine < mid, "{coarse:e} {mid:e} {fine:e}");
}
