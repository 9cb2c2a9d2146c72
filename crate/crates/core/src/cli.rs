//! The `circle-approx` command line.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::blaschke::{fit_blaschke, BlaschkeZero};
use crate::error::{Error, Result};
use crate::grid::disc_grid;
use crate::matcher::{fit_centered, CenteredFit, FactorProduct, FitConfig};
use crate::rmt;
use crate::spec::{parse_complex, parse_complex_list, resolve_function_spec};
use crate::target::{AnalyticFunction, Polynomial};
use crate::transport::{
    approx_poly_on_disc, factor_prescribed_zeros, rubinstein_approx, to_disc_spec,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "circle-approx",
    version,
    about = "Approximation by products with zeros on a circle"
)]
pub struct Cli {
    /// Directory for report.txt and CSV output.
    #[arg(long, global = true, env = "CIRCLE_APPROX_OUT", default_value = ".")]
    pub out: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct FitArgs {
    /// Requested sup-error.
    #[arg(long)]
    pub eps: f64,
    /// Largest number of factors tried.
    #[arg(long, default_value_t = 200)]
    pub j_max: usize,
    /// Margin in the growth envelope.
    #[arg(long, default_value_t = crate::series::GrowthBound::DEFAULT_DELTA)]
    pub growth_delta: f64,
    /// Side of the Cartesian error grid.
    #[arg(long, default_value_t = 41)]
    pub grid: usize,
}

impl FitArgs {
    fn config(&self) -> FitConfig {
        FitConfig {
            j_max: self.j_max,
            growth_delta: self.growth_delta,
            grid: self.grid,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Polynomial with unit-circle roots approximating f on |z| <= radius.
    ApproxPoly {
        /// Function spec, or @file.
        #[arg(long = "fn")]
        function: String,
        #[arg(long)]
        radius: f64,
        /// Radius of a disc where f is analytic and zero-free.
        #[arg(long, default_value_t = 1.0)]
        analytic_radius: f64,
        #[command(flatten)]
        fit: FitArgs,
    },
    /// Blaschke product with zeros on |w| = r approximating f on |w| <= r(1 - delta).
    ApproxBlaschke {
        #[arg(long = "fn")]
        function: String,
        #[arg(long)]
        r: f64,
        /// Relative margin.
        #[arg(long)]
        delta: f64,
        #[command(flatten)]
        fit: FitArgs,
    },
    /// Either construction on the disc D(center, radius).
    Transport {
        #[arg(long = "fn")]
        function: String,
        #[arg(long, allow_hyphen_values = true)]
        center: String,
        #[arg(long)]
        radius: f64,
        /// Absolute margin; selects the Blaschke construction.
        #[arg(long)]
        delta: Option<f64>,
        /// Prescribed zeros, comma separated; requires --delta.
        #[arg(long, allow_hyphen_values = true)]
        zeros: Option<String>,
        #[command(flatten)]
        fit: FitArgs,
    },
    /// p + z^k p* for p zero-free on the closed unit disc.
    Rubinstein {
        /// Ascending coefficients.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        k: usize,
    },
    /// Haar unitary eigenphases and log-derivative tuples.
    RmtSample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        x: f64,
        /// Number of tuple components.
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long, default_value_t = 20)]
        bins: usize,
    },
    /// Probability that det(I - U* z) is within eps of f on |z| < r.
    RmtProb {
        #[arg(long = "fn")]
        function: String,
        #[arg(long)]
        r: f64,
        /// One or more tolerances, comma separated.
        #[arg(long)]
        eps: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, thiserror::Error)]
enum RunError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    fn exit_code(&self) -> i32 {
        match self {
            Self::Core(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            Self::Core(_) => EXIT_INVALID,
            Self::Io(_) => EXIT_IO,
        }
    }
}

/// Shortest round-trip form, switching to exponent notation for very
/// small or very large magnitudes.
fn num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

trait Value {
    fn text(&self) -> String;
}

impl Value for f64 {
    fn text(&self) -> String {
        num(*self)
    }
}

impl Value for &f64 {
    fn text(&self) -> String {
        num(**self)
    }
}

macro_rules! display_value {
    ($($t:ty),*) => {$(
        impl Value for $t {
            fn text(&self) -> String {
                self.to_string()
            }
        }
    )*};
}

display_value!(usize, &usize, u64, &u64, u128, bool, &str, &String, String);

/// `key=value` lines in insertion order.
#[derive(Debug, Default)]
struct Report(String);

impl Report {
    fn put(&mut self, key: &str, value: impl Value) {
        let _ = writeln!(self.0, "{key}={}", value.text());
    }
}

fn fmt_c(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}i", num(z.re), num(-z.im))
    } else {
        format!("{}+{}i", num(z.re), num(z.im))
    }
}

struct Csv(String);

impl Csv {
    fn new(header: &str) -> Self {
        Self(format!("{header}\n"))
    }

    fn row(&mut self, cells: &[f64]) {
        let line: Vec<String> = cells.iter().map(|&c| num(c)).collect();
        self.0.push_str(&line.join(","));
        self.0.push('\n');
    }

    fn write(&self, dir: &Path, name: &str) -> std::io::Result<()> {
        fs::write(dir.join(name), &self.0)
    }
}

fn zeros_csv(zeros: &[(Complex64, u32)], around: Complex64) -> Csv {
    let mut csv = Csv::new("re,im,modulus");
    for &(z, mult) in zeros {
        for _ in 0..mult {
            csv.row(&[z.re, z.im, (z - around).norm()]);
        }
    }
    csv
}

fn blaschke_zero_pairs(zs: &[BlaschkeZero]) -> Vec<(Complex64, u32)> {
    zs.iter().map(|z| (z.z, z.multiplicity)).collect()
}

fn factors_csv(p: &FactorProduct) -> Csv {
    let mut csv = Csv::new("j,xi_re,xi_im,eta_re,eta_im,nu");
    for f in p.factors() {
        csv.row(&[
            f.j as f64,
            f.xi.re,
            f.xi.im,
            f.eta.re,
            f.eta.im,
            f.nu as f64,
        ]);
    }
    csv
}

fn error_grid_csv(
    center: Complex64,
    radius: f64,
    n: usize,
    target: impl Fn(Complex64) -> Complex64,
    approx: impl Fn(Complex64) -> Result<Complex64>,
) -> (Csv, f64, f64) {
    let mut csv = Csv::new("re_z,im_z,abs_error");
    let pts = disc_grid(center, radius, n);
    let (mut max, mut sum) = (0.0f64, 0.0);
    for &z in &pts {
        let e = match approx(z) {
            Ok(v) => (target(z) - v).norm(),
            Err(_) => f64::INFINITY,
        };
        max = max.max(if e.is_nan() { f64::INFINITY } else { e });
        sum += e;
        csv.row(&[z.re, z.im, e]);
    }
    (csv, max, sum / pts.len() as f64)
}

fn max_deviation(zeros: &[(Complex64, u32)], around: Complex64, radius: f64) -> f64 {
    zeros
        .iter()
        .map(|(z, _)| ((z - around).norm() - radius).abs())
        .fold(0.0, f64::max)
}

fn report_fit(rep: &mut Report, fit: &CenteredFit) {
    rep.put("factors", fit.product.len());
    rep.put("degree", fit.product.degree());
    rep.put("fit_sup_error", fit.sup_error);
    rep.put("growth_c", fit.growth.c);
    rep.put("growth_kappa", fit.growth.kappa);
    rep.put("nu_c_prime", fit.nu.c_prime);
    rep.put("nu_bound_holds", fit.nu.holds);
    match fit.tail_bound {
        Some(t) => rep.put("tail_bound", t),
        None => rep.put("tail_bound", "none"),
    }
}

fn function(spec_text: &str, rep: &mut Report) -> Result<Box<dyn AnalyticFunction + Send>> {
    let spec = resolve_function_spec(spec_text)?;
    rep.put("fn", spec_text);
    Ok(spec.to_function())
}

fn execute(cli: &Cli) -> std::result::Result<(), RunError> {
    let started = Instant::now();
    let out = &cli.out;
    let mut rep = Report::default();
    let mut files: Vec<(&str, Csv)> = Vec::new();
    match &cli.command {
        Command::ApproxPoly {
            function: text,
            radius,
            analytic_radius,
            fit,
        } => {
            rep.put("command", "approx-poly");
            let f = function(text, &mut rep)?;
            rep.put("radius", radius);
            rep.put("eps", fit.eps);
            let res = fit_centered(&f, *radius, *analytic_radius, fit.eps, None, &fit.config())?;
            report_fit(&mut rep, &res);
            let roots = res.product.numerator_roots();
            let origin = Complex64::new(0.0, 0.0);
            rep.put("zero_circle_center", fmt_c(origin));
            rep.put("zero_circle_radius", 1.0);
            rep.put(
                "zero_count",
                roots.iter().map(|r| r.1 as usize).sum::<usize>(),
            );
            rep.put("zero_max_deviation", max_deviation(&roots, origin, 1.0));
            let (grid, max, mean) = error_grid_csv(
                origin,
                *radius,
                fit.grid,
                |z| f.eval(z),
                |z| res.product.eval(z),
            );
            rep.put("grid_points", grid.0.lines().count() - 1);
            rep.put("grid_max_error", max);
            rep.put("grid_mean_error", mean);
            files.push(("factors.csv", factors_csv(&res.product)));
            files.push(("zeros.csv", zeros_csv(&roots, origin)));
            files.push(("error_grid.csv", grid));
        }
        Command::ApproxBlaschke {
            function: text,
            r,
            delta,
            fit,
        } => {
            rep.put("command", "approx-blaschke");
            let f = function(text, &mut rep)?;
            rep.put("r", r);
            rep.put("delta", delta);
            rep.put("eps", fit.eps);
            let res = fit_blaschke(&f, *r, *delta, fit.eps, &fit.config())?;
            report_fit(&mut rep, &res.centered);
            let b = &res.approximant;
            let (lm, arg) = b.log_c_b();
            rep.put("log_abs_c_b", lm);
            rep.put("arg_c_b", arg);
            let zeros = blaschke_zero_pairs(&b.zeros());
            let origin = Complex64::new(0.0, 0.0);
            rep.put("zero_circle_center", fmt_c(origin));
            rep.put("zero_circle_radius", r);
            rep.put("zero_count", b.zero_count());
            rep.put("zero_max_deviation", max_deviation(&zeros, origin, *r));
            let (grid, max, mean) =
                error_grid_csv(origin, res.radius, fit.grid, |w| f.eval(w), |w| b.eval(w));
            rep.put("error_radius", res.radius);
            rep.put("grid_points", grid.0.lines().count() - 1);
            rep.put("grid_max_error", max);
            rep.put("grid_mean_error", mean);
            let mut terms = Csv::new("j,alpha_re,alpha_im,beta_re,beta_im,nu");
            for t in b.terms() {
                terms.row(&[
                    t.j as f64,
                    t.alpha.re,
                    t.alpha.im,
                    t.beta.re,
                    t.beta.im,
                    t.nu as f64,
                ]);
            }
            files.push(("factors.csv", terms));
            files.push(("zeros.csv", zeros_csv(&zeros, origin)));
            files.push(("error_grid.csv", grid));
        }
        Command::Transport {
            function: text,
            center,
            radius,
            delta,
            zeros,
            fit,
        } => {
            rep.put("command", "transport");
            let f = function(text, &mut rep)?;
            let center = parse_complex(center).map_err(Error::from)?;
            let disc = to_disc_spec(center, *radius)?;
            rep.put("center", fmt_c(center));
            rep.put("radius", radius);
            rep.put("pseudo_a", fmt_c(disc.rotation * disc.pseudo_a));
            rep.put("pseudo_r", disc.pseudo_r);
            rep.put("eps", fit.eps);
            let cfg = fit.config();
            match (delta, zeros) {
                (None, Some(_)) => {
                    return Err(Error::InvalidArgument("--zeros requires --delta".into()).into())
                }
                (None, None) => {
                    rep.put("mode", "polynomial");
                    let res = approx_poly_on_disc(&f, &disc, fit.eps, &cfg)?;
                    rep.put("s", res.s);
                    rep.put("stage1_factors", res.stage1.product.len());
                    rep.put("stage1_sup_error", res.stage1.sup_error);
                    report_fit(&mut rep, &res.stage2);
                    let origin = Complex64::new(0.0, 0.0);
                    rep.put("zero_circle_center", fmt_c(origin));
                    rep.put("zero_circle_radius", 1.0);
                    rep.put(
                        "zero_count",
                        res.roots.iter().map(|r| r.1 as usize).sum::<usize>(),
                    );
                    rep.put("zero_max_deviation", max_deviation(&res.roots, origin, 1.0));
                    let (grid, max, mean) =
                        error_grid_csv(center, *radius, fit.grid, |w| f.eval(w), |w| res.eval(w));
                    rep.put("grid_points", grid.0.lines().count() - 1);
                    rep.put("grid_max_error", max);
                    rep.put("grid_mean_error", mean);
                    files.push(("factors.csv", factors_csv(res.product())));
                    files.push(("zeros.csv", zeros_csv(&res.roots, origin)));
                    files.push(("error_grid.csv", grid));
                }
                (Some(delta), prescribed) => {
                    rep.put("mode", "blaschke");
                    rep.put("delta", delta);
                    let prescribed = match prescribed {
                        Some(t) => parse_complex_list(t).map_err(Error::from)?,
                        None => Vec::new(),
                    };
                    let fact =
                        factor_prescribed_zeros(&prescribed, &f, &disc, *delta, fit.eps, &cfg)?;
                    let tb = &fact.c2.transported;
                    report_fit(&mut rep, &tb.fit.centered);
                    let (lm, arg) = fact.log_c0();
                    rep.put("prescribed_zeros", prescribed.len());
                    rep.put("log_abs_c_b", lm);
                    rep.put("arg_c_b", arg);
                    let zs = blaschke_zero_pairs(&tb.zeros());
                    rep.put("zero_circle_center", fmt_c(center));
                    rep.put("zero_circle_radius", radius);
                    rep.put("zero_count", zs.iter().map(|r| r.1 as usize).sum::<usize>());
                    rep.put("zero_max_deviation", max_deviation(&zs, center, *radius));
                    let inner = fact.c2.inner_radius;
                    let c1 = &fact.c1;
                    let (grid, max, mean) = error_grid_csv(
                        center,
                        inner,
                        fit.grid,
                        |w| c1.eval(w) * f.eval(w),
                        |w| fact.eval(w),
                    );
                    rep.put("error_radius", inner);
                    rep.put("grid_points", grid.0.lines().count() - 1);
                    rep.put("grid_max_error", max);
                    rep.put("grid_mean_error", mean);
                    files.push(("zeros.csv", zeros_csv(&zs, center)));
                    files.push(("error_grid.csv", grid));
                }
            }
        }
        Command::Rubinstein { poly, k } => {
            rep.put("command", "rubinstein");
            rep.put("poly", poly);
            rep.put("k", k);
            let p = parse_complex_list(poly).map_err(Error::from)?;
            let res = rubinstein_approx(&p, *k)?;
            let roots: Vec<(Complex64, u32)> = res.roots.iter().map(|&z| (z, 1)).collect();
            let origin = Complex64::new(0.0, 0.0);
            rep.put("degree", res.coeffs.len() - 1);
            rep.put("zero_circle_radius", 1.0);
            rep.put("zero_max_deviation", max_deviation(&roots, origin, 1.0));
            let target = Polynomial(p.clone());
            let (grid, max, mean) =
                error_grid_csv(origin, 0.9, 41, |z| target.eval(z), |z| Ok(res.eval(z)));
            rep.put("error_radius", 0.9);
            rep.put("grid_max_error", max);
            rep.put("grid_mean_error", mean);
            let mut coeffs = Csv::new("n,re,im");
            for (n, c) in res.coeffs.iter().enumerate() {
                coeffs.row(&[n as f64, c.re, c.im]);
            }
            files.push(("coefficients.csv", coeffs));
            files.push(("zeros.csv", zeros_csv(&roots, origin)));
            files.push(("error_grid.csv", grid));
        }
        Command::RmtSample {
            n,
            samples,
            seed,
            x,
            order,
            bins,
        } => {
            rep.put("command", "rmt-sample");
            rep.put("n", n);
            rep.put("samples", samples);
            rep.put("seed", seed);
            rep.put("x", x);
            if !(*x > 0.0 && *x < 1.0) {
                return Err(
                    Error::InvalidArgument(format!("x must lie in (0, 1), got {x}")).into(),
                );
            }
            let draws: Vec<rmt::EigenphaseSample> = (0..*samples)
                .map(|t| rmt::sample_haar_with(*n, *seed, &mut rmt::trial_rng(*seed, t as u64)))
                .collect::<Result<_>>()?;
            let mut phases = Csv::new("sample,index,phase");
            let mut pooled = Vec::with_capacity(n * samples);
            let mut tuples = Vec::with_capacity(*samples);
            for (t, s) in draws.iter().enumerate() {
                for (k, &p) in s.phases.iter().enumerate() {
                    phases.row(&[t as f64, k as f64, p]);
                }
                pooled.extend_from_slice(&s.phases);
                tuples.push(rmt::logderiv_tuple(&rmt::char_poly(s), *x, *order));
            }
            let ks = rmt::ks_uniform(&pooled);
            rep.put("ks_statistic", ks);
            rep.put("ks_critical_1pct", rmt::ks_critical_1pct(pooled.len()));
            let mut hist = Csv::new("component,imaginary,lo,hi,count");
            for b in rmt::tuple_histogram(&tuples, *bins) {
                hist.row(&[
                    b.component as f64,
                    b.imaginary as u8 as f64,
                    b.lo,
                    b.hi,
                    b.count as f64,
                ]);
            }
            files.push(("phases.csv", phases));
            files.push(("tuple_histogram.csv", hist));
        }
        Command::RmtProb {
            function: text,
            r,
            eps,
            n,
            trials,
            seed,
        } => {
            rep.put("command", "rmt-prob");
            let f = function(text, &mut rep)?;
            rep.put("r", r);
            rep.put("n", n);
            rep.put("trials", trials);
            rep.put("seed", seed);
            let eps_list: Vec<f64> = eps
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .ok()
                        .filter(|e| *e > 0.0)
                        .ok_or_else(|| Error::InvalidArgument(format!("bad tolerance '{t}'")))
                })
                .collect::<Result<_>>()?;
            let est = rmt::approx_probability_sweep(&f, *r, &eps_list, *n, *trials, *seed)?;
            let mut table = Csv::new("eps,successes,trials,p_hat,wilson_lo,wilson_hi");
            for (e, p) in eps_list.iter().zip(&est) {
                table.row(&[*e, p.successes as f64, p.trials as f64, p.p_hat, p.lo, p.hi]);
            }
            files.push(("probability.csv", table));
        }
    }
    rep.put("elapsed_ms", started.elapsed().as_millis());
    fs::create_dir_all(out)?;
    fs::write(out.join("report.txt"), &rep.0)?;
    for (name, csv) in &files {
        csv.write(out, name)?;
    }
    print!("{}", rep.0);
    Ok(())
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
