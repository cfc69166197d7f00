//! Cross-checks between the closed forms, the quadrature routes and the PDE
//! oracle, run as one suite. A failing or erroring check is recorded and the
//! suite moves on.

use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_form::{gaussian_g, AbcParameter, Packet1D};
use crate::detection::{p_abc_dollard_with, p_abc_time_integral};
use crate::error::Result;
use crate::numerics::QuadratureSpec;
use crate::pde_oracle::{contractivity_check, evolve_robin, validate_closed_form, Grid1D};
use crate::scattering_2d::{section_totals_lshaped, Packet2D};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub threshold: f64,
    pub seconds: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    /// Smaller problems; the whole suite finishes in a few seconds.
    pub quick: bool,
    /// Seed for the random state pairs of the contractivity check.
    pub seed: u64,
    pub spec: QuadratureSpec,
    /// Replaces `ρ_β` in the momentum-space route by a corrupted amplitude
    /// (numerator sign of `iβ` flipped). Used to confirm the suite notices.
    #[doc(hidden)]
    pub corrupt_rho: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            quick: false,
            seed: 0x5eed,
            spec: QuadratureSpec::default(),
            corrupt_rho: false,
        }
    }
}

/// Outcome of one check before timing is attached.
struct Outcome {
    measured: f64,
    threshold: f64,
    detail: String,
}

impl Outcome {
    fn below(measured: f64, threshold: f64, detail: String) -> Self {
        Self {
            measured,
            threshold,
            detail,
        }
    }
}

fn run_check<F>(name: &str, f: F) -> CheckResult
where
    F: FnOnce() -> Result<Outcome>,
{
    let start = Instant::now();
    let caught = panic::catch_unwind(AssertUnwindSafe(f));
    let seconds = start.elapsed().as_secs_f64();
    let (passed, measured, threshold, detail) = match caught {
        Ok(Ok(o)) => (o.measured <= o.threshold, o.measured, o.threshold, o.detail),
        Ok(Err(e)) => (false, f64::NAN, f64::NAN, format!("error: {e}")),
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| p.downcast_ref::<&str>().copied())
                .unwrap_or("unknown panic");
            (false, f64::NAN, f64::NAN, format!("panic: {msg}"))
        }
    };
    CheckResult {
        name: name.to_owned(),
        passed: passed && measured.is_finite(),
        measured,
        threshold,
        seconds,
        detail,
    }
}

fn closed_form_check(quick: bool) -> Result<Outcome> {
    let (k0, kappa, l, times, h, dt, tol): (f64, f64, f64, &[f64], f64, f64, f64) = if quick {
        (2.0, 2.0, 5.0, &[0.5, 1.0, 2.0], 2e-3, 4e-4, 1e-4)
    } else {
        (5.0, 5.0, 10.0, &[1.0, 2.0, 4.0], 1e-3, 2e-4, 5e-4)
    };
    let t_end = times.iter().copied().fold(0.0, f64::max);
    let grid = Grid1D::for_packet(k0, l, t_end, h, dt)?;
    let err = validate_closed_form(k0, Complex64::new(0.0, kappa), l, &grid, times)?;
    Ok(Outcome::below(
        err,
        tol,
        format!("k0={k0} beta={kappa}i L={l} h={h:e} dt={dt:e}: max relative L2 error"),
    ))
}

/// `ρ` with the sign of `iβ` in the numerator flipped.
#[allow(clippy::eq_op)]
fn corrupted_rho(k: f64, beta: Complex64) -> Result<Complex64> {
    let i = Complex64::i();
    Ok((k - i * beta) / (k - i * beta))
}

fn dollard_check(opts: &SuiteOptions) -> Result<Outcome> {
    let cases: Vec<(f64, f64)> = if opts.quick {
        vec![(5.0, 5.0)]
    } else {
        [2.0, 5.0, 10.0]
            .iter()
            .flat_map(|&k| [1.0, 5.0, 20.0].map(move |b| (k, b)))
            .collect()
    };
    let l = 10.0;
    let spec = opts.spec;
    let corrupt = opts.corrupt_rho;
    let diffs: Vec<Result<(f64, f64, f64)>> = cases
        .par_iter()
        .map(|&(k0, kappa)| {
            let p = Packet1D::gaussian(k0);
            let beta = AbcParameter::imaginary(kappa)?;
            let t = p_abc_time_integral(&p, &beta, l, &spec)?;
            let d = if corrupt {
                p_abc_dollard_with(&p, &beta, l, &spec, corrupted_rho)?
            } else {
                p_abc_dollard_with(&p, &beta, l, &spec, crate::closed_form::rho_beta)?
            };
            Ok((k0, kappa, (t.raw - d.raw).abs()))
        })
        .collect();
    let mut worst = (0.0, 0.0, 0.0);
    for d in diffs {
        let d = d?;
        if d.2 >= worst.2 {
            worst = d;
        }
    }
    Ok(Outcome::below(
        worst.2,
        1e-6,
        format!(
            "{} cases at L={l}; worst at k0={} beta={}i",
            cases.len(),
            worst.0,
            worst.1
        ),
    ))
}

fn random_state(rng: &mut ChaCha8Rng, grid: &Grid1D) -> Vec<Complex64> {
    let k0 = rng.random_range(-5.0..5.0);
    let x0 = rng.random_range(-3.0..3.0);
    let w = rng.random_range(0.7..1.5);
    let amp = Complex64::from_polar(rng.random_range(0.5..1.5), rng.random_range(0.0..6.3));
    grid.sample(|x| amp * gaussian_g((x - x0) / w) * Complex64::from_polar(1.0, k0 * x))
}

fn contractivity(opts: &SuiteOptions) -> Result<Outcome> {
    let pairs = if opts.quick { 3 } else { 10 };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let grid = Grid1D::new(-25.0, 8.0, 3301, 2e-3)?;
    let mut jobs = Vec::with_capacity(pairs);
    for _ in 0..pairs {
        let a = random_state(&mut rng, &grid);
        let b = random_state(&mut rng, &grid);
        let beta = Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(0.1..10.0));
        jobs.push((a, b, beta));
    }
    let reports: Vec<_> = jobs
        .par_iter()
        .map(|(a, b, beta)| contractivity_check(a, b, *beta, &grid, 2.0))
        .collect::<Result<_>>()?;
    // Increases are compared with the squared distance they act on.
    let max_increase = reports
        .iter()
        .map(|r| r.max_increase / r.initial_distance.powi(2).max(f64::MIN_POSITIVE))
        .fold(f64::NEG_INFINITY, f64::max);
    let max_residual = reports.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    // A single increase beyond round-off fails the check outright.
    let measured = if max_increase > 1e-13 { f64::INFINITY } else { max_residual };
    Ok(Outcome::below(
        measured,
        1e-8,
        format!(
            "{pairs} random pairs (seed {}); largest relative step increase {max_increase:e}; \
             measured is the worst identity residual",
            opts.seed
        ),
    ))
}

fn norm_ledger(opts: &SuiteOptions) -> Result<Outcome> {
    let (k0, l, t) = if opts.quick { (2.0, 5.0, 3.0) } else { (5.0, 10.0, 4.0) };
    let grid = Grid1D::for_packet(k0, l, t, 4e-3, 1e-3)?;
    let psi0 = grid.sample(|x| Complex64::from_polar(gaussian_g(x), k0 * x));

    let (_, absorbing) = evolve_robin(&psi0, Complex64::new(0.0, k0), &grid, t)?;
    let n0 = absorbing.norms[0];
    let ledger_gap = absorbing
        .norms
        .iter()
        .zip(&absorbing.cumulative)
        .map(|(n, c)| (n + c - n0).abs())
        .fold(0.0, f64::max);

    let (_, neumann) = evolve_robin(&psi0, Complex64::new(0.0, 0.0), &grid, t)?;
    let drift = neumann
        .norms
        .iter()
        .map(|n| (n - neumann.norms[0]).abs())
        .fold(0.0, f64::max);

    let absorbed = absorbing.cumulative.last().copied().unwrap_or(0.0);
    Ok(Outcome::below(
        ledger_gap.max(drift),
        1e-10,
        format!(
            "k0={k0} L={l} t={t}: |norm + absorbed - norm0| max {ledger_gap:e}, \
             Neumann drift {drift:e}, absorbed {absorbed:.6}"
        ),
    ))
}

fn section_totals(opts: &SuiteOptions) -> Result<Outcome> {
    let l = if opts.quick { 15.0 } else { 100.0 };
    let p = Packet2D::new(9.66, 2.59)?;
    let s = section_totals_lshaped(&p, Complex64::new(0.0, 2.59), l, &opts.spec)?;
    // Distance outside the bands [0.63, 0.69] and [0.30, 0.36].
    let outside = |v: f64, lo: f64, hi: f64| (lo - v).max(v - hi).max(0.0);
    let miss = outside(s.vertical, 0.63, 0.69).max(outside(s.horizontal, 0.30, 0.36));
    Ok(Outcome::below(
        miss,
        0.0,
        format!(
            "L-shaped screen L={l}: vertical {:.5}, horizontal {:.5} \
             (bands [0.63, 0.69], [0.30, 0.36])",
            s.vertical, s.horizontal
        ),
    ))
}

/// Runs every check and returns one result per check, in a fixed order.
pub fn run_suite(opts: &SuiteOptions) -> Vec<CheckResult> {
    vec![
        run_check("closed_form_vs_oracle", || closed_form_check(opts.quick)),
        run_check("dollard_agreement", || dollard_check(opts)),
        run_check("contractivity", || contractivity(opts)),
        run_check("norm_ledger", || norm_ledger(opts)),
        run_check("section_totals", || section_totals(opts)),
    ]
}
