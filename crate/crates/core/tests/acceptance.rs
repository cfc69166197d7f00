//! Acceptance criteria, one PASS/FAIL line each. Tolerances and runtime
//! budgets are fixed here; a criterion that cannot be met is reported as
//! FAIL with its measured values rather than relaxed.

use std::f64::consts::{FRAC_PI_2, PI};
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use abc_contrast::closed_form::{gaussian_g, AbcParameter, Packet1D};
use abc_contrast::cli::config::log_grid;
use abc_contrast::detection::{
    contrast_infinity, contrast_l, contrast_laplace_approx, p_abc_dollard, p_abc_time_integral, p_st_1d,
    st_deficit_1d,
};
use abc_contrast::numerics::{erfc_real, QuadratureSpec};
use abc_contrast::pde_oracle::{contractivity_check, evolve_robin, validate_closed_form, Grid1D};
use abc_contrast::scattering_2d::{
    dp_abc_dtheta_farfield, dp_abc_dtheta_finite_l, dp_st_dtheta, local_maxima, section_totals_lshaped, Packet2D,
    ScreenGeometry,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Outcome = Result<(bool, String), String>;

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn im(kappa: f64) -> AbcParameter {
    AbcParameter::imaginary(kappa).expect("kappa > 0")
}

fn c1_st_probability() -> Outcome {
    let p = Packet1D::gaussian(20.0);
    let st = p_st_1d(&p, &spec()).map_err(|e| e.to_string())?;
    let exact = 1.0 - 0.5 * erfc_real(20.0);
    let deficit = st_deficit_1d(&p, &spec()).map_err(|e| e.to_string())?.value;
    // Leading asymptotic form of ½erfc(k0).
    let k0: f64 = 20.0;
    let asymptotic = (-k0 * k0).exp() / (2.0 * k0 * PI.sqrt());
    let rel = (deficit - asymptotic).abs() / deficit;
    let ok = (st.value - exact).abs() <= f64::EPSILON && rel < 0.01;
    Ok((
        ok,
        format!(
            "P_ST = {:.17}, 1 - erfc(20)/2 = {exact:.17}; deficit {deficit:.6e} vs asymptotic {asymptotic:.6e}, \
             relative gap {rel:.3e} (limit 1e-2)",
            st.value
        ),
    ))
}

fn c2_fig1() -> Outcome {
    let ims = log_grid(1.0, 400.0, 121);
    let res = [0.0, 5.0, 10.0, 20.0];
    let p = Packet1D::gaussian(20.0);
    let points: Vec<(f64, f64)> = res.iter().flat_map(|&r| ims.iter().map(move |&i| (r, i))).collect();
    let rows: Vec<(f64, f64, f64, f64)> = points
        .par_iter()
        .map(|&(r, i)| {
            let beta = AbcParameter::physical(Complex64::new(r, i)).map_err(|e| e.to_string())?;
            let cinf = contrast_infinity(&p, &beta, &spec()).map_err(|e| e.to_string())?;
            let cl = contrast_l(&p, &beta, 2.0, &spec()).map_err(|e| e.to_string())?;
            Ok((r, i, cinf.value, cl.contrast))
        })
        .collect::<Result<_, String>>()?;
    let argmin = rows
        .iter()
        .filter(|r| r.0 == 0.0)
        .min_by(|a, b| a.2.total_cmp(&b.2))
        .map(|r| r.1)
        .unwrap_or(f64::NAN);
    let (worst, at) = rows
        .iter()
        .map(|r| ((r.3 - r.2).abs(), (r.0, r.1)))
        .fold((0.0, (0.0, 0.0)), |a, b| if b.0 > a.0 { b } else { a });
    let ok = (18.0..=22.0).contains(&argmin) && worst < 1e-3;
    Ok((
        ok,
        format!(
            "Re beta = 0 minimum at Im beta = {argmin:.3} (want [18, 22]); max |C_2 - C_inf| = {worst:.4e} \
             at beta = {}+{}i (limit 1e-3); erfc(2)/2 = {:.4e}",
            at.0,
            at.1,
            0.5 * erfc_real(2.0)
        ),
    ))
}

fn c3_fig2_floor() -> Outcome {
    let p = Packet1D::superposition(5.0, 1000.0);
    let ims = log_grid(1.0, 2000.0, 121);
    let rows: Vec<(f64, f64, f64)> = ims
        .par_iter()
        .map(|&i| {
            let beta = im(i);
            let c = contrast_infinity(&p, &beta, &spec()).map_err(|e| e.to_string())?;
            Ok((i, c.value, contrast_laplace_approx(5.0, 1000.0, beta.beta())))
        })
        .collect::<Result<_, String>>()?;
    let floor = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let track = rows
        .iter()
        .filter(|r| (2.0..=200.0).contains(&r.0))
        .map(|r| (r.1 - r.2).abs())
        .fold(0.0, f64::max);
    let ok = (0.48..=0.52).contains(&floor) && track < 0.01;
    Ok((
        ok,
        format!("min C_inf = {floor:.5} (want [0.48, 0.52]); max |Laplace - exact| on [2, 200] = {track:.4e} (limit 1e-2)"),
    ))
}

fn c4_oracle() -> Outcome {
    let levels = [(2e-3, 4e-4), (1e-3, 2e-4), (5e-4, 1e-4)];
    let beta = Complex64::new(0.0, 5.0);
    let errs: Vec<f64> = levels
        .par_iter()
        .map(|&(h, dt)| {
            let g = Grid1D::for_packet(5.0, 10.0, 4.0, h, dt).map_err(|e| e.to_string())?;
            validate_closed_form(5.0, beta, 10.0, &g, &[1.0, 2.0, 4.0]).map_err(|e| e.to_string())
        })
        .collect::<Result<_, String>>()?;
    let ratios = [errs[0] / errs[1], errs[1] / errs[2]];
    let ok = errs[2] < 1e-4 && ratios.iter().all(|r| (3.0..=5.0).contains(r));
    Ok((
        ok,
        format!(
            "errors {:.3e}, {:.3e}, {:.3e} at h = 2e-3, 1e-3, 5e-4 (dt = h/5); ratios {:.2}, {:.2} (want ~4); \
             finest < 1e-4",
            errs[0], errs[1], errs[2], ratios[0], ratios[1]
        ),
    ))
}

fn c5_dual_formula() -> Outcome {
    let cases: Vec<(f64, f64)> = [2.0, 5.0, 10.0]
        .iter()
        .flat_map(|&k| [1.0, 5.0, 20.0].map(move |b| (k, b)))
        .collect();
    let diffs: Vec<f64> = cases
        .par_iter()
        .map(|&(k0, b)| {
            let p = Packet1D::gaussian(k0);
            let t = p_abc_time_integral(&p, &im(b), 10.0, &spec()).map_err(|e| e.to_string())?;
            let d = p_abc_dollard(&p, &im(b), 10.0, &spec()).map_err(|e| e.to_string())?;
            Ok((t.raw - d.raw).abs())
        })
        .collect::<Result<_, String>>()?;
    let worst = diffs.iter().copied().fold(0.0, f64::max);
    Ok((
        worst < 1e-6,
        format!("max |time integral - momentum form| over k0 x Im beta = {{2,5,10}} x {{1,5,20}}, L = 10: {worst:.3e} (limit 1e-6)"),
    ))
}

fn c6_contractivity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let grid = Grid1D::new(-25.0, 8.0, 3301, 2e-3).map_err(|e| e.to_string())?;
    let state = |rng: &mut ChaCha8Rng| {
        let k0 = rng.random_range(-5.0..5.0);
        let x0 = rng.random_range(-3.0..3.0);
        let amp = Complex64::from_polar(rng.random_range(0.5..1.5), rng.random_range(0.0..6.3));
        grid.sample(|x| amp * gaussian_g(x - x0) * Complex64::from_polar(1.0, k0 * x))
    };
    let mut worst_increase = f64::NEG_INFINITY;
    for _ in 0..10 {
        let a = state(&mut rng);
        let b = state(&mut rng);
        let beta = Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(0.1..10.0));
        let r = contractivity_check(&a, &b, beta, &grid, 2.0).map_err(|e| e.to_string())?;
        worst_increase = worst_increase.max(r.max_increase / r.initial_distance.powi(2));
    }

    // Per-step loss against the trapezoid rule for the boundary flux: the gap
    // is O(dt³) per step, so halving dt should shrink it eightfold.
    let step_gap = |dt: f64| -> Result<f64, String> {
        let g = Grid1D::for_packet(2.0, 5.0, 3.0, 4e-3, dt).map_err(|e| e.to_string())?;
        let psi0 = g.sample(|x| Complex64::from_polar(gaussian_g(x), 2.0 * x));
        let (_, led) = evolve_robin(&psi0, Complex64::new(0.0, 2.0), &g, 3.0).map_err(|e| e.to_string())?;
        let h = led.times[1] - led.times[0];
        Ok((0..led.norms.len() - 1)
            .map(|n| {
                let loss = led.norms[n] - led.norms[n + 1];
                (loss - 0.5 * h * (led.absorbed_density[n] + led.absorbed_density[n + 1])).abs()
            })
            .fold(0.0, f64::max))
    };
    let coarse = step_gap(4e-3)?;
    let fine = step_gap(2e-3)?;
    let order = (coarse / fine).log2();
    let ok = worst_increase <= 1e-13 && (2.6..=3.4).contains(&order);
    Ok((
        ok,
        format!(
            "10 random pairs: largest relative step increase of |a - b|^2 = {worst_increase:.3e} (want <= 0); \
             per-step loss vs trapezoid flux gap {coarse:.3e} -> {fine:.3e} on dt halving, observed order {order:.2} (want 3)"
        ),
    ))
}

fn c7_fig5() -> Outcome {
    let p = Packet2D::new(-1.0, 3f64.sqrt()).map_err(|e| e.to_string())?;
    let beta = Complex64::new(0.0, 2.0);
    let deltas = [-0.2, -0.1, 0.0, 0.1, 0.2];
    let thetas: Vec<f64> = (0..1441).map(|j| -PI + 2.0 * PI * j as f64 / 1440.0).collect();

    // ST evaluated separately for each α; the operation has no α argument so
    // every pass must reproduce the same bits.
    let st_runs: Vec<Vec<u64>> = deltas
        .iter()
        .map(|_| {
            thetas
                .iter()
                .map(|&t| dp_st_dtheta(&p, t, &spec()).map(f64::to_bits).map_err(|e| e.to_string()))
                .collect()
        })
        .collect::<Result<_, String>>()?;
    let st_identical = st_runs.windows(2).all(|w| w[0] == w[1]);

    let mut maxima = Vec::new();
    let mut peak_theta = Vec::new();
    let mut marker_gap: f64 = 0.0;
    for &d in &deltas {
        let alpha = FRAC_PI_2 + d;
        let geom = ScreenGeometry::Inclined { alpha, l: 15.0 };
        let grid: Vec<f64> = (1..720).map(|j| alpha - PI + PI * j as f64 / 720.0).collect();
        let far: Vec<f64> = grid
            .par_iter()
            .map(|&t| dp_abc_dtheta_farfield(&p, t, beta, alpha, &spec()).map_err(|e| e.to_string()))
            .collect::<Result<_, String>>()?;
        let (i, m) = far
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |a, (i, &v)| if v > a.1 { (i, v) } else { a });
        maxima.push(m);
        peak_theta.push(grid[i]);
        let markers: Vec<usize> = (0..grid.len()).step_by(24).filter(|&j| geom.admits(grid[j])).collect();
        let gaps: Vec<f64> = markers
            .par_iter()
            .map(|&j| {
                dp_abc_dtheta_finite_l(&p, grid[j], beta, &geom, &spec())
                    .map(|v| (v - far[j]).abs())
                    .map_err(|e| e.to_string())
            })
            .collect::<Result<_, String>>()?;
        marker_gap = gaps.iter().copied().fold(marker_gap, f64::max);
    }
    let mut min_value_sep = f64::INFINITY;
    let mut min_theta_sep = f64::INFINITY;
    for i in 0..deltas.len() {
        for j in i + 1..deltas.len() {
            min_value_sep = min_value_sep.min((maxima[i] - maxima[j]).abs());
            min_theta_sep = min_theta_sep.min((peak_theta[i] - peak_theta[j]).abs());
        }
    }
    let ok = st_identical && min_value_sep > 0.05 && marker_gap < 1e-3;
    let list: Vec<String> = maxima.iter().map(|m| format!("{m:.4}")).collect();
    Ok((
        ok,
        format!(
            "ST bitwise identical across alpha: {st_identical}; far-field maxima [{}] for delta alpha = -0.2..0.2, \
             smallest pairwise gap {min_value_sep:.4} (want > 0.05; peak positions differ by >= {min_theta_sep:.4} rad); \
             max |L=15 marker - far field| = {marker_gap:.3e} (limit 1e-3)",
            list.join(", ")
        ),
    ))
}

fn c8_fig7() -> Outcome {
    let p = Packet2D::new(9.66, 2.59).map_err(|e| e.to_string())?;
    let beta = Complex64::new(0.0, 2.59);
    let geom = ScreenGeometry::LShaped { l: 50.0 };
    let thetas: Vec<f64> = (0..721)
        .map(|j| -FRAC_PI_2 + 1.5 * PI * j as f64 / 720.0)
        .filter(|&t| geom.admits(t))
        .collect();
    let abc: Vec<f64> = thetas
        .par_iter()
        .map(|&t| dp_abc_dtheta_finite_l(&p, t, beta, &geom, &spec()).map_err(|e| e.to_string()))
        .collect::<Result<_, String>>()?;
    let st: Vec<f64> = thetas
        .par_iter()
        .map(|&t| dp_st_dtheta(&p, t, &spec()).map_err(|e| e.to_string()))
        .collect::<Result<_, String>>()?;
    let abc_peaks = local_maxima(&abc);
    let st_peaks = local_maxima(&st);
    let s = section_totals_lshaped(&p, beta, 100.0, &spec()).map_err(|e| e.to_string())?;
    let ok = abc_peaks.len() == 2
        && st_peaks.len() == 1
        && (0.63..=0.69).contains(&s.vertical)
        && (0.30..=0.36).contains(&s.horizontal);
    let at = |idx: &[usize]| idx.iter().map(|&i| format!("{:.3}", thetas[i])).collect::<Vec<_>>().join(", ");
    Ok((
        ok,
        format!(
            "L = 50: ABC maxima {} at [{}], ST maxima {} at [{}]; L = 100 sections: vertical {:.5} (want [0.63, 0.69]), \
             horizontal {:.5} (want [0.30, 0.36])",
            abc_peaks.len(),
            at(&abc_peaks),
            st_peaks.len(),
            at(&st_peaks),
            s.vertical,
            s.horizontal
        ),
    ))
}

fn c9_limits() -> Outcome {
    let p = Packet1D::gaussian(5.0);
    let mut parts = Vec::new();
    let mut ok = true;
    for kappa in [1e-8, 1e6] {
        let t = p_abc_time_integral(&p, &im(kappa), 10.0, &spec()).map_err(|e| e.to_string())?;
        let d = p_abc_dollard(&p, &im(kappa), 10.0, &spec()).map_err(|e| e.to_string())?;
        ok &= t.value < 1e-6;
        parts.push(format!("beta = {kappa:e}i: P_ABC = {:.4e} (momentum form {:.4e})", t.value, d.value));
    }
    Ok((ok, format!("{} (limit 1e-6)", parts.join("; "))))
}

fn c10_negative_momentum() -> Outcome {
    let p = Packet1D::gaussian(-5.0);
    let beta = im(5.0);
    let cinf = contrast_infinity(&p, &beta, &spec()).map_err(|e| e.to_string())?;
    let pabc = p_abc_time_integral(&p, &beta, 10.0, &spec()).map_err(|e| e.to_string())?;
    let ok = cinf.value < 1e-6 && pabc.value < 1e-6;
    Ok((
        ok,
        format!(
            "k0 = -5, beta = 5i: C_inf = {:.3e}, P_ABC(L = 10) = {:.3e} (limit 1e-6)",
            cinf.value, pabc.value
        ),
    ))
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 gaussian ST probability", Duration::from_secs(1), c1_st_probability),
        ("2 fig1 contrast minimum and L=2 markers", Duration::from_secs(120), c2_fig1),
        ("3 fig2 contrast floor and Laplace estimate", Duration::from_secs(120), c3_fig2_floor),
        ("4 closed form vs Crank-Nicolson oracle", Duration::from_secs(300), c4_oracle),
        ("5 dual formula identity", Duration::from_secs(60), c5_dual_formula),
        ("6 contractivity and norm ledger", Duration::from_secs(60), c6_contractivity),
        ("7 fig5 inclined screen", Duration::from_secs(300), c7_fig5),
        ("8 fig7 L-shaped screen", Duration::from_secs(600), c8_fig7),
        ("9 Neumann and Dirichlet limits", Duration::from_secs(60), c9_limits),
        ("10 negative momentum packet", Duration::from_secs(60), c10_negative_momentum),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|_| Err("panicked".to_owned()));
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok((ok, d)) => (ok && elapsed <= budget, d),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {name}: {detail}; runtime {:.2} s (budget {} s)",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
