use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{layer_file, AngularConfig, EvolveConfig, GeometryKind, SweepConfig, ValidateConfig};
use super::output::{Cell, Table, UNITS_NOTE};
use super::{
    config_err, AngularArgs, CliError, Command, CommonArgs, EvolveArgs, Preset, SweepArgs, ValidateArgs,
    EXIT_NONCONVERGENCE, EXIT_OK, EXIT_VALIDATION,
};
use crate::closed_form::{psi_tg, AbcParameter, Packet1D};
use crate::detection::{contrast_infinity, contrast_l, contrast_laplace_approx, p_st_1d};
use crate::numerics::QuadratureSpec;
use crate::scattering_2d::{
    dp_abc_dtheta_farfield, dp_abc_dtheta_finite_l, dp_st_dtheta, local_maxima, Packet2D, ScreenGeometry,
};
use crate::validate::{run_suite, SuiteOptions};

const VERSION: &str = env!("CARGO_PKG_VERSION");

pub(super) fn dispatch(cmd: Command) -> Result<i32, CliError> {
    let jobs = match &cmd {
        Command::ContrastSweep(a) => a.common.jobs,
        Command::AngularDensity(a) => a.common.jobs,
        Command::Evolve2d(a) => a.common.jobs,
        Command::Validate(a) => a.common.jobs,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| config_err(format!("jobs: {e}")))?;
    pool.install(|| match cmd {
        Command::ContrastSweep(a) => contrast_sweep(a),
        Command::AngularDensity(a) => angular_density(a),
        Command::Evolve2d(a) => evolve_2d(a),
        Command::Validate(a) => validate(a),
    })
}

fn resolve<C>(common: &CommonArgs, command: &str, preset: fn(Preset) -> Option<C>) -> Result<C, CliError>
where
    C: Default + Serialize + DeserializeOwned,
{
    let base = match common.preset {
        Some(p) => preset(p).ok_or_else(|| config_err(format!("preset {p:?} does not apply to {command}")))?,
        None => C::default(),
    };
    layer_file(base, common.config.as_deref())
}

fn apply_tolerances(spec: &mut QuadratureSpec, common: &CommonArgs) {
    if let Some(a) = common.abs_tol {
        spec.abs_tol = a;
    }
    if let Some(r) = common.rel_tol {
        spec.rel_tol = r;
    }
}

fn header(command: &str, quick: bool, config: &impl Serialize) -> Value {
    json!({
        "command": command,
        "version": VERSION,
        "units": UNITS_NOTE,
        "quick": quick,
        "config": config,
    })
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn status_of<E: std::fmt::Display>(e: E) -> Cell {
    Cell::Text(format!("error: {e}"))
}

pub fn resolve_sweep(a: &SweepArgs) -> Result<SweepConfig, CliError> {
    let mut c = resolve(&a.common, "contrast-sweep", SweepConfig::preset)?;
    set(&mut c.k0, a.k0);
    set(&mut c.k1, a.k1.clone());
    set(&mut c.re_beta, a.re_beta.clone());
    set(&mut c.im_beta, a.im_beta.clone());
    set(&mut c.im_beta_min, a.im_beta_min);
    set(&mut c.im_beta_max, a.im_beta_max);
    set(&mut c.im_beta_points, a.im_beta_points);
    if a.l.is_some() {
        c.l = a.l;
    }
    if a.laplace {
        c.laplace = true;
    }
    if a.no_laplace {
        c.laplace = false;
    }
    apply_tolerances(&mut c.quadrature, &a.common);
    if a.common.quick && c.im_beta.is_empty() {
        c.im_beta_points = c.im_beta_points.min(25);
    }
    c.validate()?;
    Ok(c)
}

/// Computes the sweep table; the flag is set when any row failed numerically.
pub fn sweep_table(c: &SweepConfig) -> (Table, bool) {
    let mut table = Table::new(vec![
        "k0",
        "k1",
        "re_beta",
        "im_beta",
        "contrast_infinity",
        "contrast_l",
        "p_st",
        "p_abc",
        "contrast_laplace",
        "quadrature_error",
        "status",
    ]);
    let k1s: Vec<Option<f64>> = if c.k1.is_empty() {
        vec![None]
    } else {
        c.k1.iter().copied().map(Some).collect()
    };
    let ims = c.im_grid();
    let mut points = Vec::new();
    for &k1 in &k1s {
        for &re in &c.re_beta {
            for &im in &ims {
                points.push((k1, re, im));
            }
        }
    }
    let spec = c.quadrature;
    let rows: Vec<(Vec<Cell>, bool)> = points
        .par_iter()
        .map(|&(k1, re, im)| {
            let lead = vec![Cell::Num(c.k0), k1.into(), re.into(), im.into()];
            let p = match k1 {
                Some(k1) => Packet1D::superposition(c.k0, k1),
                None => Packet1D::gaussian(c.k0),
            };
            let computed = (|| -> crate::Result<Vec<Cell>> {
                let beta = AbcParameter::physical(Complex64::new(re, im))?;
                let cinf = contrast_infinity(&p, &beta, &spec)?;
                let (cl, pst, pabc, err) = match c.l {
                    Some(l) => {
                        let r = contrast_l(&p, &beta, l, &spec)?;
                        (Some(r.contrast), r.p_st, Some(r.p_abc), r.quadrature_error + cinf.error)
                    }
                    None => {
                        let st = p_st_1d(&p, &spec)?;
                        (None, st.value, None, st.error + cinf.error)
                    }
                };
                let laplace = match k1 {
                    Some(k1) if c.laplace => Some(contrast_laplace_approx(c.k0, k1, beta.beta())),
                    _ => None,
                };
                Ok(vec![
                    cinf.value.into(),
                    cl.into(),
                    pst.into(),
                    pabc.into(),
                    laplace.into(),
                    err.into(),
                    "ok".into(),
                ])
            })();
            match computed {
                Ok(rest) => (lead.into_iter().chain(rest).collect(), false),
                Err(e) => {
                    let mut row = lead;
                    row.extend(std::iter::repeat(Cell::Empty).take(6));
                    row.push(status_of(e));
                    (row, true)
                }
            }
        })
        .collect();
    let mut failed = false;
    for (row, f) in rows {
        failed |= f;
        table.push(row);
    }
    (table, failed)
}

fn contrast_sweep(a: SweepArgs) -> Result<i32, CliError> {
    let c = resolve_sweep(&a)?;
    let (table, failed) = sweep_table(&c);
    table.write_to(&header("contrast-sweep", a.common.quick, &c), a.common.format, a.common.output.as_deref())?;
    Ok(if failed { EXIT_NONCONVERGENCE } else { EXIT_OK })
}

pub fn resolve_angular(a: &AngularArgs) -> Result<AngularConfig, CliError> {
    let mut c = resolve(&a.common, "angular-density", AngularConfig::preset)?;
    set(&mut c.geometry, a.geometry);
    set(&mut c.k0x, a.k0x);
    set(&mut c.k0y, a.k0y);
    set(&mut c.re_beta, a.re_beta);
    set(&mut c.im_beta, a.im_beta);
    set(&mut c.alpha, a.alpha.clone());
    set(&mut c.l, a.l.clone());
    if a.theta_min.is_some() {
        c.theta_min = a.theta_min;
    }
    if a.theta_max.is_some() {
        c.theta_max = a.theta_max;
    }
    set(&mut c.samples, a.samples);
    set(&mut c.finite_l_stride, a.finite_l_stride);
    if a.no_farfield {
        c.farfield = false;
    }
    apply_tolerances(&mut c.quadrature, &a.common);
    if a.common.quick {
        c.samples = c.samples.min(181);
        c.finite_l_stride = c.finite_l_stride.max(4);
    }
    c.validate()?;
    Ok(c)
}

/// One `(α, L)` block of the angular table.
#[derive(Debug, Clone, Copy)]
struct Block {
    alpha: Option<f64>,
    l: Option<f64>,
    geometry: ScreenGeometry,
}

fn blocks(c: &AngularConfig) -> Vec<Block> {
    let ls: Vec<Option<f64>> = if c.l.is_empty() {
        vec![None]
    } else {
        c.l.iter().copied().map(Some).collect()
    };
    let mut out = Vec::new();
    match c.geometry {
        GeometryKind::Inclined => {
            for &alpha in &c.alpha {
                for &l in &ls {
                    out.push(Block {
                        alpha: Some(alpha),
                        l,
                        // L does not enter the admissible range; any valid value will do.
                        geometry: ScreenGeometry::Inclined {
                            alpha,
                            l: l.unwrap_or(1.0),
                        },
                    });
                }
            }
        }
        GeometryKind::LShaped => {
            for &l in &ls {
                out.push(Block {
                    alpha: None,
                    l,
                    geometry: ScreenGeometry::LShaped { l: l.unwrap_or(1.0) },
                });
            }
        }
    }
    out
}

/// The shared θ grid: the configured range or the closure of every block's
/// admissible interval.
fn theta_grid(c: &AngularConfig) -> Vec<f64> {
    let (lo, hi) = match c.geometry {
        GeometryKind::Inclined => {
            let lo = c.alpha.iter().copied().fold(f64::INFINITY, f64::min) - PI;
            let hi = c.alpha.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (lo, hi)
        }
        GeometryKind::LShaped => (-PI / 2.0, PI),
    };
    let lo = c.theta_min.unwrap_or(lo);
    let hi = c.theta_max.unwrap_or(hi);
    match c.samples {
        1 => vec![0.5 * (lo + hi)],
        n => (0..n).map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64).collect(),
    }
}

/// Angular table plus a human-readable peak summary per block.
pub fn angular_table(c: &AngularConfig) -> (Table, Vec<String>, bool) {
    let p = Packet2D {
        k0x: c.k0x,
        k0y: c.k0y,
    };
    let beta = Complex64::new(c.re_beta, c.im_beta);
    let spec = c.quadrature;
    let thetas = theta_grid(c);
    let blocks = blocks(c);

    // ST does not depend on the screen, so one column serves every block.
    let st: Vec<crate::Result<f64>> = thetas.par_iter().map(|&t| dp_st_dtheta(&p, t, &spec)).collect();

    let tasks: Vec<(usize, usize)> = (0..blocks.len())
        .flat_map(|b| (0..thetas.len()).map(move |j| (b, j)))
        .collect();
    let cells: Vec<(Cell, Cell, Cell, bool)> = tasks
        .par_iter()
        .map(|&(b, j)| {
            let blk = &blocks[b];
            let theta = thetas[j];
            let mut err: Option<crate::Error> = st[j].as_ref().err().cloned();
            let admitted = blk.geometry.admits(theta);
            let mut eval = |r: crate::Result<f64>| match r {
                Ok(v) => Cell::Num(v),
                Err(e) => {
                    err.get_or_insert(e);
                    Cell::Empty
                }
            };
            let (far, finite) = if admitted {
                let far = match blk.alpha {
                    Some(alpha) if c.farfield => eval(dp_abc_dtheta_farfield(&p, theta, beta, alpha, &spec)),
                    _ => Cell::Empty,
                };
                let finite = match blk.l {
                    Some(_) if j % c.finite_l_stride == 0 => {
                        eval(dp_abc_dtheta_finite_l(&p, theta, beta, &blk.geometry, &spec))
                    }
                    _ => Cell::Empty,
                };
                (far, finite)
            } else {
                (Cell::Empty, Cell::Empty)
            };
            let failed = err.is_some();
            let status = match err {
                Some(e) => status_of(e),
                None if !admitted => "out_of_domain".into(),
                None => "ok".into(),
            };
            (far, finite, status, failed)
        })
        .collect();

    let geometry_name = match c.geometry {
        GeometryKind::Inclined => "inclined",
        GeometryKind::LShaped => "l_shaped",
    };
    let mut table = Table::new(vec![
        "geometry",
        "alpha",
        "l",
        "theta",
        "dp_st",
        "dp_abc_farfield",
        "dp_abc_finite_l",
        "status",
    ]);
    let mut any_failed = false;
    let mut summary = Vec::new();
    let n = thetas.len();
    for (b, blk) in blocks.iter().enumerate() {
        let mut st_col = Vec::with_capacity(n);
        let mut far_col = Vec::with_capacity(n);
        let mut fin_col = Vec::new();
        let mut fin_theta = Vec::new();
        for j in 0..n {
            let (far, fin, status, failed) = &cells[b * n + j];
            any_failed |= failed;
            let st_cell: Cell = st[j].as_ref().ok().copied().into();
            st_col.push(st[j].as_ref().copied().unwrap_or(f64::NAN));
            far_col.push(if let Cell::Num(v) = far { *v } else { f64::NAN });
            if blk.l.is_some() && j % c.finite_l_stride == 0 {
                fin_col.push(if let Cell::Num(v) = fin { *v } else { f64::NAN });
                fin_theta.push(thetas[j]);
            }
            table.push(vec![
                geometry_name.into(),
                blk.alpha.into(),
                blk.l.into(),
                thetas[j].into(),
                st_cell,
                far.clone(),
                fin.clone(),
                status.clone(),
            ]);
        }
        let peaks = |vals: &[f64], th: &[f64]| -> String {
            let idx = local_maxima(vals);
            let list: Vec<String> = idx.iter().map(|&i| format!("{:.4}", th[i])).collect();
            format!("{} [{}]", idx.len(), list.join(", "))
        };
        let mut line = format!(
            "alpha={} L={}: st peaks {}",
            blk.alpha.map_or("-".to_owned(), |a| format!("{a:.6}")),
            blk.l.map_or("-".to_owned(), |l| format!("{l}")),
            peaks(&st_col, &thetas)
        );
        if blk.alpha.is_some() && c.farfield {
            line += &format!("; abc_farfield peaks {}", peaks(&far_col, &thetas));
        }
        if blk.l.is_some() {
            line += &format!("; abc_finite_l peaks {}", peaks(&fin_col, &fin_theta));
        }
        summary.push(line);
    }
    (table, summary, any_failed)
}

fn angular_density(a: AngularArgs) -> Result<i32, CliError> {
    let c = resolve_angular(&a)?;
    let (table, summary, failed) = angular_table(&c);
    table.write_to(&header("angular-density", a.common.quick, &c), a.common.format, a.common.output.as_deref())?;
    for line in summary {
        eprintln!("{line}");
    }
    Ok(if failed { EXIT_NONCONVERGENCE } else { EXIT_OK })
}

pub fn resolve_evolve(a: &EvolveArgs) -> Result<EvolveConfig, CliError> {
    let mut c = resolve(&a.common, "evolve-2d", EvolveConfig::preset)?;
    set(&mut c.k0x, a.k0x);
    set(&mut c.k0y, a.k0y);
    set(&mut c.re_beta, a.re_beta);
    set(&mut c.im_beta, a.im_beta);
    set(&mut c.l, a.l);
    set(&mut c.times, a.times.clone());
    set(&mut c.nx, a.nx);
    set(&mut c.ny, a.ny);
    set(&mut c.x_min, a.x_min);
    set(&mut c.y_min, a.y_min);
    set(&mut c.boundary_samples, a.boundary_samples);
    if a.common.quick {
        c.nx = c.nx.min(100);
        c.ny = c.ny.min(100);
        c.boundary_samples = c.boundary_samples.min(101);
    }
    if a.common.abs_tol.is_some() || a.common.rel_tol.is_some() {
        eprintln!("abc-contrast: evolve-2d evaluates closed forms only; tolerances are ignored");
    }
    c.validate()?;
    Ok(c)
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64).collect()
}

/// Snapshot and boundary tables at time `t`. The L-shaped solution is a
/// product of 1D factors, so each axis is evaluated once.
pub fn evolve_snapshot(c: &EvolveConfig, t: f64) -> (Table, Table) {
    let beta = Complex64::new(c.re_beta, c.im_beta);
    let xs = linspace(c.x_min, c.l, c.nx);
    let ys = linspace(c.y_min, c.l, c.ny);
    let fx: Vec<f64> = xs.par_iter().map(|&x| psi_tg(x, t, c.k0x, beta, c.l).norm_sqr()).collect();
    let fy: Vec<f64> = ys.par_iter().map(|&y| psi_tg(y, t, c.k0y, beta, c.l).norm_sqr()).collect();
    let mut snap = Table::new(vec!["x", "y", "density"]);
    snap.rows.reserve(xs.len() * ys.len());
    for (x, ax) in xs.iter().zip(&fx) {
        for (y, ay) in ys.iter().zip(&fy) {
            snap.push(vec![Cell::Num(*x), Cell::Num(*y), Cell::Num(ax * ay)]);
        }
    }

    let mut boundary = Table::new(vec!["segment", "s", "x", "y", "lambda_abc"]);
    let at_l = |k: f64| psi_tg(c.l, t, k, beta, c.l).norm_sqr();
    let (edge_x, edge_y) = (at_l(c.k0x), at_l(c.k0y));
    for y in linspace(c.y_min, c.l, c.boundary_samples) {
        let v = c.im_beta * edge_x * psi_tg(y, t, c.k0y, beta, c.l).norm_sqr();
        boundary.push(vec!["vertical".into(), y.into(), c.l.into(), y.into(), v.into()]);
    }
    for x in linspace(c.x_min, c.l, c.boundary_samples) {
        let v = c.im_beta * psi_tg(x, t, c.k0x, beta, c.l).norm_sqr() * edge_y;
        boundary.push(vec!["horizontal".into(), x.into(), x.into(), c.l.into(), v.into()]);
    }
    (snap, boundary)
}

fn table_is_finite(t: &Table) -> bool {
    t.rows
        .iter()
        .flatten()
        .all(|c| !matches!(c, Cell::Num(v) if !v.is_finite()))
}

fn evolve_2d(a: EvolveArgs) -> Result<i32, CliError> {
    let c = resolve_evolve(&a)?;
    let dir: PathBuf = a
        .common
        .output
        .clone()
        .ok_or_else(|| config_err("output: evolve-2d needs --output DIR for its snapshot files"))?;
    std::fs::create_dir_all(&dir)?;
    let ext = match a.common.format {
        super::Format::Csv => "csv",
        super::Format::Json => "json",
    };
    let mut ok = true;
    for (i, &t) in c.times.iter().enumerate() {
        let (snap, boundary) = evolve_snapshot(&c, t);
        ok &= table_is_finite(&snap) && table_is_finite(&boundary);
        let mut meta = header("evolve-2d", a.common.quick, &c);
        meta["snapshot"] = json!({ "index": i, "t": t });
        write_file(&snap, &meta, a.common.format, &dir.join(format!("snapshot_{i:03}.{ext}")))?;
        write_file(&boundary, &meta, a.common.format, &dir.join(format!("boundary_{i:03}.{ext}")))?;
        eprintln!("t={t}: {}", boundary_summary(&boundary));
    }
    Ok(if ok { EXIT_OK } else { EXIT_NONCONVERGENCE })
}

fn write_file(t: &Table, meta: &Value, format: super::Format, path: &Path) -> Result<(), CliError> {
    t.write_to(meta, format, Some(path)).map_err(CliError::Io)
}

fn boundary_summary(b: &Table) -> String {
    let mut parts = Vec::new();
    for seg in ["vertical", "horizontal"] {
        let best = b
            .rows
            .iter()
            .filter(|r| r[0] == Cell::from(seg))
            .filter_map(|r| match (&r[1], &r[4]) {
                (Cell::Num(s), Cell::Num(v)) => Some((*s, *v)),
                _ => None,
            })
            .fold((f64::NAN, 0.0), |acc, (s, v)| if v > acc.1 { (s, v) } else { acc });
        parts.push(format!("{seg} max {:.3e} at s={:.3}", best.1, best.0));
    }
    parts.join(", ")
}

fn validate(a: ValidateArgs) -> Result<i32, CliError> {
    let mut c = resolve(&a.common, "validate", |_| None::<ValidateConfig>)?;
    set(&mut c.seed, a.seed);
    apply_tolerances(&mut c.quadrature, &a.common);
    c.quadrature
        .validate()
        .map_err(|e| config_err(format!("quadrature: {e}")))?;
    let opts = SuiteOptions {
        quick: a.common.quick,
        seed: c.seed,
        spec: c.quadrature,
        corrupt_rho: a.inject_rho_sign_error,
    };
    let results = run_suite(&opts);
    let mut table = Table::new(vec!["check", "passed", "measured", "threshold", "detail"]);
    for r in &results {
        println!(
            "{} {:<24} measured {:.3e} threshold {:.3e} ({:.1} s) {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.measured,
            r.threshold,
            r.seconds,
            r.detail
        );
        table.push(vec![
            r.name.clone().into(),
            (if r.passed { "true" } else { "false" }).into(),
            r.measured.into(),
            r.threshold.into(),
            r.detail.clone().into(),
        ]);
    }
    if let Some(path) = a.common.output.as_deref() {
        table.write_to(&header("validate", a.common.quick, &c), a.common.format, Some(path))?;
    }
    Ok(if results.iter().all(|r| r.passed) {
        EXIT_OK
    } else {
        EXIT_VALIDATION
    })
}
