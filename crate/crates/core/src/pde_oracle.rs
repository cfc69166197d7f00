//! Crank–Nicolson reference solver for `2i ∂_t ψ = -∂_x² ψ` on `[x_min, L]` with
//! a Robin condition `∂_x ψ(L) = β ψ(L)` and `ψ(x_min) = 0`.
//!
//! The Robin row uses a ghost point `ψ_{N+1} = ψ_{N-1} + 2hβψ_N`. Norms are
//! trapezoid-weighted (`w_N = 1/2`); with that weighting the scheme loses
//! exactly `Im β · dt · |ψ_N^{n+1/2}|²` per step, where `ψ^{n+1/2}` is the
//! average of the two time levels.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::closed_form::{gaussian_g, psi_tg};
use crate::error::{Error, Result};

/// Relative norm growth tolerated before a run is declared unstable.
const GROWTH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub x_min: f64,
    pub l: f64,
    pub n_points: usize,
    pub dt: f64,
}

impl Grid1D {
    pub fn new(x_min: f64, l: f64, n_points: usize, dt: f64) -> Result<Self> {
        let g = Self {
            x_min,
            l,
            n_points,
            dt,
        };
        g.validate()?;
        Ok(g)
    }

    /// Grid with spacing close to `h` whose left wall leaves room for ten
    /// spread packet widths plus `|k0| t_final` of drift.
    pub fn for_packet(k0: f64, l: f64, t_final: f64, h: f64, dt: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::invalid("h", "must be finite and > 0"));
        }
        let reach = 10.0 * (1.0 + t_final * t_final).sqrt() + k0.abs() * t_final;
        let x_min = (-reach).min(l - 1.0);
        let n_points = ((l - x_min) / h).ceil() as usize + 1;
        Self::new(x_min, l, n_points, dt)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_min.is_finite() && self.l.is_finite() && self.x_min < self.l) {
            return Err(Error::invalid("grid", "need finite x_min < L"));
        }
        if self.n_points < 3 {
            return Err(Error::invalid("n_points", "need at least 3 points"));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::invalid("dt", "must be finite and > 0"));
        }
        Ok(())
    }

    pub fn h(&self) -> f64 {
        (self.l - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        if j + 1 == self.n_points {
            self.l
        } else {
            self.x_min + j as f64 * self.h()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.x(j)).collect()
    }

    /// Samples `f` on the grid, forcing the Dirichlet wall to zero.
    pub fn sample<F: Fn(f64) -> Complex64>(&self, f: F) -> Vec<Complex64> {
        let mut v: Vec<Complex64> = self.points().into_iter().map(f).collect();
        v[0] = Complex64::new(0.0, 0.0);
        v
    }

    /// Trapezoid-weighted `h Σ w_j |ψ_j|²`.
    pub fn norm_sqr(&self, psi: &[Complex64]) -> f64 {
        weighted_norm_sqr(psi, self.h())
    }
}

fn weighted_norm_sqr(psi: &[Complex64], h: f64) -> f64 {
    let n = psi.len() - 1;
    let inner: f64 = psi[1..n].iter().map(|z| z.norm_sqr()).sum();
    h * (inner + 0.5 * (psi[0].norm_sqr() + psi[n].norm_sqr()))
}

/// Thomas coefficients of one row: `d_j = rhs_j inv_den + carry d_{j-1}` on
/// the way down, `ψ_j = d_j - c_prime ψ_{j+1}` on the way up.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Row {
    inv_den: Complex64,
    carry: Complex64,
    c_prime: Complex64,
}

/// Prefactored Crank–Nicolson stepper for one `(grid, β, dt)`.
///
/// Away from the wall the elimination coefficients settle to a fixed point
/// within a few hundred rows; only the rows before that are stored, which
/// keeps each step close to two streams over the state.
#[derive(Debug, Clone)]
pub struct RobinSolver {
    grid: Grid1D,
    beta: Complex64,
    dt: f64,
    /// `i dt / (4h²)`
    g: Complex64,
    /// Rows `1..=head.len()`.
    head: Vec<Row>,
    /// Every later interior row.
    settled: Row,
    /// The Robin row `N`.
    last: Row,
    work: Vec<Complex64>,
}

impl RobinSolver {
    pub fn new(grid: Grid1D, beta: Complex64) -> Result<Self> {
        Self::with_dt(grid, beta, grid.dt)
    }

    /// Same grid, different time step.
    pub fn with_dt(grid: Grid1D, beta: Complex64, dt: f64) -> Result<Self> {
        grid.validate()?;
        if !(beta.re.is_finite() && beta.im.is_finite()) {
            return Err(Error::invalid("beta", "must be finite"));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::invalid("dt", "must be finite and > 0"));
        }
        let h = grid.h();
        let n = grid.n_points - 1;
        let g = Complex64::new(0.0, dt / (4.0 * h * h));
        // (I - g A) with A the second difference; unknowns are j = 1..=n.
        let diag = 1.0 + 2.0 * g;
        let off = -g;
        let zero = Complex64::new(0.0, 0.0);
        let row = |lower: Complex64, d: Complex64, prev_cp: Complex64| -> Result<Row> {
            let den = d - lower * prev_cp;
            if den.norm() == 0.0 {
                return Err(Error::invalid("grid", "singular Crank-Nicolson matrix"));
            }
            let inv_den = 1.0 / den;
            Ok(Row {
                inv_den,
                carry: -lower * inv_den,
                c_prime: off * inv_den,
            })
        };
        let mut head = Vec::new();
        let mut prev_cp = zero;
        let mut settled = Row {
            inv_den: zero,
            carry: zero,
            c_prime: zero,
        };
        for j in 1..n {
            let r = row(if j == 1 { zero } else { off }, diag, prev_cp)?;
            let converged = j > 2 && r == head[head.len() - 1];
            prev_cp = r.c_prime;
            settled = r;
            if converged {
                break;
            }
            head.push(r);
        }
        let last = row(
            if n == 1 { zero } else { -2.0 * g },
            1.0 + 2.0 * g - 2.0 * g * h * beta,
            prev_cp,
        )?;
        Ok(Self {
            grid,
            beta,
            dt,
            g,
            head,
            settled,
            last,
            work: vec![zero; n + 1],
        })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    /// One step in place. `psi[0]` is the wall and stays zero.
    pub fn step(&mut self, psi: &mut [Complex64]) {
        let n = self.grid.n_points - 1;
        assert_eq!(psi.len(), n + 1, "state does not match the grid");
        let gi = self.g.im;
        let times_g = |z: Complex64| Complex64::new(-gi * z.im, gi * z.re);
        let h = self.grid.h();
        let m = self.head.len().min(n - 1);
        let d = &mut self.work;
        let s = self.settled;

        // Forward sweep, building the explicit half (I + gA)ψ on the fly.
        let mut prev = Complex64::new(0.0, 0.0);
        let mut windows = psi.windows(3).zip(&mut d[1..n]);
        // `head` leads the zip so no window is pulled once it runs out.
        for (r, (w, dj)) in self.head[..m].iter().zip(windows.by_ref()) {
            let rhs = w[1] + times_g(w[0] + w[2] - 2.0 * w[1]);
            prev = rhs * r.inv_den + r.carry * prev;
            *dj = prev;
        }
        for (w, dj) in windows {
            let rhs = w[1] + times_g(w[0] + w[2] - 2.0 * w[1]);
            prev = rhs * s.inv_den + s.carry * prev;
            *dj = prev;
        }
        let rhs_n = psi[n] + self.g * (2.0 * psi[n - 1] - 2.0 * psi[n] + 2.0 * h * self.beta * psi[n]);
        let mut next = rhs_n * self.last.inv_den + self.last.carry * prev;
        psi[n] = next;

        // Back substitution.
        for (p, &dj) in psi[m + 1..n].iter_mut().zip(&d[m + 1..n]).rev() {
            next = dj - s.c_prime * next;
            *p = next;
        }
        for ((p, &dj), r) in psi[1..=m].iter_mut().zip(&d[1..=m]).zip(&self.head[..m]).rev() {
            next = dj - r.c_prime * next;
            *p = next;
        }
        psi[0] = Complex64::new(0.0, 0.0);
    }
}

/// Per-step record of a run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AbsorptionLedger {
    pub times: Vec<f64>,
    /// `Λ = Im β |ψ_t(L)|²` at each time level.
    pub absorbed_density: Vec<f64>,
    /// Absorbed probability up to each time level, accumulated from the
    /// per-step midpoint values `Im β dt |ψ_N^{n+1/2}|²`.
    pub cumulative: Vec<f64>,
    /// Trapezoid-weighted `‖ψ_t‖²` at each time level.
    pub norms: Vec<f64>,
}

impl AbsorptionLedger {
    fn push(&mut self, t: f64, density: f64, cumulative: f64, norm: f64) {
        self.times.push(t);
        self.absorbed_density.push(density);
        self.cumulative.push(cumulative);
        self.norms.push(norm);
    }

    /// CSV with columns `t, lambda_abc, cumulative`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,lambda_abc,cumulative")?;
        for ((t, l), c) in self.times.iter().zip(&self.absorbed_density).zip(&self.cumulative) {
            writeln!(w, "{t:.16e},{l:.16e},{c:.16e}")?;
        }
        Ok(())
    }
}

fn steps_for(t: f64, dt: f64) -> (usize, f64) {
    if t <= 0.0 {
        return (0, dt);
    }
    let steps = (t / dt - 1e-9).ceil().max(1.0) as usize;
    (steps, t / steps as f64)
}

fn check_state(psi0: &[Complex64], grid: &Grid1D) -> Result<()> {
    grid.validate()?;
    if psi0.len() != grid.n_points {
        return Err(Error::invalid(
            "psi0",
            format!("has {} samples, grid has {}", psi0.len(), grid.n_points),
        ));
    }
    if psi0.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::invalid("psi0", "samples must be finite"));
    }
    Ok(())
}

/// Evolves `psi0` to `t_final` (rounded up to whole steps, with `dt` shrunk to
/// land on it exactly) and records the ledger at every step.
///
/// Any norm growth beyond round-off when `Im β >= 0` aborts the run.
pub fn evolve_robin(
    psi0: &[Complex64],
    beta: Complex64,
    grid: &Grid1D,
    t_final: f64,
) -> Result<(Vec<Complex64>, AbsorptionLedger)> {
    check_state(psi0, grid)?;
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::invalid("t_final", "must be finite and >= 0"));
    }
    let (steps, dt) = steps_for(t_final, grid.dt);
    let mut solver = RobinSolver::with_dt(*grid, beta, dt)?;
    let mut psi = psi0.to_vec();
    psi[0] = Complex64::new(0.0, 0.0);
    let n = grid.n_points - 1;
    let mut ledger = AbsorptionLedger::default();
    let mut norm = grid.norm_sqr(&psi);
    let mut cumulative = 0.0;
    ledger.push(0.0, beta.im * psi[n].norm_sqr(), 0.0, norm);
    for step in 1..=steps {
        let before = psi[n];
        solver.step(&mut psi);
        let mid = 0.5 * (before + psi[n]);
        cumulative += beta.im * dt * mid.norm_sqr();
        let next = grid.norm_sqr(&psi);
        if beta.im >= 0.0 && next > norm * (1.0 + GROWTH_TOL) + f64::MIN_POSITIVE {
            return Err(Error::Unstable {
                step,
                growth: next / norm - 1.0,
            });
        }
        norm = next;
        ledger.push(step as f64 * dt, beta.im * psi[n].norm_sqr(), cumulative, norm);
    }
    Ok((psi, ledger))
}

/// Result of stepping two states side by side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContractivityReport {
    /// Max over steps of `(‖Δ^{n+1}‖² - ‖Δ^n‖²)/dt + Im β |Δ_N^{n+1/2}|²`.
    pub max_residual: f64,
    /// Largest single-step increase of `‖Δ‖²` (`<= 0` means non-increasing).
    pub max_increase: f64,
    pub initial_distance: f64,
    pub final_distance: f64,
}

/// Evolves `psi_a` and `psi_b` in lockstep and checks that their distance
/// shrinks at exactly the rate set by the boundary.
pub fn contractivity_check(
    psi_a: &[Complex64],
    psi_b: &[Complex64],
    beta: Complex64,
    grid: &Grid1D,
    t_final: f64,
) -> Result<ContractivityReport> {
    check_state(psi_a, grid)?;
    check_state(psi_b, grid)?;
    let (steps, dt) = steps_for(t_final, grid.dt);
    let mut solver = RobinSolver::with_dt(*grid, beta, dt)?;
    let mut a = psi_a.to_vec();
    let mut b = psi_b.to_vec();
    a[0] = Complex64::new(0.0, 0.0);
    b[0] = Complex64::new(0.0, 0.0);
    let n = grid.n_points - 1;
    let h = grid.h();
    let distance = |a: &[Complex64], b: &[Complex64]| {
        let n = a.len() - 1;
        let inner: f64 = (1..n).map(|j| (a[j] - b[j]).norm_sqr()).sum();
        h * (inner + 0.5 * (a[n] - b[n]).norm_sqr())
    };
    let initial = distance(&a, &b);
    let mut d = initial;
    let mut max_residual: f64 = 0.0;
    let mut max_increase = f64::NEG_INFINITY;
    for _ in 0..steps {
        let before = a[n] - b[n];
        solver.step(&mut a);
        solver.step(&mut b);
        let mid = 0.5 * (before + a[n] - b[n]);
        let next = distance(&a, &b);
        let residual = (next - d) / dt + beta.im * mid.norm_sqr();
        max_residual = max_residual.max(residual.abs());
        max_increase = max_increase.max(next - d);
        d = next;
    }
    if steps == 0 {
        max_increase = 0.0;
    }
    Ok(ContractivityReport {
        max_residual,
        max_increase,
        initial_distance: initial.sqrt(),
        final_distance: d.sqrt(),
    })
}

/// Evolves the restricted Gaussian `e^{ik0x} G(x)` and returns the largest
/// relative L² distance to the closed form over `t_samples`.
pub fn validate_closed_form(k0: f64, beta: Complex64, l: f64, grid: &Grid1D, t_samples: &[f64]) -> Result<f64> {
    grid.validate()?;
    if (grid.l - l).abs() > 1e-12 * l.abs().max(1.0) {
        return Err(Error::invalid("L", "grid must end at the screen"));
    }
    let h = grid.h();
    let max_h = 0.02 / k0.abs().max(1.0);
    if h > max_h {
        return Err(Error::UnderResolved { h, max_h });
    }
    let mut times: Vec<f64> = t_samples.to_vec();
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::invalid("t_samples", "must be finite and >= 0"));
    }
    times.sort_by(f64::total_cmp);

    let mut psi = grid.sample(|x| Complex64::from_polar(gaussian_g(x), k0 * x));
    let xs = grid.points();
    let mut now = 0.0;
    let mut worst: f64 = 0.0;
    for &t in &times {
        let (steps, dt) = steps_for(t - now, grid.dt);
        if steps > 0 {
            let mut solver = RobinSolver::with_dt(*grid, beta, dt)?;
            for _ in 0..steps {
                solver.step(&mut psi);
            }
        }
        now = t;
        let exact: Vec<Complex64> = xs.iter().map(|&x| psi_tg(x, t, k0, beta, l)).collect();
        let diff: Vec<Complex64> = psi.iter().zip(&exact).map(|(a, b)| a - b).collect();
        let err = (weighted_norm_sqr(&diff, h) / weighted_norm_sqr(&exact, h)).sqrt();
        worst = worst.max(err);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn packet_grid(k0: f64, l: f64, t: f64, h: f64, dt: f64) -> Grid1D {
        Grid1D::for_packet(k0, l, t, h, dt).unwrap()
    }

    /// Plain Thomas solve of the same system, all rows stored.
    fn reference_step(grid: &Grid1D, beta: Complex64, dt: f64, psi: &mut [Complex64]) {
        let n = grid.n_points - 1;
        let h = grid.h();
        let g = Complex64::new(0.0, dt / (4.0 * h * h));
        let mut a = vec![-g; n + 1];
        let mut b = vec![1.0 + 2.0 * g; n + 1];
        let c = vec![-g; n + 1];
        a[n] = -2.0 * g;
        b[n] = 1.0 + 2.0 * g - 2.0 * g * h * beta;
        let mut r = vec![Complex64::new(0.0, 0.0); n + 1];
        for j in 1..n {
            r[j] = psi[j] + g * (psi[j - 1] - 2.0 * psi[j] + psi[j + 1]);
        }
        r[n] = psi[n] + g * (2.0 * psi[n - 1] - 2.0 * psi[n] + 2.0 * h * beta * psi[n]);
        let mut cp = vec![Complex64::new(0.0, 0.0); n + 1];
        let mut dp = vec![Complex64::new(0.0, 0.0); n + 1];
        for j in 1..=n {
            let lower = if j == 1 { Complex64::new(0.0, 0.0) } else { a[j] };
            let den = b[j] - lower * cp[j - 1];
            cp[j] = c[j] / den;
            dp[j] = (r[j] - lower * dp[j - 1]) / den;
        }
        psi[n] = dp[n];
        for j in (1..n).rev() {
            psi[j] = dp[j] - cp[j] * psi[j + 1];
        }
    }

    #[test]
    fn solver_matches_plain_thomas() {
        for &(h, dt) in &[(0.05, 1e-3), (1e-3, 2e-4), (5e-3, 0.5)] {
            let g = Grid1D::for_packet(3.0, 3.0, 0.5, h, dt).unwrap();
            let beta = Complex64::new(-0.3, 2.0);
            let mut a = g.sample(|x| Complex64::from_polar(gaussian_g(x - 1.0), 3.0 * x));
            let mut b = a.clone();
            let mut solver = RobinSolver::new(g, beta).unwrap();
            for _ in 0..5 {
                solver.step(&mut a);
                reference_step(&g, beta, dt, &mut b);
            }
            let err = a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
            assert!(err < 1e-12, "h = {h}, dt = {dt}: {err} (head {})", solver.head.len());
        }
    }

    #[test]
    fn grid_geometry() {
        let g = Grid1D::new(-2.0, 2.0, 5, 0.1).unwrap();
        assert_eq!(g.h(), 1.0);
        assert_eq!(g.points(), vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert!(Grid1D::new(1.0, 0.0, 5, 0.1).is_err());
        assert!(Grid1D::new(0.0, 1.0, 2, 0.1).is_err());
        assert!(Grid1D::new(0.0, 1.0, 5, 0.0).is_err());
    }

    #[test]
    fn neumann_conserves_norm() {
        let g = packet_grid(2.0, 6.0, 2.0, 0.01, 2e-4);
        let psi0 = g.sample(|x| Complex64::from_polar(gaussian_g(x), 2.0 * x));
        let (_, ledger) = evolve_robin(&psi0, Complex64::new(0.0, 0.0), &g, 2.0).unwrap();
        assert_eq!(ledger.times.len(), 10_001);
        let n0 = ledger.norms[0];
        for n in &ledger.norms {
            assert!((n - n0).abs() < 1e-10);
        }
    }

    #[test]
    fn real_beta_conserves_norm() {
        let g = packet_grid(3.0, 5.0, 2.0, 0.01, 1e-3);
        let psi0 = g.sample(|x| Complex64::from_polar(gaussian_g(x), 3.0 * x));
        let (_, ledger) = evolve_robin(&psi0, Complex64::new(-2.5, 0.0), &g, 2.0).unwrap();
        let n0 = ledger.norms[0];
        assert!(ledger.norms.iter().all(|n| (n - n0).abs() < 1e-10));
    }

    #[test]
    fn ledger_balances_norm_loss_exactly() {
        let g = packet_grid(4.0, 5.0, 3.0, 0.01, 1e-3);
        let psi0 = g.sample(|x| Complex64::from_polar(gaussian_g(x), 4.0 * x));
        let (_, ledger) = evolve_robin(&psi0, Complex64::new(0.0, 4.0), &g, 3.0).unwrap();
        let n0 = ledger.norms[0];
        for (c, n) in ledger.cumulative.iter().zip(&ledger.norms) {
            assert!((c + n - n0).abs() < 1e-12);
        }
        assert!(ledger.cumulative.windows(2).all(|w| w[1] >= w[0]));
        assert!(*ledger.cumulative.last().unwrap() > 0.9);
    }

    #[test]
    fn per_step_identity_is_third_order() {
        // Trapezoid average of |ψ_N|² vs the exact midpoint: residual O(dt³).
        let residual = |dt: f64| {
            let g = packet_grid(3.0, 4.0, 1.5, 0.01, dt);
            let psi0 = g.sample(|x| Complex64::from_polar(gaussian_g(x), 3.0 * x));
            let beta = Complex64::new(0.0, 3.0);
            let (_, led) = evolve_robin(&psi0, beta, &g, 1.5).unwrap();
            (1..led.times.len())
                .map(|i| {
                    let loss = led.norms[i - 1] - led.norms[i];
                    let trap = dt * 0.5 * (led.absorbed_density[i - 1] + led.absorbed_density[i]);
                    (loss - trap).abs()
                })
                .fold(0.0, f64::max)
        };
        let coarse = residual(2e-3);
        let fine = residual(1e-3);
        assert!(coarse / fine > 6.0, "{coarse} / {fine}");
    }

    #[test]
    fn identical_states_have_zero_distance() {
        let g = packet_grid(2.0, 5.0, 1.0, 0.02, 1e-3);
        let psi = g.sample(|x| Complex64::from_polar(gaussian_g(x), 2.0 * x));
        let r = contractivity_check(&psi, &psi, Complex64::new(0.0, 2.0), &g, 1.0).unwrap();
        assert_eq!(r.max_residual, 0.0);
        assert_eq!(r.final_distance, 0.0);
    }

    #[test]
    fn distance_shrinks_at_boundary_rate() {
        let g = packet_grid(3.0, 5.0, 3.0, 0.01, 1e-3);
        let a = g.sample(|x| Complex64::from_polar(gaussian_g(x), 3.0 * x));
        let b = g.sample(|x| Complex64::from_polar(gaussian_g(x - 0.5), 1.5 * x));
        let r = contractivity_check(&a, &b, Complex64::new(0.0, 2.0), &g, 3.0).unwrap();
        assert!(r.max_increase <= 1e-15);
        assert!(r.max_residual < 1e-9);
        assert!(r.final_distance < r.initial_distance);
    }

    #[test]
    fn gain_is_allowed_and_bad_input_refused() {
        // Im β < 0 pumps norm in, which the stability guard must not flag.
        let g = packet_grid(3.0, 4.0, 2.0, 0.02, 1e-3);
        let psi0 = g.sample(|x| Complex64::from_polar(gaussian_g(x), 3.0 * x));
        let r = evolve_robin(&psi0, Complex64::new(0.0, -3.0), &g, 2.0);
        let (_, led) = r.unwrap();
        assert!(led.norms.last().unwrap() > &led.norms[0]);
        let mut s = psi0.clone();
        s[0] = Complex64::new(f64::NAN, 0.0);
        assert!(evolve_robin(&s, Complex64::new(0.0, 1.0), &g, 1.0).is_err());
    }

    #[test]
    fn under_resolved_grid_is_refused() {
        let g = Grid1D::new(-30.0, 10.0, 2001, 1e-3).unwrap();
        let r = validate_closed_form(5.0, Complex64::new(0.0, 5.0), 10.0, &g, &[1.0]);
        assert!(matches!(r, Err(Error::UnderResolved { .. })));
    }

    #[test]
    fn ledger_csv_columns() {
        let g = packet_grid(1.0, 3.0, 0.01, 0.05, 5e-3);
        let psi0 = g.sample(|x| Complex64::from_polar(gaussian_g(x), x));
        let (_, led) = evolve_robin(&psi0, Complex64::new(0.0, 1.0), &g, 0.01).unwrap();
        let mut out = Vec::new();
        led.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,lambda_abc,cumulative");
        assert_eq!(lines.len(), 1 + led.times.len());
    }
}
