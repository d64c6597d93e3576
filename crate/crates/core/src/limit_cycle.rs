//! Frozen-parameter limit cycle: settling, period and amplitude, and the
//! R(θ), Ω(θ) and ψ(θ) tables used by the geometric-phase estimator.
//!
//! Polar chart: r = √(x² + (ẋ/ω)²), θ = atan2(−ẋ/ω, x). At ε = 0 the flow is
//! uniform rotation θ̇ = ω. In general θ̇ = Ω = ω + ε x ẋ (x² − 1)/(ω r²).
//!
//! The cycle is integrated with θ as the independent variable, state
//! (x, ẋ, t). Poincaré returns to θ = 0 (ẋ = 0, x > 0) are then just the
//! points θ = 2πk, and grid tables come straight from dense output.

use crate::dual::{vdp_rhs, Params};
use crate::error::{Error, Result};
use crate::ode::{Dop853, IntegratorConfig};
use std::cell::Cell;
use std::f64::consts::TAU;

/// Radius and angle of (x, ẋ) in the polar chart.
pub fn polar(x: f64, v: f64, omega: f64) -> (f64, f64) {
    let u = -v / omega;
    (x.hypot(u), u.atan2(x))
}

/// θ̇ at (x, ẋ).
pub fn angular_rate(x: f64, v: f64, p: &Params) -> f64 {
    let w = p.omega;
    let r2 = x * x + (v / w) * (v / w);
    w + p.eps * x * v * (x * x - 1.0) / (w * r2)
}

/// Default transient budget max(50, 20/ε) periods.
pub fn default_transient(eps: f64) -> usize {
    if eps <= 0.0 {
        return usize::MAX;
    }
    (20.0 / eps).ceil().clamp(50.0, 1e7) as usize
}

/// Settling and measurement knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureConfig {
    pub n_theta: usize,
    pub n_returns: usize,
    /// Tolerance of the θ-domain integration.
    pub tol: f64,
    /// Transient budget in periods; `None` means [`default_transient`].
    pub n_transient: Option<usize>,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        Self { n_theta: 512, n_returns: 20, tol: 1e-13, n_transient: None }
    }
}

/// A point on the cycle at the θ = 0 section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settled {
    pub x: f64,
    pub v: f64,
    /// Return distance |P(x) − x| at the final point.
    pub distance: f64,
    /// Poincaré returns spent.
    pub returns: usize,
}

/// Integrates (x, ẋ, t) against θ over `[th0, th1]` from `y0`, handing
/// every accepted step to `visit`.
type Rhs<'a> = &'a mut dyn FnMut(f64, &[f64], &mut [f64]);

fn theta_flow<V>(p: &Params, y0: [f64; 3], th0: f64, th1: f64, tol: f64, mut visit: V) -> Result<[f64; 3]>
where
    V: FnMut(&mut Dop853<Rhs<'_>>) -> Result<()>,
{
    let bad: Cell<Option<(f64, f64)>> = Cell::new(None);
    let mut rhs = |th: f64, y: &[f64], dy: &mut [f64]| {
        let om = angular_rate(y[0], y[1], p);
        if !(om > 0.0) {
            if bad.get().is_none() {
                bad.set(Some((th, om)));
            }
            dy.fill(f64::NAN);
            return;
        }
        let (xd, vd) = vdp_rhs(y[0], y[1], p);
        dy[0] = xd / om;
        dy[1] = vd / om;
        dy[2] = 1.0 / om;
    };
    let cfg = IntegratorConfig { max_step: 0.25 * std::f64::consts::PI, ..IntegratorConfig::with_tol(tol) };
    let run = drive(&mut rhs, y0, th0, th1, &cfg, &mut visit);
    match (run, bad.get()) {
        (_, Some((theta, value))) => Err(Error::NonPositiveRate { theta, value }),
        (r, None) => r,
    }
}

fn drive<V>(f: Rhs<'_>, y0: [f64; 3], th0: f64, th1: f64, cfg: &IntegratorConfig, visit: &mut V) -> Result<[f64; 3]>
where
    V: FnMut(&mut Dop853<Rhs<'_>>) -> Result<()>,
{
    let mut st = Dop853::new(f, th0, &y0, th1, cfg)?;
    while !st.done() {
        st.step()?;
        visit(&mut st)?;
    }
    Ok([st.y()[0], st.y()[1], st.y()[2]])
}

/// One Poincaré return from (x0, 0): the state and elapsed time at θ = 2π.
fn poincare(p: &Params, x0: f64, tol: f64) -> Result<[f64; 3]> {
    theta_flow(p, [x0, 0.0, 0.0], 0.0, TAU, tol, |_| Ok(()))
}

/// Runs from (x, ẋ) = (2, 0) until successive section returns agree to
/// 1e−9, then sharpens the fixed point of the return map by secant steps.
pub fn settle(p: &Params, n_transient: usize) -> Result<Settled> {
    settle_with(p, n_transient, MeasureConfig::default().tol)
}

pub fn settle_with(p: &Params, n_transient: usize, tol: f64) -> Result<Settled> {
    p.validate()?;
    if p.eps <= 0.0 {
        return Err(Error::InvalidParams("settling needs eps > 0; every orbit is periodic at eps = 0".into()));
    }
    let mut x = 2.0;
    let mut d = f64::INFINITY;
    let mut returns = 0;
    let mut stalled = 0;
    while returns < n_transient {
        let xn = poincare(p, x, tol)?[0];
        returns += 1;
        let dn = (xn - x).abs();
        x = xn;
        stalled = if dn >= d { stalled + 1 } else { 0 };
        d = dn;
        if d <= 1e-9 {
            break;
        }
        if stalled >= 10 {
            return Err(Error::NoConvergence { distance: d, returns });
        }
    }
    if d > 1e-9 {
        return Err(Error::NoConvergence { distance: d, returns });
    }
    // Secant on g(x) = P(x) − x; the map is one-dimensional on this section.
    let mut x0 = x;
    let mut g0 = poincare(p, x0, tol)?[0] - x0;
    returns += 1;
    let mut x1 = x0 + g0;
    let mut best = (g0.abs(), x0);
    for _ in 0..8 {
        let g1 = poincare(p, x1, tol)?[0] - x1;
        returns += 1;
        if g1.abs() < best.0 {
            best = (g1.abs(), x1);
        }
        if g1.abs() <= 1e-15 * x1.abs() || g1 == g0 {
            break;
        }
        let x2 = x1 - g1 * (x1 - x0) / (g1 - g0);
        x0 = x1;
        g0 = g1;
        x1 = x2;
    }
    Ok(Settled { x: best.1, v: 0.0, distance: best.0, returns })
}

/// Measured frozen cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitCycleData {
    pub params: Params,
    pub period: f64,
    /// 2π / period.
    pub frequency: f64,
    pub amplitude: f64,
    pub theta_grid: Vec<f64>,
    pub r_table: Vec<f64>,
    pub omega_table: Vec<f64>,
    /// Return times to the θ = 0 section, starting at 0.
    pub return_times: Vec<f64>,
    /// Fourier coefficients of 1/Ω: `inv_cos[k]`, `inv_sin[k]` for k ≥ 0.
    inv_cos: Vec<f64>,
    inv_sin: Vec<f64>,
    /// 1 / mean(1/Ω); the normalization that makes ψ(2π) = 2π.
    psi_scale: f64,
}

impl LimitCycleData {
    /// Exact data of the ε = 0 oscillator (radius 2 by convention).
    pub fn harmonic(params: Params, n_theta: usize) -> Self {
        let period = TAU / params.omega;
        let theta_grid: Vec<f64> = (0..n_theta).map(|k| TAU * k as f64 / n_theta as f64).collect();
        let mut inv_cos = vec![0.0; n_theta / 2];
        inv_cos[0] = 1.0 / params.omega;
        Self {
            params,
            period,
            frequency: params.omega,
            amplitude: 2.0,
            r_table: vec![2.0; n_theta],
            omega_table: vec![params.omega; n_theta],
            theta_grid,
            return_times: vec![0.0, period],
            inv_sin: vec![0.0; n_theta / 2],
            inv_cos,
            psi_scale: params.omega,
        }
    }

    pub fn n_theta(&self) -> usize {
        self.theta_grid.len()
    }

    /// ψ(θ) for any real θ; ψ(θ + 2π) = ψ(θ) + 2π.
    pub fn psi(&self, theta: f64) -> f64 {
        let turns = (theta / TAU).floor();
        let th = theta - TAU * turns;
        let mut acc = self.inv_cos[0] * th;
        for k in 1..self.inv_cos.len() {
            let kf = k as f64;
            let (s, c) = (kf * th).sin_cos();
            acc += (self.inv_cos[k] * s + self.inv_sin[k] * (1.0 - c)) / kf;
        }
        TAU * turns + self.psi_scale * acc
    }

    /// The ψ normalization frequency 2π[∮dθ/Ω]⁻¹.
    pub fn normalized_frequency(&self) -> f64 {
        self.psi_scale
    }

    /// Ω(θ) by trigonometric interpolation of the tabulated 1/Ω.
    pub fn omega_at(&self, theta: f64) -> f64 {
        let mut inv = self.inv_cos[0];
        for k in 1..self.inv_cos.len() {
            let (s, c) = (k as f64 * theta).sin_cos();
            inv += self.inv_cos[k] * c + self.inv_sin[k] * s;
        }
        1.0 / inv
    }

    /// R(θ) by periodic four-point Lagrange interpolation of the table.
    pub fn r_at(&self, theta: f64) -> f64 {
        periodic_lagrange4(&self.r_table, theta)
    }

    /// ψ on the stored grid.
    pub fn psi_table(&self) -> Vec<f64> {
        self.theta_grid.iter().map(|&t| self.psi(t)).collect()
    }
}

/// Four-point Lagrange interpolation on a uniform periodic grid over [0, 2π).
pub(crate) fn periodic_lagrange4(table: &[f64], theta: f64) -> f64 {
    let n = table.len();
    let u = (theta / TAU).rem_euclid(1.0) * n as f64;
    let i = u.floor() as isize;
    let s = u - i as f64;
    let at = |j: isize| table[(i + j).rem_euclid(n as isize) as usize];
    let (fm, f0, f1, f2) = (at(-1), at(0), at(1), at(2));
    -s * (s - 1.0) * (s - 2.0) / 6.0 * fm + (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0 * f0
        - (s + 1.0) * s * (s - 2.0) / 2.0 * f1
        + (s + 1.0) * s * (s - 1.0) / 6.0 * f2
}

/// Measures the cycle with `n_theta` grid points and default settings.
pub fn measure(p: &Params, n_theta: usize) -> Result<LimitCycleData> {
    measure_with(p, &MeasureConfig { n_theta, ..MeasureConfig::default() })
}

pub fn measure_with(p: &Params, cfg: &MeasureConfig) -> Result<LimitCycleData> {
    p.validate()?;
    let n = cfg.n_theta;
    if n < 8 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParams(format!("n_theta must be even and at least 8, got {n}")));
    }
    if cfg.n_returns < 20 {
        return Err(Error::InvalidParams("at least 20 returns are averaged".into()));
    }
    if p.eps == 0.0 {
        return Ok(LimitCycleData::harmonic(*p, n));
    }
    let settled = settle_with(p, cfg.n_transient.unwrap_or_else(|| default_transient(p.eps)), cfg.tol)?;

    let theta_grid: Vec<f64> = (0..n).map(|k| TAU * k as f64 / n as f64).collect();
    let mut r_table = vec![0.0; n];
    let mut omega_table = vec![0.0; n];
    r_table[0] = settled.x.abs();
    omega_table[0] = angular_rate(settled.x, 0.0, p);
    let mut next = 1usize;
    let mut return_times = vec![0.0];
    let mut next_return = 1usize;
    let mut buf = [0.0; 3];
    theta_flow(p, [settled.x, 0.0, 0.0], 0.0, TAU * cfg.n_returns as f64, cfg.tol, |st| {
        let th1 = st.t();
        if next < n && theta_grid[next] <= th1 {
            let seg = st.dense();
            while next < n && theta_grid[next] <= th1 {
                seg.eval_into(theta_grid[next], &mut buf);
                r_table[next] = polar(buf[0], buf[1], p.omega).0;
                omega_table[next] = angular_rate(buf[0], buf[1], p);
                next += 1;
            }
        }
        while next_return <= cfg.n_returns && TAU * next_return as f64 <= th1 {
            let target = TAU * next_return as f64;
            let t = if target == th1 { st.y()[2] } else { st.dense().eval(target)[2] };
            return_times.push(t);
            next_return += 1;
        }
        Ok(())
    })?;
    let n_ret = return_times.len() - 1;
    let period = return_times[n_ret] / n_ret as f64;
    let frequency = TAU / period;

    if let Some(k) = omega_table.iter().position(|&o| !(o > 0.0)) {
        return Err(Error::NonPositiveRate { theta: theta_grid[k], value: omega_table[k] });
    }
    let inv: Vec<f64> = omega_table.iter().map(|o| 1.0 / o).collect();
    let (inv_cos, inv_sin) = real_dft(&inv);
    let psi_scale = 1.0 / inv_cos[0];
    let rel = (psi_scale - frequency).abs() / frequency;
    if rel > 1e-8 {
        return Err(Error::Inconsistent(rel));
    }
    Ok(LimitCycleData {
        params: *p,
        period,
        frequency,
        amplitude: settled.x.abs(),
        theta_grid,
        r_table,
        omega_table,
        return_times,
        inv_cos,
        inv_sin,
        psi_scale,
    })
}

/// Coefficients of f(θ) ≈ a₀ + Σ aₖ cos kθ + bₖ sin kθ for k < n/2 from n
/// uniform samples (the Nyquist term is dropped).
fn real_dft(f: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = f.len();
    let cos_tab: Vec<f64> = (0..n).map(|j| (TAU * j as f64 / n as f64).cos()).collect();
    let sin_tab: Vec<f64> = (0..n).map(|j| (TAU * j as f64 / n as f64).sin()).collect();
    let half = n / 2;
    let mut a = vec![0.0; half];
    let mut b = vec![0.0; half];
    for k in 0..half {
        let (mut sa, mut sb) = (0.0, 0.0);
        for (j, fj) in f.iter().enumerate() {
            let idx = (j * k) % n;
            sa += fj * cos_tab[idx];
            sb += fj * sin_tab[idx];
        }
        let scale = if k == 0 { 1.0 / n as f64 } else { 2.0 / n as f64 };
        a[k] = sa * scale;
        b[k] = sb * scale;
    }
    (a, b)
}

/// ψ(θ) = ω(λ)∫₀^θ dθ′/Ω(θ′, λ).
pub fn psi_of_theta(lc: &LimitCycleData, theta: f64) -> f64 {
    lc.psi(theta)
}
