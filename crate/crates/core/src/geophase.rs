//! Geometric phase of the limit cycle under a slow closed parameter sweep.
//!
//! The oscillator is integrated with λ(t) = loop(t/T) while the polar angle
//! θ is carried along as a third state, so winding is counted exactly. At
//! the end the total phase is ψ(θ(T), λ(0)) (the loop is closed and the
//! sweep starts at θ = 0), the dynamic phase is ∫ω(λ(t)) dt over the frozen
//! frequencies, and the geometric phase is their difference.
//!
//! Frozen cycles only depend on μ = ε/ω up to a time scale: the cycle at
//! (ω, ε) is the ω = 1 cycle at μ with t ↦ ωt. The default frozen data is
//! therefore a Chebyshev family in μ, which stays spectrally accurate along
//! loops with corners. A uniform grid in s with periodic cubic
//! interpolation is available as well.

use crate::dual::Params;
use crate::error::{Error, Result};
use crate::limit_cycle::{measure_with, periodic_lagrange4, settle, default_transient, LimitCycleData, MeasureConfig};
use crate::loops::ParamLoop;
use crate::ode::{Dop853, IntegratorConfig};
use crate::quad::{integrate_pieces, QuadConfig};
use rayon::prelude::*;
use std::f64::consts::TAU;

/// Environment variable capping worker threads (0 or unset: rayon's default).
pub const THREADS_ENV: &str = "HANNAY_VDP_THREADS";

/// A thread pool sized by [`THREADS_ENV`].
pub fn worker_pool() -> Result<rayon::ThreadPool> {
    let n = match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidConfig(format!("{THREADS_ENV} must be a non-negative integer, got {v:?}")))?,
        _ => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))
}

/// Sign convention for reported phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseConvention {
    /// Standard polar angle of (x, ẋ/ω), which turns clockwise along the
    /// flow. Phases are the negatives of the [`Advancing`](Self::Advancing)
    /// ones; with this sign the geometric phase of a counter-clockwise loop
    /// has the sign of ∮A·dλ.
    #[default]
    Polar,
    /// θ = atan2(−ẋ/ω, x), increasing along the flow.
    Advancing,
}

impl PhaseConvention {
    fn sign(self) -> f64 {
        match self {
            Self::Polar => -1.0,
            Self::Advancing => 1.0,
        }
    }
}

/// Barycentric interpolation on Chebyshev–Lobatto nodes.
#[derive(Debug, Clone, PartialEq)]
struct Chebyshev {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Chebyshev {
    fn new(lo: f64, hi: f64, n: usize) -> Self {
        if n == 1 || hi - lo <= 1e-14 * hi.abs().max(1.0) {
            return Self { nodes: vec![0.5 * (lo + hi)], weights: vec![1.0] };
        }
        let m = n - 1;
        let nodes = (0..n)
            .map(|j| {
                let x = (std::f64::consts::PI * (m - j) as f64 / m as f64).cos();
                (0.5 * (lo + hi) + 0.5 * (hi - lo) * x).clamp(lo, hi)
            })
            .collect();
        let weights = (0..n)
            .map(|j| {
                let w = if j % 2 == 0 { 1.0 } else { -1.0 };
                if j == 0 || j == m {
                    0.5 * w
                } else {
                    w
                }
            })
            .collect();
        Self { nodes, weights }
    }

    /// Interpolation weights at x, summing to one.
    fn weights_at(&self, x: f64, out: &mut Vec<f64>) {
        out.clear();
        if let Some(j) = self.nodes.iter().position(|&t| t == x) {
            out.extend((0..self.nodes.len()).map(|k| if k == j { 1.0 } else { 0.0 }));
            return;
        }
        let mut total = 0.0;
        for (t, w) in self.nodes.iter().zip(&self.weights) {
            let c = w / (x - t);
            out.push(c);
            total += c;
        }
        for c in out.iter_mut() {
            *c /= total;
        }
    }
}

/// Frozen cycles at ω = 1 over a μ = ε/ω interval.
#[derive(Debug, Clone, PartialEq)]
pub struct FrozenFamily {
    cheb: Chebyshev,
    pub cycles: Vec<LimitCycleData>,
}

impl FrozenFamily {
    pub fn build(mu_lo: f64, mu_hi: f64, nodes: usize, n_theta: usize, pool: &rayon::ThreadPool) -> Result<Self> {
        if !(mu_lo >= 0.0 && mu_hi >= mu_lo) || nodes == 0 {
            return Err(Error::InvalidParams(format!("bad frozen family range [{mu_lo}, {mu_hi}] with {nodes} nodes")));
        }
        let cheb = Chebyshev::new(mu_lo, mu_hi, nodes);
        let cfg = MeasureConfig { n_theta, ..MeasureConfig::default() };
        let cycles = pool.install(|| {
            cheb.nodes.par_iter().map(|&mu| measure_with(&Params::new(1.0, mu)?, &cfg)).collect::<Result<Vec<_>>>()
        })?;
        Ok(Self { cheb, cycles })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.cheb.nodes
    }

    /// Frequency of the ω = 1 cycle at μ.
    pub fn unit_frequency(&self, mu: f64) -> f64 {
        let mut w = Vec::with_capacity(self.cycles.len());
        self.cheb.weights_at(mu, &mut w);
        w.iter().zip(&self.cycles).map(|(c, lc)| c * lc.frequency).sum()
    }

    /// Frozen frequency at (ω, ε).
    pub fn frequency(&self, p: &Params) -> f64 {
        p.omega * self.unit_frequency(p.eps / p.omega)
    }

    /// R(θ) at μ.
    pub fn radius(&self, mu: f64, theta: f64) -> f64 {
        let mut w = Vec::with_capacity(self.cycles.len());
        self.cheb.weights_at(mu, &mut w);
        w.iter().zip(&self.cycles).map(|(c, lc)| c * periodic_lagrange4(&lc.r_table, theta)).sum()
    }
}

/// Periodic cubic spline on a uniform grid of [0, 1), kept as the linear map
/// from nodal values to interpolation weights.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSpline {
    n: usize,
    /// Row i gives the second derivative at node i from nodal values.
    curv: Vec<f64>,
}

impl PeriodicSpline {
    pub fn new(n: usize) -> Self {
        assert!(n >= 3, "periodic spline needs at least three nodes");
        let h = 1.0 / n as f64;
        // (h/6)M_{i−1} + (2h/3)M_i + (h/6)M_{i+1} = (f_{i+1} − 2f_i + f_{i−1})/h
        let mut a = vec![0.0; n * n];
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            let (l, r) = ((i + n - 1) % n, (i + 1) % n);
            a[i * n + l] += h / 6.0;
            a[i * n + i] += 2.0 * h / 3.0;
            a[i * n + r] += h / 6.0;
            d[i * n + l] += 1.0 / h;
            d[i * n + i] -= 2.0 / h;
            d[i * n + r] += 1.0 / h;
        }
        Self { n, curv: solve_dense(a, d, n) }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Weights w with spline(s) = Σ w_j f_j.
    pub fn weights(&self, s: f64, out: &mut Vec<f64>) {
        let n = self.n;
        let h = 1.0 / n as f64;
        let u = s.rem_euclid(1.0) * n as f64;
        let i = (u.floor() as usize).min(n - 1);
        let t = u - i as f64;
        let j = (i + 1) % n;
        let a = h * h / 6.0 * ((1.0 - t).powi(3) - (1.0 - t));
        let b = h * h / 6.0 * (t.powi(3) - t);
        out.clear();
        out.extend((0..n).map(|k| a * self.curv[i * n + k] + b * self.curv[j * n + k]));
        out[i] += 1.0 - t;
        out[j] += t;
    }

    pub fn eval(&self, values: &[f64], s: f64) -> f64 {
        let mut w = Vec::with_capacity(self.n);
        self.weights(s, &mut w);
        w.iter().zip(values).map(|(a, b)| a * b).sum()
    }

    /// ∫₀¹ of the spline; the curvature terms cancel over a period, leaving
    /// the trapezoid sum.
    pub fn integral(&self, values: &[f64]) -> f64 {
        values.iter().sum::<f64>() / self.n as f64
    }
}

/// Solves A X = B for dense n×n matrices by partial pivoting.
fn solve_dense(mut a: Vec<f64>, mut b: Vec<f64>, n: usize) -> Vec<f64> {
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i * n + c].abs().total_cmp(&a[j * n + c].abs())).unwrap();
        if p != c {
            for k in 0..n {
                a.swap(c * n + k, p * n + k);
                b.swap(c * n + k, p * n + k);
            }
        }
        let piv = a[c * n + c];
        for r in c + 1..n {
            let f = a[r * n + c] / piv;
            if f != 0.0 {
                for k in c..n {
                    a[r * n + k] -= f * a[c * n + k];
                }
                for k in 0..n {
                    b[r * n + k] -= f * b[c * n + k];
                }
            }
        }
    }
    for c in (0..n).rev() {
        let piv = a[c * n + c];
        for k in 0..n {
            let mut v = b[c * n + k];
            for j in c + 1..n {
                v -= a[c * n + j] * b[j * n + k];
            }
            b[c * n + k] = v / piv;
        }
    }
    b
}

/// Frozen cycles measured at `n_s` uniform loop samples.
#[derive(Debug, Clone, PartialEq)]
pub struct FrozenGrid {
    pub s: Vec<f64>,
    pub cycles: Vec<LimitCycleData>,
    spline: PeriodicSpline,
    freq: Vec<f64>,
}

impl FrozenGrid {
    pub fn frequency(&self, s: f64) -> f64 {
        self.spline.eval(&self.freq, s)
    }

    pub fn radius(&self, s: f64, theta: f64) -> f64 {
        let mut w = Vec::with_capacity(self.s.len());
        self.spline.weights(s, &mut w);
        w.iter().zip(&self.cycles).map(|(c, lc)| c * periodic_lagrange4(&lc.r_table, theta)).sum()
    }

    pub fn psi(&self, s: f64, theta: f64) -> f64 {
        let mut w = Vec::with_capacity(self.s.len());
        self.spline.weights(s, &mut w);
        w.iter().zip(&self.cycles).map(|(c, lc)| c * lc.psi(theta)).sum()
    }

    /// ∫₀¹ frequency ds.
    pub fn mean_frequency(&self) -> f64 {
        self.spline.integral(&self.freq)
    }
}

/// Measures the frozen cycle at `n_s` uniform samples s_k = k/n_s.
pub fn frozen_grid(lp: &ParamLoop, n_s: usize) -> Result<FrozenGrid> {
    frozen_grid_with(lp, n_s, 256, &worker_pool()?)
}

pub fn frozen_grid_with(lp: &ParamLoop, n_s: usize, n_theta: usize, pool: &rayon::ThreadPool) -> Result<FrozenGrid> {
    lp.validate()?;
    if n_s < 3 {
        return Err(Error::InvalidParams(format!("frozen grid needs at least 3 samples, got {n_s}")));
    }
    let s: Vec<f64> = (0..n_s).map(|k| k as f64 / n_s as f64).collect();
    let cfg = MeasureConfig { n_theta, ..MeasureConfig::default() };
    let cycles = pool.install(|| s.par_iter().map(|&sk| measure_with(&lp.params_at(sk), &cfg)).collect::<Result<Vec<_>>>())?;
    let freq = cycles.iter().map(|c| c.frequency).collect();
    Ok(FrozenGrid { s, cycles, spline: PeriodicSpline::new(n_s), freq })
}

/// Where frozen frequencies and radii come from during a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrozenSource {
    /// Chebyshev family in μ = ε/ω.
    Family { nodes: usize, n_theta: usize },
    /// Uniform grid in s with periodic cubic interpolation.
    Grid { n_s: usize, n_theta: usize },
}

impl Default for FrozenSource {
    fn default() -> Self {
        Self::Family { nodes: 25, n_theta: 256 }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Frozen {
    Family(FrozenFamily),
    Grid(FrozenGrid),
}

/// Result of one sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseResult {
    pub total_phase: f64,
    pub dynamic_phase: f64,
    /// total_phase − dynamic_phase.
    pub geometric_phase: f64,
    /// Sweep duration T.
    pub duration: f64,
    /// T ω(λ(0)) / 2π.
    pub cycles: f64,
    /// Completed turns of the advancing angle.
    pub winding: i64,
    /// max |r − R(θ, λ)| over accepted steps.
    pub max_deviation: f64,
    pub steps: usize,
    /// Time spent relaxing onto the cycle at λ(0) after the loop.
    pub relaxation_time: f64,
    pub convention: PhaseConvention,
}

/// A loop with its frozen data and the settled start state, shared by
/// sweeps of different durations.
#[derive(Debug, Clone)]
pub struct SweepContext {
    lp: ParamLoop,
    frozen: Frozen,
    start: LimitCycleData,
    x0: f64,
    omega0: f64,
    omega_min: f64,
    omega_max: f64,
    relax: bool,
}

impl SweepContext {
    pub fn new(lp: &ParamLoop, source: FrozenSource) -> Result<Self> {
        Self::with_pool(lp, source, &worker_pool()?)
    }

    pub fn with_pool(lp: &ParamLoop, source: FrozenSource, pool: &rayon::ThreadPool) -> Result<Self> {
        lp.validate()?;
        let frozen = match source {
            FrozenSource::Family { nodes, n_theta } => {
                let (lo, hi) = lp.mu_range();
                Frozen::Family(FrozenFamily::build(lo.max(0.0), hi, nodes, n_theta, pool)?)
            }
            FrozenSource::Grid { n_s, n_theta } => Frozen::Grid(frozen_grid_with(lp, n_s, n_theta, pool)?),
        };
        let p0 = lp.params_at(0.0);
        let start = measure_with(&p0, &MeasureConfig::default())?;
        let x0 = if p0.eps > 0.0 { settle(&p0, default_transient(p0.eps))?.x } else { 2.0 };
        let (omega_min, omega_max) = lp.omega_range();
        Ok(Self { lp: lp.clone(), frozen, start, x0, omega0: p0.omega, omega_min, omega_max, relax: true })
    }

    /// Reads the phase straight at t = T instead of after relaxing onto the
    /// cycle; the estimate then carries an O(1/T) error that depends on
    /// where in the cycle the sweep ends.
    pub fn without_relaxation(mut self) -> Self {
        self.relax = false;
        self
    }

    pub fn param_loop(&self) -> &ParamLoop {
        &self.lp
    }

    /// Frozen cycle at λ(0).
    pub fn start_cycle(&self) -> &LimitCycleData {
        &self.start
    }

    /// ω(λ(0)).
    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    /// Smallest duration the adiabaticity guard accepts.
    pub fn min_duration(&self) -> f64 {
        50.0 * TAU / self.omega_min
    }

    /// T for a given number of cycles at ω(λ(0)).
    pub fn duration_for_cycles(&self, cycles: f64) -> f64 {
        cycles * TAU / self.omega0
    }

    /// Frozen frequency at loop position s.
    pub fn frequency(&self, s: f64) -> f64 {
        match &self.frozen {
            Frozen::Family(f) => f.frequency(&self.lp.params_at(s)),
            Frozen::Grid(g) => g.frequency(s),
        }
    }

    fn radius(&self, s: f64, theta: f64) -> f64 {
        match &self.frozen {
            Frozen::Family(f) => {
                let [w, e] = self.lp.eval(s);
                f.radius(e / w, theta)
            }
            Frozen::Grid(g) => g.radius(s, theta),
        }
    }

    /// ∫₀¹ ω(λ(s)) ds over the frozen frequencies.
    pub fn mean_frequency(&self) -> Result<f64> {
        match &self.frozen {
            Frozen::Family(_) => {
                let cfg = QuadConfig { abs_tol: 1e-14, rel_tol: 1e-15, max_intervals: 4000 };
                Ok(integrate_pieces(|s| self.frequency(s), &self.lp.breakpoints(), &cfg)?.value)
            }
            Frozen::Grid(g) => Ok(g.mean_frequency()),
        }
    }

    /// Runs one sweep of duration `t_total`.
    pub fn sweep(&self, t_total: f64, cfg: &IntegratorConfig, convention: PhaseConvention) -> Result<PhaseResult> {
        let min = self.min_duration();
        if !(t_total >= min * (1.0 - 1e-12)) {
            return Err(Error::NotAdiabatic { t: t_total, min });
        }
        let cfg = cfg.max_step(cfg.max_step.min(TAU / (8.0 * self.omega_max)));
        cfg.validate()?;
        let lp = &self.lp;
        let brk = lp.breakpoints();
        let mut y = vec![self.x0, 0.0, 0.0];
        let mut max_dev: f64 = 0.0;
        let mut steps = 0;
        for piece in brk.windows(2) {
            let (lo, hi) = (piece[0], piece[1]);
            let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
                let s = (t / t_total).clamp(lo, hi);
                // One-sided velocity from inside the piece.
                let sv = if s >= hi { hi - 1e-12 * (hi - lo) } else { s };
                let [w, e] = lp.eval(s);
                let wdot = lp.velocity(sv)[0] / t_total;
                let (x, v) = (y[0], y[1]);
                let a = -e * (x * x - 1.0) * v - w * w * x;
                let u = -v / w;
                let udot = -a / w + v * wdot / (w * w);
                dy[0] = v;
                dy[1] = a;
                dy[2] = (x * udot - u * v) / (x * x + u * u);
            };
            let t_end = if hi == 1.0 { t_total } else { hi * t_total };
            let mut st = Dop853::new(rhs, lo * t_total, &y, t_end, &cfg)?;
            while !st.done() {
                st.step()?;
                steps += 1;
                let (t, z) = (st.t(), st.y());
                let s = t / t_total;
                let w = lp.eval(s)[0];
                let r = z[0].hypot(z[1] / w);
                max_dev = max_dev.max((r - self.radius(s, z[2].rem_euclid(TAU))).abs());
            }
            y.copy_from_slice(st.y());
        }
        let winding = (y[2] / TAU).floor() as i64;
        let (theta, relaxation_time) = if self.relax { self.relax_onto_cycle(&mut y, t_total, &cfg)? } else { (y[2], 0.0) };
        let total = self.start.psi(theta) - self.start.frequency * relaxation_time;
        let dynamic = t_total * self.mean_frequency()?;
        let sg = convention.sign();
        let (total, dynamic) = (sg * total, sg * dynamic);
        Ok(PhaseResult {
            total_phase: total,
            dynamic_phase: dynamic,
            geometric_phase: total - dynamic,
            duration: t_total,
            cycles: t_total * self.omega0 / TAU,
            winding,
            max_deviation: max_dev,
            steps,
            relaxation_time,
            convention,
        })
    }

    /// Continues at frozen λ(0) one period at a time until the estimate
    /// ψ(θ) − ω(λ(0))·τ of the asymptotic phase stops changing, returning
    /// the final angle and the time τ spent. On the cycle ψ advances at
    /// exactly ω(λ(0)), so the estimate converges as the state relaxes.
    fn relax_onto_cycle(&self, y: &mut [f64], t0: f64, cfg: &IntegratorConfig) -> Result<(f64, f64)> {
        let p = self.start.params;
        if p.eps == 0.0 {
            return Ok((y[2], 0.0));
        }
        let period = self.start.period;
        let budget = default_transient(p.eps);
        let rhs = |_: f64, y: &[f64], dy: &mut [f64]| {
            let (x, v) = (y[0], y[1]);
            let a = -p.eps * (x * x - 1.0) * v - p.omega * p.omega * x;
            let u = -v / p.omega;
            dy[0] = v;
            dy[1] = a;
            dy[2] = (x * (-a / p.omega) - u * v) / (x * x + u * u);
        };
        let estimate = |theta: f64, tau: f64| self.start.psi(theta) - self.start.frequency * tau;
        let mut t = 0.0;
        let mut prev = estimate(y[2], 0.0);
        let mut change = f64::INFINITY;
        for _ in 0..budget {
            let mut st = Dop853::new(rhs, t0 + t, y, t0 + t + period, cfg)?;
            while !st.done() {
                st.step()?;
            }
            y.copy_from_slice(st.y());
            t += period;
            let next = estimate(y[2], t);
            change = (next - prev).abs();
            prev = next;
            if change <= 1e-11 {
                return Ok((y[2], t));
            }
        }
        Err(Error::NoConvergence { distance: change, returns: budget })
    }
}

/// One sweep with default frozen data and the polar sign convention.
pub fn sweep(lp: &ParamLoop, t_total: f64, cfg: &IntegratorConfig) -> Result<PhaseResult> {
    SweepContext::new(lp, FrozenSource::default())?.sweep(t_total, cfg, PhaseConvention::default())
}

/// A row of a convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub duration: f64,
    /// T ω(λ(0)) / 2π.
    pub cycles: f64,
    pub result: Result<PhaseResult>,
}

/// Sweeps every duration in `durations` (run concurrently, rows sorted
/// by T); failures stay in their rows.
pub fn convergence_study_with(
    ctx: &SweepContext,
    durations: &[f64],
    cfg: &IntegratorConfig,
    convention: PhaseConvention,
    pool: &rayon::ThreadPool,
) -> Vec<StudyRow> {
    let mut ts = durations.to_vec();
    ts.sort_by(f64::total_cmp);
    pool.install(|| {
        ts.par_iter()
            .map(|&t| StudyRow { duration: t, cycles: t * ctx.omega0 / TAU, result: ctx.sweep(t, cfg, convention) })
            .collect()
    })
}

/// [`convergence_study_with`] using default frozen data, tolerance 1e−11
/// and the polar convention. Fails if any row fails.
pub fn convergence_study(lp: &ParamLoop, durations: &[f64]) -> Result<Vec<(f64, f64)>> {
    let pool = worker_pool()?;
    let ctx = SweepContext::with_pool(lp, FrozenSource::default(), &pool)?;
    convergence_study_with(&ctx, durations, &IntegratorConfig::with_tol(1e-11), PhaseConvention::default(), &pool)
        .into_iter()
        .map(|r| r.result.map(|p| (r.cycles, p.geometric_phase)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hannay::{hannay_angle_vdp, make_ellipse_loop, make_square_loop};

    fn pool() -> rayon::ThreadPool {
        worker_pool().unwrap()
    }

    #[test]
    fn chebyshev_interpolates_smooth_functions() {
        let c = Chebyshev::new(0.1, 0.6, 21);
        let f: Vec<f64> = c.nodes.iter().map(|x| (3.0 * x).sin()).collect();
        let mut w = Vec::new();
        for x in [0.1, 0.13, 0.35, 0.599] {
            c.weights_at(x, &mut w);
            let v: f64 = w.iter().zip(&f).map(|(a, b)| a * b).sum();
            assert!((v - (3.0 * x).sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn spline_reproduces_trig_and_integrates() {
        let n = 64;
        let sp = PeriodicSpline::new(n);
        let f: Vec<f64> = (0..n).map(|k| (TAU * k as f64 / n as f64).cos()).collect();
        for s in [0.0, 0.013, 0.5, 0.77] {
            assert!((sp.eval(&f, s) - (TAU * s).cos()).abs() < 1e-5);
        }
        assert!(sp.eval(&f, 0.25 / n as f64 * 4.0).is_finite());
        assert!(sp.integral(&f).abs() < 1e-15);
        let mut w = Vec::new();
        sp.weights(3.0 / n as f64, &mut w);
        assert!((w[3] - 1.0).abs() < 1e-12 && w.iter().sum::<f64>() - 1.0 < 1e-12);
    }

    #[test]
    fn family_frequency_matches_series_point() {
        let sq = make_square_loop(0.6, 0.8, 0.1, 0.3).unwrap();
        let (lo, hi) = sq.mu_range();
        let fam = FrozenFamily::build(lo, hi, 25, 64, &pool()).unwrap();
        let f = fam.frequency(&Params::new(0.8, 0.1).unwrap());
        assert!((f - (0.8 - 0.01 / 12.8)).abs() < 1e-5, "{f}");
        let direct = measure_with(&Params::new(0.7, 0.23).unwrap(), &MeasureConfig { n_theta: 64, ..Default::default() }).unwrap();
        assert!((fam.frequency(&Params::new(0.7, 0.23).unwrap()) - direct.frequency).abs() < 1e-11);
    }

    #[test]
    fn constant_loop_grid_is_uniform_and_phase_vanishes() {
        let c = ParamLoop::constant(0.9, 0.2).unwrap();
        let g = frozen_grid_with(&c, 8, 64, &pool()).unwrap();
        assert!(g.cycles.windows(2).all(|w| w[0] == w[1]));
        let ctx = SweepContext::new(&c, FrozenSource::default()).unwrap();
        for cycles in [50.0, 173.0] {
            let r = ctx.sweep(ctx.duration_for_cycles(cycles), &IntegratorConfig::with_tol(1e-11), PhaseConvention::Polar).unwrap();
            assert!(r.geometric_phase.abs() <= 1e-6, "{}", r.geometric_phase);
        }
    }

    #[test]
    fn guard_refuses_fast_sweeps() {
        let sq = make_square_loop(0.6, 0.8, 0.1, 0.3).unwrap();
        let ctx = SweepContext::new(&sq, FrozenSource::Family { nodes: 9, n_theta: 64 }).unwrap();
        let t = ctx.duration_for_cycles(49.0);
        assert!(matches!(ctx.sweep(t, &IntegratorConfig::default(), PhaseConvention::Polar), Err(Error::NotAdiabatic { .. })));
        let el = make_ellipse_loop(0.8, 0.1, 0.2, 0.1, 0.0).unwrap();
        let ctx = SweepContext::new(&el, FrozenSource::Family { nodes: 9, n_theta: 64 }).unwrap();
        assert!(ctx.sweep(ctx.duration_for_cycles(50.0), &IntegratorConfig::default(), PhaseConvention::Polar).is_err());
        assert!(ctx.sweep(ctx.duration_for_cycles(84.0), &IntegratorConfig::default(), PhaseConvention::Polar).is_ok());
    }

    #[test]
    fn bookkeeping_and_conventions() {
        let sq = make_square_loop(0.6, 0.8, 0.1, 0.3).unwrap();
        let ctx = SweepContext::new(&sq, FrozenSource::default()).unwrap();
        let t = ctx.duration_for_cycles(100.0);
        let cfg = IntegratorConfig::with_tol(1e-11);
        let a = ctx.sweep(t, &cfg, PhaseConvention::Polar).unwrap();
        let b = ctx.sweep(t, &cfg, PhaseConvention::Advancing).unwrap();
        for r in [a, b] {
            let sum = r.dynamic_phase + r.geometric_phase;
            assert!((sum - r.total_phase).abs() <= 4.0 * f64::EPSILON * r.total_phase.abs());
        }
        assert_eq!(a.total_phase, -b.total_phase);
        assert_eq!(a.geometric_phase, -b.geometric_phase);
        assert!(a.geometric_phase > 0.0);
        let turns = (b.dynamic_phase / TAU).floor() as i64;
        assert!((b.winding - turns).abs() <= 1, "{} vs {turns}", b.winding);
    }

    #[test]
    fn square_phase_approaches_hannay_angle() {
        let sq = make_square_loop(0.6, 0.8, 0.1, 0.3).unwrap();
        let ctx = SweepContext::new(&sq, FrozenSource::default()).unwrap();
        let r = ctx.sweep(ctx.duration_for_cycles(500.0), &IntegratorConfig::with_tol(1e-11), PhaseConvention::Polar).unwrap();
        let phi = hannay_angle_vdp(&sq).unwrap().phi_h;
        assert!((r.geometric_phase - 0.0103).abs() <= 1e-3, "{}", r.geometric_phase);
        assert!((r.geometric_phase - phi).abs() <= 1.5e-3);
    }

    #[test]
    fn ellipse_trend_towards_hannay_angle() {
        // Smooth loop: the last three rows approach the area integral
        // monotonically and the gap shrinks with 1/T.
        let el = make_ellipse_loop(0.8, 0.1, 0.2, 0.1, 0.0).unwrap();
        let phi = hannay_angle_vdp(&el).unwrap().phi_h;
        let ctx = SweepContext::new(&el, FrozenSource::default()).unwrap();
        let ts: Vec<f64> = [100.0, 200.0, 500.0, 1000.0].iter().map(|&c| ctx.duration_for_cycles(c)).collect();
        let rows = convergence_study_with(&ctx, &ts, &IntegratorConfig::with_tol(1e-11), PhaseConvention::Polar, &pool());
        let gaps: Vec<f64> = rows.iter().map(|r| (r.result.as_ref().unwrap().geometric_phase - phi).abs()).collect();
        assert!(gaps[1] > gaps[2] && gaps[2] > gaps[3], "{gaps:?}");
        // Least-squares slope of the gap against 1/T.
        let x: Vec<f64> = ts.iter().map(|t| 1.0 / t).collect();
        let (mx, my) = (x.iter().sum::<f64>() / 4.0, gaps.iter().sum::<f64>() / 4.0);
        let slope: f64 = x.iter().zip(&gaps).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>()
            / x.iter().map(|a| (a - mx).powi(2)).sum::<f64>();
        assert!(slope > 0.0);
        let last = rows[2].result.as_ref().unwrap().geometric_phase;
        assert!((last - 0.013).abs() <= 1.5e-3 && (last - phi).abs() <= 2e-3, "{last}");
    }

    #[test]
    fn reversal_flips_large_t_phase() {
        let sq = make_square_loop(0.6, 0.8, 0.1, 0.3).unwrap();
        let cfg = IntegratorConfig::with_tol(1e-11);
        let f = SweepContext::new(&sq, FrozenSource::default()).unwrap();
        let b = SweepContext::new(&sq.reversed(), FrozenSource::default()).unwrap();
        let t = f.duration_for_cycles(2000.0);
        let (gf, gb) = (f.sweep(t, &cfg, PhaseConvention::Polar).unwrap(), b.sweep(t, &cfg, PhaseConvention::Polar).unwrap());
        assert!((gf.geometric_phase + gb.geometric_phase).abs() <= 2e-4);
        assert!(gf.geometric_phase > 0.0);
    }

    #[test]
    fn trajectory_follows_frozen_cycle() {
        let sq = make_square_loop(0.6, 0.8, 0.1, 0.3).unwrap();
        let ctx = SweepContext::new(&sq, FrozenSource::default()).unwrap();
        let cfg = IntegratorConfig::with_tol(1e-11);
        let a = ctx.sweep(ctx.duration_for_cycles(250.0), &cfg, PhaseConvention::Polar).unwrap();
        let b = ctx.sweep(ctx.duration_for_cycles(500.0), &cfg, PhaseConvention::Polar).unwrap();
        let ratio = b.max_deviation / a.max_deviation;
        assert!((0.35..=0.65).contains(&ratio), "{ratio}");
    }

    #[test]
    fn grid_refinement_changes_little() {
        let el = make_ellipse_loop(0.8, 0.1, 0.2, 0.1, 0.0).unwrap();
        let cfg = IntegratorConfig::with_tol(1e-11);
        let g64 = SweepContext::new(&el, FrozenSource::Grid { n_s: 64, n_theta: 128 }).unwrap();
        let g128 = SweepContext::new(&el, FrozenSource::Grid { n_s: 128, n_theta: 128 }).unwrap();
        let t = g64.duration_for_cycles(100.0);
        let a = g64.sweep(t, &cfg, PhaseConvention::Polar).unwrap().geometric_phase;
        let b = g128.sweep(t, &cfg, PhaseConvention::Polar).unwrap().geometric_phase;
        assert!((a - b).abs() <= 1e-5, "{a} vs {b}");
        // The family and the grid agree on a smooth loop.
        let fam = SweepContext::new(&el, FrozenSource::default()).unwrap();
        let c = fam.sweep(t, &cfg, PhaseConvention::Polar).unwrap().geometric_phase;
        assert!((b - c).abs() <= 1e-5, "{b} vs {c}");
    }

    #[test]
    fn relaxation_changes_only_the_finite_t_part() {
        let sq = make_square_loop(0.6, 0.8, 0.1, 0.3).unwrap();
        let ctx = SweepContext::new(&sq, FrozenSource::Family { nodes: 17, n_theta: 128 }).unwrap();
        let raw = ctx.clone().without_relaxation();
        let cfg = IntegratorConfig::with_tol(1e-11);
        let t = ctx.duration_for_cycles(300.0);
        let (a, b) = (ctx.sweep(t, &cfg, PhaseConvention::Polar).unwrap(), raw.sweep(t, &cfg, PhaseConvention::Polar).unwrap());
        assert!(a.relaxation_time > 0.0 && b.relaxation_time == 0.0);
        assert!((a.geometric_phase - b.geometric_phase).abs() < 1e-4);
        assert_eq!(a.dynamic_phase, b.dynamic_phase);
    }

    #[test]
    fn study_rows_are_sorted_and_single_row_works() {
        let sq = make_square_loop(0.6, 0.8, 0.1, 0.3).unwrap();
        let ctx = SweepContext::new(&sq, FrozenSource::Family { nodes: 9, n_theta: 64 }).unwrap();
        let ts = [ctx.duration_for_cycles(60.0), ctx.duration_for_cycles(10.0), ctx.duration_for_cycles(55.0)];
        let rows = convergence_study_with(&ctx, &ts, &IntegratorConfig::default(), PhaseConvention::Polar, &pool());
        assert!(rows.windows(2).all(|w| w[0].duration < w[1].duration));
        assert!(rows[0].result.is_err() && rows[1].result.is_ok());
        let one = convergence_study(&sq, &[ctx.duration_for_cycles(50.0)]).unwrap();
        assert_eq!(one.len(), 1);
        assert!((one[0].0 - 50.0).abs() < 1e-12);
    }
}
