//! Command-line driver: frequency series, limit-cycle measurement, loop
//! integrals, geometric-phase sweeps and the coupled-oscillator comparison.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 numerical or
//! I/O failure.

pub mod config;
pub mod svg;
pub mod table;

use clap::{Args, Parser, Subcommand};
use config::{parse_point, parse_range, Command, ConventionArg, LoopArg, RunConfig};
use hannay_vdp::geophase::{convergence_study_with, worker_pool, FrozenSource, PhaseConvention, StudyRow, SweepContext};
use hannay_vdp::hannay::{self, REFERENCE_ELLIPSE, REFERENCE_SQUARE};
use hannay_vdp::limit_cycle::{measure_with, MeasureConfig};
use hannay_vdp::ode::IntegratorConfig;
use hannay_vdp::resonance::{self, CoupledAveraged, CoupledParams};
use hannay_vdp::series::{self, SeriesOrder};
use hannay_vdp::{Error, ParamLoop, Params};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use table::ResultTable;

/// Limit-cycle phase of the sweep over the square loop at 500 cycles, read
/// off the reference figure.
pub const REFERENCE_SQUARE_SWEEP: f64 = 0.0103;
/// Same for the ellipse loop.
pub const REFERENCE_ELLIPSE_SWEEP: f64 = 0.013;

#[derive(Parser, Debug)]
#[command(name = "hannay-vdp", version, about = "Van der Pol limit cycles, Hannay angles and geometric phases", arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Frequency series of the limit cycle, optionally against a measurement.
    Freq(FreqArgs),
    /// Measure one limit cycle and tabulate R(θ), Ω(θ) and ψ(θ).
    Cycle(CycleArgs),
    /// Loop integral of the connection by line quadrature and by area.
    Hannay(HannayArgs),
    /// Geometric phase from slow sweeps around a loop.
    Geophase(SweepArgs),
    /// Geometric phase against sweep duration, with the loop integral as asymptote.
    Fig1(SweepArgs),
    /// Coupled oscillators against their averaged flow.
    Resonance(ResonanceArgs),
    /// Quick invariant checks.
    Selftest,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// JSON file with settings; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the result table as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FreqArgs {
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    /// Highest power of ε kept (1 to 4).
    #[arg(long)]
    order: Option<u8>,
    /// Also measure the frequency by simulation.
    #[arg(long)]
    measure: bool,
    #[arg(long)]
    n_theta: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct CycleArgs {
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    n_theta: Option<usize>,
    /// Poincaré-map convergence tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct LoopFlags {
    #[arg(long = "loop", value_enum)]
    loop_kind: Option<LoopArg>,
    /// Square loop ω range, `lo:hi`.
    #[arg(long = "omega", value_parser = parse_range)]
    omega_range: Option<[f64; 2]>,
    /// Square loop ε range, `lo:hi`.
    #[arg(long = "eps", value_parser = parse_range)]
    eps_range: Option<[f64; 2]>,
    /// Ellipse centre `ω,ε`.
    #[arg(long, value_parser = parse_point)]
    center: Option<[f64; 2]>,
    /// Ellipse semi-axes `a_ω,a_ε`.
    #[arg(long, value_parser = parse_point)]
    axes: Option<[f64; 2]>,
    /// Ellipse start phase.
    #[arg(long, allow_hyphen_values = true)]
    phase: Option<f64>,
}

#[derive(Args, Debug)]
struct HannayArgs {
    #[command(flatten)]
    lp: LoopFlags,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    lp: LoopFlags,
    /// Sweep durations in oscillation periods at λ(0), comma separated.
    #[arg(long, value_delimiter = ',')]
    cycles: Option<Vec<f64>>,
    /// Integrator tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum)]
    convention: Option<ConventionArg>,
    /// Chebyshev nodes of the frozen-cycle family.
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    n_theta: Option<usize>,
    /// Write an SVG plot of the geometric phase against cycles.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct ResonanceArgs {
    #[arg(long)]
    omega1: Option<f64>,
    #[arg(long)]
    omega2: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    /// Stiffness ω² instead of ω.
    #[arg(long)]
    quadratic: bool,
    /// Comparison horizon (default 1/ε).
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long)]
    alpha1: Option<f64>,
    #[arg(long)]
    alpha2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta2: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    common: Common,
}

impl LoopFlags {
    fn into_config(self, c: RunConfig) -> RunConfig {
        RunConfig {
            loop_kind: self.loop_kind,
            omega_range: self.omega_range,
            eps_range: self.eps_range,
            center: self.center,
            axes: self.axes,
            phase: self.phase,
            ..c
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Self::Usage(_) => 1,
            Self::Numerical(_) => 2,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_) | Error::InvalidConfig(_) | Error::InvalidLoop(_) | Error::NonSimpleLoop => Self::Usage(e.to_string()),
            _ => Self::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::Numerical(e.to_string())
    }
}

type Out<'a> = &'a mut dyn Write;

/// Parses `argv` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(argv: I, out: Out, err: Out) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    1
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let msg = match &f {
                Failure::Usage(m) => format!("error: {m}\n\nRun `hannay-vdp --help` for usage."),
                Failure::Numerical(m) => format!("error: {m}"),
            };
            let _ = writeln!(err, "{msg}");
            f.code()
        }
    }
}

fn load(cmd: Command, flags: RunConfig, file: &Option<PathBuf>) -> Result<RunConfig, Failure> {
    let file = file.as_deref().map(config::read_file).transpose().map_err(Failure::Usage)?;
    config::resolve(cmd, &flags, file.as_ref()).map_err(Failure::Usage)
}

fn dispatch(sub: Sub, out: Out) -> Result<i32, Failure> {
    match sub {
        Sub::Freq(a) => {
            let flags = RunConfig {
                omega: a.omega,
                eps: a.eps,
                order: a.order,
                measure: a.measure.then_some(true),
                n_theta: a.n_theta,
                out: a.common.out,
                ..RunConfig::default()
            };
            freq(&load(Command::Freq, flags, &a.common.config)?, out)
        }
        Sub::Cycle(a) => {
            let flags = RunConfig { omega: a.omega, eps: a.eps, n_theta: a.n_theta, tol: a.tol, out: a.common.out, ..RunConfig::default() };
            cycle(&load(Command::Cycle, flags, &a.common.config)?, out)
        }
        Sub::Hannay(a) => {
            let flags = a.lp.into_config(RunConfig { out: a.common.out, ..RunConfig::default() });
            hannay_cmd(&load(Command::Hannay, flags, &a.common.config)?, out)
        }
        Sub::Geophase(a) => {
            let (flags, file) = sweep_flags(a);
            sweep_cmd(Command::Geophase, &load(Command::Geophase, flags, &file)?, out)
        }
        Sub::Fig1(a) => {
            let (flags, file) = sweep_flags(a);
            sweep_cmd(Command::Fig1, &load(Command::Fig1, flags, &file)?, out)
        }
        Sub::Resonance(a) => {
            let flags = RunConfig {
                omega1: a.omega1,
                omega2: a.omega2,
                eps: a.eps,
                quadratic: a.quadratic.then_some(true),
                horizon: a.horizon,
                alpha1: a.alpha1,
                alpha2: a.alpha2,
                beta1: a.beta1,
                beta2: a.beta2,
                tol: a.tol,
                out: a.common.out,
                ..RunConfig::default()
            };
            resonance_cmd(&load(Command::Resonance, flags, &a.common.config)?, out)
        }
        Sub::Selftest => selftest(out),
    }
}

fn sweep_flags(a: SweepArgs) -> (RunConfig, Option<PathBuf>) {
    let c = RunConfig {
        cycles: a.cycles,
        tol: a.tol,
        convention: a.convention,
        nodes: a.nodes,
        n_theta: a.n_theta,
        svg: a.svg,
        out: a.common.out,
        ..RunConfig::default()
    };
    (a.lp.into_config(c), a.common.config)
}

fn params(c: &RunConfig) -> Result<Params, Failure> {
    Ok(Params::new(c.omega.unwrap(), c.eps.unwrap())?)
}

/// Provenance lines: tool version, command and the resolved configuration
/// without output paths.
fn provenance(cmd: Command, c: &RunConfig) -> Vec<String> {
    let echo = RunConfig { out: None, svg: None, ..c.clone() };
    let mut h = vec![format!("hannay-vdp {}", env!("CARGO_PKG_VERSION")), format!("command: {}", cmd.name())];
    if let Some(o) = c.order {
        h.push(format!("series order: {o}"));
    }
    if let Some(t) = c.tol {
        h.push(format!("tolerance: {t:e}"));
    }
    h.push(format!("config: {}", serde_json::to_string(&echo).expect("config serializes")));
    h
}

fn export(cmd: Command, c: &RunConfig, mut t: ResultTable, extra: &[String], out: Out) -> Result<(), Failure> {
    if let Some(path) = &c.out {
        t.header = provenance(cmd, c);
        t.header.extend(extra.iter().cloned());
        t.write(path)?;
        writeln!(out, "wrote {}", path.display())?;
    }
    Ok(())
}

fn delta_line(label: &str, computed: f64, reference: f64) -> String {
    format!("{label}: computed {computed:.8}, reference {}, delta {:+.3e}", fmt_ref(reference), computed - reference)
}

/// Quoted references print as given; computed ones to 10 digits.
fn fmt_ref(v: f64) -> String {
    let short = v.to_string();
    if short.len() <= 8 { short } else { format!("{v:.10}") }
}

fn freq(c: &RunConfig, out: Out) -> Result<i32, Failure> {
    let p = params(c)?;
    let order = SeriesOrder::new(c.order.unwrap())?;
    let s = series::limit_cycle_frequency(&p, order);
    writeln!(out, "series frequency (order {}): {s:.10}", order.get())?;
    let mut measured = f64::NAN;
    if c.measure == Some(true) {
        let cfg = MeasureConfig { n_theta: c.n_theta.unwrap(), tol: c.tol.unwrap(), ..MeasureConfig::default() };
        measured = measure_with(&p, &cfg)?.frequency;
        writeln!(out, "measured frequency: {measured:.10} (delta vs series {:+.3e})", measured - s)?;
    }
    let mut t = ResultTable::new(&["omega", "eps", "order", "series_frequency", "measured_frequency"]);
    t.push(vec![p.omega, p.eps, order.get() as f64, s, measured]);
    export(Command::Freq, c, t, &[], out)?;
    Ok(0)
}

fn cycle(c: &RunConfig, out: Out) -> Result<i32, Failure> {
    let p = params(c)?;
    let cfg = MeasureConfig { n_theta: c.n_theta.unwrap(), tol: c.tol.unwrap(), ..MeasureConfig::default() };
    let lc = measure_with(&p, &cfg)?;
    let s = series::limit_cycle_frequency(&p, SeriesOrder::new(c.order.unwrap())?);
    let a = series::solution_amplitude(&p);
    writeln!(out, "period: {:.12}", lc.period)?;
    writeln!(out, "frequency: {:.12} (series {s:.12}, delta {:+.3e})", lc.frequency, lc.frequency - s)?;
    writeln!(out, "amplitude: {:.8} (series {a:.8}, delta {:+.3e}; reference 2, delta {:+.3e})", lc.amplitude, lc.amplitude - a, lc.amplitude - 2.0)?;
    let mut t = ResultTable::new(&["theta", "r", "theta_rate", "psi"]);
    let psi = lc.psi_table();
    for (((th, r), om), ps) in lc.theta_grid.iter().zip(&lc.r_table).zip(&lc.omega_table).zip(&psi) {
        t.push(vec![*th, *r, *om, *ps]);
    }
    let extra = [format!("period: {:e}", lc.period), format!("frequency: {:e}", lc.frequency), format!("amplitude: {:e}", lc.amplitude)];
    export(Command::Cycle, c, t, &extra, out)?;
    Ok(0)
}

/// The loop described by `c`, and whether it is the default one for its kind.
fn build_loop(c: &RunConfig) -> Result<(ParamLoop, bool), Failure> {
    Ok(match c.loop_kind.unwrap() {
        LoopArg::Square => {
            let ([w0, w1], [e0, e1]) = (c.omega_range.unwrap(), c.eps_range.unwrap());
            (hannay::make_square_loop(w0, w1, e0, e1)?, [w0, w1, e0, e1] == [0.6, 0.8, 0.1, 0.3])
        }
        LoopArg::Ellipse => {
            let ([w, e], [aw, ae], ph) = (c.center.unwrap(), c.axes.unwrap(), c.phase.unwrap());
            (hannay::make_ellipse_loop(w, e, aw, ae, ph)?, [w, e, aw, ae, ph] == [0.8, 0.1, 0.2, 0.1, 0.0])
        }
    })
}

fn describe(c: &RunConfig) -> String {
    match c.loop_kind.unwrap() {
        LoopArg::Square => {
            let ([w0, w1], [e0, e1]) = (c.omega_range.unwrap(), c.eps_range.unwrap());
            format!("square, omega {w0}:{w1}, eps {e0}:{e1}")
        }
        LoopArg::Ellipse => {
            let ([w, e], [aw, ae]) = (c.center.unwrap(), c.axes.unwrap());
            format!("ellipse, center ({w}, {e}), semi-axes ({aw}, {ae}), phase {}", c.phase.unwrap())
        }
    }
}

fn hannay_cmd(c: &RunConfig, out: Out) -> Result<i32, Failure> {
    let (lp, is_default) = build_loop(c)?;
    let q = hannay::hannay_angle_vdp(&lp)?;
    let g = hannay::green_theorem_vdp(&lp)?;
    writeln!(out, "loop: {}", describe(c))?;
    writeln!(out, "line quadrature: {:.10} (error estimate {:.1e})", q.phi_h, q.error_estimate)?;
    writeln!(out, "area integral: {:.10} (error estimate {:.1e})", g.phi_h, g.error_estimate)?;
    let closed = match c.loop_kind.unwrap() {
        LoopArg::Square => q.closed_form.unwrap(),
        LoopArg::Ellipse => {
            let ([w, _], [aw, ae]) = (c.center.unwrap(), c.axes.unwrap());
            hannay::ellipse_closed_form(w, aw, ae)
        }
    };
    writeln!(out, "closed form: {closed:.10}")?;
    let mut reference = f64::NAN;
    if is_default {
        reference = match c.loop_kind.unwrap() {
            LoopArg::Square => REFERENCE_SQUARE,
            LoopArg::Ellipse => REFERENCE_ELLIPSE,
        };
        writeln!(out, "{}", delta_line("comparison", q.phi_h, reference))?;
        if (q.phi_h - reference).abs() > 1e-4 {
            writeln!(out, "warning: the reference value disagrees with both integrals; the integrals are used downstream")?;
        }
    }
    let mut t = ResultTable::new(&["line_quadrature", "area_integral", "closed_form", "reference"]);
    t.push(vec![q.phi_h, g.phi_h, closed, reference]);
    export(Command::Hannay, c, t, &[format!("loop: {}", describe(c))], out)?;
    Ok(0)
}

fn sweep_cmd(cmd: Command, c: &RunConfig, out: Out) -> Result<i32, Failure> {
    let (lp, is_default) = build_loop(c)?;
    let phi = hannay::hannay_angle_vdp(&lp)?.phi_h;
    let pool = worker_pool()?;
    let source = FrozenSource::Family { nodes: c.nodes.unwrap(), n_theta: c.n_theta.unwrap() };
    let ctx = SweepContext::with_pool(&lp, source, &pool)?;
    let convention = match c.convention.unwrap() {
        ConventionArg::Polar => PhaseConvention::Polar,
        ConventionArg::Advancing => PhaseConvention::Advancing,
    };
    let durations: Vec<f64> = c.cycles.as_ref().unwrap().iter().map(|&n| ctx.duration_for_cycles(n)).collect();
    let mut rows = convergence_study_with(&ctx, &durations, &IntegratorConfig::with_tol(c.tol.unwrap()), convention, &pool);
    // Rows come back sorted by duration, which is monotone in the cycle
    // count; report the counts as requested rather than recomputed.
    let mut requested = c.cycles.clone().unwrap();
    requested.sort_by(f64::total_cmp);
    for (row, n) in rows.iter_mut().zip(requested) {
        row.cycles = n;
    }

    writeln!(out, "loop: {}", describe(c))?;
    writeln!(out, "loop integral phi_H: {phi:.10}")?;
    writeln!(out, "{:>10} {:>14} {:>16} {:>16} {:>14} {:>8}", "cycles", "T", "total", "dynamic", "geometric", "winding")?;
    let mut t = ResultTable::new(&[
        "cycles",
        "duration",
        "total_phase",
        "dynamic_phase",
        "geometric_phase",
        "winding",
        "max_deviation",
        "ok",
        "phi_h",
    ]);
    let mut notes = Vec::new();
    let mut failed = 0;
    for (k, StudyRow { duration, cycles, result }) in rows.iter().enumerate() {
        match result {
            Ok(r) => {
                writeln!(
                    out,
                    "{cycles:>10.1} {duration:>14.4} {:>16.8} {:>16.8} {:>14.8} {:>8}",
                    r.total_phase, r.dynamic_phase, r.geometric_phase, r.winding
                )?;
                t.push(vec![*cycles, *duration, r.total_phase, r.dynamic_phase, r.geometric_phase, r.winding as f64, r.max_deviation, 1.0, phi]);
            }
            Err(e) => {
                failed += 1;
                writeln!(out, "{cycles:>10.1} {duration:>14.4} failed: {e}")?;
                notes.push(format!("row {} (cycles {cycles}) failed: {e}", k + 1));
                let nan = f64::NAN;
                t.push(vec![*cycles, *duration, nan, nan, nan, nan, nan, 0.0, phi]);
            }
        }
    }
    if cmd == Command::Fig1 && is_default {
        let reference = match c.loop_kind.unwrap() {
            LoopArg::Square => REFERENCE_SQUARE_SWEEP,
            LoopArg::Ellipse => REFERENCE_ELLIPSE_SWEEP,
        };
        if let Some(last) = rows.iter().rev().find_map(|r| r.result.as_ref().ok().map(|p| (r.cycles, p.geometric_phase))) {
            writeln!(out, "{}", delta_line(&format!("geometric phase at {} cycles", last.0), last.1, reference))?;
            writeln!(out, "{}", delta_line("against the loop integral", last.1, phi))?;
        }
    }
    if let Some(path) = &c.svg {
        let pts: Vec<(f64, f64)> = t.rows.iter().map(|r| (r[0], r[4])).collect();
        let plot = svg::Plot {
            title: &format!("geometric phase, {}", describe(c)),
            x_label: "T omega(0) / 2 pi",
            y_label: "psi_G",
            series: vec![svg::Series { label: "psi_G", points: &pts }],
            hlines: vec![("phi_H", phi)],
        };
        std::fs::write(path, plot.render()).map_err(|e| Failure::Numerical(format!("{}: {e}", path.display())))?;
        writeln!(out, "wrote {}", path.display())?;
    }
    export(cmd, c, t, &notes, out)?;
    Ok(if failed > 0 { 2 } else { 0 })
}

fn resonance_cmd(c: &RunConfig, out: Out) -> Result<i32, Failure> {
    let (w1, w2, eps) = (c.omega1.unwrap(), c.omega2.unwrap(), c.eps.unwrap());
    let cp = if c.quadratic == Some(true) { CoupledParams::quadratic(w1, w2, eps)? } else { CoupledParams::new(w1, w2, eps)? };
    let start = CoupledAveraged { alpha1: c.alpha1.unwrap(), alpha2: c.alpha2.unwrap(), beta1: c.beta1.unwrap(), beta2: c.beta2.unwrap() };
    let horizon = c.horizon.unwrap();
    let rep = resonance::compare_from(&cp, horizon, &start, &IntegratorConfig::with_tol(c.tol.unwrap()))?;
    let (p1, p2) = resonance::nonresonant_prediction(start.alpha1, start.alpha2, &cp);
    writeln!(out, "stiffness: {}", if cp.quadratic_frequency { "omega^2" } else { "omega" })?;
    writeln!(out, "resonant: {}", rep.resonant)?;
    writeln!(out, "horizon: {horizon}")?;
    writeln!(out, "max amplitude deviation: {:.6e}", rep.alpha_deviation)?;
    writeln!(out, "max phase deviation: {:.6e}", rep.phase_deviation)?;
    writeln!(out, "away-from-resonance phase drift (beta1', beta2'): ({p1:.8}, {p2:.8})")?;
    let (mut d1, mut d2) = (f64::NAN, f64::NAN);
    if !rep.resonant {
        (d1, d2) = resonance::measured_phase_drift(&cp, horizon, &start)?;
        writeln!(out, "measured phase drift: ({d1:.8}, {d2:.8}), delta ({:+.3e}, {:+.3e})", d1 - p1, d2 - p2)?;
    }
    let mut t = ResultTable::new(&["resonant", "alpha_deviation", "phase_deviation", "alpha1_excursion", "drift1_predicted", "drift2_predicted", "drift1_measured", "drift2_measured"]);
    t.push(vec![f64::from(u8::from(rep.resonant)), rep.alpha_deviation, rep.phase_deviation, rep.alpha1_excursion, p1, p2, d1, d2]);
    export(Command::Resonance, c, t, &[], out)?;
    Ok(0)
}

type Check = Box<dyn Fn() -> Result<bool, Error>>;

fn selftest(out: Out) -> Result<i32, Failure> {
    let checks: Vec<(&str, Check)> = vec![
        (
            "frequency series values",
            Box::new(|| {
                let f = |e| series::limit_cycle_frequency(&Params { omega: 1.0, eps: e }, SeriesOrder::MAX);
                Ok((f(0.1) - 0.9993755534).abs() < 1e-10 && (f(0.3) - 0.9944198242).abs() < 1e-10)
            }),
        ),
        (
            "measured frequency against series",
            Box::new(|| {
                let p = Params::new(1.0, 0.1)?;
                let lc = measure_with(&p, &MeasureConfig { n_theta: 64, ..MeasureConfig::default() })?;
                Ok((lc.frequency - series::limit_cycle_frequency(&p, SeriesOrder::MAX)).abs() <= 1e-6)
            }),
        ),
        (
            "square loop integral",
            Box::new(|| {
                let q = hannay::hannay_angle_vdp(&hannay::make_square_loop(0.6, 0.8, 0.1, 0.3)?)?;
                Ok((q.phi_h - q.closed_form.unwrap_or(f64::NAN)).abs() <= 1e-8)
            }),
        ),
        (
            "ellipse area integral",
            Box::new(|| {
                let g = hannay::green_theorem_vdp(&hannay::make_ellipse_loop(0.8, 0.1, 0.2, 0.1, 0.0)?)?;
                Ok((g.phi_h - hannay::ellipse_closed_form(0.8, 0.2, 0.1)).abs() <= 1e-9)
            }),
        ),
        ("dual Hamiltonian conservation", Box::new(dual_conservation)),
        ("invariant manifold of the amplitude flow", Box::new(manifold_invariance)),
        (
            "fixed-point consistency",
            Box::new(|| {
                let mut ok = true;
                for e in [0.1, 0.2, 0.4] {
                    let p = Params::new(1.0, e)?;
                    ok &= (series::numeric_fixed_point_alpha(&p) - series::fixed_point_alpha(&p)).abs() <= e.powi(4);
                    ok &= (series::action_fixed_point(&p) - series::fixed_point_alpha(&p)).abs() <= 1e-12;
                }
                Ok(ok)
            }),
        ),
        (
            "averaged amplitude exchange",
            Box::new(|| {
                let cp = CoupledParams::quadratic(0.7, 1.9, 0.2)?;
                let s = CoupledAveraged { alpha1: 0.4, alpha2: 1.1, beta1: 0.5, beta2: -0.3 };
                let r = resonance::averaged_rhs(&s, 3.0, &cp);
                Ok((cp.omega2 * r.alpha1 + cp.omega1 * r.alpha2).abs() <= 4.0 * f64::EPSILON * (cp.omega2 * r.alpha1).abs())
            }),
        ),
    ];
    let mut failed = 0;
    for (name, check) in &checks {
        let (tag, note) = match check() {
            Ok(true) => ("PASS", String::new()),
            Ok(false) => ("FAIL", String::new()),
            Err(e) => ("FAIL", format!(" ({e})")),
        };
        failed += usize::from(tag == "FAIL");
        writeln!(out, "{tag} {name}{note}")?;
    }
    writeln!(out, "{} of {} checks passed", checks.len() - failed, checks.len())?;
    Ok(if failed > 0 { 2 } else { 0 })
}

fn dual_conservation() -> Result<bool, Error> {
    use hannay_vdp::dual::{hamilton_rhs, hamiltonian, phys_to_cart, CartState, PhysState};
    let p = Params::new(1.0, 0.01)?;
    let s0 = phys_to_cart(&PhysState { x: 1.5, xdot: 0.2, y: 0.3, ydot: -0.1 }, &p);
    let h0 = hamiltonian(&s0, &p);
    let tr = hannay_vdp::ode::integrate(
        |_, y, dy| dy.copy_from_slice(&hamilton_rhs(&CartState::from_slice(y), &p).to_array()),
        &s0.to_array(),
        0.0,
        200.0 * std::f64::consts::PI,
        &IntegratorConfig::with_tol(1e-10),
    )?;
    Ok(tr.states.iter().all(|s| (hamiltonian(&CartState::from_slice(s), &p) - h0).abs() <= 1e-9 * h0.abs().max(1.0)))
}

fn manifold_invariance() -> Result<bool, Error> {
    use hannay_vdp::dual::{alphabeta_rhs, AlphaBeta};
    let p = Params::new(1.0, 0.1)?;
    let s0 = AlphaBeta { alpha1: 0.6, alpha2: 0.6, beta1: 0.4, beta2: -0.4 };
    let tr = hannay_vdp::ode::integrate(
        |_, y, dy| match alphabeta_rhs(&AlphaBeta::from_slice(y), &p) {
            Ok(d) => dy.copy_from_slice(&d.to_array()),
            Err(_) => dy.fill(f64::NAN),
        },
        &s0.to_array(),
        0.0,
        100.0 * std::f64::consts::PI,
        &IntegratorConfig::with_tol(1e-10),
    )?;
    Ok(tr.states.iter().all(|s| (s[0] - s[1]).abs() <= 1e-8 && (s[2] + s[3]).abs() <= 1e-8))
}
