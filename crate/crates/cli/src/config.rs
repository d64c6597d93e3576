//! Run configuration: a JSON file mirroring the flags, overlaid by the flags
//! themselves, then completed with per-command defaults.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum LoopArg {
    Square,
    Ellipse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ConventionArg {
    Polar,
    Advancing,
}

/// Every setting any command reads. Keys of the JSON file are the field
/// names; flags use the same names with dashes.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_theta: Option<usize>,
    #[serde(rename = "loop", skip_serializing_if = "Option::is_none")]
    pub loop_kind: Option<LoopArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_range: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_range: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axes: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycles: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convention: Option<ConventionArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadratic: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Freq,
    Cycle,
    Hannay,
    Geophase,
    Fig1,
    Resonance,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Freq => "freq",
            Self::Cycle => "cycle",
            Self::Hannay => "hannay",
            Self::Geophase => "geophase",
            Self::Fig1 => "fig1",
            Self::Resonance => "resonance",
        }
    }
}

pub fn read_file(path: &Path) -> Result<RunConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn to_map(c: &RunConfig) -> Map<String, Value> {
    match serde_json::to_value(c).expect("config serializes") {
        Value::Object(m) => m,
        _ => unreachable!(),
    }
}

/// Flags over file over defaults.
pub fn resolve(cmd: Command, flags: &RunConfig, file: Option<&RunConfig>) -> Result<RunConfig, String> {
    let mut merged = file.map(to_map).unwrap_or_default();
    merged.extend(to_map(flags));
    let partial: RunConfig = serde_json::from_value(Value::Object(merged)).map_err(|e| e.to_string())?;
    let mut full = to_map(&defaults(cmd, &partial));
    full.extend(to_map(&partial));
    let cfg: RunConfig = serde_json::from_value(Value::Object(full)).map_err(|e| e.to_string())?;
    validate(cmd, &cfg)?;
    Ok(cfg)
}

fn defaults(cmd: Command, partial: &RunConfig) -> RunConfig {
    let loop_kind = partial.loop_kind.unwrap_or(LoopArg::Square);
    let loop_defaults = |mut c: RunConfig| {
        c.loop_kind = Some(loop_kind);
        match loop_kind {
            LoopArg::Square => {
                c.omega_range = Some([0.6, 0.8]);
                c.eps_range = Some([0.1, 0.3]);
            }
            LoopArg::Ellipse => {
                c.center = Some([0.8, 0.1]);
                c.axes = Some([0.2, 0.1]);
                c.phase = Some(0.0);
            }
        }
        c
    };
    let sweep_defaults = |mut c: RunConfig, cycles: Vec<f64>| {
        c.cycles = Some(cycles);
        c.tol = Some(1e-11);
        c.convention = Some(ConventionArg::Polar);
        c.nodes = Some(25);
        c.n_theta = Some(256);
        c.order = Some(4);
        c
    };
    let base = RunConfig { order: Some(4), tol: Some(1e-13), ..RunConfig::default() };
    match cmd {
        Command::Freq => RunConfig { omega: Some(1.0), eps: Some(0.1), measure: Some(false), n_theta: Some(512), ..base },
        Command::Cycle => RunConfig { omega: Some(1.0), eps: Some(0.1), n_theta: Some(512), ..base },
        Command::Hannay => loop_defaults(RunConfig { tol: Some(1e-10), ..base }),
        Command::Geophase => sweep_defaults(loop_defaults(RunConfig::default()), vec![500.0]),
        Command::Fig1 => sweep_defaults(loop_defaults(RunConfig::default()), vec![50.0, 100.0, 200.0, 500.0, 1000.0]),
        Command::Resonance => {
            let eps = partial.eps.unwrap_or(0.05);
            RunConfig {
                omega1: Some(1.0),
                omega2: Some(1.0),
                eps: Some(eps),
                quadratic: Some(false),
                horizon: Some(if eps > 0.0 { 1.0 / eps } else { 20.0 }),
                alpha1: Some(0.5),
                alpha2: Some(0.3),
                beta1: Some(0.0),
                beta2: Some(0.4),
                tol: Some(1e-11),
                ..RunConfig::default()
            }
        }
    }
}

fn validate(cmd: Command, c: &RunConfig) -> Result<(), String> {
    if let Some(o) = c.order {
        if !(1..=4).contains(&o) {
            return Err(format!("order must be 1..=4, got {o}"));
        }
    }
    if let Some(t) = c.tol {
        if !(t > 0.0 && t <= 0.1) {
            return Err(format!("tol must lie in (0, 0.1], got {t}"));
        }
    }
    if let Some(cy) = &c.cycles {
        if cy.is_empty() {
            return Err("the cycles list is empty".into());
        }
        if let Some(bad) = cy.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(format!("cycle counts must be positive, got {bad}"));
        }
    }
    if let Some(n) = c.n_theta {
        if n < 8 || n % 2 == 1 {
            return Err(format!("n-theta must be even and at least 8, got {n}"));
        }
    }
    if matches!(cmd, Command::Geophase | Command::Fig1) && c.nodes.is_some_and(|n| n < 3) {
        return Err("nodes must be at least 3".into());
    }
    Ok(())
}

/// `lo:hi` for ranges.
pub fn parse_range(s: &str) -> Result<[f64; 2], String> {
    parse_pair(s, ':')
}

/// `a,b` for points.
pub fn parse_point(s: &str) -> Result<[f64; 2], String> {
    parse_pair(s, ',')
}

fn parse_pair(s: &str, sep: char) -> Result<[f64; 2], String> {
    let (a, b) = s.split_once(sep).ok_or_else(|| format!("expected two numbers separated by '{sep}', got {s:?}"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok([num(a)?, num(b)?])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_and_defaults_fill_the_rest() {
        let file = RunConfig { omega: Some(0.7), eps: Some(0.2), ..RunConfig::default() };
        let flags = RunConfig { eps: Some(0.3), ..RunConfig::default() };
        let c = resolve(Command::Freq, &flags, Some(&file)).unwrap();
        assert_eq!((c.omega, c.eps, c.order), (Some(0.7), Some(0.3), Some(4)));
    }

    #[test]
    fn loop_defaults_follow_the_kind() {
        let flags = RunConfig { loop_kind: Some(LoopArg::Ellipse), ..RunConfig::default() };
        let c = resolve(Command::Hannay, &flags, None).unwrap();
        assert_eq!(c.center, Some([0.8, 0.1]));
        assert_eq!(c.omega_range, None);
    }

    #[test]
    fn rejects_empty_cycle_list_and_unknown_keys() {
        let flags = RunConfig { cycles: Some(vec![]), ..RunConfig::default() };
        assert!(resolve(Command::Fig1, &flags, None).is_err());
        assert!(serde_json::from_str::<RunConfig>(r#"{"omegaa": 1}"#).is_err());
    }

    #[test]
    fn pairs() {
        assert_eq!(parse_range("0.6:0.8").unwrap(), [0.6, 0.8]);
        assert_eq!(parse_point("0.8, 0.1").unwrap(), [0.8, 0.1]);
        assert!(parse_range("0.6").is_err());
    }
}
