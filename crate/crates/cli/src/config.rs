//! Scenario files and sweep specifications.

use std::f64::consts::PI;
use std::path::Path;

use relent::diffraction::DEFAULT_NODES;
use relent::purification::LinkParams;
use serde::Deserialize;

use crate::error::CliError;

/// Default boost speed, a low-Earth-orbit value.
pub const DEFAULT_BETA: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Type1,
    Type2,
    Type3,
}

impl Protocol {
    pub const ALL: [Protocol; 3] = [Protocol::Type1, Protocol::Type2, Protocol::Type3];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::Type1 => "type1",
            Protocol::Type2 => "type2",
            Protocol::Type3 => "type3",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub scale: Scale,
}

/// A single value or an inclusive sweep.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Param {
    Value(f64),
    Sweep(SweepSpec),
}

impl Param {
    pub fn values(&self, field: &str) -> Result<Vec<f64>, CliError> {
        match *self {
            Param::Value(v) if v.is_finite() => Ok(vec![v]),
            Param::Value(v) => Err(CliError::config(field, format!("value {v} is not finite"))),
            Param::Sweep(s) => s.values(field),
        }
    }

    pub fn single(&self, field: &str) -> Result<f64, CliError> {
        match self.values(field)?.as_slice() {
            [v] => Ok(*v),
            _ => Err(CliError::config(field, "this subcommand takes a single value, not a sweep")),
        }
    }
}

impl SweepSpec {
    pub fn values(&self, field: &str) -> Result<Vec<f64>, CliError> {
        let SweepSpec { start, stop, count, scale } = *self;
        if count < 2 {
            return Err(CliError::config(field, format!("sweep count must be at least 2, got {count}")));
        }
        if !(start.is_finite() && stop.is_finite()) || start == stop {
            return Err(CliError::config(field, format!("sweep needs finite start != stop, got {start}..{stop}")));
        }
        let last = (count - 1) as f64;
        match scale {
            Scale::Linear => Ok((0..count).map(|i| start + (stop - start) * i as f64 / last).collect()),
            Scale::Log => {
                if !(start > 0.0 && stop > 0.0) {
                    return Err(CliError::config(field, "log sweep needs positive start and stop"));
                }
                let (a, b) = (start.ln(), stop.ln());
                Ok((0..count).map(|i| (a + (b - a) * i as f64 / last).exp()).collect())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Self { n_theta: DEFAULT_NODES, n_phi: DEFAULT_NODES }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Link {
    pub length: f64,
    pub wavelength: f64,
    pub d_s: f64,
    pub d_a: f64,
}

impl Link {
    pub fn params(&self) -> Result<LinkParams, CliError> {
        LinkParams::new(self.length, self.wavelength, self.d_s, self.d_a)
            .map_err(|e| CliError::config("link", e.to_string()))
    }
}

/// Everything a subcommand may read; absent keys fall back to per-command defaults.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub protocol: Option<Protocol>,
    pub beta: Option<Param>,
    pub theta: Option<Param>,
    pub phi: Option<Param>,
    pub alpha: Option<Param>,
    pub sigma: Option<f64>,
    pub grid: Option<Grid>,
    pub link: Option<Link>,
    pub target_purity: Option<f64>,
    #[serde(default)]
    pub compensate_phases: bool,
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config("--config", format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config { field, message } => {
                CliError::Config { field, message: format!("{}: {message}", path.display()) }
            }
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| {
            let message = e.message().to_string();
            CliError::config(&path_hint(text, e.span()), message)
        })
    }

    pub fn grid(&self) -> Result<Grid, CliError> {
        let g = self.grid.unwrap_or_default();
        if g.n_theta < 2 || g.n_phi < 2 {
            return Err(CliError::config(
                "grid",
                format!("need at least 2 nodes per axis, got {}x{}", g.n_theta, g.n_phi),
            ));
        }
        Ok(g)
    }

    pub fn beta_values(&self) -> Result<Vec<f64>, CliError> {
        param_or(self.beta, Param::Value(DEFAULT_BETA), "beta")
    }

    pub fn sigma_or(&self, default: f64) -> Result<f64, CliError> {
        match self.sigma.unwrap_or(default) {
            s if s > 0.0 && s.is_finite() => Ok(s),
            s => Err(CliError::config("sigma", format!("must be positive, got {s}"))),
        }
    }
}

pub fn param_or(p: Option<Param>, default: Param, field: &str) -> Result<Vec<f64>, CliError> {
    p.unwrap_or(default).values(field)
}

pub fn full_theta() -> Param {
    Param::Sweep(SweepSpec { start: 0.0, stop: PI, count: 31, scale: Scale::Linear })
}

pub fn full_phi() -> Param {
    Param::Sweep(SweepSpec { start: 0.0, stop: 2.0 * PI, count: 31, scale: Scale::Linear })
}

/// Best-effort key name for a parse error: the key on the offending line.
fn path_hint(text: &str, span: Option<std::ops::Range<usize>>) -> String {
    let Some(span) = span else { return "config".into() };
    let start = text[..span.start.min(text.len())].rfind('\n').map_or(0, |i| i + 1);
    let line = text[start..].lines().next().unwrap_or("");
    match line.split_once('=') {
        Some((key, _)) => key.trim().to_string(),
        None => line.trim().trim_matches(['[', ']']).to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_and_log_sweeps() {
        let s = SweepSpec { start: 0.0, stop: 1.0, count: 5, scale: Scale::Linear };
        assert_eq!(s.values("x").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let l = SweepSpec { start: 1e-6, stop: 1e-4, count: 3, scale: Scale::Log };
        let v = l.values("x").unwrap();
        assert!((v[1] / 1e-5 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn malformed_sweeps_rejected() {
        let one = SweepSpec { start: 0.0, stop: 1.0, count: 1, scale: Scale::Linear };
        assert!(one.values("beta").is_err());
        let flat = SweepSpec { start: 1.0, stop: 1.0, count: 3, scale: Scale::Linear };
        assert!(flat.values("beta").is_err());
        let neg = SweepSpec { start: -1.0, stop: 1.0, count: 3, scale: Scale::Log };
        assert!(neg.values("beta").is_err());
    }

    #[test]
    fn parses_values_and_sweeps() {
        let s = Scenario::parse(
            "protocol = \"type2\"\nbeta = 0.5\ntheta = { start = 0.1, stop = 3.0, count = 4 }\n[grid]\nn_theta = 8\nn_phi = 6\n",
        )
        .unwrap();
        assert_eq!(s.protocol, Some(Protocol::Type2));
        assert_eq!(s.beta, Some(Param::Value(0.5)));
        assert_eq!(s.theta.unwrap().values("theta").unwrap().len(), 4);
        assert_eq!(s.grid().unwrap(), Grid { n_theta: 8, n_phi: 6 });
    }

    #[test]
    fn unknown_keys_name_the_field() {
        match Scenario::parse("beta = 0.1\nspeed = 3\n") {
            Err(CliError::Config { field, message }) => {
                assert_eq!(field, "speed");
                assert!(message.contains("unknown field"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        assert!(Scenario::parse("[grid]\nn_theta = 4\nn_phi = 4\nn_r = 2\n").is_err());
    }
}
