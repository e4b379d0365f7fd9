//! Flat `key = value` run configuration.
//!
//! One struct drives every command: equation case, physical parameters,
//! discretization, initial-data family, and output routing. A config file
//! assigns any subset of keys over the defaults; command-line flags apply on
//! top of that. Unknown keys are rejected by name rather than ignored, so a
//! typo cannot silently fall back to a default.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::initial::InitialData;
use crate::integrate::IntegratorConfig;
use crate::params::ModelParams;

use super::format_f64;

/// The subcommand a configuration drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Simulate,
    SimulatePde,
    VerifyBounds,
    BlowupFit,
    Inequalities,
    Sweep,
    Compare,
}

impl CommandKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CommandKind::Simulate => "simulate",
            CommandKind::SimulatePde => "simulate-pde",
            CommandKind::VerifyBounds => "verify-bounds",
            CommandKind::BlowupFit => "blowup-fit",
            CommandKind::Inequalities => "inequalities",
            CommandKind::Sweep => "sweep",
            CommandKind::Compare => "compare",
        }
    }
}

impl FromStr for CommandKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "simulate" => CommandKind::Simulate,
            "simulate-pde" => CommandKind::SimulatePde,
            "verify-bounds" => CommandKind::VerifyBounds,
            "blowup-fit" => CommandKind::BlowupFit,
            "inequalities" => CommandKind::Inequalities,
            "sweep" => CommandKind::Sweep,
            "compare" => CommandKind::Compare,
            other => {
                return Err(Error::invalid(
                    "command",
                    format!("unknown command '{other}'"),
                ))
            }
        })
    }
}

impl fmt::Display for CommandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Initial-data family selector; see [`InitialData`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `A_n = (2δ+1)/n^p`.
    Power,
    /// `A_n = 2δ/n⁵`, the borderline of the mode lower bounds.
    Threshold,
    /// Coefficients given literally via `coeffs`.
    Explicit,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Power => "power",
            Family::Threshold => "threshold",
            Family::Explicit => "explicit",
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "power" => Family::Power,
            "threshold" => Family::Threshold,
            "explicit" => Family::Explicit,
            other => {
                return Err(Error::invalid(
                    "family",
                    format!("unknown initial-data family '{other}'"),
                ))
            }
        })
    }
}

/// Output encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "csv" => OutputFormat::Csv,
            "json" => OutputFormat::Json,
            other => {
                return Err(Error::invalid(
                    "format",
                    format!("unknown output format '{other}' (expected csv or json)"),
                ))
            }
        })
    }
}

/// Fully resolved run configuration.
///
/// Defaults describe the standard small run: main case `(1, 1)`, no
/// dissipation, `δ = 1`, power-law data with `p = 5`, 32 modes on a 256-point
/// grid, integrated to `t = 0.3`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub case_a: u8,
    pub case_b: u8,
    pub kappa: f64,
    pub alpha: f64,
    pub delta: f64,
    /// Power-law exponent for [`Family::Power`].
    pub p: f64,
    pub n_modes: usize,
    pub grid_points: usize,
    pub dt: f64,
    pub tol: f64,
    pub t_end: f64,
    /// Snapshots land every `stride · dt` of simulated time.
    pub stride: usize,
    pub family: Family,
    /// Sine coefficients for [`Family::Explicit`]; must have `n_modes`
    /// entries when that family is selected.
    pub coeffs: Vec<f64>,
    /// Magnitude at which a run is declared divergent.
    pub guard: f64,
    /// Output path; `None` writes to stdout and echoes as `-`.
    pub out: Option<String>,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: CommandKind::Simulate,
            case_a: 1,
            case_b: 1,
            kappa: 0.0,
            alpha: 1.0,
            delta: 1.0,
            p: 5.0,
            n_modes: 32,
            grid_points: 256,
            dt: 1e-3,
            tol: 1e-10,
            t_end: 0.3,
            stride: 10,
            family: Family::Power,
            coeffs: Vec::new(),
            guard: 1e12,
            out: None,
            format: OutputFormat::Csv,
        }
    }
}

impl RunConfig {
    /// Applies `key = value` assignments from a config file on top of the
    /// current values. Lines are trimmed; empty lines and `#` comments are
    /// skipped. Fails on the first unknown key or malformed value.
    pub fn apply(mut self, text: &str) -> Result<Self> {
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::parse(line_no, format!("expected 'key = value', got '{line}'"))
            })?;
            self.set(key.trim(), value.trim(), line_no)?;
        }
        Ok(self)
    }

    fn set(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        fn float(value: &str, line: usize, key: &str) -> Result<f64> {
            value
                .parse()
                .map_err(|_| Error::parse(line, format!("invalid float for {key}: '{value}'")))
        }
        fn integer<T: FromStr>(value: &str, line: usize, key: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::parse(line, format!("invalid integer for {key}: '{value}'")))
        }
        match key {
            "command" => self.command = value.parse()?,
            "case_a" => self.case_a = integer(value, line, key)?,
            "case_b" => self.case_b = integer(value, line, key)?,
            "kappa" => self.kappa = float(value, line, key)?,
            "alpha" => self.alpha = float(value, line, key)?,
            "delta" => self.delta = float(value, line, key)?,
            "p" => self.p = float(value, line, key)?,
            "n_modes" => self.n_modes = integer(value, line, key)?,
            "grid_points" => self.grid_points = integer(value, line, key)?,
            "dt" => self.dt = float(value, line, key)?,
            "tol" => self.tol = float(value, line, key)?,
            "t_end" => self.t_end = float(value, line, key)?,
            "stride" => self.stride = integer(value, line, key)?,
            "family" => self.family = value.parse()?,
            "coeffs" => {
                let mut coeffs = Vec::new();
                for tok in value.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                    coeffs.push(float(tok, line, key)?);
                }
                self.coeffs = coeffs;
            }
            "guard" => self.guard = float(value, line, key)?,
            "out" => {
                self.out = if value == "-" {
                    None
                } else {
                    Some(value.to_string())
                }
            }
            "format" => self.format = value.parse()?,
            other => {
                return Err(Error::UnknownKey {
                    key: other.to_string(),
                })
            }
        }
        Ok(())
    }

    /// The configuration echoed as `(key, value)` pairs in a fixed order
    /// (`command` is emitted separately by the header).
    pub fn echo_entries(&self) -> Vec<(&'static str, String)> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| format_f64(c))
            .collect::<Vec<_>>()
            .join(",");
        vec![
            ("case_a", self.case_a.to_string()),
            ("case_b", self.case_b.to_string()),
            ("kappa", format_f64(self.kappa)),
            ("alpha", format_f64(self.alpha)),
            ("delta", format_f64(self.delta)),
            ("p", format_f64(self.p)),
            ("n_modes", self.n_modes.to_string()),
            ("grid_points", self.grid_points.to_string()),
            ("dt", format_f64(self.dt)),
            ("tol", format_f64(self.tol)),
            ("t_end", format_f64(self.t_end)),
            ("stride", self.stride.to_string()),
            ("family", self.family.as_str().to_string()),
            ("coeffs", coeffs),
            ("guard", format_f64(self.guard)),
            ("out", self.out.clone().unwrap_or_else(|| "-".to_string())),
            ("format", self.format.as_str().to_string()),
        ]
    }

    /// Model parameters implied by this configuration.
    pub fn model_params(&self) -> Result<ModelParams> {
        ModelParams::new(
            self.case_a,
            self.case_b,
            self.kappa,
            self.alpha,
            self.delta,
            self.n_modes,
            self.grid_points,
        )
    }

    /// Initial data implied by this configuration.
    pub fn initial_data(&self) -> Result<InitialData> {
        match self.family {
            Family::Power => InitialData::power_law(self.delta, self.p, self.n_modes),
            Family::Threshold => InitialData::threshold(self.delta, self.n_modes),
            Family::Explicit => {
                if self.coeffs.len() != self.n_modes {
                    return Err(Error::invalid(
                        "coeffs",
                        format!(
                            "explicit family needs exactly n_modes = {} coefficients, got {}",
                            self.n_modes,
                            self.coeffs.len()
                        ),
                    ));
                }
                InitialData::explicit(self.coeffs.clone())
            }
        }
    }

    /// Integrator configuration implied by this configuration; snapshots land
    /// every `stride · dt`.
    pub fn integrator_config(&self) -> Result<IntegratorConfig> {
        if self.stride == 0 {
            return Err(Error::invalid("stride", "stride must be at least 1"));
        }
        let cfg = IntegratorConfig::new(self.dt, self.t_end)
            .with_tol(self.tol)
            .with_sample_interval(self.stride as f64 * self.dt)
            .with_overflow_guard(self.guard);
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parses a config file over the defaults.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    RunConfig::default().apply(text)
}
