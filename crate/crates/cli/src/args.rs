//! Command-line surface and config resolution.
//!
//! Flags mirror the config-file keys one to one; resolution routes every
//! override through the same `key = value` parser the file uses, so a bad
//! `--family` and a bad `family = …` line fail with the same message.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use transport_core::formats::{format_f64, CommandKind, RunConfig};

#[derive(Parser)]
#[command(
    name = "transport",
    version,
    about = "Spectral simulator and bound verifier for nonlocal transport models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Integrate the exact mode hierarchy; writes the (t, n, w) trajectory table
    Simulate(RunArgs),
    /// Evolve the collocation PDE; writes the (t, x, u) field table
    SimulatePde(RunArgs),
    /// Integrate, then check every sample against the proven mode lower bounds
    VerifyBounds(RunArgs),
    /// Integrate and locate the singularity from analyticity-strip decay
    BlowupFit(RunArgs),
    /// Check the auxiliary inequalities behind the dissipative estimates
    Inequalities(RunArgs),
    /// Blow-up fit over a parameter grid; one verdict row per combination
    Sweep(SweepArgs),
    /// Run both solvers on the same data and report their worst discrepancy
    Compare(RunArgs),
}

/// Flags shared by every subcommand. All are optional: values come from the
/// defaults, then the `--config` file, then these flags.
#[derive(Args)]
pub struct RunArgs {
    /// Config file of `key = value` lines; flags override its values
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Hilbert-transform exponent a of the advecting field
    #[arg(long, value_name = "0|1")]
    pub case_a: Option<u8>,

    /// Derivative exponent b of the advecting field
    #[arg(long, value_name = "0|1")]
    pub case_b: Option<u8>,

    /// Dissipation strength κ (0 disables dissipation)
    #[arg(long)]
    pub kappa: Option<f64>,

    /// Fractional dissipation order α of Λ^α
    #[arg(long)]
    pub alpha: Option<f64>,

    /// Amplitude parameter δ of the initial-data families
    #[arg(long)]
    pub delta: Option<f64>,

    /// Decay exponent for the power-law family A_n = (2δ+1)/n^p
    #[arg(long)]
    pub p: Option<f64>,

    /// Number of retained modes N
    #[arg(long)]
    pub n_modes: Option<usize>,

    /// Collocation grid size M (power of two)
    #[arg(long)]
    pub grid_points: Option<usize>,

    /// Base time step
    #[arg(long)]
    pub dt: Option<f64>,

    /// Local error tolerance of the adaptive mode integrator
    #[arg(long)]
    pub tol: Option<f64>,

    /// Integration horizon
    #[arg(long)]
    pub t_end: Option<f64>,

    /// Snapshots land every stride·dt of simulated time
    #[arg(long)]
    pub stride: Option<usize>,

    /// Initial-data family
    #[arg(long, value_name = "power|threshold|explicit")]
    pub family: Option<String>,

    /// Comma-separated sine coefficients for the explicit family
    #[arg(long, value_name = "LIST")]
    pub coeffs: Option<String>,

    /// Amplitude at which a run is declared divergent
    #[arg(long)]
    pub guard: Option<f64>,

    /// Output path for the table; `-` or omitted writes to stdout
    #[arg(long, value_name = "PATH")]
    pub out: Option<String>,

    /// Table format
    #[arg(long, value_name = "csv|json")]
    pub format: Option<String>,
}

impl RunArgs {
    /// Resolves the final configuration: defaults, config file, then flags.
    pub fn resolve(&self, command: CommandKind) -> Result<RunConfig, String> {
        let mut config = RunConfig::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
            config = config
                .apply(&text)
                .map_err(|e| format!("in config file {}: {e}", path.display()))?;
        }
        let overrides = self.override_lines();
        if !overrides.is_empty() {
            config = config.apply(&overrides).map_err(|e| e.to_string())?;
        }
        config.command = command;
        Ok(config)
    }

    /// The given flags as config-file lines, in the key order of the echo.
    fn override_lines(&self) -> String {
        let mut lines = Vec::new();
        let mut push = |key: &str, value: Option<String>| {
            if let Some(v) = value {
                lines.push(format!("{key} = {v}"));
            }
        };
        push("case_a", self.case_a.map(|v| v.to_string()));
        push("case_b", self.case_b.map(|v| v.to_string()));
        push("kappa", self.kappa.map(format_f64));
        push("alpha", self.alpha.map(format_f64));
        push("delta", self.delta.map(format_f64));
        push("p", self.p.map(format_f64));
        push("n_modes", self.n_modes.map(|v| v.to_string()));
        push("grid_points", self.grid_points.map(|v| v.to_string()));
        push("dt", self.dt.map(format_f64));
        push("tol", self.tol.map(format_f64));
        push("t_end", self.t_end.map(format_f64));
        push("stride", self.stride.map(|v| v.to_string()));
        push("family", self.family.clone());
        push("coeffs", self.coeffs.clone());
        push("guard", self.guard.map(format_f64));
        push("out", self.out.clone());
        push("format", self.format.clone());
        lines.join("\n")
    }
}

/// `sweep` adds per-axis value lists on top of the shared flags. An axis that
/// is not given uses the single value from the resolved config; an axis given
/// as an empty string contributes no values, making the grid empty.
#[derive(Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub run: RunArgs,

    /// Comma-separated κ values for the grid
    #[arg(long, value_name = "LIST")]
    pub kappas: Option<String>,

    /// Comma-separated α values for the grid
    #[arg(long, value_name = "LIST")]
    pub alphas: Option<String>,

    /// Comma-separated δ values for the grid
    #[arg(long, value_name = "LIST")]
    pub deltas: Option<String>,
}

/// Parses one sweep axis: `None` falls back to the config's single value,
/// `Some("")` is an empty axis, anything else a comma-separated float list.
pub fn parse_axis(raw: &Option<String>, name: &str, fallback: f64) -> Result<Vec<f64>, String> {
    match raw {
        None => Ok(vec![fallback]),
        Some(text) if text.trim().is_empty() => Ok(Vec::new()),
        Some(text) => text
            .split(',')
            .map(|part| {
                let part = part.trim();
                part.parse::<f64>()
                    .map_err(|_| format!("{name}: cannot parse `{part}` as a number"))
            })
            .collect(),
    }
}
