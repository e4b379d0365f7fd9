//! `transport` — deterministic driver for the spectral transport toolkit.
//!
//! Every subcommand resolves one [`RunConfig`](transport_core::formats::RunConfig)
//! from defaults, an optional `--config` file, and command-line flags (in that
//! order of increasing precedence), then executes and writes machine-readable
//! tables whose headers embed the full resolved configuration plus its SHA-256.
//! Identical invocations produce byte-identical outputs.
//!
//! Exit codes: `0` success / verification PASS, `1` verification FAIL,
//! `2` usage or configuration error, `3` numerical divergence before `t_end`
//! (an expected, reportable outcome for blow-up studies — partial output is
//! still written).

mod args;
mod commands;

use clap::Parser;

use args::{Cli, Command};
use transport_core::formats::CommandKind;

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(a) => a
            .resolve(CommandKind::Simulate)
            .and_then(|c| commands::simulate(&c)),
        Command::SimulatePde(a) => a
            .resolve(CommandKind::SimulatePde)
            .and_then(|c| commands::simulate_pde(&c)),
        Command::VerifyBounds(a) => a
            .resolve(CommandKind::VerifyBounds)
            .and_then(|c| commands::verify_bounds_cmd(&c)),
        Command::BlowupFit(a) => a
            .resolve(CommandKind::BlowupFit)
            .and_then(|c| commands::blowup_fit(&c)),
        Command::Inequalities(a) => a
            .resolve(CommandKind::Inequalities)
            .and_then(|c| commands::inequalities(&c)),
        Command::Sweep(a) => a
            .run
            .resolve(CommandKind::Sweep)
            .and_then(|c| commands::sweep(&c, a)),
        Command::Compare(a) => a
            .resolve(CommandKind::Compare)
            .and_then(|c| commands::compare(&c)),
    };
    let code = match result {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            2
        }
    };
    std::process::exit(code);
}
