//! `radgrp`: command-line driver for the radiation hydrodynamics solvers.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use radgrp::Error;

#[derive(Parser, Debug)]
#[command(name = "radgrp", version, about = "Exact Riemann and GRP solvers for radiation hydrodynamics")]
struct Cli {
    /// Worker threads for the solvers.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// Configuration file in `section.key = value` format.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Registered case name (see `list-cases`).
    #[arg(long)]
    pub case: Option<String>,
    /// Output directory (or file, for `converge` and `sweep-f`).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a case and write profiles, lineouts and a conservation log.
    Run {
        #[command(flatten)]
        common: Common,
        /// grp, muscl or godunov.
        #[arg(long)]
        scheme: Option<String>,
        /// `N` or `NXxNY`.
        #[arg(long)]
        cells: Option<String>,
        #[arg(long)]
        theta: Option<f64>,
    },
    /// Solve a Riemann problem exactly and print the star region.
    Riemann {
        #[command(flatten)]
        common: Common,
        /// Left state `rho,u,p_tot` (instead of a case).
        #[arg(long, allow_hyphen_values = true)]
        left: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        right: Option<String>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        a_rad: Option<f64>,
        /// Sample points of the written profile.
        #[arg(long)]
        cells: Option<usize>,
    },
    /// Resolve one generalized Riemann problem and print the time derivatives.
    GrpProbe {
        #[command(flatten)]
        common: Common,
        /// Left state `rho,u,p_tot`.
        #[arg(long, allow_hyphen_values = true)]
        left: String,
        #[arg(long, allow_hyphen_values = true)]
        right: String,
        /// Left slopes `drho,du,dp_tot`.
        #[arg(long, allow_hyphen_values = true, default_value = "0,0,0")]
        left_slope: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0,0,0")]
        right_slope: String,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        a_rad: Option<f64>,
    },
    /// Error norms and orders over a sequence of resolutions.
    Converge {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        scheme: Option<String>,
        /// Comma-separated resolutions.
        #[arg(long, default_value = "10,20,40,80,160,320")]
        levels: String,
    },
    /// Largest nonnegative root of the genuine-nonlinearity polynomial over a γ-1 grid.
    SweepF {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 14.0)]
        from: f64,
        #[arg(long, default_value_t = 20.0)]
        to: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
    /// Print the registered cases.
    ListCases {
        #[command(flatten)]
        common: Common,
    },
}

/// Exit status for each failure class.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } => 2,
        Error::Validation { .. } | Error::UnknownCase(_) | Error::InvalidModel(_) | Error::InvalidGrid(_) | Error::DomainMismatch(_) => 3,
        Error::Io(_) => 5,
        _ => 4,
    }
}

fn kind(e: &Error) -> &'static str {
    match exit_code(e) {
        2 => "parse",
        3 => "invalid",
        5 => "io",
        _ => "numerical",
    }
}

fn fail(code: u8, kind: &str, message: &str) -> ExitCode {
    eprintln!("radgrp: error: {kind}: {}", message.replace('\n', " "));
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("bad arguments");
            return fail(2, "usage", line.trim_start_matches("error: "));
        }
    };
    if cli.threads == 0 {
        return fail(2, "usage", "--threads must be at least 1");
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
        return fail(4, "numerical", &e.to_string());
    }
    let result = match cli.command {
        Command::Run { common, scheme, cells, theta } => commands::run(&common, scheme.as_deref(), cells.as_deref(), theta),
        Command::Riemann { common, left, right, gamma, a_rad, cells } => commands::riemann(&common, left.as_deref(), right.as_deref(), (gamma, a_rad), cells),
        Command::GrpProbe { common, left, right, left_slope, right_slope, gamma, a_rad } => {
            commands::grp_probe(&common, [&left, &right, &left_slope, &right_slope], (gamma, a_rad))
        }
        Command::Converge { common, scheme, levels } => commands::converge(&common, scheme.as_deref(), &levels),
        Command::SweepF { common, from, to, step } => commands::sweep_f(&common, from, to, step),
        Command::ListCases { common } => commands::list_cases(&common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(exit_code(&e), kind(&e), &e.to_string()),
    }
}
