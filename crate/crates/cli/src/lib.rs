//! Command-line front end for the `rabi3` toolkit.
//!
//! Every command resolves its settings from built-in defaults, an optional
//! `--config` file of `key = value` lines and command-line flags (highest
//! precedence), writes its artifacts into `--out`, and records the run in
//! `manifest.json` and `resolved.conf`.

pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;
pub mod output;
pub mod range;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::{mean_photon, phase_diagram, scaling, solve, universal_f, SOLVER_KEYS};
use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::manifest::RunManifest;

/// Keys accepted by every command.
pub const COMMON_KEYS: &[(&str, Option<&str>)] = &[("out", Some("out")), ("seed", Some("0")), ("workers", None)];

#[derive(Debug, Parser)]
#[command(name = "rabi3", version, about = "Two-mode three-level quantum Rabi model toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Flat `key = value` settings file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory [default: out].
    #[arg(long)]
    pub out: Option<String>,
    /// Worker threads [default: available cores].
    #[arg(long)]
    pub workers: Option<String>,
    /// Seed of the Lanczos start vectors [default: 0].
    #[arg(long)]
    pub seed: Option<String>,
}

impl Common {
    fn flags(&self) -> Vec<(&'static str, Option<String>)> {
        vec![("out", self.out.clone()), ("workers", self.workers.clone()), ("seed", self.seed.clone())]
    }
}

/// Declares a flag struct; each field name is the setting key and the
/// literal is its command-line flag.
macro_rules! flag_args {
    ($name:ident { $($field:ident => $flag:literal: $help:literal),* $(,)? }) => {
        #[derive(Debug, Args)]
        #[allow(non_snake_case)]
        pub struct $name {
            $(
                #[arg(long = $flag, help = $help, allow_hyphen_values = true)]
                pub $field: Option<String>,
            )*
        }

        impl $name {
            fn flags(&self) -> Vec<(&'static str, Option<String>)> {
                vec![$((stringify!($field), self.$field.clone())),*]
            }
        }
    };
}

flag_args!(SolverArgs {
    tol_energy => "tol-energy": "Lanczos residual tolerance relative to max(1, |E0|)",
    trunc_tol => "trunc-tol": "Relative change accepted between truncation steps",
    tail_tol => "tail-tol": "Probability allowed in the top Fock levels",
    max_krylov => "max-krylov": "Lanczos basis size before a restart",
    max_restarts => "max-restarts": "Lanczos restarts before giving up",
    n1_max => "n1-max": "Initial mode-1 cutoff",
    n2_max => "n2-max": "Initial mode-2 cutoff",
    max_dimension => "max-dimension": "Largest Hilbert-space dimension allowed",
});

flag_args!(PhaseDiagramArgs {
    gamma => "gamma": "gamma = alpha/beta^2 grid (start:stop:step or list)",
    R => "R": "Coupling grid",
    beta => "beta": "Coupling ratio g2/g1",
    delta => "delta": "Lower-level splitting (must be 0)",
});

flag_args!(MeanPhotonArgs {
    alpha => "alpha": "Frequency ratio (exclusive with --gamma)",
    gamma => "gamma": "gamma = alpha/beta^2 grid (exclusive with --alpha)",
    beta => "beta": "Coupling ratio g2/g1",
    delta => "delta": "Lower-level splitting (must be 0)",
    R => "R": "Coupling grid",
    mode => "mode": "1, 2 or both",
});

flag_args!(ScalingArgs {
    alpha => "alpha": "Frequency ratio omega2/omega1",
    beta => "beta": "Coupling ratio g2/g1",
    delta => "delta": "Lower-level splitting (must be 0)",
    eta => "eta": "At least four eta values",
    R => "R": "Absolute coupling grid (replaces --r)",
    r => "r": "Grid of (R - Rc)/Rc",
    basis => "basis": "Oscillator basis: auto or fock",
    fit_window => "fit-window": "auto, all, or the smallest eta to fit",
    nu_min => "nu-min": "Lower end of the nu search",
    nu_max => "nu-max": "Upper end of the nu search",
    synthetic => "synthetic": "Use data generated from the universal function",
    synthetic_nu => "synthetic-nu": "nu of the synthetic data",
    synthetic_kappa_over_nu => "synthetic-kappa-over-nu": "kappa/nu of the synthetic data",
    trunc_1d => "trunc-1d": "Oscillator states of the quartic model",
});

flag_args!(UniversalArgs {
    branch => "branch": "mode1 or mode2 [default: from alpha, beta]",
    alpha => "alpha": "Frequency ratio omega2/omega1",
    beta => "beta": "Coupling ratio g2/g1",
    rprime => "rprime": "Grid of the rescaled coupling r'",
    trunc_1d => "trunc-1d": "Oscillator states of the quartic model",
});

flag_args!(SolveArgs {
    alpha => "alpha": "Frequency ratio omega2/omega1",
    beta => "beta": "Coupling ratio g2/g1",
    delta => "delta": "Lower-level splitting",
    R => "R": "Coupling",
    eta => "eta": "Atomic splitting over omega1",
    basis => "basis": "Oscillator basis: fock or auto",
    dump_state => "dump-state": "Also write state.csv",
});

#[derive(Debug, Subcommand)]
pub enum Command {
    /// η→∞ phase label, order parameters and energy over a (gamma, R) grid.
    PhaseDiagram {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        args: PhaseDiagramArgs,
    },
    /// η→∞ mean photon numbers per unit η.
    MeanPhoton {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        args: MeanPhotonArgs,
    },
    /// Exact-diagonalization sweep with critical-point and collapse fits.
    Scaling {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        args: ScalingArgs,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Universal scaling function of the quartic effective model.
    UniversalF {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        args: UniversalArgs,
    },
    /// Ground state at a single parameter point.
    Solve {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        args: SolveArgs,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

fn keys(parts: &[&[(&'static str, Option<&'static str>)]]) -> Vec<(&'static str, Option<&'static str>)> {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Runs a parsed command line.
pub fn execute(cli: Cli) -> CliResult<()> {
    let (name, common, keys, mut flags) = match &cli.command {
        Command::PhaseDiagram { common, args } => ("phase-diagram", common, keys(&[phase_diagram::KEYS]), args.flags()),
        Command::MeanPhoton { common, args } => ("mean-photon", common, keys(&[mean_photon::KEYS]), args.flags()),
        Command::Scaling { common, args, solver } => {
            let mut f = args.flags();
            f.extend(solver.flags());
            ("scaling", common, keys(&[scaling::KEYS, SOLVER_KEYS]), f)
        }
        Command::UniversalF { common, args } => ("universal-f", common, keys(&[universal_f::KEYS]), args.flags()),
        Command::Solve { common, args, solver } => {
            let mut f = args.flags();
            f.extend(solver.flags());
            ("solve", common, keys(&[solve::KEYS, SOLVER_KEYS]), f)
        }
    };
    flags.extend(common.flags());
    let all_keys = [keys.as_slice(), COMMON_KEYS].concat();
    let mut settings = Settings::resolve(&all_keys, common.config.as_deref(), flags)?;

    let workers = if settings.has("workers") { settings.usize("workers")? } else { default_workers() };
    if workers == 0 {
        return Err(CliError::Config("workers must be at least 1".to_string()));
    }
    settings.set("workers", workers.to_string());
    if name == "universal-f" {
        let branch = universal_f::branch(&settings)?;
        settings.set("branch", format!("mode{}", branch.mode_number()));
    }
    let seed = settings.u64("seed")?;

    let out = PathBuf::from(settings.str("out")?);
    std::fs::create_dir_all(&out)?;
    let manifest = RunManifest::new(name, &settings, seed)?;
    manifest.write(&out)?;

    match name {
        "phase-diagram" => phase_diagram::run(&settings, &out),
        "mean-photon" => mean_photon::run(&settings, &out),
        "scaling" => scaling::run(&settings, &out, workers, &manifest),
        "universal-f" => universal_f::run(&settings, &out),
        "solve" => solve::run(&settings, &out),
        _ => unreachable!("command names are fixed above"),
    }
}

/// Parses `args` (including the program name), runs the command and maps
/// the outcome to an exit code: 0 success, 1 I/O failure, 2 configuration
/// error, 3 numerical non-convergence.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
