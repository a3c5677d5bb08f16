//! Command-line front end.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use crate::acceptance;
use crate::config::{RunConfig, SEED_ENV};
use crate::output::write_all;
use crate::recipes::Experiment;

#[derive(Debug, Parser)]
#[command(name = "topo-cqed", version, about = "Cavity QED of a topological qubit array")]
pub struct Cli {
    /// Worker threads for grid sweeps (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct RunArgs {
    /// TOML config laid over the experiment defaults.
    #[arg(long, short)]
    pub config: Option<PathBuf>,
    /// Main CSV path; secondary tables and the JSON sidecar go next to it.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// RNG seed (falls back to the config, then TOPO_CQED_SEED, then 0).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Override one config value, e.g. `--set array.n_cells=10`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reflection map over (φ, drive frequency).
    #[command(after_help = "CSV: phi,omega_l_MHz,R,T (phi in rad, frequencies in linear MHz)\n\
        <stem>_overlay.csv: phi,omega_j_MHz (bare array eigenfrequencies, ascending per phi)")]
    SpectroscopyMap(RunArgs),

    /// Cavity coupling of every eigenmode, plus edge-coupling sweeps.
    #[command(after_help = "CSV: j,omega_j_MHz,xi_j,parity,class\n\
        <stem>_mode_<j>.csv: site_index,sublattice,amplitude\n\
        <stem>_edge.csv: n_cells,phi,xi_N,xi_N1,sqrt_cos_phi,sqrt_2cos_phi")]
    CouplingSpectrum(RunArgs),

    /// Single-excitation dynamics under the cavity-mediated exchange.
    #[command(after_help = "CSV: time_us,site_1,...,site_2N,total_norm")]
    RabiDynamics {
        #[command(flatten)]
        args: RunArgs,
        /// Drop qubit and Purcell decay.
        #[arg(long)]
        no_decay: bool,
    },

    /// Waveguide transmission through the edge-state superatom.
    #[command(after_help = "CSV: delta_p_over_GammaL,T,Re_chi,Im_chi,Im_peak1,Im_peak2")]
    Scattering(RunArgs),

    /// Junction phases and flux biases along a φ sweep.
    #[command(after_help = "CSV: phi,delta_t1,delta_t2,phi_ext_t1,phi_ext_t2,g \
        (angles in rad, reduced flux, g in linear MHz)")]
    CircuitDesign(RunArgs),

    /// Vacuum Rabi splitting under random frequency disorder.
    #[command(after_help = "CSV: omega_l_MHz,T_clean,T_seed_<s>...\n\
        <stem>_peaks.csv: seed,lower_MHz,upper_MHz,splitting_MHz,resolvable,central_MHz,central_T")]
    DisorderEnsemble(RunArgs),

    /// Linearized reflection against the master-equation steady state.
    #[command(after_help = "CSV: omega_l_MHz,R_linear,R_oracle,R_oracle_half_eta,abs_diff")]
    OracleCheck(RunArgs),

    /// Run the acceptance suite.
    Accept {
        /// Only these criteria (1-10); repeatable.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=10))]
        criterion: Vec<u8>,
        /// Print every check, not only failures.
        #[arg(long)]
        details: bool,
    },
}

/// Run one experiment end to end: resolve the config, compute, write.
/// Returns the process exit code.
pub fn run_experiment(exp: Experiment, args: &RunArgs, no_decay: bool) -> Result<i32> {
    let user = match &args.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    let mut flags = RunConfig::from_assignments(&args.overrides)?;
    flags.seed = args.seed;
    flags.output = args.output.clone();
    if no_decay {
        flags.dispersive.include_decay = Some(false);
    }
    let cfg = exp.resolve(user.overlay(flags))?;
    let seed = cfg.resolved_seed()?;
    if cfg.seed.is_none() {
        log::info!("seed {seed} (from {SEED_ENV} or default)");
    }
    let main = cfg
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", exp.name())));

    let start = Instant::now();
    let artifacts = exp.run(&cfg, seed).with_context(|| exp.name().to_string())?;
    let written = write_all(&main, exp.name(), &cfg, seed, &artifacts, start.elapsed())?;
    for p in &written {
        println!("wrote {}", p.display());
    }
    if let Some(checks) = artifacts.summary.get("checks").and_then(|c| c.as_array()) {
        for c in checks {
            println!(
                "{} {} = {} ({})",
                if c["passed"].as_bool() == Some(true) { "ok  " } else { "FAIL" },
                c["name"].as_str().unwrap_or("?"),
                c["value"],
                c["bound"].as_str().unwrap_or("")
            );
        }
    }
    Ok(if artifacts.ok { 0 } else { 1 })
}

pub fn run_accept(ids: &[u8], details: bool) -> i32 {
    let outcomes: Vec<acceptance::Outcome> = if ids.is_empty() {
        acceptance::run_all()
    } else {
        ids.iter().map(|id| acceptance::criterion(*id).evaluate()).collect()
    };
    for o in &outcomes {
        println!("{}", o.line());
        if details {
            for c in &o.checks {
                println!("      {c}");
            }
        }
    }
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    println!("{passed}/{} criteria passed", outcomes.len());
    if passed == outcomes.len() {
        0
    } else {
        1
    }
}

pub fn run(cli: Cli) -> Result<i32> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.jobs {
        pool = pool.num_threads(n.max(1));
    }
    let pool = pool.build().context("starting worker pool")?;
    pool.install(|| match &cli.command {
        Command::SpectroscopyMap(a) => run_experiment(Experiment::SpectroscopyMap, a, false),
        Command::CouplingSpectrum(a) => run_experiment(Experiment::CouplingSpectrum, a, false),
        Command::RabiDynamics { args, no_decay } => {
            run_experiment(Experiment::RabiDynamics, args, *no_decay)
        }
        Command::Scattering(a) => run_experiment(Experiment::Scattering, a, false),
        Command::CircuitDesign(a) => run_experiment(Experiment::CircuitDesign, a, false),
        Command::DisorderEnsemble(a) => run_experiment(Experiment::DisorderEnsemble, a, false),
        Command::OracleCheck(a) => run_experiment(Experiment::OracleCheck, a, false),
        Command::Accept { criterion, details } => Ok(run_accept(criterion, *details)),
    })
}
