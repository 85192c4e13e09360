//! `lmglab`: command-line driver for the LMG collective-spin laboratory.
//!
//! Every subcommand writes one CSV table (or a JSON document with all of its
//! tables) together with a run manifest. Exit codes: `0` success, `1`
//! numerical failure, `2` invalid arguments.

// `!(x > 0)` is used deliberately so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lmglab::units::{DEFAULT_TEMP_NK, J_PHYS};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "lmglab",
    version,
    about = "LMG collective-spin numerical laboratory"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    /// Output file; relative paths are placed under $LMGLAB_OUT_DIR when it is set.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

/// Model parameters shared by the quantum commands.
#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Number of spins N.
    #[arg(long, default_value_t = 370)]
    pub n: usize,
    /// Transverse field Gamma/J.
    #[arg(long, default_value_t = 0.95)]
    pub gamma_ratio: f64,
    /// Conversion of J = 1 into rad/s.
    #[arg(long, default_value_t = J_PHYS)]
    pub j_phys: f64,
    /// Temperature in nK.
    #[arg(long, default_value_t = DEFAULT_TEMP_NK)]
    pub temp_nk: f64,
    /// Longitudinal field h/J.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub bias_h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Protocol {
    Stationary,
    Sequential,
}

impl Protocol {
    pub fn name(self) -> &'static str {
        match self {
            Protocol::Stationary => "stationary",
            Protocol::Sequential => "sequential",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FoilMode {
    /// Mean first-passage time against the Kramers estimate.
    Mfpt,
    /// Histogram of final positions against the Boltzmann density.
    Histogram,
    /// Classical error probability of a linear bias sweep.
    PError,
    /// Conservative Bloch precession trajectory.
    Bloch,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectral summary: gap, matrix elements, susceptibilities.
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        /// Number of levels listed in the per-level table.
        #[arg(long, default_value_t = 10)]
        levels: usize,
        /// Write the per-level table instead of the summary in CSV mode.
        #[arg(long)]
        per_level: bool,
        /// Finite-difference step in h/J for the exact susceptibility.
        #[arg(long, default_value_t = lmglab::lmg::DEFAULT_SUSCEPTIBILITY_STEP)]
        chi_step: f64,
    },
    /// K3 at one dephasing rate.
    K3 {
        #[command(flatten)]
        model: ModelArgs,
        /// Dephasing rate in 1/s.
        #[arg(long, default_value_t = 0.05)]
        gamma_phi: f64,
        #[arg(long, default_value_t = 5)]
        levels: usize,
        #[arg(long, value_enum, default_value_t = Protocol::Stationary)]
        protocol: Protocol,
    },
    /// K3 over a grid of dephasing rates and truncations.
    K3Scan {
        #[command(flatten)]
        model: ModelArgs,
        /// Dephasing rates in 1/s.
        #[arg(long, value_delimiter = ',', default_values_t = commands::FIG1_GAMMAS)]
        gammas: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [5usize, 10])]
        levels: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Protocol::Stationary)]
        protocol: Protocol,
    },
    /// Dephasing rate at which K3 falls to 1.
    Threshold {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3, 4, 5, 10])]
        levels: Vec<usize>,
        /// Initial bracket lower end in 1/s.
        #[arg(long, default_value_t = 0.2)]
        lo: f64,
        /// Initial bracket upper end in 1/s.
        #[arg(long, default_value_t = 0.5)]
        hi: f64,
    },
    /// Mean-field, two-level and multi-level dephasing thresholds.
    Hierarchy {
        #[command(flatten)]
        model: ModelArgs,
        /// Dephasing rate (1/s) at which coherence times are reported.
        #[arg(long, default_value_t = 0.05)]
        reference_gamma: f64,
    },
    /// Exact tunnel splitting against k_B T over a range of N.
    Goldilocks {
        #[arg(long, default_value_t = 0.95)]
        gamma_ratio: f64,
        #[arg(long, default_value_t = J_PHYS)]
        j_phys: f64,
        #[arg(long, default_value_t = DEFAULT_TEMP_NK)]
        temp_nk: f64,
        #[arg(long, default_value_t = 200)]
        n_min: usize,
        #[arg(long, default_value_t = 400)]
        n_max: usize,
        #[arg(long, default_value_t = 50)]
        step: usize,
        /// Extra system sizes added to the grid.
        #[arg(long, value_delimiter = ',')]
        include: Vec<usize>,
        /// Add dDeltaE/dN (central difference over N -/+ 2).
        #[arg(long)]
        derivative: bool,
    },
    /// Instanton actions and crossover sizes for the tabulated prefactors.
    Table1,
    /// Instanton estimate C0 sqrt(N) exp(-N S) / k_B T versus N.
    InstantonCurve {
        #[arg(long, default_value_t = 0.95)]
        gamma_ratio: f64,
        /// Prefactor C0/k_B T; defaults to the tabulated value.
        #[arg(long)]
        c0: Option<f64>,
        #[arg(long, default_value_t = 10)]
        n_min: usize,
        #[arg(long, default_value_t = 600)]
        n_max: usize,
        #[arg(long, default_value_t = 10)]
        step: usize,
    },
    /// Landau-Zener error: physical sweep times or the normalized curve.
    Lz {
        #[command(flatten)]
        model: ModelArgs,
        /// Sweep times in s; when absent the normalized curve is written.
        #[arg(long, value_delimiter = ',')]
        tau_q: Vec<f64>,
        /// Total bias change in rad/s.
        #[arg(long, default_value_t = 100.0)]
        delta_h: f64,
        /// Samples of the normalized curve on [0, x-max].
        #[arg(long, default_value_t = 61)]
        samples: usize,
        #[arg(long, default_value_t = 3.0)]
        x_max: f64,
    },
    /// Two-level K3 ceiling versus Delta E T2 / pi.
    K3MaxCurve {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 0.05)]
        y_min: f64,
        #[arg(long, default_value_t = 2.5)]
        y_max: f64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Two-level K3 versus dephasing rate with recomputed and nominal gap.
    TwoLevelCurve {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_delimiter = ',', default_values_t = commands::FIG1_GAMMAS)]
        gammas: Vec<f64>,
    },
    /// Exact N = 2 solution against the mean-field order parameter.
    N2Exact {
        #[arg(long, default_value_t = 0.05)]
        x_min: f64,
        #[arg(long, default_value_t = 6.0)]
        x_max: f64,
        #[arg(long, default_value_t = 120)]
        samples: usize,
    },
    /// Classical foil: Langevin ensembles and Bloch precession.
    Foil {
        #[arg(long, value_enum, default_value_t = FoilMode::Mfpt)]
        mode: FoilMode,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 0.9)]
        gamma_ratio: f64,
        #[arg(long, default_value_t = 5.68)]
        temp_nk: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        bias_h: f64,
        #[arg(long, default_value_t = J_PHYS)]
        j_phys: f64,
        /// Mobility in units where time is 1/J.
        #[arg(long, default_value_t = lmglab::foil::DEFAULT_GAMMA_EFF)]
        gamma_eff: f64,
        #[arg(long, default_value_t = 0.05)]
        dt: f64,
        #[arg(long, default_value_t = 400)]
        paths: usize,
        #[arg(long, default_value_t = 20240601)]
        seed: u64,
        /// Per-path time limit (mfpt) or run length (histogram, bloch), in 1/J.
        /// Defaults: 2e5 (mfpt), 2e4 (histogram), 50 (bloch).
        #[arg(long)]
        t_max: Option<f64>,
        /// Histogram bins.
        #[arg(long, default_value_t = 20)]
        bins: usize,
        /// Sweep times in s (p-error mode).
        #[arg(long, value_delimiter = ',')]
        tau_q: Vec<f64>,
        /// Sweep amplitude in h/J (p-error mode).
        #[arg(long, default_value_t = 0.002)]
        delta_h: f64,
    },
    /// Built-in consistency checks; exits with 1 when any fails.
    Selftest,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Spectrum { .. } => "spectrum",
            Command::K3 { .. } => "k3",
            Command::K3Scan { .. } => "k3-scan",
            Command::Threshold { .. } => "threshold",
            Command::Hierarchy { .. } => "hierarchy",
            Command::Goldilocks { .. } => "goldilocks",
            Command::Table1 => "table1",
            Command::InstantonCurve { .. } => "instanton-curve",
            Command::Lz { .. } => "lz",
            Command::K3MaxCurve { .. } => "k3-max-curve",
            Command::TwoLevelCurve { .. } => "two-level-curve",
            Command::N2Exact { .. } => "n2-exact",
            Command::Foil { .. } => "foil",
            Command::Selftest => "selftest",
        }
    }
}

fn run(command: Command) -> Result<commands::Outcome, commands::CliError> {
    use commands as c;
    match command {
        Command::Spectrum {
            model,
            levels,
            per_level,
            chi_step,
        } => c::spectrum(&model, levels, per_level, chi_step),
        Command::K3 {
            model,
            gamma_phi,
            levels,
            protocol,
        } => c::k3(&model, gamma_phi, levels, protocol),
        Command::K3Scan {
            model,
            gammas,
            levels,
            protocol,
        } => c::k3_scan(&model, &gammas, &levels, protocol),
        Command::Threshold {
            model,
            levels,
            lo,
            hi,
        } => c::threshold(&model, &levels, lo, hi),
        Command::Hierarchy {
            model,
            reference_gamma,
        } => c::hierarchy(&model, reference_gamma),
        Command::Goldilocks {
            gamma_ratio,
            j_phys,
            temp_nk,
            n_min,
            n_max,
            step,
            include,
            derivative,
        } => c::goldilocks(
            gamma_ratio,
            j_phys,
            temp_nk,
            (n_min, n_max, step),
            &include,
            derivative,
        ),
        Command::Table1 => c::table1(),
        Command::InstantonCurve {
            gamma_ratio,
            c0,
            n_min,
            n_max,
            step,
        } => c::instanton_curve(gamma_ratio, c0, (n_min, n_max, step)),
        Command::Lz {
            model,
            tau_q,
            delta_h,
            samples,
            x_max,
        } => c::lz(&model, &tau_q, delta_h, samples, x_max),
        Command::K3MaxCurve {
            model,
            y_min,
            y_max,
            samples,
        } => c::k3_max_curve(&model, y_min, y_max, samples),
        Command::TwoLevelCurve { model, gammas } => c::two_level_curve(&model, &gammas),
        Command::N2Exact {
            x_min,
            x_max,
            samples,
        } => c::n2_exact(x_min, x_max, samples),
        Command::Foil {
            mode,
            n,
            gamma_ratio,
            temp_nk,
            bias_h,
            j_phys,
            gamma_eff,
            dt,
            paths,
            seed,
            t_max,
            bins,
            tau_q,
            delta_h,
        } => {
            let model = ModelArgs {
                n,
                gamma_ratio,
                j_phys,
                temp_nk,
                bias_h,
            };
            let foil = c::FoilArgs {
                mode,
                gamma_eff,
                dt,
                paths,
                seed,
                t_max,
                bins,
                tau_q,
                delta_h,
            };
            c::foil(&model, &foil)
        }
        Command::Selftest => c::selftest(),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let name = cli.command.name();
    let result = run(cli.command).and_then(|out| {
        let failed = out.failed;
        output::emit(&out.output, name, cli.format, cli.out.as_deref())
            .map_err(commands::CliError::Io)?;
        if failed {
            return Err(commands::CliError::ChecksFailed);
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lmglab {name}: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
