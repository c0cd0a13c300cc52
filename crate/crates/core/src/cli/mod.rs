//! Command-line front end. Every subcommand writes `report.json` (and CSV
//! plot data where it has any) into the output directory.
//!
//! Exit codes: 0 success, 1 a checked inequality failed, 2 invalid input or
//! any other error (one line on stderr).

mod commands;
mod config;
mod report;
mod verify;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{parse_sequence, resolve_alpha, sequence_stats, AlphaConfig, ExperimentConfig, OUT_DIR_ENV};
pub use report::{emit_report, Check, Report, Table, SCHEMA_VERSION};
pub use verify::{verify_all, VerifyPreset};

#[derive(Parser, Debug)]
#[command(name = "wcfpp", version, about = "Basis constants, convex bases and fixed-point-free affine maps at finite truncation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// JSON experiment config; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Seed for every randomized step. Required wherever sampling happens.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory (default: $WCFPP_OUT_DIR, else ./wcfpp-out).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct SeqArgs {
    /// Norm name: c0, ell1, ell-p:<p>, summing, lin-ell1, james:<p>, or JSON.
    #[arg(long)]
    pub space: Option<String>,
    /// canonical, summing, shifted:<p>, convex[:<base>], or JSON.
    #[arg(long)]
    pub seq: Option<String>,
    /// Truncation.
    #[arg(long = "N", visible_alias = "n")]
    pub n: Option<usize>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct MapArgs {
    /// f (main), f0, f1, f2.
    #[arg(long)]
    pub map: Option<String>,
    /// Coefficient norm.
    #[arg(long)]
    pub space: Option<String>,
    /// Explicit schedule for the main map (default: generated for --space).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alphas: Vec<f64>,
    /// Terms kept by f2.
    #[arg(long)]
    pub terms: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a norm on a coefficient vector.
    Norm {
        #[arg(long)]
        space: Option<String>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        vec: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Basis constant sup_k ||P_k|| at truncation N.
    BasisConstant {
        #[command(flatten)]
        seq: SeqArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Domination constant of --from over --to.
    Dominate {
        #[arg(long)]
        space: Option<String>,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long = "N", visible_alias = "n")]
        n: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Both domination constants between --x and --y.
    Equiv {
        #[arg(long)]
        space: Option<String>,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long = "N", visible_alias = "n")]
        n: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Best L with L |sum a_n| <= ||sum a_n x_n||.
    WideS {
        #[command(flatten)]
        seq: SeqArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Generate or validate a convex-combination schedule.
    Alpha {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        alphas: Vec<f64>,
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        inf: Option<f64>,
        #[arg(long)]
        sup: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Two-sided bound for scaled sequences with L = 2K/alpha_1.
    KeyLemma {
        #[command(flatten)]
        seq: SeqArgs,
        /// Non-decreasing scaling in (0, 1]; random draws when omitted.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        alphas: Vec<f64>,
        /// Number of random scalings when --alphas is omitted.
        #[arg(long, default_value_t = 10)]
        draws: usize,
        /// enum or sample.
        #[arg(long, default_value = "enum")]
        mode: String,
        #[arg(long)]
        trials: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Monotonicity of non-decreasing scalings under the interval renorming.
    HjCheck {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        alphas: Vec<f64>,
        #[arg(long)]
        trials: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Small-perturbation sum against 1/(2K).
    Perturbation {
        #[command(flatten)]
        seq: SeqArgs,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        alphas: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Distance lower bound between subsequence operators.
    Separation {
        #[command(flatten)]
        seq: SeqArgs,
        /// Use the generated convex basis as z (default: z = x).
        #[arg(long)]
        convex: bool,
        #[arg(long, value_delimiter = ',')]
        kappa: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        ell: Vec<usize>,
        /// Random index-sequence pairs when --kappa/--ell are omitted.
        #[arg(long, default_value_t = 100)]
        pairs: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Build an affine map and print its columns.
    MapBuild {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long = "N", visible_alias = "n")]
        n: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Iterate a map from a start point.
    Orbit {
        #[command(flatten)]
        map: MapArgs,
        /// e<k>, uniform, or comma-separated coordinates.
        #[arg(long, default_value = "e1")]
        start: String,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long = "N", visible_alias = "n")]
        n: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Minimum of ||(A - I) t|| over the simplex, one row per N.
    Displacement {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long = "N", visible_alias = "n", value_delimiter = ',')]
        n: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Lipschitz constant of the linear part, or its inverse constant.
    Lipschitz {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long = "N", visible_alias = "n")]
        n: Option<usize>,
        /// exact or sample.
        #[arg(long, default_value = "exact")]
        method: String,
        /// forward or inverse.
        #[arg(long, default_value = "forward")]
        direction: String,
        #[arg(long)]
        trials: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Lipschitz constants of A, A^2, ..., A^p_max.
    UniformProbe {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long = "N", visible_alias = "n")]
        n: Option<usize>,
        #[arg(long)]
        p_max: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Run every check on one preset.
    VerifyAll {
        /// summing, canonical-ell1, canonical-c0, lin-ell1.
        #[arg(long)]
        preset: String,
        #[arg(long = "N", visible_alias = "n")]
        n: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

/// Parses `argv` (including the program name), runs and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let msg = e.to_string();
            let line = msg.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            eprintln!("{}", line.trim());
            return 2;
        }
    };
    match commands::execute(cli.command) {
        Ok(out) => {
            for l in &out.lines {
                println!("{l}");
            }
            if out.passed {
                0
            } else {
                eprintln!("verification failed: {}", out.failed.join(", "));
                1
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.to_string().replace('\n', " "));
            2
        }
    }
}
