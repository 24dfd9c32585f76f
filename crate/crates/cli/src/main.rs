//! `jm3body`: command-line access to curvature fields, inequality scans,
//! flows, stability reports, special-point limits and the verification suite.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "jm3body", version, about = "Jacobi-Maupertuis geometry of the planar three-body problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand. Each subcommand reads the ones it needs.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// C2, R3, S3 or S2.
    #[arg(long, default_value = "C2")]
    pub space: String,
    /// inverse-square or newtonian.
    #[arg(long, default_value = "inverse-square")]
    pub potential: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub energy: f64,
    /// Comma-separated `m1,m2,m3`.
    #[arg(long, default_value = "1,1,1")]
    pub masses: String,
    /// Grid size `NxM` over `(eta, xi2)`.
    #[arg(long, default_value = "400x400")]
    pub grid: String,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Relative integration tolerance (absolute is 1/100 of it).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Seed for the randomised property suite.
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a curvature field over the shape sphere (CSV).
    Field {
        #[command(flatten)]
        common: Common,
        /// scalar or gaussian (S2 only).
        #[arg(long, default_value = "scalar")]
        quantity: String,
        /// Exclusion radius around collisions.
        #[arg(long, default_value_t = 1e-3)]
        exclusion: f64,
    },
    /// Check the conformal-factor inequalities and the curvature chain.
    Scan {
        #[command(flatten)]
        common: Common,
        /// Add this offset to h before forming curvatures.
        #[arg(long, default_value_t = 0.0)]
        fault: f64,
        /// JSON report path; standard output when absent. `--out` receives the per-point CSV.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Integrate a trajectory or geodesic (CSV), or compare the two (JSON).
    Flow {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Solution::Rotation)]
        solution: Solution,
        #[arg(long, value_enum, default_value_t = Kind::Trajectory)]
        kind: Kind,
        /// Start point `r,eta,xi1,xi2` for `--solution custom`.
        #[arg(long)]
        point: Option<String>,
        /// Start velocity `dr,deta,dxi1,dxi2` for `--solution custom`.
        #[arg(long, allow_hyphen_values = true)]
        velocity: Option<String>,
        /// Initial size for rotation and homothety.
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        /// Initial radial speed for the homothety.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        rdot: f64,
        /// Integration horizon; one period for the rotation when absent.
        #[arg(long)]
        horizon: Option<f64>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Report the max trajectory/geodesic deviation instead of the path.
        #[arg(long)]
        compare: bool,
    },
    /// Stability tensor and verdicts along a named solution (JSON).
    Stability {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Solution::Rotation)]
        solution: Solution,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long, default_value_t = 0.3, allow_negative_numbers = true)]
        rdot: f64,
    },
    /// Run every invariant suite (JSON report, summary on stderr).
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        skip_newtonian: bool,
        /// Perturb h by this amount in the curvature chain.
        #[arg(long, default_value_t = 0.0)]
        fault: f64,
        /// Random samples per property.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Curvature values and limits at the special configurations.
    Limits {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solution {
    Rotation,
    Homothety,
    Custom,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Trajectory,
    Geodesic,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Field { common, quantity, exclusion } => commands::field(&common, &quantity, exclusion),
        Command::Scan { common, fault, report } => commands::scan(&common, fault, report.as_deref()),
        Command::Flow { common, solution, kind, point, velocity, r, rdot, horizon, samples, compare } => {
            commands::flow(
                &common,
                commands::FlowArgs {
                    solution,
                    kind,
                    point: point.as_deref(),
                    velocity: velocity.as_deref(),
                    r,
                    rdot,
                    horizon,
                    samples,
                    compare,
                },
            )
        }
        Command::Stability { common, solution, r, rdot } => commands::stability(&common, solution, r, rdot),
        Command::Verify { common, skip_newtonian, fault, samples } => {
            commands::verify(&common, skip_newtonian, fault, samples)
        }
        Command::Limits { common, format } => commands::limits(&common, format),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
