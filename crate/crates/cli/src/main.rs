use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser)]
#[command(name = "eds", version, about = "Exterior differential systems for second-order PDE in the plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SystemArgs {
    /// Solved system as JSON: {"solved": {"r": "...", "s": "..."}, "parameter": "t"}
    #[arg(long)]
    system: PathBuf,
}

#[derive(Args)]
struct PointArgs {
    /// A point object or a list of them, as a file path or inline JSON
    #[arg(long)]
    points: String,
}

#[derive(Subcommand)]
enum Command {
    /// Type label at each point
    Classify {
        #[command(flatten)]
        sys: SystemArgs,
        #[command(flatten)]
        pts: PointArgs,
        #[arg(long)]
        verify: bool,
    },
    /// Integral 2-planes at each point
    Fiber {
        #[command(flatten)]
        sys: SystemArgs,
        #[command(flatten)]
        pts: PointArgs,
        #[arg(long)]
        verify: bool,
    },
    /// Rank-2 prolongation charts, optionally iterated
    Prolong {
        #[command(flatten)]
        sys: SystemArgs,
        #[command(flatten)]
        pts: PointArgs,
        /// Number of prolongation levels (capped by EDS_MAX_DEPTH, default 3)
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long)]
        verify: bool,
    },
    /// Graded symbol algebra on a first prolongation chart
    Symbol {
        /// Defaults to Cartan's system
        #[arg(long)]
        system: Option<PathBuf>,
        #[arg(long, value_enum)]
        chart: Stratum,
        /// Point on the chart as a file path or inline JSON; a missing fiber
        /// coordinate is taken as 0
        #[arg(long)]
        point: String,
        #[arg(long)]
        verify: bool,
    },
    /// Cauchy characteristics of the canonical system on R
    Cauchy {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        verify: bool,
    },
    /// Derived flags of the canonical system on R
    Growth {
        #[command(flatten)]
        sys: SystemArgs,
        /// Points at which to evaluate the growth vector
        #[arg(long)]
        points: Option<String>,
        #[arg(long)]
        verify: bool,
    },
    /// Cartan's system r = t^3/3, s = t^2/2
    Cartan {
        #[command(subcommand)]
        command: CartanCommand,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Stratum {
    Sigma0,
    Sigma1,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    I,
    Ii,
}

#[derive(Subcommand)]
enum CartanCommand {
    /// Singular solution from a free polynomial
    Solve {
        #[arg(long, value_enum)]
        method: Method,
        /// y0(t), for method i
        #[arg(long)]
        y0: Option<String>,
        /// phi(tau), for method ii
        #[arg(long)]
        phi: Option<String>,
        #[arg(long)]
        verify: bool,
    },
    /// Whether both constructions give the same surface for y0
    Compare {
        #[arg(long)]
        y0: String,
        #[arg(long)]
        verify: bool,
    },
    /// Adapted coframe, charts, Cauchy quotient and relations
    Report {
        #[arg(long)]
        verify: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.command {
        Command::Classify { sys, pts, verify } => commands::classify(&sys.system, &pts.points, verify),
        Command::Fiber { sys, pts, verify } => commands::fiber(&sys.system, &pts.points, verify),
        Command::Prolong { sys, pts, depth, verify } => commands::prolong(&sys.system, &pts.points, depth, verify),
        Command::Symbol { system, chart, point, verify } => {
            commands::symbol(system.as_deref(), matches!(chart, Stratum::Sigma1), &point, verify)
        }
        Command::Cauchy { sys, verify } => commands::cauchy(&sys.system, verify),
        Command::Growth { sys, points, verify } => commands::growth(&sys.system, points.as_deref(), verify),
        Command::Cartan { command } => match command {
            CartanCommand::Solve { method, y0, phi, verify } => {
                commands::cartan_solve(matches!(method, Method::Ii), y0.as_deref(), phi.as_deref(), verify)
            }
            CartanCommand::Compare { y0, verify } => commands::cartan_compare(&y0, verify),
            CartanCommand::Report { verify } => commands::cartan_report(verify),
        },
    };
    match out {
        Ok(o) => {
            println!("{}", serde_json::to_string_pretty(&o.report).expect("serializable"));
            match o.failure {
                Some(msg) => {
                    eprintln!("error: {msg}");
                    ExitCode::from(1)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
