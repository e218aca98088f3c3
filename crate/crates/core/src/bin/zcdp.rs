use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tight_zcdp::accountant::{
    compose_labeled, format_sig12, parse_compose_file, CurveTable, FigureSpec, FigureTable,
    MechanismFlags,
};
use tight_zcdp::verify::{certify_tightness, run_standard_verification, DEFAULT_ALPHA_MAX};
use tight_zcdp::{zcdp_bound, Error, Mechanism};

/// Tight zCDP accounting for pure-DP mechanisms.
#[derive(Parser)]
#[command(name = "zcdp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct MechanismArgs {
    /// generic, laplace, dlaplace, krr, rappor or br
    mechanism: String,
    #[command(flatten)]
    params: Params,
}

#[derive(Args, Clone, Default)]
struct Params {
    #[arg(long)]
    eps: Option<f64>,
    /// Bounded-range width (defaults to --eps)
    #[arg(long)]
    eta: Option<f64>,
    /// Number of k-RR symbols
    #[arg(long)]
    k: Option<u64>,
    /// Discrete Laplace sensitivity
    #[arg(long)]
    delta: Option<u64>,
    /// RAPPOR dimension (default 2; the bound does not depend on it)
    #[arg(long)]
    d: Option<u64>,
}

impl Params {
    fn build(&self, kind: &str) -> Result<Mechanism, Error> {
        MechanismFlags {
            eps: self.eps,
            eta: self.eta,
            k: self.k,
            delta: self.delta,
            d: self.d,
        }
        .build(kind)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the zCDP constant of a mechanism
    Bound {
        #[command(flatten)]
        mech: MechanismArgs,
        #[arg(long)]
        json: bool,
    },
    /// Print the RDP curve as CSV
    Curve {
        #[command(flatten)]
        mech: MechanismArgs,
        #[arg(long, default_value_t = 1.000001)]
        alpha_min: f64,
        #[arg(long, default_value_t = 100.0)]
        alpha_max: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
    /// Certify the standard grid (or one mechanism) and print JSON reports
    Verify {
        /// Seed for the random domination pairs
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Certify only this mechanism
        #[arg(long)]
        mechanism: Option<String>,
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = DEFAULT_ALPHA_MAX)]
        alpha_max: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Tabulate rho against eps for every mechanism.
    ///
    /// Discrete Laplace uses --delta (default 2), k-RR uses --k (default 3),
    /// bounded range uses eta = eps.
    Figure {
        #[arg(long, default_value_t = 0.01)]
        eps_min: f64,
        #[arg(long, default_value_t = 10.0)]
        eps_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long, default_value_t = 2)]
        delta: u64,
        #[arg(long, default_value_t = 3)]
        k: u64,
        /// CSV output path (standard output if absent)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write an SVG chart here
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Sum the zCDP constants of the mechanisms listed in a file
    Compose {
        /// One `mechanism --flag value ...` per line
        file: PathBuf,
        /// Also report the (eps, delta)-DP guarantee at this delta
        #[arg(long)]
        target_delta: Option<f64>,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Usage(_) | Error::Domain(_) => Failure::Usage(e.to_string()),
            other => Failure::Run(other.to_string()),
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string(v).map_err(|e| Failure::Run(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Bound { mech, json } => {
            let b = zcdp_bound(&mech.params.build(&mech.mechanism)?)?;
            if json {
                println!("{}", to_json(&b)?);
            } else {
                let tight = if b.tight { "tight" } else { "upper-bound" };
                println!("{} {tight} {}", format_sig12(b.rho), b.source);
            }
        }
        Command::Curve {
            mech,
            alpha_min,
            alpha_max,
            points,
        } => {
            let m = mech.params.build(&mech.mechanism)?;
            print!(
                "{}",
                CurveTable::new(&m, alpha_min, alpha_max, points)?.to_csv()
            );
        }
        Command::Verify {
            seed,
            mechanism,
            params,
            alpha_max,
            tol,
        } => {
            let reports = match mechanism {
                Some(kind) => vec![certify_tightness(&params.build(&kind)?, alpha_max, tol)?],
                None => run_standard_verification(seed)?,
            };
            let mut failed = Vec::new();
            for r in &reports {
                println!("{}", to_json(r)?);
                for c in r.failed_claims() {
                    failed.push(format!(
                        "{}: {} (expected {}, observed {}, tolerance {})",
                        r.mechanism, c.name, c.expected, c.observed, c.tolerance
                    ));
                }
            }
            if !failed.is_empty() {
                return Err(Failure::Run(format!(
                    "failed claims:\n{}",
                    failed.join("\n")
                )));
            }
        }
        Command::Figure {
            eps_min,
            eps_max,
            points,
            delta,
            k,
            out,
            svg,
        } => {
            let fig = FigureTable::new(FigureSpec {
                eps_min,
                eps_max,
                points,
                delta,
                k,
            })?;
            let csv = fig.to_csv();
            match out {
                Some(path) => std::fs::write(&path, csv)
                    .map_err(|e| Failure::Run(format!("cannot write {}: {e}", path.display())))?,
                None => print!("{csv}"),
            }
            if let Some(path) = svg {
                std::fs::write(&path, fig.to_svg())
                    .map_err(|e| Failure::Run(format!("cannot write {}: {e}", path.display())))?;
            }
        }
        Command::Compose {
            file,
            target_delta,
            json,
        } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", file.display())))?;
            let ledger = compose_labeled(parse_compose_file(&text)?)?;
            let approx = target_delta.map(|d| ledger.approx_dp(d)).transpose()?;
            if json {
                let mut v =
                    serde_json::to_value(&ledger).map_err(|e| Failure::Run(e.to_string()))?;
                if let (Some(eps), Some(delta)) = (approx, target_delta) {
                    v["approx_dp"] = serde_json::json!({ "eps": eps, "delta": delta });
                }
                println!("{}", to_json(&v)?);
            } else {
                for e in &ledger.entries {
                    println!("{}\t{}", format_sig12(e.bound.rho), e.label);
                }
                println!("{}\ttotal", format_sig12(ledger.total));
                if let (Some(eps), Some(delta)) = (approx, target_delta) {
                    println!("{}\teps at delta={delta}", format_sig12(eps));
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
