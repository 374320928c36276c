use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use horodisc::experiments::{self, Command, ExperimentConfig, Overrides, Report};
use horodisc::Error;

#[derive(Parser)]
#[command(name = "horodisc", version, about = "Univalence criteria and valence experiments on the unit disc")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Weighted sup-norms of P(f), S(f), f' and f# plus the norm inequalities
    Norms(RunArgs),
    /// Univalence criterion verdicts (becker, becker-z, nehari, hv, th2-bound, th3-bound, injectivity, limsup)
    Criteria(RunArgs),
    /// Boundary trace, simplicity, valence estimates and preimage counts
    Valence(RunArgs),
    /// Envelope conditions and radial growth bounds
    Distortion(RunArgs),
    /// Harmonic map operators and separation bounds
    Harmonic(RunArgs),
    /// Boundary trace export (CSV and SVG) with a simplicity verdict
    Trace(RunArgs),
    /// Canned experiment with PASS/FAIL per check
    Reproduce {
        /// One of: sharp-bounds, koebe-extremal, critical-C, valence-sweep,
        /// horodisc, distortion-envelopes, harmonic-reduction, carleson-profile
        id: String,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON experiment config
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Output directory for the report and trace files
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(report) => {
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if experiments::is_config_error(&e) { 2 } else { 1 })
        }
    }
}

fn execute(cmd: Cmd) -> horodisc::Result<Report> {
    let (command, args) = match cmd {
        Cmd::Norms(a) => (Command::Norms, a),
        Cmd::Criteria(a) => (Command::Criteria, a),
        Cmd::Valence(a) => (Command::Valence, a),
        Cmd::Distortion(a) => (Command::Distortion, a),
        Cmd::Harmonic(a) => (Command::Harmonic, a),
        Cmd::Trace(a) => (Command::Trace, a),
        Cmd::Reproduce { id, out } => {
            let report = experiments::reproduce(&id)?;
            for check in report.checks() {
                println!("{} {}: {} (expected {})", verdict(check.pass), check.name, check.value, check.expected);
            }
            println!("{} {id}", report.verdict());
            if let Some(p) = out {
                std::fs::write(p, report.to_json_pretty())?;
            }
            return Ok(report);
        }
    };
    let mut cfg = ExperimentConfig::from_path(&args.config)?;
    Overrides {
        c: args.c,
        seed: args.seed,
        grid: args.grid,
        tol: args.tol,
        out_dir: args.out,
        csv: args.csv,
        svg: args.svg,
    }
    .apply(&mut cfg);
    let report = experiments::run(command, &cfg).map_err(|e| match e {
        Error::InvalidArgument(m) => experiments::config_error(m),
        e => e,
    })?;
    let written = experiments::write_outputs(&report, &cfg.output)?;
    for p in &written {
        eprintln!("wrote {}", p.display());
    }
    if cfg.output.report.is_some() || cfg.output.dir.is_some() {
        println!("{} {command}", report.verdict());
    } else {
        print!("{}", report.to_json_pretty());
    }
    Ok(report)
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}
