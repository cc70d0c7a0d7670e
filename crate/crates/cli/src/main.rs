use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use twistfib::gen;
use twistfib::par::Execution;
use twistfib::suite::{self, Bounds, SuiteSpec, VerdictReport};

#[derive(Parser)]
#[command(
    name = "twistfib",
    version,
    about = "Seeded verification suites for finite fibration models"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a registered suite; the exit code is the number of failing cases.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Defaults to the suite's registered repetitions.
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long, default_value_t = 3)]
        max_objects: usize,
        #[arg(long, default_value_t = 3)]
        dim_bound: usize,
        /// Probe categories, e.g. `[0],[1],[1]x[1],iso`.
        #[arg(long, value_delimiter = ',')]
        probes: Vec<String>,
        /// Write the full reports as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        sequential: bool,
    },
    /// Print a seeded random instance as JSON.
    Generate {
        kind: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        max_objects: usize,
        #[arg(long, default_value_t = 3)]
        dim_bound: usize,
    },
    /// Re-execute the single case named by a witness or report file.
    Replay { witness: PathBuf },
    /// List registered suites with their citations.
    List,
}

fn print_report(r: &VerdictReport) {
    let mark = if r.pass { "PASS" } else { "FAIL" };
    println!(
        "{mark} {} case {} [{}] {:.1} ms: {}",
        r.suite,
        r.replay.index,
        &r.instance_hash[..12],
        r.timing_ms,
        r.detail
    );
}

fn exit_with(failures: usize) -> ExitCode {
    ExitCode::from(failures.min(255) as u8)
}

fn main() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Verify {
            suite: id,
            seed,
            reps,
            max_objects,
            dim_bound,
            probes,
            json,
            sequential,
        } => {
            let mut spec = SuiteSpec::new(&id, seed)?;
            if let Some(n) = reps {
                spec.reps = n;
            }
            spec.bounds = Bounds {
                max_objects,
                dim_bound,
                probes,
            };
            if sequential {
                spec.exec = Execution::Sequential;
            }
            let reports = suite::run(&spec)?;
            for r in &reports {
                print_report(r);
            }
            let failed = suite::failures(&reports);
            println!(
                "{}: {} of {} cases passed",
                spec.suite,
                reports.len() - failed,
                reports.len()
            );
            if let Some(path) = json {
                let text = serde_json::to_string_pretty(&reports)?;
                std::fs::write(&path, text)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(exit_with(failed))
        }
        Cmd::Generate {
            kind,
            seed,
            max_objects,
            dim_bound,
        } => {
            let v = gen::generate(&kind, seed, max_objects, dim_bound)?;
            println!("{}", serde_json::to_string_pretty(&v)?);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Replay { witness } => {
            let text = std::fs::read_to_string(&witness)
                .with_context(|| format!("reading {}", witness.display()))?;
            let r = suite::replay(&text)?;
            print_report(&r);
            println!("{}", serde_json::to_string_pretty(&r)?);
            Ok(exit_with(usize::from(!r.pass)))
        }
        Cmd::List => {
            for s in suite::catalog() {
                println!("{:<16} {}", s.id, s.citation);
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
