use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hpmp::bench::{self, BenchConfig, BenchRow};
use hpmp::instance::{self, DEFAULT_BOX};
use hpmp::oracle::{brute_hpmp, OracleLimitConfig};
use hpmp::{solve, Error};

/// Hamiltonian p-median approximation: instance generation, solving,
/// exact comparison and batch benchmarks.
#[derive(Debug, Parser)]
#[command(name = "hpmp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a Euclidean instance in [0, box]² and write it to a file.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long = "box", default_value_t = DEFAULT_BOX)]
        side: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve one instance and print its report row.
    Solve {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        p: usize,
        /// Append the row to this CSV file (header written if new).
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also print the cycles of the solution.
        #[arg(long)]
        cycles: bool,
    },
    /// Solve generated instances for several p and seeds.
    Bench {
        #[arg(long)]
        n: usize,
        #[arg(long = "p-list", value_delimiter = ',', required = true, value_parser = bench::parse_p)]
        p_list: Vec<usize>,
        /// Inclusive range `a..b`.
        #[arg(long, value_parser = bench::parse_seed_range)]
        seeds: std::ops::RangeInclusive<u64>,
        #[arg(long = "box", default_value_t = DEFAULT_BOX)]
        side: f64,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write zero times so reruns produce identical bytes.
        #[arg(long)]
        no_times: bool,
    },
    /// Compare the approximation with the exact optimum on a small instance.
    Oracle {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        p: usize,
    },
}

const EXIT_IO: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INAPPLICABLE: u8 = 3;
const EXIT_INFEASIBLE: u8 = 4;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::AlgorithmInapplicable { .. } => EXIT_INAPPLICABLE,
        Error::Infeasible { .. } => EXIT_INFEASIBLE,
        Error::OracleLimit { .. } | Error::InvalidInstance(_) => EXIT_USAGE,
        _ => EXIT_IO,
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_code(&e))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Gen { n, seed, side, out } => {
            if n < 3 {
                return Err(Error::InvalidInstance("n must be ≥ 3".into()));
            }
            let inst = instance::generate_euclidean(n, seed, side)?;
            instance::save_instance(&inst, &out)
        }
        Command::Solve {
            input,
            p,
            csv,
            cycles,
        } => {
            let inst = instance::load_instance(&input)?;
            let (solution, report) = solve(&inst, p)?;
            let row = BenchRow::from_result(&inst, p, &Ok(report));
            print!("{}", bench::format_single(&row));
            if cycles {
                for cycle in solution.cycles() {
                    let ids: Vec<String> = cycle.iter().map(usize::to_string).collect();
                    println!("cycle {}", ids.join(" "));
                }
            }
            if let Some(path) = csv {
                bench::append_row(&path, &row, true)?;
            }
            Ok(())
        }
        Command::Bench {
            n,
            p_list,
            seeds,
            side,
            csv,
            no_times,
        } => {
            if n < 3 {
                return Err(Error::InvalidInstance("n must be ≥ 3".into()));
            }
            let config = BenchConfig {
                n,
                side,
                p_values: p_list,
                seeds,
            };
            let text = bench::run_bench(&config)?.to_csv(!no_times);
            match csv {
                Some(path) => {
                    std::fs::write(&path, text).map_err(|source| Error::Io { path, source })
                }
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
        Command::Oracle { input, p } => {
            let inst = instance::load_instance(&input)?;
            let exact = brute_hpmp(&inst, p, &OracleLimitConfig::default())?;
            let (_, report) = solve(&inst, p)?;
            let true_ratio = if exact.weight() > 0.0 {
                report.ub / exact.weight()
            } else {
                1.0
            };
            println!("instance,n,p,optimum,approx,true_ratio,lb,branch");
            println!(
                "{},{},{},{:.12},{:.12},{:.12},{:.12},{}",
                inst.name(),
                inst.n(),
                p,
                exact.weight(),
                report.ub,
                true_ratio,
                report.lb,
                report.branch
            );
            Ok(())
        }
    }
}
