use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use boxpierce::dynamic::Mode;
use boxpierce::error::Error;
use boxpierce::geom::ExactCap;
use boxpierce::harness::bench::{run_bench, BenchMatrix};
use boxpierce::harness::format::{parse_script, reports_to_csv, InstanceFile, RunReport, SolutionFile};
use boxpierce::harness::generate::{generate, GenParams, Kind};
use boxpierce::harness::replay::{replay, ReplayOptions};
use boxpierce::harness::solve::{solve, verify_files, Algo, SolveOptions};

#[derive(Parser)]
#[command(name = "boxpierce", version, about = "Approximate piercing sets for axis-aligned boxes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Rectangles,
    Squares,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a random instance file.
    Generate {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Plant count, grid side or nesting depth, depending on the kind.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        max_side: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Solve an instance and verify the answer.
    Solve {
        instance: PathBuf,
        #[arg(long, default_value = "improved-mwu")]
        algo: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        rounds: Option<usize>,
        #[arg(long)]
        alpha: Option<f64>,
        /// Largest instance the exact solver accepts.
        #[arg(long, default_value_t = 40)]
        exact_cap: usize,
        /// Also run the exact solver to report the ratio.
        #[arg(long)]
        oracle: bool,
        /// Where to write the solution file.
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Replay a JSONL update script through the dynamic structure.
    Replay {
        script: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Rectangles)]
        mode: ModeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        verify_each: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run a matrix of generated instances and solvers.
    Bench {
        /// JSON matrix file; overrides the list flags.
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "100,200,400")]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        d: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "uniform-random")]
        kind: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "dnc,improved-mwu")]
        algo: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        seeds: Vec<u64>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Check a solution file against an instance file.
    Verify {
        instance: PathBuf,
        solution: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn print_reports(reports: &[RunReport], format: Format) -> Result<String> {
    Ok(match format {
        Format::Csv => reports_to_csv(reports),
        Format::Json => reports
            .iter()
            .map(|r| serde_json::to_string(r).map(|s| s + "\n"))
            .collect::<std::result::Result<String, _>>()?,
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Generate { kind, n, d, k, max_side, seed, out } => {
            let kind: Kind = kind.parse()?;
            let g = generate(kind, GenParams { k, max_side, ..GenParams::new(n, d) }, seed)?;
            emit(out.as_deref(), &InstanceFile::from_generated(g).to_json())?;
        }
        Cmd::Solve { instance, algo, seed, rounds, alpha, exact_cap, oracle, out, format } => {
            let file = InstanceFile::parse(&read(&instance)?)?;
            let mut opts = SolveOptions::new(algo.parse::<Algo>()?, seed);
            opts.rounds = rounds;
            opts.alpha = alpha;
            opts.exact_cap = ExactCap { max_boxes: exact_cap, ..ExactCap::default() };
            opts.with_oracle = oracle;
            let name = instance.display().to_string();
            let solved = match solve(&file, &name, &opts) {
                Ok(s) => s,
                Err(Error::Unpierced(m)) => {
                    eprintln!("verification failed: {m} boxes unpierced");
                    return Ok(ExitCode::from(1));
                }
                Err(e) => return Err(e.into()),
            };
            emit(out.as_deref(), &solved.solution.to_json())?;
            eprint!("{}", print_reports(&[solved.report], format)?);
        }
        Cmd::Replay { script, mode, seed, verify_each, format } => {
            let ops = parse_script(&read(&script)?)?;
            let mode = match mode {
                ModeArg::Rectangles => Mode::Rectangles,
                ModeArg::Squares => Mode::Squares,
            };
            let events = replay(&ops, &ReplayOptions { mode, seed, verify_each })?;
            let text = match format {
                Format::Json => events
                    .iter()
                    .map(|e| serde_json::to_string(e).map(|s| s + "\n"))
                    .collect::<std::result::Result<String, _>>()?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    for e in &events {
                        w.serialize(e)?;
                    }
                    String::from_utf8(w.into_inner()?)?
                }
            };
            emit(None, &text)?;
            if events.last().is_some_and(|e| e.verify_failures > 0) {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Bench { matrix, n, d, kind, algo, seeds, k, out, format } => {
            let m = match matrix {
                Some(p) => serde_json::from_str(&read(&p)?).context("matrix file")?,
                None => BenchMatrix { n, d, kind, algo, seeds, k },
            };
            let reports = run_bench(&m)?;
            emit(out.as_deref(), &print_reports(&reports, format)?)?;
        }
        Cmd::Verify { instance, solution, format } => {
            let file = InstanceFile::parse(&read(&instance)?)?;
            let sol = SolutionFile::parse(&read(&solution)?)?;
            let missed = verify_files(&file, &sol)?;
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::json!({ "boxes": file.boxes.len(), "points": sol.points.len(), "unpierced": missed })
                ),
                Format::Csv => println!("boxes,points,unpierced\n{},{},{}", file.boxes.len(), sol.points.len(), missed.len()),
            }
            if !missed.is_empty() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Error>().is_some_and(|e| matches!(e, Error::Usage(_))) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
