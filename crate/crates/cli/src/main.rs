use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use happy_core::bench::{bench, NamedSolver};
use happy_core::dispatch::{self, Algo};
use happy_core::io::{describe, parse_coloring, parse_instance, write_instance, ResultRecord};
use happy_core::kernel::{kernelize, Answer, KernelOutcome};
use happy_core::transforms::{self, GenParams, Model};
use happy_core::{evaluate_objective, Error, Instance, Variant};

const EXIT_USAGE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_DISAGREE: u8 = 4;

#[derive(Parser)]
#[command(name = "happy", version, about = "Maximum happy edge / vertex coloring solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance to optimality.
    Solve {
        #[arg(long)]
        input: PathBuf,
        /// auto, brute, complete, flow2, treedp, kernel, k3, nd, twdp, exact
        #[arg(long, default_value = "auto")]
        algo: String,
        /// Decision threshold; overrides the header's ell.
        #[arg(long)]
        target: Option<u64>,
        /// Print one JSON record instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Decide `optimum >= ell` or write the reduced kernel (MHE only).
    Kernelize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        target: Option<u64>,
    },
    /// Rewrite an MHE instance by one of the reductions.
    Transform {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Generate a seeded random instance.
    Gen {
        /// gnp, random-tree, random-split or planted
        #[arg(long)]
        model: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 0.3)]
        p: f64,
        #[arg(long, default_value_t = 3)]
        k: u32,
        #[arg(long, default_value_t = 0.3)]
        precolor_fraction: f64,
        #[arg(long, default_value = "mhe")]
        variant: String,
        #[arg(long, default_value_t = 5)]
        max_weight: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Evaluate a coloring (a file or an inline list such as `1,2,2`).
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        coloring: String,
    },
    /// Run solvers on every *.happy file of a directory.
    Bench {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "auto,brute")]
        algos: Vec<String>,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        /// Print JSON rows instead of the table.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    SplitMhv,
    BipartiteMhv,
    Subdivide,
    WeightedComplete,
}

enum Failure {
    Usage(String),
    Core(Error),
    Disagreement,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn read_instance(path: &Path) -> Result<Instance, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(parse_instance(&text)?)
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_algo(name: &str) -> Result<Algo, Failure> {
    Algo::parse(name).ok_or_else(|| Failure::Usage(format!("unknown algorithm `{name}`")))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve { input, algo, target, json } => {
            let algo = parse_algo(&algo)?;
            let mut inst = read_instance(&input)?;
            if target.is_some() {
                inst = inst.with_target(target);
            }
            let start = Instant::now();
            let sol = dispatch::run(&inst, algo)?;
            let rec = ResultRecord::new(&inst, &sol, start.elapsed())?;
            if json {
                println!("{}", rec.to_json());
            } else {
                print!("{}", describe(&inst, &rec));
            }
        }
        Command::Kernelize { input, output, target } => {
            let inst = read_instance(&input)?;
            let ell = target
                .or(inst.target)
                .ok_or_else(|| Failure::Usage("kernelize needs a target: --target or a nonzero ell".into()))?;
            match kernelize(&inst, ell)? {
                KernelOutcome::Decided { answer, witness } => {
                    println!("answer: {}", if answer == Answer::Yes { "yes" } else { "no" });
                    if let Some(w) = witness {
                        let colors: Vec<String> = w.iter().map(|c| c.to_string()).collect();
                        println!("witness: {}", colors.join(" "));
                    }
                }
                KernelOutcome::Reduced(r) => {
                    eprintln!(
                        "kernel: {} vertices ({} precolored), remaining target {}",
                        r.kernel.n(),
                        r.precolored_count(),
                        r.remaining_target
                    );
                    emit(output.as_deref(), &write_instance(&r.kernel))?;
                }
            }
        }
        Command::Transform { kind, input, output } => {
            let inst = read_instance(&input)?;
            let out = match kind {
                Kind::SplitMhv => transforms::to_split_mhv(&inst)?,
                Kind::BipartiteMhv => transforms::to_bipartite_mhv(&inst)?,
                Kind::Subdivide => transforms::subdivide_mhe(&inst)?,
                Kind::WeightedComplete => transforms::to_weighted_complete(&inst)?,
            };
            emit(output.as_deref(), &write_instance(&out))?;
        }
        Command::Gen { model, seed, n, p, k, precolor_fraction, variant, max_weight, output } => {
            let model = Model::parse(&model).ok_or_else(|| Failure::Usage(format!("unknown model `{model}`")))?;
            let variant =
                Variant::parse(&variant).ok_or_else(|| Failure::Usage(format!("unknown variant `{variant}`")))?;
            let params = GenParams { n, p, k, precolor_fraction, variant, max_weight };
            let inst = transforms::generate(model, &params, seed).map_err(|e| Failure::Usage(e.to_string()))?;
            emit(output.as_deref(), &write_instance(&inst))?;
        }
        Command::Check { input, coloring } => {
            let inst = read_instance(&input)?;
            let text = match std::fs::read_to_string(&coloring) {
                Ok(t) => t,
                Err(_) => coloring,
            };
            let value = evaluate_objective(&inst, &parse_coloring(&text)?)?;
            println!("happy weight: {value}");
            if let Some(t) = inst.target {
                println!("target {t}: {}", if value >= t { "met" } else { "not met" });
            }
        }
        Command::Bench { dir, algos, reps, json } => {
            let solvers = algos
                .iter()
                .map(|name| {
                    let algo = parse_algo(name)?;
                    Ok(NamedSolver::new(name.clone(), move |inst: &Instance| dispatch::run(inst, algo)))
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            let report = bench(&dir, &solvers, reps).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
            if json {
                print!("{}", report.to_json_lines());
                for w in report.warnings.iter().chain(&report.file_errors).chain(&report.disagreements) {
                    eprintln!("{w}");
                }
            } else {
                print!("{}", report.to_table());
            }
            if !report.passed() {
                return Err(Failure::Disagreement);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Disagreement) => {
            eprintln!("error: solvers disagree");
            ExitCode::from(EXIT_DISAGREE)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::CapExceeded(_) => EXIT_CAP,
                Error::Io(_) => EXIT_USAGE,
                _ => EXIT_INVALID,
            })
        }
    }
}
