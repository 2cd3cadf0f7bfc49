use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use uniplex::boolean;
use uniplex::generators::{sample_pure_random, sample_uniform_layer, AdmissiblePair};
use uniplex::homology::{betti_numbers, count_holes, reduced_betti_numbers};
use uniplex::predictions;
use uniplex::shellability;

use uniplex_cli::config::{ExperimentConfig, OutputFormat};
use uniplex_cli::experiments;
use uniplex_cli::format;
use uniplex_cli::records::RunOutput;

#[derive(Parser)]
#[command(name = "uniplex", about = "Random simplicial complex simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelFlag {
    Uniform,
    Pure,
}

#[derive(Clone, Copy, ValueEnum)]
enum PredictWhat {
    Entropy,
    Binom,
    SkeletonLinear,
    SkeletonConstant,
    Holes,
    Identity,
    HSign,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a closed-form prediction curve
    Predict {
        #[arg(long, value_enum)]
        what: PredictWhat,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        t_prime: Option<usize>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, default_value_t = 0.0)]
        q: f64,
        #[arg(long, default_value_t = 0.0)]
        omega: f64,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        j: Option<u64>,
    },
    /// Draw one sample and write it in the complex text format
    Sample {
        #[arg(long, value_enum)]
        model: ModelFlag,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long)]
        seed: u64,
        /// Admissible pair file for the uniform model (defaults to (∅,∅))
        #[arg(long)]
        pair: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Betti numbers, Euler characteristics and hole certificates of one complex
    Homology {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        field: u32,
        #[arg(long)]
        reduced: bool,
        #[arg(long)]
        holes_size: Option<usize>,
    },
    /// Shellability analysis of one complex
    Shell {
        file: PathBuf,
        /// Budgeted exact search
        #[arg(long)]
        exact: bool,
        /// Stop at the intersection-graph obstruction scan
        #[arg(long)]
        obstruction_only: bool,
        #[arg(long)]
        h_vector: bool,
        #[arg(long)]
        cm: bool,
        #[arg(long, default_value_t = 2)]
        field: u32,
        #[arg(long, default_value_t = 5_000_000)]
        node_budget: u64,
    },
    /// Monotone-function evasiveness: census or a single function
    Evasive {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        census: bool,
        /// Truth table file: 2^n bits as hex, input index = binary
        /// encoding of (x_1..x_n), x_1 least significant
        #[arg(long)]
        function: Option<PathBuf>,
    },
    /// Complete-skeleton fraction scan
    ScanSkeleton(ScanArgs),
    /// Euler characteristic statistics scan
    ScanEuler(ScanArgs),
    /// Betti / hole certificate scan
    ScanHomology(ScanArgs),
    /// Shellability and h_t sign scan
    ScanShell(ScanArgs),
    /// Induced-subcomplex copy counts
    ScanSubcomplex(ScanArgs),
    /// Exact evasiveness census over an arity grid
    Census(ScanArgs),
}

#[derive(Args)]
struct ScanArgs {
    /// JSON experiment configuration
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    mem_budget_mb: Option<u64>,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

type AnyError = Box<dyn std::error::Error>;

fn run() -> Result<ExitCode, AnyError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Predict { what, n, t, t_prime, c, k, q, omega, p, j } => {
            predict(what, n, t, t_prime, c, k, q, omega, p, j)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sample { model, n, t, p, seed, pair, out } => {
            use rand_chacha::rand_core::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let complex = match model {
                ModelFlag::Pure => sample_pure_random(n, t, p, &mut rng)?,
                ModelFlag::Uniform => {
                    let pair = match pair {
                        Some(path) => format::parse_admissible_pair(&std::fs::read_to_string(path)?)?,
                        None => AdmissiblePair::trivial(n, t),
                    };
                    sample_uniform_layer(&pair, &mut rng)
                }
            };
            emit(out, format::write_complex(&complex))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Homology { file, field, reduced, holes_size } => {
            let complex = format::parse_complex(&std::fs::read_to_string(file)?)?;
            let profile = if reduced {
                reduced_betti_numbers(&complex, field)?
            } else {
                betti_numbers(&complex, field)?
            };
            let mut report = json!({
                "betti": profile.betti,
                "reduced": reduced,
                "field": field,
                "chi_f": complex.euler_characteristic(),
                "chi_betti": betti_numbers(&complex, field)?.euler_characteristic(),
            });
            if let Some(s) = holes_size {
                let cert = count_holes(&complex, s, None)?;
                report["holes"] = json!({
                    "s": s,
                    "X": cert.x,
                    "Y": cert.y,
                    "lower_bound": cert.lower_bound(),
                });
            }
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Shell { file, exact, obstruction_only, h_vector, cm, field, node_budget } => {
            let complex = format::parse_complex(&std::fs::read_to_string(file)?)?;
            let mut report = json!({});
            let obstruction = shellability::shelling_obstruction(&complex)?;
            report["obstruction"] = match &obstruction {
                Some(x) => json!(x.vertices()),
                None => json!(null),
            };
            let mut budget_hit = false;
            if exact && !obstruction_only {
                let result = shellability::is_shellable(&complex, node_budget);
                budget_hit = result.verdict == shellability::ShellingVerdict::BudgetExceeded;
                report["exact"] = json!({
                    "verdict": format!("{:?}", result.verdict),
                    "witness": result.witness.map(|w| w
                        .iter()
                        .map(|f| f.vertices())
                        .collect::<Vec<_>>()),
                    "nodes": result.nodes_explored,
                });
            }
            if h_vector {
                let h = shellability::h_vector(&complex)?;
                report["h_vector"] = json!(h.h.iter().map(|&v| v as i64).collect::<Vec<_>>());
                report["h_top"] = json!(h.h_top() as i64);
            }
            if cm {
                let r = shellability::is_cohen_macaulay(&complex, field)?;
                report["cohen_macaulay"] = json!(r.cm);
            }
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(if budget_hit { ExitCode::from(2) } else { ExitCode::SUCCESS })
        }
        Command::Evasive { n, census, function } => {
            let report = if census {
                let c = boolean::evasive_census(n)?;
                json!({
                    "n": n,
                    "total": c.total,
                    "evasive": c.evasive,
                    "fraction": c.evasive_fraction(),
                    "kss_violations": c.kss_violations,
                })
            } else {
                let path = function.ok_or("evasive needs --census or --function <file>")?;
                let f = format::parse_truth_table_hex(&std::fs::read_to_string(path)?, n)?;
                let stats = boolean::decision_tree_complexity(&f)?;
                json!({
                    "n": n,
                    "d": stats.d,
                    "evasive": stats.evasive,
                })
            };
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::ScanSkeleton(args) => scan(args, experiments::run_skeleton_scan),
        Command::ScanEuler(args) => scan(args, experiments::run_euler_experiment),
        Command::ScanHomology(args) => scan(args, experiments::run_homology_experiment),
        Command::ScanShell(args) => scan(args, experiments::run_shellability_scan),
        Command::ScanSubcomplex(args) => scan(args, experiments::run_subcomplex_experiment),
        Command::Census(args) => scan(args, experiments::run_evasive_census),
    }
}

fn scan(
    args: ScanArgs,
    runner: fn(&ExperimentConfig) -> Result<RunOutput, experiments::RunError>,
) -> Result<ExitCode, AnyError> {
    let mut cfg: ExperimentConfig = serde_json::from_str(&std::fs::read_to_string(&args.config)?)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = args.trials {
        cfg.trials = trials;
    }
    if let Some(out) = args.out {
        cfg.out = Some(out.to_string_lossy().into_owned());
    }
    if let Some(fmt) = args.format {
        cfg.format = match fmt.as_str() {
            "csv" => OutputFormat::Csv,
            "json" => OutputFormat::Json,
            other => return Err(format!("unknown format `{other}` (csv|json)").into()),
        };
    }
    if let Some(workers) = args.workers {
        cfg.workers = workers;
    }
    if let Some(mb) = args.mem_budget_mb {
        // 4-byte entries
        cfg.budgets.matrix_entries = mb * 1_000_000 / 4;
    }
    let out = runner(&cfg)?;
    out.write()?;
    Ok(if out.any_budget_exceeded() { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn emit(out: Option<PathBuf>, text: String) -> Result<(), AnyError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn predict(
    what: PredictWhat,
    n: Option<usize>,
    t: Option<usize>,
    t_prime: Option<usize>,
    c: Option<f64>,
    k: Option<u32>,
    q: f64,
    omega: f64,
    p: Option<f64>,
    j: Option<u64>,
) -> Result<(), AnyError> {
    let need = |name: &'static str| move || -> AnyError { format!("missing --{name}").into() };
    let report = match what {
        PredictWhat::Entropy => {
            let c = c.ok_or_else(need("c"))?;
            let v = predictions::entropy_prediction(c)?;
            json!({"formula": v.formula, "params": {"c": c}, "value": v.value, "divergent": v.divergent})
        }
        PredictWhat::Binom => {
            let (n, c) = (n.ok_or_else(need("n"))?, c.ok_or_else(need("c"))?);
            let v = predictions::binom_asymptotic(n, c)?;
            json!({"formula": "binom_asymptotic", "params": {"n": n, "c": c}, "value": v})
        }
        PredictWhat::SkeletonLinear => {
            let spec = predictions::ThresholdSpec {
                c: c.ok_or_else(need("c"))?,
                k: k.ok_or_else(need("k"))?,
                q,
                n: n.ok_or_else(need("n"))?,
            };
            let pair = predictions::skeleton_threshold_linear(&spec)?;
            json!({
                "formula": "skeleton_threshold_linear",
                "params": {"c": spec.c, "k": spec.k, "q": spec.q, "n": spec.n},
                "value": {"complete": pair.complete, "incomplete": pair.incomplete},
            })
        }
        PredictWhat::SkeletonConstant => {
            let (n, t, tp) = (
                n.ok_or_else(need("n"))?,
                t.ok_or_else(need("t"))?,
                t_prime.ok_or_else(need("t-prime"))?,
            );
            let v = predictions::skeleton_threshold_constant_t(n, t, tp, omega)?;
            json!({
                "formula": "skeleton_threshold_constant_t",
                "params": {"n": n, "t": t, "t_prime": tp, "omega": omega},
                "value": v,
            })
        }
        PredictWhat::Holes => {
            let (n, t, p) = (
                n.ok_or_else(need("n"))?,
                t.ok_or_else(need("t"))?,
                p.ok_or_else(need("p"))?,
            );
            let v = predictions::expected_holes_prediction(n, t, p)?;
            json!({"formula": v.formula, "params": {"n": n, "t": t, "p": p}, "value": v.value})
        }
        PredictWhat::Identity => {
            let (n, j) = (n.ok_or_else(need("n"))? as u64, j.ok_or_else(need("j"))?);
            let v = predictions::alternating_binomial(n, j)?;
            json!({
                "formula": "alternating_binomial",
                "params": {"n": n, "j": j},
                "value": v.to_string(),
            })
        }
        PredictWhat::HSign => {
            let (n, t) = (n.ok_or_else(need("n"))?, t.ok_or_else(need("t"))?);
            let v = predictions::h_t_sign_threshold(n, t);
            json!({"formula": "h_t_sign_threshold", "params": {"n": n, "t": t}, "value": v})
        }
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
