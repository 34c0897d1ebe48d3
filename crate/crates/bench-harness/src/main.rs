use bench_harness::{
    ablate_operators, ablation_to_csv, breakdown_by_perturbation, breakdown_to_csv,
    build_manifest, evaluate, records_to_jsonl, summary_to_csv, sweep_kmax, sweep_to_csv,
    write_report, BackendSpec, EvalConfig, HarnessError, Mode,
};
use clap::{Args, Parser, Subcommand};
use operators::{Category, Registry};
use perturbations::rng::substream;
use perturbations::{
    apply_spec, build_hard_set, read_manifest, sample_spec, write_manifest, PerturbationKind,
};
use std::path::{Path, PathBuf};
use theory_sim::{
    compare_bounds, contraction_to_csv, covering_study, covering_to_csv, gain_ratio_experiment,
    identity_row, simulate_contraction, synthetic_corpus, BoundConfig, RhoMode, SimConfig,
};

#[derive(Parser)]
#[command(name = "tws", about = "Thinking-with-Sound benchmark harness", version)]
struct Cli {
    /// JSON config file; command-line flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply one sampled perturbation to a single WAV file
    Perturb {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// additive_noise | reverberation | pitch_shift | time_stretch
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Build a perturbed hard set from labeled source audio
    BuildHard {
        #[arg(long)]
        audio_dir: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long)]
        manifest_out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        p: Option<f64>,
    },
    /// Evaluate a backend over a hard-set manifest
    Eval(EvalArgs),
    /// Leave-one-category-out ablation
    Ablate {
        #[command(flatten)]
        eval: EvalArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Accuracy and step counts across several k_max budgets
    SweepSteps {
        #[command(flatten)]
        eval: EvalArgs,
        /// comma-separated k_max values
        #[arg(long, default_value = "1,2,3,5,8")]
        values: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo residual-error experiments
    SimulateTheory {
        #[command(subcommand)]
        experiment: TheoryCommand,
    },
    /// Measure per-operator contraction factors against each perturbation
    CoveringStudy {
        #[arg(long, default_value_t = 30)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-perturbation breakdown of a record-level results file
    Report {
        /// JSONL of record results written by eval --records-out
        #[arg(long)]
        records: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct EvalArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// baseline | tws
    #[arg(long)]
    mode: Option<String>,
    /// scripted | oracle | http
    #[arg(long)]
    backend: Option<String>,
    #[arg(long)]
    k_max: Option<usize>,
    /// comma-separated categories to drop from the registry
    #[arg(long)]
    exclude: Option<String>,
    #[arg(long)]
    parallelism: Option<usize>,
    /// responses for the scripted backend, one per line
    #[arg(long)]
    script_file: Option<PathBuf>,
    /// oracle cooperation probability
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    oracle_seed: Option<u64>,
    #[arg(long)]
    trace_dir: Option<PathBuf>,
    /// summary CSV destination (stdout when omitted)
    #[arg(long)]
    report_out: Option<PathBuf>,
    /// record-level JSONL destination
    #[arg(long)]
    records_out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum TheoryCommand {
    Contraction {
        #[arg(long, default_value_t = 0.7)]
        alpha: f64,
        #[arg(long, default_value_t = 0.5)]
        rho: f64,
        #[arg(long, default_value_t = 5)]
        k_steps: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 1.0)]
        initial_norm: f64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// draw rho exactly instead of uniformly below the ceiling
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Bounds {
        #[arg(long, default_value_t = 0.7)]
        alpha: f64,
        #[arg(long, default_value_t = 0.5)]
        rho: f64,
        #[arg(long, default_value_t = 5)]
        k_steps: usize,
        #[arg(long, default_value_t = 1.0)]
        initial_norm: f64,
        #[arg(long, default_value_t = 1.0)]
        lipschitz_l: f64,
        #[arg(long, default_value_t = 0.1)]
        baseline_loss: f64,
    },
    GainRatio {
        #[arg(long, default_value_t = 0.3)]
        rho1: f64,
        #[arg(long, default_value_t = 0.6)]
        rho2: f64,
        #[arg(long, default_value_t = 0.1)]
        alpha: f64,
        #[arg(long, default_value_t = 2)]
        k_steps: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

/// Optional values shared between the config file and eval flags; any
/// flag given on the command line wins over the file.
#[derive(Debug, Default, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    mode: Option<String>,
    backend: Option<String>,
    k_max: Option<usize>,
    exclude: Option<String>,
    parallelism: Option<usize>,
    script_file: Option<PathBuf>,
    alpha: Option<f64>,
    oracle_seed: Option<u64>,
    seed: Option<u64>,
    p: Option<f64>,
}

fn load_config(path: Option<&Path>) -> Result<FileConfig, HarnessError> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|source| HarnessError::Io {
                path: p.to_path_buf(),
                source,
            })?;
            serde_json::from_str(&text)
                .map_err(|e| HarnessError::Usage(format!("config {}: {e}", p.display())))
        }
    }
}

fn parse_kind(s: &str) -> Result<PerturbationKind, HarnessError> {
    PerturbationKind::ALL
        .into_iter()
        .find(|k| k.name() == s)
        .ok_or_else(|| HarnessError::Usage(format!("unknown perturbation kind {s:?}")))
}

fn parse_categories(s: &str) -> Result<Vec<Category>, HarnessError> {
    s.split(',')
        .filter(|part| !part.trim().is_empty())
        .map(|part| {
            let part = part.trim();
            Category::ALL
                .into_iter()
                .find(|c| c.name() == part)
                .ok_or_else(|| HarnessError::Usage(format!("unknown category {part:?}")))
        })
        .collect()
}

fn parse_values(s: &str) -> Result<Vec<usize>, HarnessError> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| HarnessError::Usage(format!("bad k_max value {v:?}")))
        })
        .collect()
}

fn eval_config(args: &EvalArgs, file: &FileConfig) -> Result<EvalConfig, HarnessError> {
    let mode = match args
        .mode
        .as_deref()
        .or(file.mode.as_deref())
        .unwrap_or("tws")
    {
        "baseline" => Mode::Baseline,
        "tws" => Mode::Tws,
        other => return Err(HarnessError::Usage(format!("unknown mode {other:?}"))),
    };
    let backend = match args
        .backend
        .as_deref()
        .or(file.backend.as_deref())
        .unwrap_or("oracle")
    {
        "scripted" => {
            let path = args
                .script_file
                .as_ref()
                .or(file.script_file.as_ref())
                .ok_or_else(|| {
                    HarnessError::Usage("scripted backend needs --script-file".into())
                })?;
            let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
                path: path.clone(),
                source,
            })?;
            BackendSpec::Scripted(text.lines().map(str::to_string).collect())
        }
        "oracle" => BackendSpec::Oracle {
            alpha: args.alpha.or(file.alpha).unwrap_or(1.0),
            seed: args.oracle_seed.or(file.oracle_seed).unwrap_or(0),
        },
        "http" => BackendSpec::Http,
        other => return Err(HarnessError::Usage(format!("unknown backend {other:?}"))),
    };
    let exclusions = match args.exclude.as_deref().or(file.exclude.as_deref()) {
        Some(s) => parse_categories(s)?,
        None => Vec::new(),
    };
    Ok(EvalConfig {
        mode,
        backend,
        k_max: args.k_max.or(file.k_max).unwrap_or(tws_engine::DEFAULT_K_MAX),
        exclusions,
        parallelism: args.parallelism.or(file.parallelism).unwrap_or(4),
        trace_dir: args.trace_dir.clone(),
    })
}

fn emit(out: Option<&Path>, contents: &str) -> Result<(), HarnessError> {
    match out {
        Some(path) => write_report(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    let file = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Perturb {
            input,
            output,
            kind,
            seed,
        } => {
            let kind = parse_kind(&kind)?;
            let w = audio_core::wav::load_wav(&input)?;
            let path = vec![seed, kind.index(), 0];
            let mut rng = substream(&path);
            let spec = sample_spec(kind, &mut rng, path);
            let perturbed = apply_spec(&w, &spec)?;
            audio_core::wav::store_wav(&perturbed, &output)?;
            println!("{}", serde_json::to_string(&spec).expect("spec serializes"));
        }
        Command::BuildHard {
            audio_dir,
            labels,
            out_dir,
            manifest_out,
            seed,
            p,
        } => {
            let sources = build_manifest(&audio_dir, &labels)?;
            let manifest = build_hard_set(
                &sources,
                &out_dir,
                seed.or(file.seed).unwrap_or(1337),
                p.or(file.p).unwrap_or(0.3),
            )?;
            write_manifest(&manifest_out, &manifest)?;
            println!("wrote {} records to {}", manifest.len(), manifest_out.display());
        }
        Command::Eval(args) => {
            let cfg = eval_config(&args, &file)?;
            let manifest = read_manifest(&args.manifest)?;
            let (summary, results) = evaluate(&manifest, &cfg)?;
            if let Some(path) = &args.records_out {
                write_report(path, &records_to_jsonl(&results))?;
            }
            emit(args.report_out.as_deref(), &summary_to_csv(&summary))?;
        }
        Command::Ablate { eval, out } => {
            let cfg = eval_config(&eval, &file)?;
            let manifest = read_manifest(&eval.manifest)?;
            let table = ablate_operators(&manifest, &cfg)?;
            emit(out.as_deref(), &ablation_to_csv(&table))?;
        }
        Command::SweepSteps { eval, values, out } => {
            let cfg = eval_config(&eval, &file)?;
            let manifest = read_manifest(&eval.manifest)?;
            let rows = sweep_kmax(&manifest, &cfg, &parse_values(&values)?)?;
            emit(out.as_deref(), &sweep_to_csv(&rows))?;
        }
        Command::SimulateTheory { experiment } => match experiment {
            TheoryCommand::Contraction {
                alpha,
                rho,
                k_steps,
                trials,
                initial_norm,
                seed,
                exact,
                out,
            } => {
                let cfg = SimConfig {
                    alpha,
                    rho,
                    k_steps,
                    trials,
                    initial_norm,
                    seed,
                };
                let mode = if exact { RhoMode::Exact } else { RhoMode::Sampled };
                let result = simulate_contraction(&cfg, mode)?;
                emit(out.as_deref(), &contraction_to_csv(&result))?;
            }
            TheoryCommand::Bounds {
                alpha,
                rho,
                k_steps,
                initial_norm,
                lipschitz_l,
                baseline_loss,
            } => {
                let cfg = SimConfig {
                    alpha,
                    rho,
                    k_steps,
                    trials: theory_sim::MIN_TRIALS,
                    initial_norm,
                    seed: 0,
                };
                let bc = BoundConfig {
                    lipschitz_l,
                    baseline_loss,
                };
                let cmp = compare_bounds(&cfg, &bc)?;
                println!(
                    "tws_bound={:.6} baseline_bound={:.6} improvement_factor={:.6}",
                    cmp.tws_bound, cmp.baseline_bound, cmp.improvement_factor
                );
            }
            TheoryCommand::GainRatio {
                rho1,
                rho2,
                alpha,
                k_steps,
                trials,
                seed,
            } => {
                let r = gain_ratio_experiment(rho1, rho2, alpha, k_steps, trials, seed)?;
                println!(
                    "empirical_ratio={} predicted_ratio={:.6} approximation_invalid={}",
                    r.empirical_ratio
                        .map_or("n/a".to_string(), |v| format!("{v:.6}")),
                    r.predicted_ratio,
                    r.approximation_invalid
                );
            }
        },
        Command::CoveringStudy { trials, seed, out } => {
            let registry = Registry::standard();
            let corpus = synthetic_corpus(seed);
            let kinds = PerturbationKind::ALL.to_vec();
            let matrix = covering_study(&registry, &kinds, &corpus, trials, seed)?;
            let identity = identity_row(&kinds, &corpus, trials, seed)?;
            let mut reports = matrix.reports.clone();
            reports.extend(identity);
            emit(out.as_deref(), &covering_to_csv(&reports))?;
        }
        Command::Report { records, out } => {
            let text = std::fs::read_to_string(&records).map_err(|source| HarnessError::Io {
                path: records.clone(),
                source,
            })?;
            let results = text
                .lines()
                .enumerate()
                .filter(|(_, l)| !l.trim().is_empty())
                .map(|(i, l)| {
                    serde_json::from_str(l).map_err(|e| {
                        HarnessError::Data(format!("{} line {}: {e}", records.display(), i + 1))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let rows = breakdown_by_perturbation(&results);
            emit(out.as_deref(), &breakdown_to_csv(&rows))?;
        }
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
