//! Command-line front end. Every output echoes the configuration it was produced with.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::corpus::{build_similarity_matrix, Corpus, SimilarityMatrix};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::graph::transition_from_similarity;
use crate::matrix_io::{fmt_full, vector_from_csv};
use crate::ranking::{power_iteration, ReportedRanks, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::robust::{comparative_rank, default_ids, solve_robust, RobustBudget};
use crate::simulator::{empirical_phi1, SimulationBudgets};
use crate::tables::{matches_published_graph, reproduce_tables};
use crate::verify::run_identity_suite;

/// Exit code when a simulation finds a residual above its bound.
pub const EXIT_VIOLATIONS: i32 = 12;
/// Exit code when an identity check exceeds its tolerance.
pub const EXIT_VERIFY_FAILED: i32 = 13;

#[derive(Debug, Parser)]
#[command(
    name = "robust-lexrank",
    version,
    about = "LexRank and l1-robust LexRank"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Point {
    /// The robust rank vector, padded with zeros on the new sentences.
    Robust,
    /// The uniform vector over existing and new sentences.
    Uniform,
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Corpus file: one sentence per line, optionally `id<TAB>text`.
    /// Defaults to the bundled news cluster.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Precomputed similarity matrix (CSV) used instead of computing one.
    #[arg(long)]
    pub similarity: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    /// Total perturbation budget.
    #[arg(long, default_value_t = 0.01)]
    pub eps1: f64,
    /// Per-column budget applied to every column; defaults to `--eps1`.
    #[arg(long)]
    pub eps_col: Option<f64>,
    /// Per-column budgets, one value per sentence.
    #[arg(long, conflicts_with = "eps_col")]
    pub eps_col_file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pairwise idf-modified cosine similarities as CSV.
    Similarity {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Classic LexRank.
    Rank {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        threshold: f64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Robust LexRank.
    Robust {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        threshold: f64,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Scores generated sentences relative to verified ones.
    Comparative {
        #[command(flatten)]
        source: SourceArgs,
        /// Generated sentences appended after the input corpus.
        #[arg(long)]
        generated: Option<PathBuf>,
        /// Number of leading verified sentences when no `--generated` file is given.
        #[arg(long)]
        n_verified: Option<usize>,
        #[arg(long)]
        threshold: f64,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Samples perturbed grown matrices and checks the worst-case bound.
    Simulate {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 0.1)]
        threshold: f64,
        #[arg(long, default_value_t = 0.5)]
        eps_xi: f64,
        #[arg(long, default_value_t = 0.5)]
        eps_xi_col: f64,
        #[arg(long, default_value_t = 0.5)]
        eps_psi: f64,
        #[arg(long, default_value_t = 0.5)]
        eps_psi_col: f64,
        /// Number of future sentences M.
        #[arg(long, default_value_t = 2)]
        growth: usize,
        /// Share of each new column linking back into existing sentences.
        #[arg(long, default_value_t = 0.5)]
        zeta_share: f64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Point::Robust)]
        at: Point,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Compares every published table column with ours.
    ReproduceTables {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Runs the randomized dual-norm identity suite.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn load_corpus(input: Option<&Path>) -> Result<Corpus> {
    match input {
        Some(path) => Corpus::parse(&read(path)?, &path.display().to_string()),
        None => fixtures::news_cluster(),
    }
}

/// Similarity matrix and sentence ids for a command.
fn load_source(source: &SourceArgs) -> Result<(Vec<String>, SimilarityMatrix)> {
    match &source.similarity {
        Some(path) => {
            let sim = SimilarityMatrix::from_csv(&read(path)?, &path.display().to_string())?;
            let ids = match &source.input {
                Some(_) => load_corpus(source.input.as_deref())?.ids(),
                None => default_ids(sim.len()),
            };
            if ids.len() != sim.len() {
                return Err(Error::Model(format!(
                    "{} sentences but a {}x{} similarity matrix",
                    ids.len(),
                    sim.len(),
                    sim.len()
                )));
            }
            Ok((ids, sim))
        }
        None => {
            let corpus = load_corpus(source.input.as_deref())?;
            let sim = build_similarity_matrix(&corpus)?;
            Ok((corpus.ids(), sim))
        }
    }
}

fn source_echo(source: &SourceArgs) -> Value {
    json!({
        "input": source.input.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "bundled:news_cluster".into()),
        "similarity": source.similarity.as_ref().map(|p| p.display().to_string()),
    })
}

fn budget_from_args(args: &BudgetArgs, n: usize) -> Result<RobustBudget> {
    let eps_col = match &args.eps_col_file {
        Some(path) => {
            let v = vector_from_csv(&read(path)?, &path.display().to_string())?;
            if v.len() != n {
                return Err(Error::Model(format!(
                    "{} per-column budgets for {n} sentences",
                    v.len()
                )));
            }
            v.iter().copied().collect()
        }
        None => vec![args.eps_col.unwrap_or(args.eps1); n],
    };
    RobustBudget::new(args.eps1, eps_col)
}

fn check_threshold(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Parameter(format!("threshold {t} outside [0, 1]")));
    }
    Ok(())
}

fn render_ranks(
    config: Value,
    ranks: &ReportedRanks,
    objective: Option<f64>,
    extra: Value,
    format: Format,
) -> Result<String> {
    Ok(match format {
        Format::Json => {
            let mut doc = json!({ "config": config, "ranks": ranks });
            if let Some(obj) = objective {
                doc["objective"] = json!(obj);
            }
            if let Value::Object(map) = extra {
                for (k, v) in map {
                    doc[k] = v;
                }
            }
            serde_json::to_string_pretty(&doc).expect("rank report serializes") + "\n"
        }
        Format::Csv => {
            let mut out = String::new();
            if let Value::Object(map) = &config {
                for (k, v) in map {
                    out.push_str(&format!("# {k}: {v}\n"));
                }
            }
            if let Some(obj) = objective {
                out.push_str(&format!("# objective: {}\n", fmt_full(obj)));
            }
            out.push_str(&ranks.to_csv());
            out
        }
    })
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Similarity { input, output } => {
            let corpus = Corpus::parse(&read(&input)?, &input.display().to_string())?;
            let sim = build_similarity_matrix(&corpus)?;
            match &output {
                Some(path) => {
                    fs::write(path, sim.to_csv())?;
                    println!("{}", sim.len());
                }
                None => {
                    print!("{}", sim.to_csv());
                    eprintln!("{}", sim.len());
                }
            }
            Ok(0)
        }
        Command::Rank {
            source,
            threshold,
            tol,
            max_iter,
            out,
        } => {
            check_threshold(threshold)?;
            let (ids, sim) = load_source(&source)?;
            let p = transition_from_similarity(&sim, threshold)?;
            let x = power_iteration(&p, tol, max_iter)?;
            let ranks = ReportedRanks::new(&ids, x.values())?;
            let config = json!({
                "command": "rank",
                "source": source_echo(&source),
                "threshold": threshold,
                "tol": tol,
                "max_iter": max_iter,
            });
            emit(
                out.output.as_deref(),
                &render_ranks(config, &ranks, None, Value::Null, out.format)?,
            )?;
            Ok(0)
        }
        Command::Robust {
            source,
            threshold,
            budget,
            out,
        } => {
            check_threshold(threshold)?;
            let (ids, sim) = load_source(&source)?;
            let p = transition_from_similarity(&sim, threshold)?;
            let b = budget_from_args(&budget, ids.len())?;
            let res = solve_robust(&p, &b, &ids)?;
            let config = json!({
                "command": "robust",
                "source": source_echo(&source),
                "threshold": threshold,
                "eps1": b.eps1,
                "eps_col": b.eps_col,
            });
            let text = render_ranks(
                config,
                &res.reported,
                Some(res.objective),
                Value::Null,
                out.format,
            )?;
            emit(out.output.as_deref(), &text)?;
            Ok(0)
        }
        Command::Comparative {
            source,
            generated,
            n_verified,
            threshold,
            budget,
            out,
        } => {
            check_threshold(threshold)?;
            let (ids, sim, n_verified) =
                comparative_source(&source, generated.as_deref(), n_verified)?;
            let p = transition_from_similarity(&sim, threshold)?;
            let b = budget_from_args(&budget, ids.len())?;
            let res = comparative_rank(&p, n_verified, &b, &ids)?;
            let config = json!({
                "command": "comparative",
                "source": source_echo(&source),
                "generated": generated.as_ref().map(|p| p.display().to_string()),
                "n_verified": n_verified,
                "threshold": threshold,
                "eps1": b.eps1,
                "eps_col": b.eps_col,
            });
            let extra = json!({ "raw": res.raw, "normalized": res.normalized });
            let text = render_ranks(
                config,
                &res.reported,
                Some(res.objective),
                extra,
                out.format,
            )?;
            emit(out.output.as_deref(), &text)?;
            Ok(0)
        }
        Command::Simulate {
            source,
            threshold,
            eps_xi,
            eps_xi_col,
            eps_psi,
            eps_psi_col,
            growth,
            zeta_share,
            samples,
            seed,
            at,
            out,
        } => {
            check_threshold(threshold)?;
            let (ids, sim) = load_source(&source)?;
            let n = ids.len();
            let p = transition_from_similarity(&sim, threshold)?;
            let budgets = SimulationBudgets::uniform(
                n,
                eps_xi,
                eps_xi_col,
                eps_psi,
                eps_psi_col,
                growth,
                zeta_share,
            )?;
            let x: Vec<f64> = match at {
                Point::Robust => {
                    let res = solve_robust(&p, &budgets.robust_budget(), &ids)?;
                    let mut x = res.x1.values().to_vec();
                    x.resize(n + growth, 0.0);
                    x
                }
                Point::Uniform => vec![1.0 / (n + growth) as f64; n + growth],
            };
            let report = empirical_phi1(&p, &x, &budgets, samples, seed)?;
            let config = json!({
                "command": "simulate",
                "source": source_echo(&source),
                "threshold": threshold,
                "budgets": budgets,
                "samples": samples,
                "seed": seed,
                "at": at,
            });
            let text = match out.format {
                Format::Json => {
                    serde_json::to_string_pretty(&json!({ "config": config, "report": report }))
                        .expect("report serializes")
                        + "\n"
                }
                Format::Csv => format!(
                    "samples,max_residual,bound_value,violations,seed\n{},{},{},{},{}\n",
                    report.samples,
                    fmt_full(report.max_residual),
                    fmt_full(report.bound_value),
                    report.violations,
                    report.seed
                ),
            };
            emit(out.output.as_deref(), &text)?;
            Ok(if report.violations == 0 {
                0
            } else {
                EXIT_VIOLATIONS
            })
        }
        Command::ReproduceTables { source, out } => {
            let (ids, sim) = match (&source.input, &source.similarity) {
                (None, None) => (
                    fixtures::news_cluster()?.ids(),
                    fixtures::news_cluster_similarity()?,
                ),
                _ => load_source(&source)?,
            };
            let report = reproduce_tables(&ids, &sim)?;
            let text = match out.format {
                Format::Json => {
                    let doc = json!({
                        "config": { "command": "reproduce-tables", "source": source_echo(&source) },
                        "graph_matches_published": matches_published_graph(&sim)?,
                        "report": report,
                    });
                    serde_json::to_string_pretty(&doc).expect("table report serializes") + "\n"
                }
                Format::Csv => report.to_csv(),
            };
            emit(out.output.as_deref(), &text)?;
            Ok(0)
        }
        Command::Verify { seed, output } => {
            let checks = run_identity_suite(seed)?;
            let passed = checks.iter().all(|c| c.passed);
            let doc = json!({ "config": { "command": "verify", "seed": seed }, "checks": checks, "passed": passed });
            emit(
                output.as_deref(),
                &(serde_json::to_string_pretty(&doc).expect("verify report serializes") + "\n"),
            )?;
            Ok(if passed { 0 } else { EXIT_VERIFY_FAILED })
        }
    }
}

fn comparative_source(
    source: &SourceArgs,
    generated: Option<&Path>,
    n_verified: Option<usize>,
) -> Result<(Vec<String>, SimilarityMatrix, usize)> {
    if let Some(path) = generated {
        if source.similarity.is_some() {
            return Err(Error::Parameter(
                "--generated cannot be combined with --similarity".into(),
            ));
        }
        let verified = load_corpus(source.input.as_deref())?;
        let extra = Corpus::parse(&read(path)?, &path.display().to_string())?;
        let corpus =
            Corpus::with_generated(verified.sentences().to_vec(), extra.sentences().to_vec())?;
        let sim = build_similarity_matrix(&corpus)?;
        return Ok((corpus.ids(), sim, corpus.n_verified()));
    }
    if source.input.is_none() && source.similarity.is_none() && n_verified.is_none() {
        let corpus = fixtures::news_cluster_with_templates()?;
        let sim = build_similarity_matrix(&corpus)?;
        return Ok((corpus.ids(), sim, corpus.n_verified()));
    }
    let (ids, sim) = load_source(source)?;
    let k = n_verified
        .ok_or_else(|| Error::Parameter("--n-verified or --generated is required".into()))?;
    Ok((ids, sim, k))
}
