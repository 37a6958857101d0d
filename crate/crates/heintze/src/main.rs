//! Command-line front end: validates input documents, prints invariant
//! sheets, compares pairs, evaluates spectrum profiles, runs the seeded
//! numeric experiments, and executes the invariant suite.
//!
//! Exit codes are a stable contract: 0 success (for `compare`: the pair was
//! distinguished), 10 a comparison found no separating invariant, 2 invalid
//! input, 3 experiment parameter out of range, 1 check-suite failure.

use clap::{Parser, Subcommand, ValueEnum};
use heintze::check::{self, SuiteConfig};
use heintze::experiments::{
    coset_divergence_experiment, diag_comparison_check, geometric_scales,
    hausdorff_dim_estimate, lemma31_check, segment_curve, CosetBranch, ExperimentError,
};
use heintze::heintze::HeintzeData;
use heintze::io::{ExactRat, InputDocument, IoError, LoadedData};
use heintze::metric::{quasi_triangle_constant, QuasiMetricModel};
use heintze::rational::{parse_rat, to_f64, Rat};
use heintze::report::{
    AlgebraSummary, CheckReport, CompareReport, EstimateReport, HausdorffSegment,
    HeintzeSummary, InspectReport, ProfileEvaluation, ProfileReport, PropertyResult,
    SandwichRow,
};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "heintze",
    version,
    about = "Exact quasi-isometry invariants of purely real Heintze groups",
    after_help = "Exit codes: 0 success/distinguished, 10 not distinguished, \
                  2 invalid input, 3 parameter out of range, 1 check failure."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a document and print its invariant sheet.
    Inspect {
        file: PathBuf,
        /// Write the machine-readable report here instead of fencing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two data up to scaling: a pair document, or two files.
    Compare {
        file: PathBuf,
        second: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the spectrum profile, with optional point evaluations.
    Profile {
        file: PathBuf,
        /// Rational p values to evaluate, comma separated (e.g. "7,19/2").
        #[arg(long, value_delimiter = ',')]
        p: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a seeded numeric experiment on a datum.
    Estimate {
        experiment: Experiment,
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample count; each experiment has its own default.
        #[arg(long)]
        samples: Option<usize>,
        /// Exponent, as a rational string or a float; defaults depend on
        /// the experiment.
        #[arg(long)]
        mu: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suite on the built-in corpus or on a file.
    Check {
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Experiment {
    /// Box-counting dimension along eigen-direction segments.
    Hausdorff,
    /// Norm lower bound for the gauge distance.
    Lemma31,
    /// Sandwich between a derivation's metric and its semisimple part's.
    Diagsandwich,
    /// Coset divergence under conjugation.
    Cosets,
    /// Sampled quasi-triangle constant.
    Triangle,
}

#[derive(Debug)]
enum CliError {
    /// Unreadable, malformed, or invalid input: exit 2.
    Input(String),
    /// Parameter outside its mathematical domain: exit 3.
    Param(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Param(_) => 3,
        }
    }
    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Param(m) => m,
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Metric(_) | ExperimentError::Algebra(_) => {
                CliError::Input(e.to_string())
            }
            _ => CliError::Param(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn read_document(path: &Path) -> Result<InputDocument, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(InputDocument::parse(&text)?)
}

/// Emits the human rendering to stdout and the machine document either to
/// `--out` or as a fenced JSON block. Identical inputs produce byte-identical
/// output. A closed pipe (e.g. `| head`) ends the output quietly.
fn emit<T: Serialize>(human: &str, machine: &T, out: Option<&Path>) -> Result<(), CliError> {
    use std::io::Write;
    let json = serde_json::to_string_pretty(machine)
        .expect("reports contain no non-serializable values");
    let mut stdout = std::io::stdout().lock();
    let printed = match out {
        Some(path) => {
            std::fs::write(path, json + "\n").map_err(|e| {
                CliError::Input(format!("cannot write {}: {e}", path.display()))
            })?;
            write!(stdout, "{human}")
        }
        None => write!(stdout, "{human}\n```json\n{json}\n```\n"),
    };
    match printed {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(CliError::Input(format!("cannot write to stdout: {e}"))),
        Ok(()) => Ok(()),
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Inspect { file, out } => cmd_inspect(&file, out.as_deref()),
        Command::Compare { file, second, out } => {
            cmd_compare(&file, second.as_deref(), out.as_deref())
        }
        Command::Profile { file, p, out } => cmd_profile(&file, &p, out.as_deref()),
        Command::Estimate { experiment, file, seed, samples, mu, out } => {
            cmd_estimate(experiment, &file, seed, samples, mu.as_deref(), out.as_deref())
        }
        Command::Check { file, seed, out } => cmd_check(file.as_deref(), seed, out.as_deref()),
    }
}

fn cmd_inspect(file: &Path, out: Option<&Path>) -> Result<u8, CliError> {
    let report = match read_document(file)?.build()? {
        LoadedData::Heintze(h) => InspectReport::Heintze(HeintzeSummary::new(&h)),
        LoadedData::Algebra(a) => InspectReport::Algebra(AlgebraSummary {
            dimension: a.dim(),
            nilpotency_class: a.nilpotency_class(),
            labels: a.labels().to_vec(),
            center_dim: a.center().dim(),
            derived_dim: a.derived_subalgebra().dim(),
        }),
        LoadedData::Pair(..) => {
            return Err(CliError::Input(IoError::UnexpectedPair.to_string()))
        }
    };
    emit(&report.human(), &report, out)?;
    Ok(0)
}

fn cmd_compare(
    file: &Path,
    second: Option<&Path>,
    out: Option<&Path>,
) -> Result<u8, CliError> {
    let (left, right) = match second {
        Some(second_path) => {
            let left = read_document(file)?.build_single()?;
            let right = read_document(second_path)?.build_single()?;
            (left, right)
        }
        None => match read_document(file)?.build()? {
            LoadedData::Pair(l, r) => (l, r),
            _ => {
                return Err(CliError::Input(
                    "compare needs a pair document or two files".into(),
                ))
            }
        },
    };
    let report = CompareReport::new(&heintze::heintze::compare(&left, &right));
    let distinguished = report.distinguished();
    emit(&report.human(), &report, out)?;
    Ok(if distinguished { 0 } else { 10 })
}

fn cmd_profile(file: &Path, p_args: &[String], out: Option<&Path>) -> Result<u8, CliError> {
    let h = read_document(file)?.build_single()?;
    let mut points: Vec<Rat> = Vec::with_capacity(p_args.len());
    for raw in p_args {
        points.push(parse_rat(raw).map_err(CliError::Input)?);
    }
    let evaluations: Vec<ProfileEvaluation> = points
        .iter()
        .map(|p| match h.profile_value(p) {
            Ok(dim) => ProfileEvaluation { p: p.into(), dimension: Some(dim), note: None },
            Err(e) => ProfileEvaluation { p: p.into(), dimension: None, note: Some(e.to_string()) },
        })
        .collect();
    let report = ProfileReport {
        trace: h.trace().into(),
        jump_set: h.jump_set().iter().map(ExactRat::from).collect(),
        profile: (&h.spectrum_profile()).into(),
        evaluations,
    };
    emit(&report.human(), &report, out)?;
    Ok(0)
}

fn parse_mu(raw: &str) -> Result<f64, CliError> {
    if let Ok(q) = parse_rat(raw) {
        return Ok(to_f64(&q));
    }
    raw.parse::<f64>()
        .map_err(|_| CliError::Input(format!("cannot parse `{raw}` as a rational or float")))
}

fn cmd_estimate(
    experiment: Experiment,
    file: &Path,
    seed: u64,
    samples: Option<usize>,
    mu: Option<&str>,
    out: Option<&Path>,
) -> Result<u8, CliError> {
    let h = read_document(file)?.build_single()?;
    let report = match experiment {
        Experiment::Hausdorff => hausdorff_report(&h, seed, samples.unwrap_or(50_000))?,
        Experiment::Lemma31 => {
            let mu = match mu {
                Some(raw) => parse_mu(raw)?,
                None => to_f64(h.max_eigenvalue()) + 1.0,
            };
            let r = lemma31_check(&h, mu, samples.unwrap_or(20_000), seed)?;
            EstimateReport::Lemma31 {
                seed,
                samples: r.samples,
                mu: r.mu,
                c_hat: r.c_hat,
                violations: r.violations,
                trend_slope: r.trend_slope,
                bin_minima: r.bin_minima,
            }
        }
        Experiment::Diagsandwich => {
            let sweeps: Vec<f64> = match mu {
                Some(raw) => vec![parse_mu(raw)?],
                None => vec![1.1, 1.5, 2.0],
            };
            let samples = samples.unwrap_or(2_000);
            let mut rows = Vec::with_capacity(sweeps.len());
            for mu in sweeps {
                let r = diag_comparison_check(&h, mu, samples, seed)?;
                rows.push(SandwichRow {
                    mu: r.mu,
                    constant: r.c,
                    lower_side: r.lower_side,
                    upper_side: r.upper_side,
                    trivial: r.trivial,
                });
            }
            EstimateReport::DiagSandwich { seed, samples, sweeps: rows }
        }
        Experiment::Cosets => cosets_report(&h, seed, samples.unwrap_or(40))?,
        Experiment::Triangle => {
            let samples = samples.unwrap_or(5_000);
            let model = QuasiMetricModel::new(&h).map_err(|e| CliError::Input(e.to_string()))?;
            EstimateReport::Triangle {
                seed,
                samples,
                constant: quasi_triangle_constant(&model, samples, seed),
            }
        }
    };
    emit(&report.human(), &report, out)?;
    Ok(0)
}

/// One eigen-direction segment per distinct eigenvalue, estimated over two
/// decades of scales.
fn hausdorff_report(
    h: &HeintzeData,
    seed: u64,
    curve_samples: usize,
) -> Result<EstimateReport, CliError> {
    let model = QuasiMetricModel::new(h).map_err(|e| CliError::Input(e.to_string()))?;
    let scales = geometric_scales(1.0, 0.01, 16);
    let mut segments = Vec::new();
    let mut seen: Vec<Rat> = Vec::new();
    for chain in &h.jordan().chains {
        if seen.contains(&chain.eigenvalue) {
            continue;
        }
        seen.push(chain.eigenvalue.clone());
        let direction: Vec<f64> = chain.eigenvector().iter().map(to_f64).collect();
        let curve = segment_curve(&direction, curve_samples);
        let est = hausdorff_dim_estimate(&model, &curve, &scales)?;
        segments.push(HausdorffSegment {
            eigenvalue: (&chain.eigenvalue).into(),
            direction_label: h.algebra().format_vector(chain.eigenvector()),
            estimate: est.value,
            scale_max: est.scale_range.0,
            scale_min: est.scale_range.1,
            regression_points: est.regression_points,
            residual: est.residual,
        });
    }
    Ok(EstimateReport::Hausdorff { seed, curve_samples, segments })
}

/// Probes the coset foliation of the distinguished subalgebra: translates
/// by the first standard basis direction outside its normalizer when one
/// exists, otherwise stays inside (bounded branch).
fn cosets_report(h: &HeintzeData, seed: u64, samples: usize) -> Result<EstimateReport, CliError> {
    let subalgebra = h.h_alpha();
    let algebra = h.algebra();
    let normalizer = algebra
        .normalizer(&subalgebra)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let x: Vec<Rat> = (0..algebra.dim())
        .map(|i| algebra.basis_vector(i))
        .find(|candidate| !normalizer.contains(candidate))
        .unwrap_or_else(|| algebra.basis_vector(0));
    let t_grid = geometric_scales(1000.0, 1.0, 12);
    let r = coset_divergence_experiment(h, &subalgebra, &x, &t_grid, samples, seed)?;
    let (branch, growth_exponent, max_distance, obstruction) = match r.branch {
        CosetBranch::Divergent { exponent, obstruction } => (
            "divergent".to_string(),
            Some(exponent),
            None,
            Some(obstruction.iter().map(ExactRat::from).collect()),
        ),
        CosetBranch::Bounded { max_distance } => {
            ("bounded".to_string(), None, Some(max_distance), None)
        }
    };
    Ok(EstimateReport::Cosets {
        seed,
        samples,
        subalgebra_dim: subalgebra.dim(),
        element: x.iter().map(ExactRat::from).collect(),
        branch,
        growth_exponent,
        max_distance,
        obstruction,
        distances: r.distances,
    })
}

fn cmd_check(file: Option<&Path>, seed: u64, out: Option<&Path>) -> Result<u8, CliError> {
    let mut config = SuiteConfig { seed, ..SuiteConfig::default() };
    let report = match file {
        None => check::run_builtin_suite(&config),
        Some(path) => {
            // In check mode a failing document is a reported property
            // failure, not an input error: corrupted files are the suite's
            // negative controls.
            config.random_graded_instances = 0;
            match read_document(path).and_then(|doc| Ok(doc.build()?)) {
                Err(e) => CheckReport {
                    passed: false,
                    properties: vec![PropertyResult {
                        name: "document-validation".into(),
                        passed: false,
                        cases: 1,
                        counterexample: Some(e.message().to_string()),
                    }],
                },
                Ok(LoadedData::Heintze(h)) => {
                    let corpus = vec![("file".to_string(), *h)];
                    prepend_validation(check::run_suite(&corpus, &config))
                }
                Ok(LoadedData::Pair(l, r)) => {
                    let corpus =
                        vec![("file-left".to_string(), *l), ("file-right".to_string(), *r)];
                    prepend_validation(check::run_suite(&corpus, &config))
                }
                Ok(LoadedData::Algebra(a)) => {
                    // No derivation: only the algebra-level properties apply.
                    let named = vec![("file".to_string(), a.clone())];
                    let properties = vec![
                        check::check_bracket_laws_for(&named),
                        check::check_bch_associativity_for(&[a], config.bch_triples, seed),
                    ];
                    prepend_validation(CheckReport {
                        passed: properties.iter().all(|p| p.passed),
                        properties,
                    })
                }
            }
        }
    };
    let passed = report.passed;
    emit(&report.human(), &report, out)?;
    Ok(if passed { 0 } else { 1 })
}

fn prepend_validation(mut report: CheckReport) -> CheckReport {
    report.properties.insert(
        0,
        PropertyResult {
            name: "document-validation".into(),
            passed: true,
            cases: 1,
            counterexample: None,
        },
    );
    report
}
