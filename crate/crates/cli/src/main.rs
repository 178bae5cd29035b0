mod job;

use clap::{Args, Parser, Subcommand};
use job::Job;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relpres::analysis::classify;
use relpres::centre::{classify_centre, CentreError};
use relpres::decomposition::report::ReportOptions;
use relpres::decomposition::{assemble_report, build_context, DecompositionError};
use relpres::diagrams::labels::{check_diagram, RelativePresentation};
use relpres::diagrams::{validate_map, DiagramError, DiagramSpec, HowieDiagram, SphereMap};
use relpres::products::asp::{asp_diagonal_checks, PreparedAsp};
use relpres::products::{prop1_conditions, samples, OmegaFamily};
use relpres::rewriting::text::TextError;
use relpres::rewriting::{Limits, RewriteEngine};
use relpres::selftest;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

#[derive(Parser)]
#[command(name = "relpres", version, about = "One-relator relative presentations over torsion-free groups")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Opts {
    /// Maximum number of rewrite rules kept by completion.
    #[arg(long, global = true, default_value_t = 5000, value_parser = clap::value_parser!(u64).range(1..))]
    limits_kb_rules: u64,
    /// Word length for bounded searches.
    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    depth: u64,
    /// Wall-clock budget for each completion.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    timeout_ms: Option<u64>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Unimodularity, generalised unimodularity and complexity of a relator.
    Classify { job: PathBuf },
    /// The semidirect decomposition report.
    Decompose {
        job: PathBuf,
        /// Radius of the ball of T whose cosets are enumerated.
        #[arg(long, default_value_t = 1)]
        radius: usize,
    },
    /// Centre classification.
    Centre { job: PathBuf },
    /// Diagram files.
    Diagram {
        #[command(subcommand)]
        action: DiagramCommand,
    },
    /// Product constructions.
    Products {
        #[command(subcommand)]
        action: ProductsCommand,
    },
    /// Runs the acceptance suite.
    Selftest {
        #[arg(long)]
        criterion: Option<u8>,
    },
}

#[derive(Subcommand)]
enum DiagramCommand {
    /// Validates the map and, given a presentation, the labels.
    Check {
        diagram: PathBuf,
        #[arg(long)]
        presentation: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ProductsCommand {
    /// Checks an index family and/or random amalgamated semidirect products.
    Verify {
        family: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        asp_samples: usize,
    },
}

struct Failure {
    kind: &'static str,
    message: String,
}

impl Failure {
    fn new(kind: &'static str, message: impl ToString) -> Self {
        Failure { kind, message: message.to_string() }
    }
}

impl From<TextError> for Failure {
    fn from(e: TextError) -> Self {
        Failure::new("PARSE", e)
    }
}

impl From<DiagramError> for Failure {
    fn from(e: DiagramError) -> Self {
        Failure::new("MALFORMED", e)
    }
}

impl From<CentreError> for Failure {
    fn from(e: CentreError) -> Self {
        match e {
            CentreError::HypothesisUnverified(_) => Failure::new("HYPOTHESIS_UNVERIFIED", e),
            CentreError::NotCyclicallyReduced => Failure::new("MALFORMED", e),
        }
    }
}

impl From<DecompositionError> for Failure {
    fn from(e: DecompositionError) -> Self {
        match e {
            DecompositionError::RejectedRelator(_) => Failure::new("HYPOTHESIS_UNVERIFIED", e),
            _ => Failure::new("ERROR", e),
        }
    }
}

fn json_value<T: serde::Serialize>(x: &T) -> Result<Value, Failure> {
    serde_json::to_value(x).map_err(|e| Failure::new("ERROR", e))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::new("IO", format!("{}: {e}", path.display())))
}

fn limits(o: &Opts) -> Limits {
    Limits {
        max_rules: o.limits_kb_rules as usize,
        time_budget: o.timeout_ms.map(Duration::from_millis),
        ..Limits::default()
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Classify { .. } => "classify",
        Command::Decompose { .. } => "decompose",
        Command::Centre { .. } => "centre",
        Command::Diagram { .. } => "diagram check",
        Command::Products { .. } => "products verify",
        Command::Selftest { .. } => "selftest",
    }
}

fn run(cli: &Cli) -> Result<Value, Failure> {
    let limits = limits(&cli.opts);
    let depth = cli.opts.depth as usize;
    match &cli.command {
        Command::Classify { job } => {
            let job = Job::parse(&read(job)?, false)?;
            let w = job.relator()?;
            let c = classify(w, job.alphabet.variables.len()).map_err(|e| Failure::new("MALFORMED", e))?;
            let mut v = json_value(&c)?;
            v["relator"] = json!(w.display(&job.alphabet).to_string());
            if let Some(nf) = &c.normal_form {
                v["normal_form_literal"] = json!(nf.literal.display(&job.alphabet).to_string());
            }
            Ok(v)
        }
        Command::Decompose { job, radius } => {
            let job = Job::parse(&read(job)?, false)?;
            let ctx = build_context(job.relator()?, &job.alphabet, &job.g, &limits)?;
            let opts = ReportOptions { depth, radius: *radius, ..ReportOptions::default() };
            json_value(&assemble_report(&ctx, &opts)?)
        }
        Command::Centre { job } => {
            let job = Job::parse(&read(job)?, true)?;
            let w = job.relator()?;
            let t = job.t_group(w, &limits).map_err(|m| Failure::new("HYPOTHESIS_UNVERIFIED", m))?;
            json_value(&classify_centre(&job.g, &t, w, &job.alphabet, &limits)?)
        }
        Command::Diagram { action: DiagramCommand::Check { diagram, presentation } } => {
            let text = read(diagram)?;
            let spec: DiagramSpec = serde_json::from_str(&text).map_err(|e| Failure::new("MALFORMED", e))?;
            let map = validate_map(&SphereMap::from_spec(&spec)?)?;
            match presentation {
                None => Ok(json!({ "map": json_value(&map)? })),
                Some(p) => {
                    let job = Job::parse(&read(p)?, false)?;
                    let d = HowieDiagram::from_spec(&spec, &job.alphabet.coefficients, &job.alphabet.variables)?;
                    let pres = RelativePresentation {
                        h: job.g.clone(),
                        variables: job.alphabet.variables.clone(),
                        relators: job.relators.clone(),
                    };
                    let engine = RewriteEngine::complete(&pres.h, &limits);
                    json_value(&check_diagram(&d, &pres, &engine))
                }
            }
        }
        Command::Products { action: ProductsCommand::Verify { family, asp_samples } } => {
            if family.is_none() && *asp_samples == 0 {
                return Err(Failure::new("ERROR", "nothing to verify: give a family file or --asp-samples"));
            }
            let mut out = json!({});
            if let Some(path) = family {
                let fam = OmegaFamily::from_json(&read(path)?).map_err(|e| Failure::new("MALFORMED", e))?;
                let r = prop1_conditions(&fam, depth, &limits).map_err(|e| Failure::new("ERROR", e))?;
                out["family"] = json_value(&r)?;
            }
            if *asp_samples > 0 {
                out["asp"] = asp_samples_report(*asp_samples, cli.opts.seed, &limits)?;
            }
            Ok(out)
        }
        Command::Selftest { criterion } => {
            let outcomes = match criterion {
                Some(id) => vec![selftest::run(*id, cli.opts.seed)],
                None => selftest::run_all(cli.opts.seed),
            };
            for o in &outcomes {
                eprintln!("{}", o.line());
            }
            let rows: Vec<Value> = outcomes
                .iter()
                .map(|o| json!({ "id": o.id, "title": o.title, "passed": o.passed, "detail": o.detail }))
                .collect();
            let failed: Vec<u8> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
            if failed.is_empty() {
                Ok(json!({ "criteria": rows }))
            } else {
                Err(Failure::new("SELFTEST_FAILED", format!("criteria {failed:?} failed")))
            }
        }
    }
}

fn asp_samples_report(n: usize, seed: u64, limits: &Limits) -> Result<Value, Failure> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut instances, mut undecided, mut vacuous, mut failures) = (0, 0, 0, Vec::new());
    for i in 0..n {
        let sub_seed: u64 = rng.gen();
        let mut sub = ChaCha8Rng::seed_from_u64(sub_seed);
        let asp =
            PreparedAsp::new(samples::random_finite(&mut sub), limits, 8).map_err(|e| Failure::new("ERROR", e))?;
        match asp_diagonal_checks(&asp, 8, sub_seed) {
            Ok(r) => {
                instances += r.instances();
                undecided += r.undecided;
                vacuous += usize::from(r.vacuous);
            }
            Err(e) => failures.push(format!("sample {i}: {e}")),
        }
    }
    let status = if !failures.is_empty() {
        "FAILS"
    } else if undecided > 0 {
        "UNKNOWN"
    } else {
        "EXACT"
    };
    Ok(json!({
        "samples": n,
        "vacuous": vacuous,
        "instances": instances,
        "undecided": undecided,
        "failures": failures,
        "status": status,
    }))
}

fn has_unknown(v: &Value) -> bool {
    match v {
        Value::String(s) => s.starts_with("UNKNOWN"),
        Value::Array(xs) => xs.iter().any(has_unknown),
        Value::Object(m) => m.values().any(has_unknown),
        _ => false,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let mut report = json!({
        "schema": 1,
        "command": command_name(&cli.command),
        "seed": cli.opts.seed,
        "limits": {
            "kb_rules": cli.opts.limits_kb_rules,
            "depth": cli.opts.depth,
            "timeout_ms": cli.opts.timeout_ms,
        },
    });
    let code = match run(&cli) {
        Ok(result) => {
            let code = if has_unknown(&result) { 2 } else { 0 };
            report["result"] = result;
            code
        }
        Err(f) => {
            eprintln!("error: {}: {}", f.kind, f.message);
            report["error"] = json!({ "kind": f.kind, "message": f.message });
            1
        }
    };
    let text = serde_json::to_string_pretty(&report).unwrap_or_default();
    match &cli.opts.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("error: IO: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => {
            use std::io::Write;
            let _ = writeln!(std::io::stdout().lock(), "{text}");
        }
    }
    ExitCode::from(code)
}
