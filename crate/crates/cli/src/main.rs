use std::io::Write;
use std::process::ExitCode;

use approxcommute::approx::{self, CertMode};
use approxcommute::family::{build_example, check_predictions, ExampleParams};
use approxcommute::probability::commuting_probability;
use approxcommute::registry::Statement;
use approxcommute::spec::{default_order_cap, GroupSpec, ResolvedGroup, SubsetSpec};
use approxcommute::suite::{run_suite, SuiteConfig};
use approxcommute::witness::{bounded_conjugate_cover, witness_theorem_1_1, witness_theorem_1_2, PipelineOptions};
use approxcommute::{Error, Rational, Subset};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "approxcommute", version, about = "Commuting probabilities and approximate subgroups of finite groups")]
struct Cli {
    /// Report errors on stderr as JSON objects.
    #[arg(long, global = true)]
    json: bool,
    /// Order cap for constructed groups (default: $APPROXCOMMUTE_ORDER_CAP or 2000).
    #[arg(long, global = true)]
    order_cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact commuting probability pr(X, Y).
    Pr {
        group: String,
        x: String,
        y: String,
    },
    /// Certificate E with A² ⊆ EA.
    Certify {
        group: String,
        a: String,
        /// Minimum cover by branch and bound instead of greedy.
        #[arg(long)]
        exact: bool,
    },
    /// Witness pipeline for one of the structure theorems.
    Witness {
        theorem: Theorem,
        group: String,
        a: String,
        /// Lower bound on the commuting probability, as p/q (default: the exact value).
        #[arg(long)]
        epsilon: Option<Rational>,
        /// Class cap for the normal-subgroup search.
        #[arg(long, default_value_t = 64)]
        class_cap: usize,
    },
    /// Run the statement suite described by a config file.
    Verify {
        #[arg(long)]
        config: String,
        /// Comma-separated statement ids overriding the config.
        #[arg(long, value_delimiter = ',')]
        statements: Vec<Statement>,
        /// Run a single instance key such as `S3/s4` or `r17`.
        #[arg(long)]
        instance: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        jobs: Option<usize>,
        /// Write the report here instead of the config's output path.
        #[arg(long)]
        output: Option<String>,
    },
    /// Build an example-family group.
    Example {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        u: usize,
        #[arg(long, value_enum, default_value_t = Emit::Report)]
        emit: Emit,
    },
    /// Covering constructions.
    Cover {
        #[command(subcommand)]
        kind: CoverKind,
    },
}

#[derive(Subcommand)]
enum CoverKind {
    /// Ruzsa cover F with A ⊆ F·Y·Y⁻¹.
    Ruzsa { group: String, a: String, y: String },
    /// Common centralizer D of g_1..g_s in A^(2^s) with A ⊆ ∪ D·d_i.
    Conjugate {
        group: String,
        a: String,
        /// Comma-separated element ids.
        #[arg(value_delimiter = ',')]
        gs: Vec<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Theorem {
    Thm1,
    Thm2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Group,
    Report,
}

enum Outcome {
    Ok,
    CheckFailed,
}

fn group_arg(arg: &str, cap: usize) -> approxcommute::Result<ResolvedGroup> {
    GroupSpec::parse_arg(arg)?.resolve(cap)
}

fn subset_arg(arg: &str, group: &ResolvedGroup) -> approxcommute::Result<Subset> {
    SubsetSpec::parse_arg(arg)?.resolve(group)
}

/// Writes a line to stdout; a closed pipe is not an error.
fn emit(text: &str) -> approxcommute::Result<()> {
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn print_json(value: &serde_json::Value) -> approxcommute::Result<()> {
    emit(&serde_json::to_string_pretty(value)?)
}

fn run(cli: &Cli) -> approxcommute::Result<Outcome> {
    let cap = cli.order_cap.unwrap_or_else(default_order_cap);
    match &cli.command {
        Command::Pr { group, x, y } => {
            let g = group_arg(group, cap)?;
            let pr = commuting_probability(&subset_arg(x, &g)?, &subset_arg(y, &g)?)?;
            if cli.json {
                print_json(&json!({ "group": g.label, "pr": pr }))?;
            } else {
                emit(&pr.to_string())?;
            }
        }
        Command::Certify { group, a, exact } => {
            let g = group_arg(group, cap)?;
            let a = subset_arg(a, &g)?;
            let mode = if *exact { CertMode::Exact } else { CertMode::Greedy };
            let cert = approx::certify(&a, mode)?;
            if !cert.verify()? {
                return Err(Error::VerificationFailed("A^2 ⊆ EA failed".into()));
            }
            if cli.json {
                print_json(&serde_json::to_value(cert.record())?)?;
            } else {
                emit(&format!("k={}", cert.k_cert))?;
                emit(&format!("cover={:?}", cert.cover.to_vec()))?;
                emit(&format!("doubling={} tripling={} mode={:?}", cert.doubling, cert.tripling, cert.mode))?;
            }
        }
        Command::Witness { theorem, group, a, epsilon, class_cap } => {
            let g = group_arg(group, cap)?;
            let a = subset_arg(a, &g)?;
            let opts = PipelineOptions { class_cap: *class_cap, ..PipelineOptions::default() };
            let report = match theorem {
                Theorem::Thm1 => witness_theorem_1_1(&a, epsilon.clone(), &opts)?.report(&g.label),
                Theorem::Thm2 => witness_theorem_1_2(&a, epsilon.clone(), &opts)?.report(&g.label),
            };
            print_json(&serde_json::to_value(report)?)?;
        }
        Command::Verify { config, statements, instance, seed, jobs, output } => {
            let mut cfg = SuiteConfig::load(config)?;
            if !statements.is_empty() {
                cfg.statements = statements.clone();
            }
            if let Some(s) = seed {
                cfg.seed = *s;
            }
            if jobs.is_some() {
                cfg.jobs = *jobs;
            }
            if output.is_some() {
                cfg.output_path = output.clone();
            }
            if cli.order_cap.is_some() {
                cfg.order_cap = cap;
            }
            cfg.only_instance = instance.clone();
            let report = run_suite(&cfg)?;
            if cfg.output_path.is_none() {
                emit(&report.to_json()?)?;
            }
            for s in &report.statements {
                eprintln!(
                    "{:<9} instances={:<5} failures={} min_slack={}",
                    s.id.id(),
                    s.instances,
                    s.failures,
                    s.min_slack.as_ref().map_or("-".to_string(), |r| r.to_string())
                );
                for f in &s.failure_records {
                    eprintln!("  FAIL {} {}: {}", f.instance, f.description, f.repro);
                }
            }
            for w in report.witnesses.iter().filter(|w| !w.ok) {
                eprintln!("  FAIL witness {} {} thm{}: {}", w.group, w.subset, w.theorem, w.error.as_deref().unwrap_or(""));
            }
            eprintln!("checks={} failures={}", report.total_checks, report.failures);
            if !report.passed() {
                return Ok(Outcome::CheckFailed);
            }
        }
        Command::Example { n, k, u, emit } => {
            let inst = build_example(ExampleParams::new(*n, *k, *u)?, cap)?;
            match emit {
                Emit::Group => {
                    let spec = json!({
                        "kind": "table",
                        "label": format!("Ex({n},{k},{u})"),
                        "table": inst.group.table(),
                        "labels": inst.group.labels(),
                    });
                    print_json(&spec)?;
                }
                Emit::Report => {
                    let checks = check_predictions(&inst, approx::DEFAULT_NODE_BUDGET)?;
                    let ok = checks.iter().all(|c| c.holds);
                    print_json(&json!({
                        "schema": "1",
                        "params": inst.params,
                        "A": inst.a.to_vec(),
                        "A0": inst.a0.to_vec(),
                        "H": inst.h.to_vec(),
                        "Z": inst.z.to_vec(),
                        "checks": checks,
                        "ok": ok,
                    }))?;
                    if !ok {
                        return Ok(Outcome::CheckFailed);
                    }
                }
            }
        }
        Command::Cover { kind } => match kind {
            CoverKind::Ruzsa { group, a, y } => {
                let g = group_arg(group, cap)?;
                let (a, y) = (subset_arg(a, &g)?, subset_arg(y, &g)?);
                let f = approx::ruzsa_cover(&a, &y)?;
                let bound = Rational::ratio(a.product(&y)?.len(), y.len());
                print_json(&json!({ "F": f.to_vec(), "size": f.len(), "bound": bound }))?;
            }
            CoverKind::Conjugate { group, a, gs } => {
                let g = group_arg(group, cap)?;
                let a = subset_arg(a, &g)?;
                let cert = approx::certify_best(&a, approx::DEFAULT_NODE_BUDGET)?;
                let cover = bounded_conjugate_cover(&cert, gs)?;
                print_json(&json!({
                    "k": cert.k_cert,
                    "center_set": cover.center_set.to_vec(),
                    "translates": cover.translates,
                }))?;
            }
        },
    }
    Ok(Outcome::Ok)
}

fn report_error(cli: &Cli, err: &Error) {
    if cli.json {
        eprintln!("{}", json!({ "error": err.kind(), "message": err.to_string() }));
    } else {
        eprintln!("error: {err}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(err) => {
            report_error(&cli, &err);
            ExitCode::from(if err.is_check_failure() { 1 } else { 2 })
        }
    }
}
