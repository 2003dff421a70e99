//! Batch workbench over the engine: censuses, weight tables, Fitting
//! sequences, parity matchings, and a self-test battery. Emits JSON-lines
//! (or TSV) reports with a deterministic row order.

use clap::{Args, Parser, Subcommand, ValueEnum};
use weightlab::corpus::{parse_corpus, CorpusEntry, BUILTIN_CORPUS};
use weightlab::runner::{self, Row, Status, TaskConfig};
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "weightlab", version, about = "Exact block/weight workbench for finite groups")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Simple-versus-weight counting and the vertex census per group/prime
    Census(RunArgs),
    /// Weight class tables
    Weights(RunArgs),
    /// Fitting block sequences with per-step count verification
    Fitting(RunArgs),
    /// Odd-order parity matching between simples and weights
    Navarro(RunArgs),
    /// Fixture battery (star calculus, extraspecial algebras, symplectic
    /// Brauer compatibility)
    Selftest(SelfArgs),
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Run a single prime (default: all primes dividing each group order)
    #[arg(long, conflicts_with = "all_p")]
    p: Option<u64>,
    /// Run every prime dividing each group order (the default)
    #[arg(long)]
    all_p: bool,
    /// Corpus file; the built-in corpus is used when absent
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Group order bound
    #[arg(long, default_value_t = 2500)]
    max_order: usize,
    /// Seed in hex (overridden by WEIGHTLAB_SEED)
    #[arg(long)]
    seed: Option<String>,
    /// Worker threads
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Jsonl)]
    format: Format,
    /// Soft per-(group,prime) budget in seconds
    #[arg(long, default_value_t = 60)]
    budget: u64,
    /// Record per-row timing (timing fields are outside the byte-level
    /// determinism contract)
    #[arg(long)]
    timing: bool,
    /// Census checks to run, comma-separated: alperin,okuyama,brauer
    #[arg(long)]
    checks: Option<String>,
    /// Override the automatic splitting-field degree
    #[arg(long)]
    field_degree: Option<usize>,
}

#[derive(Args, Clone)]
struct SelfArgs {
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Jsonl)]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, PartialEq)]
enum Format {
    Jsonl,
    Tsv,
}

fn parse_seed(cli_seed: &Option<String>) -> Result<u64, String> {
    if let Ok(env) = std::env::var("WEIGHTLAB_SEED") {
        let s = env.trim_start_matches("0x");
        return u64::from_str_radix(s, 16).map_err(|e| format!("WEIGHTLAB_SEED: {e}"));
    }
    match cli_seed {
        None => Ok(0xA1DE11),
        Some(s) => {
            let s = s.trim_start_matches("0x");
            u64::from_str_radix(s, 16).map_err(|e| format!("--seed: {e}"))
        }
    }
}

fn load_corpus(path: &Option<PathBuf>) -> Result<Vec<CorpusEntry>, String> {
    let text = match path {
        None => BUILTIN_CORPUS.to_string(),
        Some(p) => std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?,
    };
    parse_corpus(&text).map_err(|e| e.to_string())
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Census(a) => run_batch(&a, "census"),
        Cmd::Weights(a) => run_batch(&a, "weights"),
        Cmd::Fitting(a) => run_batch(&a, "fitting"),
        Cmd::Navarro(a) => run_batch(&a, "navarro"),
        Cmd::Selftest(a) => run_selftest(&a),
    };
    std::process::exit(code);
}

fn run_selftest(args: &SelfArgs) -> i32 {
    let seed = match parse_seed(&args.seed) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("config error: {e}");
            return 2;
        }
    };
    let rows = runner::selftest(seed);
    emit("selftest", seed, rows, &args.out, args.format)
}

struct HeaderEcho {
    corpus: String,
    p: Option<u64>,
    max_order: usize,
    jobs: usize,
}

fn run_batch(args: &RunArgs, command: &str) -> i32 {
    let seed = match parse_seed(&args.seed) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("config error: {e}");
            return 2;
        }
    };
    let entries = match load_corpus(&args.corpus) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("corpus error: {e}");
            return 2;
        }
    };
    let checks: Vec<String> = match &args.checks {
        None => vec!["alperin".into(), "okuyama".into(), "brauer".into()],
        Some(s) => s.split(',').map(|c| c.trim().to_string()).collect(),
    };
    let cfg = TaskConfig {
        seed,
        budget_secs: args.budget,
        timing: args.timing,
        max_order: args.max_order,
        checks,
        field_degree: args.field_degree,
    };
    // assemble (entry, prime) tasks; the prime list needs the group order,
    // which needs a closure pass
    let mut tasks: Vec<(CorpusEntry, u64)> = Vec::new();
    for e in &entries {
        let order = match weightlab_core::group::PermGroup::close(
            &e.name,
            e.degree,
            &e.generators,
            args.max_order,
        ) {
            Ok(g) => g.order(),
            Err(err) => {
                eprintln!("corpus line {}: {err}", e.line);
                return 2;
            }
        };
        for p in runner::primes_for(order, args.p) {
            tasks.push((e.clone(), p));
        }
    }
    let command = command.to_string();
    let rows: Vec<Row> = if args.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(args.jobs)
            .build()
            .expect("thread pool");
        pool.install(|| {
            use rayon::prelude::*;
            tasks
                .par_iter()
                .flat_map_iter(|(e, p)| run_task(&command, e, *p, &cfg))
                .collect()
        })
    } else {
        tasks
            .iter()
            .flat_map(|(e, p)| run_task(&command, e, *p, &cfg))
            .collect()
    };
    let echo = HeaderEcho {
        corpus: args
            .corpus
            .as_ref()
            .map(|p| p.display().to_string())
            .unwrap_or_else(|| "builtin".into()),
        p: args.p,
        max_order: args.max_order,
        jobs: args.jobs,
    };
    emit_with_echo(&command, seed, rows, &args.out, args.format, Some(&echo))
}

fn run_task(command: &str, e: &CorpusEntry, p: u64, cfg: &TaskConfig) -> Vec<Row> {
    match command {
        "census" => runner::census_task(e, p, cfg),
        "weights" => runner::weights_task(e, p, cfg),
        "fitting" => runner::fitting_task(e, p, cfg),
        "navarro" => runner::navarro_task(e, p, cfg),
        _ => unreachable!(),
    }
}

fn emit(command: &str, seed: u64, rows: Vec<Row>, out: &Option<PathBuf>, format: Format) -> i32 {
    emit_with_echo(command, seed, rows, out, format, None)
}

fn emit_with_echo(
    command: &str,
    seed: u64,
    mut rows: Vec<Row>,
    out: &Option<PathBuf>,
    format: Format,
    echo: Option<&HeaderEcho>,
) -> i32 {
    rows.sort_by(|a, b| {
        (&a.group, a.p, &a.kind, a.index).cmp(&(&b.group, b.p, &b.kind, b.index))
    });
    let pass = rows.iter().filter(|r| r.status == Status::Pass).count();
    let fail = rows.iter().filter(|r| r.status == Status::Fail).count();
    let na = rows.iter().filter(|r| r.status == Status::NotApplicable).count();
    let timestamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut buf: Vec<u8> = Vec::new();
    match format {
        Format::Jsonl => {
            let mut header = json!({
                "schema": 1,
                "command": command,
                "seed": format!("{seed:#x}"),
                "engine": env!("CARGO_PKG_VERSION"),
                "timestamp": timestamp,
            });
            if let Some(e) = echo {
                header["corpus"] = json!(e.corpus);
                header["p"] = match e.p {
                    Some(p) => json!(p),
                    None => json!("all"),
                };
                header["max_order"] = json!(e.max_order);
                header["jobs"] = json!(e.jobs);
            }
            writeln!(buf, "{header}").unwrap();
            for r in &rows {
                let mut v = r.value.clone();
                v["kind"] = json!(r.kind);
                v["status"] = json!(match r.status {
                    Status::Pass => "pass",
                    Status::Fail => "fail",
                    Status::NotApplicable => "n/a",
                });
                writeln!(buf, "{v}").unwrap();
            }
            let summary = json!({"summary": {"pass": pass, "fail": fail, "not_applicable": na}});
            writeln!(buf, "{summary}").unwrap();
        }
        Format::Tsv => {
            writeln!(buf, "kind\tgroup\tp\tindex\tstatus\tdetail").unwrap();
            for r in &rows {
                writeln!(
                    buf,
                    "{}\t{}\t{}\t{}\t{}\t{}",
                    r.kind,
                    r.group,
                    r.p,
                    r.index,
                    match r.status {
                        Status::Pass => "pass",
                        Status::Fail => "fail",
                        Status::NotApplicable => "n/a",
                    },
                    r.value
                )
                .unwrap();
            }
            writeln!(buf, "summary\t\t\t\t{pass} pass, {fail} fail, {na} n/a\t").unwrap();
        }
    }
    match out {
        None => {
            std::io::stdout().write_all(&buf).unwrap();
        }
        Some(path) => {
            if let Err(e) = std::fs::write(path, &buf) {
                eprintln!("write {}: {e}", path.display());
                return 2;
            }
        }
    }
    if fail > 0 {
        1
    } else {
        0
    }
}
