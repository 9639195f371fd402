use clap::{Args, Parser, Subcommand};
use glq_cli::{output, parse_tasks, run, Format, ModeSel, RunConfig, Task};
use glq_ekr::chartab::cache::TableCache;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

#[derive(Parser)]
#[command(name = "glq", version, about = "Intersection bounds for GL(n, q) from character data")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Conjugacy classes, their sizes and the enumeration cross-check.
    Classes(Common),
    /// Labeled character table.
    Chartab(Common),
    /// The `Q_t` matrix by both routes.
    Qt(Common),
    /// Weight system and eigenvalue tail.
    Weights(Common),
    /// Hoffman bound against the closed form.
    Bound(Common),
    /// Exhaustive maximum intersecting family.
    Brute(Common),
    /// Rank and constituents of the incidence module.
    Span(Common),
    /// Character ratio estimates.
    Estimates(Common),
    /// Run a task list (default `all`).
    Verify(Common),
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    t: usize,
    #[arg(long, default_value = "both")]
    mode: ModeSel,
    /// Comma-separated tasks or `all`; only read by `verify`.
    #[arg(long, default_value = "all")]
    tasks: String,
    #[arg(long, default_value = "json")]
    format: Format,
    /// Directory for cached character tables.
    #[arg(long, env = "GLQ_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[arg(long)]
    no_cache: bool,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value_t = 60)]
    timeout_secs: u64,
    #[arg(long, default_value_t = 250_000)]
    budget_elements: u64,
    /// Also build `Q_t` from the greatest admissible `h`.
    #[arg(long)]
    alt_h: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (task, c) = match cli.cmd {
        Cmd::Classes(c) => (Some(Task::Classes), c),
        Cmd::Chartab(c) => (Some(Task::Chartab), c),
        Cmd::Qt(c) => (Some(Task::Qt), c),
        Cmd::Weights(c) => (Some(Task::Weights), c),
        Cmd::Bound(c) => (Some(Task::Bound), c),
        Cmd::Brute(c) => (Some(Task::Brute), c),
        Cmd::Span(c) => (Some(Task::Span), c),
        Cmd::Estimates(c) => (Some(Task::Estimates), c),
        Cmd::Verify(c) => (None, c),
    };
    let tasks = match task {
        Some(t) => vec![t],
        None => match parse_tasks(&c.tasks) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        },
    };
    if let Some(k) = c.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            log::warn!("thread pool already configured: {e}");
        }
    }
    let mut cfg = RunConfig::new(c.q, c.n, c.t);
    cfg.mode = c.mode;
    cfg.tasks = tasks;
    cfg.format = c.format;
    cfg.cache = (!c.no_cache).then(|| TableCache::new(c.cache_dir.unwrap_or_else(glq_cli::default_cache_dir)));
    cfg.timeout = Duration::from_secs(c.timeout_secs);
    cfg.budget_elements = c.budget_elements;
    cfg.alt_h = c.alt_h;

    let outcome = run(&cfg);
    let stamp = chrono::Utc::now().to_rfc3339();
    let docs: Vec<_> = outcome.docs.iter().map(|d| d.to_json(&cfg, &stamp)).collect();
    let text = output::render(&docs, cfg.format);
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(text.as_bytes()).is_err() {
        return ExitCode::from(1);
    }
    ExitCode::from(outcome.exit_code() as u8)
}
