//! Task runner behind the `glq` binary.  Every task yields one JSON
//! document; `run` executes them in dependency order over shared state.

pub mod output;
mod tasks;

use glq_ekr::chartab::cache::TableCache;
use glq_ekr::ekr::Mode;
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Duration;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Classes,
    Chartab,
    Qt,
    Weights,
    Bound,
    Brute,
    Span,
    Estimates,
}

impl Task {
    pub const ALL: [Task; 8] = [
        Task::Classes,
        Task::Chartab,
        Task::Qt,
        Task::Weights,
        Task::Bound,
        Task::Brute,
        Task::Span,
        Task::Estimates,
    ];
    pub fn name(self) -> &'static str {
        match self {
            Task::Classes => "classes",
            Task::Chartab => "chartab",
            Task::Qt => "qt",
            Task::Weights => "weights",
            Task::Bound => "bound",
            Task::Brute => "brute",
            Task::Span => "span",
            Task::Estimates => "estimates",
        }
    }
}

impl FromStr for Task {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Task::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown task {s:?}"))
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parses `all` or a comma-separated task list into dependency order.
pub fn parse_tasks(s: &str) -> Result<Vec<Task>, String> {
    let mut v: Vec<Task> = if s.trim() == "all" {
        Task::ALL.to_vec()
    } else {
        s.split(',').map(|p| p.trim().parse()).collect::<Result<_, _>>()?
    };
    v.sort();
    v.dedup();
    Ok(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeSel {
    Points,
    Spaces,
    Both,
}

impl ModeSel {
    pub fn modes(self) -> Vec<Mode> {
        match self {
            ModeSel::Points => vec![Mode::Points],
            ModeSel::Spaces => vec![Mode::Spaces],
            ModeSel::Both => vec![Mode::Points, Mode::Spaces],
        }
    }
    pub fn name(self) -> &'static str {
        match self {
            ModeSel::Points => "points",
            ModeSel::Spaces => "spaces",
            ModeSel::Both => "both",
        }
    }
}

impl FromStr for ModeSel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "points" => Ok(ModeSel::Points),
            "spaces" => Ok(ModeSel::Spaces),
            "both" => Ok(ModeSel::Both),
            _ => Err(format!("unknown mode {s:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(format!("unknown format {s:?}")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub q: u64,
    pub n: usize,
    pub t: usize,
    pub mode: ModeSel,
    pub tasks: Vec<Task>,
    pub format: Format,
    pub cache: Option<TableCache>,
    pub timeout: Duration,
    pub budget_elements: u64,
    pub alt_h: bool,
}

impl RunConfig {
    pub fn new(q: u64, n: usize, t: usize) -> RunConfig {
        RunConfig {
            q,
            n,
            t,
            mode: ModeSel::Both,
            tasks: Task::ALL.to_vec(),
            format: Format::Json,
            cache: None,
            timeout: Duration::from_secs(60),
            budget_elements: 250_000,
            alt_h: false,
        }
    }
    pub fn validate(&self) -> Result<(), String> {
        if self.n == 0 {
            return Err("n must be at least 1".into());
        }
        if self.budget_elements == 0 {
            return Err("budgets must be positive".into());
        }
        Ok(())
    }
}

/// How a task ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    NotApplicable,
    /// An assertion failed.
    Failed,
    /// A budget or the timeout stopped the task.
    Budget,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok | Status::NotApplicable => 0,
            Status::Failed => 1,
            Status::Budget => 2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Document {
    pub task: Task,
    pub status: Status,
    pub cache_hit: Option<bool>,
    pub result: Value,
}

impl Document {
    /// The emitted JSON.  Everything outside `meta` is a function of the
    /// configuration alone.
    pub fn to_json(&self, cfg: &RunConfig, timestamp: &str) -> Value {
        let mut meta = json!({ "timestamp": timestamp });
        if let Some(h) = self.cache_hit {
            meta["cache_hit"] = json!(h);
        }
        json!({
            "schema_version": SCHEMA_VERSION,
            "task": self.task,
            "instance": { "q": cfg.q, "n": cfg.n, "t": cfg.t, "mode": cfg.mode.name() },
            "status": self.status,
            "result": self.result,
            "meta": meta,
        })
    }
}

pub struct RunOutcome {
    pub docs: Vec<Document>,
}

impl RunOutcome {
    pub fn status(&self) -> Status {
        self.docs.iter().map(|d| d.status).max().unwrap_or(Status::Ok)
    }
    pub fn exit_code(&self) -> i32 {
        // a budget stop outranks an assertion failure only when nothing failed
        if self.docs.iter().any(|d| d.status == Status::Failed) {
            1
        } else {
            self.status().exit_code()
        }
    }
    pub fn get(&self, task: Task) -> Option<&Document> {
        self.docs.iter().find(|d| d.task == task)
    }
}

pub fn run(cfg: &RunConfig) -> RunOutcome {
    tasks::Runner::new(cfg).run()
}

pub fn default_cache_dir() -> PathBuf {
    PathBuf::from(".glq-cache")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn task_lists() {
        assert_eq!(parse_tasks("all").unwrap(), Task::ALL.to_vec());
        assert_eq!(parse_tasks("span, qt,qt").unwrap(), vec![Task::Qt, Task::Span]);
        assert!(parse_tasks("qt,x").is_err());
    }

    #[test]
    fn exit_codes() {
        let doc = |status| Document { task: Task::Qt, status, cache_hit: None, result: Value::Null };
        let o = RunOutcome { docs: vec![doc(Status::Budget), doc(Status::Failed)] };
        assert_eq!(o.exit_code(), 1);
        let o = RunOutcome { docs: vec![doc(Status::Ok), doc(Status::NotApplicable)] };
        assert_eq!(o.exit_code(), 0);
        let o = RunOutcome { docs: vec![doc(Status::Budget)] };
        assert_eq!(o.exit_code(), 2);
    }

    #[test]
    fn in_process_run() {
        let mut cfg = RunConfig::new(2, 3, 1);
        cfg.tasks = vec![Task::Weights, Task::Bound];
        let out = run(&cfg);
        assert_eq!(out.exit_code(), 0);
        let b = &out.get(Task::Bound).unwrap().result;
        assert_eq!(b["modes"][1]["mode"], "spaces");
    }
}
