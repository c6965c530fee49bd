//! Command-line front end: argument parsing, input loading, report
//! rendering and the closure benchmark.

mod commands;
mod render;

use std::collections::BTreeMap;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use limcolim::dirsys::Verdict;

pub use commands::dispatch;

#[derive(Parser, Debug)]
#[command(name = "limcolim", version, about = "Limits, directed colimits and the comparison map between them")]
pub struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Emit Graphviz instead of a report, where supported.
    #[arg(long, global = true)]
    pub dot: bool,
    /// Horizon for lazy systems.
    #[arg(long, global = true, default_value_t = 10)]
    pub horizon: usize,
    /// Search budget (largest subset size tried).
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Seed for randomized inputs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Group,
}

/// Where a structure comes from: a JSON file or a gallery item.
#[derive(Args, Debug, Clone, Default)]
pub struct Source {
    #[arg(long)]
    pub file: Option<std::path::PathBuf>,
    #[arg(long)]
    pub gallery: Option<String>,
    /// Gallery parameter `key=value`; repeatable.
    #[arg(long = "param")]
    pub params: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum Group {
    #[command(subcommand)]
    Category(CategoryCmd),
    #[command(subcommand)]
    Poset(PosetCmd),
    #[command(subcommand)]
    Monoid(MonoidCmd),
    #[command(subcommand)]
    Eset(EsetCmd),
    #[command(subcommand)]
    Congruence(CongruenceCmd),
    #[command(subcommand)]
    Dirsys(DirsysCmd),
    #[command(subcommand)]
    Gallery(GalleryCmd),
    #[command(subcommand)]
    Bench(BenchCmd),
}

#[derive(Subcommand, Debug)]
pub enum CategoryCmd {
    /// Validate a category and report its generators and object preorder.
    Validate {
        #[command(flatten)]
        src: Source,
    },
    /// Smallest morphism set whose division closure is everything.
    Emultdiv {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        min: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum PosetCmd {
    /// Minimal elements, critical set, gathering and the condition battery.
    Analyze {
        #[command(flatten)]
        src: Source,
    },
    /// Whether B gathers the minimal elements under E (all E if omitted).
    Gather {
        #[command(flatten)]
        src: Source,
        /// Comma-separated elements of B.
        #[arg(long, value_delimiter = ',')]
        b: Vec<String>,
        #[arg(long)]
        e: Option<String>,
    },
    Critical {
        #[command(flatten)]
        src: Source,
    },
    Dot {
        #[command(flatten)]
        src: Source,
    },
}

#[derive(Subcommand, Debug)]
pub enum MonoidCmd {
    Battery {
        #[command(flatten)]
        src: Source,
        /// Run on the opposite monoid.
        #[arg(long)]
        opposite: bool,
    },
    Multdiv {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        min: bool,
    },
    /// Enumerate left congruences (at most 6 elements).
    Congruences {
        #[command(flatten)]
        src: Source,
    },
}

#[derive(Subcommand, Debug)]
pub enum EsetCmd {
    Limit {
        #[command(flatten)]
        src: Source,
    },
    /// Quotient by the congruence generated by a relation file.
    Quotient {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        relation: std::path::PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum CongruenceCmd {
    Close {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        relation: std::path::PathBuf,
    },
    MinimalGens {
        #[command(flatten)]
        src: Source,
    },
}

#[derive(Subcommand, Debug)]
pub enum DirsysCmd {
    /// The comparison map of a finite system file or a lazy gallery system.
    Iota {
        #[arg(long)]
        system: Option<std::path::PathBuf>,
        #[command(flatten)]
        src: Source,
    },
    /// Common stage at which generators fix a representative.
    Stabilize {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_delimiter = ',', required = true)]
        gens: Vec<String>,
        #[arg(long, default_value_t = 0)]
        stage: usize,
        /// Label of the representative at `--stage`.
        #[arg(long)]
        element: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum GalleryCmd {
    List,
    Run {
        name: String,
        #[arg(long = "param")]
        params: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum BenchCmd {
    /// Congruence closure on a cyclic group acting on a large cycle.
    Closure {
        #[arg(long, default_value_t = 1_000_000)]
        elements: usize,
        #[arg(long, default_value_t = 500_000)]
        pairs: usize,
        #[arg(long, default_value_t = 10)]
        morphisms: usize,
    },
}

/// Result of one command.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub findings: Value,
    pub verdicts: BTreeMap<String, Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
    /// Set when a finding refutes a property (exit code 1).
    #[serde(skip)]
    pub refuted: bool,
    /// Raw text output replacing the report (DOT).
    #[serde(skip)]
    pub raw: Option<String>,
}

impl Report {
    pub fn new(command: Vec<String>, findings: Value) -> Self {
        Report { command, findings, verdicts: BTreeMap::new(), timing_ms: None, refuted: false, raw: None }
    }

    pub fn verdict(mut self, key: &str, v: Verdict) -> Self {
        self.refuted |= v.is_refuted();
        self.verdicts.insert(key.to_string(), v);
        self
    }
}

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match dispatch(&cli, echo) {
        Ok(report) => {
            let stdout = if let Some(raw) = &report.raw {
                raw.clone()
            } else if cli.json {
                let mut s = serde_json::to_string_pretty(&report).expect("reports serialize");
                s.push('\n');
                s
            } else {
                render::human(&serde_json::to_value(&report).expect("reports serialize"))
            };
            Outcome { code: if report.refuted { 1 } else { 0 }, stdout, stderr: String::new() }
        }
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
