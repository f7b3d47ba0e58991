// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.
//! `ldc`: build fluency graphs, score centrality, sweep parameters and run
//! permutation tests from the command line.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use ldc_core::centrality::Measure;
use ldc_core::corpus::CorpusFormat;
use ldc_core::retrieval::Timing;
use ldc_core::stats::{Alternative, GridSpec, DEFAULT_EXCLUSION_SD};
use ldc_core::{Error, Execution};

#[derive(Parser, Debug)]
#[command(
    name = "ldc",
    version,
    about = "Local Detour Centrality for word-fluency networks"
)]
struct Cli {
    /// Worker threads; defaults to the number of logical cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the weighted word graph for one (ws, ms) pair.
    Build(BuildArgs),
    /// Score the vertices of a graph CSV.
    Centrality(CentralityArgs),
    /// Analyse every cell of a (ws, ms) grid.
    Sweep(SweepArgs),
    /// Export per-word retrieval statistics.
    Stats(StatsArgs),
    /// Permutation test of the LDC–timing correlation.
    Permtest(PermtestArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Layout {
    /// subject,word,onset_seconds
    Long,
    /// subject,words,timestamps with one list per row
    Lists,
}

impl From<Layout> for CorpusFormat {
    fn from(l: Layout) -> Self {
        match l {
            Layout::Long => CorpusFormat::Long,
            Layout::Lists => CorpusFormat::Lists,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct CorpusArgs {
    /// Transcript CSV.
    corpus: PathBuf,
    #[arg(long, value_enum, default_value = "long")]
    corpus_format: Layout,
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[command(flatten)]
    input: CorpusArgs,
    /// Window size: maximum positional gap.
    #[arg(long)]
    ws: usize,
    /// Minimum subjects: an arc needs strictly more contributing subjects.
    #[arg(long)]
    ms: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct CentralityArgs {
    /// Graph CSV with header source,target,weight.
    graph: PathBuf,
    /// `all` or a comma-separated list of measures.
    #[arg(long, default_value = "all", value_parser = parse_measures)]
    measure: MeasureList,
    /// PageRank damping factor.
    #[arg(long, default_value_t = 0.85)]
    damping: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    input: CorpusArgs,
    /// `paper` or e.g. `ws=1..9,ms=3..21:2`.
    #[arg(long, default_value = "paper")]
    grid: GridSpec,
    #[arg(long, default_value_t = 0.85)]
    damping: f64,
    /// Outlier band in standard deviations.
    #[arg(long, default_value_t = DEFAULT_EXCLUSION_SD)]
    exclusion_sd: f64,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Keep cells whose recorded digests still match.
    #[arg(long)]
    resume: bool,
}

#[derive(Args, Debug)]
struct StatsArgs {
    #[command(flatten)]
    input: CorpusArgs,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct PermtestArgs {
    #[command(flatten)]
    input: CorpusArgs,
    #[arg(long)]
    ws: usize,
    #[arg(long)]
    ms: usize,
    /// dt_to or dt_from.
    #[arg(long, default_value = "dt_from")]
    target: Timing,
    /// Number of shuffled repetitions.
    #[arg(long, default_value_t = 5000)]
    n: usize,
    #[arg(long, env = "LDC_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// two-sided, greater or less.
    #[arg(long, default_value = "two-sided")]
    alternative: Alternative,
    #[arg(long, default_value_t = DEFAULT_EXCLUSION_SD)]
    exclusion_sd: f64,
    /// Correlate without excluding outliers.
    #[arg(long)]
    no_exclusion: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Debug)]
struct MeasureList(Vec<Measure>);

fn parse_measures(s: &str) -> Result<MeasureList, Error> {
    if s.trim() == "all" {
        return Ok(MeasureList(Measure::ALL.to_vec()));
    }
    let mut out: Vec<Measure> = Vec::new();
    for part in s.split(',') {
        let m: Measure = part.trim().parse()?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    Ok(MeasureList(out))
}

/// A failed run and the exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Input(String),
    Empty(String),
    Undefined(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Input(_) => 2,
            Failure::Empty(_) => 3,
            Failure::Undefined(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Empty(m) | Failure::Undefined(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::InvalidParameter(_) => Failure::Usage(msg),
            Error::EmptyGraph { .. } => Failure::Empty(msg),
            Error::UndefinedActualCorrelation(_)
            | Error::InsufficientData { .. }
            | Error::ZeroVariance
            | Error::NoConvergence(_)
            | Error::NoEligibleOccurrence(_) => Failure::Undefined(msg),
            _ => Failure::Input(msg),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

/// Runs `f` on a pool of `jobs` workers.
fn with_workers<T: Send>(
    jobs: Option<usize>,
    f: impl FnOnce(Execution) -> T + Send,
) -> Result<T, Failure> {
    if jobs == Some(0) {
        return Err(Failure::Usage("--jobs must be at least 1".into()));
    }
    #[cfg(feature = "parallel")]
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.unwrap_or(0))
            .build()
            .map_err(|e| Failure::Input(e.to_string()))?;
        Ok(pool.install(|| f(Execution::Parallel)))
    }
    #[cfg(not(feature = "parallel"))]
    {
        Ok(f(Execution::Sequential))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let jobs = cli.jobs;
    with_workers(jobs, move |exec| match cli.command {
        Command::Build(a) => commands::build(&a, exec),
        Command::Centrality(a) => commands::centrality(&a, exec),
        Command::Sweep(a) => commands::sweep(&a, exec),
        Command::Stats(a) => commands::stats(&a),
        Command::Permtest(a) => commands::permtest(&a, exec),
    })?
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            if !e.use_stderr() {
                return ExitCode::SUCCESS;
            }
            if !e.to_string().contains("Usage:") {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
