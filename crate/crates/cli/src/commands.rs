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
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use ldc_core::centrality::{measure, write_columns_csv, CentralityVector, Measure, PageRankParams};
use ldc_core::corpus::{parse_corpus, FluencyRecord};
use ldc_core::distance::{build_graph, DistanceParams, TraversalIndex};
use ldc_core::exec::{self, Execution};
use ldc_core::retrieval::{covariates, write_stats_csv};
use ldc_core::stats::grid::{analyze_cell, summary_columns, summary_row, write_distance_csv};
use ldc_core::stats::{permutation_test, AnalysisConfig, CellOutcome, GridCell, PermutationConfig};
use ldc_core::WeightedDigraph;
use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::manifest::{sha256_file, sidecar, to_json, FileDigest, RunManifest};
use crate::{
    BuildArgs, CentralityArgs, CorpusArgs, Failure, Format, PermtestArgs, StatsArgs, SweepArgs,
};

fn read_corpus(args: &CorpusArgs) -> Result<Vec<FluencyRecord>, Failure> {
    let file = File::open(&args.corpus)
        .map_err(|e| Failure::Input(format!("cannot open {}: {e}", args.corpus.display())))?;
    Ok(parse_corpus(
        BufReader::new(file),
        args.corpus_format.into(),
    )?)
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    let mut w = create(path)?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}

fn pagerank_params(damping: f64) -> Result<PageRankParams, Failure> {
    Ok(PageRankParams::with_damping(damping)?)
}

fn finish(mut manifest: RunManifest, out: &Path) -> Result<(), Failure> {
    manifest.output(out, None)?;
    manifest.write(&sidecar(out))?;
    Ok(())
}

pub fn build(args: &BuildArgs, _exec: Execution) -> Result<(), Failure> {
    let params = DistanceParams::new(args.ws, args.ms)?;
    let records = read_corpus(&args.input)?;
    let mut manifest = RunManifest::new("build", json!({"ws": args.ws, "ms": args.ms}), None);
    manifest.input(&args.input.corpus)?;
    let graph = build_graph(&records, params)?;
    if graph.is_empty() {
        return Err(Failure::Empty(format!(
            "empty graph: no word pair was produced by more than {} subjects within a window of {}",
            args.ms, args.ws
        )));
    }
    let mut w = create(&args.out)?;
    graph.write_csv(&mut w)?;
    w.flush()?;
    finish(manifest, &args.out)
}

pub fn centrality(args: &CentralityArgs, exec: Execution) -> Result<(), Failure> {
    let params = pagerank_params(args.damping)?;
    let file = File::open(&args.graph)
        .map_err(|e| Failure::Input(format!("cannot open {}: {e}", args.graph.display())))?;
    let graph = WeightedDigraph::read_csv(BufReader::new(file))?;
    let mut manifest = RunManifest::new(
        "centrality",
        json!({
            "measures": args.measure.0.iter().map(|m| m.name()).collect::<Vec<_>>(),
            "damping": args.damping,
            "format": format!("{:?}", args.format).to_lowercase(),
        }),
        None,
    );
    manifest.input(&args.graph)?;
    let columns = args
        .measure
        .0
        .iter()
        .map(|&m| {
            Ok(CentralityVector {
                measure: m,
                scores: measure(&graph, m, params, exec)?,
            })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let labels: Vec<String> = graph.labels().map(str::to_string).collect();
    match args.format {
        Format::Csv => {
            let mut w = create(&args.out)?;
            write_columns_csv(&labels, &columns, &mut w)?;
            w.flush()?;
        }
        Format::Json => {
            let body = json!({
                "words": labels,
                "columns": columns
                    .iter()
                    .map(|c| json!({"measure": c.measure.name(), "scores": c.scores}))
                    .collect::<Vec<_>>(),
            });
            write_text(&args.out, &to_json(&body)?)?;
        }
    }
    finish(manifest, &args.out)
}

pub fn stats(args: &StatsArgs) -> Result<(), Failure> {
    let records = read_corpus(&args.input)?;
    let mut manifest = RunManifest::new(
        "stats",
        json!({"format": format!("{:?}", args.format).to_lowercase()}),
        None,
    );
    manifest.input(&args.input.corpus)?;
    let table = covariates(&records)?;
    match args.format {
        Format::Csv => {
            let mut w = create(&args.out)?;
            write_stats_csv(&table, &mut w)?;
            w.flush()?;
        }
        Format::Json => write_text(&args.out, &to_json(&table)?)?,
    }
    finish(manifest, &args.out)
}

pub fn permtest(args: &PermtestArgs, exec: Execution) -> Result<(), Failure> {
    let params = DistanceParams::new(args.ws, args.ms)?;
    let records = read_corpus(&args.input)?;
    let exclusion = (!args.no_exclusion).then_some(args.exclusion_sd);
    let config = PermutationConfig {
        repetitions: args.n,
        seed: args.seed,
        params,
        target: args.target,
        alpha: args.alpha,
        alternative: args.alternative,
        exclusion_sd: exclusion,
    };
    let mut manifest = RunManifest::new(
        "permtest",
        json!({
            "ws": args.ws,
            "ms": args.ms,
            "target": args.target.name(),
            "n": args.n,
            "alpha": args.alpha,
            "alternative": args.alternative.name(),
            "exclusion_sd": exclusion,
        }),
        Some(args.seed),
    );
    manifest.input(&args.input.corpus)?;
    let report = permutation_test(&records, &config, exec)?;
    write_text(&args.out, &to_json(&report)?)?;
    finish(manifest, &args.out)
}

/// Contents of `cell.json`: enough to rebuild the summary row and to
/// check that the cell's files are intact.
#[derive(Debug, Serialize, Deserialize)]
struct CellRecord {
    ws: usize,
    ms: usize,
    /// Digest of the corpus and analysis settings the cell was computed from.
    source: String,
    status: String,
    summary: Vec<String>,
    outputs: Vec<FileDigest>,
}

fn cell_dir(root: &Path, p: DistanceParams) -> PathBuf {
    root.join(format!("ws{}_ms{}", p.ws, p.ms))
}

/// A previously completed cell whose files still match their digests.
fn completed_cell(root: &Path, p: DistanceParams, source: &str) -> Option<CellRecord> {
    let dir = cell_dir(root, p);
    let text = fs::read_to_string(dir.join("cell.json")).ok()?;
    let record: CellRecord = serde_json::from_str(&text).ok()?;
    if record.ws != p.ws || record.ms != p.ms || record.source != source {
        return None;
    }
    let intact = record
        .outputs
        .iter()
        .all(|d| sha256_file(&root.join(&d.path)).is_ok_and(|h| h == d.sha256));
    intact.then_some(record)
}

fn write_cell(root: &Path, cell: &GridCell, source: &str) -> Result<CellRecord, Failure> {
    let dir = cell_dir(root, cell.params);
    fs::create_dir_all(&dir)?;
    let mut files: Vec<PathBuf> = Vec::new();
    if let CellOutcome::Computed(r) = &cell.outcome {
        let mut put = |name: &str, f: &dyn Fn(&mut BufWriter<File>) -> Result<(), Failure>| {
            let path = dir.join(name);
            let mut w = create(&path)?;
            f(&mut w)?;
            w.flush()?;
            files.push(path);
            Ok::<(), Failure>(())
        };
        put("graph.csv", &|w| Ok(r.graph.write_csv(w)?))?;
        put("centrality.csv", &|w| {
            Ok(r.centrality.write_wide_csv(&Measure::ALL, w)?)
        })?;
        put("spearman.csv", &|w| Ok(r.correlations.write_csv(w)?))?;
        put("distance.csv", &|w| {
            Ok(write_distance_csv(&r.correlations, w)?)
        })?;
        put("regression.csv", &|w| Ok(r.write_regression_csv(w)?))?;
    }
    let outputs = files
        .iter()
        .map(|p| {
            let shown = p.strip_prefix(root).unwrap_or(p).display().to_string();
            FileDigest::of(p, shown)
        })
        .collect::<std::io::Result<Vec<_>>>()?;
    let record = CellRecord {
        ws: cell.params.ws,
        ms: cell.params.ms,
        source: source.to_string(),
        status: cell.status().to_string(),
        summary: summary_row(cell),
        outputs,
    };
    write_text(
        &dir.join("cell.json"),
        &serde_json::to_string_pretty(&record)?,
    )?;
    Ok(record)
}

pub fn sweep(args: &SweepArgs, exec: Execution) -> Result<(), Failure> {
    let config = AnalysisConfig {
        pagerank: pagerank_params(args.damping)?,
        exclusion_sd: args.exclusion_sd,
    };
    if args.exclusion_sd.is_nan() || args.exclusion_sd <= 0.0 {
        return Err(Failure::Usage("--exclusion-sd must be positive".into()));
    }
    let records = read_corpus(&args.input)?;
    let root = args.out.as_path();
    fs::create_dir_all(root)?;
    let mut manifest = RunManifest::new(
        "sweep",
        json!({
            "ws": args.grid.ws,
            "ms": args.grid.ms,
            "damping": args.damping,
            "exclusion_sd": args.exclusion_sd,
            "resume": args.resume,
        }),
        None,
    );
    manifest.input(&args.input.corpus)?;
    let settings = json!({
        "corpus_sha256": manifest.inputs[0].sha256,
        "corpus_format": format!("{:?}", args.input.corpus_format),
        "damping": args.damping,
        "exclusion_sd": args.exclusion_sd,
    });
    let source = hex::encode(Sha256::digest(settings.to_string()));
    let cells = args.grid.cells();
    let previous: Vec<Option<CellRecord>> = cells
        .iter()
        .map(|&p| {
            if args.resume {
                completed_cell(root, p, &source)
            } else {
                None
            }
        })
        .collect();
    let pending: Vec<DistanceParams> = cells
        .iter()
        .zip(&previous)
        .filter(|(_, r)| r.is_none())
        .map(|(&p, _)| p)
        .collect();
    let mut fresh = if pending.is_empty() {
        Vec::new()
    } else {
        let max_ws = pending.iter().map(|p| p.ws).max().unwrap_or(1);
        let index = TraversalIndex::new(&records, max_ws)?;
        let stats = covariates(&records)?;
        exec::map_slice(exec, &pending, |&params| {
            let cell = GridCell {
                params,
                outcome: analyze_cell(&index, &stats, params, &config, Execution::Sequential),
            };
            write_cell(root, &cell, &source)
        })
    }
    .into_iter();
    let mut records_out = Vec::with_capacity(cells.len());
    for prev in previous {
        match prev {
            Some(r) => records_out.push(r),
            None => records_out.push(fresh.next().expect("one result per pending cell")?),
        }
    }
    let summary_path = root.join("grid_summary.csv");
    let mut wtr = csv::Writer::from_writer(create(&summary_path)?);
    let mut header = vec!["ws".to_string(), "ms".to_string()];
    header.extend(summary_columns());
    wtr.write_record(&header)?;
    for r in &records_out {
        wtr.write_record(&r.summary)?;
    }
    wtr.flush()?;
    drop(wtr);
    manifest.output(&summary_path, Some(root))?;
    for r in &records_out {
        for d in &r.outputs {
            manifest.outputs.push(d.clone());
        }
        let cell_json = cell_dir(root, DistanceParams { ws: r.ws, ms: r.ms }).join("cell.json");
        manifest.output(&cell_json, Some(root))?;
    }
    manifest.write(&root.join("manifest.json"))?;
    let failed: Vec<&CellRecord> = records_out
        .iter()
        .filter(|r| r.status == "failed")
        .collect();
    for r in &failed {
        eprintln!(
            "warning: cell ws={} ms={} failed: {}",
            r.ws,
            r.ms,
            r.summary.last().map_or("", |s| s.as_str())
        );
    }
    if records_out.iter().all(|r| r.status != "ok") {
        return Err(Failure::Empty(
            "no grid cell produced an analysable graph".into(),
        ));
    }
    Ok(())
}
