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
//! Parameter sweep over window size and minimum-subject count.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::centrality::{compute_all, CentralityTable, Measure, PageRankParams};
use crate::corpus::FluencyRecord;
use crate::distance::{DistanceParams, TraversalIndex, GRID_MS, GRID_WS};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::format;
use crate::retrieval::{self, RetrievalStats, Timing};

use super::correlation::{correlate, Correlation};
use super::outliers::{outlier_mask, DEFAULT_EXCLUSION_SD};

/// A per-word series entering the correlation table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Series {
    Measure(Measure),
    LogFrequency,
    AvgLocation,
}

impl Series {
    pub const ALL: [Series; 9] = [
        Series::Measure(Measure::Ldc),
        Series::Measure(Measure::InDegree),
        Series::Measure(Measure::OutDegree),
        Series::Measure(Measure::Closeness),
        Series::Measure(Measure::Triangles),
        Series::Measure(Measure::PageRank),
        Series::Measure(Measure::Betweenness),
        Series::LogFrequency,
        Series::AvgLocation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Series::Measure(m) => m.name(),
            Series::LogFrequency => "log_frequency",
            Series::AvgLocation => "avg_location",
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Symmetric table of pairwise correlations with a unit diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationTable {
    pub series: Vec<Series>,
    entries: Vec<Option<Correlation>>,
}

impl CorrelationTable {
    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> Option<Correlation> {
        self.entries[i * self.len() + j]
    }

    pub fn rho(&self, a: Series, b: Series) -> Option<f64> {
        let i = self.series.iter().position(|&s| s == a)?;
        let j = self.series.iter().position(|&s| s == b)?;
        self.get(i, j).map(|c| c.rho)
    }

    /// Ordered pairs (i, j) with i < j, row-major.
    pub fn upper_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
    }

    /// Element-wise `1 - |rho|`, zero diagonal.
    pub fn distance_matrix(&self) -> Vec<Vec<Option<f64>>> {
        correlation_distance_matrix(self)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        write_square(self, |c| c.map(|c| c.rho), writer)
    }
}

fn write_square<W: Write>(
    table: &CorrelationTable,
    value: impl Fn(Option<Correlation>) -> Option<f64>,
    writer: W,
) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let mut header = vec!["series".to_string()];
    header.extend(table.series.iter().map(|s| s.name().to_string()));
    wtr.write_record(&header)?;
    for (i, s) in table.series.iter().enumerate() {
        let mut row = vec![s.name().to_string()];
        row.extend((0..table.len()).map(|j| format::sig12_or_na(value(table.get(i, j)))));
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

/// `1 - |rho|` for every entry of `table`; undefined correlations stay undefined.
pub fn correlation_distance_matrix(table: &CorrelationTable) -> Vec<Vec<Option<f64>>> {
    (0..table.len())
        .map(|i| {
            (0..table.len())
                .map(|j| {
                    if i == j {
                        Some(0.0)
                    } else {
                        table.get(i, j).map(|c| 1.0 - c.rho.abs())
                    }
                })
                .collect()
        })
        .collect()
}

pub fn write_distance_csv<W: Write>(table: &CorrelationTable, writer: W) -> Result<()> {
    let distances = correlation_distance_matrix(table);
    let mut wtr = csv::Writer::from_writer(writer);
    let mut header = vec!["series".to_string()];
    header.extend(table.series.iter().map(|s| s.name().to_string()));
    wtr.write_record(&header)?;
    for (s, row) in table.series.iter().zip(distances) {
        let mut out = vec![s.name().to_string()];
        out.extend(row.into_iter().map(format::sig12_or_na));
        wtr.write_record(&out)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Settings shared by every cell of a sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalysisConfig {
    pub pagerank: PageRankParams,
    pub exclusion_sd: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            pagerank: PageRankParams::default(),
            exclusion_sd: DEFAULT_EXCLUSION_SD,
        }
    }
}

/// Everything computed for one (ws, ms) cell.
#[derive(Clone, Debug)]
pub struct GridResult {
    pub params: DistanceParams,
    pub graph: crate::graph::WeightedDigraph,
    pub centrality: CentralityTable,
    /// Retrieval statistics aligned with the graph's vertices.
    pub covariates: Vec<RetrievalStats>,
    pub correlations: CorrelationTable,
    /// Words inside the exclusion band on every series, in vertex order.
    pub included_words: Vec<String>,
    pub ldc_dt_to: Option<Correlation>,
    pub ldc_dt_from: Option<Correlation>,
}

impl GridResult {
    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn series(&self, s: Series) -> Vec<f64> {
        match s {
            Series::Measure(m) => self.centrality.get(m).to_vec(),
            Series::LogFrequency => self.covariates.iter().map(|c| c.log_frequency).collect(),
            Series::AvgLocation => self.covariates.iter().map(|c| c.avg_location).collect(),
        }
    }

    pub fn timing(&self, t: Timing) -> Vec<Option<f64>> {
        self.covariates.iter().map(|c| t.of(c)).collect()
    }

    /// Per-word table consumed by downstream regressions:
    /// `word,ldc,log_frequency,avg_location,dt_to,dt_from`.
    pub fn write_regression_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record([
            "word",
            "ldc",
            "log_frequency",
            "avg_location",
            "dt_to",
            "dt_from",
        ])?;
        let ldc = self.centrality.get(Measure::Ldc);
        for (i, c) in self.covariates.iter().enumerate() {
            wtr.write_record([
                c.word.clone(),
                format::sig12(ldc[i]),
                format::sig12(c.log_frequency),
                format::sig12(c.avg_location),
                format::sig12_or_na(c.dt_to),
                format::sig12_or_na(c.dt_from),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Result of one cell.
#[derive(Clone, Debug)]
pub enum CellOutcome {
    Computed(Box<GridResult>),
    /// No pair met the minimum-subject requirement.
    Empty,
    Failed(String),
}

#[derive(Clone, Debug)]
pub struct GridCell {
    pub params: DistanceParams,
    pub outcome: CellOutcome,
}

impl GridCell {
    pub fn status(&self) -> &'static str {
        match self.outcome {
            CellOutcome::Computed(_) => "ok",
            CellOutcome::Empty => "empty",
            CellOutcome::Failed(_) => "failed",
        }
    }

    pub fn result(&self) -> Option<&GridResult> {
        match &self.outcome {
            CellOutcome::Computed(r) => Some(r),
            _ => None,
        }
    }
}

/// Window sizes and minimum-subject values to sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub ws: Vec<usize>,
    pub ms: Vec<usize>,
}

impl GridSpec {
    /// WS 1..=9 by MS 3, 5, ..., 21.
    pub fn paper() -> Self {
        GridSpec {
            ws: GRID_WS.to_vec(),
            ms: GRID_MS.to_vec(),
        }
    }

    /// Cells in row-major (ws, then ms) order.
    pub fn cells(&self) -> Vec<DistanceParams> {
        self.ws
            .iter()
            .flat_map(|&ws| self.ms.iter().map(move |&ms| DistanceParams { ws, ms }))
            .collect()
    }
}

fn parse_values(key: &str, text: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidParameter(format!("bad {key} list {text:?}"));
    let mut out = Vec::new();
    for part in text.split(';').filter(|p| !p.is_empty()) {
        if let Some((lo, rest)) = part.split_once("..") {
            let (hi, step) = match rest.split_once(':') {
                Some((hi, step)) => (hi, step.parse::<usize>().map_err(|_| bad())?),
                None => (rest, 1),
            };
            let lo: usize = lo.parse().map_err(|_| bad())?;
            let hi: usize = hi.parse().map_err(|_| bad())?;
            if step == 0 || lo > hi {
                return Err(bad());
            }
            out.extend((lo..=hi).step_by(step));
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    if out.is_empty() || out.contains(&0) {
        return Err(bad());
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

impl FromStr for GridSpec {
    type Err = Error;

    /// `paper`, or `ws=<list>,ms=<list>` where a list is `;`-separated
    /// values or inclusive ranges `lo..hi` / `lo..hi:step`.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "paper" {
            return Ok(GridSpec::paper());
        }
        let mut ws = None;
        let mut ms = None;
        for part in s.split(',') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("bad grid component {part:?}")))?;
            match key.trim() {
                "ws" => ws = Some(parse_values("ws", value.trim())?),
                "ms" => ms = Some(parse_values("ms", value.trim())?),
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "unknown grid key {other:?}"
                    )))
                }
            }
        }
        match (ws, ms) {
            (Some(ws), Some(ms)) => Ok(GridSpec { ws, ms }),
            _ => Err(Error::InvalidParameter(format!(
                "grid {s:?} needs both ws and ms"
            ))),
        }
    }
}

/// Analyses one cell of a sweep. Work inside a cell runs under `exec`.
pub fn analyze_cell(
    index: &TraversalIndex,
    corpus_stats: &[RetrievalStats],
    params: DistanceParams,
    config: &AnalysisConfig,
    exec: Execution,
) -> CellOutcome {
    let graph = match index.graph(params) {
        Ok(g) if g.is_empty() => return CellOutcome::Empty,
        Ok(g) => g,
        Err(e) => return CellOutcome::Failed(e.to_string()),
    };
    match analyze_graph(graph, corpus_stats, params, config, exec) {
        Ok(r) => CellOutcome::Computed(Box::new(r)),
        Err(e) => CellOutcome::Failed(e.to_string()),
    }
}

fn analyze_graph(
    graph: crate::graph::WeightedDigraph,
    corpus_stats: &[RetrievalStats],
    params: DistanceParams,
    config: &AnalysisConfig,
    exec: Execution,
) -> Result<GridResult> {
    let centrality = compute_all(&graph, config.pagerank, exec)?;
    let covariates: Vec<RetrievalStats> = graph
        .labels()
        .map(|w| {
            retrieval::find(corpus_stats, w)
                .cloned()
                .ok_or_else(|| Error::UnknownVertex(w.to_string()))
        })
        .collect::<Result<_>>()?;
    let mut result = GridResult {
        params,
        graph,
        centrality,
        covariates,
        correlations: CorrelationTable {
            series: Vec::new(),
            entries: Vec::new(),
        },
        included_words: Vec::new(),
        ldc_dt_to: None,
        ldc_dt_from: None,
    };
    let k = config.exclusion_sd;
    let columns: Vec<Vec<f64>> = Series::ALL.iter().map(|&s| result.series(s)).collect();
    let optional: Vec<Vec<Option<f64>>> = columns
        .iter()
        .map(|c| c.iter().copied().map(Some).collect())
        .collect();
    let n = Series::ALL.len();
    let mut entries = vec![None; n * n];
    for i in 0..n {
        entries[i * n + i] = Some(Correlation {
            rho: 1.0,
            n: columns[i].len(),
            p_value: 0.0,
        });
        for j in i + 1..n {
            let c = correlate(&optional[i], &optional[j], Some(k)).ok();
            entries[i * n + j] = c;
            entries[j * n + i] = c;
        }
    }
    result.correlations = CorrelationTable {
        series: Series::ALL.to_vec(),
        entries,
    };
    let mut keep = vec![true; result.graph.vertex_count()];
    if keep.len() >= 2 {
        for column in &columns {
            for (flag, retained) in keep.iter_mut().zip(outlier_mask(column, k)?) {
                *flag &= retained;
            }
        }
    }
    result.included_words = result
        .graph
        .labels()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(w, _)| w.to_string())
        .collect();
    let ldc = &optional[0];
    result.ldc_dt_to = correlate(ldc, &result.timing(Timing::DtTo), Some(k)).ok();
    result.ldc_dt_from = correlate(ldc, &result.timing(Timing::DtFrom), Some(k)).ok();
    Ok(result)
}

/// Runs every cell of `spec`. Cells are independent and returned in
/// row-major order whatever the scheduling.
pub fn grid_sweep(
    records: &[FluencyRecord],
    spec: &GridSpec,
    config: &AnalysisConfig,
    exec: Execution,
) -> Result<Vec<GridCell>> {
    let max_ws = spec.ws.iter().copied().max().unwrap_or(1);
    let index = TraversalIndex::new(records, max_ws)?;
    let stats = retrieval::covariates(records)?;
    let cells = spec.cells();
    Ok(exec::map_slice(exec, &cells, |&params| GridCell {
        params,
        outcome: analyze_cell(&index, &stats, params, config, Execution::Sequential),
    }))
}

/// Runs a single cell on its own.
pub fn analyze_single(
    records: &[FluencyRecord],
    params: DistanceParams,
    config: &AnalysisConfig,
    exec: Execution,
) -> Result<GridCell> {
    let index = TraversalIndex::new(records, params.ws)?;
    let stats = retrieval::covariates(records)?;
    Ok(GridCell {
        params,
        outcome: analyze_cell(&index, &stats, params, config, exec),
    })
}

/// Column names of the summary table, after `ws,ms`.
pub fn summary_columns() -> Vec<String> {
    let mut cols: Vec<String> = ["status", "n_vertices", "n_arcs", "n_included", "threshold"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let n = Series::ALL.len();
    for i in 0..n {
        for j in i + 1..n {
            cols.push(format!("rho_{}_vs_{}", Series::ALL[i], Series::ALL[j]));
        }
    }
    for t in [Timing::DtTo, Timing::DtFrom] {
        cols.push(format!("rho_ldc_vs_{}", t.name()));
        cols.push(format!("p_ldc_vs_{}", t.name()));
        cols.push(format!("n_ldc_vs_{}", t.name()));
    }
    cols.push("message".to_string());
    cols
}

/// Summary row for one cell, matching [`summary_columns`] after `ws,ms`.
pub fn summary_row(cell: &GridCell) -> Vec<String> {
    let mut row = vec![
        cell.params.ws.to_string(),
        cell.params.ms.to_string(),
        cell.status().to_string(),
    ];
    let pairs = Series::ALL.len() * (Series::ALL.len() - 1) / 2;
    match &cell.outcome {
        CellOutcome::Computed(r) => {
            row.push(r.vertex_count().to_string());
            row.push(r.graph.arc_count().to_string());
            row.push(r.included_words.len().to_string());
            row.push(format::sig12(r.centrality.threshold));
            for (i, j) in r.correlations.upper_pairs() {
                row.push(format::sig12_or_na(r.correlations.get(i, j).map(|c| c.rho)));
            }
            for c in [r.ldc_dt_to, r.ldc_dt_from] {
                row.push(format::sig12_or_na(c.map(|c| c.rho)));
                row.push(format::sig12_or_na(c.map(|c| c.p_value)));
                row.push(c.map_or_else(|| format::NA.to_string(), |c| c.n.to_string()));
            }
            row.push(String::new());
        }
        other => {
            row.extend(["0", "0", "0"].map(String::from));
            row.push(format::NA.to_string());
            row.extend(std::iter::repeat_n(format::NA.to_string(), pairs + 6));
            row.push(match other {
                CellOutcome::Failed(msg) => msg.clone(),
                _ => String::new(),
            });
        }
    }
    row
}
