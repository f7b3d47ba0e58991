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
//! Per-vertex centrality measures and the combined measure table.

mod baseline;
mod ldc;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

pub use baseline::{
    betweenness, closeness, degree, pagerank, triangles, Direction, PageRankOutcome, PageRankParams,
};
pub use ldc::{build_context, ldc, ldc_all, DetourCentrality, NeighborhoodContext};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::format;
use crate::graph::WeightedDigraph;
use crate::paths;

/// The seven measures computed for every graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Measure {
    Ldc,
    InDegree,
    OutDegree,
    Closeness,
    Triangles,
    PageRank,
    Betweenness,
}

impl Measure {
    pub const ALL: [Measure; 7] = [
        Measure::Ldc,
        Measure::InDegree,
        Measure::OutDegree,
        Measure::Closeness,
        Measure::Triangles,
        Measure::PageRank,
        Measure::Betweenness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Ldc => "ldc",
            Measure::InDegree => "in_degree",
            Measure::OutDegree => "out_degree",
            Measure::Closeness => "closeness",
            Measure::Triangles => "triangles",
            Measure::PageRank => "pagerank",
            Measure::Betweenness => "betweenness",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown measure {s:?}")))
    }
}

/// Scores of one measure, indexed like the graph's vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct CentralityVector {
    pub measure: Measure,
    pub scores: Vec<f64>,
}

/// Every measure for one graph, in [`Measure::ALL`] order.
#[derive(Clone, Debug, PartialEq)]
pub struct CentralityTable {
    pub labels: Vec<String>,
    pub columns: Vec<CentralityVector>,
    /// Neighbourhood threshold used for LDC.
    pub threshold: f64,
    pub pagerank: PageRankOutcome,
}

impl CentralityTable {
    pub fn get(&self, measure: Measure) -> &[f64] {
        &self
            .columns
            .iter()
            .find(|c| c.measure == measure)
            .expect("table holds every measure")
            .scores
    }

    /// One row per vertex, one column per requested measure.
    pub fn write_wide_csv<W: Write>(&self, measures: &[Measure], writer: W) -> Result<()> {
        let columns: Vec<CentralityVector> = measures
            .iter()
            .map(|&m| CentralityVector {
                measure: m,
                scores: self.get(m).to_vec(),
            })
            .collect();
        write_columns_csv(&self.labels, &columns, writer)
    }

    /// `word,measure,value` rows, vertex-major.
    pub fn write_long_csv<W: Write>(&self, measures: &[Measure], writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(["word", "measure", "value"])?;
        for (i, label) in self.labels.iter().enumerate() {
            for &m in measures {
                wtr.write_record([label.as_str(), m.name(), &format::sig12(self.get(m)[i])])?;
            }
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Writes `word,<measure>...` with one row per label.
pub fn write_columns_csv<W: Write>(
    labels: &[String],
    columns: &[CentralityVector],
    writer: W,
) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let mut header = vec!["word"];
    header.extend(columns.iter().map(|c| c.measure.name()));
    wtr.write_record(&header)?;
    for (i, label) in labels.iter().enumerate() {
        let mut row = vec![label.clone()];
        row.extend(columns.iter().map(|c| format::sig12(c.scores[i])));
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Computes a single measure on its own.
pub fn measure(
    graph: &WeightedDigraph,
    measure: Measure,
    params: PageRankParams,
    exec: Execution,
) -> Result<Vec<f64>> {
    match measure {
        Measure::Ldc => ldc_all(graph, exec),
        Measure::InDegree => Ok(degree(graph, Direction::In)),
        Measure::OutDegree => Ok(degree(graph, Direction::Out)),
        Measure::Closeness => closeness(graph, exec),
        Measure::Triangles => Ok(triangles(graph)),
        Measure::PageRank => pagerank(graph, params).map(|p| p.scores),
        Measure::Betweenness => betweenness(graph, exec),
    }
}

/// Computes all seven measures, sharing one all-pairs distance table
/// between LDC and closeness.
pub fn compute_all(
    graph: &WeightedDigraph,
    params: PageRankParams,
    exec: Execution,
) -> Result<CentralityTable> {
    paths::require_vertices(graph, 3)?;
    let distances = paths::all_pairs(graph, exec);
    let closeness = baseline::closeness_from(&distances);
    let detour = DetourCentrality::with_distances(graph, distances);
    let ldc = detour.scores(exec);
    let pr = pagerank(graph, params)?;
    let columns = vec![
        (Measure::Ldc, ldc),
        (Measure::InDegree, degree(graph, Direction::In)),
        (Measure::OutDegree, degree(graph, Direction::Out)),
        (Measure::Closeness, closeness),
        (Measure::Triangles, triangles(graph)),
        (Measure::PageRank, pr.scores.clone()),
        (Measure::Betweenness, betweenness(graph, exec)?),
    ]
    .into_iter()
    .map(|(measure, scores)| CentralityVector { measure, scores })
    .collect();
    Ok(CentralityTable {
        labels: graph.labels().map(str::to_string).collect(),
        columns,
        threshold: detour.threshold(),
        pagerank: pr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_table() {
        let mut b = WeightedDigraph::builder();
        b.add_arc("a", "b", 1.0)
            .unwrap()
            .add_arc("b", "c", 1.0)
            .unwrap();
        let t = compute_all(&b.build(), PageRankParams::default(), Execution::Sequential).unwrap();
        assert_eq!(t.get(Measure::Betweenness), &[0.0, 1.0, 0.0]);
        assert_eq!(t.get(Measure::OutDegree)[0], 1.0);
        assert_eq!(t.get(Measure::Triangles), &[0.0; 3]);
        let mut wide = Vec::new();
        t.write_wide_csv(&[Measure::Betweenness], &mut wide)
            .unwrap();
        assert_eq!(
            String::from_utf8(wide).unwrap(),
            "word,betweenness\na,0\nb,1\nc,0\n"
        );
        let mut long = Vec::new();
        t.write_long_csv(&[Measure::InDegree], &mut long).unwrap();
        assert_eq!(
            String::from_utf8(long).unwrap(),
            "word,measure,value\na,in_degree,0\nb,in_degree,1\nc,in_degree,1\n"
        );
    }

    #[test]
    fn single_measures_match_table() {
        let g = crate::synthetic::random_digraph(7, 0.4, (0.1, 3.0), 4);
        let t = compute_all(&g, PageRankParams::default(), Execution::Sequential).unwrap();
        for m in Measure::ALL {
            let alone = measure(&g, m, PageRankParams::default(), Execution::Sequential).unwrap();
            assert_eq!(alone, t.get(m), "{m}");
        }
    }

    #[test]
    fn empty_graph_is_rejected() {
        let g = WeightedDigraph::builder().build();
        assert!(matches!(
            compute_all(&g, PageRankParams::default(), Execution::Sequential),
            Err(Error::EmptyGraph { found: 0, .. })
        ));
    }

    #[test]
    fn measure_names_round_trip() {
        for m in Measure::ALL {
            assert_eq!(m.name().parse::<Measure>().unwrap(), m);
        }
        assert!("eigenvector".parse::<Measure>().is_err());
    }
}
