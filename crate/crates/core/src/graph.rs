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
//! Weighted directed graph with interned string labels.

use std::fmt;
use std::io::{Read, Write};

use indexmap::IndexSet;

use crate::error::{Error, Result};
use crate::format;

/// Dense index of a vertex, assigned at graph construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A directed arc with a non-negative finite weight.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc {
    pub source: VertexId,
    pub target: VertexId,
    pub weight: f64,
}

/// Immutable weighted digraph.
///
/// No self-arcs, at most one arc per ordered pair, weights finite and
/// non-negative. `w(u, v)` and `w(v, u)` are independent.
/// Adjacency lists are sorted by neighbour index.
#[derive(Clone, Debug)]
pub struct WeightedDigraph {
    labels: IndexSet<String>,
    out_arcs: Vec<Vec<(VertexId, f64)>>,
    in_arcs: Vec<Vec<(VertexId, f64)>>,
    arc_count: usize,
    max_weight: f64,
}

/// Equal when labels appear in the same order with the same arcs.
impl PartialEq for WeightedDigraph {
    fn eq(&self, other: &Self) -> bool {
        self.labels.iter().eq(other.labels.iter()) && self.out_arcs == other.out_arcs
    }
}

impl WeightedDigraph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexId> + '_ {
        (0..self.labels.len()).map(VertexId)
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v.0]
    }

    pub fn labels(&self) -> impl ExactSizeIterator<Item = &str> + '_ {
        self.labels.iter().map(String::as_str)
    }

    pub fn vertex(&self, label: &str) -> Option<VertexId> {
        self.labels.get_index_of(label).map(VertexId)
    }

    /// Like [`Self::vertex`], but reports unknown labels as an error.
    pub fn require(&self, label: &str) -> Result<VertexId> {
        self.vertex(label)
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub(crate) fn check(&self, v: VertexId) -> Result<()> {
        if v.0 < self.labels.len() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v.to_string()))
        }
    }

    /// Outgoing arcs of `v` as `(target, weight)`, sorted by target.
    pub fn successors(&self, v: VertexId) -> &[(VertexId, f64)] {
        &self.out_arcs[v.0]
    }

    /// Incoming arcs of `v` as `(source, weight)`, sorted by source.
    pub fn predecessors(&self, v: VertexId) -> &[(VertexId, f64)] {
        &self.in_arcs[v.0]
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_arcs[v.0].len()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_arcs[v.0].len()
    }

    pub fn weight(&self, u: VertexId, v: VertexId) -> Option<f64> {
        let arcs = &self.out_arcs[u.0];
        arcs.binary_search_by_key(&v, |&(t, _)| t)
            .ok()
            .map(|i| arcs[i].1)
    }

    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        self.weight(u, v).is_some()
    }

    /// All arcs ordered by (source, target) index.
    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.out_arcs.iter().enumerate().flat_map(|(s, row)| {
            row.iter().map(move |&(t, w)| Arc {
                source: VertexId(s),
                target: t,
                weight: w,
            })
        })
    }

    /// Largest arc weight, or 0 for a graph without arcs.
    pub fn max_weight(&self) -> f64 {
        self.max_weight
    }

    /// Copy with every arc weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<WeightedDigraph> {
        let mut b = GraphBuilder::default();
        for label in self.labels() {
            b.add_vertex(label);
        }
        for arc in self.arcs() {
            b.add_arc(
                self.label(arc.source),
                self.label(arc.target),
                arc.weight * factor,
            )?;
        }
        Ok(b.build())
    }

    /// Reads the `source,target,weight` CSV format.
    ///
    /// Vertex indices follow first appearance in the file.
    pub fn read_csv<R: Read>(reader: R) -> Result<WeightedDigraph> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["source", "target", "weight"] {
            return Err(Error::MalformedLine {
                line: 1,
                reason: format!(
                    "expected header source,target,weight, found {:?}",
                    headers.iter().collect::<Vec<_>>().join(",")
                ),
            });
        }
        let mut b = GraphBuilder::default();
        for row in rdr.records() {
            let row = row?;
            let line = row.position().map(|p| p.line()).unwrap_or(0);
            if row.len() != 3 {
                return Err(Error::MalformedLine {
                    line,
                    reason: format!("expected 3 fields, found {}", row.len()),
                });
            }
            let weight: f64 = row[2].parse().map_err(|_| Error::MalformedLine {
                line,
                reason: format!("unparseable weight {:?}", &row[2]),
            })?;
            b.add_arc(&row[0], &row[1], weight)
                .map_err(|e| Error::MalformedLine {
                    line,
                    reason: e.to_string(),
                })?;
        }
        Ok(b.build())
    }

    /// Writes the `source,target,weight` CSV format, arcs in index order.
    ///
    /// Weights are written so that [`Self::read_csv`] restores them bit for bit.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(["source", "target", "weight"])?;
        for arc in self.arcs() {
            wtr.write_record([
                self.label(arc.source),
                self.label(arc.target),
                &format::roundtrip(arc.weight),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Accumulates vertices and arcs, validating each arc as it is added.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    labels: IndexSet<String>,
    arcs: Vec<(usize, usize, f64)>,
    seen: std::collections::HashSet<(usize, usize)>,
}

impl GraphBuilder {
    pub fn add_vertex(&mut self, label: &str) -> VertexId {
        if let Some(i) = self.labels.get_index_of(label) {
            return VertexId(i);
        }
        VertexId(self.labels.insert_full(label.to_string()).0)
    }

    pub fn add_arc(&mut self, source: &str, target: &str, weight: f64) -> Result<&mut Self> {
        let invalid = |reason| Error::InvalidArc {
            source_label: source.to_string(),
            target: target.to_string(),
            reason,
        };
        if source == target {
            return Err(invalid("self-arc"));
        }
        if !weight.is_finite() {
            return Err(invalid("weight is not finite"));
        }
        if weight < 0.0 {
            return Err(invalid("negative weight"));
        }
        let s = self.add_vertex(source).0;
        let t = self.add_vertex(target).0;
        if !self.seen.insert((s, t)) {
            return Err(invalid("duplicate arc"));
        }
        self.arcs.push((s, t, weight));
        Ok(self)
    }

    pub fn build(self) -> WeightedDigraph {
        let n = self.labels.len();
        let mut out_arcs = vec![Vec::new(); n];
        let mut in_arcs = vec![Vec::new(); n];
        let mut max_weight = 0.0f64;
        for &(s, t, w) in &self.arcs {
            out_arcs[s].push((VertexId(t), w));
            in_arcs[t].push((VertexId(s), w));
            max_weight = max_weight.max(w);
        }
        for row in out_arcs.iter_mut().chain(in_arcs.iter_mut()) {
            row.sort_by_key(|&(v, _)| v);
        }
        WeightedDigraph {
            labels: self.labels,
            out_arcs,
            in_arcs,
            arc_count: self.arcs.len(),
            max_weight,
        }
    }
}
