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
//! Local Detour Centrality.
//!
//! For a vertex `v`, the neighbourhood `L` holds every other vertex within
//! the threshold distance of `v` in either direction. Two `|L| x |L|` tables
//! of shortest-path lengths are compared: one on the original graph, and one
//! on a copy where every arc into or out of `v` is charged the graph's
//! maximum arc weight. The score is the summed difference over ordered pairs
//! of `L`, divided by `|L|`.

use crate::error::Result;
use crate::exec::{self, Execution};
use crate::graph::{VertexId, WeightedDigraph};
use crate::paths::{self, DistanceMatrix, Reweight};

/// Neighbourhood of one vertex with both shortest-path tables.
#[derive(Clone, Debug, PartialEq)]
pub struct NeighborhoodContext {
    pub center: VertexId,
    pub threshold: f64,
    pub neighbors: Vec<VertexId>,
    /// Largest arc weight of the whole graph.
    pub max_weight: f64,
    with_center: Vec<f64>,
    without_center: Vec<f64>,
}

impl NeighborhoodContext {
    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    /// Shortest path between neighbours `i` and `j` (positions in
    /// [`Self::neighbors`]) when the centre may be used at its own cost.
    pub fn with_center(&self, i: usize, j: usize) -> Option<f64> {
        let d = self.with_center[i * self.len() + j];
        d.is_finite().then_some(d)
    }

    /// Same pair, with every arc touching the centre charged `max_weight`.
    pub fn without_center(&self, i: usize, j: usize) -> Option<f64> {
        let d = self.without_center[i * self.len() + j];
        d.is_finite().then_some(d)
    }

    /// The LDC score of the centre.
    pub fn score(&self) -> f64 {
        let m = self.len();
        if m == 0 {
            return 0.0;
        }
        let mut total = 0.0;
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                total += match (self.without_center(i, j), self.with_center(i, j)) {
                    (Some(without), Some(with)) => without - with,
                    // unreachable once reweighted but reachable before:
                    // charge a capped surrogate so the score stays finite
                    (None, Some(with)) => self.max_weight * m as f64 - with,
                    _ => 0.0,
                };
            }
        }
        total / m as f64
    }
}

/// Shared state for evaluating LDC on many vertices of one graph.
#[derive(Clone, Debug)]
pub struct DetourCentrality<'g> {
    graph: &'g WeightedDigraph,
    distances: DistanceMatrix,
    threshold: f64,
}

impl<'g> DetourCentrality<'g> {
    /// Computes all-pairs distances and the default threshold.
    pub fn new(graph: &'g WeightedDigraph, exec: Execution) -> Result<Self> {
        paths::require_vertices(graph, 1)?;
        let distances = paths::all_pairs(graph, exec);
        Ok(Self::with_distances(graph, distances))
    }

    pub(crate) fn with_distances(graph: &'g WeightedDigraph, distances: DistanceMatrix) -> Self {
        let threshold = paths::threshold_from(&distances);
        DetourCentrality {
            graph,
            distances,
            threshold,
        }
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn distances(&self) -> &DistanceMatrix {
        &self.distances
    }

    pub fn context(&self, v: VertexId) -> Result<NeighborhoodContext> {
        self.context_at(v, self.threshold)
    }

    pub fn context_at(&self, v: VertexId, r: f64) -> Result<NeighborhoodContext> {
        self.graph.check(v)?;
        let neighbors = paths::neighborhood_from(&self.distances, v.index(), r);
        let m = neighbors.len();
        let mut mask = vec![false; self.graph.vertex_count()];
        for u in &neighbors {
            mask[u.index()] = true;
        }
        let reweight = Reweight {
            center: v.index(),
            weight: self.graph.max_weight(),
        };
        let mut with_center = Vec::with_capacity(m * m);
        let mut without_center = Vec::with_capacity(m * m);
        for &s in &neighbors {
            let direct = self.distances.raw_row(s.index());
            let detour = paths::dijkstra(self.graph, s.index(), Some(reweight), Some((&mask, m)));
            for &t in &neighbors {
                with_center.push(direct[t.index()]);
                without_center.push(detour[t.index()]);
            }
        }
        Ok(NeighborhoodContext {
            center: v,
            threshold: r,
            neighbors,
            max_weight: self.graph.max_weight(),
            with_center,
            without_center,
        })
    }

    pub fn score(&self, v: VertexId) -> Result<f64> {
        Ok(self.context(v)?.score())
    }

    /// LDC of every vertex, in vertex index order.
    pub fn scores(&self, exec: Execution) -> Vec<f64> {
        exec::map_indices(exec, self.graph.vertex_count(), |v| {
            self.context(VertexId(v))
                .expect("vertex index in range")
                .score()
        })
    }
}

/// Builds the neighbourhood context of `v` at threshold `r`.
pub fn build_context(graph: &WeightedDigraph, v: VertexId, r: f64) -> Result<NeighborhoodContext> {
    graph.check(v)?;
    DetourCentrality::new(graph, Execution::Sequential)?.context_at(v, r)
}

/// LDC of `v` at threshold `r`.
pub fn ldc(graph: &WeightedDigraph, v: VertexId, r: f64) -> Result<f64> {
    Ok(build_context(graph, v, r)?.score())
}

/// LDC of every vertex at the default threshold.
pub fn ldc_all(graph: &WeightedDigraph, exec: Execution) -> Result<Vec<f64>> {
    Ok(DetourCentrality::new(graph, exec)?.scores(exec))
}
