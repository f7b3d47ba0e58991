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
//! Dijkstra shortest paths, the neighbourhood threshold and local neighbourhoods.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::graph::{VertexId, WeightedDigraph};

/// Heap entry ordered so that `BinaryHeap` pops the smallest distance first,
/// breaking ties by the smaller vertex index.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Frontier {
    pub dist: f64,
    pub vertex: usize,
}

impl PartialEq for Frontier {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Frontier {}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

/// Every arc entering or leaving `center` is charged `weight` instead of its own.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Reweight {
    pub center: usize,
    pub weight: f64,
}

/// Single-source Dijkstra returning raw distances (`INFINITY` = unreachable).
///
/// When `targets` is given the search stops once every marked vertex is settled;
/// distances to unmarked vertices are then only upper bounds.
pub(crate) fn dijkstra(
    graph: &WeightedDigraph,
    source: usize,
    reweight: Option<Reweight>,
    targets: Option<(&[bool], usize)>,
) -> Vec<f64> {
    let n = graph.vertex_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    let mut remaining = targets.map(|(_, count)| count);
    dist[source] = 0.0;
    heap.push(Frontier {
        dist: 0.0,
        vertex: source,
    });
    while let Some(Frontier { dist: d, vertex: u }) = heap.pop() {
        if settled[u] {
            continue;
        }
        settled[u] = true;
        if let (Some((mask, _)), Some(left)) = (targets, remaining.as_mut()) {
            if mask[u] {
                *left -= 1;
                if *left == 0 {
                    break;
                }
            }
        }
        for &(t, w) in graph.successors(VertexId(u)) {
            let t = t.index();
            if settled[t] {
                continue;
            }
            let w = match reweight {
                Some(r) if r.center == u || r.center == t => r.weight,
                _ => w,
            };
            let nd = d + w;
            if nd < dist[t] {
                dist[t] = nd;
                heap.push(Frontier {
                    dist: nd,
                    vertex: t,
                });
            }
        }
    }
    dist
}

/// Shortest-path lengths between every ordered pair of vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub(crate) fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let n = rows.len();
        let data: Vec<f64> = rows.into_iter().flatten().collect();
        debug_assert_eq!(data.len(), n * n);
        DistanceMatrix { n, data }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `None` when `target` is unreachable from `source`.
    #[inline]
    pub fn get(&self, source: VertexId, target: VertexId) -> Option<f64> {
        let d = self.raw(source.index(), target.index());
        d.is_finite().then_some(d)
    }

    #[inline]
    pub(crate) fn raw(&self, source: usize, target: usize) -> f64 {
        self.data[source * self.n + target]
    }

    pub(crate) fn raw_row(&self, source: usize) -> &[f64] {
        &self.data[source * self.n..(source + 1) * self.n]
    }

    pub fn row(&self, source: VertexId) -> Vec<Option<f64>> {
        self.raw_row(source.index())
            .iter()
            .map(|&d| d.is_finite().then_some(d))
            .collect()
    }
}

/// Shortest-path lengths from `source` to every vertex; `None` marks
/// unreachable targets.
pub fn sssp(graph: &WeightedDigraph, source: VertexId) -> Result<Vec<Option<f64>>> {
    graph.check(source)?;
    Ok(dijkstra(graph, source.index(), None, None)
        .into_iter()
        .map(|d| d.is_finite().then_some(d))
        .collect())
}

/// All-pairs shortest paths by one Dijkstra run per source.
pub fn all_pairs(graph: &WeightedDigraph, exec: Execution) -> DistanceMatrix {
    let rows = exec::map_indices(exec, graph.vertex_count(), |s| {
        dijkstra(graph, s, None, None)
    });
    DistanceMatrix::from_rows(rows)
}

/// Neighbourhood threshold: the sum of all finite shortest-path lengths over
/// ordered pairs divided by the vertex count.
///
/// Unreachable pairs are left out of the sum.
pub fn mean_pairwise_distance(graph: &WeightedDigraph) -> Result<f64> {
    require_vertices(graph, 2)?;
    Ok(threshold_from(&all_pairs(graph, Execution::Sequential)))
}

pub(crate) fn threshold_from(distances: &DistanceMatrix) -> f64 {
    let n = distances.len();
    let mut sum = 0.0;
    for s in 0..n {
        for (t, &d) in distances.raw_row(s).iter().enumerate() {
            if s != t && d.is_finite() {
                sum += d;
            }
        }
    }
    sum / n as f64
}

/// Vertices `u != v` with `δ(v, u) <= r` or `δ(u, v) <= r`, in index order.
pub fn local_neighborhood(graph: &WeightedDigraph, v: VertexId, r: f64) -> Result<Vec<VertexId>> {
    graph.check(v)?;
    let distances = all_pairs(graph, Execution::Sequential);
    Ok(neighborhood_from(&distances, v.index(), r))
}

pub(crate) fn neighborhood_from(distances: &DistanceMatrix, v: usize, r: f64) -> Vec<VertexId> {
    (0..distances.len())
        .filter(|&u| u != v && (distances.raw(v, u) <= r || distances.raw(u, v) <= r))
        .map(VertexId)
        .collect()
}

pub(crate) fn require_vertices(graph: &WeightedDigraph, required: usize) -> Result<()> {
    if graph.vertex_count() < required {
        return Err(Error::EmptyGraph {
            required,
            found: graph.vertex_count(),
        });
    }
    Ok(())
}
