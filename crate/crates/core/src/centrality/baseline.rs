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
//! Degree, closeness, triangle count, PageRank and shortest-path betweenness.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::graph::{VertexId, WeightedDigraph};
use crate::paths::{self, DistanceMatrix, Frontier};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    In,
    Out,
}

/// Arc count per vertex in the given direction.
pub fn degree(graph: &WeightedDigraph, direction: Direction) -> Vec<f64> {
    graph
        .vertices()
        .map(|v| match direction {
            Direction::In => graph.in_degree(v),
            Direction::Out => graph.out_degree(v),
        } as f64)
        .collect()
}

/// Closeness over the reachable set: `(N' - 1) / Σ δ(v, u)`, where the sum
/// runs over vertices reachable from `v` and `N'` counts them including
/// `v`. Vertices that reach nothing, or only reach at zero cost, score 0.
pub fn closeness(graph: &WeightedDigraph, exec: Execution) -> Result<Vec<f64>> {
    paths::require_vertices(graph, 2)?;
    Ok(closeness_from(&paths::all_pairs(graph, exec)))
}

pub(crate) fn closeness_from(distances: &DistanceMatrix) -> Vec<f64> {
    (0..distances.len())
        .map(|v| {
            let mut reached = 0usize;
            let mut sum = 0.0;
            for (u, &d) in distances.raw_row(v).iter().enumerate() {
                if u != v && d.is_finite() {
                    reached += 1;
                    sum += d;
                }
            }
            if reached == 0 || sum == 0.0 {
                0.0
            } else {
                reached as f64 / sum
            }
        })
        .collect()
}

/// Triangles through each vertex of the symmetrised graph.
pub fn triangles(graph: &WeightedDigraph) -> Vec<f64> {
    let n = graph.vertex_count();
    let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); n];
    for a in graph.arcs() {
        neighbors[a.source.index()].push(a.target.index());
        neighbors[a.target.index()].push(a.source.index());
    }
    for list in &mut neighbors {
        list.sort_unstable();
        list.dedup();
    }
    (0..n)
        .map(|v| {
            let adj = &neighbors[v];
            let mut count = 0usize;
            for (i, &a) in adj.iter().enumerate() {
                for &b in &adj[i + 1..] {
                    if neighbors[a].binary_search(&b).is_ok() {
                        count += 1;
                    }
                }
            }
            count as f64
        })
        .collect()
}

/// Parameters of the PageRank iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PageRankParams {
    pub damping: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for PageRankParams {
    fn default() -> Self {
        PageRankParams {
            damping: 0.85,
            tolerance: 1e-10,
            max_iterations: 1000,
        }
    }
}

impl PageRankParams {
    pub fn with_damping(damping: f64) -> Result<Self> {
        let p = PageRankParams {
            damping,
            ..Self::default()
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "damping must lie in (0, 1), got {}",
                self.damping
            )));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 || self.max_iterations == 0 {
            return Err(Error::InvalidParameter(
                "tolerance and max_iterations must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Result of the PageRank iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct PageRankOutcome {
    /// Fixed point scaled to sum to one.
    pub scores: Vec<f64>,
    /// Fixed point as iterated, before the final rescaling.
    pub raw: Vec<f64>,
    pub iterations: usize,
}

/// PageRank by power iteration of
/// `PR(v) = α (Σ_{u→v} PR(u) / N_u + D / T) + (1 − α) / T`
/// where `N_u` is the out-degree, `T` the vertex count and `D` the mass
/// sitting on vertices without out-arcs, spread uniformly.
pub fn pagerank(graph: &WeightedDigraph, params: PageRankParams) -> Result<PageRankOutcome> {
    params.validate()?;
    paths::require_vertices(graph, 1)?;
    let n = graph.vertex_count();
    let t = n as f64;
    let alpha = params.damping;
    let out_deg: Vec<f64> = degree(graph, Direction::Out);
    let mut rank = vec![1.0 / t; n];
    let mut next = vec![0.0; n];
    for iteration in 1..=params.max_iterations {
        let dangling: f64 = (0..n).filter(|&u| out_deg[u] == 0.0).map(|u| rank[u]).sum();
        for v in graph.vertices() {
            let inflow: f64 = graph
                .predecessors(v)
                .iter()
                .map(|&(u, _)| rank[u.index()] / out_deg[u.index()])
                .sum();
            next[v.index()] = alpha * (inflow + dangling / t) + (1.0 - alpha) / t;
        }
        let change = rank
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        std::mem::swap(&mut rank, &mut next);
        if change < params.tolerance {
            let total: f64 = rank.iter().sum();
            return Ok(PageRankOutcome {
                scores: rank.iter().map(|x| x / total).collect(),
                raw: rank,
                iterations: iteration,
            });
        }
    }
    Err(Error::NoConvergence(params.max_iterations))
}

/// Shortest-path betweenness over ordered pairs, by Brandes' dependency
/// accumulation on weighted shortest paths. Not normalised.
pub fn betweenness(graph: &WeightedDigraph, exec: Execution) -> Result<Vec<f64>> {
    paths::require_vertices(graph, 3)?;
    let n = graph.vertex_count();
    let partials = exec::map_indices(exec, n, |s| source_dependencies(graph, s));
    let mut total = vec![0.0; n];
    for partial in partials {
        for (acc, d) in total.iter_mut().zip(partial) {
            *acc += d;
        }
    }
    Ok(total)
}

/// Dependencies of every vertex on shortest paths starting at `source`.
fn source_dependencies(graph: &WeightedDigraph, source: usize) -> Vec<f64> {
    let n = graph.vertex_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut sigma = vec![0.0f64; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut settled = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    sigma[source] = 1.0;
    heap.push(Frontier {
        dist: 0.0,
        vertex: source,
    });
    while let Some(Frontier { dist: d, vertex: u }) = heap.pop() {
        if settled[u] {
            continue;
        }
        settled[u] = true;
        order.push(u);
        for &(t, w) in graph.successors(VertexId(u)) {
            let t = t.index();
            if settled[t] {
                continue;
            }
            let nd = d + w;
            if nd < dist[t] {
                dist[t] = nd;
                sigma[t] = sigma[u];
                preds[t].clear();
                preds[t].push(u);
                heap.push(Frontier {
                    dist: nd,
                    vertex: t,
                });
            } else if nd == dist[t] {
                sigma[t] += sigma[u];
                preds[t].push(u);
            }
        }
    }
    let mut delta = vec![0.0; n];
    let mut dependency = vec![0.0; n];
    for &w in order.iter().rev() {
        for &v in &preds[w] {
            delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
        }
        if w != source {
            dependency[w] = delta[w];
        }
    }
    dependency
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic;
    use proptest::prelude::*;

    fn chain() -> WeightedDigraph {
        let mut b = WeightedDigraph::builder();
        b.add_arc("a", "b", 1.0)
            .unwrap()
            .add_arc("b", "c", 1.0)
            .unwrap();
        b.build()
    }

    fn star(k: usize) -> WeightedDigraph {
        let mut b = WeightedDigraph::builder();
        for i in 0..k {
            b.add_arc("c", &format!("x{i}"), 1.0).unwrap();
        }
        b.build()
    }

    #[test]
    fn degree_examples() {
        let g = star(4);
        let c = g.require("c").unwrap().index();
        assert_eq!(degree(&g, Direction::Out)[c], 4.0);
        assert_eq!(degree(&g, Direction::In)[c], 0.0);
        let mut b = WeightedDigraph::builder();
        for l in ["p", "q", "r"] {
            b.add_vertex(l);
        }
        let empty = b.build();
        assert_eq!(degree(&empty, Direction::In), vec![0.0; 3]);
        assert_eq!(degree(&empty, Direction::Out), vec![0.0; 3]);
    }

    #[test]
    fn closeness_examples() {
        for n in 2..7 {
            let g = synthetic::complete_digraph(n, 1.0);
            assert!(closeness(&g, Execution::Sequential)
                .unwrap()
                .iter()
                .all(|&c| c == 1.0));
        }
        let c = closeness(&chain(), Execution::Sequential).unwrap();
        assert_eq!(c, vec![2.0 / 3.0, 1.0, 0.0]);
        let mut b = WeightedDigraph::builder();
        b.add_vertex("x");
        assert!(matches!(
            closeness(&b.build(), Execution::Sequential),
            Err(Error::EmptyGraph {
                required: 2,
                found: 1
            })
        ));
    }

    #[test]
    fn triangle_examples() {
        let mut b = WeightedDigraph::builder();
        b.add_arc("a", "b", 1.0).unwrap();
        b.add_arc("b", "c", 1.0).unwrap();
        b.add_arc("c", "a", 1.0).unwrap();
        assert_eq!(triangles(&b.build()), vec![1.0; 3]);
        // reciprocal arcs do not double count
        let g = synthetic::complete_digraph(4, 1.0);
        assert_eq!(triangles(&g), vec![3.0; 4]);
        let mut tree = WeightedDigraph::builder();
        tree.add_arc("r", "a", 1.0).unwrap();
        tree.add_arc("r", "b", 1.0).unwrap();
        tree.add_arc("a", "c", 1.0).unwrap();
        assert_eq!(triangles(&tree.build()), vec![0.0; 4]);
    }

    #[test]
    fn pagerank_examples() {
        let mut b = WeightedDigraph::builder();
        let n = 5;
        for i in 0..n {
            b.add_arc(
                &format!("v{i}"),
                &format!("v{}", (i + 1) % n),
                1.0 + i as f64,
            )
            .unwrap();
        }
        let ring = pagerank(&b.build(), PageRankParams::default()).unwrap();
        for &s in &ring.scores {
            assert!((s - 0.2).abs() < 1e-12);
        }
        let mut single = WeightedDigraph::builder();
        single.add_vertex("solo");
        let one = pagerank(&single.build(), PageRankParams::default()).unwrap();
        assert_eq!(one.scores, vec![1.0]);
        let tight = PageRankParams {
            max_iterations: 2,
            tolerance: 1e-15,
            ..Default::default()
        };
        assert!(matches!(
            pagerank(&chain(), tight),
            Err(Error::NoConvergence(2))
        ));
        assert!(PageRankParams::with_damping(1.0).is_err());
        assert!(PageRankParams::with_damping(0.5).is_ok());
    }

    #[test]
    fn betweenness_examples() {
        assert_eq!(
            betweenness(&chain(), Execution::Sequential).unwrap(),
            vec![0.0, 1.0, 0.0]
        );
        for n in 3..8 {
            let g = synthetic::complete_digraph(n, 1.0);
            assert!(betweenness(&g, Execution::Sequential)
                .unwrap()
                .iter()
                .all(|&b| b == 0.0));
        }
        // two equal routes a -> {x, y} -> d split the pair
        let mut b = WeightedDigraph::builder();
        b.add_arc("a", "x", 1.0).unwrap();
        b.add_arc("x", "d", 1.0).unwrap();
        b.add_arc("a", "y", 1.0).unwrap();
        b.add_arc("y", "d", 1.0).unwrap();
        let g = b.build();
        let bc = betweenness(&g, Execution::Sequential).unwrap();
        assert_eq!(bc[g.require("x").unwrap().index()], 0.5);
        assert_eq!(bc[g.require("y").unwrap().index()], 0.5);
        let mut small = WeightedDigraph::builder();
        small.add_arc("a", "b", 1.0).unwrap();
        assert!(matches!(
            betweenness(&small.build(), Execution::Sequential),
            Err(Error::EmptyGraph {
                required: 3,
                found: 2
            })
        ));
    }

    proptest! {
        #[test]
        fn scaling_invariance(seed in 0u64..100, c in 0.1f64..10.0) {
            let g = synthetic::random_digraph(9, 0.3, (0.5, 5.0), seed);
            let h = g.scaled(c).unwrap();
            prop_assert_eq!(degree(&g, Direction::In), degree(&h, Direction::In));
            prop_assert_eq!(triangles(&g), triangles(&h));
            let (bg, bh) = (
                betweenness(&g, Execution::Sequential).unwrap(),
                betweenness(&h, Execution::Sequential).unwrap(),
            );
            for (a, b) in bg.iter().zip(&bh) {
                prop_assert!((a - b).abs() < 1e-9);
            }
            let (cg, ch) = (
                closeness(&g, Execution::Sequential).unwrap(),
                closeness(&h, Execution::Sequential).unwrap(),
            );
            for (a, b) in cg.iter().zip(&ch) {
                prop_assert!((a / c - b).abs() <= 1e-9 * b.abs().max(1e-12));
            }
        }

        #[test]
        fn pagerank_sums_to_one(seed in 0u64..200) {
            let g = synthetic::random_digraph(12, 0.2, (0.5, 5.0), seed);
            let pr = pagerank(&g, PageRankParams::default()).unwrap();
            prop_assert!((pr.scores.iter().sum::<f64>() - 1.0).abs() < 1e-8);
            prop_assert!(pr.scores.iter().all(|s| s.is_finite() && *s > 0.0));
        }

        #[test]
        fn betweenness_parallel_is_bitwise_sequential(seed in 0u64..30) {
            let g = synthetic::random_digraph(25, 0.15, (0.5, 5.0), seed);
            let a = betweenness(&g, Execution::Sequential).unwrap();
            let b = betweenness(&g, Execution::Parallel).unwrap();
            prop_assert_eq!(
                a.iter().map(|x| x.to_bits()).collect::<Vec<_>>(),
                b.iter().map(|x| x.to_bits()).collect::<Vec<_>>()
            );
        }
    }
}
