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
//! Brute-force reference implementations for the test suites.
//!
//! Nothing here calls into the algorithms of `ldc-core`; only the graph
//! accessors are used, so every function is an independent check.

// Index loops mirror the textbook definitions on purpose.
#![allow(clippy::needless_range_loop)]

use ldc_core::graph::{VertexId, WeightedDigraph};

/// Dense adjacency table: `table[u][v] = Some(w)` iff arc u -> v exists.
pub fn adjacency(g: &WeightedDigraph) -> Vec<Vec<Option<f64>>> {
    let n = g.vertex_count();
    let mut table = vec![vec![None; n]; n];
    for a in g.arcs() {
        table[a.source.index()][a.target.index()] = Some(a.weight);
    }
    table
}

/// Floyd–Warshall over an explicit weight table.
pub fn floyd_warshall_table(weights: &[Vec<Option<f64>>]) -> Vec<Vec<Option<f64>>> {
    let n = weights.len();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for i in 0..n {
        d[i][i] = 0.0;
        for j in 0..n {
            if let Some(w) = weights[i][j] {
                if i != j {
                    d[i][j] = d[i][j].min(w);
                }
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| x.is_finite().then_some(x))
                .collect()
        })
        .collect()
}

pub fn floyd_warshall(g: &WeightedDigraph) -> Vec<Vec<Option<f64>>> {
    floyd_warshall_table(&adjacency(g))
}

/// Every simple directed path from `s` to `t` (just `[s]` when s == t).
pub fn simple_paths(g: &WeightedDigraph, s: VertexId, t: VertexId) -> Vec<Vec<VertexId>> {
    fn walk(
        g: &WeightedDigraph,
        t: VertexId,
        path: &mut Vec<VertexId>,
        on_path: &mut Vec<bool>,
        out: &mut Vec<Vec<VertexId>>,
    ) {
        let u = *path.last().unwrap();
        if u == t {
            out.push(path.clone());
            return;
        }
        for &(next, _) in g.successors(u) {
            if !on_path[next.index()] {
                on_path[next.index()] = true;
                path.push(next);
                walk(g, t, path, on_path, out);
                path.pop();
                on_path[next.index()] = false;
            }
        }
    }
    let mut out = Vec::new();
    let mut on_path = vec![false; g.vertex_count()];
    on_path[s.index()] = true;
    walk(g, t, &mut vec![s], &mut on_path, &mut out);
    out
}

/// Sum of arc weights along `path`, accumulated left to right.
pub fn path_length(g: &WeightedDigraph, path: &[VertexId]) -> f64 {
    path.windows(2)
        .map(|w| g.weight(w[0], w[1]).expect("path uses existing arcs"))
        .fold(0.0, |acc, w| acc + w)
}

/// Threshold r: sum of all finite ordered-pair distances divided by |V|.
pub fn threshold(g: &WeightedDigraph) -> f64 {
    let d = floyd_warshall(g);
    let sum: f64 = d.iter().flatten().flatten().sum();
    sum / g.vertex_count() as f64
}

/// LDC by literally materialising both complete graphs on the neighbourhood.
///
/// The "with" complete graph carries δ on the original graph. The "without"
/// graph carries δ on a copy whose arcs touching `v` all weigh the maximum
/// arc weight. The score is the element-wise difference summed over ordered
/// pairs, divided by |L|.
pub fn ldc_by_materialization(g: &WeightedDigraph, v: VertexId, r: f64) -> f64 {
    let n = g.vertex_count();
    let direct = floyd_warshall(g);
    let neighborhood: Vec<usize> = (0..n)
        .filter(|&u| {
            u != v.index()
                && (direct[v.index()][u].is_some_and(|d| d <= r)
                    || direct[u][v.index()].is_some_and(|d| d <= r))
        })
        .collect();
    if neighborhood.is_empty() {
        return 0.0;
    }
    let max_w = g.arcs().map(|a| a.weight).fold(0.0, f64::max);
    let mut reweighted = adjacency(g);
    for i in 0..n {
        for j in 0..n {
            if reweighted[i][j].is_some() && (i == v.index() || j == v.index()) {
                reweighted[i][j] = Some(max_w);
            }
        }
    }
    let detour = floyd_warshall_table(&reweighted);
    let m = neighborhood.len();
    let g_with: Vec<Vec<Option<f64>>> = neighborhood
        .iter()
        .map(|&i| neighborhood.iter().map(|&j| direct[i][j]).collect())
        .collect();
    let g_without: Vec<Vec<Option<f64>>> = neighborhood
        .iter()
        .map(|&i| neighborhood.iter().map(|&j| detour[i][j]).collect())
        .collect();
    let mut total = 0.0;
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            total += match (g_without[i][j], g_with[i][j]) {
                (Some(a), Some(b)) => a - b,
                (None, Some(b)) => max_w * m as f64 - b,
                _ => 0.0,
            };
        }
    }
    total / m as f64
}

/// Betweenness by enumerating every simple path of every ordered pair.
///
/// Lengths within `1e-9` relative of the pair's minimum count as shortest.
pub fn betweenness_by_enumeration(g: &WeightedDigraph) -> Vec<f64> {
    let n = g.vertex_count();
    let mut score = vec![0.0; n];
    for s in g.vertices() {
        for t in g.vertices() {
            if s == t {
                continue;
            }
            let paths = simple_paths(g, s, t);
            if paths.is_empty() {
                continue;
            }
            let lengths: Vec<f64> = paths.iter().map(|p| path_length(g, p)).collect();
            let best = lengths.iter().cloned().fold(f64::INFINITY, f64::min);
            let tol = 1e-9 * best.abs().max(1e-12);
            let shortest: Vec<&Vec<VertexId>> = paths
                .iter()
                .zip(&lengths)
                .filter(|(_, &l)| (l - best).abs() <= tol)
                .map(|(p, _)| p)
                .collect();
            let total = shortest.len() as f64;
            for v in 0..n {
                if v == s.index() || v == t.index() {
                    continue;
                }
                let through = shortest
                    .iter()
                    .filter(|p| p.iter().any(|x| x.index() == v))
                    .count() as f64;
                score[v] += through / total;
            }
        }
    }
    score
}

/// Reachable-set closeness from Floyd–Warshall distances.
pub fn closeness_from_apsp(g: &WeightedDigraph) -> Vec<f64> {
    let d = floyd_warshall(g);
    d.iter()
        .map(|row| {
            let reach: Vec<f64> = row.iter().flatten().cloned().collect();
            let sum: f64 = reach.iter().sum();
            if reach.len() <= 1 || sum == 0.0 {
                0.0
            } else {
                (reach.len() - 1) as f64 / sum
            }
        })
        .collect()
}

/// Triangles on the symmetrised graph by checking every vertex triple.
pub fn triangles_by_triples(g: &WeightedDigraph) -> Vec<f64> {
    let n = g.vertex_count();
    let adj = adjacency(g);
    let linked = |a: usize, b: usize| adj[a][b].is_some() || adj[b][a].is_some();
    let mut count = vec![0.0; n];
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if linked(a, b) && linked(b, c) && linked(a, c) {
                    count[a] += 1.0;
                    count[b] += 1.0;
                    count[c] += 1.0;
                }
            }
        }
    }
    count
}

/// Largest per-component residual of the damped PageRank equation
/// `PR(v) = α (Σ_{u→v} PR(u)/N_u + D/T) + (1 − α)/T`, D the dangling mass.
pub fn pagerank_residual(g: &WeightedDigraph, pr: &[f64], alpha: f64) -> f64 {
    let n = g.vertex_count();
    let adj = adjacency(g);
    let out_deg: Vec<usize> = adj.iter().map(|row| row.iter().flatten().count()).collect();
    let dangling: f64 = (0..n).filter(|&u| out_deg[u] == 0).map(|u| pr[u]).sum();
    (0..n)
        .map(|v| {
            let inflow: f64 = (0..n)
                .filter(|&u| adj[u][v].is_some())
                .map(|u| pr[u] / out_deg[u] as f64)
                .sum();
            let rhs = alpha * (inflow + dangling / n as f64) + (1.0 - alpha) / n as f64;
            (pr[v] - rhs).abs()
        })
        .fold(0.0, f64::max)
}

/// Spearman correlation by O(n²) average ranking and textbook Pearson.
pub fn spearman_naive(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        v.iter()
            .map(|&a| {
                let below = v.iter().filter(|&&b| b < a).count() as f64;
                let equal = v.iter().filter(|&&b| b == a).count() as f64;
                below + (equal + 1.0) / 2.0
            })
            .collect()
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for i in 0..x.len() {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx).powi(2);
        syy += (ry[i] - my).powi(2);
    }
    sxy / (sxx * syy).sqrt()
}

/// Mean predecessor gap (`into` = true) or successor gap of `word` over
/// raw onset lists; `None` when no occurrence qualifies.
pub fn gap_scan(lists: &[Vec<(String, f64)>], word: &str, into: bool) -> Option<f64> {
    let mut sum = 0.0;
    let mut count = 0usize;
    for list in lists {
        for (i, (w, t)) in list.iter().enumerate() {
            if w != word {
                continue;
            }
            if into && i > 0 {
                sum += t - list[i - 1].1;
                count += 1;
            }
            if !into && i + 1 < list.len() {
                sum += list[i + 1].1 - t;
                count += 1;
            }
        }
    }
    (count > 0).then(|| sum / count as f64)
}
