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
use ldc_core::centrality::{
    betweenness, closeness, compute_all, degree, ldc, ldc_all, pagerank, triangles,
    DetourCentrality, Direction, Measure, PageRankParams,
};
use ldc_core::paths::mean_pairwise_distance;
use ldc_core::synthetic;
use ldc_core::{Execution, WeightedDigraph};
use ldc_oracles as oracle;
use proptest::prelude::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn graphs(count: u64, offset: u64) -> impl Iterator<Item = WeightedDigraph> {
    (0..count).map(move |i| {
        let n = 4 + (i % 5) as usize;
        let p = [0.2, 0.35, 0.5][(i % 3) as usize];
        synthetic::random_digraph(n, p, (0.0, 5.0), offset + i)
    })
}

#[test]
fn ldc_matches_materialised_complete_graphs() {
    for g in graphs(120, 1000) {
        let r = oracle::threshold(&g);
        let scores = ldc_all(&g, Execution::Sequential).unwrap();
        for v in g.vertices() {
            let expected = oracle::ldc_by_materialization(&g, v, r);
            assert!(
                close(scores[v.index()], expected, 1e-9),
                "{} vs {expected}",
                scores[v.index()]
            );
            assert!(close(ldc(&g, v, r).unwrap(), expected, 1e-9));
        }
    }
}

#[test]
fn ldc_at_other_radii_matches_materialisation() {
    for g in graphs(40, 3000) {
        let base = mean_pairwise_distance(&g).unwrap();
        let detour = DetourCentrality::new(&g, Execution::Sequential).unwrap();
        for factor in [0.0, 0.5, 2.0] {
            let r = base * factor;
            for v in g.vertices() {
                let got = detour.context_at(v, r).unwrap().score();
                assert!(close(got, oracle::ldc_by_materialization(&g, v, r), 1e-9));
            }
        }
    }
}

#[test]
fn betweenness_matches_path_enumeration() {
    for g in graphs(80, 5000) {
        let got = betweenness(&g, Execution::Sequential).unwrap();
        for (a, b) in got.iter().zip(oracle::betweenness_by_enumeration(&g)) {
            assert!(close(*a, b, 1e-9), "{a} vs {b}");
        }
    }
}

#[test]
fn closeness_triangles_and_degree_match_oracles() {
    for g in graphs(80, 7000) {
        let c = closeness(&g, Execution::Parallel).unwrap();
        for (a, b) in c.iter().zip(oracle::closeness_from_apsp(&g)) {
            assert!(close(*a, b, 1e-12));
        }
        assert_eq!(triangles(&g), oracle::triangles_by_triples(&g));
        let adj = oracle::adjacency(&g);
        let out: Vec<f64> = adj
            .iter()
            .map(|row| row.iter().flatten().count() as f64)
            .collect();
        let into: Vec<f64> = (0..adj.len())
            .map(|j| adj.iter().filter(|row| row[j].is_some()).count() as f64)
            .collect();
        assert_eq!(degree(&g, Direction::Out), out);
        assert_eq!(degree(&g, Direction::In), into);
    }
}

#[test]
fn pagerank_satisfies_damped_equation() {
    for g in graphs(80, 9000) {
        for alpha in [0.5, 0.85, 0.95] {
            let params = PageRankParams::with_damping(alpha).unwrap();
            let out = pagerank(&g, params).unwrap();
            assert!(oracle::pagerank_residual(&g, &out.raw, alpha) < 1e-8);
            assert!((out.scores.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn table_agrees_with_individual_measures() {
    for g in graphs(30, 11000) {
        let t = compute_all(&g, PageRankParams::default(), Execution::Parallel).unwrap();
        assert_eq!(
            t.get(Measure::Ldc),
            ldc_all(&g, Execution::Sequential).unwrap().as_slice()
        );
        assert_eq!(
            t.get(Measure::Betweenness),
            betweenness(&g, Execution::Sequential).unwrap().as_slice()
        );
        assert_eq!(
            t.get(Measure::Closeness),
            closeness(&g, Execution::Sequential).unwrap().as_slice()
        );
        assert_eq!(t.threshold, mean_pairwise_distance(&g).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scaling_weights_scales_ldc_and_keeps_others(seed in 0u64..10_000, c in prop::sample::select(vec![0.1, 3.0, 10.0])) {
        let g = synthetic::random_digraph(7, 0.35, (0.0, 5.0), seed);
        let s = g.scaled(c).unwrap();
        let a = compute_all(&g, PageRankParams::default(), Execution::Sequential).unwrap();
        let b = compute_all(&s, PageRankParams::default(), Execution::Sequential).unwrap();
        for (x, y) in a.get(Measure::Ldc).iter().zip(b.get(Measure::Ldc)) {
            prop_assert!(close(x * c, *y, 1e-9));
        }
        for (x, y) in a.get(Measure::Closeness).iter().zip(b.get(Measure::Closeness)) {
            prop_assert!(close(x / c, *y, 1e-9));
        }
        for m in [Measure::InDegree, Measure::OutDegree, Measure::Triangles, Measure::PageRank] {
            prop_assert_eq!(a.get(m), b.get(m));
        }
    }
}
