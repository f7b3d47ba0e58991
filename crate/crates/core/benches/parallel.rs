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
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ldc_core::centrality::{betweenness, ldc_all};
use ldc_core::distance::DistanceParams;
use ldc_core::retrieval::Timing;
use ldc_core::stats::{grid_sweep, permutation_test, AnalysisConfig, GridSpec, PermutationConfig};
use ldc_core::synthetic::{self, CorpusSpec};
use ldc_core::Execution;
use std::hint::black_box;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn centrality(c: &mut Criterion) {
    let mut group = c.benchmark_group("centrality");
    for n in [60, 150] {
        let g = synthetic::random_strongly_connected(n, 0.08, (0.05, 5.0), 7);
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(format!("ldc/{name}"), n), &g, |b, g| {
                b.iter(|| ldc_all(black_box(g), exec).unwrap())
            });
            group.bench_with_input(
                BenchmarkId::new(format!("betweenness/{name}"), n),
                &g,
                |b, g| b.iter(|| betweenness(black_box(g), exec).unwrap()),
            );
        }
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let records = synthetic::corpus(
        &CorpusSpec {
            subjects: 120,
            vocabulary: 60,
            ..CorpusSpec::default()
        },
        3,
    );
    let spec: GridSpec = "ws=1..9,ms=3..9:2".parse().unwrap();
    let config = AnalysisConfig::default();
    let mut group = c.benchmark_group("grid_sweep");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| grid_sweep(black_box(&records), &spec, &config, exec).unwrap())
        });
    }
    group.finish();
}

fn permutation(c: &mut Criterion) {
    let records = synthetic::corpus(
        &CorpusSpec {
            subjects: 60,
            vocabulary: 30,
            ..CorpusSpec::default()
        },
        9,
    );
    let mut config = PermutationConfig::new(DistanceParams::new(3, 3).unwrap(), Timing::DtFrom, 1);
    config.repetitions = 100;
    let mut group = c.benchmark_group("permutation_test");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| permutation_test(black_box(&records), &config, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, centrality, sweep, permutation);
criterion_main!(benches);
