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
//! Seeded generators for random digraphs and synthetic fluency corpora.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Entry, FluencyRecord};
use crate::graph::WeightedDigraph;

/// G(n, p) digraph with labels `v0..v{n-1}` and weights uniform in `(lo, hi]`.
pub fn random_digraph(n: usize, p: f64, (lo, hi): (f64, f64), seed: u64) -> WeightedDigraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = WeightedDigraph::builder();
    let labels: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    for l in &labels {
        b.add_vertex(l);
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.gen_bool(p) {
                let w = hi - rng.gen::<f64>() * (hi - lo);
                b.add_arc(&labels[i], &labels[j], w).expect("valid arc");
            }
        }
    }
    b.build()
}

/// Random digraph that contains a Hamiltonian cycle, hence strongly connected.
pub fn random_strongly_connected(
    n: usize,
    p: f64,
    range: (f64, f64),
    seed: u64,
) -> WeightedDigraph {
    let base = random_digraph(n, p, range, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_c1c1e);
    let mut b = WeightedDigraph::builder();
    for l in base.labels() {
        b.add_vertex(l);
    }
    for a in base.arcs() {
        b.add_arc(base.label(a.source), base.label(a.target), a.weight)
            .expect("valid arc");
    }
    for i in 0..n {
        let (s, t) = (format!("v{i}"), format!("v{}", (i + 1) % n));
        if n > 1 && !base.has_arc(base.require(&s).unwrap(), base.require(&t).unwrap()) {
            let w = range.1 - rng.gen::<f64>() * (range.1 - range.0);
            b.add_arc(&s, &t, w).expect("valid arc");
        }
    }
    b.build()
}

/// Complete digraph on `n` vertices with every arc weighing `weight`.
pub fn complete_digraph(n: usize, weight: f64) -> WeightedDigraph {
    let mut b = WeightedDigraph::builder();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                b.add_arc(&format!("v{i}"), &format!("v{j}"), weight)
                    .expect("valid arc");
            }
        }
    }
    b.build()
}

/// How words are drawn for each synthetic participant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WordSampling {
    /// Every vocabulary word equally likely.
    Uniform,
    /// Word `k` (0-based) drawn with weight `1 / (k + 1)^exponent`.
    Zipf { exponent: f64 },
}

/// Shape of a synthetic corpus. Each subject lists distinct words drawn
/// without replacement, independently of every other subject; onsets start
/// near zero and advance by random gaps independent of the words.
#[derive(Clone, Debug, PartialEq)]
pub struct CorpusSpec {
    pub subjects: usize,
    pub vocabulary: usize,
    pub min_len: usize,
    pub max_len: usize,
    /// Mean of the exponential part of each inter-onset gap, in seconds.
    pub mean_gap: f64,
    pub sampling: WordSampling,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            subjects: 40,
            vocabulary: 30,
            min_len: 8,
            max_len: 16,
            mean_gap: 2.0,
            sampling: WordSampling::Uniform,
        }
    }
}

/// Word label for vocabulary index `k`.
pub fn word(k: usize) -> String {
    format!("w{k:03}")
}

pub fn corpus(spec: &CorpusSpec, seed: u64) -> Vec<FluencyRecord> {
    // Lists hold distinct words, so no list is longer than the vocabulary.
    let max_len = spec.max_len.min(spec.vocabulary);
    assert!(spec.min_len >= 1 && spec.min_len <= max_len);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (0..spec.vocabulary)
        .map(|k| match spec.sampling {
            WordSampling::Uniform => 1.0,
            WordSampling::Zipf { exponent } => 1.0 / ((k + 1) as f64).powf(exponent),
        })
        .collect();
    (0..spec.subjects)
        .map(|s| {
            let len = rng.gen_range(spec.min_len..=max_len);
            let mut available = weights.clone();
            let mut onset = rng.gen::<f64>() * 2.0;
            let mut entries = Vec::with_capacity(len);
            for _ in 0..len {
                let total: f64 = available.iter().sum();
                let mut x = rng.gen::<f64>() * total;
                let mut pick = available.len() - 1;
                for (k, &w) in available.iter().enumerate() {
                    if w > 0.0 && x < w {
                        pick = k;
                        break;
                    }
                    x -= w;
                }
                while available[pick] == 0.0 {
                    pick -= 1;
                }
                available[pick] = 0.0;
                entries.push(Entry {
                    word: word(pick),
                    onset,
                });
                let u: f64 = rng.gen();
                onset += 0.2 + -(1.0 - u).ln() * spec.mean_gap;
            }
            FluencyRecord {
                subject: format!("s{s:04}"),
                entries,
            }
        })
        .collect()
}
