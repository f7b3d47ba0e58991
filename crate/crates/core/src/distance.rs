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
//! Semantic graph construction from fluency records.
//!
//! For an ordered word pair (a, b), every subject whose (collapsed,
//! normalised) list has b at most `ws` positions after a contributes the
//! normalised time from a to b. The arc a -> b exists iff more than `ms`
//! subjects contribute, and its weight is the median contribution.

use std::collections::{BTreeMap, BTreeSet};

use crate::corpus::{normalize_record, FluencyRecord};
use crate::error::{Error, Result};
use crate::graph::WeightedDigraph;

/// Window sizes of the standard parameter grid.
pub const GRID_WS: [usize; 9] = [1, 2, 3, 4, 5, 6, 7, 8, 9];
/// Minimum-subject values of the standard parameter grid.
pub const GRID_MS: [usize; 10] = [3, 5, 7, 9, 11, 13, 15, 17, 19, 21];

/// Window size and minimum-subject count of the distance function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DistanceParams {
    /// Largest positional gap (1 = adjacent words) that still counts.
    pub ws: usize,
    /// An arc needs strictly more than this many contributing subjects.
    pub ms: usize,
}

impl DistanceParams {
    pub fn new(ws: usize, ms: usize) -> Result<Self> {
        if ws == 0 || ms == 0 {
            return Err(Error::InvalidParameter(format!(
                "ws and ms must be positive (ws={ws}, ms={ms})"
            )));
        }
        Ok(DistanceParams { ws, ms })
    }

    pub fn is_grid_value(&self) -> bool {
        GRID_WS.contains(&self.ws) && GRID_MS.contains(&self.ms)
    }
}

/// Median of a non-empty sample; mean of the two central values for even sizes.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of empty sample");
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}

/// Per-pair traversal times, collected once for the largest window of interest.
#[derive(Clone, Debug)]
pub struct TraversalIndex {
    max_ws: usize,
    // (from, to) -> [(positional gap, normalised time)], in record order
    pairs: BTreeMap<(String, String), Vec<(usize, f64)>>,
}

impl TraversalIndex {
    pub fn new(records: &[FluencyRecord], max_ws: usize) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::NoRecords);
        }
        let mut pairs: BTreeMap<(String, String), Vec<(usize, f64)>> = BTreeMap::new();
        for record in records {
            if record.is_empty() {
                continue;
            }
            // each word appears once after collapsing, so every pair is
            // traversed at most once per subject
            let list = normalize_record(&record.collapsed())?;
            let entries = &list.entries;
            for i in 0..entries.len() {
                for gap in 1..=max_ws {
                    let Some(later) = entries.get(i + gap) else {
                        break;
                    };
                    pairs
                        .entry((entries[i].word.clone(), later.word.clone()))
                        .or_default()
                        .push((gap, later.onset - entries[i].onset));
                }
            }
        }
        Ok(TraversalIndex { max_ws, pairs })
    }

    /// The traversal times of `from -> to` within window `ws`.
    pub fn samples(&self, from: &str, to: &str, ws: usize) -> Vec<f64> {
        self.pairs
            .get(&(from.to_string(), to.to_string()))
            .map(|v| {
                v.iter()
                    .filter(|(g, _)| *g <= ws)
                    .map(|(_, t)| *t)
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Builds the graph for `params`; vertices are indexed in label order and
    /// words without any qualifying arc are dropped.
    pub fn graph(&self, params: DistanceParams) -> Result<WeightedDigraph> {
        if params.ws > self.max_ws {
            return Err(Error::InvalidParameter(format!(
                "ws={} exceeds the collected window {}",
                params.ws, self.max_ws
            )));
        }
        let mut arcs = Vec::new();
        for ((from, to), samples) in &self.pairs {
            let within: Vec<f64> = samples
                .iter()
                .filter(|(g, _)| *g <= params.ws)
                .map(|(_, t)| *t)
                .collect();
            if within.len() > params.ms {
                arcs.push((from.as_str(), to.as_str(), median(&within)));
            }
        }
        let labels: BTreeSet<&str> = arcs.iter().flat_map(|&(a, b, _)| [a, b]).collect();
        let mut b = WeightedDigraph::builder();
        for label in labels {
            b.add_vertex(label);
        }
        for (from, to, w) in arcs {
            b.add_arc(from, to, w)?;
        }
        Ok(b.build())
    }
}

/// Builds the semantic graph of `records` under `params`.
pub fn build_graph(records: &[FluencyRecord], params: DistanceParams) -> Result<WeightedDigraph> {
    TraversalIndex::new(records, params.ws)?.graph(params)
}
