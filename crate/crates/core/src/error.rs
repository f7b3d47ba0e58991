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

use thiserror::Error;

/// Errors produced by graph construction, centrality evaluation, corpus
/// ingestion and the statistical routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex: {0}")]
    UnknownVertex(String),

    #[error("graph has {found} vertices, at least {required} required")]
    EmptyGraph { required: usize, found: usize },

    #[error("invalid arc {source_label} -> {target}: {reason}")]
    InvalidArc {
        source_label: String,
        target: String,
        reason: &'static str,
    },

    #[error("line {line}: {reason}")]
    MalformedLine { line: u64, reason: String },

    #[error("onsets are not strictly increasing for subject {0}")]
    NonMonotoneTimestamp(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("record has no entries")]
    EmptyRecord,

    #[error("no records supplied")]
    NoRecords,

    #[error("word {0:?} has no eligible occurrence")]
    NoEligibleOccurrence(String),

    #[error("need at least {needed} observations, found {found}")]
    InsufficientData { needed: usize, found: usize },

    #[error("series has zero variance")]
    ZeroVariance,

    #[error("PageRank did not converge within {0} iterations")]
    NoConvergence(usize),

    #[error("actual correlation is undefined: {0}")]
    UndefinedActualCorrelation(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
