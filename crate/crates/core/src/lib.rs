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
//! Local Detour Centrality and baseline centrality measures on weighted
//! directed graphs built from timed word-fluency transcripts.
//!
//! The usual pipeline is: parse a corpus with [`corpus::parse_corpus`],
//! build a graph for a (window size, minimum subjects) pair with
//! [`distance::build_graph`], compute measures with
//! [`centrality::compute_all`], and relate them to retrieval timing with
//! the [`stats`] module.

pub mod centrality;
pub mod corpus;
pub mod distance;
pub mod error;
pub mod exec;
pub mod format;
pub mod graph;
pub mod paths;
pub mod retrieval;
pub mod stats;
pub mod synthetic;

pub use error::{Error, Result};
pub use exec::Execution;
pub use graph::{Arc, VertexId, WeightedDigraph};
