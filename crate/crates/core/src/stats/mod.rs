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
//! Rank correlation, outlier exclusion, grid sweeps and permutation tests.

pub mod correlation;
pub mod grid;
pub mod outliers;
pub mod permutation;

pub use correlation::{average_ranks, correlate, spearman, spearman_p_value, Correlation};
pub use grid::{
    analyze_single, correlation_distance_matrix, grid_sweep, AnalysisConfig, CellOutcome,
    CorrelationTable, GridCell, GridResult, GridSpec, Series,
};
pub use outliers::{exclude_pair, outlier_mask, DEFAULT_EXCLUSION_SD};
pub use permutation::{
    permutation_p_value, permutation_test, Alternative, NullSummary, PermutationConfig,
    PermutationReport,
};
