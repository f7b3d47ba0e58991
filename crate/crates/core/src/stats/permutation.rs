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
//! Triviality test: compares the LDC–timing correlation with correlations
//! obtained after shuffling the word order inside every record.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::centrality::ldc_all;
use crate::corpus::{shuffle_records, FluencyRecord};
use crate::distance::{build_graph, DistanceParams};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::retrieval::{self, Timing};

use super::correlation::{correlate, Correlation};
use super::outliers::DEFAULT_EXCLUSION_SD;

/// Failed repetitions are redrawn this many times before being given up.
pub const MAX_REDRAWS: u32 = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Alternative {
    #[default]
    TwoSided,
    Greater,
    Less,
}

impl Alternative {
    pub fn name(self) -> &'static str {
        match self {
            Alternative::TwoSided => "two-sided",
            Alternative::Greater => "greater",
            Alternative::Less => "less",
        }
    }

    /// Whether a null draw is at least as extreme as the observed value.
    fn as_extreme(self, null: f64, observed: f64) -> bool {
        // Tolerates rounding noise between equal rank statistics.
        const EPS: f64 = 1e-12;
        match self {
            Alternative::TwoSided => null.abs() >= observed.abs() - EPS,
            Alternative::Greater => null >= observed - EPS,
            Alternative::Less => null <= observed + EPS,
        }
    }

    /// Converts a two-sided parametric p-value to this alternative.
    fn parametric(self, rho: f64, two_sided: f64) -> f64 {
        let toward = match self {
            Alternative::TwoSided => return two_sided,
            Alternative::Greater => rho >= 0.0,
            Alternative::Less => rho <= 0.0,
        };
        if toward {
            two_sided / 2.0
        } else {
            1.0 - two_sided / 2.0
        }
    }
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Alternative {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two-sided" | "two_sided" => Ok(Alternative::TwoSided),
            "greater" => Ok(Alternative::Greater),
            "less" => Ok(Alternative::Less),
            other => Err(Error::InvalidParameter(format!(
                "unknown alternative {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PermutationConfig {
    pub repetitions: usize,
    pub seed: u64,
    pub params: DistanceParams,
    pub target: Timing,
    pub alpha: f64,
    pub alternative: Alternative,
    /// Applied identically to the observed and to every null correlation.
    pub exclusion_sd: Option<f64>,
}

impl PermutationConfig {
    pub fn new(params: DistanceParams, target: Timing, seed: u64) -> Self {
        PermutationConfig {
            repetitions: 5000,
            seed,
            params,
            target,
            alpha: 0.05,
            alternative: Alternative::TwoSided,
            exclusion_sd: Some(DEFAULT_EXCLUSION_SD),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::InvalidParameter(
                "repetitions must be positive".into(),
            ));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha {} outside (0, 1)",
                self.alpha
            )));
        }
        Ok(())
    }
}

/// Location and spread of the null distribution.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NullSummary {
    pub mean: f64,
    pub sd: f64,
    pub min: f64,
    pub max: f64,
    /// (probability, value) pairs.
    pub quantiles: Vec<(f64, f64)>,
}

pub const SUMMARY_PROBS: [f64; 5] = [0.025, 0.05, 0.5, 0.95, 0.975];

/// Linear-interpolation quantile of sorted data.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

impl NullSummary {
    /// None for an empty sample.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let sd = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Some(NullSummary {
            mean,
            sd,
            min: sorted[0],
            max: sorted[sorted.len() - 1],
            quantiles: SUMMARY_PROBS
                .iter()
                .map(|&p| (p, quantile(&sorted, p)))
                .collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PermutationReport {
    pub ws: usize,
    pub ms: usize,
    pub target: &'static str,
    pub seed: u64,
    pub alternative: Alternative,
    pub alpha: f64,
    pub exclusion_sd: Option<f64>,
    pub observed: Correlation,
    /// Parametric p-value of the observed correlation under `alternative`.
    pub parametric_p: f64,
    pub repetitions: usize,
    pub effective: usize,
    pub failed: usize,
    pub permutation_p: f64,
    pub significant: bool,
    pub nontrivial: bool,
    pub null_summary: Option<NullSummary>,
    pub null: Vec<f64>,
}

/// Spearman correlation between LDC and the chosen timing variable on the
/// graph built from `records`.
pub fn ldc_timing_correlation(
    records: &[FluencyRecord],
    params: DistanceParams,
    target: Timing,
    exclusion_sd: Option<f64>,
    exec: Execution,
) -> Result<Correlation> {
    let graph = build_graph(records, params)?;
    if graph.is_empty() {
        return Err(Error::EmptyGraph {
            required: 1,
            found: 0,
        });
    }
    let ldc = ldc_all(&graph, exec)?;
    let stats = retrieval::covariates(records)?;
    let timing: Vec<Option<f64>> = graph
        .labels()
        .map(|w| retrieval::find(&stats, w).and_then(|s| target.of(s)))
        .collect();
    let ldc: Vec<Option<f64>> = ldc.into_iter().map(Some).collect();
    correlate(&ldc, &timing, exclusion_sd)
}

/// `(1 + #extreme) / (n + 1)` over the successful null draws.
pub fn permutation_p_value(observed: f64, null: &[f64], alternative: Alternative) -> f64 {
    let extreme = null
        .iter()
        .filter(|&&r| alternative.as_extreme(r, observed))
        .count();
    (1 + extreme) as f64 / (null.len() + 1) as f64
}

/// Seed of one attempt of one repetition; independent of scheduling.
pub fn derive_seed(master: u64, repetition: usize, attempt: u32) -> u64 {
    let mut z = master
        ^ (repetition as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (u64::from(attempt) << 56);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn null_draw(
    records: &[FluencyRecord],
    config: &PermutationConfig,
    repetition: usize,
) -> Option<f64> {
    (0..=MAX_REDRAWS).find_map(|attempt| {
        let shuffled = shuffle_records(records, derive_seed(config.seed, repetition, attempt));
        ldc_timing_correlation(
            &shuffled,
            config.params,
            config.target,
            config.exclusion_sd,
            Execution::Sequential,
        )
        .ok()
        .map(|c| c.rho)
    })
}

/// Runs the full test. Repetitions are distributed under `exec`; the
/// result does not depend on it.
pub fn permutation_test(
    records: &[FluencyRecord],
    config: &PermutationConfig,
    exec: Execution,
) -> Result<PermutationReport> {
    config.validate()?;
    let observed = ldc_timing_correlation(
        records,
        config.params,
        config.target,
        config.exclusion_sd,
        exec,
    )
    .map_err(|e| Error::UndefinedActualCorrelation(e.to_string()))?;
    let draws = exec::map_indices(exec, config.repetitions, |rep| {
        null_draw(records, config, rep)
    });
    let null: Vec<f64> = draws.iter().flatten().copied().collect();
    let parametric_p = config
        .alternative
        .parametric(observed.rho, observed.p_value);
    let permutation_p = permutation_p_value(observed.rho, &null, config.alternative);
    let significant = parametric_p <= config.alpha;
    Ok(PermutationReport {
        ws: config.params.ws,
        ms: config.params.ms,
        target: config.target.name(),
        seed: config.seed,
        alternative: config.alternative,
        alpha: config.alpha,
        exclusion_sd: config.exclusion_sd,
        observed,
        parametric_p,
        repetitions: config.repetitions,
        effective: null.len(),
        failed: config.repetitions - null.len(),
        permutation_p,
        significant,
        nontrivial: significant && permutation_p <= config.alpha,
        null_summary: NullSummary::of(&null),
        null,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::{self, CorpusSpec};

    #[test]
    fn p_value_examples() {
        assert_eq!(permutation_p_value(0.5, &[], Alternative::TwoSided), 1.0);
        let null = [0.1, -0.6, 0.4, 0.7];
        assert_eq!(
            permutation_p_value(0.5, &null, Alternative::TwoSided),
            3.0 / 5.0
        );
        assert_eq!(
            permutation_p_value(0.5, &null, Alternative::Greater),
            2.0 / 5.0
        );
        assert_eq!(
            permutation_p_value(0.5, &null, Alternative::Less),
            4.0 / 5.0
        );
        assert_eq!(
            permutation_p_value(0.9, &null, Alternative::TwoSided),
            1.0 / 5.0
        );
    }

    #[test]
    fn quantiles_interpolate() {
        let s = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&s, 0.0), 1.0);
        assert_eq!(quantile(&s, 0.5), 2.5);
        assert_eq!(quantile(&s, 1.0), 4.0);
        assert!((quantile(&s, 0.05) - 1.15).abs() < 1e-12);
        let summary = NullSummary::of(&s).unwrap();
        assert_eq!(summary.mean, 2.5);
        assert_eq!(summary.min, 1.0);
        assert!(NullSummary::of(&[]).is_none());
    }

    #[test]
    fn seeds_differ_across_reps_and_attempts() {
        let mut seen = std::collections::HashSet::new();
        for rep in 0..200 {
            for attempt in 0..=MAX_REDRAWS {
                assert!(seen.insert(derive_seed(7, rep, attempt)));
            }
        }
    }

    #[test]
    fn degenerate_corpus_has_undefined_observed() {
        let recs = vec![FluencyRecord::new("s1", [("cat", 1.0)]).unwrap()];
        let cfg = PermutationConfig::new(DistanceParams::new(1, 1).unwrap(), Timing::DtTo, 1);
        assert!(matches!(
            permutation_test(&recs, &cfg, Execution::Sequential),
            Err(Error::UndefinedActualCorrelation(_))
        ));
    }

    #[test]
    fn small_run_is_reproducible_and_bounded() {
        let spec = CorpusSpec {
            subjects: 30,
            vocabulary: 15,
            ..CorpusSpec::default()
        };
        let recs = synthetic::corpus(&spec, 3);
        let mut cfg =
            PermutationConfig::new(DistanceParams::new(2, 3).unwrap(), Timing::DtFrom, 11);
        cfg.repetitions = 20;
        let a = permutation_test(&recs, &cfg, Execution::Parallel).unwrap();
        let b = permutation_test(&recs, &cfg, Execution::Sequential).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.effective + a.failed, 20);
        assert!(a.permutation_p > 0.0 && a.permutation_p <= 1.0);
        assert!(a.permutation_p >= 1.0 / 21.0);
    }
}
