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
//! Per-word retrieval timing (dt-to, dt-from) and frequency/location covariates.
//!
//! Everything here works on raw, un-normalised onsets of the collapsed
//! records (first occurrence of each word kept).

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::corpus::{canonical_word, FluencyRecord};
use crate::error::{Error, Result};
use crate::format;

/// Timing and covariates of one word across all records.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RetrievalStats {
    pub word: String,
    /// Number of records producing the word.
    pub frequency: usize,
    pub log_frequency: f64,
    /// Mean 1-based position.
    pub avg_location: f64,
    /// Mean time from the preceding word's onset, seconds.
    pub dt_to: Option<f64>,
    /// Mean time to the following word's onset, seconds.
    pub dt_from: Option<f64>,
    pub n_to: usize,
    pub n_from: usize,
}

/// Which timing statistic a caller is interested in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Timing {
    DtTo,
    DtFrom,
}

impl Timing {
    pub fn name(self) -> &'static str {
        match self {
            Timing::DtTo => "dt_to",
            Timing::DtFrom => "dt_from",
        }
    }

    pub fn of(self, stats: &RetrievalStats) -> Option<f64> {
        match self {
            Timing::DtTo => stats.dt_to,
            Timing::DtFrom => stats.dt_from,
        }
    }
}

impl std::str::FromStr for Timing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dt_to" => Ok(Timing::DtTo),
            "dt_from" => Ok(Timing::DtFrom),
            other => Err(Error::InvalidParameter(format!("unknown timing {other:?}"))),
        }
    }
}

fn mean_gap(records: &[FluencyRecord], word: &str, timing: Timing) -> Result<f64> {
    let word = canonical_word(word).unwrap_or_default();
    let mut sum = 0.0;
    let mut count = 0usize;
    for record in records {
        let list = record.collapsed();
        let Some(i) = list.entries.iter().position(|e| e.word == word) else {
            continue;
        };
        let gap = match timing {
            Timing::DtTo => i
                .checked_sub(1)
                .map(|p| list.entries[i].onset - list.entries[p].onset),
            Timing::DtFrom => list
                .entries
                .get(i + 1)
                .map(|next| next.onset - list.entries[i].onset),
        };
        if let Some(gap) = gap {
            sum += gap;
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::NoEligibleOccurrence(word));
    }
    Ok(sum / count as f64)
}

/// Mean time into `word` from the word produced before it.
pub fn dt_to(records: &[FluencyRecord], word: &str) -> Result<f64> {
    mean_gap(records, word, Timing::DtTo)
}

/// Mean time from `word` to the next word produced.
pub fn dt_from(records: &[FluencyRecord], word: &str) -> Result<f64> {
    mean_gap(records, word, Timing::DtFrom)
}

#[derive(Default)]
struct Accumulator {
    frequency: usize,
    position_sum: f64,
    to_sum: f64,
    n_to: usize,
    from_sum: f64,
    n_from: usize,
}

/// Statistics for every word in the corpus, sorted by word.
pub fn covariates(records: &[FluencyRecord]) -> Result<Vec<RetrievalStats>> {
    if records.is_empty() {
        return Err(Error::NoRecords);
    }
    let mut acc: BTreeMap<String, Accumulator> = BTreeMap::new();
    for record in records {
        let list = record.collapsed();
        let entries = &list.entries;
        for (i, e) in entries.iter().enumerate() {
            let a = acc.entry(e.word.clone()).or_default();
            a.frequency += 1;
            a.position_sum += (i + 1) as f64;
            if i > 0 {
                a.to_sum += e.onset - entries[i - 1].onset;
                a.n_to += 1;
            }
            if let Some(next) = entries.get(i + 1) {
                a.from_sum += next.onset - e.onset;
                a.n_from += 1;
            }
        }
    }
    Ok(acc
        .into_iter()
        .map(|(word, a)| RetrievalStats {
            word,
            frequency: a.frequency,
            log_frequency: (a.frequency as f64).ln(),
            avg_location: a.position_sum / a.frequency as f64,
            dt_to: (a.n_to > 0).then(|| a.to_sum / a.n_to as f64),
            dt_from: (a.n_from > 0).then(|| a.from_sum / a.n_from as f64),
            n_to: a.n_to,
            n_from: a.n_from,
        })
        .collect())
}

/// Looks up `word` in a table produced by [`covariates`].
pub fn find<'a>(table: &'a [RetrievalStats], word: &str) -> Option<&'a RetrievalStats> {
    table
        .binary_search_by(|s| s.word.as_str().cmp(word))
        .ok()
        .map(|i| &table[i])
}

/// `word,frequency,log_frequency,avg_location,dt_to,dt_from,n_to,n_from`;
/// undefined timings are written as `NA`.
pub fn write_stats_csv<W: Write>(table: &[RetrievalStats], writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record([
        "word",
        "frequency",
        "log_frequency",
        "avg_location",
        "dt_to",
        "dt_from",
        "n_to",
        "n_from",
    ])?;
    for s in table {
        wtr.write_record([
            s.word.clone(),
            s.frequency.to_string(),
            format::sig12(s.log_frequency),
            format::sig12(s.avg_location),
            format::sig12_or_na(s.dt_to),
            format::sig12_or_na(s.dt_from),
            s.n_to.to_string(),
            s.n_from.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::normalize_record;
    use crate::synthetic::{self, CorpusSpec};
    use proptest::prelude::*;

    fn rec(subject: &str, items: &[(&str, f64)]) -> FluencyRecord {
        FluencyRecord::new(subject, items.iter().map(|&(w, t)| (w, t))).unwrap()
    }

    #[test]
    fn single_gap_examples() {
        let r = vec![rec("s", &[("cat", 1.0), ("dog", 3.5)])];
        assert_eq!(dt_to(&r, "dog").unwrap(), 2.5);
        assert_eq!(dt_from(&r, "cat").unwrap(), 2.5);
        assert!(matches!(
            dt_to(&r, "cat"),
            Err(Error::NoEligibleOccurrence(_))
        ));
        assert!(matches!(
            dt_from(&r, "dog"),
            Err(Error::NoEligibleOccurrence(_))
        ));
        assert!(matches!(
            dt_to(&r, "eel"),
            Err(Error::NoEligibleOccurrence(_))
        ));
    }

    #[test]
    fn first_position_is_skipped_in_divisor() {
        let r = vec![
            rec("a", &[("dog", 0.5), ("cat", 1.0)]),
            rec("b", &[("cat", 0.0), ("dog", 4.0)]),
            rec("c", &[("eel", 0.0), ("dog", 2.0)]),
        ];
        assert_eq!(dt_to(&r, "dog").unwrap(), 3.0);
        let stats = covariates(&r).unwrap();
        let dog = find(&stats, "dog").unwrap();
        assert_eq!((dog.n_to, dog.n_from), (2, 1));
        assert_eq!(dog.dt_from, Some(0.5));
    }

    #[test]
    fn location_and_frequency() {
        let r = vec![
            rec("a", &[("x", 0.0), ("y", 1.0), ("z", 2.0)]),
            rec("b", &[("y", 0.0), ("x", 1.0), ("z", 2.0)]),
            rec("c", &[("y", 0.0), ("w", 1.0), ("x", 2.0)]),
        ];
        let stats = covariates(&r).unwrap();
        let x = find(&stats, "x").unwrap();
        assert_eq!(x.avg_location, 2.0);
        assert_eq!(x.frequency, 3);
        let w = find(&stats, "w").unwrap();
        assert_eq!(w.frequency, 1);
        assert_eq!(w.log_frequency, 0.0);
        assert!(matches!(covariates(&[]), Err(Error::NoRecords)));
    }

    #[test]
    fn undefined_timings_are_written_as_na() {
        let r = vec![rec("s", &[("cat", 1.0), ("dog", 3.5)])];
        let mut out = Vec::new();
        write_stats_csv(&covariates(&r).unwrap(), &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "word,frequency,log_frequency,avg_location,dt_to,dt_from,n_to,n_from\ncat,1,0,1,NA,2.5,0,1\ndog,1,0,2,2.5,NA,1,0\n"
        );
    }

    #[test]
    fn first_word_of_single_record_has_location_one() {
        let recs = synthetic::corpus(
            &CorpusSpec {
                subjects: 1,
                ..CorpusSpec::default()
            },
            2,
        );
        let first = recs[0].entries[0].word.clone();
        assert_eq!(
            find(&covariates(&recs).unwrap(), &first)
                .unwrap()
                .avg_location,
            1.0
        );
    }

    proptest! {
        #[test]
        fn frequencies_sum_to_total_length(seed in 0u64..100) {
            let recs = synthetic::corpus(&CorpusSpec::default(), seed);
            let stats = covariates(&recs).unwrap();
            let total: usize = stats.iter().map(|s| s.frequency).sum();
            prop_assert_eq!(total, recs.iter().map(|r| r.collapsed().len()).sum::<usize>());
            for s in &stats {
                prop_assert!(s.avg_location >= 1.0);
                prop_assert!(s.dt_to.is_none_or(|d| d >= 0.0));
                prop_assert!(s.dt_from.is_none_or(|d| d >= 0.0));
            }
        }

        #[test]
        fn table_agrees_with_single_word_queries(seed in 0u64..50) {
            let recs = synthetic::corpus(&CorpusSpec { subjects: 10, ..CorpusSpec::default() }, seed);
            for s in covariates(&recs).unwrap() {
                prop_assert_eq!(s.dt_to, dt_to(&recs, &s.word).ok());
                prop_assert_eq!(s.dt_from, dt_from(&recs, &s.word).ok());
            }
        }

        #[test]
        fn timings_ignore_normalisation(seed in 0u64..20) {
            let recs = synthetic::corpus(&CorpusSpec { subjects: 5, ..CorpusSpec::default() }, seed);
            let before = covariates(&recs).unwrap();
            let normalised: Vec<_> = recs.iter().map(|r| normalize_record(r).unwrap()).collect();
            let _ = crate::distance::build_graph(&recs, crate::distance::DistanceParams::new(2, 1).unwrap());
            prop_assert_eq!(&before, &covariates(&recs).unwrap());
            // the normalised lists would give different timings
            let scaled = covariates(&normalised).unwrap();
            prop_assert!(before.iter().zip(&scaled).any(|(a, b)| a.dt_from != b.dt_from));
        }
    }
}
