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
//! Fluency transcripts: parsing, emission, normalisation and shuffling.

use std::collections::HashSet;
use std::io::{Read, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// One produced word and its onset in seconds from the start of the recording.
#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub word: String,
    pub onset: f64,
}

/// A participant's ordered word list.
#[derive(Clone, Debug, PartialEq)]
pub struct FluencyRecord {
    pub subject: String,
    pub entries: Vec<Entry>,
}

impl FluencyRecord {
    /// Builds a record after canonicalising words and validating onsets.
    pub fn new<S: AsRef<str>>(
        subject: &str,
        entries: impl IntoIterator<Item = (S, f64)>,
    ) -> Result<Self> {
        let mut out = Vec::new();
        for (i, (word, onset)) in entries.into_iter().enumerate() {
            let word = canonical_word(word.as_ref()).ok_or_else(|| Error::MalformedLine {
                line: i as u64 + 1,
                reason: format!("empty word for subject {subject}"),
            })?;
            out.push(Entry { word, onset });
        }
        let record = FluencyRecord {
            subject: subject.to_string(),
            entries: out,
        };
        record.validate()?;
        Ok(record)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> + '_ {
        self.entries.iter().map(|e| e.word.as_str())
    }

    fn validate(&self) -> Result<()> {
        for e in &self.entries {
            if !e.onset.is_finite() || e.onset < 0.0 {
                return Err(Error::NonMonotoneTimestamp(self.subject.clone()));
            }
        }
        if self.entries.windows(2).any(|w| w[1].onset <= w[0].onset) {
            return Err(Error::NonMonotoneTimestamp(self.subject.clone()));
        }
        Ok(())
    }

    /// Keeps only the first occurrence of each word.
    pub fn collapsed(&self) -> FluencyRecord {
        let mut seen = HashSet::new();
        FluencyRecord {
            subject: self.subject.clone(),
            entries: self
                .entries
                .iter()
                .filter(|e| seen.insert(e.word.as_str()))
                .cloned()
                .collect(),
        }
    }
}

/// Lower-cased and trimmed form of a token, or `None` if nothing is left.
pub fn canonical_word(raw: &str) -> Option<String> {
    let w = raw.trim().to_lowercase();
    (!w.is_empty()).then_some(w)
}

/// Divides every onset by the record's word count.
pub fn normalize_record(record: &FluencyRecord) -> Result<FluencyRecord> {
    if record.is_empty() {
        return Err(Error::EmptyRecord);
    }
    let n = record.len() as f64;
    Ok(FluencyRecord {
        subject: record.subject.clone(),
        entries: record
            .entries
            .iter()
            .map(|e| Entry {
                word: e.word.clone(),
                onset: e.onset / n,
            })
            .collect(),
    })
}

/// Permutes each record's words uniformly at random, leaving the onset
/// sequence in place. Deterministic for a given seed.
pub fn shuffle_records(records: &[FluencyRecord], seed: u64) -> Vec<FluencyRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    records
        .iter()
        .map(|r| {
            let mut words: Vec<String> = r.entries.iter().map(|e| e.word.clone()).collect();
            words.shuffle(&mut rng);
            FluencyRecord {
                subject: r.subject.clone(),
                entries: words
                    .into_iter()
                    .zip(&r.entries)
                    .map(|(word, e)| Entry {
                        word,
                        onset: e.onset,
                    })
                    .collect(),
            }
        })
        .collect()
}

/// Input layout of a transcript file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CorpusFormat {
    /// `subject,word,onset_seconds`, one row per produced word.
    #[default]
    Long,
    /// One row per subject holding two parallel list cells, as exported by
    /// pandas: `subject,words,timestamps` with cells like `['cat', 'dog']`
    /// and `[0.5, 2.0]`. Plain `;`-separated cells are accepted as well.
    Lists,
}

pub fn parse_corpus<R: Read>(reader: R, format: CorpusFormat) -> Result<Vec<FluencyRecord>> {
    match format {
        CorpusFormat::Long => parse_long(reader),
        CorpusFormat::Lists => parse_lists(reader),
    }
}

fn header_check(rdr: &mut csv::Reader<impl Read>, expected: &[&str]) -> Result<()> {
    let headers = rdr.headers()?;
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(Error::MalformedLine {
            line: 1,
            reason: format!("expected header {}", expected.join(",")),
        });
    }
    Ok(())
}

fn parse_long<R: Read>(reader: R) -> Result<Vec<FluencyRecord>> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    header_check(&mut rdr, &["subject", "word", "onset_seconds"])?;
    let mut records: Vec<FluencyRecord> = Vec::new();
    let mut finished: HashSet<String> = HashSet::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let malformed = |reason: String| Error::MalformedLine { line, reason };
        if row.len() != 3 {
            return Err(malformed(format!("expected 3 fields, found {}", row.len())));
        }
        let subject = row[0].trim();
        if subject.is_empty() {
            return Err(malformed("empty subject".into()));
        }
        let word = canonical_word(&row[1]).ok_or_else(|| malformed("empty word".into()))?;
        let onset: f64 = row[2]
            .trim()
            .parse()
            .map_err(|_| malformed(format!("unparseable onset {:?}", &row[2])))?;
        if !onset.is_finite() || onset < 0.0 {
            return Err(malformed(format!("onset out of range: {onset}")));
        }
        match records.last_mut() {
            Some(r) if r.subject == subject => {
                if r.entries.last().is_some_and(|e| onset <= e.onset) {
                    return Err(Error::NonMonotoneTimestamp(subject.to_string()));
                }
                r.entries.push(Entry { word, onset });
            }
            _ => {
                if let Some(prev) = records.last() {
                    finished.insert(prev.subject.clone());
                }
                if finished.contains(subject) {
                    return Err(malformed(format!(
                        "rows for subject {subject} are not contiguous"
                    )));
                }
                records.push(FluencyRecord {
                    subject: subject.to_string(),
                    entries: vec![Entry { word, onset }],
                });
            }
        }
    }
    Ok(records)
}

fn split_list_cell(cell: &str) -> Vec<String> {
    let body = cell.trim();
    let body = body
        .strip_prefix('[')
        .and_then(|b| b.strip_suffix(']'))
        .unwrap_or(body);
    let sep = if body.contains(';') { ';' } else { ',' };
    body.split(sep)
        .map(|t| {
            t.trim()
                .trim_matches(|c| c == '\'' || c == '"')
                .trim()
                .to_string()
        })
        .filter(|t| !t.is_empty())
        .collect()
}

fn parse_lists<R: Read>(reader: R) -> Result<Vec<FluencyRecord>> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    header_check(&mut rdr, &["subject", "words", "timestamps"])?;
    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let malformed = |reason: String| Error::MalformedLine { line, reason };
        if row.len() != 3 {
            return Err(malformed(format!("expected 3 fields, found {}", row.len())));
        }
        let subject = row[0].trim().to_string();
        if subject.is_empty() || !seen.insert(subject.clone()) {
            return Err(malformed(format!("empty or repeated subject {subject:?}")));
        }
        let words = split_list_cell(&row[1]);
        let onsets = split_list_cell(&row[2])
            .into_iter()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| malformed(format!("unparseable onset {t:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if words.len() != onsets.len() {
            return Err(malformed(format!(
                "{} words but {} timestamps",
                words.len(),
                onsets.len()
            )));
        }
        if words.is_empty() {
            continue;
        }
        if onsets.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(malformed("onset out of range".into()));
        }
        let record = FluencyRecord::new(&subject, words.iter().map(String::as_str).zip(onsets))
            .map_err(|e| match e {
                Error::MalformedLine { reason, .. } => malformed(reason),
                other => other,
            })?;
        records.push(record);
    }
    Ok(records)
}

/// Writes records in the long `subject,word,onset_seconds` layout.
pub fn write_corpus<W: Write>(records: &[FluencyRecord], writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["subject", "word", "onset_seconds"])?;
    for r in records {
        for e in &r.entries {
            wtr.write_record([r.subject.as_str(), e.word.as_str(), &e.onset.to_string()])?;
        }
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::{self, CorpusSpec};
    use proptest::prelude::*;

    #[test]
    fn parses_two_line_file() {
        let text = "subject,word,onset_seconds\ns1,cat,0.5\ns1,dog,2.0\n";
        let recs = parse_corpus(text.as_bytes(), CorpusFormat::Long).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].subject, "s1");
        assert_eq!(recs[0].words().collect::<Vec<_>>(), ["cat", "dog"]);
        assert_eq!(recs[0].entries[1].onset, 2.0);
    }

    #[test]
    fn rejects_non_monotone_onsets() {
        let text = "subject,word,onset_seconds\ns1,cat,2.0\ns1,dog,0.5\n";
        assert!(matches!(
            parse_corpus(text.as_bytes(), CorpusFormat::Long),
            Err(Error::NonMonotoneTimestamp(s)) if s == "s1"
        ));
        let equal = "subject,word,onset_seconds\ns1,cat,2.0\ns1,dog,2.0\n";
        assert!(parse_corpus(equal.as_bytes(), CorpusFormat::Long).is_err());
    }

    #[test]
    fn malformed_lines_report_position() {
        let cases = [
            "subject,word,onset_seconds\ns1,cat,0.5\ns1,,1.0\n",
            "subject,word,onset_seconds\ns1,cat,0.5\ns1,dog,soon\n",
            "subject,word,onset_seconds\ns1,cat,0.5\ns1,dog\n",
            "subject,word,onset_seconds\ns1,cat,0.5\ns1,dog,-1\n",
        ];
        for text in cases {
            match parse_corpus(text.as_bytes(), CorpusFormat::Long) {
                Err(Error::MalformedLine { line, .. }) => assert_eq!(line, 3, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        let split = "subject,word,onset_seconds\ns1,cat,0.5\ns2,dog,1\ns1,eel,3\n";
        assert!(matches!(
            parse_corpus(split.as_bytes(), CorpusFormat::Long),
            Err(Error::MalformedLine { line: 4, .. })
        ));
    }

    #[test]
    fn words_are_canonicalised() {
        let text = "subject,word,onset_seconds\ns1,  Cat ,0.5\ns1,DOG,1\n";
        let recs = parse_corpus(text.as_bytes(), CorpusFormat::Long).unwrap();
        assert_eq!(recs[0].words().collect::<Vec<_>>(), ["cat", "dog"]);
    }

    #[test]
    fn parses_list_layout() {
        let text = "subject,words,timestamps\np1,\"['Cat', 'dog', 'eel']\",\"[0.5, 1.25, 3]\"\np2,lion;tiger,0.1;0.9\n";
        let recs = parse_corpus(text.as_bytes(), CorpusFormat::Lists).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].words().collect::<Vec<_>>(), ["cat", "dog", "eel"]);
        assert_eq!(recs[0].entries[2].onset, 3.0);
        assert_eq!(recs[1].words().collect::<Vec<_>>(), ["lion", "tiger"]);
        let mismatch = "subject,words,timestamps\np1,\"['cat','dog']\",[0.5]\n";
        assert!(matches!(
            parse_corpus(mismatch.as_bytes(), CorpusFormat::Lists),
            Err(Error::MalformedLine { line: 2, .. })
        ));
    }

    #[test]
    fn normalisation_examples() {
        let r = FluencyRecord::new("s", [("a", 0.0), ("b", 4.0), ("c", 8.0), ("d", 12.0)]).unwrap();
        let n = normalize_record(&r).unwrap();
        let onsets: Vec<f64> = n.entries.iter().map(|e| e.onset).collect();
        assert_eq!(onsets, [0.0, 1.0, 2.0, 3.0]);
        assert_eq!(r.entries[3].onset, 12.0);

        let one = FluencyRecord::new("s", [("a", 3.0)]).unwrap();
        assert_eq!(normalize_record(&one).unwrap().entries[0].onset, 3.0);

        let empty = FluencyRecord {
            subject: "s".into(),
            entries: vec![],
        };
        assert!(matches!(normalize_record(&empty), Err(Error::EmptyRecord)));
    }

    #[test]
    fn collapse_keeps_first_occurrence() {
        let r = FluencyRecord::new("s", [("a", 0.0), ("b", 1.0), ("a", 2.0), ("c", 3.0)]).unwrap();
        let c = r.collapsed();
        assert_eq!(c.words().collect::<Vec<_>>(), ["a", "b", "c"]);
        assert_eq!(c.entries[2].onset, 3.0);
    }

    #[test]
    fn shuffle_single_word_is_identity() {
        let r = vec![FluencyRecord::new("s", [("a", 1.0)]).unwrap()];
        for seed in 0..20 {
            assert_eq!(shuffle_records(&r, seed), r);
        }
    }

    #[test]
    fn shuffle_two_words_is_fair() {
        let r = vec![FluencyRecord::new("s", [("a", 1.0), ("b", 2.0)]).unwrap()];
        let trials = 10_000;
        let swapped = (0..trials)
            .filter(|&seed| shuffle_records(&r, seed)[0].entries[0].word == "b")
            .count();
        let freq = swapped as f64 / trials as f64;
        assert!((freq - 0.5).abs() <= 0.02, "frequency {freq}");
    }

    #[test]
    fn shuffle_preserves_counts_and_onsets() {
        let recs = synthetic::corpus(&CorpusSpec::default(), 9);
        let shuffled = shuffle_records(&recs, 4);
        let count = |rs: &[FluencyRecord]| {
            let mut m = std::collections::BTreeMap::new();
            for r in rs {
                for w in r.words() {
                    *m.entry(w.to_string()).or_insert(0) += 1;
                }
            }
            m
        };
        assert_eq!(count(&recs), count(&shuffled));
        for (a, b) in recs.iter().zip(&shuffled) {
            let ta: Vec<f64> = a.entries.iter().map(|e| e.onset).collect();
            let tb: Vec<f64> = b.entries.iter().map(|e| e.onset).collect();
            assert_eq!(ta, tb);
        }
        assert_eq!(shuffle_records(&recs, 4), shuffled);
        assert_ne!(shuffle_records(&recs, 5), shuffled);
    }

    proptest! {
        #[test]
        fn parse_emit_round_trip(seed in 0u64..100) {
            let spec = CorpusSpec { subjects: 12, vocabulary: 20, ..CorpusSpec::default() };
            let recs = synthetic::corpus(&spec, seed);
            let mut buf = Vec::new();
            write_corpus(&recs, &mut buf).unwrap();
            let back = parse_corpus(buf.as_slice(), CorpusFormat::Long).unwrap();
            prop_assert_eq!(back, recs);
        }

        #[test]
        fn normalised_gaps_scale_back(seed in 0u64..200) {
            let spec = CorpusSpec { subjects: 3, ..CorpusSpec::default() };
            for r in synthetic::corpus(&spec, seed) {
                let n = normalize_record(&r).unwrap();
                let k = r.len() as f64;
                for i in 1..r.len() {
                    let raw = r.entries[i].onset - r.entries[i - 1].onset;
                    let scaled = (n.entries[i].onset - n.entries[i - 1].onset) * k;
                    prop_assert!((raw - scaled).abs() <= 1e-9 * raw.abs().max(1.0));
                }
            }
        }
    }
}
