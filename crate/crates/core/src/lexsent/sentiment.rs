//! Happiness-score sentiment with neutral-band filtering.
//!
//! The lexicon maps words to mean happiness ratings on a 1-9 scale with 5
//! neutral. `h_avg` is the count-weighted mean rating over the words a corpus
//! shares with the lexicon, after excluding words whose rating lies within
//! `delta_h` of neutral; sweeping `delta_h` shows how sentiment shifts as the
//! near-neutral bulk is filtered away.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::{CohortWordCounts, LexsentError};
use crate::lexsent::normalize_text;

const NEUTRAL: f64 = 5.0;

/// Word -> happiness score in `[1, 9]`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SentimentLexicon {
    scores: BTreeMap<String, f64>,
}

impl SentimentLexicon {
    /// Parse tab-separated `word<TAB>score` lines.
    ///
    /// Words are folded through the tweet normalization so lexicon entries
    /// with diacritics meet normalized tokens; when two entries collide after
    /// folding, the first wins. Returns the lexicon and the number of lines
    /// skipped (blank, malformed, score outside `[1, 9]`, or collisions).
    pub fn parse<I, S>(lines: I) -> (SentimentLexicon, usize)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut scores = BTreeMap::new();
        let mut skipped = 0;
        for line in lines {
            let line = line.as_ref().trim_end();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.splitn(2, '\t');
            let entry = (|| {
                let word = parts.next()?;
                let score: f64 = parts.next()?.trim().parse().ok()?;
                if !(1.0..=9.0).contains(&score) {
                    return None;
                }
                let tokens = normalize_text(word);
                let [token] = tokens.as_slice() else {
                    return None;
                };
                Some((token.clone(), score))
            })();
            match entry {
                Some((word, score)) => match scores.entry(word) {
                    alloc::collections::btree_map::Entry::Vacant(slot) => {
                        slot.insert(score);
                    }
                    alloc::collections::btree_map::Entry::Occupied(_) => skipped += 1,
                },
                None => skipped += 1,
            }
        }
        (SentimentLexicon { scores }, skipped)
    }

    pub fn get(&self, word: &str) -> Option<f64> {
        self.scores.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// Count-weighted mean happiness over lexicon words at least `delta_h` away
/// from neutral. `None` when no counted word survives the filter.
pub fn labmt_sentiment(
    counts: &BTreeMap<String, u64>,
    lexicon: &SentimentLexicon,
    delta_h: f64,
) -> Result<Option<f64>, LexsentError> {
    if !(delta_h >= 0.0) {
        return Err(LexsentError::NegativeDelta(delta_h));
    }
    let mut weighted = 0.0;
    let mut total = 0u64;
    for (word, &count) in counts {
        if count == 0 {
            continue;
        }
        if let Some(h) = lexicon.get(word) {
            if libm::fabs(h - NEUTRAL) >= delta_h {
                weighted += h * count as f64;
                total += count;
            }
        }
    }
    Ok((total > 0).then(|| weighted / total as f64))
}

/// One sweep row; `None` cells mean no word survived the filter.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub delta_h: f64,
    pub h_human: Option<f64>,
    pub h_bot: Option<f64>,
}

/// Evenly spaced filter grid, `start + i*step` up to and including `end`
/// (within a half-step slack so `0..3.0 by 0.1` has exactly 31 rows).
pub fn delta_grid(start: f64, end: f64, step: f64) -> Vec<f64> {
    let n = ((end - start) / step + 0.5) as usize;
    (0..=n).map(|i| start + i as f64 * step).collect()
}

/// Cohort sentiment at every grid value.
pub fn sentiment_sweep(
    counts: &CohortWordCounts,
    lexicon: &SentimentLexicon,
    grid: &[f64],
) -> Result<Vec<SweepRow>, LexsentError> {
    grid.iter()
        .map(|&delta_h| {
            Ok(SweepRow {
                delta_h,
                h_human: labmt_sentiment(&counts.human, lexicon, delta_h)?,
                h_bot: labmt_sentiment(&counts.bot, lexicon, delta_h)?,
            })
        })
        .collect()
}
