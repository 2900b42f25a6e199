//! Lexical and sentiment analysis over normalized Spanish tweet text.

pub mod logodds;
pub mod negative;
pub mod normalize;
pub mod sentiment;
pub mod svd;
pub mod tfidf;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::corpus::{AccountId, Label, TweetId, TweetRecord};
pub use logodds::{log_odds, LogOddsRow};
pub use negative::{
    match_negative, negativity_partition, MatchMode, NegativeLexicon, NegativityCounts,
    NegativityPartition,
};
pub use normalize::normalize_text;
pub use sentiment::{delta_grid, labmt_sentiment, sentiment_sweep, SentimentLexicon, SweepRow};
pub use svd::{truncated_svd, DenseMatrix, LinearOp, SvdOptions, SvdResult};
pub use tfidf::{tfidf, TfIdfMatrix};

#[derive(Debug, Clone, PartialEq)]
pub enum LexsentError {
    /// The neutral-band half-width must be non-negative.
    NegativeDelta(f64),
    /// Log-odds needs at least one token on each side.
    EmptyCohort { cohort: &'static str },
    /// Every document normalized (and stop-filtered) to nothing.
    AllDocumentsEmpty,
    /// Requested rank exceeds the matrix's smaller dimension, or is zero.
    BadRank { k: usize, min_dim: usize },
    /// Convergence tolerance must be strictly positive.
    BadTolerance(f64),
    /// SVD iteration did not converge; carries the last singular-value drift.
    NoConvergence { residual: f64, max_iter: usize },
}

impl fmt::Display for LexsentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LexsentError::NegativeDelta(d) => write!(f, "delta_h must be >= 0, got {d}"),
            LexsentError::EmptyCohort { cohort } => {
                write!(f, "{cohort} cohort has no tokens")
            }
            LexsentError::AllDocumentsEmpty => write!(f, "all documents are empty"),
            LexsentError::BadRank { k, min_dim } => {
                write!(f, "rank {k} outside [1, {min_dim}]")
            }
            LexsentError::BadTolerance(t) => write!(f, "tolerance must be > 0, got {t}"),
            LexsentError::NoConvergence { residual, max_iter } => write!(
                f,
                "svd did not converge within {max_iter} iterations (last drift {residual:e})"
            ),
        }
    }
}

#[cfg(test)]
impl std::error::Error for LexsentError {}

/// Per-cohort bags of normalized words.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CohortWordCounts {
    pub human: BTreeMap<String, u64>,
    pub bot: BTreeMap<String, u64>,
    pub human_total: u64,
    pub bot_total: u64,
}

impl CohortWordCounts {
    /// Union of both cohorts' words, in lexicographic order.
    pub fn vocabulary(&self) -> Vec<&String> {
        let mut words: Vec<&String> = self.human.keys().chain(self.bot.keys()).collect();
        words.sort();
        words.dedup();
        words
    }

    /// Swap the two cohorts; used to test the log-odds sign convention.
    pub fn swapped(&self) -> CohortWordCounts {
        CohortWordCounts {
            human: self.bot.clone(),
            bot: self.human.clone(),
            human_total: self.bot_total,
            bot_total: self.human_total,
        }
    }
}

/// Pool normalized word counts per author cohort.
///
/// Retweet records are skipped unless `include_retweets`; with
/// `include_embedded`, the text of an in-corpus original a retweet points at
/// is also counted, attributed to the retweet's own author cohort (the same
/// attribution the URL counts use). Unknown-labeled authors never contribute.
pub fn cohort_word_counts(
    records: &[TweetRecord],
    labels: &BTreeMap<AccountId, Label>,
    include_retweets: bool,
    include_embedded: bool,
) -> CohortWordCounts {
    let index: BTreeMap<TweetId, &str> = records
        .iter()
        .map(|r| (r.tweet_id, r.text.as_str()))
        .collect();
    let mut counts = CohortWordCounts::default();
    for r in records {
        if r.is_retweet() && !include_retweets {
            continue;
        }
        let cohort = labels.get(&r.author_id).copied().unwrap_or(Label::Unknown);
        let (map, total) = match cohort {
            Label::Human => (&mut counts.human, &mut counts.human_total),
            Label::Bot => (&mut counts.bot, &mut counts.bot_total),
            Label::Unknown => continue,
        };
        let add_text = |text: &str, map: &mut BTreeMap<String, u64>, total: &mut u64| {
            for token in normalize_text(text) {
                *map.entry(token).or_insert(0) += 1;
                *total += 1;
            }
        };
        add_text(&r.text, map, total);
        if include_embedded {
            if let Some(original) = &r.retweet_of {
                if let Some(text) = index.get(&original.original_tweet_id) {
                    add_text(text, map, total);
                }
            }
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn rec(id: u64, author: u64, text: &str, orig: Option<(u64, u64)>) -> TweetRecord {
        TweetRecord {
            tweet_id: id,
            author_id: author,
            created_at: 100 + id as i64,
            text: text.to_string(),
            retweet_of: orig.map(|(oid, oauthor)| crate::corpus::OriginalRef {
                original_tweet_id: oid,
                original_author_id: oauthor,
                original_created_at: 50,
            }),
        }
    }

    #[test]
    fn cohort_counts_split_by_author_label() {
        let labels: BTreeMap<u64, Label> =
            [(1, Label::Human), (2, Label::Bot)].into_iter().collect();
        let records = vec![
            rec(1, 1, "guerra sucia", None),
            rec(2, 2, "informe oficial", None),
            rec(3, 3, "sin etiqueta", None),
        ];
        let counts = cohort_word_counts(&records, &labels, true, false);
        assert_eq!(counts.human_total, 2);
        assert_eq!(counts.bot_total, 2);
        assert_eq!(counts.human[&"guerra".to_string()], 1);
        assert!(!counts.human.contains_key("sin"));
    }

    #[test]
    fn retweets_and_embedded_toggles() {
        let labels: BTreeMap<u64, Label> =
            [(1, Label::Human), (2, Label::Bot)].into_iter().collect();
        let records = vec![
            rec(1, 1, "masacre documentada", None),
            rec(2, 2, "difundan esto", Some((1, 1))),
        ];
        let without_rt = cohort_word_counts(&records, &labels, false, false);
        assert_eq!(without_rt.bot_total, 0);
        let with_rt = cohort_word_counts(&records, &labels, true, false);
        assert_eq!(with_rt.bot_total, 2);
        let embedded = cohort_word_counts(&records, &labels, true, true);
        // The original's words count again, under the retweeter's cohort.
        assert_eq!(embedded.bot_total, 4);
        assert_eq!(embedded.bot[&"masacre".to_string()], 1);
    }
}
