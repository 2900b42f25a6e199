//! Smoothed log-odds word discrimination between the two cohorts.
//!
//! With vocabulary size `V` and cohort token totals `N`, a word scores
//! `ln[((c_bot+1)/(N_bot+V)) / ((c_human+1)/(N_human+V))]`; positive is
//! bot-leaning. The additive smoothing keeps every score finite even on
//! disjoint vocabularies. Scores are computed as a difference of per-cohort
//! log terms, which makes the cohort-swap antisymmetry exact in floating
//! point, not just up to rounding.

use alloc::string::String;
use alloc::vec::Vec;

use super::{CohortWordCounts, LexsentError};

/// One scored word with its raw cohort counts.
#[derive(Debug, Clone, PartialEq)]
pub struct LogOddsRow {
    pub word: String,
    pub score: f64,
    pub count_bot: u64,
    pub count_human: u64,
}

/// Score every vocabulary word, sorted most bot-leaning first (ties by word).
pub fn log_odds(counts: &CohortWordCounts) -> Result<Vec<LogOddsRow>, LexsentError> {
    if counts.bot_total == 0 {
        return Err(LexsentError::EmptyCohort { cohort: "bot" });
    }
    if counts.human_total == 0 {
        return Err(LexsentError::EmptyCohort { cohort: "human" });
    }
    let vocabulary = counts.vocabulary();
    let v = vocabulary.len() as f64;
    let bot_denom = libm::log(counts.bot_total as f64 + v);
    let human_denom = libm::log(counts.human_total as f64 + v);
    let mut rows: Vec<LogOddsRow> = vocabulary
        .into_iter()
        .map(|word| {
            let count_bot = counts.bot.get(word).copied().unwrap_or(0);
            let count_human = counts.human.get(word).copied().unwrap_or(0);
            let bot_term = libm::log(count_bot as f64 + 1.0) - bot_denom;
            let human_term = libm::log(count_human as f64 + 1.0) - human_denom;
            LogOddsRow {
                word: word.clone(),
                score: bot_term - human_term,
                count_bot,
                count_human,
            }
        })
        .collect();
    rows.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.word.cmp(&b.word)));
    Ok(rows)
}
