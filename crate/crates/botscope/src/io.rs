//! File ingestion: corpus and score streams, lexicons, stop words, and the
//! accounts.csv intermediate that lets later stages skip scoring.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use botscope_core::botsense::{import_scores, BotScore, ScoreDiagnostic};
use botscope_core::corpus::{parse_lines, AccountId, AccountProfile, Corpus, Label, ParserOptions};
use botscope_core::lexsent::{NegativeLexicon, SentimentLexicon};

use crate::pipeline::PipelineError;

fn read_lines(path: &Path) -> Result<Vec<String>, PipelineError> {
    let file = File::open(path)
        .map_err(|e| PipelineError::Io(format!("cannot open {}: {e}", path.display())))?;
    BufReader::new(file)
        .lines()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| PipelineError::Io(format!("cannot read {}: {e}", path.display())))
}

/// Stream and parse the corpus file.
pub fn read_corpus(path: &Path, opts: &ParserOptions) -> Result<Corpus, PipelineError> {
    let lines = read_lines(path)?;
    Ok(parse_lines(lines.iter(), opts))
}

/// Read an external score file against the corpus accounts.
pub fn read_scores(
    path: &Path,
    accounts: &BTreeMap<AccountId, AccountProfile>,
) -> Result<(BTreeMap<AccountId, BotScore>, Vec<ScoreDiagnostic>), PipelineError> {
    let lines = read_lines(path)?;
    import_scores(lines.iter(), accounts)
        .map_err(|e| PipelineError::Domain(format!("{}: {e}", path.display())))
}

pub fn read_negative_lexicon(path: &Path) -> Result<NegativeLexicon, PipelineError> {
    Ok(NegativeLexicon::parse(read_lines(path)?.iter()))
}

pub fn read_sentiment_lexicon(path: &Path) -> Result<(SentimentLexicon, usize), PipelineError> {
    let lines = read_lines(path)?;
    Ok(SentimentLexicon::parse(lines.iter()))
}

pub fn read_stopwords(path: &Path) -> Result<BTreeSet<String>, PipelineError> {
    let mut words = BTreeSet::new();
    for line in read_lines(path)? {
        for token in botscope_core::lexsent::normalize_text(&line) {
            words.insert(token);
        }
    }
    Ok(words)
}

fn parse_label(s: &str) -> Option<Label> {
    match s {
        "H" => Some(Label::Human),
        "B" => Some(Label::Bot),
        "U" => Some(Label::Unknown),
        _ => None,
    }
}

/// Read the `accounts.csv` written by the score stage:
/// `account_id,label,friend,network,temporal,composite` (scores may be empty).
pub fn read_labels_csv(
    path: &Path,
) -> Result<(BTreeMap<AccountId, Label>, BTreeMap<AccountId, BotScore>), PipelineError> {
    let mut labels = BTreeMap::new();
    let mut scores = BTreeMap::new();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| PipelineError::Io(format!("cannot open {}: {e}", path.display())))?;
    for (idx, row) in reader.records().enumerate() {
        let row =
            row.map_err(|e| PipelineError::Io(format!("{}: {e}", path.display())))?;
        let err = |what: &str| {
            PipelineError::Domain(format!(
                "{}: row {}: {what}",
                path.display(),
                idx + 2
            ))
        };
        let account_id: AccountId = row
            .get(0)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| err("bad account id"))?;
        let label = row
            .get(1)
            .and_then(parse_label)
            .ok_or_else(|| err("bad label"))?;
        labels.insert(account_id, label);
        let fields: Vec<&str> = (2..=4).filter_map(|i| row.get(i)).collect();
        if fields.len() == 3 && fields.iter().all(|f| !f.is_empty()) {
            let parse = |s: &str| s.parse::<f64>().ok();
            if let (Some(f), Some(n), Some(t)) =
                (parse(fields[0]), parse(fields[1]), parse(fields[2]))
            {
                let score = BotScore::new(f, n, t).map_err(|e| err(&e.to_string()))?;
                scores.insert(account_id, score);
            }
        }
    }
    if labels.is_empty() {
        return Err(PipelineError::Domain(format!(
            "{}: no account rows",
            path.display()
        )));
    }
    Ok((labels, scores))
}
