//! TF-IDF bag-of-words with unit-normalized document rows.
//!
//! `tf` is the raw in-document count and `idf(t) = ln((1+N)/(1+df(t))) + 1`,
//! so a term present in every document is weighted by exactly 1. Rows are
//! kept sparse; empty documents stay as all-zero rows so row indices remain
//! aligned with the input.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::svd::LinearOp;
use super::LexsentError;

/// Sparse document-term matrix with L2-normalized rows.
#[derive(Debug, Clone, PartialEq)]
pub struct TfIdfMatrix {
    /// Vocabulary in lexicographic order; column `j` is `vocabulary[j]`.
    pub vocabulary: Vec<String>,
    /// Per document: `(column, weight)` sorted by column.
    pub rows: Vec<Vec<(u32, f64)>>,
}

impl TfIdfMatrix {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.vocabulary.len()
    }
}

impl LinearOp for TfIdfMatrix {
    fn n_rows(&self) -> usize {
        self.rows.len()
    }

    fn n_cols(&self) -> usize {
        self.vocabulary.len()
    }

    fn mul_vec(&self, v: &[f64], out: &mut [f64]) {
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc = 0.0;
            for &(j, w) in row {
                acc += w * v[j as usize];
            }
            out[i] = acc;
        }
    }

    fn t_mul_vec(&self, u: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for (i, row) in self.rows.iter().enumerate() {
            let ui = u[i];
            for &(j, w) in row {
                out[j as usize] += w * ui;
            }
        }
    }
}

/// Build the TF-IDF matrix over already-normalized documents.
///
/// Stop words, when given, are removed before anything is counted. Errors
/// only when every document ends up empty.
pub fn tfidf(
    documents: &[Vec<String>],
    stopwords: Option<&BTreeSet<String>>,
) -> Result<TfIdfMatrix, LexsentError> {
    let keep = |token: &String| stopwords.is_none_or(|s| !s.contains(token));
    let mut vocabulary_set: BTreeSet<&String> = BTreeSet::new();
    for doc in documents {
        for token in doc.iter().filter(|t| keep(t)) {
            vocabulary_set.insert(token);
        }
    }
    if vocabulary_set.is_empty() {
        return Err(LexsentError::AllDocumentsEmpty);
    }
    let vocabulary: Vec<String> = vocabulary_set.iter().map(|&t| t.clone()).collect();
    let column: BTreeMap<&String, u32> = vocabulary_set
        .iter()
        .enumerate()
        .map(|(j, &t)| (t, j as u32))
        .collect();

    let n_docs = documents.len() as f64;
    let mut df = vec![0u64; vocabulary.len()];
    let mut doc_counts: Vec<BTreeMap<u32, u64>> = Vec::with_capacity(documents.len());
    for doc in documents {
        let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
        for token in doc.iter().filter(|t| keep(t)) {
            *counts.entry(column[token]).or_insert(0) += 1;
        }
        for &j in counts.keys() {
            df[j as usize] += 1;
        }
        doc_counts.push(counts);
    }

    let idf: Vec<f64> = df
        .iter()
        .map(|&d| libm::log((1.0 + n_docs) / (1.0 + d as f64)) + 1.0)
        .collect();

    let rows = doc_counts
        .into_iter()
        .map(|counts| {
            let mut row: Vec<(u32, f64)> = counts
                .into_iter()
                .map(|(j, tf)| (j, tf as f64 * idf[j as usize]))
                .collect();
            let norm = libm::sqrt(row.iter().map(|&(_, w)| w * w).sum::<f64>());
            if norm > 0.0 {
                for (_, w) in &mut row {
                    *w /= norm;
                }
            }
            row
        })
        .collect();

    Ok(TfIdfMatrix { vocabulary, rows })
}
