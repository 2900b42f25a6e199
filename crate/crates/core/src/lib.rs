//! Core analytics for bot/human cohort studies over a tweet corpus.
//!
//! The crate is `no_std` (alloc required) and fully deterministic: every
//! operation documents its iteration and summation order, so results are
//! byte-stable across runs and across degrees of caller-side parallelism.
//!
//! Pipeline stages, in dependency order:
//!
//! - [`corpus`]: ingest line-delimited records, derive the collection window
//!   and per-account timelines.
//! - [`botsense`]: language-independent per-account sub-scores, Gaussian KDE
//!   in 1-3 dimensions, threshold selection, and bot/human labeling.
//! - [`rtnet`]: retweet multigraph, betweenness/degree tables, cohort-pair
//!   tallies, URL counts.
//! - [`lexsent`]: text normalization, negative-stem matching, happiness-score
//!   sentiment, log-odds discrimination, TF-IDF and truncated SVD.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod botsense;
pub mod corpus;
pub mod lexsent;
pub mod rtnet;
