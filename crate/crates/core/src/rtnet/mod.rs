//! Retweet-network construction and cohort accounting.
//!
//! Edges run retweeter -> original author (the information-credit direction;
//! recorded in output metadata since the choice is a convention). The
//! multigraph keeps one edge per retweet record; the simple view collapses
//! parallel edges into multiplicities and is what centrality runs on.

pub mod betweenness;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::corpus::{AccountId, CollectionWindow, Label, Timestamp, TweetId, TweetRecord};
pub use betweenness::{betweenness, BetweennessProblem, GraphView, SOURCE_CHUNK};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RtnetError {
    /// Normalized betweenness needs at least 3 nodes.
    TooFewNodes { got: usize },
}

impl fmt::Display for RtnetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RtnetError::TooFewNodes { got } => {
                write!(f, "normalized betweenness needs >= 3 nodes, got {got}")
            }
        }
    }
}

#[cfg(test)]
impl std::error::Error for RtnetError {}

/// One retweet event: who credited whom, when, and through which record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetweetEdge {
    pub tweet_id: TweetId,
    pub retweeter: AccountId,
    pub author: AccountId,
    pub created_at: Timestamp,
}

/// Directed retweet multigraph over labeled accounts.
///
/// Nodes are exactly the accounts participating in retweet events, as
/// retweeter or as original author; accounts that never touch a retweet are
/// not part of the network. Multi-edges are kept sorted by `tweet_id`, so the
/// graph is a pure function of the record set.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RetweetGraph {
    pub nodes: BTreeMap<AccountId, Label>,
    pub edges: Vec<RetweetEdge>,
    /// `(retweeter, author) -> multiplicity` over `edges`.
    pub simple: BTreeMap<(AccountId, AccountId), u64>,
}

impl RetweetGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn multi_edge_count(&self) -> u64 {
        self.edges.len() as u64
    }

    pub fn simple_edge_count(&self) -> usize {
        self.simple.len()
    }

    /// Sub-network of events whose original author and retweeter carry the
    /// given labels. Nodes are the endpoints of the surviving edges.
    pub fn filter_by_labels(&self, author: Label, retweeter: Label) -> RetweetGraph {
        let edges: Vec<RetweetEdge> = self
            .edges
            .iter()
            .filter(|e| {
                self.nodes.get(&e.author) == Some(&author)
                    && self.nodes.get(&e.retweeter) == Some(&retweeter)
            })
            .copied()
            .collect();
        from_edges(edges, &self.nodes)
    }
}

fn from_edges(edges: Vec<RetweetEdge>, labels: &BTreeMap<AccountId, Label>) -> RetweetGraph {
    let mut nodes = BTreeMap::new();
    let mut simple: BTreeMap<(AccountId, AccountId), u64> = BTreeMap::new();
    for e in &edges {
        for id in [e.retweeter, e.author] {
            nodes
                .entry(id)
                .or_insert_with(|| labels.get(&id).copied().unwrap_or(Label::Unknown));
        }
        *simple.entry((e.retweeter, e.author)).or_insert(0) += 1;
    }
    RetweetGraph {
        nodes,
        edges,
        simple,
    }
}

/// Build the retweet network from the corpus and a labeling.
///
/// Accounts appearing only as original authors (including authors of
/// originals created before the collection window) become nodes too;
/// self-retweets are kept as self-loops.
pub fn build_retweet_network(
    records: &[TweetRecord],
    labels: &BTreeMap<AccountId, Label>,
) -> RetweetGraph {
    let mut edges: Vec<RetweetEdge> = records
        .iter()
        .filter_map(|r| {
            r.retweet_of.as_ref().map(|o| RetweetEdge {
                tweet_id: r.tweet_id,
                retweeter: r.author_id,
                author: o.original_author_id,
                created_at: r.created_at,
            })
        })
        .collect();
    edges.sort_by_key(|e| e.tweet_id);
    from_edges(edges, labels)
}

/// One row of a centrality or degree table.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityRow {
    pub account_id: AccountId,
    pub value: f64,
    pub label: Label,
}

/// Rows sorted by value descending, ties by account id ascending.
pub type CentralityTable = Vec<CentralityRow>;

pub(crate) fn sort_table(mut rows: CentralityTable) -> CentralityTable {
    rows.sort_by(|a, b| {
        b.value
            .total_cmp(&a.value)
            .then(a.account_id.cmp(&b.account_id))
    });
    rows
}

/// Raw retweet-degree table: per account, the number of multi-edges whose
/// original author it is (how many times its tweets were retweeted). Every
/// node appears, including pure retweeters at zero.
pub fn degree_table(graph: &RetweetGraph) -> CentralityTable {
    let mut counts: BTreeMap<AccountId, u64> = graph.nodes.keys().map(|&id| (id, 0)).collect();
    for e in &graph.edges {
        *counts.get_mut(&e.author).expect("edge endpoints are nodes") += 1;
    }
    sort_table(
        counts
            .into_iter()
            .map(|(account_id, c)| CentralityRow {
                account_id,
                value: c as f64,
                label: graph.nodes[&account_id],
            })
            .collect(),
    )
}

/// Retweet events binned by `(original author, retweeter)` cohort.
///
/// Field names follow the author-then-retweeter convention: `bh` counts
/// tweets created by bots and retweeted by humans.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RetweetTally {
    pub hh: u64,
    pub hb: u64,
    pub bh: u64,
    pub bb: u64,
    /// Retweets whose original predates the collection window, or with an
    /// unlabeled endpoint. Routed here, never dropped, so the four pair
    /// counts plus `missing` always equal the corpus retweet count.
    pub missing: u64,
}

impl RetweetTally {
    pub fn total(&self) -> u64 {
        self.hh + self.hb + self.bh + self.bb + self.missing
    }

    /// Retweets of human-created tweets.
    pub fn humans_retweeted(&self) -> u64 {
        self.hh + self.hb
    }

    /// Retweets of bot-created tweets.
    pub fn bots_retweeted(&self) -> u64 {
        self.bh + self.bb
    }
}

/// Classify every retweet record into the four cohort pairs plus `missing`.
pub fn classify_retweets(
    records: &[TweetRecord],
    labels: &BTreeMap<AccountId, Label>,
    window: &CollectionWindow,
) -> RetweetTally {
    let mut tally = RetweetTally::default();
    for r in records {
        let Some(original) = &r.retweet_of else {
            continue;
        };
        if original.original_created_at < window.start {
            tally.missing += 1;
            continue;
        }
        let author = labels
            .get(&original.original_author_id)
            .copied()
            .unwrap_or(Label::Unknown);
        let retweeter = labels.get(&r.author_id).copied().unwrap_or(Label::Unknown);
        match (author, retweeter) {
            (Label::Human, Label::Human) => tally.hh += 1,
            (Label::Human, Label::Bot) => tally.hb += 1,
            (Label::Bot, Label::Human) => tally.bh += 1,
            (Label::Bot, Label::Bot) => tally.bb += 1,
            _ => tally.missing += 1,
        }
    }
    tally
}

/// Counts of `http`-bearing tweets per author cohort.
///
/// `direct` scans each record's own text; `embedded` additionally scans the
/// text of the original tweet a retweet points at, when that original is
/// itself in the corpus. Both hits attribute to the record's author cohort
/// and are reported separately because the two conventions can differ
/// substantially on retweet-heavy corpora.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct UrlCounts {
    pub human_direct: u64,
    pub bot_direct: u64,
    pub human_embedded: u64,
    pub bot_embedded: u64,
}

impl UrlCounts {
    pub fn human_total(&self) -> u64 {
        self.human_direct + self.human_embedded
    }

    pub fn bot_total(&self) -> u64 {
        self.bot_direct + self.bot_embedded
    }
}

/// Count tweets containing the case-sensitive substring `http`, per cohort.
pub fn url_counts(
    records: &[TweetRecord],
    labels: &BTreeMap<AccountId, Label>,
    scan_embedded: bool,
) -> UrlCounts {
    let index: BTreeMap<TweetId, &str> = records
        .iter()
        .map(|r| (r.tweet_id, r.text.as_str()))
        .collect();
    let mut counts = UrlCounts::default();
    for r in records {
        let cohort = labels.get(&r.author_id).copied().unwrap_or(Label::Unknown);
        if r.text.contains("http") {
            match cohort {
                Label::Human => counts.human_direct += 1,
                Label::Bot => counts.bot_direct += 1,
                Label::Unknown => {}
            }
        }
        if scan_embedded {
            if let Some(original) = &r.retweet_of {
                if let Some(text) = index.get(&original.original_tweet_id) {
                    if text.contains("http") {
                        match cohort {
                            Label::Human => counts.human_embedded += 1,
                            Label::Bot => counts.bot_embedded += 1,
                            Label::Unknown => {}
                        }
                    }
                }
            }
        }
    }
    counts
}
