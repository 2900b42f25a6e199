//! Corpus ingestion: record parsing, validation, indexing, and the
//! per-account groupings every later stage consumes.
//!
//! The input is UTF-8 line-delimited JSON, one tweet per line. Timestamps are
//! accepted both as `YYYY-MM-DD HH:MM:SS` (assumed UTC) and in Twitter's
//! `ccc MMM dd HH:mm:ss ZZZZ yyyy` form; both normalize to UTC seconds.
//! Malformed lines are never fatal: they are skipped and reported as
//! diagnostics so a truncated stream still yields a usable corpus.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use chrono::{DateTime, NaiveDateTime};
use serde::{Deserialize, Serialize};

use crate::botsense::BotScore;

pub type AccountId = u64;
pub type TweetId = u64;
/// UTC seconds since the Unix epoch.
pub type Timestamp = i64;

/// Cohort assignment for an account.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Label {
    Human,
    Bot,
    Unknown,
}

impl Label {
    /// Single-letter form used in tabular output: `H`, `B`, or `U`.
    pub fn letter(self) -> char {
        match self {
            Label::Human => 'H',
            Label::Bot => 'B',
            Label::Unknown => 'U',
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Reference to the original tweet embedded in a retweet record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OriginalRef {
    pub original_tweet_id: TweetId,
    pub original_author_id: AccountId,
    pub original_created_at: Timestamp,
}

/// One tweet as streamed: identity, author, time, text, and (for retweets)
/// the embedded original reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TweetRecord {
    pub tweet_id: TweetId,
    pub author_id: AccountId,
    pub created_at: Timestamp,
    pub text: String,
    pub retweet_of: Option<OriginalRef>,
}

impl TweetRecord {
    pub fn is_retweet(&self) -> bool {
        self.retweet_of.is_some()
    }
}

/// Per-account metadata plus the labeling state filled in by scoring.
#[derive(Debug, Clone, PartialEq)]
pub struct AccountProfile {
    pub account_id: AccountId,
    pub followers_count: u64,
    pub friends_count: u64,
    pub statuses_count: u64,
    pub account_created_at: Timestamp,
    pub label: Label,
    pub sub_scores: Option<BotScore>,
}

/// Span of the streamed collection, `[start, end]` in UTC seconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CollectionWindow {
    pub start: Timestamp,
    pub end: Timestamp,
}

impl CollectionWindow {
    pub fn span_seconds(&self) -> i64 {
        self.end - self.start
    }
}

/// Aggregate counts over one parsed corpus.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CorpusStats {
    pub tweets: u64,
    pub retweets: u64,
    pub accounts: u64,
    pub rejected: u64,
}

/// Why a line was rejected during parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RejectReason {
    /// Line longer than the configured maximum.
    LineTooLong { len: usize, max: usize },
    /// JSON or schema error.
    Malformed(String),
    /// Timestamp string matched neither accepted form.
    BadTimestamp(String),
    /// Embedded original claims to postdate the retweet carrying it.
    OriginalAfterRetweet,
    /// `tweet_id` already seen; first occurrence wins.
    DuplicateTweetId(TweetId),
    /// Record created after the configured collection window end.
    AfterWindowEnd,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::LineTooLong { len, max } => {
                write!(f, "line length {len} exceeds maximum {max}")
            }
            RejectReason::Malformed(e) => write!(f, "malformed record: {e}"),
            RejectReason::BadTimestamp(s) => write!(f, "unparseable timestamp {s:?}"),
            RejectReason::OriginalAfterRetweet => {
                write!(f, "embedded original created after the retweet")
            }
            RejectReason::DuplicateTweetId(id) => write!(f, "duplicate tweet id {id}"),
            RejectReason::AfterWindowEnd => write!(f, "created after the collection window end"),
        }
    }
}

/// One skipped input line: 1-based line number plus the reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub line: usize,
    pub reason: RejectReason,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.reason)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CorpusError {
    /// An operation requiring records was given none.
    EmptyCorpus,
}

impl fmt::Display for CorpusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusError::EmptyCorpus => write!(f, "corpus contains no records"),
        }
    }
}

#[cfg(test)]
impl std::error::Error for CorpusError {}

/// Parser knobs. `window_end`, when set, rejects records created after it.
#[derive(Debug, Clone, Copy)]
pub struct ParserOptions {
    pub max_line_len: usize,
    pub window_end: Option<Timestamp>,
}

impl Default for ParserOptions {
    fn default() -> Self {
        ParserOptions {
            max_line_len: 65536,
            window_end: None,
        }
    }
}

/// Parsed corpus: records in input order, first-seen account profiles,
/// aggregate stats, and per-line rejection diagnostics.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub records: Vec<TweetRecord>,
    pub profiles: BTreeMap<AccountId, AccountProfile>,
    pub stats: CorpusStats,
    pub diagnostics: Vec<ParseDiagnostic>,
}

impl Corpus {
    /// Map tweet id to index into `records`, for resolving embedded originals.
    pub fn tweet_index(&self) -> BTreeMap<TweetId, usize> {
        self.records
            .iter()
            .enumerate()
            .map(|(i, r)| (r.tweet_id, i))
            .collect()
    }
}

// Wire shape of one input line. Field order here is the serialization order,
// so parse -> format -> parse round-trips byte-stable records.
#[derive(Serialize, Deserialize)]
struct RawUser {
    id: u64,
    followers_count: u64,
    friends_count: u64,
    statuses_count: u64,
    created_at: String,
}

#[derive(Serialize, Deserialize)]
struct RawOriginalUser {
    id: u64,
}

#[derive(Serialize, Deserialize)]
struct RawRetweetedStatus {
    id: u64,
    user: RawOriginalUser,
    created_at: String,
}

#[derive(Serialize, Deserialize)]
struct RawRecord {
    id: u64,
    user: RawUser,
    created_at: String,
    text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    retweeted_status: Option<RawRetweetedStatus>,
}

/// Parse a timestamp in either accepted form to UTC seconds.
pub fn parse_timestamp(s: &str) -> Option<Timestamp> {
    if let Ok(dt) = NaiveDateTime::parse_from_str(s, "%Y-%m-%d %H:%M:%S") {
        return Some(dt.and_utc().timestamp());
    }
    // Twitter form, e.g. "Fri Aug 19 15:06:17 +0000 2016".
    if let Ok(dt) = DateTime::parse_from_str(s, "%a %b %d %H:%M:%S %z %Y") {
        return Some(dt.timestamp());
    }
    None
}

/// Render UTC seconds in the canonical `YYYY-MM-DD HH:MM:SS` form.
pub fn format_timestamp(ts: Timestamp) -> String {
    match DateTime::from_timestamp(ts, 0) {
        Some(dt) => dt.format("%Y-%m-%d %H:%M:%S").to_string(),
        None => format!("@{ts}"),
    }
}

/// Parse one line into a record plus the author profile it carries.
pub fn parse_record(line: &str) -> Result<(TweetRecord, AccountProfile), RejectReason> {
    let raw: RawRecord =
        serde_json::from_str(line).map_err(|e| RejectReason::Malformed(e.to_string()))?;
    let created_at =
        parse_timestamp(&raw.created_at).ok_or_else(|| RejectReason::BadTimestamp(raw.created_at.clone()))?;
    let account_created_at = parse_timestamp(&raw.user.created_at)
        .ok_or_else(|| RejectReason::BadTimestamp(raw.user.created_at.clone()))?;
    let retweet_of = match &raw.retweeted_status {
        None => None,
        Some(rs) => {
            let original_created_at = parse_timestamp(&rs.created_at)
                .ok_or_else(|| RejectReason::BadTimestamp(rs.created_at.clone()))?;
            if original_created_at > created_at {
                return Err(RejectReason::OriginalAfterRetweet);
            }
            Some(OriginalRef {
                original_tweet_id: rs.id,
                original_author_id: rs.user.id,
                original_created_at,
            })
        }
    };
    let record = TweetRecord {
        tweet_id: raw.id,
        author_id: raw.user.id,
        created_at,
        text: raw.text,
        retweet_of,
    };
    let profile = AccountProfile {
        account_id: raw.user.id,
        followers_count: raw.user.followers_count,
        friends_count: raw.user.friends_count,
        statuses_count: raw.user.statuses_count,
        account_created_at,
        label: Label::Unknown,
        sub_scores: None,
    };
    Ok((record, profile))
}

/// Render a record (with its author profile) back to the input line format.
pub fn format_record(record: &TweetRecord, profile: &AccountProfile) -> String {
    let raw = RawRecord {
        id: record.tweet_id,
        user: RawUser {
            id: record.author_id,
            followers_count: profile.followers_count,
            friends_count: profile.friends_count,
            statuses_count: profile.statuses_count,
            created_at: format_timestamp(profile.account_created_at),
        },
        created_at: format_timestamp(record.created_at),
        text: record.text.clone(),
        retweeted_status: record.retweet_of.as_ref().map(|o| RawRetweetedStatus {
            id: o.original_tweet_id,
            user: RawOriginalUser {
                id: o.original_author_id,
            },
            created_at: format_timestamp(o.original_created_at),
        }),
    };
    serde_json::to_string(&raw).expect("record serialization cannot fail")
}

/// Parse a stream of lines into a [`Corpus`].
///
/// Records are kept in input order. The first occurrence of a `tweet_id`
/// wins; later duplicates are rejected. Account metadata is taken from the
/// account's first record. Empty lines are ignored entirely.
pub fn parse_lines<I, S>(lines: I, opts: &ParserOptions) -> Corpus
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut corpus = Corpus::default();
    let mut seen_ids: BTreeMap<TweetId, ()> = BTreeMap::new();
    for (idx, line) in lines.into_iter().enumerate() {
        let line = line.as_ref();
        if line.trim().is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let reject = |corpus: &mut Corpus, reason: RejectReason| {
            corpus.stats.rejected += 1;
            corpus.diagnostics.push(ParseDiagnostic {
                line: lineno,
                reason,
            });
        };
        if line.len() > opts.max_line_len {
            reject(
                &mut corpus,
                RejectReason::LineTooLong {
                    len: line.len(),
                    max: opts.max_line_len,
                },
            );
            continue;
        }
        let (record, profile) = match parse_record(line) {
            Ok(v) => v,
            Err(reason) => {
                reject(&mut corpus, reason);
                continue;
            }
        };
        if let Some(end) = opts.window_end {
            if record.created_at > end {
                reject(&mut corpus, RejectReason::AfterWindowEnd);
                continue;
            }
        }
        if seen_ids.insert(record.tweet_id, ()).is_some() {
            reject(&mut corpus, RejectReason::DuplicateTweetId(record.tweet_id));
            continue;
        }
        corpus.stats.tweets += 1;
        if record.is_retweet() {
            corpus.stats.retweets += 1;
        }
        corpus.profiles.entry(record.author_id).or_insert(profile);
        corpus.records.push(record);
    }
    corpus.stats.accounts = corpus.profiles.len() as u64;
    corpus
}

/// Collection window spanned by the records' own timestamps (embedded
/// original timestamps are excluded). A single-instant corpus is widened by
/// one second so downstream rate features never divide by zero.
pub fn collection_window(records: &[TweetRecord]) -> Result<CollectionWindow, CorpusError> {
    let mut it = records.iter();
    let first = it.next().ok_or(CorpusError::EmptyCorpus)?;
    let mut start = first.created_at;
    let mut end = first.created_at;
    for r in it {
        start = start.min(r.created_at);
        end = end.max(r.created_at);
    }
    if start == end {
        end = start + 1;
    }
    Ok(CollectionWindow { start, end })
}

/// Group records per author, each timeline sorted by `(created_at, tweet_id)`.
///
/// The sort key makes the grouping a pure function of the record *set*:
/// permuting the input yields identical output.
pub fn group_by_account(records: &[TweetRecord]) -> BTreeMap<AccountId, Vec<&TweetRecord>> {
    let mut groups: BTreeMap<AccountId, Vec<&TweetRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(r.author_id).or_default().push(r);
    }
    for timeline in groups.values_mut() {
        timeline.sort_by_key(|r| (r.created_at, r.tweet_id));
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(id: u64, user: u64, created: &str, text: &str) -> String {
        format!(
            r#"{{"id":{id},"user":{{"id":{user},"followers_count":10,"friends_count":20,"statuses_count":30,"created_at":"2015-01-01 00:00:00"}},"created_at":"{created}","text":"{text}"}}"#
        )
    }

    fn rt_line(id: u64, user: u64, created: &str, orig: (u64, u64, &str)) -> String {
        format!(
            r#"{{"id":{id},"user":{{"id":{user},"followers_count":1,"friends_count":2,"statuses_count":3,"created_at":"2015-01-01 00:00:00"}},"created_at":"{created}","text":"rt","retweeted_status":{{"id":{},"user":{{"id":{}}},"created_at":"{}"}}}}"#,
            orig.0, orig.1, orig.2
        )
    }

    #[test]
    fn both_timestamp_forms_agree() {
        let a = parse_timestamp("2016-08-19 15:06:17").unwrap();
        let b = parse_timestamp("Fri Aug 19 15:06:17 +0000 2016").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, 1471619177);
        assert_eq!(parse_timestamp("2016-08-22 02:13:35").unwrap(), 1471832015);
        assert!(parse_timestamp("not a time").is_none());
    }

    #[test]
    fn timestamp_roundtrip() {
        let ts = 1471619177;
        assert_eq!(parse_timestamp(&format_timestamp(ts)).unwrap(), ts);
    }

    #[test]
    fn empty_input_yields_zero_stats() {
        let corpus = parse_lines(Vec::<&str>::new(), &ParserOptions::default());
        assert_eq!(corpus.stats, CorpusStats::default());
        assert!(corpus.records.is_empty());
        assert!(corpus.profiles.is_empty());
    }

    #[test]
    fn malformed_line_is_skipped_with_diagnostic() {
        let lines = [
            line(1, 100, "2016-08-19 15:06:17", "hola"),
            "{not json".to_string(),
            line(2, 100, "2016-08-19 15:07:00", "otra"),
        ];
        let corpus = parse_lines(lines.iter(), &ParserOptions::default());
        assert_eq!(corpus.records.len(), 2);
        assert_eq!(corpus.stats.tweets, 2);
        assert_eq!(corpus.stats.rejected, 1);
        assert_eq!(corpus.diagnostics.len(), 1);
        assert_eq!(corpus.diagnostics[0].line, 2);
    }

    #[test]
    fn duplicate_tweet_id_keeps_first() {
        let lines = [
            line(7, 100, "2016-08-19 15:06:17", "primero"),
            line(7, 200, "2016-08-19 15:07:00", "segundo"),
        ];
        let corpus = parse_lines(lines.iter(), &ParserOptions::default());
        assert_eq!(corpus.records.len(), 1);
        assert_eq!(corpus.records[0].author_id, 100);
        assert_eq!(corpus.stats.rejected, 1);
        assert!(matches!(
            corpus.diagnostics[0].reason,
            RejectReason::DuplicateTweetId(7)
        ));
    }

    #[test]
    fn over_long_line_rejected() {
        let opts = ParserOptions {
            max_line_len: 32,
            window_end: None,
        };
        let corpus = parse_lines([line(1, 1, "2016-08-19 15:06:17", "x")].iter(), &opts);
        assert_eq!(corpus.stats.tweets, 0);
        assert!(matches!(
            corpus.diagnostics[0].reason,
            RejectReason::LineTooLong { .. }
        ));
    }

    #[test]
    fn window_end_rejects_late_records() {
        let opts = ParserOptions {
            max_line_len: 65536,
            window_end: Some(parse_timestamp("2016-08-22 02:13:35").unwrap()),
        };
        let lines = [
            line(1, 1, "2016-08-22 02:13:35", "on time"),
            line(2, 1, "2016-08-22 02:13:36", "late"),
        ];
        let corpus = parse_lines(lines.iter(), &opts);
        assert_eq!(corpus.stats.tweets, 1);
        assert!(matches!(
            corpus.diagnostics[0].reason,
            RejectReason::AfterWindowEnd
        ));
    }

    #[test]
    fn retweet_original_must_not_postdate() {
        let lines = [rt_line(
            1,
            1,
            "2016-08-19 15:06:17",
            (99, 5, "2016-08-19 15:06:18"),
        )];
        let corpus = parse_lines(lines.iter(), &ParserOptions::default());
        assert_eq!(corpus.stats.tweets, 0);
        assert!(matches!(
            corpus.diagnostics[0].reason,
            RejectReason::OriginalAfterRetweet
        ));
    }

    #[test]
    fn retweets_counted() {
        let lines = [
            line(1, 1, "2016-08-19 15:06:17", "orig"),
            rt_line(2, 2, "2016-08-19 16:00:00", (1, 1, "2016-08-19 15:06:17")),
        ];
        let corpus = parse_lines(lines.iter(), &ParserOptions::default());
        assert_eq!(corpus.stats.tweets, 2);
        assert_eq!(corpus.stats.retweets, 1);
        assert_eq!(corpus.stats.accounts, 2);
    }

    #[test]
    fn window_single_record_widened() {
        let corpus = parse_lines(
            [line(1, 1, "2016-08-19 15:06:17", "solo")].iter(),
            &ParserOptions::default(),
        );
        let w = collection_window(&corpus.records).unwrap();
        assert_eq!(w.start, 1471619177);
        assert_eq!(w.end, 1471619178);
    }

    #[test]
    fn window_two_records() {
        let lines = [
            line(1, 1, "2016-08-19 15:06:17", "a"),
            line(2, 1, "2016-08-22 02:13:35", "b"),
        ];
        let corpus = parse_lines(lines.iter(), &ParserOptions::default());
        let w = collection_window(&corpus.records).unwrap();
        assert_eq!((w.start, w.end), (1471619177, 1471832015));
        assert_eq!(w.span_seconds(), 212838);
    }

    #[test]
    fn window_empty_errors() {
        assert_eq!(collection_window(&[]), Err(CorpusError::EmptyCorpus));
    }

    #[test]
    fn grouping_sorts_and_breaks_ties_by_id() {
        let lines = [
            line(9, 1, "2016-08-19 17:00:00", "c"),
            line(7, 1, "2016-08-19 15:00:00", "b"),
            line(3, 1, "2016-08-19 15:00:00", "a"),
        ];
        let corpus = parse_lines(lines.iter(), &ParserOptions::default());
        let groups = group_by_account(&corpus.records);
        let ids: Vec<u64> = groups[&1].iter().map(|r| r.tweet_id).collect();
        assert_eq!(ids, [3, 7, 9]);
    }

    #[test]
    fn record_roundtrip_is_identical() {
        let lines = [
            line(1, 1, "2016-08-19 15:06:17", "orig"),
            rt_line(2, 2, "2016-08-19 16:00:00", (1, 1, "2016-08-19 15:06:17")),
        ];
        let corpus = parse_lines(lines.iter(), &ParserOptions::default());
        for r in &corpus.records {
            let serialized = format_record(r, &corpus.profiles[&r.author_id]);
            let (back, profile) = parse_record(&serialized).unwrap();
            assert_eq!(&back, r);
            assert_eq!(&profile, &corpus.profiles[&r.author_id]);
        }
    }
}
