//! Language-independent bot-likelihood scoring and labeling.
//!
//! Accounts are scored on three sub-signals (friend, network, temporal), each
//! in `[0,1]` with higher values more bot-like. Scores may be imported from
//! an external classifier file or computed here from the corpus alone. The
//! composite score's density is estimated with a Gaussian KDE and the
//! bot/human threshold defaults to the valley between the two main modes.
//!
//! The computed sub-scores are artifact definitions: corpus-derivable proxies
//! for the metadata, graph, and timing signals an external supervised
//! classifier would use. They are not a reimplementation of any such service.

pub mod kde;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::{AccountId, AccountProfile, CollectionWindow, Label, Timestamp, TweetRecord};
pub use kde::{kde, kernel_tables, scott_bandwidth, DensityGrid, KernelTables};

/// Default grid resolution per dimensionality, chosen to keep the 3D grid's
/// memory and evaluation cost proportionate to its plotting fidelity.
pub const GRID_1D: usize = 256;
pub const GRID_2D: usize = 64;
pub const GRID_3D: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub enum BotsenseError {
    /// A score component was non-finite or outside `[0,1]`.
    ScoreOutOfRange { field: &'static str, value: f64 },
    /// A score file yielded no usable entries.
    NoValidScores,
    /// Operation needs more sample points than were provided.
    TooFewPoints { needed: usize, got: usize },
    /// KDE supports 1-3 dimensions only.
    UnsupportedDims(usize),
    /// Sample point outside the unit hypercube.
    PointOutOfRange { index: usize, dim: usize, value: f64 },
    /// Bandwidths must be strictly positive.
    BandwidthNotPositive { dim: usize },
    /// A point row's length disagrees with the bandwidth dimensionality.
    DimMismatch { index: usize, expected: usize, got: usize },
    /// Grid needs at least two points per axis.
    GridTooSmall(usize),
    /// Density grid failed its mass/positivity check.
    BadDensityMass(f64),
}

impl fmt::Display for BotsenseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BotsenseError::ScoreOutOfRange { field, value } => {
                write!(f, "score component {field} = {value} outside [0,1]")
            }
            BotsenseError::NoValidScores => write!(f, "score file contained no valid entries"),
            BotsenseError::TooFewPoints { needed, got } => {
                write!(f, "need at least {needed} points, got {got}")
            }
            BotsenseError::UnsupportedDims(d) => write!(f, "unsupported dimensionality {d}"),
            BotsenseError::PointOutOfRange { index, dim, value } => {
                write!(f, "point {index} dim {dim} = {value} outside [0,1]")
            }
            BotsenseError::BandwidthNotPositive { dim } => {
                write!(f, "bandwidth for dim {dim} not positive")
            }
            BotsenseError::DimMismatch {
                index,
                expected,
                got,
            } => write!(f, "point {index} has {got} dims, expected {expected}"),
            BotsenseError::GridTooSmall(g) => write!(f, "grid needs >= 2 points per axis, got {g}"),
            BotsenseError::BadDensityMass(m) => {
                write!(f, "density mass {m} outside tolerated [0.90, 1.02]")
            }
        }
    }
}

#[cfg(test)]
impl std::error::Error for BotsenseError {}

/// Per-account sub-scores plus their arithmetic-mean composite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BotScore {
    pub friend: f64,
    pub network: f64,
    pub temporal: f64,
    pub composite: f64,
}

impl BotScore {
    /// Build from the three sub-scores; the composite is always recomputed
    /// here so it cannot drift from its definition.
    pub fn new(friend: f64, network: f64, temporal: f64) -> Result<Self, BotsenseError> {
        for (field, value) in [
            ("friend", friend),
            ("network", network),
            ("temporal", temporal),
        ] {
            if !value.is_finite() || !(0.0..=1.0).contains(&value) {
                return Err(BotsenseError::ScoreOutOfRange { field, value });
            }
        }
        Ok(BotScore {
            friend,
            network,
            temporal,
            composite: (friend + network + temporal) / 3.0,
        })
    }
}

/// Where the labeling threshold came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdProvenance {
    /// Fallback or configured constant.
    Fixed,
    /// Valley between the two dominant density modes.
    Valley,
    /// Supplied by the caller alongside imported scores.
    Imported,
}

impl fmt::Display for ThresholdProvenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ThresholdProvenance::Fixed => "fixed",
            ThresholdProvenance::Valley => "valley",
            ThresholdProvenance::Imported => "imported",
        };
        write!(f, "{s}")
    }
}

/// Labeling rule applied against the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelPolicy {
    /// Bot iff the composite score clears the threshold.
    Composite,
    /// Bot iff every sub-score clears the threshold.
    AllThree,
}

/// Outcome of labeling: one label per account plus the threshold used.
#[derive(Debug, Clone)]
pub struct LabelReport {
    pub labels: BTreeMap<AccountId, Label>,
    pub tau: f64,
    pub provenance: ThresholdProvenance,
    pub policy: LabelPolicy,
    pub bots: u64,
    pub humans: u64,
    pub unknown: u64,
}

/// Problems found while importing a score file; none are fatal.
#[derive(Debug, Clone, PartialEq)]
pub enum ScoreDiagnostic {
    Malformed { line: usize, error: String },
    Clamped { line: usize, account_id: AccountId, field: &'static str },
    UnknownAccount { line: usize, account_id: AccountId },
}

impl fmt::Display for ScoreDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScoreDiagnostic::Malformed { line, error } => {
                write!(f, "line {line}: malformed score entry: {error}")
            }
            ScoreDiagnostic::Clamped {
                line,
                account_id,
                field,
            } => write!(f, "line {line}: account {account_id} {field} clamped into [0,1]"),
            ScoreDiagnostic::UnknownAccount { line, account_id } => {
                write!(f, "line {line}: account {account_id} not present in corpus")
            }
        }
    }
}

/// Wire shape of one score-file line.
#[derive(Serialize, Deserialize)]
pub struct RawScore {
    pub account_id: AccountId,
    pub friend: f64,
    pub network: f64,
    pub temporal: f64,
}

/// Render one score entry in the score-file line format.
pub fn format_score_line(account_id: AccountId, score: &BotScore) -> String {
    serde_json::to_string(&RawScore {
        account_id,
        friend: score.friend,
        network: score.network,
        temporal: score.temporal,
    })
    .expect("score serialization cannot fail")
}

/// Import externally produced scores, one JSON entry per line.
///
/// Out-of-range finite components are clamped into `[0,1]` with a diagnostic;
/// non-finite components make the whole entry malformed. Entries for accounts
/// absent from `accounts` are skipped with a diagnostic. Errors only when no
/// entry survives.
pub fn import_scores<I, S>(
    lines: I,
    accounts: &BTreeMap<AccountId, AccountProfile>,
) -> Result<(BTreeMap<AccountId, BotScore>, Vec<ScoreDiagnostic>), BotsenseError>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut scores = BTreeMap::new();
    let mut diagnostics = Vec::new();
    for (idx, line) in lines.into_iter().enumerate() {
        let line = line.as_ref();
        if line.trim().is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let raw: RawScore = match serde_json::from_str(line) {
            Ok(r) => r,
            Err(e) => {
                diagnostics.push(ScoreDiagnostic::Malformed {
                    line: lineno,
                    error: e.to_string(),
                });
                continue;
            }
        };
        if !accounts.contains_key(&raw.account_id) {
            diagnostics.push(ScoreDiagnostic::UnknownAccount {
                line: lineno,
                account_id: raw.account_id,
            });
            continue;
        }
        let mut malformed = false;
        let mut clamp = |field: &'static str, value: f64| -> f64 {
            if !value.is_finite() {
                malformed = true;
                return 0.0;
            }
            let clamped = value.clamp(0.0, 1.0);
            if clamped != value {
                diagnostics.push(ScoreDiagnostic::Clamped {
                    line: lineno,
                    account_id: raw.account_id,
                    field,
                });
            }
            clamped
        };
        let friend = clamp("friend", raw.friend);
        let network = clamp("network", raw.network);
        let temporal = clamp("temporal", raw.temporal);
        if malformed {
            diagnostics.push(ScoreDiagnostic::Malformed {
                line: lineno,
                error: "non-finite score component".to_string(),
            });
            continue;
        }
        let score = BotScore::new(friend, network, temporal).expect("clamped scores are valid");
        scores.insert(raw.account_id, score);
    }
    if scores.is_empty() {
        return Err(BotsenseError::NoValidScores);
    }
    Ok((scores, diagnostics))
}

/// Posting-regularity score from inter-tweet gap entropy.
///
/// Gaps are floored at one second, taken in base-2 logarithm, and histogrammed
/// into 16 equal-width bins over the account's own log-gap range. The score is
/// `1 - H/log2(16)`: perfectly regular posting (all gaps in one bin) scores
/// 1.0, maximally spread gaps score 0.0. Timelines with fewer than 3 tweets
/// are undetermined and score 0.5.
pub fn temporal_score(timeline: &[&TweetRecord], _window: &CollectionWindow) -> f64 {
    const BINS: usize = 16;
    if timeline.len() < 3 {
        return 0.5;
    }
    let log_gaps: Vec<f64> = timeline
        .windows(2)
        .map(|w| {
            let gap = (w[1].created_at - w[0].created_at).max(1);
            libm::log2(gap as f64)
        })
        .collect();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &g in &log_gaps {
        lo = lo.min(g);
        hi = hi.max(g);
    }
    if hi == lo {
        return 1.0;
    }
    let mut counts = [0u64; BINS];
    for &g in &log_gaps {
        let bin = (((g - lo) / (hi - lo)) * BINS as f64) as usize;
        counts[bin.min(BINS - 1)] += 1;
    }
    let total = log_gaps.len() as f64;
    let mut entropy = 0.0;
    for &c in &counts {
        if c > 0 {
            let p = c as f64 / total;
            entropy -= p * libm::log2(p);
        }
    }
    (1.0 - entropy / libm::log2(BINS as f64)).clamp(0.0, 1.0)
}

/// `(retweeter, original author)` pairs for every retweet record, in record
/// order. Shared input for [`network_score`] and the retweet graph.
pub fn retweet_pairs(records: &[TweetRecord]) -> Vec<(AccountId, AccountId)> {
    records
        .iter()
        .filter_map(|r| r.retweet_of.as_ref().map(|o| (r.author_id, o.original_author_id)))
        .collect()
}

/// Partner-diversity score over retweet interactions.
///
/// With `k` interactions the account took part in (as retweeter or as
/// retweeted author; a self-retweet counts once) and `u` distinct
/// counterparts, the score is `1 - u/k`. Repeatedly interacting with few
/// partners scores bot-like; an account with no interactions is undetermined
/// at 0.5.
pub fn network_score(account: AccountId, pairs: &[(AccountId, AccountId)]) -> f64 {
    let mut interactions = 0u64;
    let mut partners: BTreeSet<AccountId> = BTreeSet::new();
    for &(retweeter, author) in pairs {
        if retweeter == account {
            interactions += 1;
            partners.insert(author);
        } else if author == account {
            interactions += 1;
            partners.insert(retweeter);
        }
    }
    if interactions == 0 {
        return 0.5;
    }
    1.0 - partners.len() as f64 / interactions as f64
}

/// Corpus-level moments backing [`friend_score`]'s z-scores.
///
/// Standard deviations use the population denominator `n`, so a two-account
/// corpus z-scores to exactly plus/minus one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FriendStats {
    pub rate_mean: f64,
    pub rate_sd: f64,
    pub ratio_mean: f64,
    pub ratio_sd: f64,
}

/// Tweet rate (statuses per day of account age, age floored at one day) and
/// log follower/friend ratio for one profile.
pub fn friend_inputs(profile: &AccountProfile, window_end: Timestamp) -> (f64, f64) {
    let age_days = ((window_end - profile.account_created_at) as f64 / 86_400.0).max(1.0);
    let rate = profile.statuses_count as f64 / age_days;
    let ratio = libm::log(
        (profile.followers_count as f64 + 1.0) / (profile.friends_count as f64 + 1.0),
    );
    (rate, ratio)
}

impl FriendStats {
    /// Moments over every profile that will be scored, in map order.
    pub fn compute(
        profiles: &BTreeMap<AccountId, AccountProfile>,
        window_end: Timestamp,
    ) -> FriendStats {
        let n = profiles.len().max(1) as f64;
        let mut rate_sum = 0.0;
        let mut ratio_sum = 0.0;
        for p in profiles.values() {
            let (rate, ratio) = friend_inputs(p, window_end);
            rate_sum += rate;
            ratio_sum += ratio;
        }
        let rate_mean = rate_sum / n;
        let ratio_mean = ratio_sum / n;
        let mut rate_var = 0.0;
        let mut ratio_var = 0.0;
        for p in profiles.values() {
            let (rate, ratio) = friend_inputs(p, window_end);
            rate_var += (rate - rate_mean) * (rate - rate_mean);
            ratio_var += (ratio - ratio_mean) * (ratio - ratio_mean);
        }
        FriendStats {
            rate_mean,
            rate_sd: libm::sqrt(rate_var / n),
            ratio_mean,
            ratio_sd: libm::sqrt(ratio_var / n),
        }
    }
}

fn zscore(x: f64, mean: f64, sd: f64) -> f64 {
    if sd > 0.0 {
        (x - mean) / sd
    } else {
        0.0
    }
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + libm::exp(-x))
}

/// Metadata score: high posting rate relative to the corpus combined with a
/// low follower/friend ratio scores bot-like. Zero-variance corpora force all
/// z-scores (and hence every score) to the neutral 0.5.
pub fn friend_score(profile: &AccountProfile, stats: &FriendStats, window_end: Timestamp) -> f64 {
    let (rate, ratio) = friend_inputs(profile, window_end);
    let z_rate = zscore(rate, stats.rate_mean, stats.rate_sd);
    let z_ratio = zscore(ratio, stats.ratio_mean, stats.ratio_sd);
    logistic(z_rate - z_ratio)
}

/// Compute proxy sub-scores for every profiled account, keyed and evaluated
/// in ascending account order.
pub fn compute_scores(
    records: &[TweetRecord],
    profiles: &BTreeMap<AccountId, AccountProfile>,
    window: &CollectionWindow,
) -> BTreeMap<AccountId, BotScore> {
    let timelines = crate::corpus::group_by_account(records);
    let pairs = retweet_pairs(records);
    let stats = FriendStats::compute(profiles, window.end);
    let empty: Vec<&TweetRecord> = Vec::new();
    profiles
        .iter()
        .map(|(&id, profile)| {
            let timeline = timelines.get(&id).unwrap_or(&empty);
            let score = BotScore::new(
                friend_score(profile, &stats, window.end),
                network_score(id, &pairs),
                temporal_score(timeline, window),
            )
            .expect("sub-scores are within [0,1] by construction");
            (id, score)
        })
        .collect()
}

/// Threshold from the valley of the composite-score density.
///
/// A 256-point KDE is evaluated over `[0,1]`; if it has two or more strict
/// local maxima, the threshold is the grid position of the minimum density
/// strictly between the two highest maxima (density ties resolve toward the
/// lower grid index). Unimodal densities fall back to 0.5.
pub fn valley_threshold(
    composites: &[f64],
) -> Result<(f64, ThresholdProvenance), BotsenseError> {
    if composites.len() < 2 {
        return Err(BotsenseError::TooFewPoints {
            needed: 2,
            got: composites.len(),
        });
    }
    let points: Vec<Vec<f64>> = composites.iter().map(|&c| alloc::vec![c]).collect();
    let bandwidths = scott_bandwidth(&points)?;
    let grid = kde::kde(&points, GRID_1D, &bandwidths)?;
    let v = &grid.values;
    let mut maxima: Vec<usize> = Vec::new();
    for i in 0..v.len() {
        let left_ok = i == 0 || v[i] > v[i - 1];
        let right_ok = i + 1 == v.len() || v[i] > v[i + 1];
        if left_ok && right_ok {
            maxima.push(i);
        }
    }
    if maxima.len() < 2 {
        return Ok((0.5, ThresholdProvenance::Fixed));
    }
    // Two highest maxima; ties toward the lower index.
    maxima.sort_by(|&a, &b| v[b].partial_cmp(&v[a]).unwrap().then(a.cmp(&b)));
    let (mut lo, mut hi) = (maxima[0], maxima[1]);
    if lo > hi {
        core::mem::swap(&mut lo, &mut hi);
    }
    let mut valley = lo + 1;
    for i in (lo + 1)..hi {
        if v[i] < v[valley] {
            valley = i;
        }
    }
    Ok((grid.coord(valley), ThresholdProvenance::Valley))
}

/// Assign labels against the threshold. Accounts without scores stay
/// `Unknown` and are excluded from cohort statistics.
pub fn label_accounts(
    accounts: &BTreeMap<AccountId, AccountProfile>,
    scores: &BTreeMap<AccountId, BotScore>,
    tau: f64,
    provenance: ThresholdProvenance,
    policy: LabelPolicy,
) -> LabelReport {
    let mut labels = BTreeMap::new();
    let (mut bots, mut humans, mut unknown) = (0u64, 0u64, 0u64);
    for &id in accounts.keys() {
        let label = match scores.get(&id) {
            None => Label::Unknown,
            Some(s) => {
                let decisive = match policy {
                    LabelPolicy::Composite => s.composite,
                    LabelPolicy::AllThree => s.friend.min(s.network).min(s.temporal),
                };
                if decisive >= tau {
                    Label::Bot
                } else {
                    Label::Human
                }
            }
        };
        match label {
            Label::Bot => bots += 1,
            Label::Human => humans += 1,
            Label::Unknown => unknown += 1,
        }
        labels.insert(id, label);
    }
    LabelReport {
        labels,
        tau,
        provenance,
        policy,
        bots,
        humans,
        unknown,
    }
}
