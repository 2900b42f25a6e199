//! Negative-stem lexicon and the two-pass matching procedure.
//!
//! Stems are compared as prefixes against each token, grouped by first
//! letter. A second pass retries every token with its first character
//! removed, so a stray leading punctuation mark or typo does not hide an
//! otherwise clear match. A token contributes at most one to the count no
//! matter how many stems or passes hit it.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::corpus::{AccountId, Label, TweetRecord};
use crate::lexsent::normalize_text;

/// Stems transcribed from the hand-coded list of negative-feeling words; a
/// trailing `*` marks entries truncated to cover inflected forms.
pub const BUILTIN_STEMS: &str = "\
arma
asesin*
asesinat*
bala
balazo
brutal
cartel
castigo
corrupcion
corrupt
crimen
criminal
culpable
delincuen*
dispara
disparos
ejecucion
ejecut*
exterminio
fals*
genocidio
guerra
incendia
jode*
jodid*
levanton
maltrat*
masacre
matanza
matar
mentir
muerte
pistola
represion
represiv*
sangriento
sanguinari*
secuestro
tortura
violacion
violenta
";

/// How stems are compared against tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatchMode {
    /// Every stem is a prefix test, starred or not.
    #[default]
    Prefix,
    /// Starred stems prefix-match; unstarred stems require equality.
    ExactUnstarred,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Stem {
    text: String,
    prefix_open: bool,
}

/// Negative-stem lexicon, indexed by first letter.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NegativeLexicon {
    by_first: BTreeMap<u8, Vec<Stem>>,
    len: usize,
}

impl NegativeLexicon {
    /// Parse one stem per line; a trailing `*` marks the stem prefix-open.
    /// Lines are folded through the same normalization as tweet text; lines
    /// that normalize to nothing (or to several tokens) are skipped.
    pub fn parse<I, S>(lines: I) -> NegativeLexicon
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut lexicon = NegativeLexicon::default();
        for line in lines {
            let line = line.as_ref().trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (body, prefix_open) = match line.strip_suffix('*') {
                Some(b) => (b, true),
                None => (line, false),
            };
            let tokens = normalize_text(body);
            let [token] = tokens.as_slice() else {
                continue;
            };
            lexicon.insert(token.clone(), prefix_open);
        }
        lexicon
    }

    /// The transcribed built-in stem list.
    pub fn builtin() -> NegativeLexicon {
        NegativeLexicon::parse(BUILTIN_STEMS.lines())
    }

    fn insert(&mut self, text: String, prefix_open: bool) {
        let first = text.as_bytes()[0];
        let bucket = self.by_first.entry(first).or_default();
        let stem = Stem { text, prefix_open };
        if !bucket.contains(&stem) {
            bucket.push(stem);
            self.len += 1;
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Iterate stems as `(text, prefix_open)` in first-letter order.
    pub fn stems(&self) -> impl Iterator<Item = (&str, bool)> {
        self.by_first
            .values()
            .flatten()
            .map(|s| (s.text.as_str(), s.prefix_open))
    }

    fn single_pass(&self, token: &str, mode: MatchMode) -> bool {
        let Some(&first) = token.as_bytes().first() else {
            return false;
        };
        let Some(bucket) = self.by_first.get(&first) else {
            return false;
        };
        bucket.iter().any(|stem| match mode {
            MatchMode::Prefix => token.starts_with(stem.text.as_str()),
            MatchMode::ExactUnstarred => {
                if stem.prefix_open {
                    token.starts_with(stem.text.as_str())
                } else {
                    token == stem.text
                }
            }
        })
    }

    /// Does the token match in either pass?
    pub fn matches_token(&self, token: &str, mode: MatchMode) -> bool {
        if self.single_pass(token, mode) {
            return true;
        }
        // Second pass: drop the first character of tokens of length >= 2.
        let mut chars = token.char_indices();
        if chars.next().is_some() {
            if let Some((second, _)) = chars.next() {
                return self.single_pass(&token[second..], mode);
            }
        }
        false
    }
}

/// Count tokens matching the lexicon; at most one per token.
pub fn match_negative(tokens: &[String], lexicon: &NegativeLexicon, mode: MatchMode) -> usize {
    tokens
        .iter()
        .filter(|t| lexicon.matches_token(t, mode))
        .count()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NegativityCounts {
    pub negative: u64,
    pub non_negative: u64,
}

impl NegativityCounts {
    fn add(&mut self, negative: bool) {
        if negative {
            self.negative += 1;
        } else {
            self.non_negative += 1;
        }
    }

    pub fn total(&self) -> u64 {
        self.negative + self.non_negative
    }
}

/// Negative / non-negative tweet counts split by author cohort and by
/// original-vs-retweet status. A tweet is negative when it has at least one
/// lexicon match (any positive per-match constant yields the same split).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NegativityPartition {
    pub human_original: NegativityCounts,
    pub human_retweet: NegativityCounts,
    pub bot_original: NegativityCounts,
    pub bot_retweet: NegativityCounts,
}

impl NegativityPartition {
    pub fn human(&self) -> NegativityCounts {
        NegativityCounts {
            negative: self.human_original.negative + self.human_retweet.negative,
            non_negative: self.human_original.non_negative + self.human_retweet.non_negative,
        }
    }

    pub fn bot(&self) -> NegativityCounts {
        NegativityCounts {
            negative: self.bot_original.negative + self.bot_retweet.negative,
            non_negative: self.bot_original.non_negative + self.bot_retweet.non_negative,
        }
    }

    pub fn overall(&self) -> NegativityCounts {
        let (h, b) = (self.human(), self.bot());
        NegativityCounts {
            negative: h.negative + b.negative,
            non_negative: h.non_negative + b.non_negative,
        }
    }
}

/// Classify every labeled tweet as negative or not.
pub fn negativity_partition(
    records: &[TweetRecord],
    labels: &BTreeMap<AccountId, Label>,
    lexicon: &NegativeLexicon,
    mode: MatchMode,
) -> NegativityPartition {
    let mut partition = NegativityPartition::default();
    for r in records {
        let cohort = labels.get(&r.author_id).copied().unwrap_or(Label::Unknown);
        let bucket = match (cohort, r.is_retweet()) {
            (Label::Human, false) => &mut partition.human_original,
            (Label::Human, true) => &mut partition.human_retweet,
            (Label::Bot, false) => &mut partition.bot_original,
            (Label::Bot, true) => &mut partition.bot_retweet,
            (Label::Unknown, _) => continue,
        };
        let tokens = normalize_text(&r.text);
        bucket.add(match_negative(&tokens, lexicon, mode) > 0);
    }
    partition
}
