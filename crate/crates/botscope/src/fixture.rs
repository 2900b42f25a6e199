//! Deterministic synthetic-corpus generator.
//!
//! Given a set of aggregate targets (tweet/account/bot totals, the retweet
//! cohort tallies, URL counts, and optionally the retweet-network shape), the
//! generator lays out accounts, originals, and retweet events so that running
//! the pipeline over the emitted files recovers every target exactly. All
//! counting is closed-form; the seeded RNG only colors metadata, phrasing,
//! and score jitter, so targets hold for every seed.
//!
//! Terminology: classes are named by (original author cohort, retweeter
//! cohort), e.g. `bh` = bot-created, human-retweeted. With graph-shape
//! targets, each class gets disjoint author/retweeter account pools sized so
//! that node and simple-edge counts land exactly; without them, layout is
//! free-form and in-window retweets may point at originals that are not in
//! the corpus (which the record format allows, and which keeps URL accounting
//! trivially exact).

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use botscope_core::botsense::{format_score_line, BotScore};
use botscope_core::corpus::{format_record, AccountId, AccountProfile, Label, TweetRecord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Collection window matching the studied stream.
pub const DEFAULT_WINDOW: (i64, i64) = (1_471_619_177, 1_471_832_015);

const NEGATIVE_PHRASES: &[&str] = &[
    "fue una masacre confirmada",
    "exigen castigo por la tortura",
    "ejecucion extrajudicial documentada",
    "crimen de estado sin culpables",
    "la matanza quedo impune",
    "denuncian represion brutal",
    "guerra sucia contra civiles",
    "corrupcion y mentiras oficiales",
    "disparos contra detenidos",
    "violacion grave de derechos",
];

const NEUTRAL_PHRASES: &[&str] = &[
    "lean el informe completo",
    "comparte la nota con todos",
    "nuevo reporte disponible hoy",
    "sigue la cobertura en vivo",
    "atencion a este documento",
    "difunde la informacion oficial",
    "resumen de la jornada",
    "los datos del caso aqui",
];

/// How the `missing` retweets split across cohort pairs (same author-then-
/// retweeter naming as the tally).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MissingSplit {
    pub hh: u64,
    pub hb: u64,
    pub bh: u64,
    pub bb: u64,
}

impl MissingSplit {
    pub fn total(&self) -> u64 {
        self.hh + self.hb + self.bh + self.bb
    }
}

/// Retweet-network shape targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphTargets {
    pub nodes: u64,
    pub simple_edges: u64,
    /// Humans-retweeting-bots sub-network.
    pub hrb_nodes: u64,
    pub hrb_edges: u64,
    /// Bots-retweeting-bots sub-network.
    pub brb_nodes: u64,
    pub brb_edges: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixtureTargets {
    pub tweets: u64,
    pub accounts: u64,
    pub bots: u64,
    pub retweets: u64,
    pub hh: u64,
    pub hb: u64,
    pub bh: u64,
    pub bb: u64,
    pub missing: u64,
    pub missing_split: MissingSplit,
    pub bot_authored: u64,
    /// URL-count targets under embedded scanning.
    pub url_human: u64,
    pub url_bot: u64,
    pub graph: Option<GraphTargets>,
    pub window: (i64, i64),
    pub seed: u64,
}

impl Default for FixtureTargets {
    /// The published aggregate numbers for the studied hashtag stream.
    fn default() -> Self {
        FixtureTargets {
            tweets: 20_854,
            accounts: 9_730,
            bots: 1_803,
            retweets: 12_905,
            hh: 9_896,
            hb: 848,
            bh: 1_450,
            bb: 76,
            missing: 635,
            // Chosen so retweeter-side totals match the stream's 11895
            // human-issued and 1010 bot-issued retweets.
            missing_split: MissingSplit {
                hh: 399,
                hb: 80,
                bh: 150,
                bb: 6,
            },
            bot_authored: 4_153,
            url_human: 17_474,
            url_bot: 4_736,
            graph: Some(GraphTargets {
                nodes: 6_528,
                simple_edges: 10_011,
                hrb_nodes: 1_550,
                hrb_edges: 1_596,
                brb_nodes: 92,
                brb_edges: 80,
            }),
            window: DEFAULT_WINDOW,
            seed: 2016,
        }
    }
}

#[derive(Debug)]
pub enum FixtureError {
    /// Targets violate a required identity; the message names it.
    Inconsistent(String),
    Io(std::io::Error),
}

impl fmt::Display for FixtureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixtureError::Inconsistent(m) => write!(f, "inconsistent targets: {m}"),
            FixtureError::Io(e) => write!(f, "io: {e}"),
        }
    }
}

impl std::error::Error for FixtureError {}

/// Generated fixture, one line per record.
#[derive(Debug)]
pub struct Fixture {
    pub corpus_lines: Vec<String>,
    pub score_lines: Vec<String>,
}

fn err(msg: impl Into<String>) -> FixtureError {
    FixtureError::Inconsistent(msg.into())
}

fn check(cond: bool, msg: impl Into<String>) -> Result<(), FixtureError> {
    if cond {
        Ok(())
    } else {
        Err(err(msg))
    }
}

/// Distinct `(src, dst)` index pairs covering every pool member on both
/// sides, deterministic order: a diagonal sweep for coverage, then a
/// lexicographic fill.
fn cross_pairs(n_src: u64, n_dst: u64, count: u64) -> Result<Vec<(u32, u32)>, FixtureError> {
    if count == 0 {
        return Ok(Vec::new());
    }
    check(
        n_src >= 1 && n_dst >= 1,
        format!("{count} pairs requested over an empty pool"),
    )?;
    check(
        count >= n_src.max(n_dst),
        format!(
            "cannot cover {n_src}x{n_dst} pool members with only {count} distinct pairs"
        ),
    )?;
    check(
        count <= n_src * n_dst,
        format!("{count} distinct pairs exceed the {n_src}x{n_dst} capacity"),
    )?;
    let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(count as usize);
    let mut seen: BTreeSet<(u32, u32)> = BTreeSet::new();
    for i in 0..n_src.max(n_dst) {
        let pair = ((i % n_src) as u32, (i % n_dst) as u32);
        if seen.insert(pair) {
            pairs.push(pair);
        }
    }
    'fill: for si in 0..n_src as u32 {
        for di in 0..n_dst as u32 {
            if pairs.len() as u64 == count {
                break 'fill;
            }
            if seen.insert((si, di)) {
                pairs.push((si, di));
            }
        }
    }
    debug_assert_eq!(pairs.len() as u64, count);
    Ok(pairs)
}

/// One retweet-event class: cohort pair, event counts, pools, URL routing.
struct ClassPlan {
    retweeter_cohort: Label,
    in_window: u64,
    missing: u64,
    /// Distinct simple edges to lay out.
    simple: u64,
    authors: Vec<AccountId>,
    retweeters: Vec<AccountId>,
    /// In-window events routed to the author's URL-bearing original.
    embedded_routed: u64,
    /// Authors carry a URL original next to their base original.
    dual_originals: bool,
}

struct Layout {
    classes: Vec<ClassPlan>,
    /// Per cohort: accounts holding the untargeted originals, cycled.
    human_untargeted_holders: Vec<AccountId>,
    bot_untargeted_holders: Vec<AccountId>,
    human_orig: u64,
    bot_orig: u64,
    /// URL flags on untargeted originals per cohort.
    x_human: u64,
    x_bot: u64,
    /// URL flags on retweet records per retweeter cohort.
    url_rts_human: u64,
    url_rts_bot: u64,
    /// Whether in-window events target in-corpus originals.
    real_targets: bool,
}

fn validate_and_plan(t: &FixtureTargets) -> Result<Layout, FixtureError> {
    check(t.bots <= t.accounts, "bots must not exceed accounts")?;
    let humans = t.accounts - t.bots;
    let tally_sum = t.hh + t.hb + t.bh + t.bb + t.missing;
    check(
        tally_sum == t.retweets,
        format!("hh+hb+bh+bb+missing = {tally_sum} but retweets = {}", t.retweets),
    )?;
    check(
        t.missing_split.total() == t.missing,
        format!(
            "missing split sums to {} but missing = {}",
            t.missing_split.total(),
            t.missing
        ),
    )?;
    check(t.retweets <= t.tweets, "retweets must not exceed tweets")?;
    check(
        t.bot_authored <= t.tweets,
        "bot-authored must not exceed tweets",
    )?;
    check(t.window.0 < t.window.1, "window start must precede end")?;

    let m_bh = t.bh + t.missing_split.bh;
    let m_bb = t.bb + t.missing_split.bb;
    let m_hb = t.hb + t.missing_split.hb;
    let m_hh = t.hh + t.missing_split.hh;
    let bot_rts = m_hb + m_bb;
    let human_rts = m_bh + m_hh;
    check(
        bot_rts <= t.bot_authored,
        format!("bot-retweeted events ({bot_rts}) exceed bot-authored ({})", t.bot_authored),
    )?;
    let human_authored = t.tweets - t.bot_authored;
    check(
        human_rts <= human_authored,
        format!("human-retweeted events ({human_rts}) exceed human-authored ({human_authored})"),
    )?;
    let bot_orig = t.bot_authored - bot_rts;
    let human_orig = human_authored - human_rts;
    if t.bots > 0 {
        check(
            t.bot_authored >= t.bots,
            "every bot account needs at least one authored record",
        )?;
    } else {
        check(t.bot_authored == 0, "bot-authored records without bot accounts")?;
        check(
            m_bh + m_bb + m_hb == 0 && t.url_bot == 0,
            "bot-side targets without bot accounts",
        )?;
    }
    if humans > 0 {
        check(
            human_authored >= humans,
            "every human account needs at least one authored record",
        )?;
    } else {
        check(human_authored == 0, "human-authored records without human accounts")?;
        check(
            m_hh + m_hb + m_bh == 0 && t.url_human == 0,
            "human-side targets without human accounts",
        )?;
    }

    let bot_ids: Vec<AccountId> = (1..=t.bots).collect();
    let human_ids: Vec<AccountId> = (t.bots + 1..=t.accounts).collect();

    if let Some(g) = &t.graph {
        plan_with_graph(
            t, g, humans, bot_orig, human_orig, m_bh, m_bb, m_hb, m_hh, &bot_ids, &human_ids,
        )
    } else {
        plan_free_form(
            t, humans, bot_orig, human_orig, m_bh, m_bb, m_hb, m_hh, &bot_ids, &human_ids,
        )
    }
}

#[allow(clippy::too_many_arguments)]
fn plan_with_graph(
    t: &FixtureTargets,
    g: &GraphTargets,
    humans: u64,
    bot_orig: u64,
    human_orig: u64,
    m_bh: u64,
    m_bb: u64,
    m_hb: u64,
    m_hh: u64,
    bot_ids: &[AccountId],
    human_ids: &[AccountId],
) -> Result<Layout, FixtureError> {
    let s_bh = g.hrb_edges;
    check(
        s_bh <= m_bh && (m_bh == 0) == (s_bh == 0),
        format!("hrb_edges = {s_bh} vs {m_bh} bot-author/human-retweeter events"),
    )?;
    let s_bb = g.brb_edges;
    check(
        s_bb <= m_bb && (m_bb == 0) == (s_bb == 0),
        format!("brb_edges = {s_bb} vs {m_bb} bot/bot events"),
    )?;
    check(
        g.simple_edges >= s_bh + s_bb,
        "simple_edges smaller than the filtered sub-network edges",
    )?;
    let rem = g.simple_edges - s_bh - s_bb;
    let s_hb = if m_hb == 0 {
        0
    } else {
        ((rem * m_hb) / (m_hb + m_hh)).clamp(1, m_hb.min(rem))
    };
    let s_hh = rem - s_hb;
    check(
        s_hh <= m_hh && (m_hh == 0) == (s_hh == 0),
        format!("remaining simple edges ({s_hh}) cannot be laid over {m_hh} human/human events"),
    )?;

    // Pool sizes; the divisors set hub-ness and only feasibility matters.
    let a_bh = if s_bh == 0 { 0 } else { s_bh.div_ceil(40).max(1) };
    check(
        g.hrb_nodes >= a_bh + (s_bh > 0) as u64,
        "hrb_nodes too small for its author pool",
    )?;
    let r_bh = g.hrb_nodes - a_bh;
    check(
        (s_bh == 0) == (r_bh == 0),
        "hrb_nodes inconsistent with hrb_edges",
    )?;
    let a_bb = g.brb_nodes / 2;
    let r_bb = g.brb_nodes - a_bb;
    check(
        (s_bb == 0) == (g.brb_nodes == 0) && (s_bb == 0 || (a_bb >= 1 && r_bb >= 1)),
        "brb_nodes inconsistent with brb_edges",
    )?;
    let a_hb = if s_hb == 0 { 0 } else { s_hb.div_ceil(3).max(1) };
    let r_hb = if s_hb == 0 { 0 } else { s_hb.div_ceil(8).max(1) };
    let used = g.hrb_nodes + g.brb_nodes + a_hb + r_hb;
    check(
        g.nodes >= used + (s_hh > 0) as u64 * 2,
        "nodes too small for the hh pool",
    )?;
    let pool_hh = g.nodes - used;
    let a_hh = if s_hh == 0 {
        check(pool_hh == 0, "leftover nodes with no hh events")?;
        0
    } else {
        s_hh.div_ceil(8).clamp(1, pool_hh - 1)
    };
    let r_hh = pool_hh - a_hh;

    for (name, s, a, r) in [
        ("bh", s_bh, a_bh, r_bh),
        ("bb", s_bb, a_bb, r_bb),
        ("hb", s_hb, a_hb, r_hb),
        ("hh", s_hh, a_hh, r_hh),
    ] {
        if s > 0 {
            check(
                s >= a.max(r) && s <= a * r,
                format!("class {name}: {s} edges infeasible over {r}x{a} pools"),
            )?;
        }
    }
    let bots_used = a_bh + a_bb + r_bb + r_hb;
    check(
        bots_used <= t.bots,
        format!("graph pools need {bots_used} bots, have {}", t.bots),
    )?;
    let humans_used = r_bh + a_hb + a_hh + r_hh;
    check(
        humans_used <= humans,
        format!("graph pools need {humans_used} humans, have {humans}"),
    )?;

    // Disjoint id blocks per pool.
    let take = |ids: &[AccountId], start: u64, len: u64| -> Vec<AccountId> {
        ids[start as usize..(start + len) as usize].to_vec()
    };
    let pool_a_bh = take(bot_ids, 0, a_bh);
    let pool_a_bb = take(bot_ids, a_bh, a_bb);
    let pool_r_bb = take(bot_ids, a_bh + a_bb, r_bb);
    let pool_r_hb = take(bot_ids, a_bh + a_bb + r_bb, r_hb);
    let pool_r_bh = take(human_ids, 0, r_bh);
    let pool_a_hb = take(human_ids, r_bh, a_hb);
    let pool_a_hh = take(human_ids, r_bh + a_hb, a_hh);
    let pool_r_hh = take(human_ids, r_bh + a_hb + a_hh, r_hh);
    let nonpart_bots: Vec<AccountId> = bot_ids[bots_used as usize..].to_vec();
    let nonpart_humans: Vec<AccountId> = human_ids[humans_used as usize..].to_vec();

    // URL accounting. Retweet records absorb URL targets first, then
    // embedded routing through dual originals, then untargeted originals.
    let human_rts = m_bh + m_hh;
    let bot_rts = m_hb + m_bb;
    let url_rts_human = t.url_human.min(human_rts);
    let mut r1 = t.url_human - url_rts_human;
    let url_rts_bot = t.url_bot.min(bot_rts);
    let mut r2 = t.url_bot - url_rts_bot;

    let mut e_bb = 0;
    let mut dual_bb = false;
    if r2 > 0 && t.bb > 0 && r2 > a_bb {
        dual_bb = true;
        e_bb = t.bb.min(r2 - a_bb);
        r2 -= e_bb + a_bb;
    }
    let bot_author_orig = a_bh + a_bb * (1 + dual_bb as u64);
    check(
        bot_orig >= bot_author_orig,
        format!("bot originals ({bot_orig}) cannot cover the {bot_author_orig} author originals"),
    )?;
    let untargeted_bot = bot_orig - bot_author_orig;
    check(
        untargeted_bot >= nonpart_bots.len() as u64,
        format!(
            "bot originals leave {untargeted_bot} for {} non-participant bots",
            nonpart_bots.len()
        ),
    )?;
    let x_bot = untargeted_bot.min(r2);
    r2 -= x_bot;
    let mut e_hb = 0;
    let mut dual_hb = false;
    if r2 > 0 && t.hb > 0 && r1 >= a_hb {
        dual_hb = true;
        e_hb = t.hb.min(r2);
        r2 -= e_hb;
        r1 -= a_hb;
    }
    check(r2 == 0, format!("url_bot target unreachable by {r2}"))?;

    let mut e_hh = 0;
    let mut dual_hh = false;
    if r1 > 0 && t.hh > 0 && r1 > a_hh {
        dual_hh = true;
        e_hh = t.hh.min(r1 - a_hh);
        r1 -= e_hh + a_hh;
    }
    let human_author_orig = a_hb * (1 + dual_hb as u64) + a_hh * (1 + dual_hh as u64);
    check(
        human_orig >= human_author_orig,
        format!(
            "human originals ({human_orig}) cannot cover the {human_author_orig} author originals"
        ),
    )?;
    let untargeted_human = human_orig - human_author_orig;
    check(
        untargeted_human >= nonpart_humans.len() as u64,
        format!(
            "human originals leave {untargeted_human} for {} non-participant humans",
            nonpart_humans.len()
        ),
    )?;
    let x_human = untargeted_human.min(r1);
    r1 -= x_human;
    check(r1 == 0, format!("url_human target unreachable by {r1}"))?;

    let classes = vec![
        ClassPlan {
            retweeter_cohort: Label::Human,
            in_window: t.bh,
            missing: t.missing_split.bh,
            simple: s_bh,
            authors: pool_a_bh,
            retweeters: pool_r_bh,
            embedded_routed: 0,
            dual_originals: false,
        },
        ClassPlan {
            retweeter_cohort: Label::Bot,
            in_window: t.bb,
            missing: t.missing_split.bb,
            simple: s_bb,
            authors: pool_a_bb,
            retweeters: pool_r_bb,
            embedded_routed: e_bb,
            dual_originals: dual_bb,
        },
        ClassPlan {
            retweeter_cohort: Label::Bot,
            in_window: t.hb,
            missing: t.missing_split.hb,
            simple: s_hb,
            authors: pool_a_hb,
            retweeters: pool_r_hb,
            embedded_routed: e_hb,
            dual_originals: dual_hb,
        },
        ClassPlan {
            retweeter_cohort: Label::Human,
            in_window: t.hh,
            missing: t.missing_split.hh,
            simple: s_hh,
            authors: pool_a_hh,
            retweeters: pool_r_hh,
            embedded_routed: e_hh,
            dual_originals: dual_hh,
        },
    ];
    let human_untargeted_holders = if nonpart_humans.is_empty() {
        human_ids[..humans_used.max(1).min(humans) as usize].to_vec()
    } else {
        nonpart_humans
    };
    let bot_untargeted_holders = if nonpart_bots.is_empty() {
        bot_ids[..bots_used.max(1).min(t.bots) as usize].to_vec()
    } else {
        nonpart_bots
    };
    Ok(Layout {
        classes,
        human_untargeted_holders,
        bot_untargeted_holders,
        human_orig,
        bot_orig,
        x_human,
        x_bot,
        url_rts_human,
        url_rts_bot,
        real_targets: true,
    })
}

#[allow(clippy::too_many_arguments)]
fn plan_free_form(
    t: &FixtureTargets,
    humans: u64,
    bot_orig: u64,
    human_orig: u64,
    m_bh: u64,
    m_bb: u64,
    m_hb: u64,
    m_hh: u64,
    bot_ids: &[AccountId],
    human_ids: &[AccountId],
) -> Result<Layout, FixtureError> {
    // No embedded routing: URL targets must fit on records directly.
    check(
        t.url_human <= m_bh + m_hh + human_orig,
        format!(
            "url_human ({}) exceeds human records without graph-shape routing",
            t.url_human
        ),
    )?;
    check(
        t.url_bot <= m_hb + m_bb + bot_orig,
        format!(
            "url_bot ({}) exceeds bot records without graph-shape routing",
            t.url_bot
        ),
    )?;

    // Humans lacking an original must appear as retweeters; split the need
    // across the two human-retweeter classes.
    let needed_h = humans.saturating_sub(human_orig);
    let r_hh = m_hh.min(needed_h).max((m_hh > 0) as u64);
    let r_bh = (needed_h - m_hh.min(needed_h))
        .max((m_bh > 0) as u64)
        .min(m_bh);
    let needed_b = t.bots.saturating_sub(bot_orig);
    let r_bb = m_bb.min(needed_b).max((m_bb > 0) as u64);
    let r_hb = (needed_b - m_bb.min(needed_b))
        .max((m_hb > 0) as u64)
        .min(m_hb);

    // Retweeter pools cycle over cohort ids starting after the original
    // holders, wrapping as needed; author pools are single hubs.
    let cohort_pool = |ids: &[AccountId], skip: u64, len: u64| -> Vec<AccountId> {
        (0..len)
            .map(|i| ids[((skip + i) % ids.len() as u64) as usize])
            .collect()
    };
    let o_h = human_orig.min(humans);
    let o_b = bot_orig.min(t.bots);
    let hub = |ids: &[AccountId], holders: u64| -> Vec<AccountId> {
        // Prefer an original holder as the hub author so in-window targets
        // could resolve; holders are the cohort's first ids.
        vec![ids[(holders.saturating_sub(1)) as usize % ids.len()]]
    };
    let classes = vec![
        ClassPlan {
            retweeter_cohort: Label::Human,
            in_window: t.bh,
            missing: t.missing_split.bh,
            simple: r_bh.max((m_bh > 0) as u64),
            authors: if m_bh > 0 { hub(bot_ids, o_b) } else { vec![] },
            retweeters: cohort_pool(human_ids, o_h, r_bh),
            embedded_routed: 0,
            dual_originals: false,
        },
        ClassPlan {
            retweeter_cohort: Label::Bot,
            in_window: t.bb,
            missing: t.missing_split.bb,
            simple: r_bb.max((m_bb > 0) as u64),
            authors: if m_bb > 0 { hub(bot_ids, o_b) } else { vec![] },
            retweeters: cohort_pool(bot_ids, o_b, r_bb),
            embedded_routed: 0,
            dual_originals: false,
        },
        ClassPlan {
            retweeter_cohort: Label::Bot,
            in_window: t.hb,
            missing: t.missing_split.hb,
            simple: r_hb.max((m_hb > 0) as u64),
            authors: if m_hb > 0 { hub(human_ids, o_h) } else { vec![] },
            retweeters: cohort_pool(bot_ids, o_b + r_bb, r_hb),
            embedded_routed: 0,
            dual_originals: false,
        },
        ClassPlan {
            retweeter_cohort: Label::Human,
            in_window: t.hh,
            missing: t.missing_split.hh,
            simple: r_hh.max((m_hh > 0) as u64),
            authors: if m_hh > 0 { hub(human_ids, o_h) } else { vec![] },
            retweeters: cohort_pool(human_ids, o_h + r_bh, r_hh),
            embedded_routed: 0,
            dual_originals: false,
        },
    ];
    // Originals cycle over the whole cohort so holders come first.
    let human_holders: Vec<AccountId> = human_ids.to_vec();
    let bot_holders: Vec<AccountId> = bot_ids.to_vec();
    Ok(Layout {
        classes,
        human_untargeted_holders: human_holders,
        bot_untargeted_holders: bot_holders,
        human_orig,
        bot_orig,
        x_human: t.url_human.saturating_sub(m_bh + m_hh),
        x_bot: t.url_bot.saturating_sub(m_hb + m_bb),
        url_rts_human: t.url_human.min(m_bh + m_hh),
        url_rts_bot: t.url_bot.min(m_hb + m_bb),
        real_targets: false,
    })
}

struct OriginalSlot {
    author: AccountId,
    has_url: bool,
    /// Filled once timestamps and ids are assigned.
    tweet_id: u64,
    created_at: i64,
}

/// Generate the corpus and score files for the targets.
pub fn generate_fixture(targets: &FixtureTargets) -> Result<Fixture, FixtureError> {
    let layout = validate_and_plan(targets)?;
    let mut rng = ChaCha8Rng::seed_from_u64(targets.seed);
    let (window_start, window_end) = targets.window;
    let span = window_end - window_start;

    if targets.tweets == 0 {
        check(targets.accounts == 0, "accounts without any tweets")?;
        return Ok(Fixture {
            corpus_lines: Vec::new(),
            score_lines: Vec::new(),
        });
    }

    // ----- originals ------------------------------------------------------
    // Per class: each author gets a base original (plus a URL twin for dual
    // classes); untargeted originals cycle over the holder lists with the
    // first x per cohort carrying URLs.
    let mut originals: Vec<OriginalSlot> = Vec::new();
    let mut class_base: Vec<Vec<usize>> = Vec::new(); // per class: author -> original index
    let mut class_url: Vec<Vec<usize>> = Vec::new();
    for class in &layout.classes {
        let mut base = Vec::with_capacity(class.authors.len());
        let mut url = Vec::with_capacity(class.authors.len());
        if layout.real_targets {
            for &author in &class.authors {
                base.push(originals.len());
                originals.push(OriginalSlot {
                    author,
                    has_url: false,
                    tweet_id: 0,
                    created_at: 0,
                });
                if class.dual_originals {
                    url.push(originals.len());
                    originals.push(OriginalSlot {
                        author,
                        has_url: true,
                        tweet_id: 0,
                        created_at: 0,
                    });
                }
            }
        }
        class_base.push(base);
        class_url.push(url);
    }
    let targeted_bot = originals
        .iter()
        .filter(|o| o.author <= targets.bots)
        .count() as u64;
    let targeted_human = originals.len() as u64 - targeted_bot;
    let untargeted_bot = layout.bot_orig - targeted_bot;
    let untargeted_human = layout.human_orig - targeted_human;
    for (count, x_url, holders, label) in [
        (
            untargeted_bot,
            layout.x_bot,
            &layout.bot_untargeted_holders,
            "bot",
        ),
        (
            untargeted_human,
            layout.x_human,
            &layout.human_untargeted_holders,
            "human",
        ),
    ] {
        check(
            count == 0 || !holders.is_empty(),
            format!("no {label} accounts to hold untargeted originals"),
        )?;
        for i in 0..count {
            originals.push(OriginalSlot {
                author: holders[(i % holders.len() as u64) as usize],
                has_url: i < x_url,
                tweet_id: 0,
                created_at: 0,
            });
        }
    }
    debug_assert_eq!(
        originals.len() as u64,
        layout.bot_orig + layout.human_orig
    );

    // Original timestamps occupy the first two fifths of the window, ids in
    // time order starting at 1; the very first original pins window start.
    let total_orig = originals.len() as u64;
    let orig_span = span * 2 / 5;
    for (i, slot) in originals.iter_mut().enumerate() {
        slot.created_at = window_start + (i as i64 * orig_span) / total_orig.max(1) as i64;
        slot.tweet_id = i as u64 + 1;
    }

    // ----- retweet events ---------------------------------------------------
    struct Event {
        retweeter: AccountId,
        author: AccountId,
        original_id: u64,
        original_created_at: i64,
        has_url: bool,
    }
    let mut events: Vec<Event> = Vec::new();
    let mut synthetic_id = 10_000_000_000u64;
    let mut human_rt_seen = 0u64;
    let mut bot_rt_seen = 0u64;
    for (ci, class) in layout.classes.iter().enumerate() {
        let total = class.in_window + class.missing;
        if total == 0 {
            continue;
        }
        let pairs = cross_pairs(
            class.retweeters.len() as u64,
            class.authors.len() as u64,
            class.simple,
        )?;
        for k in 0..total {
            let (ri, ai) = pairs[(k % pairs.len() as u64) as usize];
            let retweeter = class.retweeters[ri as usize];
            let author = class.authors[ai as usize];
            let in_window = k < class.in_window;
            let routed = in_window && k < class.embedded_routed;
            let (original_id, original_created_at) = if !in_window {
                // Original predates the window; not part of the corpus.
                synthetic_id += 1;
                (synthetic_id, window_start - 1 - (k as i64 % 86_400))
            } else if layout.real_targets {
                let idx = if routed {
                    class_url[ci][ai as usize]
                } else {
                    class_base[ci][ai as usize]
                };
                let slot = &originals[idx];
                (slot.tweet_id, slot.created_at)
            } else {
                // In-window original that the stream did not capture.
                synthetic_id += 1;
                (synthetic_id, window_start)
            };
            let rt_seen = match class.retweeter_cohort {
                Label::Bot => {
                    bot_rt_seen += 1;
                    bot_rt_seen
                }
                _ => {
                    human_rt_seen += 1;
                    human_rt_seen
                }
            };
            let url_quota = match class.retweeter_cohort {
                Label::Bot => layout.url_rts_bot,
                _ => layout.url_rts_human,
            };
            events.push(Event {
                retweeter,
                author,
                original_id,
                original_created_at,
                has_url: rt_seen <= url_quota,
            });
        }
    }
    debug_assert_eq!(events.len() as u64, targets.retweets);

    // ----- records ----------------------------------------------------------
    let negative_for = |rng: &mut ChaCha8Rng| -> &'static str {
        if rng.gen_range(0..5) < 3 {
            NEGATIVE_PHRASES[rng.gen_range(0..NEGATIVE_PHRASES.len())]
        } else {
            NEUTRAL_PHRASES[rng.gen_range(0..NEUTRAL_PHRASES.len())]
        }
    };
    let mut records: Vec<TweetRecord> = Vec::with_capacity(targets.tweets as usize);
    for slot in &originals {
        let mut text = negative_for(&mut rng).to_string();
        if slot.has_url {
            text.push_str(&format!(" https://t.co/{:06x}", slot.tweet_id));
        }
        records.push(TweetRecord {
            tweet_id: slot.tweet_id,
            author_id: slot.author,
            created_at: slot.created_at,
            text,
            retweet_of: None,
        });
    }
    let rt_span = span - orig_span;
    for (j, event) in events.iter().enumerate() {
        let tweet_id = total_orig + j as u64 + 1;
        let last = j as u64 == targets.retweets - 1;
        let spread = if rt_span > 2 {
            (j as i64 * (rt_span - 2)) / targets.retweets as i64
        } else {
            0
        };
        let created_at = if last {
            window_end
        } else {
            (window_start + orig_span + 1 + spread).min(window_end)
        };
        let mut text = format!("rt: {}", negative_for(&mut rng));
        if event.has_url {
            text.push_str(&format!(" https://t.co/{tweet_id:06x}"));
        }
        records.push(TweetRecord {
            tweet_id,
            author_id: event.retweeter,
            created_at,
            text,
            retweet_of: Some(botscope_core::corpus::OriginalRef {
                original_tweet_id: event.original_id,
                original_author_id: event.author,
                original_created_at: event.original_created_at,
            }),
        });
    }
    if total_orig == 0 && !records.is_empty() {
        records[0].created_at = window_start;
    }
    records.sort_by_key(|r| (r.created_at, r.tweet_id));

    // ----- profiles and scores ----------------------------------------------
    let mut corpus_lines = Vec::with_capacity(records.len());
    let mut profiles: std::collections::BTreeMap<AccountId, AccountProfile> =
        std::collections::BTreeMap::new();
    for id in 1..=targets.accounts {
        let bot = id <= targets.bots;
        let profile = AccountProfile {
            account_id: id,
            followers_count: if bot {
                rng.gen_range(0..400)
            } else {
                rng.gen_range(10..3000)
            },
            friends_count: if bot {
                rng.gen_range(500..5000)
            } else {
                rng.gen_range(10..1500)
            },
            statuses_count: if bot {
                rng.gen_range(5000..40000)
            } else {
                rng.gen_range(50..15000)
            },
            account_created_at: window_start - rng.gen_range(30..2500) * 86_400,
            label: Label::Unknown,
            sub_scores: None,
        };
        profiles.insert(id, profile);
    }
    for record in &records {
        corpus_lines.push(format_record(record, &profiles[&record.author_id]));
    }

    let mut score_lines = Vec::with_capacity(targets.accounts as usize);
    for id in 1..=targets.accounts {
        let bot = id <= targets.bots;
        let range = if bot { 0.58..0.92 } else { 0.08..0.42 };
        let score = BotScore::new(
            rng.gen_range(range.clone()),
            rng.gen_range(range.clone()),
            rng.gen_range(range),
        )
        .expect("generated scores are in range");
        score_lines.push(format_score_line(id, &score));
    }

    Ok(Fixture {
        corpus_lines,
        score_lines,
    })
}

/// Generate and write the fixture files.
pub fn write_fixture(
    targets: &FixtureTargets,
    corpus_path: &Path,
    scores_path: &Path,
) -> Result<(), FixtureError> {
    let fixture = generate_fixture(targets)?;
    let mut corpus = fixture.corpus_lines.join("\n");
    if !corpus.is_empty() {
        corpus.push('\n');
    }
    let mut scores = fixture.score_lines.join("\n");
    if !scores.is_empty() {
        scores.push('\n');
    }
    std::fs::write(corpus_path, corpus).map_err(FixtureError::Io)?;
    std::fs::write(scores_path, scores).map_err(FixtureError::Io)?;
    Ok(())
}
