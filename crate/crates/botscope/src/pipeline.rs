//! End-to-end pipeline: parse -> score/label -> network -> text analyses,
//! assembled into an in-memory [`ReportBundle`] whose tables are
//! byte-deterministic for a given configuration and input.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use botscope_core::botsense::{
    self, scott_bandwidth, BotScore, ThresholdProvenance, GRID_1D, GRID_2D, GRID_3D,
};
use botscope_core::corpus::{
    collection_window, format_timestamp, AccountId, CorpusError, Label,
    ParserOptions,
};
use botscope_core::lexsent::{
    cohort_word_counts, delta_grid, log_odds, negativity_partition, normalize_text,
    sentiment_sweep, tfidf, truncated_svd, LexsentError, MatchMode, NegativeLexicon,
    NegativityCounts, SvdOptions,
};
use botscope_core::rtnet::{
    build_retweet_network, classify_retweets, degree_table, url_counts, GraphView,
};

use crate::config::{policy_name, PipelineConfig, Stage};
use crate::{io, par, report};

#[derive(Debug)]
pub enum PipelineError {
    /// Invalid configuration (exit 2).
    Config(String),
    /// Unreadable input or unwritable output (exit 3).
    Io(String),
    /// Domain error from a pipeline stage (exit 3).
    Domain(String),
    /// Iterative computation failed to converge (exit 4).
    Convergence(String),
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) => 2,
            PipelineError::Io(_) | PipelineError::Domain(_) => 3,
            PipelineError::Convergence(_) => 4,
        }
    }

    fn module(&self) -> &'static str {
        match self {
            PipelineError::Config(_) => "config",
            PipelineError::Io(_) => "io",
            PipelineError::Domain(_) => "domain",
            PipelineError::Convergence(_) => "convergence",
        }
    }
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            PipelineError::Config(m)
            | PipelineError::Io(m)
            | PipelineError::Domain(m)
            | PipelineError::Convergence(m) => m,
        };
        write!(f, "{}: {}", self.module(), msg)
    }
}

impl std::error::Error for PipelineError {}

impl From<CorpusError> for PipelineError {
    fn from(e: CorpusError) -> Self {
        PipelineError::Domain(format!("corpus: {e}"))
    }
}

impl From<LexsentError> for PipelineError {
    fn from(e: LexsentError) -> Self {
        match e {
            LexsentError::NoConvergence { .. } => {
                PipelineError::Convergence(format!("lexsent: {e}"))
            }
            other => PipelineError::Domain(format!("lexsent: {other}")),
        }
    }
}

/// Everything a run produces, prior to touching the filesystem.
#[derive(Debug, Clone, Default)]
pub struct ReportBundle {
    /// Ordered `metric=value` pairs for summary.txt.
    pub summary: Vec<(String, String)>,
    /// `(file name, file contents)`, emission order.
    pub tables: Vec<(String, String)>,
    /// Config echo, versions, and timings; excluded from the manifest.
    pub run_meta: String,
}

impl ReportBundle {
    fn put(&mut self, key: &str, value: impl fmt::Display) {
        self.summary.push((key.to_string(), value.to_string()));
    }

    fn table(&mut self, name: &str, contents: String) {
        self.tables.push((name.to_string(), contents));
    }

    /// Value of a summary metric, for tests and the CLI echo.
    pub fn metric(&self, key: &str) -> Option<&str> {
        self.summary
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

/// Run the full pipeline.
pub fn run_pipeline(config: &PipelineConfig) -> Result<ReportBundle, PipelineError> {
    run_stages(config, Stage::Full)
}

/// Run the pipeline through `upto`, producing whatever artifacts exist by
/// that stage.
pub fn run_stages(config: &PipelineConfig, upto: Stage) -> Result<ReportBundle, PipelineError> {
    config
        .validate()
        .map_err(|e| PipelineError::Config(e.to_string()))?;
    let started = Instant::now();
    let mut timings: Vec<(&'static str, u128)> = Vec::new();
    let mut bundle = ReportBundle::default();

    // -- ingest ------------------------------------------------------------
    let parser_opts = ParserOptions {
        max_line_len: config.max_line_len,
        window_end: None,
    };
    let corpus = io::read_corpus(&config.input, &parser_opts)?;
    let window = collection_window(&corpus.records)?;
    bundle.put("tweets", corpus.stats.tweets);
    bundle.put("accounts", corpus.stats.accounts);
    bundle.put("retweets", corpus.stats.retweets);
    bundle.put("rejected_lines", corpus.stats.rejected);
    bundle.put("window_start", format_timestamp(window.start));
    bundle.put("window_end", format_timestamp(window.end));
    bundle.put("window_span_seconds", window.span_seconds());
    bundle.put(
        "window_span_hours",
        format!("{:.1}", window.span_seconds() as f64 / 3600.0),
    );
    timings.push(("ingest_ms", started.elapsed().as_millis()));
    if upto == Stage::Ingest {
        bundle.run_meta = run_meta(config, &timings);
        return Ok(bundle);
    }

    // -- score & label -----------------------------------------------------
    let stage = Instant::now();
    let (labels, scores) = if let Some(labels_path) = &config.labels {
        let (labels, scores) = io::read_labels_csv(labels_path)?;
        bundle.put("labels_source", labels_path.display());
        let count = |want: Label| labels.values().filter(|&&l| l == want).count();
        bundle.put("bots", count(Label::Bot));
        bundle.put("humans", count(Label::Human));
        bundle.put("unknown", count(Label::Unknown));
        (labels, scores)
    } else {
        let scores = match &config.scores {
            Some(path) => {
                let (scores, diagnostics) = io::read_scores(path, &corpus.profiles)?;
                bundle.put("score_entries", scores.len());
                bundle.put("score_diagnostics", diagnostics.len());
                scores
            }
            None => botsense::compute_scores(&corpus.records, &corpus.profiles, &window),
        };
        let composites: Vec<f64> = scores.values().map(|s| s.composite).collect();
        let (tau, provenance) = match config.tau {
            Some(tau) => (tau, ThresholdProvenance::Imported),
            None => botsense::valley_threshold(&composites)
                .map_err(|e| PipelineError::Domain(format!("botsense: {e}")))?,
        };
        let label_report =
            botsense::label_accounts(&corpus.profiles, &scores, tau, provenance, config.policy);
        bundle.put("tau", label_report.tau);
        bundle.put("tau_provenance", label_report.provenance);
        bundle.put("policy", policy_name(config.policy));
        bundle.put("bots", label_report.bots);
        bundle.put("humans", label_report.humans);
        bundle.put("unknown", label_report.unknown);
        (label_report.labels, scores)
    };
    bundle.table("accounts.csv", report::accounts_csv(&labels, &scores));

    // Author-cohort record counts: retweet records credit their retweeter.
    let mut authored = BTreeMap::from([
        (Label::Human, 0u64),
        (Label::Bot, 0u64),
        (Label::Unknown, 0u64),
    ]);
    for r in &corpus.records {
        let label = labels.get(&r.author_id).copied().unwrap_or(Label::Unknown);
        *authored.get_mut(&label).unwrap() += 1;
    }
    bundle.put("human_authored", authored[&Label::Human]);
    bundle.put("bot_authored", authored[&Label::Bot]);
    bundle.put("unknown_authored", authored[&Label::Unknown]);
    if corpus.stats.tweets > 0 {
        bundle.put(
            "bot_authored_pct",
            format!(
                "{:.4}",
                authored[&Label::Bot] as f64 / corpus.stats.tweets as f64 * 100.0
            ),
        );
    }

    // KDE grids over the scored accounts, points in ascending account order.
    if scores.len() >= 2 {
        let component =
            |pick: fn(&BotScore) -> f64| -> Vec<f64> { scores.values().map(pick).collect() };
        let axes: [(&str, Vec<f64>); 4] = [
            ("friend", component(|s| s.friend)),
            ("network", component(|s| s.network)),
            ("temporal", component(|s| s.temporal)),
            ("composite", component(|s| s.composite)),
        ];
        let emit_grid =
            |bundle: &mut ReportBundle, name: String, dims: Vec<&str>, grid_points: usize| {
                let points: Vec<Vec<f64>> = (0..scores.len())
                    .map(|i| {
                        dims.iter()
                            .map(|d| axes.iter().find(|(n, _)| n == d).unwrap().1[i])
                            .collect()
                    })
                    .collect();
                let bandwidths = scott_bandwidth(&points)
                    .map_err(|e| PipelineError::Domain(format!("botsense: {e}")))?;
                let grid = par::kde_parallel(&points, grid_points, &bandwidths, config.threads)
                    .map_err(|e| PipelineError::Domain(format!("botsense: {e}")))?;
                bundle.put(
                    format!("kde_mass_{name}").as_str(),
                    format!("{:.6}", grid.integral()),
                );
                bundle.table(&format!("kde_{name}.csv"), report::kde_csv(&grid, &dims));
                Ok::<(), PipelineError>(())
            };
        for axis in ["friend", "network", "temporal", "composite"] {
            emit_grid(&mut bundle, format!("1d_{axis}"), vec![axis], GRID_1D)?;
        }
        for (a, b) in [
            ("friend", "network"),
            ("friend", "temporal"),
            ("network", "temporal"),
        ] {
            emit_grid(&mut bundle, format!("2d_{a}_{b}"), vec![a, b], GRID_2D)?;
        }
        emit_grid(
            &mut bundle,
            "3d_friend_network_temporal".to_string(),
            vec!["friend", "network", "temporal"],
            GRID_3D,
        )?;
    }
    timings.push(("score_ms", stage.elapsed().as_millis()));
    if upto == Stage::Score {
        bundle.run_meta = run_meta(config, &timings);
        return Ok(bundle);
    }

    // -- network -----------------------------------------------------------
    let stage = Instant::now();
    let graph = build_retweet_network(&corpus.records, &labels);
    bundle.put("graph_nodes", graph.node_count());
    bundle.put("graph_simple_edges", graph.simple_edge_count());
    bundle.put("graph_multi_edges", graph.multi_edge_count());
    bundle.put("edge_direction", "retweeter_to_author");
    let hrb = graph.filter_by_labels(Label::Bot, Label::Human);
    let brb = graph.filter_by_labels(Label::Bot, Label::Bot);
    bundle.put("humans_retweeting_bots_nodes", hrb.node_count());
    bundle.put("humans_retweeting_bots_edges", hrb.simple_edge_count());
    bundle.put("bots_retweeting_bots_nodes", brb.node_count());
    bundle.put("bots_retweeting_bots_edges", brb.simple_edge_count());

    let view = if config.directed {
        GraphView::Directed
    } else {
        GraphView::Undirected
    };
    bundle.put(
        "betweenness_view",
        if config.directed { "directed" } else { "undirected" },
    );
    if config.normalized && graph.node_count() < 3 {
        bundle.put("betweenness_skipped", "fewer than 3 nodes");
    } else {
        let table = par::betweenness_parallel(&graph, view, config.normalized, config.threads)
            .map_err(|e| PipelineError::Domain(format!("rtnet: {e}")))?;
        bundle.table("betweenness.csv", report::centrality_csv(&table));
    }
    bundle.table("degree.csv", report::centrality_csv(&degree_table(&graph)));
    bundle.table("edges.csv", report::edges_csv(&graph));
    bundle.table("nodes.csv", report::nodes_csv(&graph));
    bundle.table("multiedges.csv", report::multiedges_csv(&graph));
    bundle.table("hrb_edges.csv", report::edges_csv(&hrb));
    bundle.table("hrb_nodes.csv", report::nodes_csv(&hrb));
    bundle.table("brb_edges.csv", report::edges_csv(&brb));
    bundle.table("brb_nodes.csv", report::nodes_csv(&brb));

    let tally = classify_retweets(&corpus.records, &labels, &window);
    bundle.put("tally_hh", tally.hh);
    bundle.put("tally_hb", tally.hb);
    bundle.put("tally_bh", tally.bh);
    bundle.put("tally_bb", tally.bb);
    bundle.put("tally_missing", tally.missing);
    bundle.put("humans_retweeted", tally.humans_retweeted());
    bundle.put("bots_retweeted", tally.bots_retweeted());

    let urls = url_counts(&corpus.records, &labels, config.scan_embedded);
    bundle.put("url_human_direct", urls.human_direct);
    bundle.put("url_bot_direct", urls.bot_direct);
    bundle.put("url_human_embedded", urls.human_embedded);
    bundle.put("url_bot_embedded", urls.bot_embedded);
    bundle.put("url_human_total", urls.human_total());
    bundle.put("url_bot_total", urls.bot_total());
    timings.push(("network_ms", stage.elapsed().as_millis()));
    if upto == Stage::Network {
        bundle.run_meta = run_meta(config, &timings);
        return Ok(bundle);
    }

    // -- text --------------------------------------------------------------
    let stage = Instant::now();
    let negative = match &config.neg_lexicon {
        Some(path) => io::read_negative_lexicon(path)?,
        None => NegativeLexicon::builtin(),
    };
    let mode = if config.exact_match {
        MatchMode::ExactUnstarred
    } else {
        MatchMode::Prefix
    };
    bundle.put("negative_stems", negative.len());
    let partition = negativity_partition(&corpus.records, &labels, &negative, mode);
    let mut neg_line = |name: &str, counts: NegativityCounts| {
        bundle.put(&format!("negativity_{name}_negative"), counts.negative);
        bundle.put(
            &format!("negativity_{name}_non_negative"),
            counts.non_negative,
        );
    };
    neg_line("human_original", partition.human_original);
    neg_line("human_retweet", partition.human_retweet);
    neg_line("bot_original", partition.bot_original);
    neg_line("bot_retweet", partition.bot_retweet);
    neg_line("overall", partition.overall());

    let counts = cohort_word_counts(
        &corpus.records,
        &labels,
        config.include_retweets,
        config.include_embedded,
    );
    bundle.put("cohort_tokens_human", counts.human_total);
    bundle.put("cohort_tokens_bot", counts.bot_total);
    if counts.human_total > 0 && counts.bot_total > 0 {
        let rows = log_odds(&counts)?;
        bundle.table("logodds.csv", report::logodds_csv(&rows));
    } else {
        bundle.put("logodds_skipped", "a cohort has no tokens");
    }

    if let Some(path) = &config.sent_lexicon {
        let (lexicon, skipped) = io::read_sentiment_lexicon(path)?;
        bundle.put("sentiment_lexicon_words", lexicon.len());
        bundle.put("sentiment_lexicon_skipped", skipped);
        let grid = delta_grid(config.delta_start, config.delta_end, config.delta_step);
        let with_rt = cohort_word_counts(&corpus.records, &labels, true, config.include_embedded);
        let without_rt =
            cohort_word_counts(&corpus.records, &labels, false, config.include_embedded);
        let sweep = sentiment_sweep(&with_rt, &lexicon, &grid)?;
        bundle.table("sentiment_sweep.csv", report::sweep_csv(&sweep));
        let sweep_nort = sentiment_sweep(&without_rt, &lexicon, &grid)?;
        bundle.table(
            "sentiment_sweep_noretweets.csv",
            report::sweep_csv(&sweep_nort),
        );
    } else {
        bundle.put("sentiment_skipped", "no sentiment lexicon configured");
    }

    let stopwords = match &config.stopwords {
        Some(path) => Some(io::read_stopwords(path)?),
        None => None,
    };
    let documents: Vec<Vec<String>> = corpus
        .records
        .iter()
        .map(|r| normalize_text(&r.text))
        .collect();
    match tfidf(&documents, stopwords.as_ref()) {
        Err(LexsentError::AllDocumentsEmpty) => {
            bundle.put("svd_skipped", "all documents empty after normalization");
        }
        Err(other) => return Err(other.into()),
        Ok(matrix) => {
            bundle.put("tfidf_vocabulary", matrix.n_cols());
            let min_dim = matrix.n_rows().min(matrix.n_cols());
            let k = config.svd_k.min(min_dim);
            if k < config.svd_k {
                bundle.put("svd_k_clamped", k);
            }
            let opts = SvdOptions {
                tol: config.svd_tol,
                max_iter: config.svd_max_iter,
            };
            let svd = truncated_svd(&matrix, k, &opts)?;
            bundle.put("svd_k", k);
            bundle.put("svd_iterations", svd.iterations);
            let sigma: Vec<String> = svd
                .singular_values
                .iter()
                .map(|s| format!("{s:.6}"))
                .collect();
            bundle.put("svd_singular_values", sigma.join(";"));
            let tweet_ids: Vec<AccountId> =
                corpus.records.iter().map(|r| r.tweet_id).collect();
            bundle.table(
                "projections.csv",
                report::projections_csv(&tweet_ids, &svd.projections),
            );
        }
    }
    timings.push(("text_ms", stage.elapsed().as_millis()));
    timings.push(("total_ms", started.elapsed().as_millis()));

    bundle.run_meta = run_meta(config, &timings);
    Ok(bundle)
}

fn run_meta(config: &PipelineConfig, timings: &[(&'static str, u128)]) -> String {
    let mut meta = String::new();
    meta.push_str(&format!(
        "botscope_version={}\n",
        env!("CARGO_PKG_VERSION")
    ));
    for (key, value) in config.echo() {
        meta.push_str(&format!("config.{key}={value}\n"));
    }
    for (key, value) in timings {
        meta.push_str(&format!("timing.{key}={value}\n"));
    }
    meta
}
