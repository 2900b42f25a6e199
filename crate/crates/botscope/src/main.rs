//! Command-line interface.
//!
//! Exit codes: 0 success, 2 configuration error, 3 input or domain error,
//! 4 internal/convergence error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use botscope::config::{parse_policy, PipelineConfig, Stage};
use botscope::fixture::{self, FixtureTargets, GraphTargets, MissingSplit};
use botscope::pipeline::{run_stages, PipelineError};
use botscope::report;

#[derive(Parser)]
#[command(
    name = "botscope",
    about = "Bot/human cohort analytics over a line-delimited tweet corpus",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by the pipeline stages. Every flag mirrors a config-file key
/// of the same name; a flag set on the command line wins over the file.
#[derive(Args)]
struct StageArgs {
    /// Flat key=value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Line-delimited corpus input.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Externally produced score file (one JSON entry per line).
    #[arg(long)]
    scores: Option<PathBuf>,
    /// accounts.csv from a previous score run; skips scoring.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Labeling policy: composite or all-three.
    #[arg(long)]
    policy: Option<String>,
    /// Threshold override in [0,1]; default is the density-valley rule.
    #[arg(long)]
    tau: Option<f64>,
    /// Negative-stem lexicon file (built-in list when absent).
    #[arg(long)]
    neg_lexicon: Option<PathBuf>,
    /// Happiness lexicon TSV (word<TAB>score).
    #[arg(long)]
    sent_lexicon: Option<PathBuf>,
    /// Stop-word file for TF-IDF.
    #[arg(long)]
    stopwords: Option<PathBuf>,
    #[arg(long)]
    delta_start: Option<f64>,
    #[arg(long)]
    delta_end: Option<f64>,
    #[arg(long)]
    delta_step: Option<f64>,
    #[arg(long)]
    include_retweets: Option<bool>,
    #[arg(long)]
    include_embedded: Option<bool>,
    #[arg(long)]
    scan_embedded: Option<bool>,
    /// Betweenness over the directed view (false = undirected).
    #[arg(long)]
    directed: Option<bool>,
    /// Normalize betweenness by (n-1)(n-2).
    #[arg(long)]
    normalized: Option<bool>,
    /// Match unstarred negative stems exactly instead of as prefixes.
    #[arg(long)]
    exact_match: Option<bool>,
    #[arg(long)]
    svd_k: Option<usize>,
    #[arg(long)]
    svd_tol: Option<f64>,
    #[arg(long)]
    svd_max_iter: Option<usize>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    max_line_len: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse the corpus and report collection statistics.
    Ingest(StageArgs),
    /// Score and label accounts; writes accounts.csv and the KDE grids.
    Score(StageArgs),
    /// Build the retweet network, centrality tables, tallies, URL counts.
    Network(StageArgs),
    /// Run the text analyses (negativity, sentiment, log-odds, projections).
    Text(StageArgs),
    /// Run the full pipeline and emit every artifact.
    Report(StageArgs),
    /// Generate a synthetic corpus and score file hitting aggregate targets.
    Fixture(FixtureArgs),
}

#[derive(Args)]
struct FixtureArgs {
    /// Directory for corpus.jsonl and scores.jsonl.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tweets: Option<u64>,
    #[arg(long)]
    accounts: Option<u64>,
    #[arg(long)]
    bots: Option<u64>,
    #[arg(long)]
    retweets: Option<u64>,
    #[arg(long)]
    hh: Option<u64>,
    #[arg(long)]
    hb: Option<u64>,
    #[arg(long)]
    bh: Option<u64>,
    #[arg(long)]
    bb: Option<u64>,
    #[arg(long)]
    missing: Option<u64>,
    #[arg(long)]
    bot_authored: Option<u64>,
    #[arg(long)]
    url_human: Option<u64>,
    #[arg(long)]
    url_bot: Option<u64>,
    /// Drop the default graph-shape targets (free-form layout).
    #[arg(long, default_value_t = false)]
    no_graph_targets: bool,
}

fn build_config(args: &StageArgs) -> Result<PipelineConfig, PipelineError> {
    let mut config = PipelineConfig::default();
    let cfg = |e: botscope::config::ConfigError| PipelineError::Config(e.to_string());
    if let Some(path) = &args.config {
        config.apply_file(path).map_err(cfg)?;
    }
    if let Some(v) = &args.input {
        config.input = v.clone();
    }
    if let Some(v) = &args.scores {
        config.scores = Some(v.clone());
    }
    if let Some(v) = &args.labels {
        config.labels = Some(v.clone());
    }
    if let Some(v) = &args.out {
        config.output_dir = v.clone();
    }
    if let Some(v) = &args.policy {
        config.policy = parse_policy(v).map_err(cfg)?;
    }
    if let Some(v) = args.tau {
        config.tau = Some(v);
    }
    if let Some(v) = &args.neg_lexicon {
        config.neg_lexicon = Some(v.clone());
    }
    if let Some(v) = &args.sent_lexicon {
        config.sent_lexicon = Some(v.clone());
    }
    if let Some(v) = &args.stopwords {
        config.stopwords = Some(v.clone());
    }
    if let Some(v) = args.delta_start {
        config.delta_start = v;
    }
    if let Some(v) = args.delta_end {
        config.delta_end = v;
    }
    if let Some(v) = args.delta_step {
        config.delta_step = v;
    }
    if let Some(v) = args.include_retweets {
        config.include_retweets = v;
    }
    if let Some(v) = args.include_embedded {
        config.include_embedded = v;
    }
    if let Some(v) = args.scan_embedded {
        config.scan_embedded = v;
    }
    if let Some(v) = args.directed {
        config.directed = v;
    }
    if let Some(v) = args.normalized {
        config.normalized = v;
    }
    if let Some(v) = args.exact_match {
        config.exact_match = v;
    }
    if let Some(v) = args.svd_k {
        config.svd_k = v;
    }
    if let Some(v) = args.svd_tol {
        config.svd_tol = v;
    }
    if let Some(v) = args.svd_max_iter {
        config.svd_max_iter = v;
    }
    if let Some(v) = args.threads {
        config.threads = v;
    }
    if let Some(v) = args.max_line_len {
        config.max_line_len = v;
    }
    Ok(config)
}

fn run_stage(args: &StageArgs, stage: Stage) -> Result<(), PipelineError> {
    let config = build_config(args)?;
    let bundle = run_stages(&config, stage)?;
    let manifest = report::emit_reports(&bundle, &config.output_dir)?;
    for (key, value) in &bundle.summary {
        println!("{key}={value}");
    }
    eprintln!(
        "wrote {} files to {}",
        manifest.len() + 2,
        config.output_dir.display()
    );
    Ok(())
}

fn run_fixture(args: &FixtureArgs) -> Result<(), PipelineError> {
    let mut targets = FixtureTargets::default();
    if args.no_graph_targets {
        targets.graph = None;
    }
    let set = |field: &mut u64, value: Option<u64>| {
        if let Some(v) = value {
            *field = v;
        }
    };
    set(&mut targets.tweets, args.tweets);
    set(&mut targets.accounts, args.accounts);
    set(&mut targets.bots, args.bots);
    set(&mut targets.retweets, args.retweets);
    set(&mut targets.hh, args.hh);
    set(&mut targets.hb, args.hb);
    set(&mut targets.bh, args.bh);
    set(&mut targets.bb, args.bb);
    set(&mut targets.missing, args.missing);
    set(&mut targets.bot_authored, args.bot_authored);
    set(&mut targets.url_human, args.url_human);
    set(&mut targets.url_bot, args.url_bot);
    if let Some(seed) = args.seed {
        targets.seed = seed;
    }
    // Custom tallies default the missing split and graph shape away from the
    // built-in numbers, which are only mutually consistent as a whole.
    let default = FixtureTargets::default();
    let tallies_changed = (targets.hh, targets.hb, targets.bh, targets.bb, targets.missing)
        != (default.hh, default.hb, default.bh, default.bb, default.missing)
        || targets.retweets != default.retweets;
    if tallies_changed {
        targets.missing_split = MissingSplit {
            hh: targets.missing,
            hb: 0,
            bh: 0,
            bb: 0,
        };
        if targets.graph == Some(GraphTargets {
            nodes: 6_528,
            simple_edges: 10_011,
            hrb_nodes: 1_550,
            hrb_edges: 1_596,
            brb_nodes: 92,
            brb_edges: 80,
        }) {
            targets.graph = None;
        }
    }
    std::fs::create_dir_all(&args.out)
        .map_err(|e| PipelineError::Io(format!("cannot create {}: {e}", args.out.display())))?;
    let corpus = args.out.join("corpus.jsonl");
    let scores = args.out.join("scores.jsonl");
    fixture::write_fixture(&targets, &corpus, &scores).map_err(|e| match e {
        fixture::FixtureError::Inconsistent(m) => PipelineError::Domain(m),
        fixture::FixtureError::Io(e) => PipelineError::Io(e.to_string()),
    })?;
    println!("corpus={}", corpus.display());
    println!("scores={}", scores.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Ingest(args) => run_stage(args, Stage::Ingest),
        Command::Score(args) => run_stage(args, Stage::Score),
        Command::Network(args) => run_stage(args, Stage::Network),
        Command::Text(args) => run_stage(args, Stage::Text),
        Command::Report(args) => run_stage(args, Stage::Full),
        Command::Fixture(args) => run_fixture(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
