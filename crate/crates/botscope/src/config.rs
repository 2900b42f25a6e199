//! Pipeline configuration: defaults, flat key=value config files, and
//! validation. Every file key has a same-named CLI flag; the flag wins.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use botscope_core::botsense::LabelPolicy;

/// How far through the pipeline a command runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Ingest,
    Score,
    Network,
    Text,
    Full,
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    /// Line-delimited corpus input.
    pub input: PathBuf,
    /// Optional externally produced score file; proxies are computed when absent.
    pub scores: Option<PathBuf>,
    /// Optional `accounts.csv` from a previous `score` run; skips scoring.
    pub labels: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub policy: LabelPolicy,
    /// Threshold override; the valley rule applies when absent.
    pub tau: Option<f64>,
    /// Negative-stem lexicon; the built-in list applies when absent.
    pub neg_lexicon: Option<PathBuf>,
    /// Happiness lexicon (TSV); sentiment sweeps are skipped when absent.
    pub sent_lexicon: Option<PathBuf>,
    /// Stop-word file (one word per line) for the TF-IDF stage.
    pub stopwords: Option<PathBuf>,
    pub delta_start: f64,
    pub delta_end: f64,
    pub delta_step: f64,
    /// Include retweet records in the cohort word counts for log-odds.
    pub include_retweets: bool,
    /// Also count resolvable embedded original text in cohort word counts.
    pub include_embedded: bool,
    /// Scan embedded original text for the URL counts.
    pub scan_embedded: bool,
    /// Betweenness over the directed view (false = undirected).
    pub directed: bool,
    /// Normalize betweenness by (n-1)(n-2).
    pub normalized: bool,
    /// Match negative stems exactly unless starred.
    pub exact_match: bool,
    pub svd_k: usize,
    pub svd_tol: f64,
    pub svd_max_iter: usize,
    pub threads: usize,
    pub max_line_len: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            input: PathBuf::new(),
            scores: None,
            labels: None,
            output_dir: PathBuf::from("out"),
            policy: LabelPolicy::Composite,
            tau: None,
            neg_lexicon: None,
            sent_lexicon: None,
            stopwords: None,
            delta_start: 0.0,
            delta_end: 3.0,
            delta_step: 0.1,
            include_retweets: true,
            include_embedded: false,
            scan_embedded: true,
            directed: true,
            normalized: true,
            exact_match: false,
            svd_k: 2,
            svd_tol: 1e-7,
            svd_max_iter: 500,
            threads: 1,
            max_line_len: 65536,
        }
    }
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "configuration error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(ConfigError(format!("{key}: expected boolean, got {other:?}"))),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError(format!("{key}: cannot parse {value:?}")))
}

pub fn parse_policy(value: &str) -> Result<LabelPolicy, ConfigError> {
    match value {
        "composite" => Ok(LabelPolicy::Composite),
        "all-three" => Ok(LabelPolicy::AllThree),
        other => Err(ConfigError(format!(
            "policy: expected composite or all-three, got {other:?}"
        ))),
    }
}

pub fn policy_name(policy: LabelPolicy) -> &'static str {
    match policy {
        LabelPolicy::Composite => "composite",
        LabelPolicy::AllThree => "all-three",
    }
}

impl PipelineConfig {
    /// Apply one `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "input" => self.input = PathBuf::from(value),
            "scores" => self.scores = Some(PathBuf::from(value)),
            "labels" => self.labels = Some(PathBuf::from(value)),
            "output_dir" => self.output_dir = PathBuf::from(value),
            "policy" => self.policy = parse_policy(value)?,
            "tau" => self.tau = Some(parse_num(key, value)?),
            "neg_lexicon" => self.neg_lexicon = Some(PathBuf::from(value)),
            "sent_lexicon" => self.sent_lexicon = Some(PathBuf::from(value)),
            "stopwords" => self.stopwords = Some(PathBuf::from(value)),
            "delta_start" => self.delta_start = parse_num(key, value)?,
            "delta_end" => self.delta_end = parse_num(key, value)?,
            "delta_step" => self.delta_step = parse_num(key, value)?,
            "include_retweets" => self.include_retweets = parse_bool(key, value)?,
            "include_embedded" => self.include_embedded = parse_bool(key, value)?,
            "scan_embedded" => self.scan_embedded = parse_bool(key, value)?,
            "directed" => self.directed = parse_bool(key, value)?,
            "normalized" => self.normalized = parse_bool(key, value)?,
            "exact_match" => self.exact_match = parse_bool(key, value)?,
            "svd_k" => self.svd_k = parse_num(key, value)?,
            "svd_tol" => self.svd_tol = parse_num(key, value)?,
            "svd_max_iter" => self.svd_max_iter = parse_num(key, value)?,
            "threads" => self.threads = parse_num(key, value)?,
            "max_line_len" => self.max_line_len = parse_num(key, value)?,
            other => return Err(ConfigError(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Load `key=value` lines from a config file; `#` starts a comment.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError(format!(
                    "{}:{}: expected key=value",
                    path.display(),
                    idx + 1
                )));
            };
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.input.as_os_str().is_empty() {
            return Err(ConfigError("input path is empty".into()));
        }
        if self.output_dir.as_os_str().is_empty() {
            return Err(ConfigError("output_dir is empty".into()));
        }
        if !(0.0..=3.0).contains(&self.delta_start)
            || !(0.0..=3.0).contains(&self.delta_end)
            || self.delta_end < self.delta_start
        {
            return Err(ConfigError(format!(
                "delta grid [{}, {}] must lie within [0, 3.0]",
                self.delta_start, self.delta_end
            )));
        }
        if !(self.delta_step > 0.0) {
            return Err(ConfigError("delta_step must be > 0".into()));
        }
        if let Some(tau) = self.tau {
            if !(0.0..=1.0).contains(&tau) {
                return Err(ConfigError(format!("tau {tau} outside [0, 1]")));
            }
        }
        if self.svd_k == 0 {
            return Err(ConfigError("svd_k must be >= 1".into()));
        }
        if !(self.svd_tol > 0.0) {
            return Err(ConfigError("svd_tol must be > 0".into()));
        }
        Ok(())
    }

    /// Deterministic `key=value` echo, sufficient to re-run identically.
    pub fn echo(&self) -> Vec<(String, String)> {
        let opt = |p: &Option<PathBuf>| {
            p.as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_default()
        };
        let mut pairs: BTreeMap<&'static str, String> = BTreeMap::new();
        pairs.insert("input", self.input.display().to_string());
        pairs.insert("scores", opt(&self.scores));
        pairs.insert("labels", opt(&self.labels));
        pairs.insert("output_dir", self.output_dir.display().to_string());
        pairs.insert("policy", policy_name(self.policy).to_string());
        pairs.insert(
            "tau",
            self.tau.map(|t| t.to_string()).unwrap_or_default(),
        );
        pairs.insert("neg_lexicon", opt(&self.neg_lexicon));
        pairs.insert("sent_lexicon", opt(&self.sent_lexicon));
        pairs.insert("stopwords", opt(&self.stopwords));
        pairs.insert("delta_start", self.delta_start.to_string());
        pairs.insert("delta_end", self.delta_end.to_string());
        pairs.insert("delta_step", self.delta_step.to_string());
        pairs.insert("include_retweets", self.include_retweets.to_string());
        pairs.insert("include_embedded", self.include_embedded.to_string());
        pairs.insert("scan_embedded", self.scan_embedded.to_string());
        pairs.insert("directed", self.directed.to_string());
        pairs.insert("normalized", self.normalized.to_string());
        pairs.insert("exact_match", self.exact_match.to_string());
        pairs.insert("svd_k", self.svd_k.to_string());
        pairs.insert("svd_tol", self.svd_tol.to_string());
        pairs.insert("svd_max_iter", self.svd_max_iter.to_string());
        pairs.insert("threads", self.threads.to_string());
        pairs.insert("max_line_len", self.max_line_len.to_string());
        pairs
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect()
    }
}
