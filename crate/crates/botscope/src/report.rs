//! CSV table rendering, summary/manifest emission, and cleanup-on-failure.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use botscope_core::botsense::{BotScore, DensityGrid};
use botscope_core::corpus::{AccountId, Label, TweetId};
use botscope_core::lexsent::{LogOddsRow, SweepRow};
use botscope_core::rtnet::{CentralityTable, RetweetGraph};
use sha2::{Digest, Sha256};

use crate::pipeline::{PipelineError, ReportBundle};

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().from_writer(Vec::new())
}

fn finish(writer: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(writer.into_inner().expect("csv flush cannot fail"))
        .expect("csv output is utf-8")
}

/// `account_id,label,friend,network,temporal,composite`; score cells are
/// empty for unscored accounts.
pub fn accounts_csv(
    labels: &BTreeMap<AccountId, Label>,
    scores: &BTreeMap<AccountId, BotScore>,
) -> String {
    let mut w = csv_writer();
    w.write_record(["account_id", "label", "friend", "network", "temporal", "composite"])
        .unwrap();
    for (id, label) in labels {
        match scores.get(id) {
            Some(s) => w
                .write_record([
                    id.to_string(),
                    label.to_string(),
                    s.friend.to_string(),
                    s.network.to_string(),
                    s.temporal.to_string(),
                    s.composite.to_string(),
                ])
                .unwrap(),
            None => w
                .write_record([
                    id.to_string(),
                    label.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                ])
                .unwrap(),
        }
    }
    finish(w)
}

/// `account_id,value,label`, already sorted by the table contract.
pub fn centrality_csv(table: &CentralityTable) -> String {
    let mut w = csv_writer();
    w.write_record(["account_id", "value", "label"]).unwrap();
    for row in table {
        w.write_record([
            row.account_id.to_string(),
            row.value.to_string(),
            row.label.to_string(),
        ])
        .unwrap();
    }
    finish(w)
}

/// Simple view: `retweeter_id,author_id,multiplicity` in key order.
pub fn edges_csv(graph: &RetweetGraph) -> String {
    let mut w = csv_writer();
    w.write_record(["retweeter_id", "author_id", "multiplicity"]).unwrap();
    for (&(retweeter, author), &mult) in &graph.simple {
        w.write_record([retweeter.to_string(), author.to_string(), mult.to_string()])
            .unwrap();
    }
    finish(w)
}

/// `account_id,label` in id order.
pub fn nodes_csv(graph: &RetweetGraph) -> String {
    let mut w = csv_writer();
    w.write_record(["account_id", "label"]).unwrap();
    for (id, label) in &graph.nodes {
        w.write_record([id.to_string(), label.to_string()]).unwrap();
    }
    finish(w)
}

/// Every retweet event, by retweet tweet id.
pub fn multiedges_csv(graph: &RetweetGraph) -> String {
    let mut w = csv_writer();
    w.write_record(["tweet_id", "retweeter_id", "author_id", "created_at"])
        .unwrap();
    for e in &graph.edges {
        w.write_record([
            e.tweet_id.to_string(),
            e.retweeter.to_string(),
            e.author.to_string(),
            e.created_at.to_string(),
        ])
        .unwrap();
    }
    finish(w)
}

/// One row per grid node, row-major: named coordinates then the density.
pub fn kde_csv(grid: &DensityGrid, axis_names: &[&str]) -> String {
    let mut w = csv_writer();
    let mut header: Vec<&str> = axis_names.to_vec();
    header.push("density");
    w.write_record(&header).unwrap();
    for (flat, &value) in grid.values.iter().enumerate() {
        let mut row: Vec<String> = grid
            .node_coords(flat)
            .into_iter()
            .map(|c| c.to_string())
            .collect();
        row.push(value.to_string());
        w.write_record(&row).unwrap();
    }
    finish(w)
}

/// `word,score,count_bot,count_human`, most bot-leaning first.
pub fn logodds_csv(rows: &[LogOddsRow]) -> String {
    let mut w = csv_writer();
    w.write_record(["word", "score", "count_bot", "count_human"]).unwrap();
    for row in rows {
        w.write_record([
            row.word.clone(),
            row.score.to_string(),
            row.count_bot.to_string(),
            row.count_human.to_string(),
        ])
        .unwrap();
    }
    finish(w)
}

/// `delta_h,h_human,h_bot`; undefined cells stay empty.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut w = csv_writer();
    w.write_record(["delta_h", "h_human", "h_bot"]).unwrap();
    let cell = |v: Option<f64>| v.map(|h| h.to_string()).unwrap_or_default();
    for row in rows {
        w.write_record([
            format!("{:.1}", row.delta_h),
            cell(row.h_human),
            cell(row.h_bot),
        ])
        .unwrap();
    }
    finish(w)
}

/// `tweet_id,component_1..component_k`, one row per document.
pub fn projections_csv(tweet_ids: &[TweetId], projections: &[Vec<f64>]) -> String {
    let k = projections.first().map(|r| r.len()).unwrap_or(0);
    let mut w = csv_writer();
    let mut header = vec!["tweet_id".to_string()];
    header.extend((1..=k).map(|j| format!("component_{j}")));
    w.write_record(&header).unwrap();
    for (id, row) in tweet_ids.iter().zip(projections) {
        let mut record = vec![id.to_string()];
        record.extend(row.iter().map(|v| v.to_string()));
        w.write_record(&record).unwrap();
    }
    finish(w)
}

fn digest(contents: &str) -> String {
    hex::encode(Sha256::digest(contents.as_bytes()))
}

/// Write the bundle into `dir`: summary.txt, every table, run_meta.txt, and
/// manifest.txt with sha256 digests of the deterministic artifacts
/// (run_meta.txt carries timings, so it stays out of the manifest).
///
/// On any write failure every file written so far is removed.
pub fn emit_reports(
    bundle: &ReportBundle,
    dir: &Path,
) -> Result<Vec<(String, String)>, PipelineError> {
    fs::create_dir_all(dir)
        .map_err(|e| PipelineError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let mut written: Vec<std::path::PathBuf> = Vec::new();
    let try_write = |name: &str, contents: &str, written: &mut Vec<std::path::PathBuf>| {
        let path = dir.join(name);
        match fs::write(&path, contents) {
            Ok(()) => {
                written.push(path);
                Ok(())
            }
            Err(e) => {
                for file in written.iter() {
                    let _ = fs::remove_file(file);
                }
                Err(PipelineError::Io(format!(
                    "cannot write {}: {e}",
                    path.display()
                )))
            }
        }
    };

    let summary: String = bundle
        .summary
        .iter()
        .map(|(k, v)| format!("{k}={v}\n"))
        .collect();
    let mut manifest_entries: Vec<(String, String)> = vec![(
        "summary.txt".to_string(),
        digest(&summary),
    )];
    try_write("summary.txt", &summary, &mut written)?;
    for (name, contents) in &bundle.tables {
        manifest_entries.push((name.clone(), digest(contents)));
        try_write(name, contents, &mut written)?;
    }
    try_write("run_meta.txt", &bundle.run_meta, &mut written)?;
    manifest_entries.sort();
    let manifest: String = manifest_entries
        .iter()
        .map(|(name, hash)| format!("{hash}  {name}\n"))
        .collect();
    try_write("manifest.txt", &manifest, &mut written)?;
    Ok(manifest_entries)
}
