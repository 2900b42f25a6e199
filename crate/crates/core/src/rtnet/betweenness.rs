//! Exact betweenness centrality via Brandes' algorithm over the simple view.
//!
//! Accumulation is chunked over source nodes with a fixed chunk size. The
//! sequential path and any parallel caller that evaluates chunks
//! independently and folds them in chunk order produce bitwise-identical
//! totals, so the output never depends on the degree of parallelism.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::{sort_table, CentralityRow, CentralityTable, RetweetGraph, RtnetError};
use crate::corpus::AccountId;

/// Fixed source-chunk size for deterministic accumulation.
pub const SOURCE_CHUNK: usize = 128;

/// Whether shortest paths follow edge direction or ignore it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphView {
    Directed,
    Undirected,
}

/// Graph flattened to index space, ready for per-source sweeps.
pub struct BetweennessProblem {
    node_ids: Vec<AccountId>,
    labels: Vec<crate::corpus::Label>,
    adjacency: Vec<Vec<u32>>,
}

impl BetweennessProblem {
    /// Build from the graph's simple view. Self-loops never lie on a
    /// shortest path and are dropped from the adjacency.
    pub fn new(graph: &RetweetGraph, view: GraphView) -> BetweennessProblem {
        let node_ids: Vec<AccountId> = graph.nodes.keys().copied().collect();
        let labels = graph.nodes.values().copied().collect();
        let index: alloc::collections::BTreeMap<AccountId, u32> = node_ids
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, i as u32))
            .collect();
        let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); node_ids.len()];
        for &(from, to) in graph.simple.keys() {
            if from == to {
                continue;
            }
            let (u, v) = (index[&from], index[&to]);
            adjacency[u as usize].push(v);
            if view == GraphView::Undirected {
                adjacency[v as usize].push(u);
            }
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
            nbrs.dedup();
        }
        BetweennessProblem {
            node_ids,
            labels,
            adjacency,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_ids.len()
    }

    /// Summed dependency contributions of sources `start..end`, in source
    /// order. One Brandes sweep per source.
    pub fn source_chunk(&self, start: usize, end: usize) -> Vec<f64> {
        let n = self.node_count();
        let mut acc = vec![0.0f64; n];
        let mut dist: Vec<i32> = vec![-1; n];
        let mut sigma: Vec<f64> = vec![0.0; n];
        let mut delta: Vec<f64> = vec![0.0; n];
        let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut stack: Vec<u32> = Vec::with_capacity(n);
        let mut queue: VecDeque<u32> = VecDeque::new();

        for s in start..end {
            for i in 0..n {
                dist[i] = -1;
                sigma[i] = 0.0;
                delta[i] = 0.0;
                preds[i].clear();
            }
            stack.clear();
            queue.clear();
            dist[s] = 0;
            sigma[s] = 1.0;
            queue.push_back(s as u32);
            while let Some(v) = queue.pop_front() {
                stack.push(v);
                let dv = dist[v as usize];
                for &w in &self.adjacency[v as usize] {
                    if dist[w as usize] < 0 {
                        dist[w as usize] = dv + 1;
                        queue.push_back(w);
                    }
                    if dist[w as usize] == dv + 1 {
                        sigma[w as usize] += sigma[v as usize];
                        preds[w as usize].push(v);
                    }
                }
            }
            while let Some(w) = stack.pop() {
                let coeff = (1.0 + delta[w as usize]) / sigma[w as usize];
                for &v in &preds[w as usize] {
                    delta[v as usize] += sigma[v as usize] * coeff;
                }
                if w as usize != s {
                    acc[w as usize] += delta[w as usize];
                }
            }
        }
        acc
    }

    /// Assemble the sorted table from accumulated dependencies.
    pub fn finish(&self, mut acc: Vec<f64>, normalized: bool) -> Result<CentralityTable, RtnetError> {
        let n = self.node_count();
        if normalized {
            if n < 3 {
                return Err(RtnetError::TooFewNodes { got: n });
            }
            let scale = 1.0 / ((n - 1) as f64 * (n - 2) as f64);
            for v in &mut acc {
                *v *= scale;
            }
        }
        Ok(sort_table(
            acc.iter()
                .enumerate()
                .map(|(i, &value)| CentralityRow {
                    account_id: self.node_ids[i],
                    value,
                    label: self.labels[i],
                })
                .collect(),
        ))
    }
}

/// Betweenness centrality of every node, sequential reference path.
///
/// Unreachable pairs contribute zero. Normalization divides by
/// `(n-1)(n-2)`; on the undirected view each unordered pair is accumulated
/// from both endpoints, so the same divisor yields the conventional
/// undirected normalization.
pub fn betweenness(
    graph: &RetweetGraph,
    view: GraphView,
    normalized: bool,
) -> Result<CentralityTable, RtnetError> {
    let problem = BetweennessProblem::new(graph, view);
    let n = problem.node_count();
    let mut acc = vec![0.0f64; n];
    let mut start = 0;
    while start < n {
        let end = (start + SOURCE_CHUNK).min(n);
        let chunk = problem.source_chunk(start, end);
        for (a, c) in acc.iter_mut().zip(&chunk) {
            *a += c;
        }
        start = end;
    }
    problem.finish(acc, normalized)
}
