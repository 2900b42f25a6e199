//! Deterministic parallel wrappers.
//!
//! Work splits into fixed-size chunks whose internal evaluation order never
//! depends on the thread count; chunk results are folded in chunk order. The
//! single-threaded paths walk the identical chunk structure, so any `threads`
//! setting produces bitwise-identical numbers.

use botscope_core::botsense::{kernel_tables, BotsenseError, DensityGrid};
use botscope_core::rtnet::{
    BetweennessProblem, CentralityTable, GraphView, RetweetGraph, RtnetError, SOURCE_CHUNK,
};
use rayon::prelude::*;

/// Grid nodes evaluated per KDE task.
const KDE_CHUNK: usize = 4096;

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool construction cannot fail")
}

/// KDE over the grid, parallel over node ranges.
pub fn kde_parallel(
    points: &[Vec<f64>],
    grid_points: usize,
    bandwidths: &[f64],
    threads: usize,
) -> Result<DensityGrid, BotsenseError> {
    let tables = kernel_tables(points, grid_points, bandwidths)?;
    let total = tables.node_count();
    let ranges: Vec<(usize, usize)> = (0..total)
        .step_by(KDE_CHUNK)
        .map(|start| (start, (start + KDE_CHUNK).min(total)))
        .collect();
    let chunks: Vec<Vec<f64>> = if threads <= 1 {
        ranges
            .iter()
            .map(|&(start, end)| tables.eval_range(start, end))
            .collect()
    } else {
        pool(threads).install(|| {
            ranges
                .par_iter()
                .map(|&(start, end)| tables.eval_range(start, end))
                .collect()
        })
    };
    let mut values = Vec::with_capacity(total);
    for chunk in chunks {
        values.extend(chunk);
    }
    Ok(tables.into_grid(values))
}

/// Betweenness with per-source-chunk accumulation folded in chunk order.
pub fn betweenness_parallel(
    graph: &RetweetGraph,
    view: GraphView,
    normalized: bool,
    threads: usize,
) -> Result<CentralityTable, RtnetError> {
    let problem = BetweennessProblem::new(graph, view);
    let n = problem.node_count();
    let ranges: Vec<(usize, usize)> = (0..n)
        .step_by(SOURCE_CHUNK)
        .map(|start| (start, (start + SOURCE_CHUNK).min(n)))
        .collect();
    let chunks: Vec<Vec<f64>> = if threads <= 1 {
        ranges
            .iter()
            .map(|&(start, end)| problem.source_chunk(start, end))
            .collect()
    } else {
        pool(threads).install(|| {
            ranges
                .par_iter()
                .map(|&(start, end)| problem.source_chunk(start, end))
                .collect()
        })
    };
    let mut acc = vec![0.0f64; n];
    for chunk in chunks {
        for (a, c) in acc.iter_mut().zip(&chunk) {
            *a += c;
        }
    }
    problem.finish(acc, normalized)
}
