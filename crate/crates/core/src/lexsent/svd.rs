//! Truncated SVD by orthogonal iteration on the Gram operator.
//!
//! The iteration is `V <- orth(A^T (A V))`, which never forms `A^T A` and so
//! works directly on sparse document-term matrices. Singular-value estimates
//! are the column norms of `A V`; iteration stops when no estimate moves by
//! the tolerance between successive rounds. Everything is deterministic: the
//! start basis is the identity block plus a fixed pseudo-random perturbation
//! (so a start vector can never be exactly orthogonal to a dominant singular
//! direction), and each right vector's sign is fixed by making its
//! largest-magnitude component positive.

use alloc::vec;
use alloc::vec::Vec;

use super::LexsentError;

/// Minimal matrix interface for the iteration.
pub trait LinearOp {
    fn n_rows(&self) -> usize;
    fn n_cols(&self) -> usize;
    /// `out = A v`, `v` of length `n_cols`, `out` of length `n_rows`.
    fn mul_vec(&self, v: &[f64], out: &mut [f64]);
    /// `out = A^T u`, `u` of length `n_rows`, `out` of length `n_cols`.
    fn t_mul_vec(&self, u: &[f64], out: &mut [f64]);
}

/// Row-major dense matrix, mostly for tests and small decompositions.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> DenseMatrix {
        assert_eq!(data.len(), rows * cols);
        DenseMatrix { rows, cols, data }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }
}

impl LinearOp for DenseMatrix {
    fn n_rows(&self) -> usize {
        self.rows
    }

    fn n_cols(&self) -> usize {
        self.cols
    }

    fn mul_vec(&self, v: &[f64], out: &mut [f64]) {
        for (row, o) in self.data.chunks_exact(self.cols).zip(out) {
            *o = row.iter().zip(v).map(|(x, w)| x * w).sum();
        }
    }

    fn t_mul_vec(&self, u: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for (row, &ui) in self.data.chunks_exact(self.cols).zip(u) {
            for (o, x) in out.iter_mut().zip(row) {
                *o += x * ui;
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SvdOptions {
    /// Stop when every singular-value estimate moves less than this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SvdOptions {
    fn default() -> Self {
        SvdOptions {
            tol: 1e-10,
            max_iter: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvdResult {
    /// Top-k singular values, descending.
    pub singular_values: Vec<f64>,
    /// Matching right-singular vectors, each of length `n_cols`.
    pub right_vectors: Vec<Vec<f64>>,
    /// `A` times the right vectors: one length-k row per input row.
    pub projections: Vec<Vec<f64>>,
    pub iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

/// Modified Gram-Schmidt with a second pass; a collapsed column is replaced
/// by the first canonical basis vector still independent of the others.
fn orthonormalize(cols: &mut [Vec<f64>], dim: usize) {
    for j in 0..cols.len() {
        let (done, rest) = cols.split_at_mut(j);
        let col = &mut rest[0];
        for _ in 0..2 {
            for q in done.iter() {
                let d = dot(q, col);
                for (c, &qv) in col.iter_mut().zip(q) {
                    *c -= d * qv;
                }
            }
        }
        let nrm = norm(col);
        if nrm > 1e-12 {
            for c in col.iter_mut() {
                *c /= nrm;
            }
            continue;
        }
        // Breakdown: the subspace has lower rank here. Fill deterministically.
        'basis: for b in 0..dim {
            let mut candidate = vec![0.0; dim];
            candidate[b] = 1.0;
            for _ in 0..2 {
                for q in done.iter() {
                    let d = dot(q, &candidate);
                    for (c, &qv) in candidate.iter_mut().zip(q) {
                        *c -= d * qv;
                    }
                }
            }
            let cn = norm(&candidate);
            if cn > 1e-6 {
                for c in candidate.iter_mut() {
                    *c /= cn;
                }
                *col = candidate;
                break 'basis;
            }
        }
    }
}

// splitmix64; only used to break symmetry in the start basis.
fn next_seed(state: &mut u64) -> f64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 53) as f64
}

/// Top-k singular triplets of `a`.
pub fn truncated_svd<A: LinearOp + ?Sized>(
    a: &A,
    k: usize,
    opts: &SvdOptions,
) -> Result<SvdResult, LexsentError> {
    let (m, n) = (a.n_rows(), a.n_cols());
    let min_dim = m.min(n);
    if k == 0 || k > min_dim {
        return Err(LexsentError::BadRank { k, min_dim });
    }
    if !(opts.tol > 0.0) {
        return Err(LexsentError::BadTolerance(opts.tol));
    }

    let mut v: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut seed = 0x005E_ED0F_5EEDu64;
    for j in 0..k {
        let mut col = vec![0.0; n];
        col[j] = 1.0;
        for c in col.iter_mut() {
            *c += 1e-3 * (next_seed(&mut seed) - 0.5);
        }
        v.push(col);
    }
    orthonormalize(&mut v, n);

    let mut z: Vec<Vec<f64>> = vec![vec![0.0; m]; k];
    let mut sigma = vec![0.0f64; k];
    let mut sigma_prev: Option<Vec<f64>> = None;
    let mut converged_at = None;
    let mut drift = f64::INFINITY;
    for iter in 1..=opts.max_iter {
        for j in 0..k {
            a.mul_vec(&v[j], &mut z[j]);
            sigma[j] = norm(&z[j]);
        }
        if let Some(prev) = &sigma_prev {
            drift = sigma
                .iter()
                .zip(prev)
                .map(|(s, p)| libm::fabs(s - p))
                .fold(0.0, f64::max);
            if drift < opts.tol {
                converged_at = Some(iter);
                break;
            }
        }
        sigma_prev = Some(sigma.clone());
        for j in 0..k {
            a.t_mul_vec(&z[j], &mut v[j]);
        }
        orthonormalize(&mut v, n);
    }
    let Some(iterations) = converged_at else {
        return Err(LexsentError::NoConvergence {
            residual: drift,
            max_iter: opts.max_iter,
        });
    };

    // Order descending, then fix signs.
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]).then(i.cmp(&j)));
    let singular_values: Vec<f64> = order.iter().map(|&i| sigma[i]).collect();
    let mut right_vectors: Vec<Vec<f64>> = order.iter().map(|&i| v[i].clone()).collect();
    for vec_j in &mut right_vectors {
        let mut best = 0;
        for (i, value) in vec_j.iter().enumerate() {
            if libm::fabs(*value) > libm::fabs(vec_j[best]) {
                best = i;
            }
        }
        if vec_j[best] < 0.0 {
            for c in vec_j.iter_mut() {
                *c = -*c;
            }
        }
    }

    let mut projections = vec![vec![0.0; k]; m];
    let mut column = vec![0.0; m];
    for (j, vec_j) in right_vectors.iter().enumerate() {
        a.mul_vec(vec_j, &mut column);
        for (row, &value) in projections.iter_mut().zip(&column) {
            row[j] = value;
        }
    }

    Ok(SvdResult {
        singular_values,
        right_vectors,
        projections,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix_exact() {
        let a = DenseMatrix::new(
            3,
            3,
            vec![3.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 1.0],
        );
        let r = truncated_svd(&a, 2, &SvdOptions::default()).unwrap();
        assert!((r.singular_values[0] - 3.0).abs() < 1e-9);
        assert!((r.singular_values[1] - 2.0).abs() < 1e-9);
        // Right vectors align with the axes; sign convention makes them +e_i.
        assert!((r.right_vectors[0][0] - 1.0).abs() < 1e-6);
        assert!((r.right_vectors[1][1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn rank_one_outer_product() {
        // u, v unit vectors: singular values are (1, 0).
        let u = [1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0];
        let v = [2.0 / 11.0, 6.0 / 11.0, 9.0 / 11.0];
        let mut data = Vec::new();
        for ui in u {
            for vj in v {
                data.push(ui * vj);
            }
        }
        let a = DenseMatrix::new(3, 3, data);
        let r = truncated_svd(&a, 2, &SvdOptions::default()).unwrap();
        assert!((r.singular_values[0] - 1.0).abs() < 1e-9);
        assert!(r.singular_values[1].abs() < 1e-9);
    }

    #[test]
    fn right_vectors_orthonormal_and_projections_consistent() {
        let a = DenseMatrix::new(
            4,
            3,
            vec![
                2.0, -1.0, 0.5, 0.0, 3.0, 1.0, -1.0, 0.5, 2.5, 1.5, 0.0, -2.0,
            ],
        );
        let r = truncated_svd(&a, 3, &SvdOptions::default()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let d = dot(&r.right_vectors[i], &r.right_vectors[j]);
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((d - expected).abs() < 1e-6, "V^T V [{i}][{j}] = {d}");
            }
        }
        // Projection columns are A v_j: their norms are the reported
        // singular values exactly, and they are near-orthogonal (residual
        // angles between converged vectors stay below the sigma tolerance
        // only up to the spectral gaps, so the off-diagonal bound is looser).
        for i in 0..3 {
            for j in 0..3 {
                let g: f64 = r.projections.iter().map(|row| row[i] * row[j]).sum();
                if i == j {
                    let expected = r.singular_values[i] * r.singular_values[i];
                    assert!((g - expected).abs() < 1e-9, "Gram [{i}][{i}] = {g}");
                } else {
                    assert!(g.abs() < 1e-3, "Gram [{i}][{j}] = {g}");
                }
            }
        }
        for pair in r.singular_values.windows(2) {
            assert!(pair[0] >= pair[1]);
        }
    }

    #[test]
    fn bad_rank_errors() {
        let a = DenseMatrix::new(2, 2, vec![1.0, 0.0, 0.0, 1.0]);
        assert!(matches!(
            truncated_svd(&a, 3, &SvdOptions::default()),
            Err(LexsentError::BadRank { k: 3, min_dim: 2 })
        ));
        assert!(matches!(
            truncated_svd(&a, 0, &SvdOptions::default()),
            Err(LexsentError::BadRank { k: 0, min_dim: 2 })
        ));
    }

    #[test]
    fn bad_tolerance_errors() {
        let a = DenseMatrix::new(2, 2, vec![1.0, 0.0, 0.0, 1.0]);
        let opts = SvdOptions {
            tol: 0.0,
            max_iter: 10,
        };
        assert!(matches!(
            truncated_svd(&a, 1, &opts),
            Err(LexsentError::BadTolerance(_))
        ));
    }

    #[test]
    fn zero_matrix_converges_to_zero() {
        let a = DenseMatrix::new(3, 2, vec![0.0; 6]);
        let r = truncated_svd(&a, 2, &SvdOptions::default()).unwrap();
        assert_eq!(r.singular_values, vec![0.0, 0.0]);
    }
}
