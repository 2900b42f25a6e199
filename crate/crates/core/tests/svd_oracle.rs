//! Truncated-SVD oracle: compare against a full eigendecomposition of the
//! Gram matrix computed by cyclic Jacobi rotations. The oracle shares no code
//! with the orthogonal-iteration path it checks.

use botscope_core::lexsent::{truncated_svd, DenseMatrix, SvdOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Eigenvalues of a symmetric matrix by cyclic Jacobi, descending.
fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..200 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off < 1e-28 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eigen: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eigen.sort_by(|x, y| y.total_cmp(x));
    eigen
}

fn oracle_singular_values(m: &DenseMatrix) -> Vec<f64> {
    let n = m.cols;
    let mut gram = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for r in 0..m.rows {
                acc += m.get(r, i) * m.get(r, j);
            }
            gram[i][j] = acc;
        }
    }
    jacobi_eigenvalues(gram)
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .collect()
}

#[test]
fn random_matrices_match_gram_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0513_D0CA);
    let opts = SvdOptions {
        tol: 1e-12,
        max_iter: 20_000,
    };
    for case in 0..20 {
        let data: Vec<f64> = (0..10 * 8).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let matrix = DenseMatrix::new(10, 8, data);
        let expected = oracle_singular_values(&matrix);
        let k = 4;
        let result = truncated_svd(&matrix, k, &opts).unwrap();
        for j in 0..k {
            assert!(
                (result.singular_values[j] - expected[j]).abs() < 1e-6,
                "case {case} sigma_{j}: got {}, oracle {}",
                result.singular_values[j],
                expected[j]
            );
        }
    }
}

#[test]
fn gram_eigenvalues_of_projections_equal_squared_singular_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    let opts = SvdOptions {
        tol: 1e-12,
        max_iter: 20_000,
    };
    for _ in 0..5 {
        let data: Vec<f64> = (0..9 * 6).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let matrix = DenseMatrix::new(9, 6, data);
        let k = 3;
        let result = truncated_svd(&matrix, k, &opts).unwrap();
        let mut gram = vec![vec![0.0; k]; k];
        for i in 0..k {
            for j in 0..k {
                gram[i][j] = result
                    .projections
                    .iter()
                    .map(|row| row[i] * row[j])
                    .sum::<f64>();
            }
        }
        let eigen = jacobi_eigenvalues(gram);
        for (e, s) in eigen.iter().zip(&result.singular_values) {
            assert!((e - s * s).abs() < 1e-6, "eigen {e} vs sigma^2 {}", s * s);
        }
    }
}
