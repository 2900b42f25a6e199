//! Gaussian kernel density estimation over a regular grid in 1-3 dimensions.
//!
//! Evaluation is exactly `(1/n) sum_j prod_i N(x_i; p_ji, h_i)` with the sum
//! over points in input order and the product over dimensions in index order,
//! so results are bitwise reproducible. Per-dimension kernel factors are
//! tabulated once per axis, which keeps the 3D grid affordable without
//! changing any operation order.

use alloc::vec;
use alloc::vec::Vec;

use super::BotsenseError;

/// sqrt(2*pi), the Gaussian normalization constant's denominator factor.
const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_5;

/// Kernel density evaluated on a regular grid over the unit hypercube.
///
/// `values` is row-major with dimension 0 slowest: for 2D, the node at axis
/// indices `(i, j)` lives at `values[i * grid_points + j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub dims: usize,
    pub grid_points: usize,
    pub bandwidths: Vec<f64>,
    pub values: Vec<f64>,
}

impl DensityGrid {
    /// Coordinate of axis index `g`: grids span `[0,1]` inclusive.
    pub fn coord(&self, g: usize) -> f64 {
        g as f64 / (self.grid_points - 1) as f64
    }

    /// Axis indices of a flat node index, dimension 0 first.
    pub fn node_indices(&self, flat: usize) -> Vec<usize> {
        let mut idx = vec![0usize; self.dims];
        let mut rest = flat;
        for d in (0..self.dims).rev() {
            idx[d] = rest % self.grid_points;
            rest /= self.grid_points;
        }
        idx
    }

    /// Coordinates of a flat node index.
    pub fn node_coords(&self, flat: usize) -> Vec<f64> {
        self.node_indices(flat).iter().map(|&g| self.coord(g)).collect()
    }

    /// Iterated trapezoidal integral over the grid.
    pub fn integral(&self) -> f64 {
        let g = self.grid_points;
        let step = 1.0 / (g - 1) as f64;
        let cell = libm::pow(step, self.dims as f64);
        let mut total = 0.0;
        for (flat, &v) in self.values.iter().enumerate() {
            let mut w = 1.0;
            for &i in &self.node_indices(flat) {
                if i == 0 || i == g - 1 {
                    w *= 0.5;
                }
            }
            total += w * v * cell;
        }
        total
    }

    /// Check positivity and that the grid captures essentially all the mass.
    /// A little probability may leak outside the unit cube when points sit
    /// near a boundary, hence the `[0.90, 1.02]` tolerance.
    pub fn validate(&self) -> Result<(), BotsenseError> {
        if self.values.iter().any(|&v| !(v >= 0.0)) {
            return Err(BotsenseError::BadDensityMass(f64::NAN));
        }
        let mass = self.integral();
        if !(0.90..=1.02).contains(&mass) {
            return Err(BotsenseError::BadDensityMass(mass));
        }
        Ok(())
    }
}

/// Scott's rule per dimension: `h_i = sigma_i * n^(-1/(d+4))` with the sample
/// standard deviation (denominator `n-1`). Constant dimensions get a
/// grid-scale floor of 0.01.
pub fn scott_bandwidth(points: &[Vec<f64>]) -> Result<Vec<f64>, BotsenseError> {
    let n = points.len();
    if n < 2 {
        return Err(BotsenseError::TooFewPoints { needed: 2, got: n });
    }
    let dims = points[0].len();
    for (index, p) in points.iter().enumerate() {
        if p.len() != dims {
            return Err(BotsenseError::DimMismatch {
                index,
                expected: dims,
                got: p.len(),
            });
        }
    }
    let factor = libm::pow(n as f64, -1.0 / (dims as f64 + 4.0));
    let mut bandwidths = Vec::with_capacity(dims);
    for d in 0..dims {
        // A constant column means sigma = 0; detect it exactly rather than
        // through the accumulated sum, which can leave rounding dust.
        let constant = points.iter().all(|p| p[d] == points[0][d]);
        if constant {
            bandwidths.push(0.01);
            continue;
        }
        let mean = points.iter().map(|p| p[d]).sum::<f64>() / n as f64;
        let ss: f64 = points.iter().map(|p| (p[d] - mean) * (p[d] - mean)).sum();
        let sd = libm::sqrt(ss / (n - 1) as f64);
        let h = sd * factor;
        bandwidths.push(if h > 0.0 { h } else { 0.01 });
    }
    Ok(bandwidths)
}

/// Per-dimension Gaussian factors tabulated at every (axis point, sample)
/// pair. `eval_node` on these tables reproduces the direct double loop
/// bitwise, so callers may evaluate disjoint node ranges in parallel.
pub struct KernelTables {
    dims: usize,
    grid_points: usize,
    n_points: usize,
    /// Per dim: `grid_points * n_points` factors, axis-major.
    tables: Vec<Vec<f64>>,
    bandwidths: Vec<f64>,
}

/// Validate inputs and tabulate kernel factors.
pub fn kernel_tables(
    points: &[Vec<f64>],
    grid_points: usize,
    bandwidths: &[f64],
) -> Result<KernelTables, BotsenseError> {
    let dims = bandwidths.len();
    if !(1..=3).contains(&dims) {
        return Err(BotsenseError::UnsupportedDims(dims));
    }
    if grid_points < 2 {
        return Err(BotsenseError::GridTooSmall(grid_points));
    }
    if points.is_empty() {
        return Err(BotsenseError::TooFewPoints { needed: 1, got: 0 });
    }
    for (dim, &h) in bandwidths.iter().enumerate() {
        if !(h > 0.0) || !h.is_finite() {
            return Err(BotsenseError::BandwidthNotPositive { dim });
        }
    }
    for (index, p) in points.iter().enumerate() {
        if p.len() != dims {
            return Err(BotsenseError::DimMismatch {
                index,
                expected: dims,
                got: p.len(),
            });
        }
        for (dim, &value) in p.iter().enumerate() {
            if !value.is_finite() || !(0.0..=1.0).contains(&value) {
                return Err(BotsenseError::PointOutOfRange { index, dim, value });
            }
        }
    }
    let n = points.len();
    let mut tables = Vec::with_capacity(dims);
    for d in 0..dims {
        let h = bandwidths[d];
        let coef = 1.0 / (h * SQRT_TWO_PI);
        let two_h_sq = 2.0 * h * h;
        let mut table = Vec::with_capacity(grid_points * n);
        for g in 0..grid_points {
            let x = g as f64 / (grid_points - 1) as f64;
            for p in points {
                let dx = x - p[d];
                table.push(coef * libm::exp(-(dx * dx) / two_h_sq));
            }
        }
        tables.push(table);
    }
    Ok(KernelTables {
        dims,
        grid_points,
        n_points: n,
        tables,
        bandwidths: bandwidths.to_vec(),
    })
}

impl KernelTables {
    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn grid_points(&self) -> usize {
        self.grid_points
    }

    /// Total number of grid nodes.
    pub fn node_count(&self) -> usize {
        self.grid_points.pow(self.dims as u32)
    }

    /// Density at one flat node index.
    pub fn eval_node(&self, flat: usize) -> f64 {
        let g = self.grid_points;
        let n = self.n_points;
        let mut axis_idx = [0usize; 3];
        let mut rest = flat;
        for d in (0..self.dims).rev() {
            axis_idx[d] = rest % g;
            rest /= g;
        }
        let mut sum = 0.0;
        for j in 0..n {
            let mut k = self.tables[0][axis_idx[0] * n + j];
            for d in 1..self.dims {
                k *= self.tables[d][axis_idx[d] * n + j];
            }
            sum += k;
        }
        sum / n as f64
    }

    /// Densities for a contiguous flat-node range, in order.
    pub fn eval_range(&self, start: usize, end: usize) -> Vec<f64> {
        (start..end).map(|flat| self.eval_node(flat)).collect()
    }

    /// Assemble a grid from values produced by `eval_range` chunks.
    pub fn into_grid(self, values: Vec<f64>) -> DensityGrid {
        debug_assert_eq!(values.len(), self.node_count());
        DensityGrid {
            dims: self.dims,
            grid_points: self.grid_points,
            bandwidths: self.bandwidths,
            values,
        }
    }
}

/// Evaluate the KDE of `points` on a `grid_points`-per-axis grid.
pub fn kde(
    points: &[Vec<f64>],
    grid_points: usize,
    bandwidths: &[f64],
) -> Result<DensityGrid, BotsenseError> {
    let tables = kernel_tables(points, grid_points, bandwidths)?;
    let values = tables.eval_range(0, tables.node_count());
    Ok(tables.into_grid(values))
}
