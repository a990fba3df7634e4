//! Numerical rank and null spaces of small dense matrices via SVD.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Default relative rank threshold factor, 2^-40.
pub const DEFAULT_RELATIVE_TOL: f64 = 9.094_947_017_729_282e-13;

/// Factor applied to the threshold by the stability probe.
pub const STABILITY_PROBE_FACTOR: f64 = 10.0;

/// How the singular-value cutoff is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TolerancePolicy {
    /// `tau = max(rows, cols) * sigma_max * factor`.
    Relative(f64),
    /// A fixed cutoff.
    Absolute(f64),
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy::Relative(DEFAULT_RELATIVE_TOL)
    }
}

impl TolerancePolicy {
    pub fn threshold(&self, sigma_max: f64, rows: usize, cols: usize) -> f64 {
        match *self {
            TolerancePolicy::Relative(f) => rows.max(cols) as f64 * sigma_max * f,
            TolerancePolicy::Absolute(t) => t,
        }
    }
}

/// Rank, spectrum and right null space of a matrix.
#[derive(Debug, Clone)]
pub struct RankInfo {
    pub rank: usize,
    /// The `min(rows, cols)` singular values, descending.
    pub singular_values: Vec<f64>,
    pub tolerance: f64,
    /// Rank agrees at `tolerance` and `10 * tolerance`.
    pub stable: bool,
    /// Orthonormal basis of the numerical null space (length `cols - rank`).
    pub null_space: Vec<DVector<f64>>,
}

/// Full SVD through faer: descending singular values with full `U` and `V`.
fn full_svd(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>, DMatrix<f64>) {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return (
            Vec::new(),
            DMatrix::identity(rows, rows),
            DMatrix::identity(cols, cols),
        );
    }
    let a = faer::Mat::<f64>::from_fn(rows, cols, |i, j| m[(i, j)]);
    let svd = a.svd().expect("SVD of a finite matrix converges");
    let s = svd.S().column_vector();
    let sigma: Vec<f64> = (0..rows.min(cols)).map(|i| s[i]).collect();
    let (u, v) = (svd.U(), svd.V());
    (
        sigma,
        DMatrix::from_fn(rows, rows, |i, j| u[(i, j)]),
        DMatrix::from_fn(cols, cols, |i, j| v[(i, j)]),
    )
}

/// Counts singular values above the policy threshold.
pub fn numerical_rank(m: &DMatrix<f64>, policy: TolerancePolicy) -> RankInfo {
    let (rows, cols) = m.shape();
    let (sigma, _, v) = full_svd(m);
    debug_assert!(sigma.windows(2).all(|w| w[0] >= w[1]));

    let sigma_max = sigma.first().copied().unwrap_or(0.0);
    let tolerance = policy.threshold(sigma_max, rows, cols);
    let rank = sigma.iter().filter(|&&s| s > tolerance).count();
    let probe = sigma
        .iter()
        .filter(|&&s| s > tolerance * STABILITY_PROBE_FACTOR)
        .count();

    RankInfo {
        rank,
        singular_values: sigma,
        tolerance,
        stable: rank == probe,
        null_space: (rank..cols).map(|j| v.column(j).into_owned()).collect(),
    }
}

/// Orthonormal basis for the part of `span(vectors)` orthogonal to the
/// orthonormal set `remove`. Directions shorter than `cutoff` after
/// projection are dropped.
pub fn orthogonal_complement_within(
    vectors: &[DVector<f64>],
    remove: &[DVector<f64>],
    cutoff: f64,
) -> Vec<DVector<f64>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let dim = vectors[0].len();
    let mut m = DMatrix::<f64>::zeros(dim, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        let mut w = v.clone();
        for r in remove {
            let c = r.dot(&w);
            w.axpy(-c, r, 1.0);
        }
        m.set_column(j, &w);
    }
    // Left singular vectors of the projected block span its column space.
    let (sigma, u, _) = full_svd(&m);
    sigma
        .iter()
        .take_while(|&&s| s > cutoff)
        .enumerate()
        .map(|(i, _)| u.column(i).into_owned())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_factor_is_two_to_minus_forty() {
        assert_eq!(DEFAULT_RELATIVE_TOL, 2f64.powi(-40));
    }

    #[test]
    fn zero_and_identity() {
        let z = numerical_rank(&DMatrix::zeros(3, 4), TolerancePolicy::default());
        assert_eq!(z.rank, 0);
        assert_eq!(z.null_space.len(), 4);
        let i = numerical_rank(&DMatrix::identity(3, 3), TolerancePolicy::default());
        assert_eq!(i.rank, 3);
        assert!(i.stable);
        assert_eq!(i.singular_values, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn wide_matrix_null_space() {
        let m = DMatrix::from_row_slice(1, 4, &[-1.0, 0.0, 1.0, 0.0]);
        let info = numerical_rank(&m, TolerancePolicy::default());
        assert_eq!(info.rank, 1);
        assert_eq!(info.singular_values.len(), 1);
        assert_eq!(info.null_space.len(), 3);
        for v in &info.null_space {
            assert!((&m * v).norm() < 1e-12);
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_row_matrix() {
        let info = numerical_rank(&DMatrix::zeros(0, 2), TolerancePolicy::default());
        assert_eq!(info.rank, 0);
        assert!(info.singular_values.is_empty());
        assert_eq!(info.null_space.len(), 2);
    }

    #[test]
    fn stability_probe_flags_near_degenerate() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 2e-12]));
        let info = numerical_rank(&m, TolerancePolicy::default());
        assert_eq!(info.rank, 1 + usize::from(2e-12 > info.tolerance));
        assert!(!info.stable);
    }

    #[test]
    fn absolute_policy() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 0.1]));
        assert_eq!(numerical_rank(&m, TolerancePolicy::Absolute(0.5)).rank, 1);
    }

    #[test]
    fn rank_deficient_products() {
        // Low-rank products with exact zeros, a pattern some SVD routines get wrong.
        let a = DMatrix::from_fn(6, 2, |i, j| ((i * 5 + j * 3) % 7) as f64 - 3.0);
        let b = DMatrix::from_row_slice(2, 5, &[1.0, 0.0, -2.0, 0.0, 0.5, 0.0, 0.0, 1.0, 3.0, 0.0]);
        let m = &a * &b;
        let info = numerical_rank(&m, TolerancePolicy::default());
        assert_eq!(info.rank, 2);
        assert_eq!(info.null_space.len(), 3);
        for v in &info.null_space {
            assert!((&m * v).norm() < 1e-12 * m.norm());
        }
    }

    #[test]
    fn complement_stays_in_span() {
        let v = |x: [f64; 4]| DVector::from_column_slice(&x);
        let r = [v([0.5, 0.5, 0.5, 0.5])];
        let out = orthogonal_complement_within(
            &[
                v([1.0, 1.0, 1.0, 1.0]),
                v([1.0, 0.0, 1.0, 0.0]),
                v([0.0, 1.0, 0.0, 1.0]),
            ],
            &r,
            1e-9,
        );
        assert_eq!(out.len(), 1);
        assert!((out[0][0] - out[0][2]).abs() < 1e-12);
        assert!((out[0][0] + out[0][1]).abs() < 1e-12);
    }

    #[test]
    fn complement_removes_directions() {
        let e = |i: usize| {
            let mut v = DVector::zeros(3);
            v[i] = 1.0;
            v
        };
        let out = orthogonal_complement_within(&[e(0), e(1)], &[e(0)], 1e-9);
        assert_eq!(out.len(), 1);
        assert!((out[0][1].abs() - 1.0).abs() < 1e-12);
    }
}
