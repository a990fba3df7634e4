//! Norm-independent rigidity analysis: reports, flex classification,
//! finite-difference checks and isometries.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::RigidityError;
use crate::framework::{Framework, NormSpec, Placement};
use crate::graph::Edge;
use crate::linalg::{numerical_rank, orthogonal_complement_within, TolerancePolicy};
use crate::{lq, polytope};

/// Relative residual below which `R u` counts as zero.
pub const FLEX_RESIDUAL_RTOL: f64 = 1e-9;

/// Relative distance from the translation space below which a flex is trivial.
pub const TRIVIAL_FLEX_RTOL: f64 = 1e-9;

/// Null-space directions shorter than this after removing translations are
/// numerical noise.
const NONTRIVIAL_CUTOFF: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub matrix_rows: usize,
    pub matrix_cols: usize,
    pub rank: usize,
    pub nullity: usize,
    /// Orthonormal basis of the infinitesimal flex space.
    pub flex_basis: Vec<Vec<f64>>,
    /// Orthonormal basis of the flexes orthogonal to translations.
    pub nontrivial_flexes: Vec<Vec<f64>>,
    pub trivial_dim: usize,
    pub is_rigid: bool,
    pub is_minimal: bool,
    pub singular_values: Vec<f64>,
    pub tolerance_used: f64,
    /// Rank unchanged when the threshold is multiplied by ten.
    pub stable: bool,
}

impl RigidityReport {
    pub fn from_matrix(
        m: &DMatrix<f64>,
        n: usize,
        d: usize,
        policy: TolerancePolicy,
    ) -> RigidityReport {
        let info = numerical_rank(m, policy);
        let translations = translation_basis(n, d);
        let nontrivial =
            orthogonal_complement_within(&info.null_space, &translations, NONTRIVIAL_CUTOFF);
        let is_rigid = info.rank == d * n - d;
        RigidityReport {
            matrix_rows: m.nrows(),
            matrix_cols: m.ncols(),
            rank: info.rank,
            nullity: m.ncols() - info.rank,
            flex_basis: info
                .null_space
                .iter()
                .map(|v| v.as_slice().to_vec())
                .collect(),
            nontrivial_flexes: nontrivial.iter().map(|v| v.as_slice().to_vec()).collect(),
            trivial_dim: d,
            is_rigid,
            is_minimal: is_rigid && info.rank == m.nrows(),
            singular_values: info.singular_values,
            tolerance_used: info.tolerance,
            stable: info.stable,
        }
    }
}

/// Orthonormal basis of the uniform translations `(a, ..., a)`.
pub fn translation_basis(n: usize, d: usize) -> Vec<DVector<f64>> {
    let scale = 1.0 / (n as f64).sqrt();
    (0..d)
        .map(|k| DVector::from_fn(n * d, |i, _| if i % d == k { scale } else { 0.0 }))
        .collect()
}

/// The rigidity matrix for either norm family. Polytopic frameworks must be
/// well-positioned.
pub fn rigidity_matrix(f: &Framework) -> Result<DMatrix<f64>, RigidityError> {
    match f.norm() {
        NormSpec::Lq(_) => lq::rigidity_matrix_lq(f),
        NormSpec::Polytope(_) => polytope::rigidity_matrix_poly(f, false),
    }
}

/// Rank analysis for either norm family.
pub fn analyze(f: &Framework, policy: TolerancePolicy) -> Result<RigidityReport, RigidityError> {
    let m = rigidity_matrix(f)?;
    Ok(RigidityReport::from_matrix(
        &m,
        f.graph().vertex_count(),
        f.dim(),
        policy,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FlexClass {
    Trivial,
    NonTrivial,
    NotAFlex,
}

/// Classifies `u` as a trivial flex, a nontrivial flex, or not a flex.
pub fn classify_flex(f: &Framework, u: &[f64]) -> Result<FlexClass, RigidityError> {
    let m = rigidity_matrix(f)?;
    classify_with_matrix(&m, f.graph().vertex_count(), f.dim(), u)
}

pub(crate) fn classify_with_matrix(
    m: &DMatrix<f64>,
    n: usize,
    d: usize,
    u: &[f64],
) -> Result<FlexClass, RigidityError> {
    if u.len() != n * d {
        return Err(RigidityError::DimensionMismatch {
            expected: n * d,
            got: u.len(),
        });
    }
    let u = DVector::from_column_slice(u);
    let scale = m.norm().max(1.0) * u.norm();
    if (m * &u).norm() > FLEX_RESIDUAL_RTOL * scale {
        return Ok(FlexClass::NotAFlex);
    }
    let mut rest = u.clone();
    for t in translation_basis(n, d) {
        let c = t.dot(&rest);
        rest.axpy(-c, &t, 1.0);
    }
    Ok(if rest.norm() <= TRIVIAL_FLEX_RTOL * u.norm() {
        FlexClass::Trivial
    } else {
        FlexClass::NonTrivial
    })
}

/// Per-edge length deviations `| ||(p_i + t u_i) - (p_j + t u_j)|| - ||p_i - p_j|| |`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlexDeviationTable {
    pub t_grid: Vec<f64>,
    pub edges: Vec<Edge>,
    /// `deviations[e][k]` for edge `e` at `t_grid[k]`.
    pub deviations: Vec<Vec<f64>>,
}

impl FlexDeviationTable {
    /// Largest deviation over all edges at each grid point.
    pub fn max_deviation(&self) -> Vec<f64> {
        (0..self.t_grid.len())
            .map(|k| self.deviations.iter().map(|row| row[k]).fold(0.0, f64::max))
            .collect()
    }

    /// Largest `deviation / t` over all edges at each grid point.
    pub fn max_ratio(&self) -> Vec<f64> {
        self.max_deviation()
            .iter()
            .zip(&self.t_grid)
            .map(|(d, t)| d / t)
            .collect()
    }

    /// The ratio `deviation / t` never increases along the grid and ends
    /// below `final_bound`.
    pub fn ratio_decreases_to(&self, final_bound: f64) -> bool {
        let r = self.max_ratio();
        r.windows(2).all(|w| w[1] <= w[0]) && r.last().is_some_and(|&x| x < final_bound)
    }
}

pub fn finite_difference_flex_check(
    f: &Framework,
    u: &[f64],
    t_grid: &[f64],
) -> Result<FlexDeviationTable, RigidityError> {
    let n = f.graph().vertex_count();
    let d = f.dim();
    if u.len() != n * d {
        return Err(RigidityError::DimensionMismatch {
            expected: n * d,
            got: u.len(),
        });
    }
    if t_grid.iter().any(|&t| t <= 0.0) || t_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(RigidityError::InvalidParameter(
            "t grid must be positive and strictly decreasing".into(),
        ));
    }
    let p = f.placement();
    let deviations = f
        .graph()
        .edges()
        .iter()
        .map(|&(i, j)| {
            let base = f.edge_length(i, j);
            t_grid
                .iter()
                .map(|&t| {
                    let moved: Vec<f64> = (0..d)
                        .map(|k| {
                            (p.point(i)[k] + t * u[i * d + k]) - (p.point(j)[k] + t * u[j * d + k])
                        })
                        .collect();
                    (f.norm().length(&moved) - base).abs()
                })
                .collect()
        })
        .collect();
    Ok(FlexDeviationTable {
        t_grid: t_grid.to_vec(),
        edges: f.graph().edges().to_vec(),
        deviations,
    })
}

/// A linear map `x -> (s_1 x_{pi(1)}, ..., s_d x_{pi(d)})` with signs `s_i = +-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedPermutation {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self, RigidityError> {
        let d = perm.len();
        if signs.len() != d {
            return Err(RigidityError::NotSignedPermutation(
                "sign count differs from dimension".into(),
            ));
        }
        let mut seen = vec![false; d];
        for &p in &perm {
            if p >= d || std::mem::replace(&mut seen[p], true) {
                return Err(RigidityError::NotSignedPermutation(format!(
                    "{perm:?} is not a permutation"
                )));
            }
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(RigidityError::NotSignedPermutation(
                "signs must be +1 or -1".into(),
            ));
        }
        Ok(SignedPermutation { perm, signs })
    }

    pub fn identity(d: usize) -> Self {
        SignedPermutation {
            perm: (0..d).collect(),
            signs: vec![1; d],
        }
    }

    /// Recognises a square matrix (row-major) as a signed permutation.
    pub fn from_matrix(rows: &[Vec<f64>]) -> Result<Self, RigidityError> {
        let d = rows.len();
        let mut perm = Vec::with_capacity(d);
        let mut signs = Vec::with_capacity(d);
        for row in rows {
            if row.len() != d {
                return Err(RigidityError::NotSignedPermutation(
                    "matrix is not square".into(),
                ));
            }
            let nonzero: Vec<usize> = (0..d).filter(|&j| row[j] != 0.0).collect();
            match nonzero.as_slice() {
                [j] if row[*j].abs() == 1.0 => {
                    perm.push(*j);
                    signs.push(row[*j].signum() as i8);
                }
                _ => {
                    return Err(RigidityError::NotSignedPermutation(format!(
                        "row {row:?} is not a signed unit vector"
                    )))
                }
            }
        }
        SignedPermutation::new(perm, signs)
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.perm
            .iter()
            .zip(&self.signs)
            .map(|(&p, &s)| f64::from(s) * x[p])
            .collect()
    }
}

/// Maps every point by the signed permutation, then translates.
///
/// Signed permutations are the linear isometries of lq for q != 2, and also
/// preserve the l1 and l-infinity norms.
pub fn apply_linear_isometry(
    f: &Framework,
    map: &SignedPermutation,
    translation: Option<&[f64]>,
) -> Result<Framework, RigidityError> {
    let d = f.dim();
    if map.dim() != d {
        return Err(RigidityError::DimensionMismatch {
            expected: d,
            got: map.dim(),
        });
    }
    if let Some(t) = translation {
        if t.len() != d {
            return Err(RigidityError::DimensionMismatch {
                expected: d,
                got: t.len(),
            });
        }
    }
    let placement: Placement = f.placement().map_points(|p| {
        let mut x = map.apply(p);
        if let Some(t) = translation {
            for (xi, ti) in x.iter_mut().zip(t) {
                *xi += ti;
            }
        }
        x
    })?;
    f.with_placement(placement)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn k3_lq() -> Framework {
        let p = Placement::new(vec![vec![0.0, 0.0], vec![1.0, 0.2], vec![0.3, 0.9]]).unwrap();
        Framework::new(Graph::complete(3), p, NormSpec::from_q(3.0, 2).unwrap()).unwrap()
    }

    #[test]
    fn translation_basis_is_orthonormal() {
        let t = translation_basis(3, 2);
        assert!((t[0].norm() - 1.0).abs() < 1e-15);
        assert_eq!(t[0].dot(&t[1]), 0.0);
    }

    #[test]
    fn classify_examples() {
        let f = k3_lq();
        assert_eq!(
            classify_flex(&f, &[1.0, 0.0, 1.0, 0.0, 1.0, 0.0]).unwrap(),
            FlexClass::Trivial
        );
        assert_eq!(classify_flex(&f, &[0.0; 6]).unwrap(), FlexClass::Trivial);
        let report = analyze(&f, TolerancePolicy::default()).unwrap();
        assert_eq!(report.nontrivial_flexes.len(), 1);
        assert_eq!(
            classify_flex(&f, &report.nontrivial_flexes[0]).unwrap(),
            FlexClass::NonTrivial
        );
        assert_eq!(
            classify_flex(&f, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap(),
            FlexClass::NotAFlex
        );
        assert_eq!(
            classify_flex(&f, &[1.0]),
            Err(RigidityError::DimensionMismatch {
                expected: 6,
                got: 1
            })
        );
    }

    #[test]
    fn translation_has_zero_deviation() {
        let f = k3_lq();
        let grid = [1e-2, 1e-3, 1e-4, 1e-5];
        let table =
            finite_difference_flex_check(&f, &[0.5, -0.25, 0.5, -0.25, 0.5, -0.25], &grid).unwrap();
        assert!(table.max_deviation().iter().all(|&d| d <= 1e-12));
    }

    #[test]
    fn finite_difference_grid_validation() {
        let f = k3_lq();
        assert!(finite_difference_flex_check(&f, &[0.0; 6], &[1e-3, 1e-2]).is_err());
        assert!(finite_difference_flex_check(&f, &[0.0; 6], &[0.0]).is_err());
    }

    #[test]
    fn signed_permutation_validation() {
        assert!(SignedPermutation::new(vec![0, 0], vec![1, 1]).is_err());
        assert!(SignedPermutation::new(vec![1, 0], vec![1, 2]).is_err());
        let rot = SignedPermutation::from_matrix(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        assert_eq!(rot.apply(&[2.0, 3.0]), vec![3.0, -2.0]);
        assert!(SignedPermutation::from_matrix(&[vec![0.6, 0.8], vec![-0.8, 0.6]]).is_err());
    }

    #[test]
    fn identity_isometry_is_identity() {
        let f = k3_lq();
        assert_eq!(
            apply_linear_isometry(&f, &SignedPermutation::identity(2), None).unwrap(),
            f
        );
    }
}
