//! Frameworks in (R^d, ||.||_q) for 1 < q < inf, q != 2.

use nalgebra::DMatrix;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::RigidityError;
use crate::framework::{Framework, NormSpec, Placement};
use crate::graph::{edge, Graph};
use crate::linalg::{numerical_rank, TolerancePolicy};
use crate::rigidity::RigidityReport;
use crate::rng::{rng_from_seed, split_seed};

/// Below this q the CLI suggests the l1 polytope model.
pub const ILL_CONDITIONED_Q_LOW: f64 = 1.05;
/// Above this q the CLI suggests the l-infinity polytope model.
pub const ILL_CONDITIONED_Q_HIGH: f64 = 50.0;

/// Resamples allowed per trial when the stability probe fails.
const MAX_RESAMPLES: u64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LqNorm {
    q: f64,
}

impl LqNorm {
    pub fn new(q: f64) -> Result<Self, RigidityError> {
        if q == 2.0 {
            return Err(RigidityError::EuclideanNorm);
        }
        if !(q > 1.0 && q.is_finite()) {
            return Err(RigidityError::InvalidQ(q));
        }
        Ok(LqNorm { q })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Powers of q - 1 lose accuracy near the ends of the range.
    pub fn is_ill_conditioned(&self) -> bool {
        self.q < ILL_CONDITIONED_Q_LOW || self.q > ILL_CONDITIONED_Q_HIGH
    }
}

/// Componentwise `sgn(a_i) |a_i|^k`.
pub fn signed_power(a: &[f64], k: f64) -> Vec<f64> {
    a.iter()
        .map(|&x| {
            if x == 0.0 {
                0.0
            } else {
                x.signum() * x.abs().powf(k)
            }
        })
        .collect()
}

/// `(sum |a_i|^q)^(1/q)`.
pub fn lq_length(a: &[f64], q: f64) -> f64 {
    a.iter().map(|x| x.abs().powf(q)).sum::<f64>().powf(1.0 / q)
}

fn lq_norm_of(f: &Framework) -> Result<LqNorm, RigidityError> {
    match f.norm() {
        NormSpec::Lq(l) => Ok(*l),
        NormSpec::Polytope(_) => Err(RigidityError::WrongNorm { expected: "lq" }),
    }
}

/// `|E| x nd` matrix; the row of edge `ij` carries `(p_i - p_j)^(q-1)` in
/// block `i` and its negative in block `j`.
pub fn rigidity_matrix_lq(f: &Framework) -> Result<DMatrix<f64>, RigidityError> {
    let norm = lq_norm_of(f)?;
    matrix_for(f.graph(), f.placement(), norm)
}

fn matrix_for(g: &Graph, p: &Placement, norm: LqNorm) -> Result<DMatrix<f64>, RigidityError> {
    let d = p.dim();
    let mut m = DMatrix::zeros(g.edge_count(), g.vertex_count() * d);
    for (row, &(i, j)) in g.edges().iter().enumerate() {
        let diff = p.difference(i, j);
        if diff.iter().all(|&x| x == 0.0) {
            return Err(RigidityError::CoincidentEndpoints(edge(i, j)));
        }
        for (k, x) in signed_power(&diff, norm.q() - 1.0).into_iter().enumerate() {
            m[(row, i * d + k)] = x;
            m[(row, j * d + k)] = -x;
        }
    }
    Ok(m)
}

pub fn analyze_lq(f: &Framework, policy: TolerancePolicy) -> Result<RigidityReport, RigidityError> {
    let m = rigidity_matrix_lq(f)?;
    Ok(RigidityReport::from_matrix(
        &m,
        f.graph().vertex_count(),
        f.dim(),
        policy,
    ))
}

/// Uniform sample from `[-1, 1]^(nd)`.
pub fn random_placement(n: usize, d: usize, seed: u64) -> Placement {
    let mut rng = rng_from_seed(seed);
    let flat: Vec<f64> = (0..n * d).map(|_| rng.random_range(-1.0..=1.0)).collect();
    Placement::from_flat(&flat, d).expect("finite coordinates")
}

/// Best placement over `trials` uniform samples, by rigidity-matrix rank.
///
/// Trial `t` uses seed `split_seed(seed, t)`. A sample whose rank changes
/// under the 10x stability probe is resampled (from
/// `split_seed(trial_seed, attempt)`) up to a fixed number of times. Ties
/// keep the earliest trial.
pub fn sample_regular_placement(
    g: &Graph,
    norm: LqNorm,
    d: usize,
    seed: u64,
    trials: usize,
    policy: TolerancePolicy,
) -> Result<(Placement, usize), RigidityError> {
    if trials == 0 {
        return Err(RigidityError::InvalidParameter(
            "trials must be >= 1".into(),
        ));
    }
    let mut best: Option<(Placement, usize)> = None;
    for t in 0..trials as u64 {
        let trial_seed = split_seed(seed, t);
        let mut chosen = None;
        for attempt in 0..=MAX_RESAMPLES {
            let s = if attempt == 0 {
                trial_seed
            } else {
                split_seed(trial_seed, attempt)
            };
            let p = random_placement(g.vertex_count(), d, s);
            let Ok(m) = matrix_for(g, &p, norm) else {
                continue;
            };
            let info = numerical_rank(&m, policy);
            let stable = info.stable;
            chosen = Some((p, info.rank));
            if stable {
                break;
            }
        }
        if let Some((p, rank)) = chosen {
            if best.as_ref().is_none_or(|(_, r)| rank > *r) {
                best = Some((p, rank));
            }
        }
    }
    best.ok_or_else(|| RigidityError::InvalidParameter("no valid placement sampled".into()))
}

/// Framework at a sampled regular placement.
pub fn regular_framework(
    g: &Graph,
    norm: LqNorm,
    d: usize,
    seed: u64,
    trials: usize,
    policy: TolerancePolicy,
) -> Result<Framework, RigidityError> {
    let (p, _) = sample_regular_placement(g, norm, d, seed, trials, policy)?;
    Framework::new(g.clone(), p, NormSpec::Lq(norm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigidity::{apply_linear_isometry, SignedPermutation};

    fn lq(q: f64) -> LqNorm {
        LqNorm::new(q).unwrap()
    }

    fn framework(g: Graph, pts: Vec<Vec<f64>>, q: f64) -> Framework {
        Framework::new(g, Placement::new(pts).unwrap(), NormSpec::Lq(lq(q))).unwrap()
    }

    #[test]
    fn norm_range() {
        assert_eq!(LqNorm::new(2.0), Err(RigidityError::EuclideanNorm));
        assert_eq!(LqNorm::new(1.0), Err(RigidityError::InvalidQ(1.0)));
        assert!(LqNorm::new(f64::INFINITY).is_err());
        assert!(LqNorm::new(f64::NAN).is_err());
        assert!(lq(1.01).is_ill_conditioned());
        assert!(!lq(3.0).is_ill_conditioned());
    }

    #[test]
    fn signed_power_examples() {
        assert_eq!(signed_power(&[-2.0, 3.0], 1.0), vec![-2.0, 3.0]);
        assert_eq!(signed_power(&[0.0, 0.0], 2.0), vec![0.0, 0.0]);
        assert_eq!(signed_power(&[-2.0, 3.0], 2.0), vec![-4.0, 9.0]);
        assert_eq!(signed_power(&[0.0], 0.5), vec![0.0]);
    }

    #[test]
    fn lq_length_examples() {
        assert!((lq_length(&[3.0, 4.0], 2.0) - 5.0).abs() < 1e-15);
        assert_eq!(lq_length(&[1.0, -1.0], 1.0), 2.0);
        assert!((lq_length(&[1.0, -1.0], 3.0) - 1.259_921_049_894_873).abs() < 1e-12);
    }

    #[test]
    fn k2_rows() {
        let f = framework(
            Graph::complete(2),
            vec![vec![0.0, 0.0], vec![1.0, 0.0]],
            3.0,
        );
        let m = rigidity_matrix_lq(&f).unwrap();
        assert_eq!(
            m.row(0).iter().copied().collect::<Vec<_>>(),
            vec![-1.0, 0.0, 1.0, 0.0]
        );
        let f = framework(
            Graph::complete(2),
            vec![vec![0.0, 0.0], vec![1.0, 1.0]],
            3.0,
        );
        let m = rigidity_matrix_lq(&f).unwrap();
        assert_eq!(
            m.row(0).iter().copied().collect::<Vec<_>>(),
            vec![-1.0, -1.0, 1.0, 1.0]
        );
    }

    #[test]
    fn translations_annihilated_exactly() {
        let f =
            regular_framework(&Graph::complete(4), lq(1.5), 2, 11, 1, Default::default()).unwrap();
        let m = rigidity_matrix_lq(&f).unwrap();
        for row in m.row_iter() {
            assert_eq!(row[0] + row[2] + row[4] + row[6], 0.0);
            assert_eq!(row[1] + row[3] + row[5] + row[7], 0.0);
        }
    }

    #[test]
    fn small_complete_graphs() {
        let policy = TolerancePolicy::default();
        let k3 = framework(
            Graph::complete(3),
            vec![vec![0.0, 0.0], vec![1.0, 0.2], vec![0.3, 0.9]],
            3.0,
        );
        let r = analyze_lq(&k3, policy).unwrap();
        assert_eq!((r.rank, r.nullity, r.is_rigid), (3, 3, false));

        let k4 = regular_framework(&Graph::complete(4), lq(3.0), 2, 5, 20, policy).unwrap();
        let r = analyze_lq(&k4, policy).unwrap();
        assert_eq!(r.rank, 6);
        assert!(r.is_rigid && r.is_minimal);

        let k1 = framework(Graph::single_vertex(), vec![vec![0.3, 0.4]], 3.0);
        let r = analyze_lq(&k1, policy).unwrap();
        assert_eq!(r.rank, 0);
        assert!(r.is_rigid && r.is_minimal);
        assert_eq!(r.nullity, 2);
    }

    #[test]
    fn sampling_examples() {
        let policy = TolerancePolicy::default();
        let (_, r) =
            sample_regular_placement(&Graph::complete(4), lq(3.0), 2, 1, 20, policy).unwrap();
        assert_eq!(r, 6);
        let (_, r) =
            sample_regular_placement(&Graph::complete(3), lq(3.0), 2, 1, 20, policy).unwrap();
        assert_eq!(r, 3);
        let (_, r) =
            sample_regular_placement(&Graph::single_vertex(), lq(3.0), 2, 1, 20, policy).unwrap();
        assert_eq!(r, 0);
        let a = sample_regular_placement(&Graph::complete(4), lq(3.0), 2, 9, 5, policy).unwrap();
        let b = sample_regular_placement(&Graph::complete(4), lq(3.0), 2, 9, 5, policy).unwrap();
        assert_eq!(a, b);
        assert!(sample_regular_placement(&Graph::complete(4), lq(3.0), 2, 9, 0, policy).is_err());
    }

    #[test]
    fn isometries_preserve_rank() {
        let policy = TolerancePolicy::default();
        let f = regular_framework(&Graph::complete(4), lq(3.0), 2, 3, 5, policy).unwrap();
        let rot = SignedPermutation::from_matrix(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        let g = apply_linear_isometry(&f, &rot, None).unwrap();
        assert_eq!(
            analyze_lq(&g, policy).unwrap().rank,
            analyze_lq(&f, policy).unwrap().rank
        );

        let shifted =
            apply_linear_isometry(&f, &SignedPermutation::identity(2), Some(&[5.0, 5.0])).unwrap();
        let a = rigidity_matrix_lq(&f).unwrap();
        let b = rigidity_matrix_lq(&shifted).unwrap();
        // Differences of shifted points can round, so compare to the ulp scale.
        assert!((a - b).amax() < 1e-14);

        // Dyadic coordinates shift without rounding.
        let f = framework(
            Graph::complete(4),
            vec![
                vec![0.0, 0.0],
                vec![0.5, 0.125],
                vec![0.75, 0.625],
                vec![-0.25, 0.875],
            ],
            3.0,
        );
        let shifted =
            apply_linear_isometry(&f, &SignedPermutation::identity(2), Some(&[5.0, 5.0])).unwrap();
        assert_eq!(
            rigidity_matrix_lq(&f).unwrap(),
            rigidity_matrix_lq(&shifted).unwrap()
        );
    }

    #[test]
    fn wrong_norm_rejected() {
        let f = Framework::new(
            Graph::complete(2),
            Placement::new(vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap(),
            NormSpec::from_q(f64::INFINITY, 2).unwrap(),
        )
        .unwrap();
        assert_eq!(
            rigidity_matrix_lq(&f),
            Err(RigidityError::WrongNorm { expected: "lq" })
        );
    }
}
