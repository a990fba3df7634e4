//! Polytopic norms `||a||_P = max_k |a . b_k|`, framework colourings and
//! the spanning-tree rigidity criteria.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::RigidityError;
use crate::framework::{Framework, NormSpec};
use crate::graph::{edge, is_spanning_tree, spanning_components, spanning_forest, Edge};
use crate::linalg::{numerical_rank, TolerancePolicy};
use crate::rigidity::{classify_with_matrix, FlexClass, RigidityReport};

/// An edge is tied when its top two facet values differ by less than this
/// fraction of the maximum.
pub const TIE_RTOL: f64 = 1e-9;

/// Facet vectors `b_1..b_s` spanning `R^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolytopeNorm {
    facets: Vec<Vec<f64>>,
}

impl PolytopeNorm {
    /// Validates that the facets are nonzero, pairwise distinct up to sign,
    /// and span.
    pub fn new(facets: Vec<Vec<f64>>) -> Result<Self, RigidityError> {
        let bad = |m: String| Err(RigidityError::InvalidPolytope(m));
        let Some(d) = facets.first().map(Vec::len) else {
            return bad("no facets".into());
        };
        if d == 0 {
            return bad("facets must have dimension >= 1".into());
        }
        for (k, b) in facets.iter().enumerate() {
            if b.len() != d {
                return bad(format!(
                    "facet {} has dimension {}, expected {d}",
                    k + 1,
                    b.len()
                ));
            }
            if b.iter().any(|x| !x.is_finite()) {
                return bad(format!("facet {} is not finite", k + 1));
            }
            if b.iter().all(|&x| x == 0.0) {
                return bad(format!("facet {} is zero", k + 1));
            }
            for (j, c) in facets[..k].iter().enumerate() {
                let neg: Vec<f64> = c.iter().map(|x| -x).collect();
                if b == c || *b == neg {
                    return bad(format!(
                        "facets {} and {} coincide up to sign",
                        j + 1,
                        k + 1
                    ));
                }
            }
        }
        let m = DMatrix::from_fn(facets.len(), d, |i, j| facets[i][j]);
        if numerical_rank(&m, TolerancePolicy::default()).rank < d {
            return bad(format!("facets do not span R^{d}"));
        }
        Ok(PolytopeNorm { facets })
    }

    /// Standard basis facets: the l-infinity norm.
    pub fn linf(d: usize) -> Self {
        PolytopeNorm {
            facets: (0..d)
                .map(|k| (0..d).map(|j| f64::from(j == k)).collect())
                .collect(),
        }
    }

    /// Sign-vector facets `(1, +-1, ..., +-1)`: the l1 norm exactly.
    /// In the plane these are `(1, 1)` and `(1, -1)`.
    pub fn l1(d: usize) -> Self {
        let facets = (0..1usize << (d - 1))
            .map(|mask| {
                (0..d)
                    .map(|j| {
                        if j > 0 && mask & (1 << (j - 1)) != 0 {
                            -1.0
                        } else {
                            1.0
                        }
                    })
                    .collect()
            })
            .collect();
        PolytopeNorm { facets }
    }

    pub fn dim(&self) -> usize {
        self.facets[0].len()
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    pub fn facets(&self) -> &[Vec<f64>] {
        &self.facets
    }

    /// Facet `k` (1-based colour).
    pub fn facet(&self, k: usize) -> &[f64] {
        &self.facets[k - 1]
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `max_k |a . b_k|`.
pub fn polytope_length(a: &[f64], p: &PolytopeNorm) -> f64 {
    p.facets.iter().map(|b| dot(a, b).abs()).fold(0.0, f64::max)
}

/// The 1-based index of the unique maximising facet, or `None` on a tie
/// (within [`TIE_RTOL`]).
pub fn maximising_facet(a: &[f64], p: &PolytopeNorm) -> Option<usize> {
    let mut best = (0usize, f64::NEG_INFINITY);
    let mut second = f64::NEG_INFINITY;
    for (k, b) in p.facets.iter().enumerate() {
        let v = dot(a, b).abs();
        if v > best.1 {
            second = best.1;
            best = (k, v);
        } else if v > second {
            second = v;
        }
    }
    let (k, top) = best;
    if top <= 0.0 || top - second < TIE_RTOL * top {
        None
    } else {
        Some(k + 1)
    }
}

/// `b_k` for the unique maximising facet, else the zero vector.
pub fn kappa(a: &[f64], p: &PolytopeNorm) -> Vec<f64> {
    match maximising_facet(a, p) {
        Some(k) => p.facet(k).to_vec(),
        None => vec![0.0; p.dim()],
    }
}

/// Per-edge facet colours, aligned with the graph's canonical edge order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameworkColouring {
    pub edges: Vec<Edge>,
    /// 1-based colour per edge; `None` for tied edges.
    pub colours: Vec<Option<usize>>,
    pub well_positioned: bool,
    pub offending_edges: Vec<Edge>,
    pub facet_count: usize,
}

impl FrameworkColouring {
    /// Edges of colour `k`: the monochrome subgraph `G_k`.
    pub fn class(&self, k: usize) -> Vec<Edge> {
        self.edges
            .iter()
            .zip(&self.colours)
            .filter(|(_, c)| **c == Some(k))
            .map(|(e, _)| *e)
            .collect()
    }

    pub fn colour_of(&self, a: usize, b: usize) -> Option<usize> {
        let e = edge(a, b);
        self.edges
            .iter()
            .position(|&x| x == e)
            .and_then(|i| self.colours[i])
    }

    /// Distinct colours present, ascending.
    pub fn colours_used(&self) -> Vec<usize> {
        let mut used: Vec<usize> = self.colours.iter().flatten().copied().collect();
        used.sort_unstable();
        used.dedup();
        used
    }
}

pub(crate) fn polytope_of(f: &Framework) -> Result<&PolytopeNorm, RigidityError> {
    match f.norm() {
        NormSpec::Polytope(p) => Ok(p),
        NormSpec::Lq(_) => Err(RigidityError::WrongNorm {
            expected: "polytope",
        }),
    }
}

pub fn colour_framework(f: &Framework) -> Result<FrameworkColouring, RigidityError> {
    let p = polytope_of(f)?;
    let edges = f.graph().edges().to_vec();
    let mut colours = Vec::with_capacity(edges.len());
    let mut offending = Vec::new();
    for &(i, j) in &edges {
        let diff = f.placement().difference(i, j);
        if diff.iter().all(|&x| x == 0.0) {
            return Err(RigidityError::CoincidentEndpoints((i, j)));
        }
        let c = maximising_facet(&diff, p);
        if c.is_none() {
            offending.push((i, j));
        }
        colours.push(c);
    }
    Ok(FrameworkColouring {
        edges,
        colours,
        well_positioned: offending.is_empty(),
        offending_edges: offending,
        facet_count: p.facet_count(),
    })
}

/// `|E| x nd` matrix with rows `kappa(p_i - p_j)`, `-kappa(p_i - p_j)`.
///
/// Tied edges would give zero rows, so they are an error unless
/// `allow_ill_positioned` is set.
pub fn rigidity_matrix_poly(
    f: &Framework,
    allow_ill_positioned: bool,
) -> Result<DMatrix<f64>, RigidityError> {
    let p = polytope_of(f)?;
    let colouring = colour_framework(f)?;
    if !colouring.well_positioned && !allow_ill_positioned {
        return Err(RigidityError::NotWellPositioned(colouring.offending_edges));
    }
    let d = f.dim();
    let mut m = DMatrix::zeros(colouring.edges.len(), f.graph().vertex_count() * d);
    for (row, (&(i, j), c)) in colouring.edges.iter().zip(&colouring.colours).enumerate() {
        if let Some(k) = c {
            for (t, &x) in p.facet(*k).iter().enumerate() {
                m[(row, i * d + t)] = x;
                m[(row, j * d + t)] = -x;
            }
        }
    }
    Ok(m)
}

/// Spanning-tree criteria for a colouring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeCriteria {
    /// `spans[k - 1]`: the monochrome subgraph `G_k` is connected and spanning.
    pub spans: Vec<bool>,
    pub colours_used: Vec<usize>,
    /// When at most `d` colours are used: every used class spans (necessary
    /// for rigidity). `None` when more than `d` colours appear.
    pub necessary_holds: Option<bool>,
    /// At least `d` classes contain spanning trees (sufficient for rigidity).
    pub sufficient_holds: bool,
    /// Spanning trees from the first `d` spanning classes, when sufficient.
    pub trees: Option<Vec<Vec<Edge>>>,
    /// Planar two-facet case: `G_1` and `G_2` are themselves spanning trees
    /// (edge-disjoint, since each edge has one colour).
    pub edge_disjoint_spanning_trees: Option<bool>,
}

pub fn spanning_tree_criteria(f: &Framework) -> Result<TreeCriteria, RigidityError> {
    let colouring = colour_framework(f)?;
    if !colouring.well_positioned {
        return Err(RigidityError::NotWellPositioned(colouring.offending_edges));
    }
    Ok(criteria_for(f, &colouring))
}

fn criteria_for(f: &Framework, colouring: &FrameworkColouring) -> TreeCriteria {
    let n = f.graph().vertex_count();
    let d = f.dim();
    let s = colouring.facet_count;
    let classes: Vec<Vec<Edge>> = (1..=s).map(|k| colouring.class(k)).collect();
    let spans: Vec<bool> = classes
        .iter()
        .map(|c| spanning_components(n, c).len() == 1)
        .collect();
    let used = colouring.colours_used();
    let necessary_holds = (used.len() <= d).then(|| used.iter().all(|&k| spans[k - 1]));
    let spanning: Vec<usize> = (0..s).filter(|&k| spans[k]).collect();
    let sufficient_holds = spanning.len() >= d;
    let trees = sufficient_holds.then(|| {
        spanning[..d]
            .iter()
            .map(|&k| spanning_forest(n, &classes[k]))
            .collect()
    });
    let edge_disjoint_spanning_trees = (d == 2 && s == 2).then(|| {
        classes
            .iter()
            .all(|c| is_spanning_tree(f.graph(), c).expect("class edges come from the graph"))
    });
    TreeCriteria {
        spans,
        colours_used: used,
        necessary_holds,
        sufficient_holds,
        trees,
        edge_disjoint_spanning_trees,
    }
}

/// Rank report together with the colouring and tree criteria.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolytopeAnalysis {
    pub report: RigidityReport,
    pub colouring: FrameworkColouring,
    /// Present for well-positioned frameworks.
    pub criteria: Option<TreeCriteria>,
    /// Whether the rank verdict agrees with the tree criteria wherever they
    /// decide it: sufficient implies rigid; rigid with at most `d` colours
    /// implies necessary; and for `d = s = 2`, minimal iff edge-disjoint
    /// spanning trees.
    pub criteria_consistent: Option<bool>,
}

pub fn analyze_poly(
    f: &Framework,
    policy: TolerancePolicy,
) -> Result<PolytopeAnalysis, RigidityError> {
    analyze_poly_with(f, policy, false)
}

/// As [`analyze_poly`]; `allow_ill_positioned` keeps tied edges as zero rows
/// and skips the tree criteria.
pub fn analyze_poly_with(
    f: &Framework,
    policy: TolerancePolicy,
    allow_ill_positioned: bool,
) -> Result<PolytopeAnalysis, RigidityError> {
    let m = rigidity_matrix_poly(f, allow_ill_positioned)?;
    let colouring = colour_framework(f)?;
    let report = RigidityReport::from_matrix(&m, f.graph().vertex_count(), f.dim(), policy);
    let criteria = colouring
        .well_positioned
        .then(|| criteria_for(f, &colouring));
    let criteria_consistent = criteria.as_ref().map(|c| {
        let sufficient_ok = !c.sufficient_holds || report.is_rigid;
        let necessary_ok = !report.is_rigid || c.necessary_holds != Some(false);
        let minimal_ok = c
            .edge_disjoint_spanning_trees
            .is_none_or(|t| t == report.is_minimal);
        sufficient_ok && necessary_ok && minimal_ok
    });
    Ok(PolytopeAnalysis {
        report,
        colouring,
        criteria,
        criteria_consistent,
    })
}

/// A nontrivial flex built from a colour class that fails to span.
///
/// The vertices split into `V_2`, one component of `G_k`, and `V_1`, the
/// rest. With `z` orthogonal to every facet colouring a crossing edge, the
/// vector that is `0` on `V_1` and `z` on `V_2` lies in the kernel of the
/// rigidity matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionWitness {
    pub colour: usize,
    pub moving_side: Vec<usize>,
    pub direction: Vec<f64>,
    /// The flex, of length `n * d`.
    pub flex: Vec<f64>,
}

pub fn partition_flex_witness(
    f: &Framework,
    colour: usize,
) -> Result<PartitionWitness, RigidityError> {
    let p = polytope_of(f)?;
    if colour == 0 || colour > p.facet_count() {
        return Err(RigidityError::ColourOutOfRange(colour));
    }
    let colouring = colour_framework(f)?;
    if !colouring.well_positioned {
        return Err(RigidityError::NotWellPositioned(colouring.offending_edges));
    }
    let n = f.graph().vertex_count();
    let d = f.dim();
    let components = spanning_components(n, &colouring.class(colour));
    if components.len() == 1 {
        return Err(RigidityError::ColourSpans(colour));
    }
    // Prefer a component away from vertex 0 so V_1 is the larger side.
    for side in components.iter().rev() {
        let mut inside = vec![false; n];
        for &v in side {
            inside[v] = true;
        }
        let crossing: Vec<usize> = colouring
            .edges
            .iter()
            .zip(&colouring.colours)
            .filter(|((a, b), _)| inside[*a] != inside[*b])
            .filter_map(|(_, c)| *c)
            .collect();
        let Some(z) = orthogonal_direction(p, &crossing, d) else {
            continue;
        };
        let flex: Vec<f64> = (0..n)
            .flat_map(|v| {
                let scale = if inside[v] { 1.0 } else { 0.0 };
                z.iter().map(move |x| x * scale)
            })
            .collect();
        return Ok(PartitionWitness {
            colour,
            moving_side: side.clone(),
            direction: z,
            flex,
        });
    }
    Err(RigidityError::ColourSpans(colour))
}

/// Unit vector orthogonal to the listed facets, if they do not span.
fn orthogonal_direction(p: &PolytopeNorm, colours: &[usize], d: usize) -> Option<Vec<f64>> {
    let mut used: Vec<usize> = colours.to_vec();
    used.sort_unstable();
    used.dedup();
    let m = DMatrix::from_fn(used.len(), d, |i, j| p.facet(used[i])[j]);
    let info = numerical_rank(&m, TolerancePolicy::default());
    info.null_space.first().map(|v: &DVector<f64>| {
        // Fix the sign so the first nonzero coordinate is positive.
        let sign = v
            .iter()
            .find(|x| x.abs() > 1e-12)
            .map_or(1.0, |x| x.signum());
        v.iter().map(|x| x * sign).collect()
    })
}

/// Checks a witness: in the kernel (residual below `tol`) and nontrivial.
pub fn verify_witness(
    f: &Framework,
    w: &PartitionWitness,
    tol: f64,
) -> Result<bool, RigidityError> {
    let m = rigidity_matrix_poly(f, false)?;
    let u = DVector::from_column_slice(&w.flex);
    let residual = (&m * &u).norm();
    let class = classify_with_matrix(&m, f.graph().vertex_count(), f.dim(), &w.flex)?;
    Ok(residual < tol && class == FlexClass::NonTrivial)
}

/// Maps a placement by `x -> (x . b_1, ..., x . b_d)` and switches to the
/// standard-basis norm. For `d` independent facets this is an isometry onto
/// l-infinity, so colours and rigidity verdicts carry over.
pub fn to_standard_basis(f: &Framework) -> Result<Framework, RigidityError> {
    let p = polytope_of(f)?;
    let d = p.dim();
    if p.facet_count() != d {
        return Err(RigidityError::InvalidPolytope(
            "change of basis needs exactly d facets".into(),
        ));
    }
    let placement = f
        .placement()
        .map_points(|x| p.facets().iter().map(|b| dot(x, b)).collect())?;
    Framework::new(
        f.graph().clone(),
        placement,
        NormSpec::Polytope(PolytopeNorm::linf(d)),
    )
}
