//! Placements, norms and bar-joint frameworks.

use serde::{Deserialize, Serialize};

use crate::error::RigidityError;
use crate::graph::{edge, Graph};
use crate::lq::{lq_length, LqNorm};
use crate::polytope::{polytope_length, PolytopeNorm};

/// One point per vertex, all in the same dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Placement {
    points: Vec<Vec<f64>>,
    dim: usize,
}

impl TryFrom<Vec<Vec<f64>>> for Placement {
    type Error = RigidityError;

    fn try_from(points: Vec<Vec<f64>>) -> Result<Self, Self::Error> {
        Placement::new(points)
    }
}

impl From<Placement> for Vec<Vec<f64>> {
    fn from(p: Placement) -> Self {
        p.points
    }
}

impl Placement {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self, RigidityError> {
        let dim = points.first().map_or(0, Vec::len);
        if dim == 0 {
            return Err(RigidityError::InvalidParameter(
                "placement needs at least one point of dimension >= 1".into(),
            ));
        }
        for (index, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(RigidityError::PlacementDimension {
                    index,
                    expected: dim,
                    got: p.len(),
                });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(RigidityError::NonFinite(index));
            }
        }
        Ok(Placement { points, dim })
    }

    /// Reads `n` points of dimension `dim` from a flat coordinate vector.
    pub fn from_flat(flat: &[f64], dim: usize) -> Result<Self, RigidityError> {
        assert!(dim > 0 && flat.len().is_multiple_of(dim));
        Placement::new(flat.chunks(dim).map(<[f64]>::to_vec).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn flat(&self) -> Vec<f64> {
        self.points.iter().flatten().copied().collect()
    }

    /// `p_i - p_j`.
    pub fn difference(&self, i: usize, j: usize) -> Vec<f64> {
        self.points[i]
            .iter()
            .zip(&self.points[j])
            .map(|(a, b)| a - b)
            .collect()
    }

    pub fn map_points(&self, f: impl Fn(&[f64]) -> Vec<f64>) -> Result<Placement, RigidityError> {
        Placement::new(self.points.iter().map(|p| f(p)).collect())
    }
}

/// The norm on the ambient space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawNorm", into = "RawNorm")]
pub enum NormSpec {
    Lq(LqNorm),
    Polytope(PolytopeNorm),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum RawNorm {
    Lq {
        q: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        d: Option<usize>,
    },
    Polytope {
        facets: Vec<Vec<f64>>,
    },
    L1 {
        #[serde(default = "default_dim")]
        d: usize,
    },
    Linf {
        #[serde(default = "default_dim")]
        d: usize,
    },
}

fn default_dim() -> usize {
    2
}

impl TryFrom<RawNorm> for NormSpec {
    type Error = RigidityError;

    fn try_from(raw: RawNorm) -> Result<Self, Self::Error> {
        match raw {
            RawNorm::Lq { q, d } => NormSpec::from_q(q, d.unwrap_or(2)),
            RawNorm::Polytope { facets } => Ok(NormSpec::Polytope(PolytopeNorm::new(facets)?)),
            RawNorm::L1 { d } => Ok(NormSpec::Polytope(PolytopeNorm::l1(d))),
            RawNorm::Linf { d } => Ok(NormSpec::Polytope(PolytopeNorm::linf(d))),
        }
    }
}

impl From<NormSpec> for RawNorm {
    fn from(n: NormSpec) -> Self {
        match n {
            NormSpec::Lq(l) => RawNorm::Lq { q: l.q(), d: None },
            NormSpec::Polytope(p) => RawNorm::Polytope {
                facets: p.facets().to_vec(),
            },
        }
    }
}

impl NormSpec {
    /// An lq norm; q = 1 and q = inf are routed to their polytopic forms in
    /// dimension `d`, and q = 2 is rejected.
    pub fn from_q(q: f64, d: usize) -> Result<Self, RigidityError> {
        if q == 1.0 {
            Ok(NormSpec::Polytope(PolytopeNorm::l1(d)))
        } else if q == f64::INFINITY {
            Ok(NormSpec::Polytope(PolytopeNorm::linf(d)))
        } else {
            Ok(NormSpec::Lq(LqNorm::new(q)?))
        }
    }

    pub fn length(&self, a: &[f64]) -> f64 {
        match self {
            NormSpec::Lq(l) => lq_length(a, l.q()),
            NormSpec::Polytope(p) => polytope_length(a, p),
        }
    }

    /// Ambient dimension fixed by the norm, if any.
    pub fn fixed_dim(&self) -> Option<usize> {
        match self {
            NormSpec::Lq(_) => None,
            NormSpec::Polytope(p) => Some(p.dim()),
        }
    }
}

/// A graph, a placement of its vertices and the ambient norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFramework", into = "RawFramework")]
pub struct Framework {
    graph: Graph,
    placement: Placement,
    norm: NormSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawFramework {
    graph: Graph,
    placement: Placement,
    norm: NormSpec,
}

impl TryFrom<RawFramework> for Framework {
    type Error = RigidityError;

    fn try_from(raw: RawFramework) -> Result<Self, Self::Error> {
        Framework::new(raw.graph, raw.placement, raw.norm)
    }
}

impl From<Framework> for RawFramework {
    fn from(f: Framework) -> Self {
        RawFramework {
            graph: f.graph,
            placement: f.placement,
            norm: f.norm,
        }
    }
}

impl Framework {
    pub fn new(graph: Graph, placement: Placement, norm: NormSpec) -> Result<Self, RigidityError> {
        if placement.len() != graph.vertex_count() {
            return Err(RigidityError::PlacementSize {
                expected: graph.vertex_count(),
                got: placement.len(),
            });
        }
        if let Some(d) = norm.fixed_dim() {
            if d != placement.dim() {
                return Err(RigidityError::PlacementDimension {
                    index: 0,
                    expected: d,
                    got: placement.dim(),
                });
            }
        }
        for &(i, j) in graph.edges() {
            if placement.point(i) == placement.point(j) {
                return Err(RigidityError::CoincidentEndpoints(edge(i, j)));
            }
        }
        Ok(Framework {
            graph,
            placement,
            norm,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn placement(&self) -> &Placement {
        &self.placement
    }

    pub fn norm(&self) -> &NormSpec {
        &self.norm
    }

    pub fn dim(&self) -> usize {
        self.placement.dim()
    }

    /// Same graph and norm at a different placement.
    pub fn with_placement(&self, placement: Placement) -> Result<Framework, RigidityError> {
        Framework::new(self.graph.clone(), placement, self.norm.clone())
    }

    /// Same placement and norm on a different graph of the same order.
    pub fn with_graph(&self, graph: Graph) -> Result<Framework, RigidityError> {
        Framework::new(graph, self.placement.clone(), self.norm.clone())
    }

    pub fn edge_length(&self, i: usize, j: usize) -> f64 {
        self.norm.length(&self.placement.difference(i, j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn framework_json_round_trip() {
        let json = r#"{"graph":{"n":2,"edges":[[0,1]]},"placement":[[0.0,0.0],[1.0,0.5]],"norm":{"type":"lq","q":3.0}}"#;
        let f: Framework = serde_json::from_str(json).unwrap();
        assert_eq!(f.dim(), 2);
        assert_eq!(serde_json::to_string(&f).unwrap(), json);
    }

    #[test]
    fn norm_aliases() {
        let n: NormSpec = serde_json::from_str(r#"{"type":"linf"}"#).unwrap();
        assert_eq!(
            serde_json::to_string(&n).unwrap(),
            r#"{"type":"polytope","facets":[[1.0,0.0],[0.0,1.0]]}"#
        );
        let n: NormSpec = serde_json::from_str(r#"{"type":"l1"}"#).unwrap();
        assert_eq!(n.length(&[1.0, -2.0]), 3.0);
        let n: NormSpec = serde_json::from_str(r#"{"type":"lq","q":1.0}"#).unwrap();
        assert!(matches!(n, NormSpec::Polytope(_)));
        assert!(serde_json::from_str::<NormSpec>(r#"{"type":"lq","q":2.0}"#).is_err());
    }

    #[test]
    fn framework_rejects_bad_input() {
        let g = Graph::complete(2);
        let lq = NormSpec::from_q(3.0, 2).unwrap();
        let p = Placement::new(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(
            Framework::new(g.clone(), p, lq.clone()),
            Err(RigidityError::CoincidentEndpoints((0, 1)))
        );
        let p = Placement::new(vec![vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            Framework::new(g.clone(), p, lq.clone()),
            Err(RigidityError::PlacementSize { .. })
        ));
        assert!(Placement::new(vec![vec![0.0, 0.0], vec![1.0]]).is_err());
        assert!(Placement::new(vec![vec![f64::NAN, 0.0]]).is_err());
        let p = Placement::new(vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]]).unwrap();
        let linf = NormSpec::from_q(f64::INFINITY, 2).unwrap();
        assert!(Framework::new(g, p, linf).is_err());
    }
}
