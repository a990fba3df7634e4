//! Simple connected graphs with a canonical edge order.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// An undirected edge, stored with the smaller endpoint first.
pub type Edge = (usize, usize);

/// Normalises a vertex pair so the smaller label comes first.
pub fn edge(a: usize, b: usize) -> Edge {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A labelled simple connected graph on vertices `0..n`.
///
/// Edges are kept sorted ascending, which fixes the row order of every
/// rigidity matrix built from the graph. Values are immutable; moves and
/// edge deletions return new graphs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawGraph {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<RawGraph> for Graph {
    type Error = GraphError;

    fn try_from(raw: RawGraph) -> Result<Self, Self::Error> {
        let pairs: Vec<Edge> = raw.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::new(raw.n, &pairs)
    }
}

impl From<Graph> for RawGraph {
    fn from(g: Graph) -> Self {
        RawGraph {
            n: g.n,
            edges: g.edges.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

impl Graph {
    /// Validates a raw vertex count and edge list.
    pub fn new(n: usize, pairs: &[Edge]) -> Result<Self, GraphError> {
        let g = Self::new_unchecked_connectivity(n, pairs)?;
        let components = g.component_count();
        if components != 1 {
            return Err(GraphError::Disconnected { components });
        }
        Ok(g)
    }

    /// Validation without the connectivity requirement. Used for spanning
    /// subgraph bookkeeping, where disconnected edge sets are expected.
    pub(crate) fn new_unchecked_connectivity(n: usize, pairs: &[Edge]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut seen = BTreeSet::new();
        for &(a, b) in pairs {
            for v in [a, b] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if !seen.insert(edge(a, b)) {
                return Err(GraphError::DuplicateEdge(edge(a, b)));
            }
        }
        Ok(Graph {
            n,
            edges: seen.into_iter().collect(),
        })
    }

    pub fn single_vertex() -> Self {
        Graph {
            n: 1,
            edges: Vec::new(),
        }
    }

    pub fn complete(n: usize) -> Self {
        assert!(n >= 1);
        let mut edges = Vec::with_capacity(n * (n - 1) / 2);
        for a in 0..n {
            for b in a + 1..n {
                edges.push((a, b));
            }
        }
        Graph { n, edges }
    }

    pub fn path(n: usize) -> Self {
        assert!(n >= 1);
        Graph {
            n,
            edges: (1..n).map(|b| (b - 1, b)).collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical (sorted) order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&edge(a, b)).is_ok()
    }

    /// Position of an edge in canonical order.
    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&edge(a, b)).ok()
    }

    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.n);
        for &(a, b) in &self.edges {
            uf.union(a, b);
        }
        uf.components()
    }

    /// The graph with one edge removed; fails if that disconnects it.
    pub fn without_edge(&self, e: Edge) -> Result<Graph, GraphError> {
        let e = edge(e.0, e.1);
        if !self.has_edge(e.0, e.1) {
            return Err(GraphError::EdgeNotInGraph(e));
        }
        let rest: Vec<Edge> = self.edges.iter().copied().filter(|&x| x != e).collect();
        Graph::new(self.n, &rest)
    }

    /// The graph with one extra edge.
    pub fn with_edge(&self, a: usize, b: usize) -> Result<Graph, GraphError> {
        let mut pairs = self.edges.clone();
        pairs.push((a, b));
        Graph::new(self.n, &pairs)
    }

    /// Relabels vertices by `perm` (old label `v` becomes `perm[v]`).
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|&(a, b)| edge(perm[a], perm[b]))
            .collect();
        edges.sort_unstable();
        Graph { n: self.n, edges }
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G(n={}, E=[", self.n)?;
        for (i, (a, b)) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{a}{b}")?;
        }
        write!(f, "])")
    }
}

/// Disjoint-set forest with path halving.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            sets: n,
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        self.sets -= 1;
        true
    }

    pub(crate) fn components(&self) -> usize {
        self.sets
    }
}

fn check_subset(g: &Graph, subset: &[Edge]) -> Result<(), GraphError> {
    for &(a, b) in subset {
        if !g.has_edge(a, b) {
            return Err(GraphError::EdgeNotInGraph(edge(a, b)));
        }
    }
    Ok(())
}

/// True iff the spanning subgraph `(V, subset)` is connected.
pub fn spans_all_vertices(g: &Graph, subset: &[Edge]) -> Result<bool, GraphError> {
    check_subset(g, subset)?;
    let mut uf = UnionFind::new(g.vertex_count());
    for &(a, b) in subset {
        uf.union(a, b);
    }
    Ok(uf.components() == 1)
}

/// True iff `subset` is a spanning tree of `g`.
pub fn is_spanning_tree(g: &Graph, subset: &[Edge]) -> Result<bool, GraphError> {
    let spans = spans_all_vertices(g, subset)?;
    let distinct: BTreeSet<Edge> = subset.iter().map(|&(a, b)| edge(a, b)).collect();
    Ok(spans && distinct.len() == subset.len() && subset.len() + 1 == g.vertex_count())
}

/// Components of the spanning subgraph `(V, subset)`, each sorted, ordered
/// by smallest member.
pub fn spanning_components(n: usize, subset: &[Edge]) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(n);
    for &(a, b) in subset {
        uf.union(a, b);
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = vec![usize::MAX; n];
    for v in 0..n {
        let r = uf.find(v);
        if root_slot[r] == usize::MAX {
            root_slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_slot[r]].push(v);
    }
    groups
}

/// A spanning forest of `(V, subset)` chosen greedily in the given order.
pub fn spanning_forest(n: usize, subset: &[Edge]) -> Vec<Edge> {
    let mut uf = UnionFind::new(n);
    subset
        .iter()
        .copied()
        .filter(|&(a, b)| uf.union(a, b))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_examples() {
        assert_eq!(Graph::new(1, &[]).unwrap(), Graph::single_vertex());
        let k4: Vec<Edge> = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        assert_eq!(Graph::new(4, &k4).unwrap(), Graph::complete(4));
        assert_eq!(
            Graph::new(4, &[(0, 1), (2, 3)]),
            Err(GraphError::Disconnected { components: 2 })
        );
    }

    #[test]
    fn validate_errors() {
        assert_eq!(Graph::new(2, &[(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            Graph::new(2, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge((0, 1)))
        );
        assert_eq!(
            Graph::new(2, &[(0, 2)]),
            Err(GraphError::VertexOutOfRange { vertex: 2, n: 2 })
        );
        assert_eq!(Graph::new(0, &[]), Err(GraphError::Empty));
    }

    #[test]
    fn canonical_edge_order() {
        let g = Graph::new(3, &[(2, 1), (1, 0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(json, r#"{"n":3,"edges":[[0,1],[1,2]]}"#);
        let back: Graph = serde_json::from_str(r#"{"n":3,"edges":[[2,1],[1,0]]}"#).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<Graph>(r#"{"n":3,"edges":[[0,1]]}"#).is_err());
    }

    #[test]
    fn spanning_examples() {
        let k4 = Graph::complete(4);
        assert!(spans_all_vertices(&k4, &[(0, 1), (0, 2), (0, 3)]).unwrap());
        assert!(!spans_all_vertices(&k4, &[(0, 1), (2, 3)]).unwrap());
        assert!(spans_all_vertices(&k4, &[(0, 1), (0, 2), (0, 3), (1, 2)]).unwrap());

        assert!(is_spanning_tree(&k4, &[(0, 1), (1, 2), (2, 3)]).unwrap());
        assert!(!is_spanning_tree(&k4, &[(0, 1), (1, 2), (0, 2)]).unwrap());
        assert!(is_spanning_tree(&Graph::complete(2), &[(0, 1)]).unwrap());
        assert!(!is_spanning_tree(&k4, &[(0, 1), (0, 2), (0, 3), (1, 2)]).unwrap());
    }

    #[test]
    fn spanning_rejects_foreign_edges() {
        let p3 = Graph::path(3);
        assert_eq!(
            spans_all_vertices(&p3, &[(0, 2)]),
            Err(GraphError::EdgeNotInGraph((0, 2)))
        );
        assert_eq!(
            is_spanning_tree(&p3, &[(2, 0)]),
            Err(GraphError::EdgeNotInGraph((0, 2)))
        );
    }

    #[test]
    fn single_vertex_spans_with_no_edges() {
        let k1 = Graph::single_vertex();
        assert!(spans_all_vertices(&k1, &[]).unwrap());
        assert!(is_spanning_tree(&k1, &[]).unwrap());
    }

    #[test]
    fn components_and_forest() {
        assert_eq!(
            spanning_components(4, &[(0, 2)]),
            vec![vec![0, 2], vec![1], vec![3]]
        );
        let forest = spanning_forest(4, Graph::complete(4).edges());
        assert_eq!(forest, vec![(0, 1), (0, 2), (0, 3)]);
    }

    #[test]
    fn edge_removal_keeps_connectivity() {
        let p3 = Graph::path(3);
        assert!(p3.without_edge((0, 1)).is_err());
        let k3 = Graph::complete(3);
        assert_eq!(
            k3.without_edge((1, 0)).unwrap(),
            Graph::path(3).relabel(&[0, 2, 1])
        );
    }
}
