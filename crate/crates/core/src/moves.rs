//! Inductive moves on (2,2)-tight graphs.
//!
//! Five moves are supported: Henneberg 1 and 2, vertex-to-4-cycle, vertex
//! splitting and vertex-to-K4. Scheme A (H1, H2, V4C, VK4) and scheme B
//! (H1, H2, VSplit, VK4) each generate every (2,2)-tight graph from K1.
//!
//! New vertices take the next free labels. A vertex-to-K4 move keeps the
//! label of the replaced vertex for `w1` and appends `w2, w3, w4`.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::seq::IndexedRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{InvalidMove, ReduceError};
use crate::graph::{edge, Edge, Graph};
use crate::rng::{rng_from_seed, Rng};
use crate::sparsity::{is_sparse_pebble, SparsityParams};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "move")]
pub enum Move {
    /// New vertex joined to `v1` and `v2`.
    #[serde(rename = "h1")]
    Henneberg1 { v1: usize, v2: usize },
    /// Edge `v1v2` removed; new vertex joined to `v1`, `v2`, `v3`.
    #[serde(rename = "h2")]
    Henneberg2 { v1: usize, v2: usize, v3: usize },
    /// New vertex joined to `v2`, `v3` (both neighbours of `v1`); each edge
    /// `v1w` with `w` in `reassigned` becomes an edge at the new vertex.
    #[serde(rename = "v4c")]
    VertexToFourCycle {
        v1: usize,
        v2: usize,
        v3: usize,
        #[serde(default)]
        reassigned: Vec<usize>,
    },
    /// New vertex joined to `v1` and `v2` (an edge); each edge `v1w` with
    /// `w` in `reassigned` moves to the new vertex.
    #[serde(rename = "vsplit")]
    VertexSplit {
        v1: usize,
        v2: usize,
        #[serde(default)]
        reassigned: Vec<usize>,
    },
    /// `v1` replaced by a K4 on `w1 = v1, w2, w3, w4`; each former neighbour
    /// of `v1` is reattached to the `w_j` named by `assignment` (j in 1..=4).
    /// Neighbours left out stay on `w1`. In JSON the assignment is a list of
    /// `[neighbour, j]` pairs.
    #[serde(rename = "vk4")]
    VertexToK4 {
        v1: usize,
        #[serde(default, with = "assignment_pairs")]
        assignment: BTreeMap<usize, u8>,
    },
}

mod assignment_pairs {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(map: &BTreeMap<usize, u8>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(map.iter().map(|(&w, &j)| (w, j)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<usize, u8>, D::Error> {
        let pairs = Vec::<(usize, u8)>::deserialize(d)?;
        let len = pairs.len();
        let map: BTreeMap<usize, u8> = pairs.into_iter().collect();
        if map.len() != len {
            return Err(serde::de::Error::custom("neighbour assigned twice"));
        }
        Ok(map)
    }
}

impl Move {
    pub fn name(&self) -> &'static str {
        match self {
            Move::Henneberg1 { .. } => "h1",
            Move::Henneberg2 { .. } => "h2",
            Move::VertexToFourCycle { .. } => "v4c",
            Move::VertexSplit { .. } => "vsplit",
            Move::VertexToK4 { .. } => "vk4",
        }
    }

    /// Vertices added by the move.
    pub fn vertex_delta(&self) -> usize {
        match self {
            Move::VertexToK4 { .. } => 3,
            _ => 1,
        }
    }

    /// Renames the existing-vertex references through `map`.
    pub fn relabel(&self, map: &[usize]) -> Move {
        let m = |v: usize| map[v];
        let ms = |vs: &[usize]| vs.iter().map(|&v| map[v]).collect::<Vec<_>>();
        match self {
            Move::Henneberg1 { v1, v2 } => Move::Henneberg1 {
                v1: m(*v1),
                v2: m(*v2),
            },
            Move::Henneberg2 { v1, v2, v3 } => Move::Henneberg2 {
                v1: m(*v1),
                v2: m(*v2),
                v3: m(*v3),
            },
            Move::VertexToFourCycle {
                v1,
                v2,
                v3,
                reassigned,
            } => Move::VertexToFourCycle {
                v1: m(*v1),
                v2: m(*v2),
                v3: m(*v3),
                reassigned: ms(reassigned),
            },
            Move::VertexSplit { v1, v2, reassigned } => Move::VertexSplit {
                v1: m(*v1),
                v2: m(*v2),
                reassigned: ms(reassigned),
            },
            Move::VertexToK4 { v1, assignment } => Move::VertexToK4 {
                v1: m(*v1),
                assignment: assignment.iter().map(|(&w, &j)| (map[w], j)).collect(),
            },
        }
    }
}

/// Which family of moves a generator or reducer may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    /// Henneberg 1, Henneberg 2, vertex-to-4-cycle, vertex-to-K4.
    A,
    /// Henneberg 1, Henneberg 2, vertex splitting, vertex-to-K4.
    B,
}

impl Scheme {
    pub fn allows(self, m: &Move) -> bool {
        match m {
            Move::VertexToFourCycle { .. } => self == Scheme::A,
            Move::VertexSplit { .. } => self == Scheme::B,
            _ => true,
        }
    }
}

fn invalid(msg: impl Into<String>) -> InvalidMove {
    InvalidMove(msg.into())
}

fn check_vertex(g: &Graph, v: usize) -> Result<(), InvalidMove> {
    if v < g.vertex_count() {
        Ok(())
    } else {
        Err(invalid(format!("vertex {v} does not exist")))
    }
}

fn check_edge(g: &Graph, a: usize, b: usize) -> Result<(), InvalidMove> {
    check_vertex(g, a)?;
    check_vertex(g, b)?;
    if g.has_edge(a, b) {
        Ok(())
    } else {
        Err(invalid(format!("edge {a}{b} does not exist")))
    }
}

/// `reassigned` must be distinct neighbours of `v1` outside `excluded`.
fn check_reassigned(
    g: &Graph,
    v1: usize,
    excluded: &[usize],
    reassigned: &[usize],
) -> Result<(), InvalidMove> {
    let mut seen = BTreeSet::new();
    for &w in reassigned {
        if !seen.insert(w) {
            return Err(invalid(format!("vertex {w} reassigned twice")));
        }
        if excluded.contains(&w) {
            return Err(invalid(format!("edge {v1}{w} cannot be reassigned")));
        }
        check_edge(g, v1, w)?;
    }
    Ok(())
}

/// Applies a move, returning the new graph.
pub fn apply_move(g: &Graph, m: &Move) -> Result<Graph, InvalidMove> {
    let n = g.vertex_count();
    let mut edges: Vec<Edge> = g.edges().to_vec();
    let new_n = n + m.vertex_delta();
    match m {
        &Move::Henneberg1 { v1, v2 } => {
            check_vertex(g, v1)?;
            check_vertex(g, v2)?;
            if v1 == v2 {
                return Err(invalid("Henneberg 1 needs two distinct vertices"));
            }
            edges.extend([(v1, n), (v2, n)]);
        }
        &Move::Henneberg2 { v1, v2, v3 } => {
            check_edge(g, v1, v2)?;
            check_vertex(g, v3)?;
            if v3 == v1 || v3 == v2 {
                return Err(invalid("Henneberg 2 needs a third vertex off the edge"));
            }
            edges.retain(|&e| e != edge(v1, v2));
            edges.extend([(v1, n), (v2, n), (v3, n)]);
        }
        Move::VertexToFourCycle {
            v1,
            v2,
            v3,
            reassigned,
        } => {
            let (v1, v2, v3) = (*v1, *v2, *v3);
            check_edge(g, v1, v2)?;
            check_edge(g, v1, v3)?;
            if v2 == v3 {
                return Err(invalid("vertex-to-4-cycle needs two distinct edges"));
            }
            check_reassigned(g, v1, &[v2, v3], reassigned)?;
            move_edges(&mut edges, v1, n, reassigned);
            edges.extend([(v2, n), (v3, n)]);
        }
        Move::VertexSplit { v1, v2, reassigned } => {
            let (v1, v2) = (*v1, *v2);
            check_edge(g, v1, v2)?;
            check_reassigned(g, v1, &[v2], reassigned)?;
            move_edges(&mut edges, v1, n, reassigned);
            edges.extend([(v1, n), (v2, n)]);
        }
        Move::VertexToK4 { v1, assignment } => {
            let v1 = *v1;
            check_vertex(g, v1)?;
            let nbrs: BTreeSet<usize> = g.neighbours(v1).into_iter().collect();
            let keys: BTreeSet<usize> = assignment.keys().copied().collect();
            if nbrs != keys {
                return Err(invalid(format!(
                    "vertex-to-K4 assignment must cover exactly the neighbours {nbrs:?} of {v1}"
                )));
            }
            let w = [v1, n, n + 1, n + 2];
            for (&u, &j) in assignment {
                if !(1..=4).contains(&j) {
                    return Err(invalid(format!("assignment index {j} not in 1..=4")));
                }
                let target = w[j as usize - 1];
                if target != v1 {
                    edges.retain(|&e| e != edge(v1, u));
                    edges.push((u, target));
                }
            }
            for a in 0..4 {
                for b in a + 1..4 {
                    edges.push((w[a], w[b]));
                }
            }
        }
    }
    Graph::new(new_n, &edges).map_err(|e| invalid(format!("move produced an invalid graph: {e}")))
}

fn move_edges(edges: &mut Vec<Edge>, from: usize, to: usize, others: &[usize]) {
    for &w in others {
        edges.retain(|&e| e != edge(from, w));
        edges.push((to, w));
    }
}

/// An ordered list of moves starting from `start` (K1 by default).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveSequence {
    #[serde(default = "Graph::single_vertex")]
    pub start: Graph,
    pub moves: Vec<Move>,
}

impl Default for MoveSequence {
    fn default() -> Self {
        MoveSequence {
            start: Graph::single_vertex(),
            moves: Vec::new(),
        }
    }
}

impl MoveSequence {
    pub fn from_k1(moves: Vec<Move>) -> Self {
        MoveSequence {
            start: Graph::single_vertex(),
            moves,
        }
    }

    /// Every intermediate graph, starting with `start`.
    pub fn replay_all(&self) -> Result<Vec<Graph>, InvalidMove> {
        let mut graphs = vec![self.start.clone()];
        for (i, m) in self.moves.iter().enumerate() {
            let next = apply_move(graphs.last().expect("non-empty"), m)
                .map_err(|e| invalid(format!("move {i}: {}", e.0)))?;
            graphs.push(next);
        }
        Ok(graphs)
    }

    pub fn replay(&self) -> Result<Graph, InvalidMove> {
        Ok(self.replay_all()?.pop().expect("non-empty"))
    }

    pub fn uses_only(&self, scheme: Scheme) -> bool {
        self.moves.iter().all(|m| scheme.allows(m))
    }
}

fn random_subset(rng: &mut Rng, items: &[usize]) -> Vec<usize> {
    items
        .iter()
        .copied()
        .filter(|_| rng.random_bool(0.5))
        .collect()
}

/// Draws a uniformly chosen valid move type of `scheme`, then its parameters.
pub fn random_move(g: &Graph, scheme: Scheme, rng: &mut Rng) -> Move {
    let n = g.vertex_count();
    let has_edge = g.edge_count() > 0;
    let branch_vertices: Vec<usize> = (0..n).filter(|&v| g.degree(v) >= 2).collect();
    let mut kinds: Vec<&str> = Vec::with_capacity(4);
    if n >= 2 {
        kinds.push("h1");
    }
    if has_edge && n >= 3 {
        kinds.push("h2");
    }
    match scheme {
        Scheme::A if !branch_vertices.is_empty() => kinds.push("v4c"),
        Scheme::B if has_edge => kinds.push("vsplit"),
        _ => {}
    }
    kinds.push("vk4");

    let kind = *kinds.choose(rng).expect("vk4 is always valid");
    match kind {
        "h1" => {
            let v1 = rng.random_range(0..n);
            let mut v2 = rng.random_range(0..n - 1);
            if v2 >= v1 {
                v2 += 1;
            }
            Move::Henneberg1 { v1, v2 }
        }
        "h2" => {
            let (v1, v2) = *g.edges().choose(rng).expect("has an edge");
            let others: Vec<usize> = (0..n).filter(|&v| v != v1 && v != v2).collect();
            let v3 = *others.choose(rng).expect("n >= 3");
            Move::Henneberg2 { v1, v2, v3 }
        }
        "v4c" => {
            let v1 = *branch_vertices.choose(rng).expect("non-empty");
            let nbrs = g.neighbours(v1);
            let pair: Vec<usize> = nbrs.choose_multiple(rng, 2).copied().collect();
            let rest: Vec<usize> = nbrs.iter().copied().filter(|w| !pair.contains(w)).collect();
            Move::VertexToFourCycle {
                v1,
                v2: pair[0],
                v3: pair[1],
                reassigned: random_subset(rng, &rest),
            }
        }
        "vsplit" => {
            let (a, b) = *g.edges().choose(rng).expect("has an edge");
            let (v1, v2) = if rng.random_bool(0.5) { (a, b) } else { (b, a) };
            let rest: Vec<usize> = g.neighbours(v1).into_iter().filter(|&w| w != v2).collect();
            Move::VertexSplit {
                v1,
                v2,
                reassigned: random_subset(rng, &rest),
            }
        }
        _ => {
            let v1 = rng.random_range(0..n);
            let assignment = g
                .neighbours(v1)
                .into_iter()
                .map(|w| (w, rng.random_range(1..=4u8)))
                .collect();
            Move::VertexToK4 { v1, assignment }
        }
    }
}

/// Grows a (2,2)-tight graph from K1 by random scheme moves until it has at
/// least `target_n` vertices. The result has between `target_n` and
/// `target_n + 2` vertices (a vertex-to-K4 move adds three at once).
pub fn generate_tight_graph(target_n: usize, scheme: Scheme, seed: u64) -> (Graph, MoveSequence) {
    let mut rng = rng_from_seed(seed);
    generate_with_rng(target_n, scheme, &mut rng)
}

pub fn generate_with_rng(target_n: usize, scheme: Scheme, rng: &mut Rng) -> (Graph, MoveSequence) {
    let mut g = Graph::single_vertex();
    let mut moves = Vec::new();
    while g.vertex_count() < target_n {
        let m = random_move(&g, scheme, rng);
        g = apply_move(&g, &m).expect("random moves are valid by construction");
        moves.push(m);
    }
    debug_assert!(is_sparse_pebble(&g, SparsityParams::TWO_TWO).is_tight);
    (g, MoveSequence::from_k1(moves))
}

/// A reduction certificate: replaying `sequence` from K1 gives
/// `graph.relabel(&relabelling)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub sequence: MoveSequence,
    pub relabelling: Vec<usize>,
}

/// Certifies (2,2)-tightness constructively by undoing moves down to K1.
pub fn reduce_to_k1(g: &Graph) -> Result<MoveSequence, ReduceError> {
    reduce(g, None).map(|r| r.sequence)
}

/// Reduction restricted to one scheme's moves, or all five when `None`.
pub fn reduce(g: &Graph, scheme: Option<Scheme>) -> Result<Reduction, ReduceError> {
    if !is_sparse_pebble(g, SparsityParams::TWO_TWO).is_tight {
        return Err(ReduceError::NotTight);
    }
    let mut dead = HashSet::new();
    let (moves, relabelling) = reduce_rec(g, scheme, &mut dead).ok_or(ReduceError::NoReduction)?;
    Ok(Reduction {
        sequence: MoveSequence::from_k1(moves),
        relabelling,
    })
}

/// One undone move: `apply_move(&smaller, &forward) == g.relabel(&phi)`.
struct InverseStep {
    smaller: Graph,
    forward: Move,
    phi: Vec<usize>,
}

fn reduce_rec(
    g: &Graph,
    scheme: Option<Scheme>,
    dead: &mut HashSet<Graph>,
) -> Option<(Vec<Move>, Vec<usize>)> {
    if g.vertex_count() == 1 {
        return Some((Vec::new(), vec![0]));
    }
    for step in inverse_steps(g, scheme) {
        if dead.contains(&step.smaller)
            || !is_sparse_pebble(&step.smaller, SparsityParams::TWO_TWO).is_tight
        {
            continue;
        }
        if let Some((mut moves, psi)) = reduce_rec(&step.smaller, scheme, dead) {
            let small_n = step.smaller.vertex_count();
            let mut psi_ext = psi;
            psi_ext.extend(small_n..g.vertex_count());
            moves.push(step.forward.relabel(&psi_ext));
            let total: Vec<usize> = step.phi.iter().map(|&v| psi_ext[v]).collect();
            return Some((moves, total));
        }
        dead.insert(step.smaller);
    }
    None
}

/// Removes `gone` (sorted) from the label space; returns old -> new labels.
fn compaction(n: usize, gone: &[usize]) -> Vec<usize> {
    let mut map = vec![usize::MAX; n];
    let mut next = 0;
    for (v, slot) in map.iter_mut().enumerate() {
        if !gone.contains(&v) {
            *slot = next;
            next += 1;
        }
    }
    map
}

/// Builds the smaller graph from `g` minus `gone`, plus `extra` edges, and the
/// label map sending `gone[i]` to the `i`-th appended label.
fn shrink(g: &Graph, gone: &[usize], extra: &[Edge]) -> Option<(Graph, Vec<usize>)> {
    let n = g.vertex_count();
    let c = compaction(n, gone);
    let mut edges: Vec<Edge> = g
        .edges()
        .iter()
        .filter(|&&(a, b)| !gone.contains(&a) && !gone.contains(&b))
        .map(|&(a, b)| (c[a], c[b]))
        .collect();
    edges.extend(extra.iter().map(|&(a, b)| (c[a], c[b])));
    let smaller = Graph::new(n - gone.len(), &edges).ok()?;
    let mut phi = c;
    let base = n - gone.len();
    for (i, &v) in gone.iter().enumerate() {
        phi[v] = base + i;
    }
    Some((smaller, phi))
}

fn inverse_steps(g: &Graph, scheme: Option<Scheme>) -> Vec<InverseStep> {
    let n = g.vertex_count();
    let adj = g.adjacency();
    let allowed = |m: &Move| scheme.is_none_or(|s| s.allows(m));
    let mut steps = Vec::new();

    // Henneberg 1: a degree-2 vertex.
    for x in 0..n {
        if adj[x].len() == 2 {
            if let Some((smaller, phi)) = shrink(g, &[x], &[]) {
                let c = compaction(n, &[x]);
                steps.push(InverseStep {
                    smaller,
                    forward: Move::Henneberg1 {
                        v1: c[adj[x][0]],
                        v2: c[adj[x][1]],
                    },
                    phi,
                });
            }
        }
    }
    // Henneberg 2: a degree-3 vertex and a non-adjacent pair of its neighbours.
    for (x, nbrs) in adj.iter().enumerate() {
        if nbrs.len() != 3 {
            continue;
        }
        let c = compaction(n, &[x]);
        for (a, b, third) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
            let (a, b, third) = (nbrs[a], nbrs[b], nbrs[third]);
            if g.has_edge(a, b) {
                continue;
            }
            if let Some((smaller, phi)) = shrink(g, &[x], &[(a, b)]) {
                steps.push(InverseStep {
                    smaller,
                    forward: Move::Henneberg2 {
                        v1: c[a],
                        v2: c[b],
                        v3: c[third],
                    },
                    phi,
                });
            }
        }
    }
    // Vertex-to-K4: a K4 whose members have pairwise distinct outside neighbours.
    for quad in k4_subgraphs(g, &adj) {
        let mut owner: BTreeMap<usize, u8> = BTreeMap::new();
        let mut clash = false;
        for (j, &t) in quad.iter().enumerate() {
            for &w in &adj[t] {
                if quad.contains(&w) {
                    continue;
                }
                if owner.insert(w, j as u8 + 1).is_some() {
                    clash = true;
                }
            }
        }
        if clash {
            continue;
        }
        let head = quad[0];
        let extra: Vec<Edge> = owner
            .keys()
            .filter(|w| !adj[head].contains(w))
            .map(|&w| (head, w))
            .collect();
        let gone = &quad[1..];
        if let Some((smaller, phi)) = shrink(g, gone, &extra) {
            let c = compaction(n, gone);
            steps.push(InverseStep {
                smaller,
                forward: Move::VertexToK4 {
                    v1: c[head],
                    assignment: owner.iter().map(|(&w, &j)| (c[w], j)).collect(),
                },
                phi,
            });
        }
    }
    // Vertex-to-4-cycle: x merges into a non-adjacent y sharing neighbours a, b.
    // Vertex split: x merges into an adjacent y sharing neighbour a.
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let adjacent = g.has_edge(x, y);
            let common: Vec<usize> = adj[x]
                .iter()
                .copied()
                .filter(|w| *w != y && adj[y].contains(w))
                .collect();
            let c = compaction(n, &[x]);
            if !adjacent {
                for i in 0..common.len() {
                    for j in i + 1..common.len() {
                        let (a, b) = (common[i], common[j]);
                        let rest: Vec<usize> = adj[x]
                            .iter()
                            .copied()
                            .filter(|&w| w != a && w != b)
                            .collect();
                        if rest.iter().any(|w| adj[y].contains(w)) {
                            continue;
                        }
                        let extra: Vec<Edge> = rest.iter().map(|&w| (y, w)).collect();
                        if let Some((smaller, phi)) = shrink(g, &[x], &extra) {
                            steps.push(InverseStep {
                                smaller,
                                forward: Move::VertexToFourCycle {
                                    v1: c[y],
                                    v2: c[a],
                                    v3: c[b],
                                    reassigned: rest.iter().map(|&w| c[w]).collect(),
                                },
                                phi,
                            });
                        }
                    }
                }
            } else {
                for &a in &common {
                    let rest: Vec<usize> = adj[x]
                        .iter()
                        .copied()
                        .filter(|&w| w != a && w != y)
                        .collect();
                    if rest.iter().any(|w| adj[y].contains(w)) {
                        continue;
                    }
                    let extra: Vec<Edge> = rest.iter().map(|&w| (y, w)).collect();
                    if let Some((smaller, phi)) = shrink(g, &[x], &extra) {
                        steps.push(InverseStep {
                            smaller,
                            forward: Move::VertexSplit {
                                v1: c[y],
                                v2: c[a],
                                reassigned: rest.iter().map(|&w| c[w]).collect(),
                            },
                            phi,
                        });
                    }
                }
            }
        }
    }
    steps.retain(|s| allowed(&s.forward));
    steps
}

fn k4_subgraphs(g: &Graph, adj: &[Vec<usize>]) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for &(a, b) in g.edges() {
        let common: Vec<usize> = adj[a]
            .iter()
            .copied()
            .filter(|&w| w > b && adj[b].contains(&w))
            .collect();
        for i in 0..common.len() {
            for j in i + 1..common.len() {
                let (c, d) = (common[i].min(common[j]), common[i].max(common[j]));
                if g.has_edge(c, d) {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tight(g: &Graph) -> bool {
        is_sparse_pebble(g, SparsityParams::TWO_TWO).is_tight
    }

    #[test]
    fn vk4_on_k1_gives_k4() {
        let g = apply_move(
            &Graph::single_vertex(),
            &Move::VertexToK4 {
                v1: 0,
                assignment: BTreeMap::new(),
            },
        )
        .unwrap();
        assert_eq!(g, Graph::complete(4));
    }

    #[test]
    fn henneberg1_on_k4() {
        let g = apply_move(&Graph::complete(4), &Move::Henneberg1 { v1: 0, v2: 1 }).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (5, 8));
        assert!(g.has_edge(0, 4) && g.has_edge(1, 4));
    }

    #[test]
    fn henneberg2_on_k4() {
        let g = apply_move(
            &Graph::complete(4),
            &Move::Henneberg2 {
                v1: 0,
                v2: 1,
                v3: 2,
            },
        )
        .unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (5, 8));
        assert!(!g.has_edge(0, 1));
        assert!(g.has_edge(4, 0) && g.has_edge(4, 1) && g.has_edge(4, 2));
    }

    #[test]
    fn four_cycle_and_split_reassign_edges() {
        let k4 = Graph::complete(4);
        let g = apply_move(
            &k4,
            &Move::VertexToFourCycle {
                v1: 0,
                v2: 1,
                v3: 2,
                reassigned: vec![3],
            },
        )
        .unwrap();
        assert!(g.has_edge(4, 3) && !g.has_edge(0, 3));
        assert!(g.has_edge(4, 1) && g.has_edge(4, 2) && !g.has_edge(0, 4));
        assert!(tight(&g));

        let g = apply_move(
            &k4,
            &Move::VertexSplit {
                v1: 0,
                v2: 1,
                reassigned: vec![2, 3],
            },
        )
        .unwrap();
        assert!(g.has_edge(0, 4) && g.has_edge(1, 4) && g.has_edge(2, 4) && g.has_edge(3, 4));
        assert!(g.has_edge(0, 1) && !g.has_edge(0, 2));
        assert!(tight(&g));
    }

    #[test]
    fn vk4_reattaches_neighbours() {
        let g = apply_move(
            &Graph::complete(4),
            &Move::VertexToK4 {
                v1: 0,
                assignment: [(1, 1), (2, 2), (3, 4)].into_iter().collect(),
            },
        )
        .unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (7, 12));
        assert!(g.has_edge(0, 1) && g.has_edge(2, 4) && g.has_edge(3, 6));
        assert!(!g.has_edge(0, 2) && !g.has_edge(0, 3));
        assert!(tight(&g));
    }

    #[test]
    fn invalid_moves_rejected() {
        let k4 = Graph::complete(4);
        let k1 = Graph::single_vertex();
        assert!(apply_move(&k4, &Move::Henneberg1 { v1: 2, v2: 2 }).is_err());
        assert!(apply_move(&k1, &Move::Henneberg1 { v1: 0, v2: 1 }).is_err());
        assert!(apply_move(
            &k4,
            &Move::Henneberg2 {
                v1: 0,
                v2: 1,
                v3: 1
            }
        )
        .is_err());
        let p3 = Graph::path(3);
        assert!(apply_move(
            &p3,
            &Move::Henneberg2 {
                v1: 0,
                v2: 2,
                v3: 1
            }
        )
        .is_err());
        assert!(apply_move(
            &k4,
            &Move::VertexToFourCycle {
                v1: 0,
                v2: 1,
                v3: 1,
                reassigned: vec![]
            }
        )
        .is_err());
        assert!(apply_move(
            &k4,
            &Move::VertexSplit {
                v1: 0,
                v2: 1,
                reassigned: vec![1]
            }
        )
        .is_err());
        assert!(apply_move(
            &k4,
            &Move::VertexToK4 {
                v1: 0,
                assignment: [(1, 1), (2, 2)].into_iter().collect()
            }
        )
        .is_err());
        assert!(apply_move(
            &k4,
            &Move::VertexToK4 {
                v1: 0,
                assignment: [(1, 1), (2, 2), (3, 5)].into_iter().collect()
            }
        )
        .is_err());
    }

    #[test]
    fn generate_small_targets() {
        let (g, seq) = generate_tight_graph(1, Scheme::A, 3);
        assert_eq!(g, Graph::single_vertex());
        assert!(seq.moves.is_empty());

        let (g, seq) = generate_tight_graph(4, Scheme::A, 7);
        assert_eq!(g, Graph::complete(4));
        assert_eq!(seq.replay().unwrap(), g);
    }

    #[test]
    fn generate_is_deterministic() {
        let a = generate_tight_graph(10, Scheme::B, 1);
        let b = generate_tight_graph(10, Scheme::B, 1);
        assert_eq!(a, b);
        assert!(tight(&a.0));
        assert!(a.1.uses_only(Scheme::B));
        assert!((10..=12).contains(&a.0.vertex_count()));
    }

    #[test]
    fn reduce_k4_and_k3() {
        let seq = reduce_to_k1(&Graph::complete(4)).unwrap();
        assert_eq!(
            seq.moves,
            vec![Move::VertexToK4 {
                v1: 0,
                assignment: BTreeMap::new()
            }]
        );
        assert_eq!(
            reduce_to_k1(&Graph::complete(3)),
            Err(ReduceError::NotTight)
        );
    }

    #[test]
    fn reduce_round_trips_generated_graphs() {
        for seed in 0..20 {
            for scheme in [Scheme::A, Scheme::B] {
                let (g, _) = generate_tight_graph(10, scheme, seed);
                for restrict in [None, Some(scheme)] {
                    let r = reduce(&g, restrict).unwrap();
                    assert_eq!(r.sequence.replay().unwrap(), g.relabel(&r.relabelling));
                    if let Some(s) = restrict {
                        assert!(r.sequence.uses_only(s));
                    }
                }
            }
        }
    }

    #[test]
    fn move_json_shape() {
        let m = Move::VertexSplit {
            v1: 0,
            v2: 1,
            reassigned: vec![3],
        };
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"move":"vsplit","v1":0,"v2":1,"reassigned":[3]}"#);
        let seq: MoveSequence =
            serde_json::from_str(r#"{"moves":[{"move":"vk4","v1":0}]}"#).unwrap();
        assert_eq!(seq.replay().unwrap(), Graph::complete(4));
    }

    #[test]
    fn vk4_assignment_round_trips() {
        let m = Move::VertexToK4 {
            v1: 2,
            assignment: BTreeMap::from([(0, 3), (5, 1)]),
        };
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"move":"vk4","v1":2,"assignment":[[0,3],[5,1]]}"#);
        assert_eq!(serde_json::from_str::<Move>(&s).unwrap(), m);
        assert!(serde_json::from_str::<Move>(
            r#"{"move":"vk4","v1":2,"assignment":[[0,3],[0,1]]}"#
        )
        .is_err());
    }
}
