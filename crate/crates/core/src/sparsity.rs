//! (k,l)-sparsity: a brute-force subset oracle and the pebble game.

use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::graph::Graph;

/// Largest vertex count accepted by [`is_sparse_bruteforce`].
pub const BRUTE_FORCE_MAX_N: usize = 12;

/// Parameters of the (k,l)-sparsity count `|E(H)| <= k|V(H)| - l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SparsityParams {
    k: u32,
    l: u32,
}

impl SparsityParams {
    pub fn new(k: u32, l: u32) -> Result<Self, GraphError> {
        if k == 0 || l >= 2 * k {
            return Err(GraphError::InvalidSparsityParams { k, l: l as i64 });
        }
        Ok(SparsityParams { k, l })
    }

    /// The (2,2) counts that characterise the non-Euclidean planar case.
    pub const TWO_TWO: SparsityParams = SparsityParams { k: 2, l: 2 };

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    /// `k * vertices - l`, signed because it is negative for small sets when l > k.
    pub fn bound(&self, vertices: usize) -> i64 {
        self.k as i64 * vertices as i64 - self.l as i64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsityVerdict {
    pub is_sparse: bool,
    pub is_tight: bool,
    /// A vertex set spanning more than `k|X| - l` edges, present iff not sparse.
    pub witness: Option<Vec<usize>>,
}

impl SparsityVerdict {
    fn sparse(g: &Graph, params: SparsityParams) -> Self {
        SparsityVerdict {
            is_sparse: true,
            is_tight: g.edge_count() as i64 == params.bound(g.vertex_count()),
            witness: None,
        }
    }

    fn violated(witness: Vec<usize>) -> Self {
        SparsityVerdict {
            is_sparse: false,
            is_tight: false,
            witness: Some(witness),
        }
    }
}

/// Number of edges of `g` with both endpoints in `vertices`.
pub fn induced_edge_count(g: &Graph, vertices: &[usize]) -> usize {
    let mut inside = vec![false; g.vertex_count()];
    for &v in vertices {
        inside[v] = true;
    }
    g.edges()
        .iter()
        .filter(|&&(a, b)| inside[a] && inside[b])
        .count()
}

/// Enumerates every vertex subset. The witness is a smallest violating set
/// (ties broken by the lowest bitmask).
pub fn is_sparse_bruteforce(
    g: &Graph,
    params: SparsityParams,
) -> Result<SparsityVerdict, GraphError> {
    let n = g.vertex_count();
    if n > BRUTE_FORCE_MAX_N {
        return Err(GraphError::TooLarge(n));
    }
    let masks: Vec<u32> = g
        .edges()
        .iter()
        .map(|&(a, b)| (1u32 << a) | (1u32 << b))
        .collect();
    let mut best: Option<(u32, u32)> = None;
    for subset in 1u32..(1u32 << n) {
        let size = subset.count_ones();
        if best.is_some_and(|(s, _)| size >= s) {
            continue;
        }
        let inside = masks.iter().filter(|&&m| m & subset == m).count() as i64;
        if inside >= 1 && inside > params.bound(size as usize) {
            best = Some((size, subset));
        }
    }
    Ok(match best {
        None => SparsityVerdict::sparse(g, params),
        Some((_, subset)) => {
            SparsityVerdict::violated((0..n).filter(|v| subset & (1 << v) != 0).collect())
        }
    })
}

/// The (k,l) pebble game.
///
/// Every vertex starts with `k` pebbles. An edge is accepted when `l + 1`
/// pebbles can be gathered on its endpoints by reversing directed paths;
/// one pebble is then spent to orient the edge out of an endpoint. The
/// graph is sparse iff every edge is accepted. On rejection, the vertices
/// reachable from the endpoints span a block with more than `k|X| - l` edges.
pub fn is_sparse_pebble(g: &Graph, params: SparsityParams) -> SparsityVerdict {
    let mut game = PebbleGame::new(g.vertex_count(), params);
    for &(a, b) in g.edges() {
        if let Err(reach) = game.insert(a, b) {
            let witness = completed_block(g, params, reach);
            return SparsityVerdict::violated(witness);
        }
    }
    SparsityVerdict::sparse(g, params)
}

/// The rejected edge's reach set violates the count once the whole graph's
/// edges are included.
fn completed_block(g: &Graph, params: SparsityParams, reach: Vec<usize>) -> Vec<usize> {
    debug_assert!(
        induced_edge_count(g, &reach) as i64 > params.bound(reach.len()),
        "pebble witness must violate the sparsity count"
    );
    reach
}

struct PebbleGame {
    k: u32,
    l: u32,
    pebbles: Vec<u32>,
    out: Vec<Vec<usize>>,
}

impl PebbleGame {
    fn new(n: usize, params: SparsityParams) -> Self {
        PebbleGame {
            k: params.k,
            l: params.l,
            pebbles: vec![params.k; n],
            out: vec![Vec::new(); n],
        }
    }

    fn insert(&mut self, a: usize, b: usize) -> Result<(), Vec<usize>> {
        let need = self.l + 1;
        while self.pebbles[a] + self.pebbles[b] < need {
            let gathered = (self.pebbles[a] < self.k && self.gather(a, b))
                || (self.pebbles[b] < self.k && self.gather(b, a));
            if !gathered {
                let mut reach = self.reach(&[a, b]);
                reach.sort_unstable();
                return Err(reach);
            }
        }
        let (from, to) = if self.pebbles[a] > 0 { (a, b) } else { (b, a) };
        self.pebbles[from] -= 1;
        self.out[from].push(to);
        Ok(())
    }

    /// Moves one pebble to `target` along a reversed directed path, never
    /// drawing from `keep`.
    fn gather(&mut self, target: usize, keep: usize) -> bool {
        let n = self.pebbles.len();
        let mut parent = vec![usize::MAX; n];
        let mut visited = vec![false; n];
        visited[target] = true;
        visited[keep] = true;
        let mut stack = vec![target];
        let mut found = None;
        'search: while let Some(v) = stack.pop() {
            for &w in &self.out[v] {
                if visited[w] {
                    continue;
                }
                visited[w] = true;
                parent[w] = v;
                if self.pebbles[w] > 0 {
                    found = Some(w);
                    break 'search;
                }
                stack.push(w);
            }
        }
        let Some(source) = found else {
            return false;
        };
        self.pebbles[source] -= 1;
        self.pebbles[target] += 1;
        let mut w = source;
        while w != target {
            let v = parent[w];
            let pos = self.out[v].iter().position(|&x| x == w).expect("path edge");
            self.out[v].swap_remove(pos);
            self.out[w].push(v);
            w = v;
        }
        true
    }

    fn reach(&self, roots: &[usize]) -> Vec<usize> {
        let mut visited = vec![false; self.pebbles.len()];
        let mut stack: Vec<usize> = roots.to_vec();
        for &r in roots {
            visited[r] = true;
        }
        let mut found = roots.to_vec();
        while let Some(v) = stack.pop() {
            for &w in &self.out[v] {
                if !visited[w] {
                    visited[w] = true;
                    found.push(w);
                    stack.push(w);
                }
            }
        }
        found
    }
}
