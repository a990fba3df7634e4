use thiserror::Error;

use crate::graph::Edge;

/// Errors raised by graph validation and the combinatorial routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0:?}")]
    DuplicateEdge(Edge),
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge {0:?} is not in the graph")]
    EdgeNotInGraph(Edge),
    #[error("brute-force sparsity check limited to 12 vertices, got {0}")]
    TooLarge(usize),
    #[error("invalid sparsity parameters (k={k}, l={l}); need k >= 1 and 0 <= l < 2k")]
    InvalidSparsityParams { k: u32, l: i64 },
}

/// A move whose precondition fails on the graph it is applied to.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid move: {0}")]
pub struct InvalidMove(pub String);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReduceError {
    #[error("graph is not (2,2)-tight")]
    NotTight,
    /// Search exhausted without finding a reduction. Only reachable if the
    /// inductive characterisation fails on this input.
    #[error("no reduction to K1 found")]
    NoReduction,
}

/// Errors from framework construction and rigidity analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RigidityError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("q = 2 is the Euclidean norm, which has rotational trivial flexes; not supported")]
    EuclideanNorm,
    #[error("q = {0} is outside the supported range 1 < q < inf")]
    InvalidQ(f64),
    #[error("placement has {got} points but the graph has {expected} vertices")]
    PlacementSize { expected: usize, got: usize },
    #[error("placement point {index} has dimension {got}, expected {expected}")]
    PlacementDimension {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("placement coordinate of vertex {0} is not finite")]
    NonFinite(usize),
    #[error("edge {0:?} has coincident endpoints")]
    CoincidentEndpoints(Edge),
    #[error("vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("map is not a signed permutation: {0}")]
    NotSignedPermutation(String),
    #[error("invalid polytope norm: {0}")]
    InvalidPolytope(String),
    #[error("framework is not well-positioned; tied edges: {0:?}")]
    NotWellPositioned(Vec<Edge>),
    #[error("operation requires the {expected} norm family")]
    WrongNorm { expected: &'static str },
    #[error("colour {0} spans the vertex set; no partition witness exists")]
    ColourSpans(usize),
    #[error("colour {0} is out of range for this norm")]
    ColourOutOfRange(usize),
    #[error("parameter shrinking underflowed at move {move_index}")]
    ParameterUnderflow { move_index: usize },
    #[error("construction requires scheme-B moves, got {0} at move {1}")]
    UnsupportedMove(&'static str, usize),
    #[error(transparent)]
    Move(#[from] InvalidMove),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
