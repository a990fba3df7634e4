//! Infinitesimal rigidity of bar-joint frameworks in non-Euclidean normed
//! planes and spaces: (k, l)-sparsity, inductive move sequences, numerical
//! rigidity for lq norms and edge colourings for polytopic norms.

pub mod construct;
pub mod error;
pub mod export;
pub mod framework;
pub mod graph;
pub mod linalg;
pub mod lq;
pub mod moves;
pub mod polytope;
pub mod rigidity;
pub mod rng;
pub mod sparsity;
pub mod suite;

pub use construct::{construct_coloured_placement, PlacementParams};
pub use error::{GraphError, InvalidMove, ReduceError, RigidityError};
pub use framework::{Framework, NormSpec, Placement};
pub use graph::{Edge, Graph};
pub use linalg::{numerical_rank, RankInfo, TolerancePolicy};
pub use lq::LqNorm;
pub use moves::{apply_move, generate_tight_graph, reduce_to_k1, Move, MoveSequence, Scheme};
pub use polytope::{colour_framework, FrameworkColouring, PolytopeNorm};
pub use rigidity::{analyze, RigidityReport};
pub use sparsity::{is_sparse_bruteforce, is_sparse_pebble, SparsityParams, SparsityVerdict};
