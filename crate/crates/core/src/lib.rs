//! Steiner k-eccentricity of vertices in trees.
//!
//! The Steiner distance of a vertex set `S` is the edge count of the smallest
//! subtree containing `S`; the Steiner k-eccentricity of `v` is the largest
//! Steiner distance over all k-sets containing `v`. This crate provides
//!
//! * [`kecc`]: a greedy longest-path algorithm computing it in `O(k·n)`,
//! * [`oracle`]: brute-force ground truth and structural property checkers,
//! * [`transform`]: branch-relocating tree transformations that move any tree
//!   toward the star or the path, the extremes of the average index,
//! * [`io`], [`cli`], [`check`], [`bench`]: edge-list I/O and the command-line
//!   front end.

pub mod bench;
pub mod check;
pub mod cli;
pub mod generate;
pub mod io;
pub mod kecc;
pub mod oracle;
pub mod transform;
pub mod tree;

use thiserror::Error;

pub use generate::{generate, Family};
pub use kecc::{avg_steiner_k_ecc, steiner_k_ecc, EccReport};
pub use oracle::{ecc_k_bruteforce, steiner_distance, SteinerResult};
pub use transform::{collapse_to_star, pi_inverse, pi_transform, stretch_to_path, TransformStep};
pub use tree::{build_tree, PathDescriptor, Tree, TreeError, Vertex, VertexSet};

/// Exact average index: numerator and denominator of a reduced fraction.
pub type Rational = num_rational::Ratio<u64>;

/// Invalid `(vertex, k)` query.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("k = {k} is below the minimum of {min}")]
    KTooSmall { k: usize, min: usize },
    #[error("k = {k} exceeds the number of vertices ({n})")]
    KTooLarge { k: usize, n: usize },
    #[error("vertex {vertex} is out of range for a tree on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
}
