//! Exact-arithmetic classification of probability measures indexed by finite
//! rooted trees.
//!
//! The crate builds joint measures on configuration spaces `Ξ^V` over a
//! finite tree (directly, from block-kernel specifications
//! ([`bmc::BmcSpec`]), or by embedding one-dimensional chains with
//! [`chains::embed_chain`]) and decides by exhaustive exact enumeration
//! whether a measure
//!
//! * has the block Markov property for a given root ([`classify::check_obmc`]),
//! * is a Markov chain in the tree sense: its restriction to every connected
//!   subset is a Markov random field ([`classify::check_mc`]),
//! * is a Markov random field ([`classify::check_mrf`]).
//!
//! Every failed check comes with a witness: the two conditioning windows and
//! the two exact conditional probabilities that differ. All arithmetic is
//! arbitrary-precision rational; there is no tolerance anywhere.

pub mod bmc;
pub mod chains;
pub mod classify;
pub mod error;
pub mod io;
pub mod measure;
pub mod random;
pub mod rational;
pub mod tree;

pub use error::{Error, Result};
pub use measure::{Alphabet, Configuration, JointMeasure};
pub use rational::Rational;
pub use tree::{RootedTree, VertexId, VertexSet};
