//! Error type shared across the crate.

use thiserror::Error;

use crate::tree::VertexId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex not in tree: {0}")]
    VertexNotInTree(VertexId),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("supports must be disjoint")]
    OverlappingSupports,

    #[error("conditioning on null event")]
    NullConditioning,

    #[error("symbol {symbol} out of alphabet of size {q}")]
    SymbolOutOfRange { symbol: usize, q: usize },

    #[error("no block at leaf vertex {0}")]
    NoBlockAtLeaf(VertexId),

    #[error("horizon beyond tree depth")]
    HorizonBeyondTreeDepth,

    #[error("not a chain embedding: {0}")]
    NotChainEmbedding(String),

    #[error("measure is not an o-BMC")]
    NotBlockMarkov,

    #[error("measure and tree disagree on the underlying vertex set or edges")]
    TreeMismatch,

    #[error("tree too large: {0}")]
    TooLarge(String),

    #[error("block decomposition identity violated at intermediate level {level}: direct {direct} vs decomposed {decomposed}")]
    BlockDecomposition {
        level: usize,
        direct: String,
        decomposed: String,
    },

    #[error("class inclusion violated (internal inconsistency): {0}")]
    InclusionChainViolated(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
