//! Seeded generators for random trees, kernels, chains and measures.
//!
//! Everything is driven by a caller-supplied RNG so sweeps are reproducible
//! from a single seed. Numerators are small integers normalized by their
//! exact sum, so all generated probabilities are exact rationals.

use std::collections::BTreeMap;

use rand::Rng;

use crate::bmc::{BlockKernel, BmcSpec};
use crate::chains::{product_mc_spec, ChainSpec};
use crate::measure::{config_count, Alphabet, JointMeasure};
use crate::rational::{ratio, Rational};
use crate::tree::{RootedTree, VertexId};

const MAX_NUMERATOR: i64 = 8;

/// Uniform random attachment tree on `n` vertices, rooted at 0.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> RootedTree {
    let edges: Vec<(VertexId, VertexId)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    RootedTree::new(n, &edges, 0).expect("attachment graph is a tree")
}

/// Random exact distribution over `len` outcomes; strictly positive entries
/// when `positive` is set, otherwise zeros are allowed.
pub fn random_distribution<R: Rng>(rng: &mut R, len: usize, positive: bool) -> Vec<Rational> {
    loop {
        let lo = if positive { 1 } else { 0 };
        let nums: Vec<i64> = (0..len)
            .map(|_| rng.gen_range(lo..=MAX_NUMERATOR))
            .collect();
        let total: i64 = nums.iter().sum();
        if total == 0 {
            continue;
        }
        return nums.into_iter().map(|n| ratio(n, total)).collect();
    }
}

/// Random block Markov spec on `tree`: every kernel row is an independent
/// random joint distribution over the whole children block.
pub fn random_bmc_spec<R: Rng>(
    rng: &mut R,
    tree: &RootedTree,
    q: usize,
    positive: bool,
) -> BmcSpec {
    let alphabet = Alphabet::new(q).expect("q >= 1");
    let initial = random_distribution(rng, q, positive);
    let mut kernels = Vec::new();
    for x in tree.vertices() {
        let block = tree.children(x).expect("vertex in range");
        if block.is_empty() {
            continue;
        }
        let width = config_count(&block, q);
        let rows: Vec<Vec<Rational>> = (0..q)
            .map(|_| random_distribution(rng, width, positive))
            .collect();
        kernels.push(BlockKernel::new(x, block, rows, alphabet).expect("valid rows"));
    }
    BmcSpec::new(tree.clone(), alphabet, initial, kernels).expect("valid spec")
}

/// Random spec with per-edge transition matrices, so children are
/// conditionally independent given the parent by construction.
pub fn random_product_spec<R: Rng>(
    rng: &mut R,
    tree: &RootedTree,
    q: usize,
    positive: bool,
) -> BmcSpec {
    let alphabet = Alphabet::new(q).expect("q >= 1");
    let initial = random_distribution(rng, q, positive);
    let mut edge_kernels: BTreeMap<(VertexId, VertexId), Vec<Vec<Rational>>> = BTreeMap::new();
    for x in tree.vertices() {
        for y in tree.children(x).expect("vertex in range") {
            let matrix: Vec<Vec<Rational>> = (0..q)
                .map(|_| random_distribution(rng, q, positive))
                .collect();
            edge_kernels.insert((x, y), matrix);
        }
    }
    product_mc_spec(tree, alphabet, initial, &edge_kernels).expect("valid spec")
}

/// Random time-homogeneous chain.
pub fn random_chain_spec<R: Rng>(rng: &mut R, q: usize, positive: bool) -> ChainSpec {
    let alphabet = Alphabet::new(q).expect("q >= 1");
    let initial = random_distribution(rng, q, positive);
    let transition: Vec<Vec<Rational>> = (0..q)
        .map(|_| random_distribution(rng, q, positive))
        .collect();
    ChainSpec::new(alphabet, initial, transition).expect("valid chain")
}

/// Fully random strictly positive joint measure on `tree`.
pub fn random_positive_measure<R: Rng>(rng: &mut R, tree: &RootedTree, q: usize) -> JointMeasure {
    let alphabet = Alphabet::new(q).expect("q >= 1");
    let size = config_count(&tree.vertex_set(), q);
    let table = random_distribution(rng, size, true);
    JointMeasure::new(tree.clone(), alphabet, table).expect("valid measure")
}
