//! Finite rooted trees and their combinatorial operators.
//!
//! A `RootedTree` is an undirected tree over dense vertex ids `0..n` with a
//! distinguished root. All derived notions (children, strict future, past,
//! level sets) are taken with respect to that root; `rerooted` produces the
//! same underlying tree viewed from another root.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

pub type VertexId = usize;

/// Vertex subset in canonical ascending order.
pub type VertexSet = BTreeSet<VertexId>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    labels: Vec<String>,
    /// Sorted neighbor lists.
    adj: Vec<Vec<VertexId>>,
    /// Canonical `(min, max)` pairs, sorted.
    edges: Vec<(VertexId, VertexId)>,
    root: VertexId,
    /// `parent[root] == root`.
    parent: Vec<VertexId>,
    /// Distance to the root.
    depth: Vec<usize>,
    /// Neighbors strictly farther from the root, sorted.
    children: Vec<Vec<VertexId>>,
}

impl RootedTree {
    /// Tree over `n` vertices labeled `"0"`..`"n-1"`.
    pub fn new(n: usize, edges: &[(VertexId, VertexId)], root: VertexId) -> Result<Self> {
        let labels = (0..n).map(|v| v.to_string()).collect();
        Self::with_labels(labels, edges, root)
    }

    pub fn with_labels(
        labels: Vec<String>,
        edges: &[(VertexId, VertexId)],
        root: VertexId,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidTree(
                "tree must have at least one vertex".into(),
            ));
        }
        {
            let mut seen = BTreeSet::new();
            for l in &labels {
                if !seen.insert(l) {
                    return Err(Error::InvalidTree(format!("duplicate vertex label {l:?}")));
                }
            }
        }
        if root >= n {
            return Err(Error::InvalidTree(format!(
                "root {root} not in vertex range 0..{n}"
            )));
        }
        if edges.len() != n - 1 {
            return Err(Error::InvalidTree(format!(
                "a tree on {n} vertices needs {} edges, got {}",
                n - 1,
                edges.len()
            )));
        }
        let mut canon: Vec<(VertexId, VertexId)> = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidTree(format!(
                    "edge ({a},{b}) out of vertex range"
                )));
            }
            if a == b {
                return Err(Error::InvalidTree(format!("self-loop at vertex {a}")));
            }
            canon.push((a.min(b), a.max(b)));
        }
        canon.sort_unstable();
        if canon.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidTree("duplicate edge".into()));
        }

        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &canon {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }

        // BFS from the root; |E| = n-1 plus full reachability implies acyclic.
        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![usize::MAX; n];
        parent[root] = root;
        depth[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        let mut reached = 1usize;
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if depth[y] == usize::MAX {
                    depth[y] = depth[x] + 1;
                    parent[y] = x;
                    reached += 1;
                    queue.push_back(y);
                }
            }
        }
        if reached != n {
            return Err(Error::InvalidTree("graph is not connected".into()));
        }

        let mut children = vec![Vec::new(); n];
        for x in 0..n {
            for &y in &adj[x] {
                if depth[y] == depth[x] + 1 {
                    children[x].push(y);
                }
            }
        }

        Ok(RootedTree {
            labels,
            adj,
            edges: canon,
            root,
            parent,
            depth,
            children,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        0..self.labels.len()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices().collect()
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn label(&self, x: VertexId) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<VertexId> {
        self.labels.iter().position(|l| l == label)
    }

    /// Canonical `(min, max)` edge list, sorted.
    pub fn edge_list(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    /// Same vertices and edges; the roots may differ.
    pub fn same_underlying(&self, other: &RootedTree) -> bool {
        self.labels.len() == other.labels.len() && self.edges == other.edges
    }

    /// The same underlying tree viewed from `new_root`.
    pub fn rerooted(&self, new_root: VertexId) -> Result<RootedTree> {
        self.check_vertex(new_root)?;
        Self::with_labels(self.labels.clone(), &self.edges, new_root)
    }

    fn check_vertex(&self, x: VertexId) -> Result<()> {
        if x < self.labels.len() {
            Ok(())
        } else {
            Err(Error::VertexNotInTree(x))
        }
    }

    /// Distance from `x` to the root.
    pub fn depth(&self, x: VertexId) -> Result<usize> {
        self.check_vertex(x)?;
        Ok(self.depth[x])
    }

    /// Maximum depth over all vertices.
    pub fn height(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// Graph distance between two vertices.
    pub fn distance(&self, x: VertexId, y: VertexId) -> Result<usize> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        // Walk both vertices up to their lowest common ancestor.
        let (mut a, mut b) = (x, y);
        let mut steps = 0usize;
        while a != b {
            if self.depth[a] >= self.depth[b] {
                a = self.parent[a];
            } else {
                b = self.parent[b];
            }
            steps += 1;
        }
        Ok(steps)
    }

    pub fn is_leaf(&self, x: VertexId) -> Result<bool> {
        self.check_vertex(x)?;
        Ok(self.children[x].is_empty())
    }

    /// Direct successors of `x`: neighbors strictly farther from the root.
    pub fn children(&self, x: VertexId) -> Result<VertexSet> {
        self.check_vertex(x)?;
        Ok(self.children[x].iter().copied().collect())
    }

    /// `k`-th level successors of `x` (children iterated `k` times, `k >= 1`).
    pub fn level_k_successors(&self, x: VertexId, k: usize) -> Result<VertexSet> {
        self.check_vertex(x)?;
        if k == 0 {
            return Err(Error::InvalidArgument(
                "successor level must be >= 1".into(),
            ));
        }
        let mut layer: Vec<VertexId> = vec![x];
        for _ in 0..k {
            layer = layer
                .iter()
                .flat_map(|&v| self.children[v].iter().copied())
                .collect();
            if layer.is_empty() {
                break;
            }
        }
        Ok(layer.into_iter().collect())
    }

    /// All proper descendants of `x` with respect to the root.
    pub fn strict_future(&self, x: VertexId) -> Result<VertexSet> {
        self.check_vertex(x)?;
        let mut out = VertexSet::new();
        let mut stack: Vec<VertexId> = self.children[x].to_vec();
        while let Some(v) = stack.pop() {
            out.insert(v);
            stack.extend_from_slice(&self.children[v]);
        }
        Ok(out)
    }

    /// The parent map `r`; fixes the root (`parent(root) == root`).
    pub fn parent(&self, x: VertexId) -> Result<VertexId> {
        self.check_vertex(x)?;
        Ok(self.parent[x])
    }

    /// The past of `x`: the path `{r(x), r²(x), …, root}`; empty for the root.
    pub fn past(&self, x: VertexId) -> Result<VertexSet> {
        self.check_vertex(x)?;
        let mut out = VertexSet::new();
        let mut v = x;
        while v != self.root {
            v = self.parent[v];
            out.insert(v);
        }
        Ok(out)
    }

    /// Nearest neighbors of `x`; root-independent.
    pub fn neighbors(&self, x: VertexId) -> Result<VertexSet> {
        self.check_vertex(x)?;
        Ok(self.adj[x].iter().copied().collect())
    }

    /// Degree of `x`.
    pub fn degree(&self, x: VertexId) -> Result<usize> {
        self.check_vertex(x)?;
        Ok(self.adj[x].len())
    }

    /// All vertices at distance <= `n` from the root.
    pub fn level_ball(&self, n: usize) -> VertexSet {
        self.vertices().filter(|&v| self.depth[v] <= n).collect()
    }

    /// Every nonempty vertex set of size <= `max_size` inducing a connected
    /// subgraph, sorted by size then lexicographically.
    pub fn connected_subsets(&self, max_size: usize) -> Result<Vec<VertexSet>> {
        let n = self.labels.len();
        if n > 63 {
            return Err(Error::TooLarge(format!(
                "subset enumeration supports at most 63 vertices, tree has {n}"
            )));
        }
        let mut out: Vec<VertexSet> = Vec::new();
        for mask in 1u64..(1u64 << n) {
            let size = mask.count_ones() as usize;
            if size > max_size {
                continue;
            }
            if self.mask_connected(mask) {
                out.push((0..n).filter(|&v| mask & (1 << v) != 0).collect());
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(out)
    }

    fn mask_connected(&self, mask: u64) -> bool {
        let start = mask.trailing_zeros() as usize;
        let mut seen: u64 = 1 << start;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                let bit = 1u64 << w;
                if mask & bit != 0 && seen & bit == 0 {
                    seen |= bit;
                    stack.push(w);
                }
            }
        }
        seen == mask
    }
}
