//! Decomposition of a tree along the path between two leaves.
//!
//! Fixing leaves `v1` and `v2`, the path between them reads
//! `v1, x_1, .., x_n, v2`. Deleting the path edges splits the rest of the
//! tree into fragments, one per interior vertex: fragment `k` is the
//! component still attached to `x_k`. All switch moves and their counting
//! formulas are phrased against this picture.

use thiserror::Error;

use crate::tree::Tree;

/// Slots number positions on the path: `0` is `v1`, `1..=n` are the interior
/// vertices, `n + 1` is `v2`.
#[derive(Debug)]
pub struct LeafPathDecomposition<'a> {
    tree: &'a Tree,
    path: Vec<usize>,
    slot: Vec<Option<usize>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("vertex {vertex} does not exist")]
    UnknownVertex { vertex: usize },
    #[error("vertex {vertex} is not a leaf")]
    NotALeaf { vertex: usize },
    #[error("the two endpoints must be distinct, got {vertex} twice")]
    SameVertex { vertex: usize },
    #[error("the path between the endpoints has no interior vertex")]
    NoInternalVertex,
}

/// One fragment of a decomposition: the component of the anchor vertex after
/// the path edges are removed.
#[derive(Debug)]
pub struct Fragment<'a> {
    tree: &'a Tree,
    pub anchor: usize,
    /// All fragment vertices including the anchor, ascending.
    pub vertices: Vec<usize>,
}

impl Fragment<'_> {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    /// The fragment as a standalone tree, plus the relabeled anchor id.
    pub fn to_tree(&self) -> (Tree, usize) {
        let tree = self.tree.induced(&self.vertices);
        let root = self
            .vertices
            .binary_search(&self.anchor)
            .expect("anchor is a fragment vertex");
        (tree, root)
    }
}

impl<'a> LeafPathDecomposition<'a> {
    /// Decomposes `tree` along the path from leaf `v1` to leaf `v2`.
    pub fn leaf_path(tree: &'a Tree, v1: usize, v2: usize) -> Result<Self, DecomposeError> {
        for v in [v1, v2] {
            if v >= tree.n() {
                return Err(DecomposeError::UnknownVertex { vertex: v });
            }
        }
        if v1 == v2 {
            return Err(DecomposeError::SameVertex { vertex: v1 });
        }
        for v in [v1, v2] {
            if tree.degree(v) != 1 {
                return Err(DecomposeError::NotALeaf { vertex: v });
            }
        }
        let path = tree_path(tree, v1, v2);
        if path.len() < 3 {
            return Err(DecomposeError::NoInternalVertex);
        }
        let mut slot = vec![None; tree.n()];
        for (s, &v) in path.iter().enumerate() {
            slot[v] = Some(s);
        }
        Ok(LeafPathDecomposition { tree, path, slot })
    }

    pub fn tree(&self) -> &'a Tree {
        self.tree
    }

    pub fn v1(&self) -> usize {
        self.path[0]
    }

    pub fn v2(&self) -> usize {
        *self.path.last().expect("path is nonempty")
    }

    /// Number of interior vertices `n`, always at least one.
    pub fn interior_len(&self) -> usize {
        self.path.len() - 2
    }

    /// The full path `v1, x_1, .., x_n, v2`.
    pub fn path(&self) -> &[usize] {
        &self.path
    }

    /// The interior vertices `x_1, .., x_n`.
    pub fn interior(&self) -> &[usize] {
        &self.path[1..self.path.len() - 1]
    }

    /// Vertex sitting at `slot`, which must lie in `0..=n + 1`.
    pub fn vertex_at_slot(&self, slot: usize) -> usize {
        self.path[slot]
    }

    /// Slot of `v` if it lies on the path.
    pub fn slot_of(&self, v: usize) -> Option<usize> {
        self.slot[v]
    }

    /// The `n + 1` path edges as slot-ordered vertex pairs.
    pub fn path_edges(&self) -> Vec<(usize, usize)> {
        self.path.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// Neighbors of `x_k` outside the path, ascending. These are the roots of
    /// the branches hanging off fragment `k`.
    pub fn off_path_neighbors(&self, k: usize) -> Vec<usize> {
        let x = self.vertex_at_slot(k);
        self.tree
            .neighbors(x)
            .iter()
            .copied()
            .filter(|&u| self.slot[u].is_none())
            .collect()
    }

    /// Fragment attached to `x_k`, for `k` in `1..=n`.
    pub fn fragment(&self, k: usize) -> Fragment<'a> {
        assert!(1 <= k && k <= self.interior_len());
        let anchor = self.vertex_at_slot(k);
        let vertices = self.tree.component_avoiding(anchor, &self.path_edges());
        Fragment {
            tree: self.tree,
            anchor,
            vertices,
        }
    }
}

/// The unique vertex path from `a` to `b`, endpoints included.
fn tree_path(tree: &Tree, a: usize, b: usize) -> Vec<usize> {
    let mut parent = vec![usize::MAX; tree.n()];
    let mut queue = std::collections::VecDeque::from([a]);
    parent[a] = a;
    while let Some(u) = queue.pop_front() {
        if u == b {
            break;
        }
        for &v in tree.neighbors(u) {
            if parent[v] == usize::MAX {
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    let mut path = vec![b];
    while *path.last().expect("path is nonempty") != a {
        path.push(parent[*path.last().expect("path is nonempty")]);
    }
    path.reverse();
    path
}
