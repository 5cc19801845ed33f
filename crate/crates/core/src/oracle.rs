//! Brute-force ground truth.
//!
//! Two independent generators live here: a subset scan that counts subtrees
//! with no algebra at all, and exhaustive enumeration of all non-isomorphic
//! realizations of a degree sequence. Both are deliberately slow and simple;
//! every clever routine in the crate is tested against them.

use num_bigint::BigUint;
use thiserror::Error;

use crate::canon::canonical_code;
use crate::tree::{DegreeSequence, Tree};

/// Largest tree the subset scan accepts.
pub const ORACLE_VERTEX_CAP: usize = 24;

/// Largest total vertex count for exhaustive family enumeration.
pub const FAMILY_VERTEX_CAP: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{vertices} vertices exceeds the brute-force cap of {cap}")]
    SizeCapExceeded { vertices: usize, cap: usize },
}

/// All non-isomorphic trees realizing a degree sequence.
#[derive(Debug)]
pub struct TreeFamily {
    pub degree_sequence: DegreeSequence,
    /// Members sorted by canonical code; codes are pairwise distinct.
    pub members: Vec<Tree>,
    /// Labeled trees generated before deduplication. Equals the multinomial
    /// (n-2)! / prod (d_i - 1)! over the internal degrees.
    pub labeled_realizations: u64,
}

/// Counts subtrees by scanning every nonempty vertex subset and keeping the
/// connected ones.
pub fn oracle_count(tree: &Tree) -> Result<BigUint, OracleError> {
    scan_subsets(tree, None)
}

/// Counts subtrees containing `u`, by the same scan restricted to subsets
/// with `u` present.
pub fn oracle_count_containing(tree: &Tree, u: usize) -> Result<BigUint, OracleError> {
    assert!(u < tree.n());
    scan_subsets(tree, Some(u))
}

fn scan_subsets(tree: &Tree, required: Option<usize>) -> Result<BigUint, OracleError> {
    let n = tree.n();
    if n > ORACLE_VERTEX_CAP {
        return Err(OracleError::SizeCapExceeded {
            vertices: n,
            cap: ORACLE_VERTEX_CAP,
        });
    }
    let masks: Vec<u32> = (0..n)
        .map(|v| {
            tree.neighbors(v)
                .iter()
                .fold(0u32, |m, &u| m | (1 << u))
        })
        .collect();
    let require = required.map_or(0u32, |u| 1 << u);
    let mut count: u64 = 0;
    for subset in 1u32..(1u32 << n) {
        if subset & require != require {
            continue;
        }
        if subset_connected(subset, &masks) {
            count += 1;
        }
    }
    Ok(BigUint::from(count))
}

/// Flood-fills from the lowest bit using adjacency masks; connected exactly
/// when the fill recovers the whole subset.
fn subset_connected(subset: u32, masks: &[u32]) -> bool {
    let mut reached = subset & subset.wrapping_neg();
    loop {
        let mut next = reached;
        let mut bits = reached;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            next |= masks[v] & subset;
        }
        if next == reached {
            return reached == subset;
        }
        reached = next;
    }
}

/// Enumerates the complete family of a degree sequence.
///
/// Internal vertices take ids `0..m` in descending degree order, leaves
/// `m..n`. Every labeled realization is the decode of a Prüfer sequence in
/// which internal vertex `i` appears exactly `d_i - 1` times and leaves not
/// at all, so walking the multiset permutations of the base sequence visits
/// each labeled tree exactly once.
pub fn enumerate_family(
    ds: &DegreeSequence,
    max_vertices: usize,
) -> Result<TreeFamily, OracleError> {
    let cap = max_vertices.min(FAMILY_VERTEX_CAP);
    let n = ds.total_vertices();
    if n > cap {
        return Err(OracleError::SizeCapExceeded { vertices: n, cap });
    }
    let mut base: Vec<usize> = Vec::with_capacity(n - 2);
    for (i, &d) in ds.degrees().iter().enumerate() {
        base.extend(std::iter::repeat(i).take(d - 1));
    }
    debug_assert_eq!(base.len(), n - 2);
    let mut by_code: std::collections::BTreeMap<String, Tree> = Default::default();
    let mut labeled: u64 = 0;
    loop {
        let tree = prufer_decode(n, &base);
        labeled += 1;
        by_code.entry(canonical_code(&tree)).or_insert(tree);
        if !next_permutation(&mut base) {
            break;
        }
    }
    Ok(TreeFamily {
        degree_sequence: ds.clone(),
        members: by_code.into_values().collect(),
        labeled_realizations: labeled,
    })
}

/// All non-isomorphic trees on exactly `n` vertices, sorted by canonical
/// code. Grown by attaching a new leaf to every vertex of every smaller
/// shape; far cheaper than sweeping Prüfer space when every degree sequence
/// is wanted at once.
pub fn enumerate_all_trees(n: usize) -> Result<Vec<Tree>, OracleError> {
    if n > FAMILY_VERTEX_CAP {
        return Err(OracleError::SizeCapExceeded {
            vertices: n,
            cap: FAMILY_VERTEX_CAP,
        });
    }
    assert!(n >= 1);
    let mut shapes = vec![Tree::single()];
    for size in 2..=n {
        let mut next: std::collections::BTreeMap<String, Tree> = Default::default();
        for tree in &shapes {
            let mut edges = tree.edges();
            edges.push((0, 0));
            for attach in 0..tree.n() {
                *edges.last_mut().expect("slot for the new edge") = (attach, size - 1);
                let grown = Tree::from_edges(size, &edges).expect("leaf attachment keeps a tree");
                next.entry(canonical_code(&grown)).or_insert(grown);
            }
        }
        shapes = next.into_values().collect();
    }
    Ok(shapes)
}

/// Standard Prüfer decoding with a min-heap of current leaves.
pub(crate) fn prufer_decode(n: usize, seq: &[usize]) -> Tree {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;
    debug_assert_eq!(seq.len(), n - 2);
    let mut degree = vec![1usize; n];
    for &v in seq {
        degree[v] += 1;
    }
    let mut heap: BinaryHeap<Reverse<usize>> = (0..n)
        .filter(|&v| degree[v] == 1)
        .map(Reverse)
        .collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &v in seq {
        let Reverse(leaf) = heap.pop().expect("a leaf always remains");
        edges.push((leaf, v));
        degree[v] -= 1;
        if degree[v] == 1 {
            heap.push(Reverse(v));
        }
    }
    let Reverse(a) = heap.pop().expect("two vertices remain");
    let Reverse(b) = heap.pop().expect("two vertices remain");
    edges.push((a, b));
    Tree::from_edges(n, &edges).expect("Prüfer decode yields a tree")
}

/// In-place lexicographic successor; false once `v` is the last permutation.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
