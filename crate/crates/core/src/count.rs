//! Exact subtree counting.
//!
//! Everything rests on one product rule: rooting a tree at `r`, the number of
//! subtrees containing a vertex `v` within `v`'s own branch is
//! `g(v) = prod over children c of (1 + g(c))`. Summing `g` over all
//! vertices counts every subtree once, at its vertex closest to the root.

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use thiserror::Error;

use crate::decompose::LeafPathDecomposition;
use crate::tree::Tree;

/// Number of subtrees of `tree` that contain `root`.
pub fn count_rooted(tree: &Tree, root: usize) -> BigUint {
    count_rooted_avoiding(tree, root, &[])
}

/// Number of subtrees containing `root` inside the component of `root` left
/// after deleting the `blocked` edges. With nothing blocked this is the whole
/// tree. Lets fragment and branch counts run on the original vertex ids.
pub fn count_rooted_avoiding(tree: &Tree, root: usize, blocked: &[(usize, usize)]) -> BigUint {
    let (order, parent) = bfs_avoiding(tree, root, blocked);
    let mut g: Vec<BigUint> = vec![BigUint::one(); tree.n()];
    // Reversed breadth-first order finalizes every vertex before its parent
    // absorbs the factor (1 + g(child)).
    for &v in order.iter().rev() {
        if let Some(p) = parent[v] {
            let factor = BigUint::one() + &g[v];
            g[p] *= factor;
        }
    }
    g.swap_remove(root)
}

/// Total number of subtrees of `tree`.
pub fn count_subtrees(tree: &Tree) -> BigUint {
    let root = 0;
    let (order, parent) = bfs_avoiding(tree, root, &[]);
    let mut g: Vec<BigUint> = vec![BigUint::one(); tree.n()];
    let mut total = BigUint::from(0u32);
    for &v in order.iter().rev() {
        // g(v) is final here; it counts exactly the subtrees whose vertex
        // closest to the root is v.
        total += &g[v];
        if let Some(p) = parent[v] {
            let factor = BigUint::one() + &g[v];
            g[p] *= factor;
        }
    }
    total
}

fn bfs_avoiding(
    tree: &Tree,
    root: usize,
    blocked: &[(usize, usize)],
) -> (Vec<usize>, Vec<Option<usize>>) {
    let blocked: std::collections::HashSet<(usize, usize)> = blocked
        .iter()
        .map(|&(u, v)| (u.min(v), u.max(v)))
        .collect();
    let mut parent: Vec<Option<usize>> = vec![None; tree.n()];
    let mut seen = vec![false; tree.n()];
    let mut order = vec![root];
    seen[root] = true;
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        for &v in tree.neighbors(u) {
            if !seen[v] && !blocked.contains(&(u.min(v), u.max(v))) {
                seen[v] = true;
                parent[v] = Some(u);
                order.push(v);
            }
        }
        i += 1;
    }
    (order, parent)
}

/// Fragment counts along a leaf path, with running prefix and suffix counts.
///
/// Writing `C_k` for the number of subtrees of fragment `k` containing its
/// anchor `x_k`:
///
/// * `prefix_tail(k)` counts subtrees containing `x_k` inside the union of
///   `v1` and fragments `1..=k`; it satisfies `P_k = C_k (1 + P_{k-1})` with
///   the sentinel `P_0 = 1` for the bare leaf `v1`.
/// * `suffix_tail(k)` is the mirror image toward `v2`.
pub struct PathProfile {
    components: Vec<BigUint>,
    prefix: Vec<BigUint>,
    suffix: Vec<BigUint>,
}

impl PathProfile {
    /// Number of interior vertices `n`.
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// `C_k` for `k` in `1..=n`.
    pub fn component(&self, k: usize) -> &BigUint {
        &self.components[k - 1]
    }

    /// Prefix count at `k` in `0..=n`; `0` is the sentinel for `v1` alone.
    pub fn prefix_tail(&self, k: usize) -> &BigUint {
        &self.prefix[k]
    }

    /// Suffix count at `k` in `1..=n + 1`; `n + 1` is the sentinel for `v2`.
    pub fn suffix_tail(&self, k: usize) -> &BigUint {
        &self.suffix[k - 1]
    }
}

/// Computes the fragment counts and running tails for a decomposition.
pub fn path_profile(d: &LeafPathDecomposition) -> PathProfile {
    let n = d.interior_len();
    let path_edges = d.path_edges();
    let components: Vec<BigUint> = (1..=n)
        .map(|k| count_rooted_avoiding(d.tree(), d.vertex_at_slot(k), &path_edges))
        .collect();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(BigUint::one());
    for c in &components {
        let last = prefix.last().expect("sentinel present");
        prefix.push(c * (BigUint::one() + last));
    }
    let mut suffix = vec![BigUint::one()];
    for c in components.iter().rev() {
        let last = suffix.last().expect("sentinel present");
        suffix.push(c * (BigUint::one() + last));
    }
    suffix.reverse();
    PathProfile {
        components,
        prefix,
        suffix,
    }
}

/// Exact change in the total subtree count caused by swapping the fragments
/// at interior slots `k` and `k + 1`, for `k` in `1..=n - 1`. Positive means
/// the swap gains subtrees.
pub fn predicted_delta_component_switch(profile: &PathProfile, k: usize) -> BigInt {
    assert!(1 <= k && k < profile.len());
    let ck = BigInt::from(profile.component(k).clone());
    let ck1 = BigInt::from(profile.component(k + 1).clone());
    let after = BigInt::from(profile.suffix_tail(k + 2).clone());
    let before = BigInt::from(profile.prefix_tail(k - 1).clone());
    (ck - ck1) * (after - before)
}

/// Section counts for the stretch of path between two switch anchors.
///
/// `x_side` and `y_side` list the fragment counts on each half of the
/// section, ordered from the middle of the section outward, so the last
/// entry of each side sits next to its anchor. `c` counts the subtrees of
/// the whole section that contain the vertex nearest the x anchor, `d` the
/// ones containing the vertex nearest the y anchor.
///
/// With one extra fragment on the x side the primed pair covers the full
/// section while `c` and `d` drop the outermost x fragment, matching how the
/// two anchor gaps of one section index differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaCd {
    pub c: BigUint,
    pub d: BigUint,
    pub c_prime: Option<BigUint>,
    pub d_prime: Option<BigUint>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LemmaCdError {
    #[error("every fragment count must be at least one")]
    CountBelowOne,
    #[error("side lengths {x} and {y} must be equal or differ by one extra x entry")]
    LengthMismatch { x: usize, y: usize },
    #[error("counts must interleave non-increasingly from the x side")]
    NotInterleaved,
}

/// Number of subtrees of a path of fragments that contain the anchor end.
///
/// `chain[0]` is the fragment at the anchor end; each subtree either stops
/// there or continues one fragment further, hence the nested product
/// `chain[0] (1 + chain[1] (1 + ..))`, folded from the far end.
fn section_count(chain: &[&BigUint]) -> BigUint {
    let mut acc = BigUint::from(0u32);
    for value in chain.iter().rev() {
        acc = *value * (BigUint::one() + acc);
    }
    acc
}

/// Computes the section counts `c`, `d` and, when `x_side` carries one extra
/// fragment, the primed pair for the widened section.
///
/// Both sides are ordered innermost first: `x_side[0]` and `y_side[0]` are
/// the two adjacent fragments at the junction of the sides. The counts must
/// interleave non-increasingly, `x_1 >= y_1 >= x_2 >= y_2 >= ..`, which is
/// the shape a sorted path presents between its anchors.
pub fn lemma_cd(x_side: &[BigUint], y_side: &[BigUint]) -> Result<LemmaCd, LemmaCdError> {
    let (a, b) = (x_side.len(), y_side.len());
    if a != b && a != b + 1 {
        return Err(LemmaCdError::LengthMismatch { x: a, y: b });
    }
    let one = BigUint::one();
    if x_side.iter().chain(y_side).any(|v| *v < one) {
        return Err(LemmaCdError::CountBelowOne);
    }
    let mut interleaved = Vec::with_capacity(a + b);
    for i in 0..a.max(b) {
        if i < a {
            interleaved.push(&x_side[i]);
        }
        if i < b {
            interleaved.push(&y_side[i]);
        }
    }
    if interleaved.windows(2).any(|w| w[0] < w[1]) {
        return Err(LemmaCdError::NotInterleaved);
    }

    // Chain order: walk outermost x fragment inward, cross the junction,
    // then walk outward on the y side.
    fn chain_from_x(xs: &[BigUint], ys: &[BigUint]) -> BigUint {
        let chain: Vec<&BigUint> = xs.iter().rev().chain(ys.iter()).collect();
        section_count(&chain)
    }

    let (xs_even, primes) = if a == b {
        (x_side, None)
    } else {
        let c_prime = chain_from_x(x_side, y_side);
        let d_prime = chain_from_x(y_side, x_side);
        (&x_side[..a - 1], Some((c_prime, d_prime)))
    };
    let c = chain_from_x(xs_even, y_side);
    let d = chain_from_x(y_side, xs_even);
    let (c_prime, d_prime) = match primes {
        Some((cp, dp)) => (Some(cp), Some(dp)),
        None => (None, None),
    };
    Ok(LemmaCd {
        c,
        d,
        c_prime,
        d_prime,
    })
}
