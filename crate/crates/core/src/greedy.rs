//! Greedy trees: breadth-first construction from a degree sequence, and the
//! structural checks that recognize one.

use crate::tree::{DegreeSequence, RootedView, Tree};

/// A greedy tree together with how it was built. The root is always vertex
/// zero and child ids grow in assignment order, so equal inputs rebuild the
/// identical labeled tree.
pub struct GreedyTree {
    pub tree: Tree,
    pub root: usize,
    /// Degrees assigned at each depth, in assignment order. Level zero holds
    /// just the root degree; each level is non-increasing.
    pub level_degrees: Vec<Vec<usize>>,
}

/// Builds the greedy tree: the root takes the largest degree, and children
/// are drawn from the remaining degrees in descending order (all internal
/// degrees before any leaf), parents served in breadth-first order.
///
/// Total construction is forced by the sequence, so this never fails; the
/// empty sequence yields the single edge.
pub fn build_greedy(ds: &DegreeSequence) -> GreedyTree {
    let degrees = ds.degrees();
    if degrees.is_empty() {
        return GreedyTree {
            tree: Tree::path(2),
            root: 0,
            level_degrees: vec![vec![1], vec![1]],
        };
    }
    let leaf_count = ds.leaf_count();
    let mut pool: std::collections::VecDeque<usize> = degrees[1..]
        .iter()
        .copied()
        .chain(std::iter::repeat(1).take(leaf_count))
        .collect();
    let mut edges = Vec::new();
    let mut next_id = 1usize;
    // Queue entries: (vertex, open child slots, depth). The root spends its
    // whole degree on children; every other internal vertex spends one edge
    // on its parent.
    let mut queue = std::collections::VecDeque::from([(0usize, degrees[0], 0usize)]);
    let mut level_degrees = vec![vec![degrees[0]]];
    while let Some((v, slots, depth)) = queue.pop_front() {
        for _ in 0..slots {
            let d = pool
                .pop_front()
                .expect("pool size equals the total number of child slots");
            let child = next_id;
            next_id += 1;
            edges.push((v, child));
            if level_degrees.len() <= depth + 1 {
                level_degrees.push(Vec::new());
            }
            level_degrees[depth + 1].push(d);
            if d > 1 {
                queue.push_back((child, d - 1, depth + 1));
            }
        }
    }
    debug_assert!(pool.is_empty());
    debug_assert_eq!(next_id, ds.total_vertices());
    let tree = Tree::from_edges(next_id, &edges).expect("greedy construction yields a tree");
    GreedyTree {
        tree,
        root: 0,
        level_degrees,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreedyCondition {
    /// The root must carry a maximum degree.
    RootDegree,
    /// Any two leaf depths differ by at most one.
    LeafHeights,
    /// Every degree at one depth is at least every degree one deeper.
    HeightMonotone,
    /// Between same-depth vertices of unequal degree, the larger-degree side
    /// dominates depth-by-depth over descendants.
    SubtreeDominance,
    /// The same comparison over the two sibling groups.
    SiblingDominance,
}

#[derive(Debug)]
pub struct GreedyViolation {
    pub condition: GreedyCondition,
    pub root: usize,
    pub detail: String,
}

#[derive(Debug)]
pub struct GreedyVerdict {
    pub greedy: bool,
    pub violation: Option<GreedyViolation>,
}

/// Checks whether some maximum-degree root makes all structural conditions
/// hold. A failing verdict carries the first violation found under the first
/// candidate root.
///
/// The conditions are sufficient, not known to be necessary, so a `true`
/// verdict on an exotic tree is a claim about structure, not a certificate
/// of count-maximality.
pub fn is_greedy(tree: &Tree) -> GreedyVerdict {
    if tree.n() <= 2 {
        return GreedyVerdict {
            greedy: true,
            violation: None,
        };
    }
    let max_degree = (0..tree.n()).map(|v| tree.degree(v)).max().expect("nonempty");
    let candidates: Vec<usize> = (0..tree.n())
        .filter(|&v| tree.degree(v) == max_degree)
        .collect();
    let mut first_violation = None;
    for &root in &candidates {
        match check_from_root(tree, root) {
            Ok(()) => {
                return GreedyVerdict {
                    greedy: true,
                    violation: None,
                }
            }
            Err(v) => {
                if first_violation.is_none() {
                    first_violation = Some(v);
                }
            }
        }
    }
    GreedyVerdict {
        greedy: false,
        violation: first_violation,
    }
}

fn check_from_root(tree: &Tree, root: usize) -> Result<(), GreedyViolation> {
    let view = RootedView::new(tree, root);
    let n = tree.n();
    let fail = |condition, detail: String| {
        Err(GreedyViolation {
            condition,
            root,
            detail,
        })
    };

    let leaf_depths: Vec<usize> = tree.leaves().iter().map(|&v| view.depth(v)).collect();
    let (lo, hi) = (
        *leaf_depths.iter().min().expect("a tree has leaves"),
        *leaf_depths.iter().max().expect("a tree has leaves"),
    );
    if hi - lo > 1 {
        return fail(
            GreedyCondition::LeafHeights,
            format!("leaf depths {lo} and {hi} differ by more than one"),
        );
    }

    let max_depth = (0..n).map(|v| view.depth(v)).max().expect("nonempty");
    let mut levels: Vec<Vec<usize>> = vec![Vec::new(); max_depth + 1];
    for v in 0..n {
        levels[view.depth(v)].push(v);
    }
    for h in 0..max_depth {
        let shallow_min = levels[h]
            .iter()
            .map(|&v| tree.degree(v))
            .min()
            .expect("level is nonempty");
        let deep_max = levels[h + 1]
            .iter()
            .map(|&v| tree.degree(v))
            .max()
            .expect("level is nonempty");
        if shallow_min < deep_max {
            return fail(
                GreedyCondition::HeightMonotone,
                format!("degree {shallow_min} at depth {h} sits above degree {deep_max}"),
            );
        }
    }

    // Descendants of every vertex bucketed by relative depth; index 0 is the
    // vertex itself.
    let mut desc: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
    for &v in view.bfs_order().iter().rev() {
        let mut buckets = vec![vec![v]];
        for &c in view.children(v) {
            for (i, bucket) in desc[c].iter().enumerate() {
                if buckets.len() <= i + 1 {
                    buckets.push(Vec::new());
                }
                buckets[i + 1].extend_from_slice(bucket);
            }
        }
        desc[v] = buckets;
    }

    let degrees_at = |group: &[usize], delta: usize| -> Vec<usize> {
        group
            .iter()
            .flat_map(|&g| desc[g].get(delta).map(Vec::as_slice).unwrap_or(&[]))
            .map(|&v| tree.degree(v))
            .collect()
    };

    for level in &levels {
        for &u in level {
            for &w in level {
                if tree.degree(u) <= tree.degree(w) {
                    continue;
                }
                // Subtree dominance: under the larger-degree vertex, every
                // depth layer dominates the corresponding layer under the
                // smaller-degree vertex.
                for delta in 1.. {
                    let ours = degrees_at(&[u], delta);
                    let theirs = degrees_at(&[w], delta);
                    if ours.is_empty() || theirs.is_empty() {
                        break;
                    }
                    let ours_min = *ours.iter().min().expect("nonempty");
                    let theirs_max = *theirs.iter().max().expect("nonempty");
                    if ours_min < theirs_max {
                        return fail(
                            GreedyCondition::SubtreeDominance,
                            format!(
                                "below vertices {u} and {w}, depth offset {delta} has {ours_min} against {theirs_max}"
                            ),
                        );
                    }
                }
                // Sibling dominance, only meaningful across distinct parents.
                let (pu, pw) = (view.parent(u), view.parent(w));
                let (pu, pw) = match (pu, pw) {
                    (Some(a), Some(b)) if a != b => (a, b),
                    _ => continue,
                };
                let ours_base: Vec<usize> =
                    view.children(pu).iter().copied().filter(|&s| s != u).collect();
                let theirs_base: Vec<usize> =
                    view.children(pw).iter().copied().filter(|&s| s != w).collect();
                for delta in 0.. {
                    let ours = degrees_at(&ours_base, delta);
                    let theirs = degrees_at(&theirs_base, delta);
                    if ours.is_empty() || theirs.is_empty() {
                        break;
                    }
                    let ours_min = *ours.iter().min().expect("nonempty");
                    let theirs_max = *theirs.iter().max().expect("nonempty");
                    if ours_min < theirs_max {
                        return fail(
                            GreedyCondition::SiblingDominance,
                            format!(
                                "siblings of {u} and {w} at offset {delta} have {ours_min} against {theirs_max}"
                            ),
                        );
                    }
                }
            }
        }
    }
    Ok(())
}
