//! Canonical shape codes for unlabeled tree identity.
//!
//! The code of a rooted tree is the parenthesization `(` + sorted child codes
//! + `)`. An unrooted tree is coded from its center; a bicentral tree takes
//! the lexicographically smaller of its two centered codes. Two trees are
//! isomorphic exactly when their codes match, so the code doubles as a stable
//! sort key for family listings.

use crate::tree::{RootedView, Tree};

/// AHU code of `tree` rooted at `root`.
pub fn rooted_code(tree: &Tree, root: usize) -> String {
    let view = RootedView::new(tree, root);
    let mut codes: Vec<Option<String>> = vec![None; tree.n()];
    // Reversed breadth-first order visits every child before its parent.
    for &v in view.bfs_order().iter().rev() {
        let mut child_codes: Vec<String> = view
            .children(v)
            .iter()
            .map(|&c| codes[c].take().expect("child code computed"))
            .collect();
        child_codes.sort_unstable();
        let mut code = String::with_capacity(2 + child_codes.iter().map(String::len).sum::<usize>());
        code.push('(');
        for c in &child_codes {
            code.push_str(c);
        }
        code.push(')');
        codes[v] = Some(code);
    }
    codes[root].take().expect("root code computed")
}

/// The one or two center vertices, found by stripping leaf layers until at
/// most two vertices remain.
pub fn centers(tree: &Tree) -> Vec<usize> {
    let n = tree.n();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut degree: Vec<usize> = (0..n).map(|v| tree.degree(v)).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut remaining = n;
    let mut removed = vec![false; n];
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            removed[v] = true;
            for &u in tree.neighbors(v) {
                if !removed[u] {
                    degree[u] -= 1;
                    if degree[u] == 1 {
                        next.push(u);
                    }
                }
            }
        }
        layer = next;
    }
    let mut out: Vec<usize> = (0..n).filter(|&v| !removed[v]).collect();
    out.sort_unstable();
    out
}

/// Canonical code of the unlabeled shape of `tree`.
pub fn canonical_code(tree: &Tree) -> String {
    centers(tree)
        .into_iter()
        .map(|c| rooted_code(tree, c))
        .min()
        .expect("a tree has at least one center")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rooted_codes_small() {
        assert_eq!(rooted_code(&Tree::single(), 0), "()");
        assert_eq!(rooted_code(&Tree::path(2), 0), "(())");
        assert_eq!(rooted_code(&Tree::star(3), 0), "(()()())");
        // Rooting the star at a leaf nests the hub instead.
        assert_eq!(rooted_code(&Tree::star(3), 1), "((()()))");
    }

    #[test]
    fn centers_of_paths() {
        assert_eq!(centers(&Tree::path(5)), vec![2]);
        assert_eq!(centers(&Tree::path(4)), vec![1, 2]);
        assert_eq!(centers(&Tree::path(2)), vec![0, 1]);
        assert_eq!(centers(&Tree::single()), vec![0]);
        assert_eq!(centers(&Tree::star(5)), vec![0]);
    }

    #[test]
    fn code_ignores_labeling() {
        let a = Tree::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let b = Tree::from_edges(4, &[(2, 0), (0, 3), (3, 1)]).unwrap();
        assert_eq!(canonical_code(&a), canonical_code(&b));
    }

    #[test]
    fn code_separates_the_two_four_vertex_shapes() {
        assert_ne!(
            canonical_code(&Tree::path(4)),
            canonical_code(&Tree::star(3))
        );
    }

    #[test]
    fn code_is_ascii_parens() {
        let code = canonical_code(&Tree::path(7));
        assert!(code.bytes().all(|b| b == b'(' || b == b')'));
        assert_eq!(code.len(), 14);
    }

    fn arbitrary_tree() -> impl Strategy<Value = Tree> {
        // Attach vertex v to a uniformly random earlier vertex; every shape
        // on up to twelve vertices appears with positive probability.
        (1usize..12)
            .prop_flat_map(|n| proptest::collection::vec(proptest::num::usize::ANY, n - 1))
            .prop_map(|choices| {
                let n = choices.len() + 1;
                let edges: Vec<_> = choices
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| (c % (i + 1), i + 1))
                    .collect();
                Tree::from_edges(n, &edges).expect("attachment edges form a tree")
            })
    }

    proptest! {
        #[test]
        fn relabeling_preserves_code(tree in arbitrary_tree(), keys in proptest::collection::vec(proptest::num::u64::ANY, 12)) {
            let n = tree.n();
            let mut perm: Vec<usize> = (0..n).collect();
            perm.sort_by_key(|&v| keys[v]);
            let relabeled = tree.relabel(&perm);
            prop_assert_eq!(canonical_code(&tree), canonical_code(&relabeled));
        }
    }
}
