//! Unrooted trees on vertices `0..n`, plus the degree-sequence type that
//! drives greedy construction and family enumeration.

use std::fmt;

use thiserror::Error;

/// An unrooted tree stored as sorted adjacency lists.
///
/// Vertices are `0..n` with no gaps. Equality and hashing are labeled: two
/// trees compare equal only if they have identical edge sets, not merely
/// isomorphic shapes. Use [`crate::canon::canonical_code`] for shape identity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tree {
    adj: Vec<Vec<usize>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("line {line_no}: expected two vertex ids, got {content:?}")]
    MalformedLine { line_no: usize, content: String },
    #[error("line {line_no}: self-loop at vertex {vertex}")]
    SelfLoop { line_no: usize, vertex: usize },
    #[error("duplicate edge {u} {v}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("vertex ids are not contiguous: {missing} is missing")]
    IdGap { missing: usize },
    #[error("vertex {vertex} is out of range for {n} vertices")]
    IdOutOfRange { vertex: usize, n: usize },
    #[error("too many edges for a tree: {edges} edges on {n} vertices")]
    Cycle { n: usize, edges: usize },
    #[error("graph is not connected")]
    Disconnected,
    #[error("no edges given")]
    Empty,
}

impl Tree {
    /// Builds a tree from an explicit vertex count and edge list.
    ///
    /// Accepts `n == 1` with no edges (the one-vertex tree). Everything else
    /// must be a connected simple graph with exactly `n - 1` edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, TreeError> {
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if edges.len() >= n && n > 1 {
            return Err(TreeError::Cycle {
                n,
                edges: edges.len(),
            });
        }
        if n == 1 && !edges.is_empty() {
            return Err(TreeError::Cycle {
                n,
                edges: edges.len(),
            });
        }
        let mut adj = vec![Vec::new(); n];
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in edges {
            if u >= n {
                return Err(TreeError::IdOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(TreeError::IdOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(TreeError::SelfLoop { line_no: 0, vertex: u });
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(TreeError::DuplicateEdge { u: key.0, v: key.1 });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let tree = Tree::finish(adj)?;
        Ok(tree)
    }

    /// Shared tail of the constructors: sorts adjacency, checks connectivity.
    fn finish(mut adj: Vec<Vec<usize>>) -> Result<Self, TreeError> {
        for list in &mut adj {
            list.sort_unstable();
        }
        let n = adj.len();
        let mut reached = vec![false; n];
        let mut queue = std::collections::VecDeque::from([0usize]);
        reached[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !reached[v] {
                    reached[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        if count < n {
            return Err(TreeError::Disconnected);
        }
        Ok(Tree { adj })
    }

    /// The one-vertex tree.
    pub fn single() -> Self {
        Tree {
            adj: vec![Vec::new()],
        }
    }

    /// The path on `n` vertices, labeled along the path.
    pub fn path(n: usize) -> Self {
        assert!(n >= 1);
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Tree::from_edges(n, &edges).expect("path edges form a tree")
    }

    /// The star with `leaves` pendant vertices attached to vertex 0.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        Tree::from_edges(leaves + 1, &edges).expect("star edges form a tree")
    }

    /// Parses the plain edge-list format: one `u v` pair per line, `#` starts
    /// a comment line, blank lines are skipped. The vertex count is inferred
    /// as `max id + 1` and the ids must cover `0..n` without gaps.
    pub fn parse(text: &str) -> Result<Self, TreeError> {
        let mut edges = Vec::new();
        let mut max_id = 0usize;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (a, b, rest) = (parts.next(), parts.next(), parts.next());
            let (a, b) = match (a, b, rest) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(TreeError::MalformedLine {
                        line_no,
                        content: line.to_string(),
                    })
                }
            };
            let parse_id = |s: &str| {
                s.parse::<usize>().map_err(|_| TreeError::MalformedLine {
                    line_no,
                    content: line.to_string(),
                })
            };
            let (u, v) = (parse_id(a)?, parse_id(b)?);
            if u == v {
                return Err(TreeError::SelfLoop { line_no, vertex: u });
            }
            max_id = max_id.max(u).max(v);
            edges.push((u, v));
        }
        if edges.is_empty() {
            return Err(TreeError::Empty);
        }
        let n = max_id + 1;
        let mut present = vec![false; n];
        for &(u, v) in &edges {
            present[u] = true;
            present[v] = true;
        }
        if let Some(missing) = present.iter().position(|&p| !p) {
            return Err(TreeError::IdGap { missing });
        }
        Tree::from_edges(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// All edges as `(min, max)` pairs in ascending order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.n().saturating_sub(1));
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Vertices of degree exactly one, ascending.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.degree(v) == 1).collect()
    }

    /// Degrees of the non-leaf vertices, as a descending multiset.
    pub fn degree_sequence(&self) -> DegreeSequence {
        let mut degrees: Vec<_> = self
            .adj
            .iter()
            .map(Vec::len)
            .filter(|&d| d >= 2)
            .collect();
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        DegreeSequence { degrees }
    }

    /// Canonical text form: one edge per line, each written `min max`, lines
    /// in ascending order, trailing newline.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && !self.adj[u].contains(&v));
        let pos = self.adj[u].partition_point(|&w| w < v);
        self.adj[u].insert(pos, v);
        let pos = self.adj[v].partition_point(|&w| w < u);
        self.adj[v].insert(pos, u);
    }

    pub(crate) fn remove_edge(&mut self, u: usize, v: usize) {
        let pos = self.adj[u]
            .iter()
            .position(|&w| w == v)
            .expect("edge to remove must exist");
        self.adj[u].remove(pos);
        let pos = self.adj[v]
            .iter()
            .position(|&w| w == u)
            .expect("edge to remove must exist");
        self.adj[v].remove(pos);
    }

    pub(crate) fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Vertices reachable from `start` without crossing any edge in
    /// `blocked`, ascending. Blocked pairs are unordered.
    pub fn component_avoiding(&self, start: usize, blocked: &[(usize, usize)]) -> Vec<usize> {
        let blocked: std::collections::HashSet<(usize, usize)> = blocked
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        let mut seen = vec![false; self.n()];
        let mut out = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < out.len() {
            let u = out[i];
            for &v in self.neighbors(u) {
                if !seen[v] && !blocked.contains(&(u.min(v), u.max(v))) {
                    seen[v] = true;
                    out.push(v);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// The subtree induced by `vertices`, relabeled so that the i-th listed
    /// vertex becomes `i`. The slice must be sorted, duplicate-free, and
    /// induce a connected subgraph.
    pub fn induced(&self, vertices: &[usize]) -> Tree {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        let edges: Vec<(usize, usize)> = self
            .edges()
            .into_iter()
            .filter_map(|(u, v)| {
                let iu = vertices.binary_search(&u).ok()?;
                let iv = vertices.binary_search(&v).ok()?;
                Some((iu, iv))
            })
            .collect();
        Tree::from_edges(vertices.len(), &edges).expect("induced vertex set must be connected")
    }

    /// Relabels vertices: old vertex `v` becomes `perm[v]`. `perm` must be a
    /// permutation of `0..n`.
    pub fn relabel(&self, perm: &[usize]) -> Tree {
        assert_eq!(perm.len(), self.n());
        let edges: Vec<_> = self
            .edges()
            .into_iter()
            .map(|(u, v)| (perm[u], perm[v]))
            .collect();
        Tree::from_edges(self.n(), &edges).expect("permutation preserves tree shape")
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_list())
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tree({} vertices; ", self.n())?;
        let mut first = true;
        for (u, v) in self.edges() {
            if !first {
                f.write_str(", ")?;
            }
            write!(f, "{u}-{v}")?;
            first = false;
        }
        f.write_str(")")
    }
}

/// A rooted reading of a tree: parents, children, depths, and a breadth-first
/// vertex order. Children lists are ascending by vertex id, so traversals are
/// deterministic.
pub struct RootedView<'a> {
    pub tree: &'a Tree,
    pub root: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
    order: Vec<usize>,
}

impl<'a> RootedView<'a> {
    pub fn new(tree: &'a Tree, root: usize) -> Self {
        let n = tree.n();
        assert!(root < n);
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut depth = vec![0usize; n];
        let mut order = Vec::with_capacity(n);
        let mut visited = vec![false; n];
        let mut queue = std::collections::VecDeque::from([root]);
        visited[root] = true;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in tree.neighbors(u) {
                if !visited[v] {
                    visited[v] = true;
                    parent[v] = Some(u);
                    children[u].push(v);
                    depth[v] = depth[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        RootedView {
            tree,
            root,
            parent,
            children,
            depth,
            order,
        }
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    /// Breadth-first order from the root. Reversed, it visits every child
    /// before its parent, which is what the bottom-up counting passes need.
    pub fn bfs_order(&self) -> &[usize] {
        &self.order
    }

    /// Vertices of the subtree hanging below `v`, including `v` itself.
    pub fn subtree_vertices(&self, v: usize) -> Vec<usize> {
        let mut out = vec![v];
        let mut i = 0;
        while i < out.len() {
            let u = out[i];
            out.extend_from_slice(&self.children[u]);
            i += 1;
        }
        out
    }
}

/// The descending multiset of internal (degree at least two) vertex degrees.
///
/// Every such multiset is realizable: hanging the forced number of leaves on
/// a path of the internal vertices always works, so construction from a
/// validated sequence never fails.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DegreeSequence {
    degrees: Vec<usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DegreeSequenceError {
    #[error("degree {degree} is below two; internal vertices need degree at least two")]
    DegreeTooSmall { degree: usize },
    #[error("degrees must be non-increasing, found {prev} before {next}")]
    NotSorted { prev: usize, next: usize },
    #[error("could not parse {token:?} as a degree")]
    BadToken { token: String },
}

impl DegreeSequence {
    pub fn new(degrees: Vec<usize>) -> Result<Self, DegreeSequenceError> {
        for window in degrees.windows(2) {
            if window[0] < window[1] {
                return Err(DegreeSequenceError::NotSorted {
                    prev: window[0],
                    next: window[1],
                });
            }
        }
        if let Some(&d) = degrees.iter().find(|&&d| d < 2) {
            return Err(DegreeSequenceError::DegreeTooSmall { degree: d });
        }
        Ok(DegreeSequence { degrees })
    }

    /// Parses comma or whitespace separated degrees. The empty string is the
    /// empty sequence, whose only realization is a single edge.
    pub fn parse(text: &str) -> Result<Self, DegreeSequenceError> {
        let mut degrees = Vec::new();
        for token in text.split(|c: char| c == ',' || c.is_whitespace()) {
            if token.is_empty() {
                continue;
            }
            let d = token
                .parse::<usize>()
                .map_err(|_| DegreeSequenceError::BadToken {
                    token: token.to_string(),
                })?;
            degrees.push(d);
        }
        DegreeSequence::new(degrees)
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn internal_count(&self) -> usize {
        self.degrees.len()
    }

    /// Number of leaves any realization must have. With `m` internal degrees
    /// summing to `s`, a tree on `m + L` vertices has `m + L - 1` edges, so
    /// `s + L = 2(m + L - 1)` forces `L = s - 2m + 2`. Always at least two.
    pub fn leaf_count(&self) -> usize {
        let s: usize = self.degrees.iter().sum();
        let m = self.degrees.len();
        s + 2 - 2 * m
    }

    pub fn total_vertices(&self) -> usize {
        self.internal_count() + self.leaf_count()
    }
}

impl fmt::Display for DegreeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for d in &self.degrees {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_single_edge() {
        let t = Tree::parse("0 1\n").unwrap();
        assert_eq!(t.n(), 2);
        assert_eq!(t.edges(), vec![(0, 1)]);
    }

    #[test]
    fn parse_skips_comments_and_blanks() {
        let t = Tree::parse("# a path\n\n0 1\n  1 2 \n# done\n").unwrap();
        assert_eq!(t.n(), 3);
        assert_eq!(t.degree(1), 2);
    }

    #[test]
    fn parse_rejects_cycle() {
        let err = Tree::parse("0 1\n1 2\n2 3\n3 4\n4 0\n").unwrap_err();
        assert_eq!(err, TreeError::Cycle { n: 5, edges: 5 });
    }

    #[test]
    fn parse_rejects_gap() {
        let err = Tree::parse("0 2\n").unwrap_err();
        assert_eq!(err, TreeError::IdGap { missing: 1 });
    }

    #[test]
    fn parse_rejects_self_loop() {
        let err = Tree::parse("0 1\n1 1\n").unwrap_err();
        assert_eq!(
            err,
            TreeError::SelfLoop {
                line_no: 2,
                vertex: 1
            }
        );
    }

    #[test]
    fn parse_rejects_duplicate_in_either_order() {
        let err = Tree::parse("0 1\n1 0\n").unwrap_err();
        assert_eq!(err, TreeError::DuplicateEdge { u: 0, v: 1 });
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!(matches!(
            Tree::parse("0 1 2\n"),
            Err(TreeError::MalformedLine { line_no: 1, .. })
        ));
        assert!(matches!(
            Tree::parse("a b\n"),
            Err(TreeError::MalformedLine { .. })
        ));
    }

    #[test]
    fn parse_rejects_empty() {
        assert_eq!(Tree::parse(""), Err(TreeError::Empty));
        assert_eq!(Tree::parse("# only a comment\n"), Err(TreeError::Empty));
    }

    #[test]
    fn parse_rejects_disconnected_with_cycle() {
        // Five edges on six vertices, but one component is a triangle.
        let err = Tree::parse("0 1\n1 2\n2 0\n3 4\n4 5\n").unwrap_err();
        assert_eq!(err, TreeError::Disconnected);
    }

    #[test]
    fn edge_list_is_sorted_min_max() {
        let t = Tree::from_edges(4, &[(3, 1), (2, 0), (0, 1)]).unwrap();
        assert_eq!(t.to_edge_list(), "0 1\n0 2\n1 3\n");
        let round = Tree::parse(&t.to_edge_list()).unwrap();
        assert_eq!(round, t);
    }

    #[test]
    fn path_and_star_degree_sequences() {
        assert_eq!(Tree::path(4).degree_sequence().degrees(), &[2, 2]);
        assert_eq!(Tree::star(3).degree_sequence().degrees(), &[3]);
        assert_eq!(Tree::path(2).degree_sequence().degrees(), &[] as &[usize]);
        assert_eq!(Tree::single().degree_sequence().degrees(), &[] as &[usize]);
    }

    #[test]
    fn leaves_ascending() {
        let t = Tree::from_edges(5, &[(0, 1), (0, 2), (2, 3), (2, 4)]).unwrap();
        assert_eq!(t.leaves(), vec![1, 3, 4]);
    }

    #[test]
    fn rooted_view_bfs_and_subtrees() {
        let t = Tree::from_edges(6, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)]).unwrap();
        let view = RootedView::new(&t, 0);
        assert_eq!(view.bfs_order(), &[0, 1, 2, 3, 4, 5]);
        assert_eq!(view.parent(5), Some(2));
        assert_eq!(view.depth(4), 2);
        let mut sub = view.subtree_vertices(1);
        sub.sort_unstable();
        assert_eq!(sub, vec![1, 3, 4]);
    }

    #[test]
    fn degree_sequence_validation() {
        assert!(DegreeSequence::new(vec![4, 4, 3]).is_ok());
        assert_eq!(
            DegreeSequence::new(vec![3, 4]),
            Err(DegreeSequenceError::NotSorted { prev: 3, next: 4 })
        );
        assert_eq!(
            DegreeSequence::new(vec![2, 1]),
            Err(DegreeSequenceError::DegreeTooSmall { degree: 1 })
        );
    }

    #[test]
    fn degree_sequence_parse_and_display() {
        let ds = DegreeSequence::parse("4, 4, 3").unwrap();
        assert_eq!(ds.to_string(), "4,4,3");
        assert_eq!(DegreeSequence::parse("4 4 3").unwrap(), ds);
        assert!(DegreeSequence::parse("x").is_err());
        assert_eq!(DegreeSequence::parse("").unwrap().degrees(), &[] as &[usize]);
    }

    #[test]
    fn leaf_counts() {
        assert_eq!(DegreeSequence::parse("3,3,2,2").unwrap().leaf_count(), 4);
        assert_eq!(DegreeSequence::parse("2,2").unwrap().leaf_count(), 2);
        assert_eq!(DegreeSequence::parse("").unwrap().leaf_count(), 2);
        assert_eq!(DegreeSequence::parse("3,3,2,2").unwrap().total_vertices(), 8);
    }

    #[test]
    fn from_edges_range_check() {
        assert_eq!(
            Tree::from_edges(2, &[(0, 2)]),
            Err(TreeError::IdOutOfRange { vertex: 2, n: 2 })
        );
    }
}
