//! The three count-increasing switches on a leaf path and the drivers that
//! chain them: bubble passes over adjacent fragments, the outward walk that
//! interleaves both arms around the largest fragment, degree resorting, and
//! the full loop over leaf pairs.
//!
//! Every candidate rearrangement is applied to a scratch copy and recounted
//! exactly; it replaces the working tree only when the subtree count
//! strictly grows. The count is bounded by the best tree on the same degree
//! sequence, so each driver terminates, and the recorded trace is strictly
//! increasing by construction.

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::canon;
use crate::count::{count_rooted_avoiding, count_subtrees, path_profile, PathProfile};
use crate::decompose::{DecomposeError, LeafPathDecomposition};
use crate::tree::Tree;

/// Which rearrangement a step applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SwitchKind {
    Component,
    Tail,
    Degree,
}

/// One applied switch, replayable against the tree it was recorded on: the
/// decomposition is taken between `v1` and `v2`, and `indices` are the slot
/// arguments handed to the matching `apply_*` operation.
#[derive(Debug, Clone, Serialize)]
pub struct Switch {
    pub kind: SwitchKind,
    pub v1: usize,
    pub v2: usize,
    pub indices: (usize, usize),
    /// Branch anchors a degree switch moved, smallest branch first; empty
    /// for the other kinds.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub moved: Vec<usize>,
}

/// A switch together with the exact counts around it.
#[derive(Debug, Clone, Serialize)]
pub struct SwitchStep {
    #[serde(flatten)]
    pub switch: Switch,
    #[serde(with = "crate::serde_biguint")]
    pub count_before: BigUint,
    #[serde(with = "crate::serde_biguint")]
    pub count_after: BigUint,
}

/// The full record of a run: counts strictly increase step by step from
/// `initial_count` to `final_count`.
#[derive(Debug, Clone, Serialize)]
pub struct SwitchTrace {
    #[serde(with = "crate::serde_biguint")]
    pub initial_count: BigUint,
    #[serde(with = "crate::serde_biguint")]
    pub final_count: BigUint,
    pub steps: Vec<SwitchStep>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SwitchError {
    #[error("slot {slot} is outside the valid range for this switch (at most {max})")]
    InvalidSlot { slot: usize, max: usize },
    #[error("tail slots must satisfy i < j, got i = {i}, j = {j}")]
    BadSlotOrder { i: usize, j: usize },
    #[error("the receiving vertex must have the smaller degree, got {p} and {q}")]
    DegreesNotIncreasing { p: usize, q: usize },
    #[error("the vertex at slot {slot} has no off-path branches to move")]
    NoBranches { slot: usize },
    #[error("switching needs at least three vertices, got {n}")]
    TooSmall { n: usize },
    #[error("stopping after {cap} applied switches; convergence should come long before this")]
    SafetyCapExceeded { cap: u64 },
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
}

/// Tuning for the full run.
#[derive(Debug, Clone, Copy)]
pub struct SaConfig {
    /// Hard bound on applied switches across the whole run. Strict count
    /// growth bounds the true number of steps by the count of realizing
    /// trees, so hitting the cap signals a bug, not a big input.
    pub max_switches: u64,
}

impl Default for SaConfig {
    fn default() -> Self {
        SaConfig {
            max_switches: 1_000_000,
        }
    }
}

/// Tree plus the steps a phase applied to reach it.
#[derive(Debug, Clone)]
pub struct PhaseOutcome {
    pub tree: Tree,
    pub steps: Vec<SwitchStep>,
}

/// Degree resorting reports whether it fired, since its driver reruns the
/// earlier phases after every hit.
#[derive(Debug, Clone)]
pub struct Phase3Outcome {
    pub tree: Tree,
    pub steps: Vec<SwitchStep>,
    pub switched: bool,
}

/// Exchanges the fragments at interior slots `i` and `j`. The two anchors
/// trade places on the path and keep their off-path edges, so every vertex
/// keeps its degree.
pub fn apply_component_switch(
    d: &LeafPathDecomposition,
    i: usize,
    j: usize,
) -> Result<Tree, SwitchError> {
    let n = d.interior_len();
    for slot in [i, j] {
        if slot < 1 || slot > n {
            return Err(SwitchError::InvalidSlot { slot, max: n });
        }
    }
    let mut tree = d.tree().clone();
    if i == j {
        return Ok(tree);
    }
    let path = d.path();
    let mut order = path.to_vec();
    order.swap(i, j);
    for w in path.windows(2) {
        tree.remove_edge(w[0], w[1]);
    }
    for w in order.windows(2) {
        tree.add_edge(w[0], w[1]);
    }
    Ok(tree)
}

/// Exchanges the two tails around slots `i` and `j`: everything through slot
/// `i` trades places with everything from slot `j` on, which reverses the
/// stretch strictly between them. Slots `0` and `n + 1` name the bare leaf
/// tails, and an empty middle leaves the tree unchanged.
pub fn apply_tail_switch(
    d: &LeafPathDecomposition,
    i: usize,
    j: usize,
) -> Result<Tree, SwitchError> {
    let n = d.interior_len();
    if i >= j {
        return Err(SwitchError::BadSlotOrder { i, j });
    }
    if j > n + 1 {
        return Err(SwitchError::InvalidSlot {
            slot: j,
            max: n + 1,
        });
    }
    let mut tree = d.tree().clone();
    if j == i + 1 {
        return Ok(tree);
    }
    let path = d.path();
    tree.remove_edge(path[i], path[i + 1]);
    tree.remove_edge(path[j - 1], path[j]);
    tree.add_edge(path[j], path[i + 1]);
    tree.add_edge(path[j - 1], path[i]);
    Ok(tree)
}

/// Moves the largest off-path branches from the vertex at slot `k` to the
/// vertex at slot `l` until their degrees trade places. Branches are ranked
/// by subtree count from their anchor, with the branch shape and then the
/// anchor id breaking ties so equal runs pick identical branches.
pub fn apply_degree_switch(
    d: &LeafPathDecomposition,
    l: usize,
    k: usize,
) -> Result<(Tree, Vec<usize>), SwitchError> {
    let n = d.interior_len();
    for slot in [l, k] {
        if slot < 1 || slot > n {
            return Err(SwitchError::InvalidSlot { slot, max: n });
        }
    }
    let tree = d.tree();
    let receiver = d.vertex_at_slot(l);
    let donor = d.vertex_at_slot(k);
    let p = tree.degree(receiver);
    let q = tree.degree(donor);
    if p >= q {
        return Err(SwitchError::DegreesNotIncreasing { p, q });
    }
    let mut branches: Vec<(BigUint, String, usize)> = d
        .off_path_neighbors(k)
        .into_iter()
        .map(|b| {
            let cut = [(donor, b)];
            let count = count_rooted_avoiding(tree, b, &cut);
            let shape = tree.induced(&tree.component_avoiding(b, &cut));
            (count, canon::canonical_code(&shape), b)
        })
        .collect();
    if branches.is_empty() {
        return Err(SwitchError::NoBranches { slot: k });
    }
    branches.sort();
    // An interior receiver has degree at least two, so the donor keeps its
    // two path neighbors and at least p - 2 branches.
    debug_assert!(branches.len() >= q - p);
    let moved: Vec<usize> = branches[branches.len() - (q - p)..]
        .iter()
        .map(|&(_, _, b)| b)
        .collect();
    let mut out = tree.clone();
    for &b in &moved {
        out.remove_edge(donor, b);
        out.add_edge(receiver, b);
    }
    Ok((out, moved))
}

/// Detaches the branch hanging at `ra` off `a` and the one at `rb` off `b`
/// and reattaches each to the other hub. Returns `None` when the two edges
/// do not isolate two disjoint branches off a common remainder, or when the
/// hubs coincide and the exchange could not change the tree.
pub fn swap_hanging_subtrees(
    tree: &Tree,
    a: usize,
    ra: usize,
    b: usize,
    rb: usize,
) -> Option<Tree> {
    if a == b || !tree.has_edge(a, ra) || !tree.has_edge(b, rb) {
        return None;
    }
    let same_edge =
        (a.min(ra), a.max(ra)) == (b.min(rb), b.max(rb));
    if same_edge {
        return None;
    }
    let blocked = [(a, ra), (b, rb)];
    let core = tree.component_avoiding(a, &blocked);
    if core.binary_search(&b).is_err() {
        return None;
    }
    let mut out = tree.clone();
    out.remove_edge(a, ra);
    out.remove_edge(b, rb);
    out.add_edge(a, rb);
    out.add_edge(b, ra);
    Some(out)
}

/// Commits candidates that strictly grow the count and records each commit.
struct Gate {
    steps: Vec<SwitchStep>,
    current: BigUint,
    cap: u64,
}

impl Gate {
    fn new(tree: &Tree, cap: u64) -> Self {
        Gate {
            steps: Vec::new(),
            current: count_subtrees(tree),
            cap,
        }
    }

    /// Replaces `tree` with `candidate` when the candidate counts strictly
    /// higher; a rejected candidate leaves everything untouched.
    fn offer(
        &mut self,
        tree: &mut Tree,
        candidate: Tree,
        switch: Switch,
    ) -> Result<bool, SwitchError> {
        let after = count_subtrees(&candidate);
        if after <= self.current {
            return Ok(false);
        }
        if self.steps.len() as u64 >= self.cap {
            return Err(SwitchError::SafetyCapExceeded { cap: self.cap });
        }
        self.steps.push(SwitchStep {
            switch,
            count_before: self.current.clone(),
            count_after: after.clone(),
        });
        self.current = after;
        *tree = candidate;
        Ok(true)
    }
}

/// Where a label position lands on the path: a numbered interior slot, one
/// of the two leaf endpoints, or off either end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Spot {
    Interior(usize),
    Leaf,
    Beyond,
}

fn spot(slot: isize, n: usize) -> Spot {
    let last = n as isize + 1;
    if slot < 0 || slot > last {
        Spot::Beyond
    } else if slot == 0 || slot == last {
        Spot::Leaf
    } else {
        Spot::Interior(slot as usize)
    }
}

/// The two-arm labeling: `x_k` sits at `center - (k - 1) * y_dir` and `y_k`
/// at `center + k * y_dir`, so consecutive labels alternate arms outward
/// from the largest fragment.
#[derive(Debug, Clone, Copy)]
struct Labels {
    center: isize,
    y_dir: isize,
}

impl Labels {
    fn x(self, k: usize) -> isize {
        self.center - (k as isize - 1) * self.y_dir
    }

    fn y(self, k: usize) -> isize {
        self.center + k as isize * self.y_dir
    }
}

/// Starts the labeling on the largest fragment, nearest `v1` on ties; the y
/// arm points at the heavier tail, toward `v2` on ties.
fn choose_labels(profile: &PathProfile) -> Labels {
    let n = profile.len();
    let mut center = 1;
    for k in 2..=n {
        if profile.component(k) > profile.component(center) {
            center = k;
        }
    }
    let y_dir = if profile.suffix_tail(center + 1) >= profile.prefix_tail(center - 1) {
        1
    } else {
        -1
    };
    Labels {
        center: center as isize,
        y_dir,
    }
}

/// Count of subtrees in the outward tail at a label position, fragment
/// included. Positions off the path and bare endpoints both contribute the
/// unit sentinel.
fn tail_at(profile: &PathProfile, slot: isize, outward: isize, n: usize) -> BigUint {
    match spot(slot, n) {
        Spot::Interior(s) => {
            if outward > 0 {
                profile.suffix_tail(s).clone()
            } else {
                profile.prefix_tail(s).clone()
            }
        }
        Spot::Leaf | Spot::Beyond => BigUint::one(),
    }
}

/// Fragment count at a label position, unit off the interior.
fn component_at(profile: &PathProfile, slot: isize, n: usize) -> BigUint {
    match spot(slot, n) {
        Spot::Interior(s) => profile.component(s).clone(),
        Spot::Leaf | Spot::Beyond => BigUint::one(),
    }
}

fn decompose<'a>(
    tree: &'a Tree,
    v1: usize,
    v2: usize,
) -> Result<LeafPathDecomposition<'a>, SwitchError> {
    Ok(LeafPathDecomposition::leaf_path(tree, v1, v2)?)
}

/// Bubble passes of adjacent exchanges, run alternately from both ends
/// until a full double pass changes nothing. A pass walks k upward while
/// the prefix tail stays strictly below the suffix tail two slots on, and
/// exchanges any adjacent pair whose fragments sit out of order.
fn phase1_gated(
    tree: &mut Tree,
    v1: usize,
    v2: usize,
    gate: &mut Gate,
) -> Result<bool, SwitchError> {
    let mut any = false;
    loop {
        let mut round = false;
        for (a, b) in [(v1, v2), (v2, v1)] {
            let mut k = 1;
            loop {
                let planned = {
                    let d = decompose(tree, a, b)?;
                    if k + 1 > d.interior_len() {
                        break;
                    }
                    let profile = path_profile(&d);
                    if profile.prefix_tail(k - 1) >= profile.suffix_tail(k + 2) {
                        break;
                    }
                    if profile.component(k) > profile.component(k + 1) {
                        Some(apply_component_switch(&d, k, k + 1)?)
                    } else {
                        None
                    }
                };
                if let Some(candidate) = planned {
                    let switch = Switch {
                        kind: SwitchKind::Component,
                        v1: a,
                        v2: b,
                        indices: (k, k + 1),
                        moved: Vec::new(),
                    };
                    if gate.offer(tree, candidate, switch)? {
                        round = true;
                    }
                }
                k += 1;
            }
        }
        if !round {
            break;
        }
        any = true;
    }
    Ok(any)
}

/// Decides what to do about one out-of-order label pair: nothing, exchange
/// the two fragments, or exchange the two outward tails. The tail form is
/// taken when the remaining outward tails are themselves out of order, or
/// when the first anchor is a bare endpoint and has no fragment to trade.
#[allow(clippy::too_many_arguments)]
fn plan_pair(
    d: &LeafPathDecomposition,
    profile: &PathProfile,
    first: isize,
    second: isize,
    first_next: isize,
    second_next: isize,
    first_out: isize,
    second_out: isize,
) -> Result<Option<(Tree, SwitchKind, (usize, usize), Option<usize>)>, SwitchError> {
    let n = d.interior_len();
    let fs = spot(first, n);
    let ss = spot(second, n);
    if fs == Spot::Beyond || ss == Spot::Beyond {
        return Ok(None);
    }
    if component_at(profile, first, n) >= component_at(profile, second, n) {
        return Ok(None);
    }
    // A bare endpoint has the unit fragment, so the second anchor of a
    // firing pair is always interior.
    debug_assert!(matches!(ss, Spot::Interior(_)));
    let outward_first = tail_at(profile, first_next, first_out, n);
    let outward_second = tail_at(profile, second_next, second_out, n);
    if fs == Spot::Leaf || outward_first < outward_second {
        let (i, j) = if first < second {
            (first as usize, second as usize)
        } else {
            (second as usize, first as usize)
        };
        let candidate = apply_tail_switch(d, i, j)?;
        Ok(Some((candidate, SwitchKind::Tail, (i, j), Some(i + j))))
    } else {
        let (i, j) = (first as usize, second as usize);
        let candidate = apply_component_switch(d, i, j)?;
        Ok(Some((candidate, SwitchKind::Component, (i, j), None)))
    }
}

/// One outward walk of the two-arm labeling. At each k the fragment pairs
/// `(x_k, y_k)` and `(y_k, x_{k+1})` are each probed once; a committed tail
/// exchange reflects the stretch between its anchors, which lands the
/// labeling mirrored around the exchanged slots.
fn phase2_gated(
    tree: &mut Tree,
    v1: usize,
    v2: usize,
    gate: &mut Gate,
) -> Result<bool, SwitchError> {
    let mut any = false;
    let mut labels = {
        let d = decompose(tree, v1, v2)?;
        choose_labels(&path_profile(&d))
    };
    let mut k = 1usize;
    loop {
        let done = {
            let d = decompose(tree, v1, v2)?;
            let profile = path_profile(&d);
            let n = d.interior_len();
            let x_tail = tail_at(&profile, labels.x(k), -labels.y_dir, n);
            let y_tail = tail_at(&profile, labels.y(k), labels.y_dir, n);
            x_tail.is_one() && y_tail.is_one()
        };
        if done {
            break;
        }
        for pass in 0..2 {
            let planned = {
                let d = decompose(tree, v1, v2)?;
                let profile = path_profile(&d);
                if pass == 0 {
                    plan_pair(
                        &d,
                        &profile,
                        labels.x(k),
                        labels.y(k),
                        labels.x(k + 1),
                        labels.y(k + 1),
                        -labels.y_dir,
                        labels.y_dir,
                    )?
                } else {
                    plan_pair(
                        &d,
                        &profile,
                        labels.y(k),
                        labels.x(k + 1),
                        labels.y(k + 1),
                        labels.x(k + 2),
                        labels.y_dir,
                        -labels.y_dir,
                    )?
                }
            };
            if let Some((candidate, kind, indices, flip)) = planned {
                let switch = Switch {
                    kind,
                    v1,
                    v2,
                    indices,
                    moved: Vec::new(),
                };
                if gate.offer(tree, candidate, switch)? {
                    any = true;
                    if let Some(slot_sum) = flip {
                        labels = Labels {
                            center: slot_sum as isize - labels.center,
                            y_dir: -labels.y_dir,
                        };
                    }
                }
            }
        }
        k += 1;
    }
    Ok(any)
}

/// Scans the labeling outward and applies the first degree exchange that
/// strictly gains, handing back control immediately so the earlier phases
/// can resort the path before the scan resumes.
fn phase3_gated(
    tree: &mut Tree,
    v1: usize,
    v2: usize,
    gate: &mut Gate,
) -> Result<bool, SwitchError> {
    let (labels, n) = {
        let d = decompose(tree, v1, v2)?;
        let profile = path_profile(&d);
        (choose_labels(&profile), d.interior_len())
    };
    for k in 1..=n + 1 {
        for pass in 0..2 {
            let (receiver, donor) = if pass == 0 {
                (labels.x(k), labels.y(k))
            } else {
                (labels.y(k), labels.x(k + 1))
            };
            let planned = {
                let d = decompose(tree, v1, v2)?;
                match (spot(receiver, n), spot(donor, n)) {
                    (Spot::Interior(l), Spot::Interior(m)) => {
                        let p = d.tree().degree(d.vertex_at_slot(l));
                        let q = d.tree().degree(d.vertex_at_slot(m));
                        if p < q {
                            let (candidate, moved) = apply_degree_switch(&d, l, m)?;
                            Some((candidate, (l, m), moved))
                        } else {
                            None
                        }
                    }
                    _ => None,
                }
            };
            if let Some((candidate, indices, moved)) = planned {
                let switch = Switch {
                    kind: SwitchKind::Degree,
                    v1,
                    v2,
                    indices,
                    moved,
                };
                if gate.offer(tree, candidate, switch)? {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// Runs the bubble passes between one leaf pair to their fixpoint.
pub fn phase1(tree: &Tree, v1: usize, v2: usize) -> Result<PhaseOutcome, SwitchError> {
    let mut work = tree.clone();
    let mut gate = Gate::new(&work, SaConfig::default().max_switches);
    phase1_gated(&mut work, v1, v2, &mut gate)?;
    Ok(PhaseOutcome {
        tree: work,
        steps: gate.steps,
    })
}

/// Runs one outward interleaving walk between one leaf pair. Expects the
/// pair to be a fixpoint of the bubble passes; the gate keeps the walk safe
/// either way.
pub fn phase2(tree: &Tree, v1: usize, v2: usize) -> Result<PhaseOutcome, SwitchError> {
    let mut work = tree.clone();
    let mut gate = Gate::new(&work, SaConfig::default().max_switches);
    phase2_gated(&mut work, v1, v2, &mut gate)?;
    Ok(PhaseOutcome {
        tree: work,
        steps: gate.steps,
    })
}

/// Runs the degree scan between one leaf pair, stopping on the first hit.
pub fn phase3(tree: &Tree, v1: usize, v2: usize) -> Result<Phase3Outcome, SwitchError> {
    let mut work = tree.clone();
    let mut gate = Gate::new(&work, SaConfig::default().max_switches);
    let switched = phase3_gated(&mut work, v1, v2, &mut gate)?;
    Ok(Phase3Outcome {
        tree: work,
        steps: gate.steps,
        switched,
    })
}

/// Runs the full switching loop with the default safety cap.
pub fn run_switching_algorithm(tree: &Tree) -> Result<(Tree, SwitchTrace), SwitchError> {
    run_switching_algorithm_with(tree, SaConfig::default())
}

/// Sweeps every unordered leaf pair, driving each pair to a joint fixpoint
/// of all three phases, and repeats until a whole sweep applies nothing.
/// After every degree exchange the earlier phases rerun first, so the
/// degree scan always reads a freshly sorted path.
pub fn run_switching_algorithm_with(
    tree: &Tree,
    config: SaConfig,
) -> Result<(Tree, SwitchTrace), SwitchError> {
    if tree.n() < 3 {
        return Err(SwitchError::TooSmall { n: tree.n() });
    }
    let mut work = tree.clone();
    let mut gate = Gate::new(&work, config.max_switches);
    let initial_count = gate.current.clone();
    // Every switch preserves all degrees or trades them between interior
    // vertices, so the leaf set never changes and the pair list can be
    // fixed up front.
    let leaves = work.leaves();
    loop {
        let before = gate.steps.len();
        for (ai, &a) in leaves.iter().enumerate() {
            for &b in &leaves[ai + 1..] {
                loop {
                    loop {
                        let sorted_components = phase1_gated(&mut work, a, b, &mut gate)?;
                        let sorted_arms = phase2_gated(&mut work, a, b, &mut gate)?;
                        if !sorted_components && !sorted_arms {
                            break;
                        }
                    }
                    if !phase3_gated(&mut work, a, b, &mut gate)? {
                        break;
                    }
                }
            }
        }
        if gate.steps.len() == before {
            break;
        }
    }
    let trace = SwitchTrace {
        initial_count,
        final_count: gate.current.clone(),
        steps: gate.steps,
    };
    Ok((work, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::lemma_cd;
    use crate::greedy::build_greedy;
    use crate::oracle::{enumerate_family, oracle_count};
    use crate::tree::DegreeSequence;
    use proptest::prelude::*;

    /// Path `0 ..= legs.len() + 1` with `legs[k]` extra leaves hanging off
    /// the interior vertex at slot `k + 1`.
    fn caterpillar(legs: &[usize]) -> Tree {
        let n = legs.len();
        let mut edges: Vec<(usize, usize)> = (0..=n).map(|s| (s, s + 1)).collect();
        let mut next = n + 2;
        for (idx, &count) in legs.iter().enumerate() {
            for _ in 0..count {
                edges.push((idx + 1, next));
                next += 1;
            }
        }
        Tree::from_edges(next, &edges).unwrap()
    }

    fn attach_path(edges: &mut Vec<(usize, usize)>, at: usize, len: usize, next: &mut usize) {
        let mut prev = at;
        for _ in 0..len {
            edges.push((prev, *next));
            prev = *next;
            *next += 1;
        }
    }

    fn components_between(tree: &Tree, v1: usize, v2: usize) -> Vec<BigUint> {
        let d = LeafPathDecomposition::leaf_path(tree, v1, v2).unwrap();
        let profile = path_profile(&d);
        (1..=profile.len())
            .map(|k| profile.component(k).clone())
            .collect()
    }

    fn assert_unimodal(values: &[BigUint]) {
        let peak = values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1))
            .map(|(i, _)| i)
            .unwrap();
        for w in values[..=peak].windows(2) {
            assert!(w[0] <= w[1], "rising side dips: {values:?}");
        }
        for w in values[peak..].windows(2) {
            assert!(w[0] >= w[1], "falling side rises: {values:?}");
        }
    }

    fn assert_strictly_increasing(steps: &[SwitchStep]) {
        for step in steps {
            assert!(step.count_after > step.count_before);
        }
        for w in steps.windows(2) {
            assert_eq!(w[0].count_after, w[1].count_before);
        }
    }

    #[test]
    fn component_switch_exchanges_fragments() {
        let tree = caterpillar(&[2, 0, 1]);
        let d = LeafPathDecomposition::leaf_path(&tree, 0, 4).unwrap();
        let swapped = apply_component_switch(&d, 1, 3).unwrap();
        assert_eq!(
            components_between(&swapped, 0, 4),
            [2u32, 1, 4].map(BigUint::from)
        );
        // The input tree is untouched and a second exchange undoes the first.
        assert_eq!(
            components_between(&tree, 0, 4),
            [4u32, 1, 2].map(BigUint::from)
        );
        let d_back = LeafPathDecomposition::leaf_path(&swapped, 0, 4).unwrap();
        assert_eq!(apply_component_switch(&d_back, 1, 3).unwrap(), tree);
    }

    #[test]
    fn component_switch_same_slot_is_identity() {
        let tree = caterpillar(&[2, 0, 1]);
        let d = LeafPathDecomposition::leaf_path(&tree, 0, 4).unwrap();
        assert_eq!(apply_component_switch(&d, 2, 2).unwrap(), tree);
    }

    #[test]
    fn component_switch_rejects_slots_off_the_interior() {
        let tree = caterpillar(&[2, 0, 1]);
        let d = LeafPathDecomposition::leaf_path(&tree, 0, 4).unwrap();
        assert_eq!(
            apply_component_switch(&d, 0, 1).unwrap_err(),
            SwitchError::InvalidSlot { slot: 0, max: 3 }
        );
        assert_eq!(
            apply_component_switch(&d, 1, 4).unwrap_err(),
            SwitchError::InvalidSlot { slot: 4, max: 3 }
        );
    }

    #[test]
    fn tail_switch_reverses_the_middle_stretch() {
        let tree = caterpillar(&[1, 0, 2, 0]);
        let d = LeafPathDecomposition::leaf_path(&tree, 0, 5).unwrap();
        let swapped = apply_tail_switch(&d, 1, 4).unwrap();
        assert_eq!(
            components_between(&swapped, 0, 5),
            [2u32, 4, 1, 1].map(BigUint::from)
        );
        let d_back = LeafPathDecomposition::leaf_path(&swapped, 0, 5).unwrap();
        assert_eq!(apply_tail_switch(&d_back, 1, 4).unwrap(), tree);
    }

    #[test]
    fn tail_switch_is_a_hanging_swap_at_the_span_ends() {
        let tree = caterpillar(&[1, 0, 2, 0]);
        let d = LeafPathDecomposition::leaf_path(&tree, 0, 5).unwrap();
        let by_tail = apply_tail_switch(&d, 1, 4).unwrap();
        let path = d.path();
        let by_swap = swap_hanging_subtrees(&tree, path[2], path[1], path[3], path[4])
            .expect("span ends carry disjoint branches");
        assert_eq!(by_tail, by_swap);
    }

    #[test]
    fn tail_switch_with_empty_middle_is_identity() {
        let tree = caterpillar(&[1, 0, 2, 0]);
        let d = LeafPathDecomposition::leaf_path(&tree, 0, 5).unwrap();
        assert_eq!(apply_tail_switch(&d, 2, 3).unwrap(), tree);
        // A single middle slot reverses to itself as well.
        assert_eq!(apply_tail_switch(&d, 2, 4).unwrap(), tree);
    }

    #[test]
    fn tail_switch_rejects_misordered_slots() {
        let tree = caterpillar(&[1, 0, 2, 0]);
        let d = LeafPathDecomposition::leaf_path(&tree, 0, 5).unwrap();
        assert_eq!(
            apply_tail_switch(&d, 3, 3).unwrap_err(),
            SwitchError::BadSlotOrder { i: 3, j: 3 }
        );
        assert_eq!(
            apply_tail_switch(&d, 4, 2).unwrap_err(),
            SwitchError::BadSlotOrder { i: 4, j: 2 }
        );
        assert_eq!(
            apply_tail_switch(&d, 0, 6).unwrap_err(),
            SwitchError::InvalidSlot { slot: 6, max: 5 }
        );
    }

    #[test]
    fn tail_switch_can_trade_a_bare_leaf_tail() {
        let tree = caterpillar(&[1, 0, 2, 0]);
        let d = LeafPathDecomposition::leaf_path(&tree, 0, 5).unwrap();
        let swapped = apply_tail_switch(&d, 0, 3).unwrap();
        assert_eq!(swapped.n(), tree.n());
        assert_eq!(
            swapped.degree_sequence().degrees(),
            tree.degree_sequence().degrees()
        );
        // The stretch strictly between the traded tails is reversed.
        assert_eq!(
            components_between(&swapped, 0, 5),
            [1u32, 2, 4, 1].map(BigUint::from)
        );
    }

    /// Path `v1 x y v2` with an eight-vertex path hanging off `x` and two
    /// leaves off `y`, so the larger fragment sits on the smaller degree.
    fn degree_misordered_fixture() -> Tree {
        let mut edges = vec![(0, 1), (1, 2), (2, 3)];
        let mut next = 4;
        attach_path(&mut edges, 1, 8, &mut next);
        edges.push((2, 12));
        edges.push((2, 13));
        Tree::from_edges(14, &edges).unwrap()
    }

    #[test]
    fn degree_switch_moves_the_largest_branch() {
        let tree = degree_misordered_fixture();
        let d = LeafPathDecomposition::leaf_path(&tree, 0, 3).unwrap();
        let (after, moved) = apply_degree_switch(&d, 1, 2).unwrap();
        // The two leaf branches tie on count and shape, so the anchor id
        // decides and the higher leaf moves.
        assert_eq!(moved, vec![13]);
        assert_eq!(after.degree(1), 4);
        assert_eq!(after.degree(2), 3);
        assert_eq!(
            after.degree_sequence().degrees(),
            tree.degree_sequence().degrees()
        );
        let gain = oracle_count(&after).unwrap() - oracle_count(&tree).unwrap();
        assert_eq!(gain, BigUint::from(14u32));
    }

    #[test]
    fn degree_switch_rejects_non_increasing_degrees() {
        let tree = caterpillar(&[1, 1]);
        let d = LeafPathDecomposition::leaf_path(&tree, 0, 3).unwrap();
        assert_eq!(
            apply_degree_switch(&d, 1, 2).unwrap_err(),
            SwitchError::DegreesNotIncreasing { p: 3, q: 3 }
        );
        let tree = caterpillar(&[2, 1]);
        let d = LeafPathDecomposition::leaf_path(&tree, 0, 3).unwrap();
        assert_eq!(
            apply_degree_switch(&d, 1, 2).unwrap_err(),
            SwitchError::DegreesNotIncreasing { p: 4, q: 3 }
        );
    }

    #[test]
    fn swap_hanging_subtrees_trades_branches() {
        // Star legs of sizes one and two off the two ends of an edge.
        let tree = Tree::from_edges(5, &[(0, 1), (0, 2), (1, 3), (3, 4)]).unwrap();
        let swapped = swap_hanging_subtrees(&tree, 0, 2, 1, 3).unwrap();
        assert_eq!(swapped.degree(0), 2);
        assert_eq!(swapped.degree(1), 2);
        assert!(swapped.has_edge(0, 3));
        assert!(swapped.has_edge(1, 2));
        // Cutting the same edge twice, sharing a hub, or cutting the path
        // between the hubs all fail to isolate two branches.
        assert!(swap_hanging_subtrees(&tree, 0, 2, 0, 2).is_none());
        assert!(swap_hanging_subtrees(&tree, 0, 1, 0, 2).is_none());
        assert!(swap_hanging_subtrees(&tree, 0, 1, 1, 3).is_none());
        assert!(swap_hanging_subtrees(&tree, 2, 0, 1, 3).is_none());
    }

    #[test]
    fn phase1_bubbles_fragments_toward_the_heavy_end() {
        let tree = caterpillar(&[2, 1, 3]);
        let outcome = phase1(&tree, 0, 4).unwrap();
        assert_eq!(outcome.steps.len(), 2);
        assert!(outcome
            .steps
            .iter()
            .all(|s| s.switch.kind == SwitchKind::Component));
        assert_strictly_increasing(&outcome.steps);
        let components = components_between(&outcome.tree, 0, 4);
        assert_eq!(components, [2u32, 8, 4].map(BigUint::from));
        assert_unimodal(&components);
    }

    #[test]
    fn phase1_leaves_sorted_paths_alone() {
        let unimodal = caterpillar(&[1, 3, 2]);
        assert!(phase1(&unimodal, 0, 4).unwrap().steps.is_empty());
        let path = Tree::path(7);
        assert!(phase1(&path, 0, 6).unwrap().steps.is_empty());
    }

    #[test]
    fn phase2_fixes_nothing_on_a_balanced_spider() {
        let mut edges = vec![(0, 1), (1, 2), (2, 3), (3, 4)];
        let mut next = 5;
        attach_path(&mut edges, 2, 2, &mut next);
        let spider = Tree::from_edges(7, &edges).unwrap();
        let outcome = phase2(&spider, 0, 4).unwrap();
        assert!(outcome.steps.is_empty());
        assert_eq!(outcome.tree, spider);
    }

    #[test]
    fn phase2_trades_tails_when_one_arm_is_too_light() {
        let tree = caterpillar(&[0, 0, 1, 2, 3]);
        assert!(phase1(&tree, 0, 6).unwrap().steps.is_empty());
        let outcome = phase2(&tree, 0, 6).unwrap();
        assert_eq!(outcome.steps.len(), 1);
        let step = &outcome.steps[0];
        assert_eq!(step.switch.kind, SwitchKind::Tail);
        assert_eq!(step.switch.indices, (3, 6));
        let gain = step.count_after.clone() - step.count_before.clone();

        // The displayed gain for trading the outward tails at the second
        // label pair: the tail difference times the section difference.
        let d = LeafPathDecomposition::leaf_path(&tree, 0, 6).unwrap();
        let profile = path_profile(&d);
        let sections = lemma_cd(
            &[profile.component(5).clone()],
            &[profile.component(4).clone()],
        )
        .unwrap();
        let tail_y = profile.prefix_tail(3).clone();
        let tail_x = BigUint::one();
        let predicted = (tail_y - tail_x) * (sections.c - sections.d);
        assert_eq!(gain, predicted);
        assert_eq!(gain, BigUint::from(28u32));

        let components = components_between(&outcome.tree, 0, 6);
        assert_eq!(components, [1u32, 1, 2, 8, 4].map(BigUint::from));
        assert_unimodal(&components);
    }

    /// Interior slots carrying, from `v1` to `v2`: nothing, two leaves, two
    /// two-vertex legs, one two-vertex leg, one two-vertex leg.
    fn lopsided_fixture() -> Tree {
        let mut edges = vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6)];
        let mut next = 7;
        attach_path(&mut edges, 2, 1, &mut next);
        attach_path(&mut edges, 2, 1, &mut next);
        attach_path(&mut edges, 3, 2, &mut next);
        attach_path(&mut edges, 3, 2, &mut next);
        attach_path(&mut edges, 4, 2, &mut next);
        attach_path(&mut edges, 5, 2, &mut next);
        Tree::from_edges(17, &edges).unwrap()
    }

    #[test]
    fn phase2_trades_fragments_when_the_tails_already_agree() {
        let tree = lopsided_fixture();
        assert_eq!(
            components_between(&tree, 0, 6),
            [1u32, 4, 9, 3, 3].map(BigUint::from)
        );
        assert!(phase1(&tree, 0, 6).unwrap().steps.is_empty());
        let outcome = phase2(&tree, 0, 6).unwrap();
        assert_eq!(outcome.steps.len(), 1);
        let step = &outcome.steps[0];
        assert_eq!(step.switch.kind, SwitchKind::Component);
        assert_eq!(step.switch.indices, (4, 2));
        let gain = step.count_after.clone() - step.count_before.clone();

        // The displayed gain for trading the fragments at `y_1` and `x_2`:
        // the fragment difference times the difference of the two anchor
        // products over the widened section.
        let d = LeafPathDecomposition::leaf_path(&tree, 0, 6).unwrap();
        let profile = path_profile(&d);
        let one = BigUint::one();
        let sections = lemma_cd(&[profile.component(3).clone()], &[]).unwrap();
        let d_prime = sections.d_prime.unwrap();
        let c_prime = sections.c_prime.unwrap();
        let outward_y = profile.suffix_tail(5).clone();
        let outward_x = profile.prefix_tail(1).clone();
        let predicted = (profile.component(2).clone() - profile.component(4).clone())
            * ((&one + outward_y) * (&one + d_prime) - (&one + outward_x) * (&one + c_prime));
        assert_eq!(gain, predicted);
        assert_eq!(gain, BigUint::from(40u32));

        assert_eq!(
            components_between(&outcome.tree, 0, 6),
            [1u32, 3, 9, 4, 3].map(BigUint::from)
        );
    }

    #[test]
    fn phase3_moves_degrees_onto_the_larger_fragment() {
        let tree = degree_misordered_fixture();
        assert!(phase1(&tree, 0, 3).unwrap().steps.is_empty());
        assert!(phase2(&tree, 0, 3).unwrap().steps.is_empty());
        let outcome = phase3(&tree, 0, 3).unwrap();
        assert!(outcome.switched);
        assert_eq!(outcome.steps.len(), 1);
        let step = &outcome.steps[0];
        assert_eq!(step.switch.kind, SwitchKind::Degree);
        assert_eq!(step.switch.indices, (1, 2));
        assert_eq!(step.switch.moved, vec![13]);
        assert_eq!(
            step.count_after.clone() - step.count_before.clone(),
            BigUint::from(14u32)
        );
        assert_eq!(step.count_after, oracle_count(&outcome.tree).unwrap());
        // Once the degrees agree with the fragment order the scan is quiet.
        let settled = phase3(&outcome.tree, 0, 3).unwrap();
        assert!(!settled.switched);
        assert!(settled.steps.is_empty());
    }

    #[test]
    fn every_phase_holds_still_on_greedy_trees() {
        for text in ["3,3,2", "4,3,2,2"] {
            let ds = DegreeSequence::parse(text).unwrap();
            let greedy = build_greedy(&ds).tree;
            let leaves = greedy.leaves();
            for (ai, &a) in leaves.iter().enumerate() {
                for &b in &leaves[ai + 1..] {
                    assert!(phase1(&greedy, a, b).unwrap().steps.is_empty());
                    assert!(phase2(&greedy, a, b).unwrap().steps.is_empty());
                    let third = phase3(&greedy, a, b).unwrap();
                    assert!(!third.switched && third.steps.is_empty());
                }
            }
        }
    }

    #[test]
    fn full_runs_reach_the_greedy_count_across_a_family() {
        let ds = DegreeSequence::parse("3,3,2").unwrap();
        let target = count_subtrees(&build_greedy(&ds).tree);
        let family = enumerate_family(&ds, 16).unwrap();
        assert!(family.members.len() > 1);
        for member in &family.members {
            let (best, trace) = run_switching_algorithm(member).unwrap();
            assert_eq!(trace.final_count, target);
            assert_eq!(trace.final_count, count_subtrees(&best));
            assert_eq!(
                best.degree_sequence().degrees(),
                member.degree_sequence().degrees()
            );
            assert_strictly_increasing(&trace.steps);
            assert_eq!(trace.initial_count, count_subtrees(member));
        }
    }

    #[test]
    fn full_runs_hold_still_on_fixpoints() {
        let greedy = build_greedy(&DegreeSequence::parse("4,3,2").unwrap()).tree;
        let (out, trace) = run_switching_algorithm(&greedy).unwrap();
        assert_eq!(out, greedy);
        assert!(trace.steps.is_empty());
        assert_eq!(trace.initial_count, trace.final_count);

        let path = Tree::path(6);
        let (out, trace) = run_switching_algorithm(&path).unwrap();
        assert_eq!(out, path);
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn full_run_refuses_tiny_trees() {
        assert_eq!(
            run_switching_algorithm(&Tree::path(2)).unwrap_err(),
            SwitchError::TooSmall { n: 2 }
        );
        assert_eq!(
            run_switching_algorithm(&Tree::single()).unwrap_err(),
            SwitchError::TooSmall { n: 1 }
        );
    }

    #[test]
    fn safety_cap_trips_instead_of_looping() {
        let tree = caterpillar(&[2, 1, 3]);
        let config = SaConfig { max_switches: 0 };
        assert_eq!(
            run_switching_algorithm_with(&tree, config).unwrap_err(),
            SwitchError::SafetyCapExceeded { cap: 0 }
        );
    }

    fn arbitrary_tree() -> impl Strategy<Value = Tree> {
        (4usize..10)
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
        fn full_runs_always_reach_the_greedy_count(tree in arbitrary_tree()) {
            let (best, trace) = run_switching_algorithm(&tree).unwrap();
            let ds = tree.degree_sequence();
            let best_ds = best.degree_sequence();
            prop_assert_eq!(best_ds.degrees(), ds.degrees());
            assert_strictly_increasing(&trace.steps);
            let target = count_subtrees(&build_greedy(&ds).tree);
            prop_assert_eq!(trace.final_count, target);
        }

        #[test]
        fn phase1_output_is_unimodal(tree in arbitrary_tree()) {
            let leaves = tree.leaves();
            let (a, b) = (leaves[0], leaves[1]);
            let outcome = phase1(&tree, a, b).unwrap();
            assert_strictly_increasing(&outcome.steps);
            assert_unimodal(&components_between(&outcome.tree, a, b));
        }
    }
}
