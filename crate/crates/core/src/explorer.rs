//! Family-wide rankings, reachability under count-decreasing switches, and
//! empirical checkers that compare the losses of the three switch kinds.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::canon::canonical_code;
use crate::count::{count_rooted_avoiding, count_subtrees, path_profile, PathProfile};
use crate::decompose::LeafPathDecomposition;
use crate::greedy::build_greedy;
use crate::oracle::{enumerate_family, prufer_decode, OracleError, FAMILY_VERTEX_CAP};
use crate::switching::{
    apply_component_switch, apply_degree_switch, apply_tail_switch, swap_hanging_subtrees,
};
use crate::tree::{DegreeSequence, RootedView, Tree};

/// Leaf-pair budget of a sampled scan. Scans over more pairs than this draw
/// a seeded sample instead of walking the full list.
pub const SAMPLED_PAIR_LIMIT: usize = 64;

/// One isomorphism class in a ranked family listing.
#[derive(Debug, Clone, Serialize)]
pub struct RankedEntry {
    pub canonical_code: String,
    #[serde(with = "crate::serde_biguint")]
    pub count: BigUint,
    pub rank: usize,
}

/// Every shape realizing a degree sequence, ordered by subtree count.
/// Ranks are dense from one; equal counts break by canonical code and
/// still receive distinct consecutive ranks.
#[derive(Debug, Clone, Serialize)]
pub struct RankedFamily {
    pub degree_sequence: String,
    pub entries: Vec<RankedEntry>,
}

pub fn rank_family(
    ds: &DegreeSequence,
    max_vertices: usize,
) -> Result<RankedFamily, OracleError> {
    let family = enumerate_family(ds, max_vertices)?;
    let mut scored: Vec<(BigUint, String)> = family
        .members
        .iter()
        .map(|t| (count_subtrees(t), canonical_code(t)))
        .collect();
    scored.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    let entries = scored
        .into_iter()
        .enumerate()
        .map(|(i, (count, canonical_code))| RankedEntry {
            canonical_code,
            count,
            rank: i + 1,
        })
        .collect();
    Ok(RankedFamily {
        degree_sequence: ds.to_string(),
        entries,
    })
}

/// Result of a bounded search among the descendants of the greedy tree
/// under strictly count-decreasing switches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwitchDistance {
    Reached(usize),
    BudgetExhausted,
}

/// Depth of every shape reached from the greedy tree by strictly
/// count-decreasing switches, keyed by canonical code. `budget_exhausted`
/// marks a scan that stopped with frontier states still unexpanded.
#[derive(Debug, Clone)]
pub struct ReachabilityScan {
    pub depths: BTreeMap<String, usize>,
    pub budget_exhausted: bool,
}

/// All distinct shapes one strictly count-decreasing switch away, over
/// every leaf pair and every switch kind.
fn decreasing_switch_results(tree: &Tree, base: &BigUint) -> Vec<Tree> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut keep = |candidate: Tree| {
        if count_subtrees(&candidate) < *base && seen.insert(canonical_code(&candidate)) {
            out.push(candidate);
        }
    };
    let leaves = tree.leaves();
    for (ai, &a) in leaves.iter().enumerate() {
        for &b in &leaves[ai + 1..] {
            let d = LeafPathDecomposition::leaf_path(tree, a, b)
                .expect("distinct leaves of one tree");
            let n = d.interior_len();
            for i in 1..=n {
                for j in i + 1..=n {
                    keep(apply_component_switch(&d, i, j).expect("interior slots"));
                }
            }
            // Spans of two or fewer slots reverse nothing, and the full
            // span only relabels the two path ends.
            for i in 0..=n {
                for j in i + 3..=n + 1 {
                    if i == 0 && j == n + 1 {
                        continue;
                    }
                    keep(apply_tail_switch(&d, i, j).expect("ordered interior span"));
                }
            }
            for l in 1..=n {
                for k in 1..=n {
                    if tree.degree(d.vertex_at_slot(l)) < tree.degree(d.vertex_at_slot(k)) {
                        let (swapped, _) = apply_degree_switch(&d, l, k)
                            .expect("strictly increasing anchor degrees");
                        keep(swapped);
                    }
                }
            }
        }
    }
    out
}

/// Breadth-first scan from the greedy tree of `ds`. `budget` bounds the
/// number of expanded states; an early hit on `target` reports its depth.
fn scan_from_greedy(
    ds: &DegreeSequence,
    budget: usize,
    target: Option<&str>,
) -> (BTreeMap<String, usize>, bool, Option<usize>) {
    let start = build_greedy(ds).tree;
    let code = canonical_code(&start);
    let mut depths = BTreeMap::from([(code.clone(), 0usize)]);
    if target == Some(code.as_str()) {
        return (depths, false, Some(0));
    }
    let mut queue = VecDeque::from([(start, 0usize)]);
    let mut expanded = 0usize;
    while let Some((tree, here)) = queue.pop_front() {
        if expanded == budget {
            return (depths, true, None);
        }
        expanded += 1;
        let base = count_subtrees(&tree);
        for next in decreasing_switch_results(&tree, &base) {
            let code = canonical_code(&next);
            if let std::collections::btree_map::Entry::Vacant(slot) = depths.entry(code.clone()) {
                slot.insert(here + 1);
                if target == Some(code.as_str()) {
                    return (depths, false, Some(here + 1));
                }
                queue.push_back((next, here + 1));
            }
        }
    }
    (depths, false, None)
}

pub fn decreasing_switch_depths(ds: &DegreeSequence, budget: usize) -> ReachabilityScan {
    let (depths, budget_exhausted, _) = scan_from_greedy(ds, budget, None);
    ReachabilityScan {
        depths,
        budget_exhausted,
    }
}

/// Fewest strictly count-decreasing switches taking the greedy tree of the
/// same degree sequence to a shape isomorphic to `tree`. `BudgetExhausted`
/// also covers a target outside the reachable set.
pub fn switch_distance_to_greedy(tree: &Tree, budget: usize) -> SwitchDistance {
    let ds = tree.degree_sequence();
    let code = canonical_code(tree);
    match scan_from_greedy(&ds, budget, Some(&code)) {
        (_, _, Some(found)) => SwitchDistance::Reached(found),
        _ => SwitchDistance::BudgetExhausted,
    }
}

/// Outcome of one empirical scan. Counterexamples carry replayable
/// witnesses; an empty list means every tested instance agreed with the
/// hypothesis. A report never signals failure by itself.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub hypothesis: String,
    pub instances: u64,
    pub counterexamples: Vec<Counterexample>,
    pub status: ReportStatus,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub tree_edges: String,
    pub witness: Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportStatus {
    NoCounterexampleFound,
    Counterexample,
}

fn sealed_report(
    hypothesis: &str,
    instances: u64,
    counterexamples: Vec<Counterexample>,
    seed: Option<u64>,
) -> ExperimentReport {
    let status = if counterexamples.is_empty() {
        ReportStatus::NoCounterexampleFound
    } else {
        ReportStatus::Counterexample
    };
    ExperimentReport {
        hypothesis: hypothesis.to_string(),
        instances,
        counterexamples,
        status,
        seed,
    }
}

fn decrease_from(base: &BigUint, candidate: &Tree) -> Option<BigUint> {
    let after = count_subtrees(candidate);
    if after < *base {
        Some(base - &after)
    } else {
        None
    }
}

/// The branches hanging at `v` once the edge toward `toward` is cut: one
/// entry per remaining neighbor, ascending by rooted count with canonical
/// code and root id as tiebreakers. The outward stretch of the path is one
/// of them, so the list holds every tail a switch at `v` could trade.
fn hanging_tails(tree: &Tree, v: usize, toward: usize) -> Vec<(BigUint, String, usize)> {
    let mut tails: Vec<(BigUint, String, usize)> = tree
        .neighbors(v)
        .iter()
        .copied()
        .filter(|&r| r != toward)
        .map(|r| {
            let cut = [(v, r)];
            let count = count_rooted_avoiding(tree, r, &cut);
            let shape = tree.induced(&tree.component_avoiding(r, &cut));
            (count, canonical_code(&shape), r)
        })
        .collect();
    tails.sort();
    tails
}

/// Looks for a tail exchange anchored at the two slots whose decrease is
/// positive and at most `allowance`: first the smallest hanging branch of
/// one anchor against the largest of the other, then every hanging pair,
/// then every tail switch along the path itself.
fn tail_dominates(
    d: &LeafPathDecomposition,
    base: &BigUint,
    u_slot: usize,
    w_slot: usize,
    allowance: &BigUint,
) -> bool {
    let tree = d.tree();
    let step: isize = if w_slot > u_slot { 1 } else { -1 };
    let u = d.vertex_at_slot(u_slot);
    let w = d.vertex_at_slot(w_slot);
    let toward_u = d.vertex_at_slot((u_slot as isize + step) as usize);
    let toward_w = d.vertex_at_slot((w_slot as isize - step) as usize);
    let tails_u = hanging_tails(tree, u, toward_u);
    let tails_w = hanging_tails(tree, w, toward_w);
    let mut hub_pairs: Vec<(usize, usize)> = Vec::new();
    if let (Some(small), Some(large)) = (tails_u.first(), tails_w.last()) {
        hub_pairs.push((small.2, large.2));
    }
    for &(_, _, ru) in &tails_u {
        for &(_, _, rw) in &tails_w {
            hub_pairs.push((ru, rw));
        }
    }
    for (ru, rw) in hub_pairs {
        if let Some(swapped) = swap_hanging_subtrees(tree, u, ru, w, rw) {
            if let Some(dec) = decrease_from(base, &swapped) {
                if dec <= *allowance {
                    return true;
                }
            }
        }
    }
    let n = d.interior_len();
    for i in 0..=n {
        for j in i + 3..=n + 1 {
            if i == 0 && j == n + 1 {
                continue;
            }
            let Ok(swapped) = apply_tail_switch(d, i, j) else {
                continue;
            };
            if let Some(dec) = decrease_from(base, &swapped) {
                if dec <= *allowance {
                    return true;
                }
            }
        }
    }
    false
}

/// Center on the leftmost largest fragment, pointing `y` toward the
/// heavier tail; ties point toward `v2`.
fn sorted_path_labels(profile: &PathProfile) -> (isize, isize) {
    let n = profile.len();
    let mut center = 1usize;
    for k in 2..=n {
        if profile.component(k) > profile.component(center) {
            center = k;
        }
    }
    let dir = if profile.suffix_tail(center + 1) >= profile.prefix_tail(center - 1) {
        1
    } else {
        -1
    };
    (center as isize, dir)
}

/// Interior slot pairs `(x_k, y_k)` and `(y_k, x_{k+1})` of the sorted-path
/// labeling, in scan order. Both arms stop at the path ends.
fn labeled_pairs(labels: (isize, isize), n: usize) -> Vec<(usize, usize)> {
    let (center, dir) = labels;
    let interior = 1..=(n as isize);
    let mut out = Vec::new();
    for k in 1isize.. {
        let x_k = center - (k - 1) * dir;
        let y_k = center + k * dir;
        let x_next = center - k * dir;
        let mut any = false;
        if interior.contains(&x_k) && interior.contains(&y_k) {
            out.push((x_k as usize, y_k as usize));
            any = true;
        }
        if interior.contains(&y_k) && interior.contains(&x_next) {
            out.push((y_k as usize, x_next as usize));
            any = true;
        }
        if !any {
            break;
        }
    }
    out
}

/// On the greedy tree of `ds`, every count-decreasing component or degree
/// switch that undoes an algorithm move must be matched by a tail exchange
/// at the same two anchors losing at least as little. Component instances
/// are the adjacent exchanges plus the labeled pairs of the sorted path;
/// degree instances are the labeled pairs with unequal anchor degrees.
/// Scans over many leaf pairs sample `SAMPLED_PAIR_LIMIT` of them with the
/// recorded seed.
pub fn check_tail_dominance(ds: &DegreeSequence, seed: u64) -> ExperimentReport {
    let hypothesis = "tail-switch-dominance";
    let greedy = build_greedy(ds).tree;
    if greedy.n() < 3 {
        return sealed_report(hypothesis, 0, Vec::new(), Some(seed));
    }
    let base = count_subtrees(&greedy);
    let leaves = greedy.leaves();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (ai, &a) in leaves.iter().enumerate() {
        for &b in &leaves[ai + 1..] {
            pairs.push((a, b));
        }
    }
    if pairs.len() > SAMPLED_PAIR_LIMIT {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        pairs = pairs
            .choose_multiple(&mut rng, SAMPLED_PAIR_LIMIT)
            .copied()
            .collect();
        pairs.sort_unstable();
    }
    let mut instances = 0u64;
    let mut counterexamples = Vec::new();
    for &(a, b) in &pairs {
        let d = LeafPathDecomposition::leaf_path(&greedy, a, b)
            .expect("distinct leaves of the greedy tree");
        let n = d.interior_len();
        let profile = path_profile(&d);
        let labels = sorted_path_labels(&profile);
        // kind 0 is a component exchange, kind 1 a degree switch
        let mut wanted: BTreeSet<(u8, usize, usize)> = BTreeSet::new();
        for i in 1..n {
            wanted.insert((0, i, i + 1));
        }
        for (s1, s2) in labeled_pairs(labels, n) {
            wanted.insert((0, s1, s2));
            let d1 = greedy.degree(d.vertex_at_slot(s1));
            let d2 = greedy.degree(d.vertex_at_slot(s2));
            if d1 != d2 {
                wanted.insert((1, s1, s2));
            }
        }
        for (kind, s1, s2) in wanted {
            let candidate = if kind == 0 {
                apply_component_switch(&d, s1.min(s2), s1.max(s2)).expect("interior anchors")
            } else {
                let d1 = greedy.degree(d.vertex_at_slot(s1));
                let d2 = greedy.degree(d.vertex_at_slot(s2));
                let (recv, donor) = if d1 < d2 { (s1, s2) } else { (s2, s1) };
                apply_degree_switch(&d, recv, donor)
                    .expect("unequal anchor degrees")
                    .0
            };
            let Some(dec) = decrease_from(&base, &candidate) else {
                continue;
            };
            instances += 1;
            if !tail_dominates(&d, &base, s1, s2, &dec) {
                counterexamples.push(Counterexample {
                    tree_edges: greedy.to_edge_list(),
                    witness: json!({
                        "pair": [a, b],
                        "kind": if kind == 0 { "component" } else { "degree" },
                        "anchors": [s1, s2],
                        "decrease": dec.to_string(),
                    }),
                });
            }
        }
    }
    sealed_report(hypothesis, instances, counterexamples, Some(seed))
}

fn non_increasing<T: Ord>(values: &[T]) -> bool {
    values.windows(2).all(|w| w[0] >= w[1])
}

/// The balanced labelings of a path on `m` vertices: `x_1` sits at the
/// middle vertex, or at either middle when the midpoint falls on an edge.
fn middle_labelings(m: usize) -> [(isize, isize); 2] {
    let m = m as isize;
    if m % 2 == 1 {
        let c = (m - 1) / 2;
        [(c, 1), (c, -1)]
    } else {
        [(m / 2 - 1, 1), (m / 2, -1)]
    }
}

/// Path positions in label order `x_1, y_1, x_2, y_2, ...` for the given
/// centering; both arms run all the way to the path ends.
fn zigzag_positions(m: usize, center: isize, dir: isize) -> Vec<usize> {
    let span = 0..(m as isize);
    let mut out = Vec::with_capacity(m);
    for k in 1isize.. {
        let x = center - (k - 1) * dir;
        let y = center + k * dir;
        let x_in = span.contains(&x);
        let y_in = span.contains(&y);
        if !x_in && !y_in {
            break;
        }
        if x_in {
            out.push(x as usize);
        }
        if y_in {
            out.push(y as usize);
        }
    }
    out
}

/// For every family member whose every leaf path admits a balanced
/// labeling with non-increasing fragment counts, some such labeling must
/// sort the path degrees the same way. Members failing the premise are
/// skipped, not counted as instances.
pub fn check_conjecture(pool: &[DegreeSequence]) -> Result<ExperimentReport, OracleError> {
    let mut instances = 0u64;
    let mut counterexamples = Vec::new();
    for ds in pool {
        let family = enumerate_family(ds, FAMILY_VERTEX_CAP)?;
        for member in &family.members {
            if member.n() < 3 {
                instances += 1;
                continue;
            }
            let leaves = member.leaves();
            let mut premise_holds = true;
            let mut failure: Option<Counterexample> = None;
            'pairs: for (ai, &a) in leaves.iter().enumerate() {
                for &b in &leaves[ai + 1..] {
                    let d = LeafPathDecomposition::leaf_path(member, a, b)
                        .expect("distinct leaves of one member");
                    let profile = path_profile(&d);
                    let m = d.path().len();
                    let one = BigUint::from(1u32);
                    let comp = |p: usize| -> BigUint {
                        if p == 0 || p == m - 1 {
                            one.clone()
                        } else {
                            profile.component(p).clone()
                        }
                    };
                    let mut sorted_labelings = Vec::new();
                    for (center, dir) in middle_labelings(m) {
                        let order = zigzag_positions(m, center, dir);
                        let values: Vec<BigUint> = order.iter().map(|&p| comp(p)).collect();
                        if non_increasing(&values) {
                            sorted_labelings.push((order, values));
                        }
                    }
                    if sorted_labelings.is_empty() {
                        premise_holds = false;
                        break 'pairs;
                    }
                    let degrees_of = |order: &[usize]| -> Vec<usize> {
                        order
                            .iter()
                            .map(|&p| member.degree(d.vertex_at_slot(p)))
                            .collect()
                    };
                    let degrees_sorted = sorted_labelings
                        .iter()
                        .any(|(order, _)| non_increasing(&degrees_of(order)));
                    if degrees_sorted || failure.is_some() {
                        continue;
                    }
                    let (order, values) = &sorted_labelings[0];
                    failure = Some(Counterexample {
                        tree_edges: member.to_edge_list(),
                        witness: json!({
                            "pair": [a, b],
                            "components": values
                                .iter()
                                .map(|v| v.to_string())
                                .collect::<Vec<_>>(),
                            "degrees": degrees_of(order),
                        }),
                    });
                }
            }
            if premise_holds {
                instances += 1;
                if let Some(found) = failure {
                    counterexamples.push(found);
                }
            }
        }
    }
    Ok(sealed_report(
        "sorted-components-imply-sorted-degrees",
        instances,
        counterexamples,
        None,
    ))
}

/// Exact positive decreases of each switch kind anchored at the two slots,
/// keyed by kind name. Identity and non-decreasing candidates are left
/// out, as are kinds the anchors do not support.
fn anchored_decreases(
    d: &LeafPathDecomposition,
    base: &BigUint,
    s1: usize,
    s2: usize,
) -> BTreeMap<&'static str, BigUint> {
    let tree = d.tree();
    let n = d.interior_len();
    let interior = 1..=n;
    let mut out = BTreeMap::new();
    if interior.contains(&s1) && interior.contains(&s2) && s1 != s2 {
        if let Ok(swapped) = apply_component_switch(d, s1.min(s2), s1.max(s2)) {
            if let Some(dec) = decrease_from(base, &swapped) {
                out.insert("component", dec);
            }
        }
        let d1 = tree.degree(d.vertex_at_slot(s1));
        let d2 = tree.degree(d.vertex_at_slot(s2));
        if d1 != d2 {
            let (recv, donor) = if d1 < d2 { (s1, s2) } else { (s2, s1) };
            if let Ok((swapped, _)) = apply_degree_switch(d, recv, donor) {
                if let Some(dec) = decrease_from(base, &swapped) {
                    out.insert("degree", dec);
                }
            }
        }
    }
    if let Ok(swapped) = apply_tail_switch(d, s1.min(s2), s1.max(s2)) {
        if let Some(dec) = decrease_from(base, &swapped) {
            out.insert("tail", dec);
        }
    }
    out
}

fn decreases_witness(decs: &BTreeMap<&'static str, BigUint>) -> Value {
    Value::Object(
        decs.iter()
            .map(|(kind, v)| (kind.to_string(), Value::String(v.to_string())))
            .collect(),
    )
}

/// Problem one: at each labeled pair of the sorted path, is the tail
/// exchange ever the larger loss of the two always-available kinds?
fn probe_problem_one(greedy: &Tree) -> (u64, Vec<Counterexample>) {
    if greedy.n() < 3 {
        return (0, Vec::new());
    }
    let base = count_subtrees(greedy);
    let leaves = greedy.leaves();
    let mut instances = 0u64;
    let mut counterexamples = Vec::new();
    for (ai, &a) in leaves.iter().enumerate() {
        for &b in &leaves[ai + 1..] {
            let d = LeafPathDecomposition::leaf_path(greedy, a, b).expect("distinct leaves");
            let profile = path_profile(&d);
            let (center, dir) = sorted_path_labels(&profile);
            let interior = 1..=(d.interior_len() as isize);
            for k in 1isize.. {
                let x = center - (k - 1) * dir;
                let y = center + k * dir;
                if !interior.contains(&x) || !interior.contains(&y) {
                    break;
                }
                let decs = anchored_decreases(&d, &base, x as usize, y as usize);
                if decs.is_empty() {
                    continue;
                }
                instances += 1;
                if let (Some(comp), Some(tail)) = (decs.get("component"), decs.get("tail")) {
                    if tail > comp {
                        counterexamples.push(Counterexample {
                            tree_edges: greedy.to_edge_list(),
                            witness: json!({
                                "pair": [a, b],
                                "k": k,
                                "decreases": decreases_witness(&decs),
                            }),
                        });
                    }
                }
            }
        }
    }
    (instances, counterexamples)
}

/// Problem three: within one switch kind, does the loss shrink as the
/// labeled pair moves outward from the center?
fn probe_problem_three(greedy: &Tree) -> (u64, Vec<Counterexample>) {
    if greedy.n() < 3 {
        return (0, Vec::new());
    }
    let base = count_subtrees(greedy);
    let leaves = greedy.leaves();
    let mut instances = 0u64;
    let mut counterexamples = Vec::new();
    for (ai, &a) in leaves.iter().enumerate() {
        for &b in &leaves[ai + 1..] {
            let d = LeafPathDecomposition::leaf_path(greedy, a, b).expect("distinct leaves");
            let profile = path_profile(&d);
            let (center, dir) = sorted_path_labels(&profile);
            let interior = 1..=(d.interior_len() as isize);
            let mut by_kind: BTreeMap<&'static str, Vec<(isize, BigUint)>> = BTreeMap::new();
            for k in 1isize.. {
                let x = center - (k - 1) * dir;
                let y = center + k * dir;
                if !interior.contains(&x) || !interior.contains(&y) {
                    break;
                }
                for (kind, dec) in anchored_decreases(&d, &base, x as usize, y as usize) {
                    by_kind.entry(kind).or_default().push((k, dec));
                }
            }
            for (kind, series) in &by_kind {
                for (ii, inner) in series.iter().enumerate() {
                    for outer in &series[ii + 1..] {
                        instances += 1;
                        if outer.1 > inner.1 {
                            counterexamples.push(Counterexample {
                                tree_edges: greedy.to_edge_list(),
                                witness: json!({
                                    "pair": [a, b],
                                    "kind": kind,
                                    "inner_k": inner.0,
                                    "outer_k": outer.0,
                                    "inner_decrease": inner.1.to_string(),
                                    "outer_decrease": outer.1.to_string(),
                                }),
                            });
                        }
                    }
                }
            }
        }
    }
    (instances, counterexamples)
}

fn lca(view: &RootedView, mut u: usize, mut v: usize) -> usize {
    while view.depth(u) > view.depth(v) {
        u = view.parent(u).expect("deeper vertex has a parent");
    }
    while view.depth(v) > view.depth(u) {
        v = view.parent(v).expect("deeper vertex has a parent");
    }
    while u != v {
        u = view.parent(u).expect("vertices below the root");
        v = view.parent(v).expect("vertices below the root");
    }
    u
}

/// Vertices from the meeting vertex `w` down to `leaf`, excluding `w`
/// itself and ending at the leaf.
fn leg_to(view: &RootedView, w: usize, leaf: usize) -> Vec<usize> {
    let mut leg = vec![leaf];
    let mut v = leaf;
    while v != w {
        v = view.parent(v).expect("leaf descends from the meeting vertex");
        leg.push(v);
    }
    leg.pop();
    leg.reverse();
    leg
}

/// First permutation of the three legs whose counts read non-increasing in
/// the interleaved order `x_1, y_1, z_1, x_2, ...`.
fn interleaved_assignment(counts: &[Vec<BigUint>; 3]) -> Option<[usize; 3]> {
    const ORDERS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    ORDERS.into_iter().find(|&[x, y, z]| {
        let longest = counts[x].len().max(counts[y].len()).max(counts[z].len());
        let mut flat = Vec::new();
        for i in 0..longest {
            for leg in [x, y, z] {
                if let Some(v) = counts[leg].get(i) {
                    flat.push(v);
                }
            }
        }
        non_increasing(&flat)
    })
}

fn pair_decreases_on_path(
    tree: &Tree,
    base: &BigUint,
    end_a: usize,
    end_b: usize,
    va: usize,
    vb: usize,
) -> BTreeMap<&'static str, BigUint> {
    let d = LeafPathDecomposition::leaf_path(tree, end_a, end_b).expect("distinct leaves");
    let sa = d.slot_of(va).expect("vertex lies on its own leg's path");
    let sb = d.slot_of(vb).expect("vertex lies on its own leg's path");
    anchored_decreases(&d, base, sa, sb)
}

/// Problem two: three legs meeting at one vertex with counts interleaved
/// leg by leg; is the exchange on the two smaller legs never the larger
/// loss compared to one on the largest and smallest legs?
fn probe_problem_two(greedy: &Tree, root: usize) -> (u64, Vec<Counterexample>) {
    if greedy.n() < 3 {
        return (0, Vec::new());
    }
    let base = count_subtrees(greedy);
    let view = RootedView::new(greedy, root);
    let leaves = greedy.leaves();
    let mut instances = 0u64;
    let mut counterexamples = Vec::new();
    for (i1, &l1) in leaves.iter().enumerate() {
        for (i2, &l2) in leaves.iter().enumerate().skip(i1 + 1) {
            for &l3 in leaves.iter().skip(i2 + 1) {
                let w = lca(&view, l1, l2);
                if lca(&view, l1, l3) != w || lca(&view, l2, l3) != w {
                    continue;
                }
                let legs = [
                    leg_to(&view, w, l1),
                    leg_to(&view, w, l2),
                    leg_to(&view, w, l3),
                ];
                let mut spider_edges: Vec<(usize, usize)> = Vec::new();
                for leg in &legs {
                    let mut prev = w;
                    for &v in leg {
                        spider_edges.push((prev, v));
                        prev = v;
                    }
                }
                let counts: [Vec<BigUint>; 3] = [0, 1, 2].map(|i| {
                    legs[i]
                        .iter()
                        .map(|&v| count_rooted_avoiding(greedy, v, &spider_edges))
                        .collect()
                });
                let Some([x, y, z]) = interleaved_assignment(&counts) else {
                    continue;
                };
                let (leg_x, leg_y, leg_z) = (&legs[x], &legs[y], &legs[z]);
                let (end_x, end_y, end_z) = (
                    *leg_x.last().expect("legs are nonempty"),
                    *leg_y.last().expect("legs are nonempty"),
                    *leg_z.last().expect("legs are nonempty"),
                );
                for i in 0..leg_y.len().min(leg_z.len()) {
                    let yz =
                        pair_decreases_on_path(greedy, &base, end_y, end_z, leg_y[i], leg_z[i]);
                    let xz = if i < leg_x.len() {
                        pair_decreases_on_path(greedy, &base, end_x, end_z, leg_x[i], leg_z[i])
                    } else {
                        BTreeMap::new()
                    };
                    let (Some(min_yz), Some(min_xz)) = (yz.values().min(), xz.values().min())
                    else {
                        continue;
                    };
                    instances += 1;
                    if min_yz > min_xz {
                        counterexamples.push(Counterexample {
                            tree_edges: greedy.to_edge_list(),
                            witness: json!({
                                "leaves": [end_x, end_y, end_z],
                                "i": i + 1,
                                "yz_decreases": decreases_witness(&yz),
                                "xz_decreases": decreases_witness(&xz),
                            }),
                        });
                    }
                }
            }
        }
    }
    (instances, counterexamples)
}

/// Runs one of the three ordering probes on the greedy tree of `ds`.
/// `problem` must be 1, 2, or 3.
pub fn probe_switch_ordering(ds: &DegreeSequence, problem: u8) -> ExperimentReport {
    assert!((1..=3).contains(&problem), "problem must be 1, 2, or 3");
    let greedy = build_greedy(ds);
    let (hypothesis, (instances, counterexamples)) = match problem {
        1 => (
            "problem-1-tail-at-most-component",
            probe_problem_one(&greedy.tree),
        ),
        2 => (
            "problem-2-middle-pair-at-most-outer",
            probe_problem_two(&greedy.tree, greedy.root),
        ),
        _ => (
            "problem-3-loss-shrinks-outward",
            probe_problem_three(&greedy.tree),
        ),
    };
    sealed_report(hypothesis, instances, counterexamples, None)
}

/// Uniform random labeled tree on `n` vertices from a seeded generator.
pub fn random_tree_seeded(n: usize, rng: &mut impl Rng) -> Tree {
    assert!(n >= 1);
    if n == 1 {
        return Tree::single();
    }
    if n == 2 {
        return Tree::from_edges(2, &[(0, 1)]).expect("one edge on two vertices");
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    prufer_decode(n, &seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(degrees: &[usize]) -> DegreeSequence {
        DegreeSequence::new(degrees.to_vec()).expect("valid degree sequence")
    }

    #[test]
    fn rank_family_puts_the_greedy_count_first() {
        let ds = ds(&[3, 3, 2]);
        let ranked = rank_family(&ds, 16).unwrap();
        let greedy_count = count_subtrees(&build_greedy(&ds).tree);
        assert_eq!(ranked.entries[0].count, greedy_count);
        assert_eq!(ranked.degree_sequence, "3,3,2");
        for (i, entry) in ranked.entries.iter().enumerate() {
            assert_eq!(entry.rank, i + 1);
        }
        for pair in ranked.entries.windows(2) {
            assert!(pair[0].count >= pair[1].count);
            if pair[0].count == pair[1].count {
                assert!(pair[0].canonical_code < pair[1].canonical_code);
            }
        }
    }

    #[test]
    fn rank_family_of_a_path_is_a_single_entry() {
        let ranked = rank_family(&ds(&[2, 2, 2]), 16).unwrap();
        assert_eq!(ranked.entries.len(), 1);
        assert_eq!(ranked.entries[0].count, BigUint::from(15u32));
        assert_eq!(ranked.entries[0].rank, 1);
    }

    #[test]
    fn rank_family_respects_the_vertex_cap() {
        let err = rank_family(&ds(&[4, 4, 4, 4, 4]), 16).unwrap_err();
        assert!(matches!(err, OracleError::SizeCapExceeded { .. }));
    }

    #[test]
    fn switch_distance_finds_the_greedy_tree_at_zero() {
        let greedy = build_greedy(&ds(&[3, 3, 2])).tree;
        assert_eq!(
            switch_distance_to_greedy(&greedy, 10_000),
            SwitchDistance::Reached(0)
        );
    }

    #[test]
    fn every_family_member_sits_within_switch_reach() {
        let ds = ds(&[3, 3, 2]);
        let family = enumerate_family(&ds, 16).unwrap();
        let scan = decreasing_switch_depths(&ds, 10_000);
        assert!(!scan.budget_exhausted);
        for member in &family.members {
            let depth = scan
                .depths
                .get(&canonical_code(member))
                .expect("every member is reachable by decreasing switches");
            assert!(*depth < family.members.len());
        }
        let ranked = rank_family(&ds, 16).unwrap();
        assert!(ranked.entries.len() >= 2);
        let runner_up = family
            .members
            .iter()
            .find(|m| canonical_code(m) == ranked.entries[1].canonical_code)
            .expect("ranked entries come from the family");
        assert_eq!(
            switch_distance_to_greedy(runner_up, 10_000),
            SwitchDistance::Reached(1)
        );
    }

    #[test]
    fn switch_distance_reports_budget_exhaustion() {
        let ds = ds(&[3, 3, 2]);
        let family = enumerate_family(&ds, 16).unwrap();
        let greedy_code = canonical_code(&build_greedy(&ds).tree);
        let other = family
            .members
            .iter()
            .find(|m| canonical_code(m) != greedy_code)
            .expect("family has more than one shape");
        assert_eq!(
            switch_distance_to_greedy(other, 0),
            SwitchDistance::BudgetExhausted
        );
    }

    #[test]
    fn tail_dominance_is_vacuous_on_paths() {
        let report = check_tail_dominance(&ds(&[2, 2, 2]), 42);
        assert_eq!(report.instances, 0);
        assert_eq!(report.status, ReportStatus::NoCounterexampleFound);
    }

    #[test]
    fn tail_dominance_holds_on_small_families() {
        for degrees in [&[3usize, 3, 2] as &[usize], &[4, 3, 2, 2]] {
            let report = check_tail_dominance(&ds(degrees), 42);
            assert!(report.instances > 0, "{degrees:?} should offer switches");
            assert_eq!(report.status, ReportStatus::NoCounterexampleFound);
        }
    }

    #[test]
    fn tail_dominance_reports_are_reproducible() {
        let a = serde_json::to_string(&check_tail_dominance(&ds(&[4, 3, 2, 2]), 7)).unwrap();
        let b = serde_json::to_string(&check_tail_dominance(&ds(&[4, 3, 2, 2]), 7)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn conjecture_checker_accepts_sorted_paths() {
        let report = check_conjecture(&[ds(&[2, 2, 2])]).unwrap();
        assert_eq!(report.instances, 1);
        assert_eq!(report.status, ReportStatus::NoCounterexampleFound);
    }

    #[test]
    fn conjecture_checker_scans_whole_families() {
        let pool = [ds(&[3, 3, 2]), ds(&[4, 3])];
        let report = check_conjecture(&pool).unwrap();
        assert!(report.instances >= 1);
        for found in &report.counterexamples {
            Tree::parse(&found.tree_edges).expect("witness edges replay");
        }
    }

    #[test]
    fn probe_one_compares_both_switch_kinds() {
        let report = probe_switch_ordering(&ds(&[3, 3, 3]), 1);
        assert_eq!(report.hypothesis, "problem-1-tail-at-most-component");
        assert!(report.instances >= 1);
    }

    #[test]
    fn probe_two_finds_three_leg_meetings() {
        let report = probe_switch_ordering(&ds(&[3, 3, 3]), 2);
        assert_eq!(report.hypothesis, "problem-2-middle-pair-at-most-outer");
        assert!(report.instances >= 1);
    }

    #[test]
    fn probe_three_orders_losses_outward() {
        let report = probe_switch_ordering(&ds(&[3, 3, 3, 2]), 3);
        assert_eq!(report.hypothesis, "problem-3-loss-shrinks-outward");
        let _ = report.instances;
    }

    #[test]
    fn probes_are_vacuous_on_paths() {
        for problem in 1..=3 {
            let report = probe_switch_ordering(&ds(&[2, 2]), problem);
            assert_eq!(report.instances, 0);
            assert_eq!(report.status, ReportStatus::NoCounterexampleFound);
        }
    }

    #[test]
    fn random_trees_are_reproducible() {
        let mut first = ChaCha8Rng::seed_from_u64(99);
        let mut second = ChaCha8Rng::seed_from_u64(99);
        let a = random_tree_seeded(12, &mut first);
        let b = random_tree_seeded(12, &mut second);
        assert_eq!(a, b);
        assert_eq!(a.n(), 12);
        assert_eq!(a.edges().len(), 11);
    }
}
