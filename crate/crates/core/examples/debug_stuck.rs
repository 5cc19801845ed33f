use num_bigint::BigUint;
use treemax::decompose::LeafPathDecomposition;
use treemax::greedy::is_greedy;
use treemax::switching::{apply_component_switch, apply_degree_switch, apply_tail_switch};
use treemax::{build_greedy, count_subtrees, run_switching_algorithm, Tree};

fn increasing_switches(tree: &Tree, base: &BigUint) {
    let leaves = tree.leaves();
    for (ai, &a) in leaves.iter().enumerate() {
        for &b in &leaves[ai + 1..] {
            let d = LeafPathDecomposition::leaf_path(tree, a, b).unwrap();
            let n = d.interior_len();
            for i in 1..=n {
                for j in i + 1..=n {
                    let t2 = apply_component_switch(&d, i, j).unwrap();
                    let c = count_subtrees(&t2);
                    if c > *base {
                        println!("  pair ({a},{b}) component ({i},{j}) -> {c}");
                    }
                }
            }
            for i in 0..=n {
                for j in i + 3..=n + 1 {
                    let t2 = apply_tail_switch(&d, i, j).unwrap();
                    let c = count_subtrees(&t2);
                    if c > *base {
                        println!("  pair ({a},{b}) tail ({i},{j}) -> {c}");
                    }
                }
            }
            for l in 1..=n {
                for k in 1..=n {
                    if tree.degree(d.vertex_at_slot(l)) < tree.degree(d.vertex_at_slot(k)) {
                        let (t2, _) = apply_degree_switch(&d, l, k).unwrap();
                        let c = count_subtrees(&t2);
                        if c > *base {
                            println!("  pair ({a},{b}) degree ({l},{k}) -> {c}");
                        }
                    }
                }
            }
        }
    }
}

fn main() {
    let tree = Tree::from_edges(
        9,
        &[(0, 1), (0, 2), (0, 8), (1, 3), (1, 4), (3, 5), (5, 6), (6, 7)],
    )
    .unwrap();
    println!("input count {}", count_subtrees(&tree));
    let (best, trace) = run_switching_algorithm(&tree).unwrap();
    println!("final count {}", trace.final_count);
    println!("steps: {}", trace.steps.len());
    for s in &trace.steps {
        println!(
            "  {:?} pair ({},{}) idx {:?} {} -> {}",
            s.switch.kind, s.switch.v1, s.switch.v2, s.switch.indices, s.count_before, s.count_after
        );
    }
    println!("final tree:\n{}", best.to_edge_list());
    println!("verdict: {:?}", is_greedy(&best));
    let greedy = build_greedy(&best.degree_sequence());
    println!("greedy count {}", count_subtrees(&greedy.tree));
    let base = count_subtrees(&best);
    println!("single increasing switches from the stuck tree:");
    increasing_switches(&best, &base);
}
