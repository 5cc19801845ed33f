//! Exact subtree counting and count-maximization machinery for trees with a
//! prescribed degree sequence.
//!
//! The crate is organized around a plain adjacency-list [`Tree`] and a small
//! set of algorithmic layers on top of it:
//!
//! * [`count`] holds the product-form counting rules, leaf-path profiles, and
//!   the section counts used to predict how a switch changes the total.
//! * [`greedy`] builds the breadth-first greedy tree for a degree sequence and
//!   checks the structural conditions that characterize it.
//! * [`switching`] implements the three switch moves and the three-phase
//!   simulated-annealing style driver that climbs to the greedy tree.
//! * [`oracle`] provides brute-force counterparts (subset scans, exhaustive
//!   family enumeration) used to validate everything else.
//! * [`explorer`] ranks families, measures switch distances, and runs the
//!   empirical probes for the open questions.

pub mod canon;
pub mod count;
pub mod decompose;
pub mod explorer;
pub mod greedy;
pub mod oracle;
pub mod switching;
pub mod tree;

mod serde_biguint;

pub use count::{count_rooted, count_subtrees};
pub use greedy::build_greedy;
pub use switching::run_switching_algorithm;
pub use tree::{DegreeSequence, Tree};
