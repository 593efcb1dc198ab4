//! Discrete Morse machinery: matching trees over Sigma(A,B) states, the
//! acyclic matchings they induce on independence complexes, acyclicity
//! verification, patchwork composition of graded matchings, the explicit
//! gradings for Ind(SG_{2,k}), and the scripted trees for the E graphs.

pub mod matching;
pub mod script;
pub mod search;
pub mod sg2k;
pub mod sigma;
pub mod tree;

pub use matching::{
    induced_matching, morse_summary, patchwork_compose, verify_acyclic, verify_tree_consistency,
    GradeMap, MorseSummary, PartialMatching,
};
pub use script::{
    e_graph_script, el_delegation_check, run_script, script_from_tree, Fallback, Script,
};
pub use search::{search_tree, DEFAULT_NODE_BUDGET};
pub use sg2k::sg2k_matching;
pub use sigma::{expand_sigma, SigmaNode};
pub use tree::{validate_step, MatchingTree, TreeBuilder, TreeStep};
