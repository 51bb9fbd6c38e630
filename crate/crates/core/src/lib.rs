//! Regular path queries over edge-labelled graphs under all-shortest-paths
//! semantics.
//!
//! A query `(v, regex, ?x)` asks for every node `x` reachable from the fixed
//! node `v` by a path whose label word matches `regex`. Besides plain
//! reachability the engine can return one shortest witnessing path per
//! answer, all shortest witnessing paths (stored as a predecessor DAG and
//! enumerated lazily), or just their number.
//!
//! ```
//! use rpq_core::{eval_count, fixtures, Rpq};
//!
//! let g = fixtures::fan_in();
//! let q = Rpq::parse(&g, "v", "e*").unwrap();
//! let mut counts = Vec::new();
//! eval_count(&g, &q, |node, depth, n| counts.push((g.node_name(node).to_owned(), depth, n.to_string())));
//! assert!(counts.contains(&("n4".to_owned(), 2, "3".to_owned())));
//! ```

pub mod allsp;
pub mod automaton;
pub mod enumerate;
pub mod fixtures;
pub mod graph;
pub mod oracle;
pub mod regex;
pub mod rpq;

pub use allsp::{all_shortest_search, dag_stats, DagKey, EdgeTag, EntryId, PathDag, PathDagU, Solution};
pub use automaton::{compile, determinize, glushkov, Dfa, Nfa, StateId, SymbolId};
pub use enumerate::{count_all, count_paths, enumerate_paths, PathEnumerator};
pub use graph::{
    load_labelled_graph, parse_labelled_graph, strip_labels, GraphBuilder, GraphError, Label,
    LabelledGraph, NodeId, Path, UnlabelledGraph,
};
pub use num_bigint::BigUint;
pub use regex::{nullable, parse_regex, RegexAst, RegexError};
pub use rpq::{
    eval_all_shortest, eval_count, eval_reach, eval_single_path, product_neighbours,
    AllShortestAnswer, AnswerPaths, ProductDag, ProductState, ReachAnswer, Rpq, RpqError,
};
