//! Regular path queries over edge-labeled graphs.
//!
//! Any query is reduced to the fixed query `a b* c` on a product graph, which
//! is then answered in `O(|E|^{3/2} + min(OUT·√|E|, |V|·|E|))` by splitting
//! vertices into light and heavy ones by their `b*c`-degree. The classical
//! product-graph BFS, its bidirectional variant and a dense-matrix oracle are
//! provided for comparison, along with linear and binary transitive closure.
//!
//! ```
//! use rpq::{eval_rpq, load_edge_list_str, parse};
//!
//! let g = load_edge_list_str("1\ta\t2\n2\tb\t3\n3\tc\t4\n").unwrap();
//! let out = eval_rpq(&g, &parse("ab*c").unwrap());
//! assert_eq!(out.len(), 1);
//! ```

pub mod automaton;
pub mod baseline;
pub mod bench;
pub mod engine;
pub mod error;
pub mod generators;
pub mod graph;
pub mod oracle;
pub mod ospg;
pub mod reduction;
pub mod regex;
pub mod tclosure;

pub use automaton::{compile, load_automaton, load_automaton_str, Nfa, StateId};
pub use baseline::{eval_pg, eval_pg_bidirectional};
pub use engine::{evaluate, Engine, EngineRun, Query};
pub use error::{Error, Result};
pub use graph::{
    load_edge_list, load_edge_list_str, restrict_alphabet, GraphBuilder, LabelId, LabeledGraph,
    PairSet, VertexId,
};
pub use oracle::eval_matrix;
pub use ospg::{eval_abc, eval_rpq, WorkCounters};
pub use reduction::{build_abc_graph, project_output, AbcGraph};
pub use regex::{parse, Rpq, RpqAst};
