//! Product graph construction and the reduction of an arbitrary query to
//! `a b* c`.
//!
//! For a graph `G` and an automaton `M`, the product graph has an edge
//! `((v,q),(u,p))` whenever `G` has `(v,σ,u)` and `M` has `(q,σ,p)` for the
//! same symbol. The reduced graph `G'` relabels every product edge `b`, puts
//! an `a` self-loop on each product vertex whose state is a start state and a
//! `c` self-loop on each one whose state is final. A path from `v` to `u` in
//! `G` matches the query iff some `(v,q)` reaches some `(u,p)` in `G'` along
//! a path labeled `a b* c`.
//!
//! Only product vertices incident to a product edge are materialized, plus
//! `(v,q)` for every graph vertex `v` when `q` is both start and final (those
//! carry the length-zero matches). Product vertices are numbered in `(v,q)`
//! order.

use rustc_hash::FxHashSet;

use crate::automaton::{Nfa, StateId};
use crate::error::{Error, Result};
use crate::graph::{Csr, GraphBuilder, LabelId, LabeledGraph, PairSet, VertexId};

pub const LABEL_A: LabelId = LabelId(0);
pub const LABEL_B: LabelId = LabelId(1);
pub const LABEL_C: LabelId = LabelId(2);

/// Unlabeled product graph `G × M`. Vertex ids index [`ProductGraph::vertex`].
#[derive(Clone, Debug)]
pub struct ProductGraph {
    vertices: Vec<(VertexId, StateId)>,
    forward: Csr,
    reverse: Csr,
}

impl ProductGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.forward.len()
    }

    pub fn vertex(&self, pv: VertexId) -> (VertexId, StateId) {
        self.vertices[pv.index()]
    }

    pub fn vertices(&self) -> &[(VertexId, StateId)] {
        &self.vertices
    }

    pub fn find(&self, v: VertexId, q: StateId) -> Option<VertexId> {
        self.vertices
            .binary_search(&(v, q))
            .ok()
            .map(|i| VertexId(i as u32))
    }

    pub fn successors(&self, pv: VertexId) -> &[VertexId] {
        self.forward.neighbors(pv)
    }

    pub fn predecessors(&self, pv: VertexId) -> &[VertexId] {
        self.reverse.neighbors(pv)
    }

    /// All edges as `((v,q),(u,p))`, in id order.
    pub fn edges(&self) -> impl Iterator<Item = ((VertexId, StateId), (VertexId, StateId))> + '_ {
        (0..self.vertices.len() as u32).flat_map(move |x| {
            let x = VertexId(x);
            self.successors(x)
                .iter()
                .map(move |&y| (self.vertex(x), self.vertex(y)))
        })
    }
}

fn key(v: VertexId, q: StateId) -> u64 {
    (u64::from(v.0) << 32) | u64::from(q.0)
}

fn unkey(k: u64) -> (VertexId, StateId) {
    (VertexId((k >> 32) as u32), StateId(k as u32))
}

/// Collects product edges as `(key(v,q), key(u,p))`, sorted and deduplicated.
fn product_edge_keys(g: &LabeledGraph, m: &Nfa) -> Vec<(u64, u64)> {
    let mut by_label: Vec<Vec<(VertexId, VertexId)>> = vec![Vec::new(); g.label_count()];
    for e in g.edges() {
        by_label[e.label.index()].push((e.src, e.dst));
    }
    let label_of: Vec<Option<LabelId>> = m.symbols().iter().map(|s| g.label_id(s)).collect();
    let mut out = Vec::new();
    for t in m.transitions() {
        let Some(label) = label_of[t.symbol as usize] else {
            continue;
        };
        for &(v, u) in &by_label[label.index()] {
            out.push((key(v, t.from), key(u, t.to)));
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn assemble(vertex_keys: Vec<u64>, edge_keys: &[(u64, u64)]) -> ProductGraph {
    let id = |k: u64| {
        VertexId(
            vertex_keys
                .binary_search(&k)
                .expect("endpoint materialized") as u32,
        )
    };
    let ids: Vec<(VertexId, VertexId)> = edge_keys.iter().map(|&(a, b)| (id(a), id(b))).collect();
    let n = vertex_keys.len();
    ProductGraph {
        forward: Csr::build(n, ids.iter().copied()),
        reverse: Csr::build(n, ids.iter().map(|&(a, b)| (b, a))),
        vertices: vertex_keys.into_iter().map(unkey).collect(),
    }
}

/// Builds `G × M`, materializing only vertices incident to a product edge.
/// Automaton symbols are matched to graph labels by name.
pub fn product_graph(g: &LabeledGraph, m: &Nfa) -> ProductGraph {
    let edges = product_edge_keys(g, m);
    let mut vertex_keys: Vec<u64> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    vertex_keys.sort_unstable();
    vertex_keys.dedup();
    assemble(vertex_keys, &edges)
}

/// The reduced `{a,b,c}` graph together with the map back to `(v,q)`.
#[derive(Clone, Debug)]
pub struct AbcGraph {
    graph: LabeledGraph,
    origin: Vec<VertexId>,
    state: Vec<StateId>,
}

impl AbcGraph {
    /// Uses a graph already labeled over `{a, b, c}` as is, so `a b* c` can
    /// be evaluated on it directly. Every vertex maps to itself with state 0.
    pub fn from_labeled(g: &LabeledGraph) -> Result<AbcGraph> {
        let mut b = GraphBuilder::new();
        for name in ["a", "b", "c"] {
            b.intern_label(name);
        }
        for e in g.edges() {
            let name = g.label_name(e.label);
            if !matches!(name, "a" | "b" | "c") {
                return Err(Error::InvalidArgument(format!(
                    "label {name:?} is not one of a, b, c"
                )));
            }
            b.add_edge(g.vertex_name(e.src), name, g.vertex_name(e.dst));
        }
        let graph = b.build();
        let origin = graph
            .vertices()
            .map(|v| g.vertex_id(graph.vertex_name(v)).expect("same vertex set"))
            .collect();
        let state = vec![StateId(0); graph.vertex_count()];
        Ok(AbcGraph {
            graph,
            origin,
            state,
        })
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn b_edge_count(&self) -> usize {
        self.graph.edges_with_label(LABEL_B)
    }

    pub fn origin(&self, x: VertexId) -> VertexId {
        self.origin[x.index()]
    }

    pub fn state(&self, x: VertexId) -> StateId {
        self.state[x.index()]
    }

    pub fn succ(&self, label: LabelId, x: VertexId) -> &[VertexId] {
        self.graph.successors(label, x)
    }

    pub fn pred(&self, label: LabelId, x: VertexId) -> &[VertexId] {
        self.graph.predecessors(label, x)
    }

    /// Checks the loop-placement and b-edge provenance invariants against the
    /// graph and automaton this was built from.
    pub fn check_invariants(&self, g: &LabeledGraph, m: &Nfa) -> Result<()> {
        let fail = |msg: String| Err(Error::Contract(msg));
        let label_of: Vec<Option<LabelId>> = m.symbols().iter().map(|s| g.label_id(s)).collect();
        for e in self.graph.edges() {
            let (x, y) = (e.src, e.dst);
            match e.label {
                LABEL_A | LABEL_C if x != y => {
                    return fail(format!("a/c edge {x}->{y} is not a loop"))
                }
                LABEL_A if !m.is_start(self.state(x)) => {
                    return fail(format!("a-loop on {x} whose state is not a start state"))
                }
                LABEL_C if !m.is_final(self.state(x)) => {
                    return fail(format!("c-loop on {x} whose state is not final"))
                }
                LABEL_B => {
                    let (v, q, u, p) =
                        (self.origin(x), self.state(x), self.origin(y), self.state(y));
                    let witnessed = m.transitions().iter().any(|t| {
                        t.from == q
                            && t.to == p
                            && label_of[t.symbol as usize].is_some_and(|l| g.has_edge(v, l, u))
                    });
                    if !witnessed {
                        return fail(format!("b-edge {x}->{y} has no witnessing symbol"));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// Builds the reduced graph `G'` for `g` and `m`.
pub fn build_abc_graph(g: &LabeledGraph, m: &Nfa) -> AbcGraph {
    let edges = product_edge_keys(g, m);
    let mut vertex_keys: Vec<u64> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    for &q in m.start_states().iter().filter(|&&q| m.is_final(q)) {
        vertex_keys.extend(g.vertices().map(|v| key(v, q)));
    }
    vertex_keys.sort_unstable();
    vertex_keys.dedup();

    let mut b = GraphBuilder::new();
    for name in ["a", "b", "c"] {
        b.intern_label(name);
    }
    let mut origin = Vec::with_capacity(vertex_keys.len());
    let mut state = Vec::with_capacity(vertex_keys.len());
    for &k in &vertex_keys {
        let (v, q) = unkey(k);
        b.intern_vertex(&format!("{}@{}", g.vertex_name(v), m.state_name(q)));
        origin.push(v);
        state.push(q);
    }
    let id = |k: u64| VertexId(vertex_keys.binary_search(&k).expect("materialized") as u32);
    for &(x, y) in &edges {
        b.add_edge_ids(id(x), LABEL_B, id(y));
    }
    for (i, &q) in state.iter().enumerate() {
        if m.is_start(q) {
            b.add_edge_ids(VertexId(i as u32), LABEL_A, VertexId(i as u32));
        }
    }
    for (i, &q) in state.iter().enumerate() {
        if m.is_final(q) {
            b.add_edge_ids(VertexId(i as u32), LABEL_C, VertexId(i as u32));
        }
    }
    let graph = b.build();
    debug_assert_eq!(graph.vertex_count(), origin.len());
    AbcGraph {
        graph,
        origin,
        state,
    }
}

/// Projects pairs of product vertices onto pairs of original vertices.
pub fn project_output(abc_pairs: &PairSet, g: &AbcGraph) -> PairSet {
    abc_pairs.map_vertices(|x| g.origin(x))
}

/// Edge set of `G'` as `(src name, label, dst name)` triples.
pub fn abc_edge_names(g: &AbcGraph) -> FxHashSet<(String, String, String)> {
    let inner = g.graph();
    inner
        .edges()
        .iter()
        .map(|e| {
            (
                inner.vertex_name(e.src).to_owned(),
                inner.label_name(e.label).to_owned(),
                inner.vertex_name(e.dst).to_owned(),
            )
        })
        .collect()
}
