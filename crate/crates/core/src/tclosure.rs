//! Transitive closure by semi-naive evaluation.
//!
//! The linear program `T(x,y) ← E(x,y); T(x,y) ← T(x,z) ∧ E(z,y)` is evaluated
//! one delta at a time: each round joins the previous round's new pairs with
//! `E`, iterating delta tuples grouped by `z` and scanning the successors of
//! `z`, and keeps `(x,y)` only if it is not already in `T`. Because of that
//! filter the deltas partition the result and the total join work is
//! `Σ_{(x,z)∈T} outdeg(z)`, which is at most `OUT·√|E|` and at most `|V|·|E|`.
//!
//! The binary program `T(x,y) ← T(x,z) ∧ T(z,y)` converges in logarithmically
//! many rounds but its total work is bounded only by `OUT^{3/2}`. Each round
//! evaluates `δ(x,z) ∧ T_prev(z,y)` and `T_older(x,z) ∧ δ(z,y)`, where
//! `T_older` excludes the previous delta so that a two-step chain is joined in
//! exactly one round.

use rustc_hash::FxHashSet;

use crate::graph::{Csr, GraphBuilder, LabeledGraph, PairSet, VertexId};

/// Unlabeled directed graph on dense vertex ids.
#[derive(Clone, Debug)]
pub struct Digraph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    succ: Csr,
}

impl Digraph {
    /// Duplicate edges are dropped.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Self {
        let mut seen = FxHashSet::default();
        let edges: Vec<_> = edges.into_iter().filter(|e| seen.insert(*e)).collect();
        for &(a, b) in &edges {
            assert!(a.index() < n && b.index() < n, "edge endpoint out of range");
        }
        Digraph {
            n,
            succ: Csr::build(n, edges.iter().copied()),
            edges,
        }
    }

    /// The edges of `g` with labels ignored.
    pub fn from_labeled(g: &LabeledGraph) -> Self {
        Self::from_edges(g.vertex_count(), g.edges().iter().map(|e| (e.src, e.dst)))
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn successors(&self, v: VertexId) -> &[VertexId] {
        self.succ.neighbors(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Formulation {
    Linear,
    Binary,
}

/// Closure result and its evaluation profile.
#[derive(Clone, Debug, Default)]
pub struct TcRun {
    pub pairs: PairSet,
    /// Number of non-empty deltas, counting the initial `δ⁰ = E`.
    pub productive_iterations: usize,
    /// Rule evaluations performed, including the final one that found nothing.
    pub rounds: usize,
    /// `(delta tuple, adjacency entry)` probes over all rounds.
    pub rule_work: u64,
    pub delta_sizes: Vec<usize>,
    /// The deltas themselves, when requested.
    pub deltas: Option<Vec<Vec<(VertexId, VertexId)>>>,
}

impl TcRun {
    pub fn counters(&self) -> [(&'static str, u64); 3] {
        [
            ("productive_iterations", self.productive_iterations as u64),
            ("rounds", self.rounds as u64),
            ("rule_work", self.rule_work),
        ]
    }
}

/// Accumulated closure: per-source targets, per-target sources tagged with
/// the round that added them, and a membership set for the negation check.
struct TcState {
    succ: Vec<Vec<VertexId>>,
    pred: Vec<Vec<(VertexId, usize)>>,
    member: FxHashSet<u64>,
}

impl TcState {
    fn new(n: usize) -> Self {
        TcState {
            succ: vec![Vec::new(); n],
            pred: vec![Vec::new(); n],
            member: FxHashSet::default(),
        }
    }

    #[inline]
    fn claim(&mut self, x: VertexId, y: VertexId) -> bool {
        self.member.insert((u64::from(x.0) << 32) | u64::from(y.0))
    }

    fn merge(&mut self, delta: &[(VertexId, VertexId)], round: usize) {
        for &(x, y) in delta {
            self.succ[x.index()].push(y);
            self.pred[y.index()].push((x, round));
        }
    }

    fn into_pairs(self) -> PairSet {
        self.succ
            .into_iter()
            .enumerate()
            .flat_map(|(x, ys)| ys.into_iter().map(move |y| (VertexId(x as u32), y)))
            .collect()
    }
}

fn initial_delta(g: &Digraph, state: &mut TcState) -> Vec<(VertexId, VertexId)> {
    let delta: Vec<_> = g
        .edges()
        .iter()
        .copied()
        .filter(|&(x, y)| state.claim(x, y))
        .collect();
    state.merge(&delta, 0);
    delta
}

fn finish(state: TcState, mut run: TcRun) -> TcRun {
    run.productive_iterations = run.delta_sizes.len();
    run.pairs = state.into_pairs();
    run
}

pub fn tc_linear_traced(g: &Digraph, keep_deltas: bool) -> TcRun {
    let mut state = TcState::new(g.vertex_count());
    let mut run = TcRun::default();
    let mut kept = Vec::new();
    let mut delta = initial_delta(g, &mut state);

    while !delta.is_empty() {
        run.delta_sizes.push(delta.len());
        run.rounds += 1;
        delta.sort_unstable_by_key(|&(x, z)| (z, x));
        let mut next = Vec::new();
        for &(x, z) in &delta {
            for &y in g.successors(z) {
                run.rule_work += 1;
                if state.claim(x, y) {
                    next.push((x, y));
                }
            }
        }
        state.merge(&next, run.rounds);
        if keep_deltas {
            kept.push(std::mem::replace(&mut delta, next));
        } else {
            delta = next;
        }
    }
    if keep_deltas {
        run.deltas = Some(kept);
    }
    finish(state, run)
}

pub fn tc_binary_traced(g: &Digraph, keep_deltas: bool) -> TcRun {
    let mut state = TcState::new(g.vertex_count());
    let mut run = TcRun::default();
    let mut kept = Vec::new();
    let mut delta = initial_delta(g, &mut state);

    while !delta.is_empty() {
        run.delta_sizes.push(delta.len());
        run.rounds += 1;
        let round = run.rounds;
        let mut next = Vec::new();
        // δ(x,z) ∧ T_prev(z,y): succ has not yet absorbed this round's output.
        for &(x, z) in &delta {
            for i in 0..state.succ[z.index()].len() {
                let y = state.succ[z.index()][i];
                run.rule_work += 1;
                if state.claim(x, y) {
                    next.push((x, y));
                }
            }
        }
        // T_older(x,z) ∧ δ(z,y): only sources added before the previous round.
        for &(z, y) in &delta {
            for i in 0..state.pred[z.index()].len() {
                let (x, added) = state.pred[z.index()][i];
                if added + 1 >= round {
                    break;
                }
                run.rule_work += 1;
                if state.claim(x, y) {
                    next.push((x, y));
                }
            }
        }
        state.merge(&next, round);
        if keep_deltas {
            kept.push(std::mem::replace(&mut delta, next));
        } else {
            delta = next;
        }
    }
    if keep_deltas {
        run.deltas = Some(kept);
    }
    finish(state, run)
}

pub fn tc_traced(g: &Digraph, formulation: Formulation) -> TcRun {
    match formulation {
        Formulation::Linear => tc_linear_traced(g, false),
        Formulation::Binary => tc_binary_traced(g, false),
    }
}

pub fn tc_linear(g: &Digraph) -> PairSet {
    tc_linear_traced(g, false).pairs
}

pub fn tc_binary(g: &Digraph) -> PairSet {
    tc_binary_traced(g, false).pairs
}

/// Answers the query `a*`: every vertex incident to an `a`-edge reaches
/// itself, plus the transitive closure of the `a`-edges. Pairs are over `g`'s
/// vertex ids.
pub fn eval_a_star(g: &LabeledGraph) -> PairSet {
    eval_star_of(g, "a")
}

/// Same as [`eval_a_star`] for an arbitrary label.
pub fn eval_star_of(g: &LabeledGraph, label: &str) -> PairSet {
    let mut b = GraphBuilder::new();
    let mut back = Vec::new();
    if let Some(l) = g.label_id(label) {
        for e in g.edges().iter().filter(|e| e.label == l) {
            for v in [e.src, e.dst] {
                if b.intern_vertex(g.vertex_name(v)).index() == back.len() {
                    back.push(v);
                }
            }
            b.add_edge(g.vertex_name(e.src), label, g.vertex_name(e.dst));
        }
    }
    let sub = b.build();
    let closure = tc_linear(&Digraph::from_labeled(&sub));
    let mut out: PairSet = sub.vertices().map(|v| (v, v)).collect();
    out.extend_from(&closure);
    out.map_vertices(|v| back[v.index()])
}
