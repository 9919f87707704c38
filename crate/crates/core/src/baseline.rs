//! The classical product-graph algorithm: one breadth-first search over
//! `G × M` from every product vertex whose state is a start state.
//!
//! [`eval_pg_bidirectional`] additionally searches backwards from every
//! accepting product vertex and pairs a source with a sink when their reached
//! sets meet.

use rustc_hash::FxHashSet;

use crate::automaton::{compile, Nfa};
use crate::graph::{restrict_alphabet_mapped, LabeledGraph, PairSet, VertexId};
use crate::reduction::{product_graph, ProductGraph};
use crate::regex::Rpq;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PgCounters {
    pub bfs_runs: u64,
    pub bfs_edge_visits: u64,
}

impl PgCounters {
    pub fn entries(&self) -> [(&'static str, u64); 2] {
        [
            ("bfs_runs", self.bfs_runs),
            ("bfs_edge_visits", self.bfs_edge_visits),
        ]
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BidiCounters {
    pub forward_visits: u64,
    pub backward_visits: u64,
    pub meet_probes: u64,
}

impl BidiCounters {
    pub fn entries(&self) -> [(&'static str, u64); 3] {
        [
            ("forward_visits", self.forward_visits),
            ("backward_visits", self.backward_visits),
            ("meet_probes", self.meet_probes),
        ]
    }

    pub fn combined_visits(&self) -> u64 {
        self.forward_visits + self.backward_visits
    }
}

/// Epoch-stamped BFS scratch space, reused across sources.
struct Bfs {
    stamp: Vec<u32>,
    epoch: u32,
    queue: Vec<VertexId>,
}

impl Bfs {
    fn new(n: usize) -> Self {
        Bfs {
            stamp: vec![0; n],
            epoch: 0,
            queue: Vec::new(),
        }
    }

    /// Visits everything reachable from `source` through `next`; returns the
    /// reached vertices (source included) and adds edge traversals to `visits`.
    fn run<'a>(
        &mut self,
        source: VertexId,
        next: impl Fn(VertexId) -> &'a [VertexId],
        visits: &mut u64,
    ) -> &[VertexId] {
        self.epoch += 1;
        self.queue.clear();
        self.stamp[source.index()] = self.epoch;
        self.queue.push(source);
        let mut head = 0;
        while head < self.queue.len() {
            let x = self.queue[head];
            head += 1;
            for &y in next(x) {
                *visits += 1;
                if self.stamp[y.index()] != self.epoch {
                    self.stamp[y.index()] = self.epoch;
                    self.queue.push(y);
                }
            }
        }
        &self.queue
    }
}

struct Prepared {
    restricted: LabeledGraph,
    back: Vec<VertexId>,
    product: ProductGraph,
}

fn prepare(g: &LabeledGraph, m: &Nfa) -> Prepared {
    let keep: Vec<&str> = m.symbols().iter().map(String::as_str).collect();
    let (restricted, back) = restrict_alphabet_mapped(g, &keep);
    let product = product_graph(&restricted, m);
    Prepared {
        restricted,
        back,
        product,
    }
}

/// Length-zero matches: every vertex pairs with itself when `ε ∈ L(M)`.
fn epsilon_pairs(p: &Prepared, m: &Nfa, out: &mut PairSet) {
    if m.accepts_empty() {
        out.extend(p.restricted.vertices().map(|v| (v, v)));
    }
}

pub fn eval_pg_nfa(g: &LabeledGraph, m: &Nfa) -> (PairSet, PgCounters) {
    let p = prepare(g, m);
    let pg = &p.product;
    let mut counters = PgCounters::default();
    let mut out = PairSet::new();
    epsilon_pairs(&p, m, &mut out);

    let mut bfs = Bfs::new(pg.vertex_count());
    for s in 0..pg.vertex_count() as u32 {
        let s = VertexId(s);
        let (v, q) = pg.vertex(s);
        if !m.is_start(q) {
            continue;
        }
        counters.bfs_runs += 1;
        let reached = bfs.run(s, |x| pg.successors(x), &mut counters.bfs_edge_visits);
        for &t in reached {
            let (u, r) = pg.vertex(t);
            if m.is_final(r) {
                out.insert(v, u);
            }
        }
    }
    (out.map_vertices(|v| p.back[v.index()]), counters)
}

pub fn eval_pg_with(g: &LabeledGraph, q: &Rpq) -> (PairSet, PgCounters) {
    eval_pg_nfa(g, &compile(q))
}

pub fn eval_pg(g: &LabeledGraph, q: &Rpq) -> PairSet {
    eval_pg_with(g, q).0
}

pub fn eval_pg_bidirectional_nfa(g: &LabeledGraph, m: &Nfa) -> (PairSet, BidiCounters) {
    let p = prepare(g, m);
    let pg = &p.product;
    let n = pg.vertex_count();
    let mut counters = BidiCounters::default();
    let mut out = PairSet::new();
    epsilon_pairs(&p, m, &mut out);

    // Backward searches: meet[x] lists every sink whose backward search reached x.
    let mut bfs = Bfs::new(n);
    let mut meet: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for t in (0..n as u32).map(VertexId) {
        if !m.is_final(pg.vertex(t).1) {
            continue;
        }
        for &x in bfs.run(t, |x| pg.predecessors(x), &mut counters.backward_visits) {
            meet[x.index()].push(t);
        }
    }

    let mut fwd = Bfs::new(n);
    let mut emitted: FxHashSet<VertexId> = FxHashSet::default();
    for s in (0..n as u32).map(VertexId) {
        let (v, q) = pg.vertex(s);
        if !m.is_start(q) {
            continue;
        }
        emitted.clear();
        for &x in fwd.run(s, |x| pg.successors(x), &mut counters.forward_visits) {
            for &t in &meet[x.index()] {
                counters.meet_probes += 1;
                if emitted.insert(t) {
                    out.insert(v, pg.vertex(t).0);
                }
            }
        }
    }
    (out.map_vertices(|v| p.back[v.index()]), counters)
}

pub fn eval_pg_bidirectional_with(g: &LabeledGraph, q: &Rpq) -> (PairSet, BidiCounters) {
    eval_pg_bidirectional_nfa(g, &compile(q))
}

pub fn eval_pg_bidirectional(g: &LabeledGraph, q: &Rpq) -> PairSet {
    eval_pg_bidirectional_with(g, q).0
}
