//! Output-sensitive evaluation of `a b* c`, and through the reduction, of any
//! regular path query.
//!
//! The evaluation on a reduced graph `G'` with `|E'|` edges runs in four steps:
//!
//! 1. For every vertex `x`, collect up to `Δ = ⌊√|E'|⌋ + 1` vertices that are
//!    `b*c`-reachable from `x` ([`compute_bounded_reach`]). Lists are seeded
//!    from `c`-edges and grown backwards along `b`-edges with a FIFO worklist
//!    of insertion events; each `b`-edge is checked against each target of its
//!    head at most once, so this step costs `O(|E'|·Δ)`.
//! 2. Vertices with at most `⌊√|E'|⌋` targets are light and their lists are
//!    complete. Vertices whose list hit `Δ` are heavy ([`split_light_heavy`]).
//! 3. Light answers come from joining `a`-edges with light lists
//!    ([`eval_light`]). Heavy answers come from one forward traversal per source
//!    `x` that has an `a`-edge into a heavy vertex ([`eval_heavy`]); there are
//!    at most `OUT/√|E'|` such sources.
//! 4. The answer is the union of both parts.

use std::collections::VecDeque;

use rayon::prelude::*;
use rustc_hash::FxHashSet;

use crate::automaton::{compile, Nfa};
use crate::error::{Error, Result};
use crate::graph::{restrict_alphabet_mapped, LabeledGraph, PairSet, VertexId};
use crate::reduction::{build_abc_graph, project_output, AbcGraph, LABEL_A, LABEL_B, LABEL_C};
use crate::regex::Rpq;

/// Instrumentation tallies for one evaluation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WorkCounters {
    /// Edges of the reduced graph, i.e. the input handled before step 1.
    pub abc_edges: u64,
    pub step1_edge_checks: u64,
    pub light_join_lookups: u64,
    pub heavy_sources: u64,
    pub heavy_bfs_edge_visits: u64,
}

impl WorkCounters {
    pub fn entries(&self) -> [(&'static str, u64); 5] {
        [
            ("abc_edges", self.abc_edges),
            ("step1_edge_checks", self.step1_edge_checks),
            ("light_join_lookups", self.light_join_lookups),
            ("heavy_sources", self.heavy_sources),
            ("heavy_bfs_edge_visits", self.heavy_bfs_edge_visits),
        ]
    }

    pub fn total_work(&self) -> u64 {
        self.entries().iter().map(|&(_, v)| v).sum()
    }
}

/// Integer square root, `⌊√n⌋`.
pub fn isqrt(n: usize) -> usize {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as usize;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// The per-source cap `⌊√e⌋ + 1`.
pub fn reach_cap(edge_count: usize) -> usize {
    isqrt(edge_count) + 1
}

/// The bounded relation `R`: for each vertex, up to `cap` distinct
/// `b*c`-reachable targets in discovery order.
#[derive(Clone, Debug)]
pub struct ReachMap {
    cap: usize,
    lists: Vec<Vec<VertexId>>,
}

impl ReachMap {
    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn list(&self, x: VertexId) -> &[VertexId] {
        &self.lists[x.index()]
    }

    pub fn degree(&self, x: VertexId) -> usize {
        self.lists[x.index()].len()
    }

    pub fn vertex_count(&self) -> usize {
        self.lists.len()
    }

    /// Total number of stored pairs.
    pub fn size(&self) -> usize {
        self.lists.iter().map(Vec::len).sum()
    }
}

/// Step 1: bounded backward propagation of `c`-targets along `b`-edges.
pub fn compute_bounded_reach(g: &AbcGraph, counters: &mut WorkCounters) -> ReachMap {
    let n = g.vertex_count();
    let cap = reach_cap(g.edge_count());
    let mut lists: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    let mut member: FxHashSet<u64> = FxHashSet::default();
    let mut events: VecDeque<(VertexId, VertexId)> = VecDeque::new();
    let pair = |x: VertexId, y: VertexId| (u64::from(x.0) << 32) | u64::from(y.0);

    for x in g.graph().vertices() {
        for &y in g.succ(LABEL_C, x) {
            if lists[x.index()].len() < cap && member.insert(pair(x, y)) {
                lists[x.index()].push(y);
                events.push_back((x, y));
            }
        }
    }

    while let Some((x, y)) = events.pop_front() {
        for &w in g.pred(LABEL_B, x) {
            counters.step1_edge_checks += 1;
            if lists[w.index()].len() < cap && member.insert(pair(w, y)) {
                lists[w.index()].push(y);
                events.push_back((w, y));
            }
        }
    }

    ReachMap { cap, lists }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexClass {
    /// No `b*c`-reachable target: neither light nor heavy.
    Empty,
    Light,
    Heavy,
}

/// Step 2 result: light pairs `R_ℓ` and heavy vertices `R_h`.
#[derive(Clone, Debug)]
pub struct LightHeavySplit {
    threshold: usize,
    class: Vec<VertexClass>,
    lists: Vec<Vec<VertexId>>,
}

impl LightHeavySplit {
    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn class(&self, x: VertexId) -> VertexClass {
        self.class[x.index()]
    }

    pub fn is_heavy(&self, x: VertexId) -> bool {
        self.class[x.index()] == VertexClass::Heavy
    }

    /// The complete target list of a light vertex.
    pub fn light_targets(&self, x: VertexId) -> Option<&[VertexId]> {
        (self.class[x.index()] == VertexClass::Light).then(|| self.lists[x.index()].as_slice())
    }

    pub fn light_pairs(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.class.len() as u32).flat_map(move |x| {
            let x = VertexId(x);
            self.light_targets(x)
                .unwrap_or(&[])
                .iter()
                .map(move |&y| (x, y))
        })
    }

    pub fn heavy_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.class.len() as u32)
            .map(VertexId)
            .filter(|&x| self.is_heavy(x))
    }
}

/// Step 2: classify vertices by their stored degree. `edge_count` must be the
/// edge count the map's cap was derived from.
pub fn split_light_heavy(r: ReachMap, edge_count: usize) -> Result<LightHeavySplit> {
    let threshold = isqrt(edge_count);
    if r.cap != threshold + 1 {
        return Err(Error::Contract(format!(
            "reach map cap {} does not match ⌊√{edge_count}⌋ + 1 = {}",
            r.cap,
            threshold + 1
        )));
    }
    let class = r
        .lists
        .iter()
        .map(|l| match l.len() {
            0 => VertexClass::Empty,
            d if d <= threshold => VertexClass::Light,
            _ => VertexClass::Heavy,
        })
        .collect();
    Ok(LightHeavySplit {
        threshold,
        class,
        lists: r.lists,
    })
}

/// `Q_ℓ(x, y) = E(x, a, z) ∧ R_ℓ(z, y)`.
pub fn eval_light(g: &AbcGraph, s: &LightHeavySplit, counters: &mut WorkCounters) -> PairSet {
    let mut out = PairSet::new();
    for x in g.graph().vertices() {
        for &z in g.succ(LABEL_A, x) {
            counters.light_join_lookups += 1;
            if let Some(ys) = s.light_targets(z) {
                out.extend(ys.iter().map(|&y| (x, y)));
            }
        }
    }
    out
}

/// Sources `S_h = {x : E(x, a, y) ∧ R_h(y)}`, in id order.
pub fn heavy_sources(g: &AbcGraph, s: &LightHeavySplit) -> Vec<VertexId> {
    g.graph()
        .vertices()
        .filter(|&x| g.succ(LABEL_A, x).iter().any(|&y| s.is_heavy(y)))
        .collect()
}

/// Forward traversal from one heavy source. Returns the emitted targets and
/// the number of edges examined.
fn heavy_traversal(
    g: &AbcGraph,
    s: &LightHeavySplit,
    x: VertexId,
    stamp: &mut [u32],
    epoch: u32,
    queue: &mut Vec<VertexId>,
) -> (Vec<VertexId>, u64) {
    let mut visits = 0u64;
    let mut targets = Vec::new();
    queue.clear();
    for &y in g.succ(LABEL_A, x) {
        if s.is_heavy(y) && stamp[y.index()] != epoch {
            stamp[y.index()] = epoch;
            queue.push(y);
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let z = queue[head];
        head += 1;
        for &y in g.succ(LABEL_B, z) {
            visits += 1;
            if stamp[y.index()] != epoch {
                stamp[y.index()] = epoch;
                queue.push(y);
            }
        }
        for &u in g.succ(LABEL_C, z) {
            visits += 1;
            targets.push(u);
        }
    }
    (targets, visits)
}

/// `Q_h` via one traversal per heavy source. With `parallel`, sources are
/// processed on the rayon pool; the result and counters are identical.
pub fn eval_heavy(
    g: &AbcGraph,
    s: &LightHeavySplit,
    counters: &mut WorkCounters,
    parallel: bool,
) -> PairSet {
    let sources = heavy_sources(g, s);
    counters.heavy_sources += sources.len() as u64;
    let n = g.vertex_count();
    let mut out = PairSet::new();

    if parallel {
        let results: Vec<(VertexId, Vec<VertexId>, u64)> = sources
            .par_iter()
            .map_init(
                || (vec![0u32; n], Vec::new(), 0u32),
                |(stamp, queue, epoch), &x| {
                    *epoch += 1;
                    let (t, v) = heavy_traversal(g, s, x, stamp, *epoch, queue);
                    (x, t, v)
                },
            )
            .collect();
        for (x, targets, visits) in results {
            counters.heavy_bfs_edge_visits += visits;
            out.extend(targets.into_iter().map(|u| (x, u)));
        }
    } else {
        let mut stamp = vec![0u32; n];
        let mut queue = Vec::new();
        for (i, &x) in sources.iter().enumerate() {
            let (targets, visits) = heavy_traversal(g, s, x, &mut stamp, i as u32 + 1, &mut queue);
            counters.heavy_bfs_edge_visits += visits;
            out.extend(targets.into_iter().map(|u| (x, u)));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OspgOptions {
    pub parallel_heavy: bool,
}

/// Result of one evaluation with its instrumentation.
#[derive(Clone, Debug)]
pub struct OspgRun {
    pub pairs: PairSet,
    pub counters: WorkCounters,
    /// Size of the answer over product vertices, before projection.
    pub abc_out: usize,
    pub abc_vertices: usize,
    pub abc_b_edges: usize,
    pub cap: usize,
}

/// Runs all four steps on a reduced graph. Pairs are over `g`'s vertices.
pub fn eval_abc_with(g: &AbcGraph, opts: OspgOptions) -> OspgRun {
    let mut counters = WorkCounters {
        abc_edges: g.edge_count() as u64,
        ..WorkCounters::default()
    };
    let reach = compute_bounded_reach(g, &mut counters);
    let cap = reach.cap();
    let split = split_light_heavy(reach, g.edge_count()).expect("cap derived from the same graph");
    let mut pairs = eval_light(g, &split, &mut counters);
    pairs.extend_from(&eval_heavy(g, &split, &mut counters, opts.parallel_heavy));
    OspgRun {
        abc_out: pairs.len(),
        abc_vertices: g.vertex_count(),
        abc_b_edges: g.b_edge_count(),
        cap,
        pairs,
        counters,
    }
}

pub fn eval_abc(g: &AbcGraph) -> PairSet {
    eval_abc_with(g, OspgOptions::default()).pairs
}

/// Restrict, reduce, evaluate, project. Pairs are over `g`'s vertex ids.
pub fn eval_nfa_with(g: &LabeledGraph, m: &Nfa, opts: OspgOptions) -> (OspgRun, AbcGraph) {
    let keep: Vec<&str> = m.symbols().iter().map(String::as_str).collect();
    let (restricted, back) = restrict_alphabet_mapped(g, &keep);
    let abc = build_abc_graph(&restricted, m);
    let mut run = eval_abc_with(&abc, opts);
    run.pairs = project_output(&run.pairs, &abc).map_vertices(|v| back[v.index()]);
    (run, abc)
}

pub fn eval_rpq_with(g: &LabeledGraph, q: &Rpq, opts: OspgOptions) -> OspgRun {
    eval_nfa_with(g, &compile(q), opts).0
}

/// The answer set of `q` on `g`.
pub fn eval_rpq(g: &LabeledGraph, q: &Rpq) -> PairSet {
    eval_rpq_with(g, q, OspgOptions::default()).pairs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_path, gen_two_cycles};
    use crate::graph::load_edge_list_str;
    use crate::regex::parse;

    fn direct(text: &str) -> AbcGraph {
        AbcGraph::from_labeled(&load_edge_list_str(text).unwrap()).unwrap()
    }

    fn id(g: &AbcGraph, name: &str) -> VertexId {
        g.graph().vertex_id(name).unwrap()
    }

    #[test]
    fn isqrt_exact() {
        for n in 0..10_000usize {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n, "{n}");
        }
    }

    // (b*c)-reachability by hand on this instance: 2 -c-> 3, 4 -c-> 3, and
    // 1 -b-> 2, 2 -b-> 4 only ever lead to 3.
    const FOUR: &str = "1\tb\t2\n2\tc\t3\n2\tb\t4\n4\tc\t3\n";

    #[test]
    fn four_vertex_reach_lists() {
        let g = direct(FOUR);
        let mut c = WorkCounters::default();
        let r = compute_bounded_reach(&g, &mut c);
        assert_eq!(r.cap(), 3);
        let three = id(&g, "3");
        for v in ["1", "2", "4"] {
            assert_eq!(r.list(id(&g, v)), &[three], "vertex {v}");
        }
        assert!(r.list(three).is_empty());
        assert!(c.step1_edge_checks <= (g.b_edge_count() * r.cap()) as u64);
    }

    #[test]
    fn four_vertex_light_join() {
        let mut text = FOUR.to_string();
        for v in 1..=4 {
            text.push_str(&format!("{v}\ta\t{v}\n"));
        }
        let g = direct(&text);
        let mut c = WorkCounters::default();
        let r = compute_bounded_reach(&g, &mut c);
        let s = split_light_heavy(r, g.edge_count()).unwrap();
        let ql = eval_light(&g, &s, &mut c);
        let three = id(&g, "3");
        let expected: PairSet = ["1", "2", "4"].iter().map(|v| (id(&g, v), three)).collect();
        assert_eq!(ql, expected);
        assert_eq!(c.light_join_lookups, 4);
    }

    #[test]
    fn path_lists_empty() {
        let g = gen_path(50, "b").unwrap();
        let m = compile(&parse("b*c").unwrap());
        let abc = build_abc_graph(&g, &m);
        let mut c = WorkCounters::default();
        let r = compute_bounded_reach(&abc, &mut c);
        assert_eq!(r.size(), 0);
        assert_eq!(c.step1_edge_checks, 0);
        assert!(eval_rpq(&g, &parse("b*c").unwrap()).is_empty());
    }

    #[test]
    fn two_cycles_reduced_graph_lists() {
        let n = 12;
        let g = gen_two_cycles(n).unwrap();
        let m = crate::automaton::load_automaton_str(
            "state q0\nstate q1\nstate q2\nstart q0\nfinal q2\ntrans q0 a q1\ntrans q1 b q1\ntrans q1 c q2\n",
        )
        .unwrap();
        let abc = build_abc_graph(&g, &m);
        let mut c = WorkCounters::default();
        let r = compute_bounded_reach(&abc, &mut c);
        let q1 = m.state_id("q1").unwrap();
        for x in abc.graph().vertices() {
            let name = g.vertex_name(abc.origin(x));
            if name.ends_with('\'') {
                if abc.state(x) == q1 {
                    assert_eq!(r.degree(x), r.cap(), "{name}");
                }
            } else {
                assert_eq!(r.degree(x), 0, "{name}");
            }
        }
    }

    #[test]
    fn two_cycles_direct_split() {
        let g = gen_two_cycles(10).unwrap();
        let abc = AbcGraph::from_labeled(&g).unwrap();
        let mut c = WorkCounters::default();
        let r = compute_bounded_reach(&abc, &mut c);
        let s = split_light_heavy(r, abc.edge_count()).unwrap();
        assert_eq!(s.light_pairs().count(), 0);
        let heavy: Vec<_> = s
            .heavy_vertices()
            .map(|x| g.vertex_name(x).to_owned())
            .collect();
        assert_eq!(heavy.len(), 10);
        assert!(heavy.iter().all(|n| n.ends_with('\'')));
        assert!(heavy_sources(&abc, &s).is_empty());
        assert!(eval_light(&abc, &s, &mut c).is_empty());
        assert!(eval_heavy(&abc, &s, &mut c, false).is_empty());
        assert_eq!(c.heavy_sources, 0);
    }

    #[test]
    fn split_threshold_boundary() {
        // e_count = 9: threshold 3, cap 4.
        let r = ReachMap {
            cap: 4,
            lists: vec![vec![VertexId(5)], (0..4).map(VertexId).collect(), vec![]],
        };
        let s = split_light_heavy(r, 9).unwrap();
        assert_eq!(s.class(VertexId(0)), VertexClass::Light);
        assert_eq!(s.light_pairs().count(), 1);
        assert_eq!(s.class(VertexId(1)), VertexClass::Heavy);
        assert_eq!(s.class(VertexId(2)), VertexClass::Empty);
    }

    #[test]
    fn split_rejects_cap_mismatch() {
        let r = ReachMap {
            cap: 3,
            lists: vec![],
        };
        assert!(matches!(split_light_heavy(r, 9), Err(Error::Contract(_))));
    }

    #[test]
    fn split_all_empty() {
        let r = ReachMap {
            cap: 2,
            lists: vec![vec![]; 4],
        };
        let s = split_light_heavy(r, 1).unwrap();
        assert_eq!(s.light_pairs().count(), 0);
        assert_eq!(s.heavy_vertices().count(), 0);
    }

    #[test]
    fn self_loop_light_join() {
        let g = direct("z\ta\tz\nz\tc\ty\n");
        let mut c = WorkCounters::default();
        let r = compute_bounded_reach(&g, &mut c);
        let s = split_light_heavy(r, g.edge_count()).unwrap();
        let q = eval_light(&g, &s, &mut c);
        assert!(q.contains(id(&g, "z"), id(&g, "y")));
    }

    /// Hub `h` with an a-loop and b-edges to targets `t0..tk`, each with a
    /// c-loop. `h` reaches every target, exceeding the light threshold.
    fn star(k: usize) -> String {
        let mut s = String::from("h\ta\th\n");
        for i in 0..k {
            s.push_str(&format!("h\tb\tt{i}\nt{i}\tc\tt{i}\n"));
        }
        s
    }

    #[test]
    fn star_hub_is_heavy() {
        let k = 12;
        let g = direct(&star(k));
        // |E'| = 1 + 2k = 25, threshold 5, cap 6 < k.
        let mut c = WorkCounters::default();
        let r = compute_bounded_reach(&g, &mut c);
        assert_eq!(r.cap(), 6);
        let s = split_light_heavy(r, g.edge_count()).unwrap();
        let h = id(&g, "h");
        assert!(s.is_heavy(h));
        assert_eq!(heavy_sources(&g, &s), vec![h]);
        let qh = eval_heavy(&g, &s, &mut c, false);
        let expected: PairSet = (0..k).map(|i| (h, id(&g, &format!("t{i}")))).collect();
        assert_eq!(qh, expected);
        assert_eq!(c.heavy_sources, 1);
        assert_eq!(c.heavy_bfs_edge_visits, 2 * k as u64);
        assert_eq!(eval_abc(&g), expected);

        let mut c2 = WorkCounters::default();
        let s2 = split_light_heavy(compute_bounded_reach(&g, &mut c2), g.edge_count()).unwrap();
        assert_eq!(eval_heavy(&g, &s2, &mut c2, true), expected);
        assert_eq!(c2, c);
    }

    #[test]
    fn empty_heavy_set() {
        let g = direct("1\tc\t2\n");
        let mut c = WorkCounters::default();
        let s = split_light_heavy(compute_bounded_reach(&g, &mut c), g.edge_count()).unwrap();
        assert!(eval_heavy(&g, &s, &mut c, false).is_empty());
    }

    #[test]
    fn one_edge_query() {
        let g = load_edge_list_str("1\td\t2\n").unwrap();
        let out = eval_rpq(&g, &parse("d").unwrap());
        let expected: PairSet = [(g.vertex_id("1").unwrap(), g.vertex_id("2").unwrap())]
            .into_iter()
            .collect();
        assert_eq!(out, expected);
    }
}
