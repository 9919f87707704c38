//! Reference evaluation by interpreting the query in the boolean matrix
//! semiring.
//!
//! A symbol maps to the adjacency matrix of its edges, concatenation to the
//! boolean product, union to elementwise or, and `A*` to the reflexive
//! transitive closure of `A`, computed by squaring `I ∨ A` until it stops
//! changing. `(I ∨ A)^(2^k)` covers every walk of length at most `2^k`, so the
//! squaring stabilizes after at most `⌈log₂ n⌉ + 1` rounds.
//!
//! The answer is independent of the automaton machinery used by the engines.
//! Tests validate it in turn against exhaustive walk enumeration up to length
//! `|V|·|V_Q|`: any matching pair is witnessed by a walk that visits each
//! product vertex at most once, and there are `|V|·|V_Q|` of them.

use crate::automaton::Nfa;
use crate::error::{Error, Result};
use crate::graph::{restrict_alphabet_mapped, LabeledGraph, PairSet, VertexId};
use crate::regex::{Rpq, RpqAst};

pub const MAX_ORACLE_VERTICES: usize = 4096;

/// Dense square boolean matrix, 64 columns per word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitMatrix {
            n,
            words,
            data: vec![0; n * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) {
        self.data[i * self.words + j / 64] |= 1 << (j % 64);
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    pub fn or(&self, other: &BitMatrix) -> BitMatrix {
        BitMatrix {
            n: self.n,
            words: self.words,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.n);
        for i in 0..self.n {
            let dst = i * self.words;
            for k in 0..self.n {
                if self.get(i, k) {
                    let src = other.row(k);
                    for (w, &bits) in src.iter().enumerate() {
                        out.data[dst + w] |= bits;
                    }
                }
            }
        }
        out
    }

    /// Reflexive transitive closure by repeated squaring of `I ∨ self`.
    /// Returns the closure and the number of squarings performed.
    pub fn star(&self) -> (BitMatrix, usize) {
        let mut x = BitMatrix::identity(self.n).or(self);
        let mut rounds = 0;
        loop {
            let next = x.mul(&x);
            rounds += 1;
            if next == x {
                return (x, rounds);
            }
            x = next;
        }
    }

    pub fn ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| {
            (0..self.n)
                .filter(move |&j| self.get(i, j))
                .map(move |j| (i, j))
        })
    }
}

/// Trace of one oracle evaluation.
#[derive(Clone, Debug, Default)]
pub struct OracleTrace {
    /// Squaring rounds used by each star node, in evaluation order.
    pub star_rounds: Vec<usize>,
    pub vertices: usize,
}

fn interpret(node: &RpqAst, q: &Rpq, g: &LabeledGraph, trace: &mut OracleTrace) -> BitMatrix {
    let n = g.vertex_count();
    match node {
        RpqAst::Symbol(s) => {
            let mut m = BitMatrix::zeros(n);
            if let Some(l) = g.label_id(q.symbol_name(*s)) {
                for e in g.edges().iter().filter(|e| e.label == l) {
                    m.set(e.src.index(), e.dst.index());
                }
            }
            m
        }
        RpqAst::Epsilon => BitMatrix::identity(n),
        RpqAst::Concat(cs) => cs
            .iter()
            .map(|c| interpret(c, q, g, trace))
            .reduce(|a, b| a.mul(&b))
            .expect("concat has children"),
        RpqAst::Union(cs) => cs
            .iter()
            .map(|c| interpret(c, q, g, trace))
            .reduce(|a, b| a.or(&b))
            .expect("union has children"),
        RpqAst::Star(c) => {
            let (closure, rounds) = interpret(c, q, g, trace).star();
            trace.star_rounds.push(rounds);
            closure
        }
    }
}

/// Evaluates `q` on `g` with dense matrices. Pairs are over `g`'s vertex ids.
pub fn eval_matrix_traced(g: &LabeledGraph, q: &Rpq) -> Result<(PairSet, OracleTrace)> {
    let (restricted, back) = restrict_alphabet_mapped(g, &q.symbol_names());
    let n = restricted.vertex_count();
    if n > MAX_ORACLE_VERTICES {
        return Err(Error::Capacity {
            vertices: n,
            limit: MAX_ORACLE_VERTICES,
        });
    }
    let mut trace = OracleTrace {
        vertices: n,
        ..OracleTrace::default()
    };
    let m = interpret(&q.ast, q, &restricted, &mut trace);
    let pairs = m
        .ones()
        .map(|(i, j)| (back[i], back[j]))
        .collect::<PairSet>();
    Ok((pairs, trace))
}

pub fn eval_matrix(g: &LabeledGraph, q: &Rpq) -> Result<PairSet> {
    eval_matrix_traced(g, q).map(|(p, _)| p)
}

/// Evaluates an automaton on `g` with dense matrices, using Kleene's
/// state-elimination recurrence: `R[p][q]` starts as the union of the
/// adjacency matrices of the symbols on `p → q` transitions, and eliminating
/// state `k` adds `R[p][k] · R[k][k]* · R[k][q]`. The answer is the union of
/// `R[s][f]` over start `s` and final `f`, plus the identity when `ε ∈ L(M)`.
pub fn eval_matrix_nfa(g: &LabeledGraph, m: &Nfa) -> Result<PairSet> {
    let keep: Vec<&str> = m.symbols().iter().map(String::as_str).collect();
    let (restricted, back) = restrict_alphabet_mapped(g, &keep);
    let n = restricted.vertex_count();
    if n > MAX_ORACLE_VERTICES {
        return Err(Error::Capacity {
            vertices: n,
            limit: MAX_ORACLE_VERTICES,
        });
    }
    let k = m.state_count();
    let mut r = vec![BitMatrix::zeros(n); k * k];
    for t in m.transitions() {
        if let Some(l) = restricted.label_id(&m.symbols()[t.symbol as usize]) {
            let cell = &mut r[t.from.index() * k + t.to.index()];
            for e in restricted.edges().iter().filter(|e| e.label == l) {
                cell.set(e.src.index(), e.dst.index());
            }
        }
    }
    for mid in 0..k {
        let (loop_star, _) = r[mid * k + mid].star();
        let through: Vec<BitMatrix> = (0..k).map(|q| loop_star.mul(&r[mid * k + q])).collect();
        let into: Vec<BitMatrix> = (0..k).map(|p| r[p * k + mid].clone()).collect();
        for p in 0..k {
            for q in 0..k {
                let add = into[p].mul(&through[q]);
                r[p * k + q] = r[p * k + q].or(&add);
            }
        }
    }
    let mut acc = if m.accepts_empty() {
        BitMatrix::identity(n)
    } else {
        BitMatrix::zeros(n)
    };
    for &s in m.start_states() {
        for f in m.final_states() {
            acc = acc.or(&r[s.index() * k + f.index()]);
        }
    }
    Ok(acc.ones().map(|(i, j)| (back[i], back[j])).collect())
}

/// Transitive closure of the edges of `g`, labels ignored.
pub fn matrix_closure(n: usize, edges: &[(VertexId, VertexId)]) -> PairSet {
    let mut m = BitMatrix::zeros(n);
    for &(a, b) in edges {
        m.set(a.index(), b.index());
    }
    // A+ = A · A*
    let (star, _) = m.star();
    m.mul(&star)
        .ones()
        .map(|(i, j)| (VertexId(i as u32), VertexId(j as u32)))
        .collect()
}
