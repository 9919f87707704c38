#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rpq::automaton::{compile, Nfa, StateId};
use rpq::generators::{gen_random, gen_random_ast};
use rpq::graph::{LabeledGraph, PairSet, VertexId};
use rpq::regex::{Rpq, RpqAst};

pub const ALPHABET: [&str; 3] = ["a", "b", "c"];

/// Random instance: 1..=8 vertices, up to 20 edges over 1..=3 symbols, and a
/// query of depth at most 4 over the same symbols.
pub fn suite_instance(seed: u64) -> (LabeledGraph, Rpq) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(1..=3);
    let alphabet = &ALPHABET[..k];
    let v = rng.gen_range(1..=8);
    let e = rng.gen_range(0..=(v * v * k).min(20));
    let g = gen_random(v, e, alphabet, seed).unwrap();
    let q = gen_random_ast(&mut rng, 4, alphabet);
    (g, q)
}

/// End positions `j` such that `word[i..j]` matches `node`.
fn ends(node: &RpqAst, q: &Rpq, word: &[&str], i: usize) -> BTreeSet<usize> {
    match node {
        RpqAst::Epsilon => [i].into(),
        RpqAst::Symbol(s) => {
            if i < word.len() && word[i] == q.symbol_name(*s) {
                [i + 1].into()
            } else {
                BTreeSet::new()
            }
        }
        RpqAst::Union(cs) => cs.iter().flat_map(|c| ends(c, q, word, i)).collect(),
        RpqAst::Concat(cs) => cs.iter().fold([i].into(), |acc: BTreeSet<usize>, c| {
            acc.iter().flat_map(|&j| ends(c, q, word, j)).collect()
        }),
        RpqAst::Star(c) => {
            let mut seen: BTreeSet<usize> = [i].into();
            let mut todo = vec![i];
            while let Some(j) = todo.pop() {
                for k in ends(c, q, word, j) {
                    if seen.insert(k) {
                        todo.push(k);
                    }
                }
            }
            seen
        }
    }
}

/// Direct backtracking-free matcher over the syntax tree.
pub fn regex_matches(q: &Rpq, word: &[&str]) -> bool {
    ends(&q.ast, q, word, 0).contains(&word.len())
}

/// All words over `alphabet` of length at most `max_len`.
pub fn all_words<'a>(alphabet: &[&'a str], max_len: usize) -> Vec<Vec<&'a str>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<&'a str>| {
                alphabet.iter().map(move |s| {
                    let mut w = w.clone();
                    w.push(*s);
                    w
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Pairs `(v,u)` joined by a walk of length at most `|V|·|V_Q|` whose label
/// word the automaton accepts. Walks are explored one symbol at a time while
/// tracking the set of automaton states the word so far can reach, so equal
/// (vertex, state set) prefixes are explored once.
pub fn walk_enumeration(g: &LabeledGraph, q: &Rpq) -> PairSet {
    let m: Nfa = compile(q);
    let max_len = g.vertex_count() * m.state_count().max(1);
    let mut out = PairSet::new();
    for v in g.vertices() {
        let start: BTreeSet<StateId> = m.start_states().iter().copied().collect();
        let mut seen: HashSet<(VertexId, BTreeSet<StateId>)> = HashSet::new();
        let mut queue = VecDeque::from([(v, start.clone(), 0usize)]);
        seen.insert((v, start));
        while let Some((x, states, len)) = queue.pop_front() {
            if states.iter().any(|&s| m.is_final(s)) {
                out.insert(v, x);
            }
            if len == max_len {
                continue;
            }
            for e in g.edges().iter().filter(|e| e.src == x) {
                let next = m.step(&states, g.label_name(e.label));
                if !next.is_empty() && seen.insert((e.dst, next.clone())) {
                    queue.push_back((e.dst, next, len + 1));
                }
            }
        }
    }
    // Only vertices of the query's sub-alphabet can match the empty word.
    let keep: Vec<&str> = q.symbol_names();
    let used: BTreeSet<VertexId> = g
        .edges()
        .iter()
        .filter(|e| keep.contains(&g.label_name(e.label)))
        .flat_map(|e| [e.src, e.dst])
        .collect();
    out.iter()
        .filter(|&(a, b)| a != b || used.contains(&a))
        .collect()
}
