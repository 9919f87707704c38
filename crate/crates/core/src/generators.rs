//! Synthetic instances: the path and two-cycle families, and seeded random
//! graphs and queries.
//!
//! Random streams come from ChaCha8 (`rand_chacha`), whose output is fixed by
//! the seed on every platform.

use rand::seq::index;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, LabeledGraph};
use crate::regex::{Rpq, RpqAst, SymbolId};

/// Vertices `1..=n`, edges `(i, label, i+1)` for `i < n`.
pub fn gen_path(n: usize, label: &str) -> Result<LabeledGraph> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "path length must be at least 1".into(),
        ));
    }
    let mut b = GraphBuilder::new();
    for i in 1..n {
        b.add_edge(&i.to_string(), label, &(i + 1).to_string());
    }
    Ok(b.build())
}

/// Cycle `1..=n` carrying `a` and `b` edges and cycle `1'..=n'` carrying `b`
/// and `c` edges, each between consecutive vertices with wrap-around.
pub fn gen_two_cycles(n: usize) -> Result<LabeledGraph> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "two-cycles size must be at least 2".into(),
        ));
    }
    let mut b = GraphBuilder::new();
    for i in 1..=n {
        let j = i % n + 1;
        let (u, v) = (i.to_string(), j.to_string());
        b.add_edge(&u, "a", &v);
        b.add_edge(&u, "b", &v);
    }
    for i in 1..=n {
        let j = i % n + 1;
        let (u, v) = (format!("{i}'"), format!("{j}'"));
        b.add_edge(&u, "b", &v);
        b.add_edge(&u, "c", &v);
    }
    Ok(b.build())
}

/// `e` distinct edges drawn uniformly from `{1..v} × alphabet × {1..v}`.
pub fn gen_random(v: usize, e: usize, alphabet: &[&str], seed: u64) -> Result<LabeledGraph> {
    let space = v
        .checked_mul(v)
        .and_then(|x| x.checked_mul(alphabet.len()))
        .ok_or_else(|| Error::InvalidArgument("random graph space overflows".into()))?;
    if e > space {
        return Err(Error::InvalidArgument(format!(
            "cannot draw {e} distinct edges from {space} candidates"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picks = index::sample(&mut rng, space, e).into_vec();
    picks.sort_unstable();
    let mut b = GraphBuilder::new();
    let per_src = v * alphabet.len();
    for i in picks {
        let src = i / per_src;
        let label = (i % per_src) / v;
        let dst = i % v;
        b.add_edge(
            &(src + 1).to_string(),
            alphabet[label],
            &(dst + 1).to_string(),
        );
    }
    Ok(b.build())
}

/// Random query over `alphabet` with nesting depth at most `max_depth`.
/// Only the symbols that occur end up in the query's symbol table.
pub fn gen_random_ast<R: Rng + ?Sized>(rng: &mut R, max_depth: usize, alphabet: &[&str]) -> Rpq {
    assert!(!alphabet.is_empty(), "alphabet must be non-empty");
    let ast = random_node(rng, max_depth, alphabet.len());
    let mut used: Vec<Option<u32>> = vec![None; alphabet.len()];
    let mut symbols = Vec::new();
    let ast = remap(ast, &mut |s| {
        *used[s.0 as usize].get_or_insert_with(|| {
            symbols.push(alphabet[s.0 as usize].to_owned());
            symbols.len() as u32 - 1
        })
    });
    Rpq::new(ast, symbols)
}

fn random_node<R: Rng + ?Sized>(rng: &mut R, depth: usize, k: usize) -> RpqAst {
    if depth <= 1 || rng.gen_bool(0.3) {
        return RpqAst::Symbol(SymbolId(rng.gen_range(0..k) as u32));
    }
    match rng.gen_range(0..3) {
        0 => {
            let arity = rng.gen_range(2..=3);
            RpqAst::concat((0..arity).map(|_| random_node(rng, depth - 1, k)).collect())
        }
        1 => {
            let arity = rng.gen_range(2..=3);
            RpqAst::union((0..arity).map(|_| random_node(rng, depth - 1, k)).collect())
        }
        _ => RpqAst::star(random_node(rng, depth - 1, k)),
    }
}

fn remap(node: RpqAst, f: &mut impl FnMut(SymbolId) -> u32) -> RpqAst {
    match node {
        RpqAst::Symbol(s) => RpqAst::Symbol(SymbolId(f(s))),
        RpqAst::Epsilon => RpqAst::Epsilon,
        RpqAst::Concat(cs) => RpqAst::Concat(cs.into_iter().map(|c| remap(c, f)).collect()),
        RpqAst::Union(cs) => RpqAst::Union(cs.into_iter().map(|c| remap(c, f)).collect()),
        RpqAst::Star(c) => RpqAst::Star(Box::new(remap(*c, f))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_of_three() {
        let g = gen_path(3, "b").unwrap();
        assert_eq!(g.to_edge_list_string(), "1\tb\t2\n2\tb\t3\n");
    }

    #[test]
    fn degenerate_path() {
        let g = gen_path(1, "b").unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.vertex_count(), 0);
        assert!(gen_path(0, "b").is_err());
        assert_eq!(gen_path(1000, "b").unwrap().edge_count(), 999);
    }

    #[test]
    fn two_cycles_sizes() {
        let g = gen_two_cycles(6).unwrap();
        assert_eq!(g.vertex_count(), 12);
        assert_eq!(g.edge_count(), 24);
        assert_eq!(gen_two_cycles(2).unwrap().edge_count(), 8);
        assert!(gen_two_cycles(1).is_err());
    }

    #[test]
    fn two_cycles_shape() {
        let g = gen_two_cycles(3).unwrap();
        let id = |s: &str| g.vertex_id(s).unwrap();
        let a = g.label_id("a").unwrap();
        let c = g.label_id("c").unwrap();
        assert!(g.has_edge(id("3"), a, id("1")));
        assert!(g.has_edge(id("3'"), c, id("1'")));
        assert!(!g.has_edge(id("1"), c, id("2")));
    }

    #[test]
    fn random_is_deterministic() {
        let a = gen_random(5, 10, &["a", "b"], 42).unwrap();
        let b = gen_random(5, 10, &["a", "b"], 42).unwrap();
        assert_eq!(a.to_edge_list_string(), b.to_edge_list_string());
        assert_eq!(a.edge_count(), 10);
        assert_ne!(
            a.to_edge_list_string(),
            gen_random(5, 10, &["a", "b"], 43)
                .unwrap()
                .to_edge_list_string()
        );
    }

    #[test]
    fn random_edge_cases() {
        assert_eq!(gen_random(5, 0, &["a"], 7).unwrap().edge_count(), 0);
        assert_eq!(gen_random(2, 8, &["a", "b"], 7).unwrap().edge_count(), 8);
        assert!(gen_random(2, 9, &["a", "b"], 7).is_err());
    }

    #[test]
    fn random_ast_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let q = gen_random_ast(&mut rng, 4, &["a", "b", "c"]);
            assert!(q.ast.depth() <= 4, "{q}");
            assert!(!q.symbols.is_empty() && q.symbols.len() <= 3);
        }
    }
}
