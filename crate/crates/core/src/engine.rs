//! Uniform dispatch over the four evaluation engines.

use std::fmt;
use std::str::FromStr;

use crate::automaton::{compile, Nfa};
use crate::baseline::{eval_pg_bidirectional_nfa, eval_pg_nfa};
use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, PairSet, VertexId};
use crate::oracle::{eval_matrix_nfa, eval_matrix_traced};
use crate::ospg::{eval_nfa_with, OspgOptions};
use crate::regex::Rpq;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Engine {
    Ospg,
    Pg,
    PgBidi,
    Oracle,
}

impl Engine {
    pub const ALL: [Engine; 4] = [Engine::Ospg, Engine::Pg, Engine::PgBidi, Engine::Oracle];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Ospg => "ospg",
            Engine::Pg => "pg",
            Engine::PgBidi => "pg-bidi",
            Engine::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Engine::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown engine '{s}' (expected ospg, pg, pg-bidi or oracle)"
                ))
            })
    }
}

/// A query given either as an expression or directly as an automaton.
#[derive(Clone, Debug)]
pub enum Query {
    Regex(Rpq),
    Automaton(Nfa),
}

impl Query {
    pub fn nfa(&self) -> Nfa {
        match self {
            Query::Regex(q) => compile(q),
            Query::Automaton(m) => m.clone(),
        }
    }
}

impl From<Rpq> for Query {
    fn from(q: Rpq) -> Self {
        Query::Regex(q)
    }
}

impl From<Nfa> for Query {
    fn from(m: Nfa) -> Self {
        Query::Automaton(m)
    }
}

#[derive(Clone, Debug, Default)]
pub struct EngineRun {
    pub pairs: PairSet,
    pub counters: Vec<(&'static str, u64)>,
}

impl EngineRun {
    pub fn counter(&self, name: &str) -> Option<u64> {
        self.counters
            .iter()
            .find(|(n, _)| *n == name)
            .map(|&(_, v)| v)
    }

    pub fn total_work(&self) -> u64 {
        self.counters.iter().map(|&(_, v)| v).sum()
    }
}

pub fn evaluate(engine: Engine, g: &LabeledGraph, query: &Query) -> Result<EngineRun> {
    let run = match engine {
        Engine::Ospg => {
            let (run, _) = eval_nfa_with(g, &query.nfa(), OspgOptions::default());
            EngineRun {
                counters: run.counters.entries().to_vec(),
                pairs: run.pairs,
            }
        }
        Engine::Pg => {
            let (pairs, c) = eval_pg_nfa(g, &query.nfa());
            EngineRun {
                pairs,
                counters: c.entries().to_vec(),
            }
        }
        Engine::PgBidi => {
            let (pairs, c) = eval_pg_bidirectional_nfa(g, &query.nfa());
            EngineRun {
                pairs,
                counters: c.entries().to_vec(),
            }
        }
        Engine::Oracle => match query {
            Query::Regex(q) => {
                let (pairs, trace) = eval_matrix_traced(g, q)?;
                EngineRun {
                    pairs,
                    counters: vec![
                        ("matrix_vertices", trace.vertices as u64),
                        (
                            "star_rounds",
                            trace.star_rounds.iter().sum::<usize>() as u64,
                        ),
                    ],
                }
            }
            Query::Automaton(m) => EngineRun {
                pairs: eval_matrix_nfa(g, m)?,
                counters: Vec::new(),
            },
        },
    };
    Ok(run)
}

/// One disagreement between two engines.
#[derive(Clone, Debug)]
pub struct Mismatch {
    pub left: Engine,
    pub right: Engine,
    pub only_left: Vec<(VertexId, VertexId)>,
    pub only_right: Vec<(VertexId, VertexId)>,
}

/// Compares every result against the first one.
pub fn compare(results: &[(Engine, PairSet)]) -> Vec<Mismatch> {
    let Some((base_engine, base)) = results.first() else {
        return Vec::new();
    };
    results[1..]
        .iter()
        .filter(|(_, p)| p != base)
        .map(|(e, p)| Mismatch {
            left: *base_engine,
            right: *e,
            only_left: base.iter().filter(|&(a, b)| !p.contains(a, b)).collect(),
            only_right: p.iter().filter(|&(a, b)| !base.contains(a, b)).collect(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::load_edge_list_str;
    use crate::regex::parse;

    #[test]
    fn names_round_trip() {
        for e in Engine::ALL {
            assert_eq!(e.name().parse::<Engine>().unwrap(), e);
        }
        assert!("bogus".parse::<Engine>().is_err());
    }

    #[test]
    fn engines_agree_on_small_graph() {
        let g = load_edge_list_str("1\ta\t2\n2\tb\t3\n3\tb\t2\n2\tc\t4\n").unwrap();
        let q: Query = parse("ab*c").unwrap().into();
        let results: Vec<_> = Engine::ALL
            .iter()
            .map(|&e| (e, evaluate(e, &g, &q).unwrap().pairs))
            .collect();
        assert!(compare(&results).is_empty());
        assert_eq!(results[0].1.len(), 1);
    }

    #[test]
    fn mismatch_is_reported() {
        let g = load_edge_list_str("1\ta\t2\n").unwrap();
        let q: Query = parse("a").unwrap().into();
        let good = evaluate(Engine::Pg, &g, &q).unwrap().pairs;
        let mut bad = good.clone();
        bad.insert(VertexId(1), VertexId(0));
        let diff = compare(&[(Engine::Pg, good), (Engine::Ospg, bad)]);
        assert_eq!(diff.len(), 1);
        assert_eq!(diff[0].only_right, vec![(VertexId(1), VertexId(0))]);
        assert!(diff[0].only_left.is_empty());
    }
}
