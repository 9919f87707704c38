//! ε-free nondeterministic automata.
//!
//! [`compile`] runs a Thompson construction and then removes ε-transitions
//! with forward closures: the start set becomes the ε-closure of the Thompson
//! start state and every symbol transition `q -σ-> r` is replaced by
//! `q -σ-> r'` for each `r'` in the closure of `r`. States that are not both
//! reachable from a start state and co-reachable to a final state are pruned.
//! The language is unchanged and `ε ∈ L` exactly when some start state is
//! also final.

use std::collections::{BTreeSet, HashMap};
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::regex::{Rpq, RpqAst};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

impl StateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub from: StateId,
    /// Index into [`Nfa::symbols`].
    pub symbol: u32,
    pub to: StateId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    state_names: Vec<String>,
    symbols: Vec<String>,
    start: Vec<StateId>,
    is_final: Vec<bool>,
    transitions: Vec<Transition>,
}

impl Nfa {
    /// Builds an automaton from explicit parts. Transitions are sorted and
    /// deduplicated; start states are sorted.
    pub fn from_parts(
        state_names: Vec<String>,
        symbols: Vec<String>,
        start: impl IntoIterator<Item = StateId>,
        finals: impl IntoIterator<Item = StateId>,
        transitions: impl IntoIterator<Item = Transition>,
    ) -> Nfa {
        let n = state_names.len();
        let start: BTreeSet<StateId> = start.into_iter().collect();
        let mut is_final = vec![false; n];
        for f in finals {
            is_final[f.index()] = true;
        }
        let transitions: BTreeSet<Transition> = transitions.into_iter().collect();
        for t in &transitions {
            assert!(
                t.from.index() < n && t.to.index() < n,
                "transition outside state set"
            );
            assert!(
                (t.symbol as usize) < symbols.len(),
                "transition symbol out of range"
            );
        }
        Nfa {
            state_names,
            symbols,
            start: start.into_iter().collect(),
            is_final,
            transitions: transitions.into_iter().collect(),
        }
    }

    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.state_names[q.index()]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_names
            .iter()
            .position(|n| n == name)
            .map(|i| StateId(i as u32))
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol_index(&self, name: &str) -> Option<u32> {
        self.symbols
            .iter()
            .position(|s| s == name)
            .map(|i| i as u32)
    }

    pub fn start_states(&self) -> &[StateId] {
        &self.start
    }

    pub fn is_start(&self, q: StateId) -> bool {
        self.start.binary_search(&q).is_ok()
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.is_final[q.index()]
    }

    pub fn final_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.is_final
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(|(i, _)| StateId(i as u32))
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// True when the empty word is accepted.
    pub fn accepts_empty(&self) -> bool {
        self.start.iter().any(|&q| self.is_final(q))
    }

    /// One step of subset simulation.
    pub fn step(&self, current: &BTreeSet<StateId>, symbol: &str) -> BTreeSet<StateId> {
        let Some(sym) = self.symbol_index(symbol) else {
            return BTreeSet::new();
        };
        self.transitions
            .iter()
            .filter(|t| t.symbol == sym && current.contains(&t.from))
            .map(|t| t.to)
            .collect()
    }

    /// Word membership by subset simulation. A word containing a symbol the
    /// automaton does not know is rejected.
    pub fn accepts<S: AsRef<str>>(&self, word: &[S]) -> bool {
        let mut current: BTreeSet<StateId> = self.start.iter().copied().collect();
        for s in word {
            current = self.step(&current, s.as_ref());
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|&q| self.is_final(q))
    }
}

pub fn accepts<S: AsRef<str>>(m: &Nfa, word: &[S]) -> bool {
    m.accepts(word)
}

/// Thompson automaton with ε-edges (`None` symbol).
struct Thompson {
    edges: Vec<(usize, Option<u32>, usize)>,
    states: usize,
}

impl Thompson {
    fn fresh(&mut self) -> usize {
        self.states += 1;
        self.states - 1
    }

    /// Returns the (entry, exit) pair of the fragment for `node`.
    fn build(&mut self, node: &RpqAst) -> (usize, usize) {
        match node {
            RpqAst::Symbol(s) => {
                let (i, f) = (self.fresh(), self.fresh());
                self.edges.push((i, Some(s.0), f));
                (i, f)
            }
            RpqAst::Epsilon => {
                let (i, f) = (self.fresh(), self.fresh());
                self.edges.push((i, None, f));
                (i, f)
            }
            RpqAst::Concat(children) => {
                let mut frags = children.iter().map(|c| self.build(c)).collect::<Vec<_>>();
                for w in frags.windows(2) {
                    self.edges.push((w[0].1, None, w[1].0));
                }
                let first = frags.first().expect("concat has children").0;
                let last = frags.pop().expect("concat has children").1;
                (first, last)
            }
            RpqAst::Union(children) => {
                let (i, f) = (self.fresh(), self.fresh());
                for c in children {
                    let (ci, cf) = self.build(c);
                    self.edges.push((i, None, ci));
                    self.edges.push((cf, None, f));
                }
                (i, f)
            }
            RpqAst::Star(child) => {
                let (i, f) = (self.fresh(), self.fresh());
                let (ci, cf) = self.build(child);
                self.edges.push((i, None, ci));
                self.edges.push((i, None, f));
                self.edges.push((cf, None, ci));
                self.edges.push((cf, None, f));
                (i, f)
            }
        }
    }
}

/// Compiles a parsed query into an ε-free automaton over the query's symbols.
pub fn compile(q: &Rpq) -> Nfa {
    let mut th = Thompson {
        edges: Vec::new(),
        states: 0,
    };
    let (entry, exit) = th.build(&q.ast);
    let n = th.states;

    let mut eps: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut sym: Vec<Vec<(u32, usize)>> = vec![Vec::new(); n];
    for &(from, label, to) in &th.edges {
        match label {
            None => eps[from].push(to),
            Some(s) => sym[from].push((s, to)),
        }
    }
    let closure = |q: usize| -> Vec<usize> {
        let mut seen = vec![false; n];
        let mut stack = vec![q];
        seen[q] = true;
        let mut out = Vec::new();
        while let Some(x) = stack.pop() {
            out.push(x);
            for &y in &eps[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        out
    };
    let closures: Vec<Vec<usize>> = (0..n).map(closure).collect();

    let start: Vec<usize> = closures[entry].clone();
    let mut trans: Vec<(usize, u32, usize)> = Vec::new();
    for (q, outgoing) in sym.iter().enumerate() {
        for &(s, r) in outgoing {
            for &r2 in &closures[r] {
                trans.push((q, s, r2));
            }
        }
    }

    // Prune to states both reachable and co-reachable.
    let mut fwd: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut bwd: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(q, _, r) in &trans {
        fwd[q].push(r);
        bwd[r].push(q);
    }
    let reach = |seeds: &[usize], adj: &Vec<Vec<usize>>| -> Vec<bool> {
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = seeds.to_vec();
        for &s in seeds {
            seen[s] = true;
        }
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    };
    let reachable = reach(&start, &fwd);
    let coreachable = reach(&[exit], &bwd);
    let keep: Vec<bool> = (0..n).map(|q| reachable[q] && coreachable[q]).collect();

    let mut renum = vec![u32::MAX; n];
    let mut names = Vec::new();
    for q in 0..n {
        if keep[q] {
            renum[q] = names.len() as u32;
            names.push(format!("q{}", names.len()));
        }
    }
    let id = |q: usize| StateId(renum[q]);
    Nfa::from_parts(
        names,
        q.symbols.clone(),
        start.iter().filter(|&&s| keep[s]).map(|&s| id(s)),
        keep[exit].then(|| id(exit)),
        trans
            .iter()
            .filter(|&&(a, _, b)| keep[a] && keep[b])
            .map(|&(a, s, b)| Transition {
                from: id(a),
                symbol: s,
                to: id(b),
            }),
    )
}

/// Reads the line-oriented automaton format:
///
/// ```text
/// # comment
/// state q0
/// start q0
/// final q0
/// trans q0 d q0
/// ```
///
/// States must be declared before use; at least one `start` and one `final`
/// line are required.
pub fn load_automaton<R: BufRead>(reader: R) -> Result<Nfa> {
    let err = |line: usize, message: String| Error::Automaton { line, message };
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, StateId> = HashMap::new();
    let mut symbols: Vec<String> = Vec::new();
    let mut start = Vec::new();
    let mut finals = Vec::new();
    let mut transitions = Vec::new();
    let mut saw_start = false;
    let mut saw_final = false;

    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| err(lineno, format!("undeclared state {name:?}")))
        };
        match fields.as_slice() {
            ["state", name] => {
                if index.contains_key(*name) {
                    return Err(err(lineno, format!("state {name:?} declared twice")));
                }
                index.insert((*name).to_owned(), StateId(names.len() as u32));
                names.push((*name).to_owned());
            }
            ["start", name] => {
                start.push(lookup(name)?);
                saw_start = true;
            }
            ["final", name] => {
                finals.push(lookup(name)?);
                saw_final = true;
            }
            ["trans", from, label, to] => {
                let from = lookup(from)?;
                let to = lookup(to)?;
                let symbol = match symbols.iter().position(|s| s == label) {
                    Some(s) => s as u32,
                    None => {
                        symbols.push((*label).to_owned());
                        symbols.len() as u32 - 1
                    }
                };
                transitions.push(Transition { from, symbol, to });
            }
            _ => return Err(err(lineno, format!("unrecognized line {text:?}"))),
        }
    }
    if !saw_start {
        return Err(err(0, "missing start section".into()));
    }
    if !saw_final {
        return Err(err(0, "missing final section".into()));
    }
    Ok(Nfa::from_parts(names, symbols, start, finals, transitions))
}

pub fn load_automaton_str(text: &str) -> Result<Nfa> {
    load_automaton(text.as_bytes())
}
