//! Edge-labeled directed graphs with interned vertices and labels.
//!
//! A [`LabeledGraph`] is immutable once built. Vertices receive dense ids in
//! first-appearance order and only vertices incident to at least one edge are
//! registered, so an edgeless vertex never shows up in a query answer.
//! Per-label forward and reverse adjacency is kept in CSR form.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::{BufRead, Write};

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelId(pub u32);

impl LabelId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub src: VertexId,
    pub label: LabelId,
    pub dst: VertexId,
}

/// Compressed sparse rows: `targets[offsets[v]..offsets[v + 1]]` are the
/// neighbours of `v`, sorted by id.
#[derive(Clone, Debug, Default)]
pub(crate) struct Csr {
    offsets: Vec<u32>,
    targets: Vec<VertexId>,
}

impl Csr {
    pub(crate) fn build(
        n: usize,
        pairs: impl Iterator<Item = (VertexId, VertexId)> + Clone,
    ) -> Self {
        let mut offsets = vec![0u32; n + 1];
        for (from, _) in pairs.clone() {
            offsets[from.index() + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut targets = vec![VertexId(0); offsets[n] as usize];
        for (from, to) in pairs {
            let slot = &mut cursor[from.index()];
            targets[*slot as usize] = to;
            *slot += 1;
        }
        for v in 0..n {
            targets[offsets[v] as usize..offsets[v + 1] as usize].sort_unstable();
        }
        Csr { offsets, targets }
    }

    #[inline]
    pub(crate) fn neighbors(&self, v: VertexId) -> &[VertexId] {
        let i = v.index();
        &self.targets[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    pub(crate) fn len(&self) -> usize {
        self.targets.len()
    }
}

#[derive(Clone, Debug)]
pub struct LabeledGraph {
    vertex_names: Vec<String>,
    vertex_index: HashMap<String, VertexId>,
    label_names: Vec<String>,
    label_index: HashMap<String, LabelId>,
    edges: Vec<Edge>,
    forward: Vec<Csr>,
    reverse: Vec<Csr>,
}

impl LabeledGraph {
    pub fn empty() -> Self {
        GraphBuilder::new().build()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn label_count(&self) -> usize {
        self.label_names.len()
    }

    /// Edges in ingestion order, without duplicates.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_names.len() as u32).map(VertexId)
    }

    pub fn labels(&self) -> impl Iterator<Item = LabelId> + '_ {
        (0..self.label_names.len() as u32).map(LabelId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.index()]
    }

    pub fn label_name(&self, l: LabelId) -> &str {
        &self.label_names[l.index()]
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn label_id(&self, name: &str) -> Option<LabelId> {
        self.label_index.get(name).copied()
    }

    /// Successors of `v` along `label`-edges, sorted by id.
    #[inline]
    pub fn successors(&self, label: LabelId, v: VertexId) -> &[VertexId] {
        self.forward[label.index()].neighbors(v)
    }

    /// Predecessors of `v` along `label`-edges, sorted by id.
    #[inline]
    pub fn predecessors(&self, label: LabelId, v: VertexId) -> &[VertexId] {
        self.reverse[label.index()].neighbors(v)
    }

    pub fn edges_with_label(&self, label: LabelId) -> usize {
        self.forward[label.index()].len()
    }

    pub fn has_edge(&self, src: VertexId, label: LabelId, dst: VertexId) -> bool {
        self.successors(label, src).binary_search(&dst).is_ok()
    }

    /// Writes the graph in the tab-separated edge-list format.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for e in &self.edges {
            writeln!(
                out,
                "{}\t{}\t{}",
                self.vertex_name(e.src),
                self.label_name(e.label),
                self.vertex_name(e.dst)
            )?;
        }
        Ok(())
    }

    pub fn to_edge_list_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_edge_list(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("names are UTF-8")
    }
}

/// Incrementally collects edges, interning names and dropping duplicates.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    vertex_names: Vec<String>,
    vertex_index: HashMap<String, VertexId>,
    label_names: Vec<String>,
    label_index: HashMap<String, LabelId>,
    edges: Vec<Edge>,
    seen: FxHashSet<Edge>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern_vertex(&mut self, name: &str) -> VertexId {
        if let Some(&v) = self.vertex_index.get(name) {
            return v;
        }
        let v = VertexId(self.vertex_names.len() as u32);
        self.vertex_names.push(name.to_owned());
        self.vertex_index.insert(name.to_owned(), v);
        v
    }

    pub fn intern_label(&mut self, name: &str) -> LabelId {
        if let Some(&l) = self.label_index.get(name) {
            return l;
        }
        let l = LabelId(self.label_names.len() as u32);
        self.label_names.push(name.to_owned());
        self.label_index.insert(name.to_owned(), l);
        l
    }

    /// Adds an edge between already interned ids. Returns false for a duplicate.
    pub fn add_edge_ids(&mut self, src: VertexId, label: LabelId, dst: VertexId) -> bool {
        let e = Edge { src, label, dst };
        if self.seen.insert(e) {
            self.edges.push(e);
            true
        } else {
            false
        }
    }

    pub fn add_edge(&mut self, src: &str, label: &str, dst: &str) -> bool {
        let s = self.intern_vertex(src);
        let l = self.intern_label(label);
        let d = self.intern_vertex(dst);
        self.add_edge_ids(s, l, d)
    }

    /// Finalizes the graph. Interned vertices that never received an edge are
    /// dropped and the remaining ids are compacted, preserving order.
    pub fn build(self) -> LabeledGraph {
        let GraphBuilder {
            vertex_names,
            label_names,
            label_index,
            mut edges,
            ..
        } = self;

        let mut used = vec![false; vertex_names.len()];
        for e in &edges {
            used[e.src.index()] = true;
            used[e.dst.index()] = true;
        }
        let mut remap = vec![u32::MAX; vertex_names.len()];
        let mut names = Vec::new();
        for (old, name) in vertex_names.into_iter().enumerate() {
            if used[old] {
                remap[old] = names.len() as u32;
                names.push(name);
            }
        }
        for e in &mut edges {
            e.src = VertexId(remap[e.src.index()]);
            e.dst = VertexId(remap[e.dst.index()]);
        }
        let vertex_index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), VertexId(i as u32)))
            .collect();

        let n = names.len();
        let mut by_label: Vec<Vec<(VertexId, VertexId)>> = vec![Vec::new(); label_names.len()];
        for e in &edges {
            by_label[e.label.index()].push((e.src, e.dst));
        }
        let forward = by_label
            .iter()
            .map(|pairs| Csr::build(n, pairs.iter().copied()))
            .collect();
        let reverse = by_label
            .iter()
            .map(|pairs| Csr::build(n, pairs.iter().map(|&(s, d)| (d, s))))
            .collect();

        LabeledGraph {
            vertex_names: names,
            vertex_index,
            label_names,
            label_index,
            edges,
            forward,
            reverse,
        }
    }
}

/// Parses the `src<TAB>label<TAB>dst` edge-list format. Lines starting with
/// `#` and blank lines are skipped.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<LabeledGraph> {
    let mut builder = GraphBuilder::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let trimmed = line.trim_end_matches(['\r', '\n']);
        if trimmed.trim().is_empty() || trimmed.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split('\t').collect();
        if fields.len() != 3 {
            return Err(Error::EdgeList {
                line: lineno,
                message: format!("expected 3 tab-separated fields, found {}", fields.len()),
            });
        }
        let (src, label, dst) = (fields[0].trim(), fields[1].trim(), fields[2].trim());
        if label.is_empty() {
            return Err(Error::EdgeList {
                line: lineno,
                message: "empty label".into(),
            });
        }
        if label.chars().any(char::is_whitespace) {
            return Err(Error::EdgeList {
                line: lineno,
                message: format!("label {label:?} contains whitespace"),
            });
        }
        if src.is_empty() || dst.is_empty() {
            return Err(Error::EdgeList {
                line: lineno,
                message: "empty vertex name".into(),
            });
        }
        builder.add_edge(src, label, dst);
    }
    Ok(builder.build())
}

pub fn load_edge_list_str(text: &str) -> Result<LabeledGraph> {
    load_edge_list(text.as_bytes())
}

/// Keeps exactly the edges whose label is in `keep`. Vertices left without
/// edges are unregistered. The second component maps each vertex of the
/// restricted graph back to its id in `g`.
pub fn restrict_alphabet_mapped(g: &LabeledGraph, keep: &[&str]) -> (LabeledGraph, Vec<VertexId>) {
    let keep: FxHashSet<LabelId> = keep.iter().filter_map(|name| g.label_id(name)).collect();
    let mut builder = GraphBuilder::new();
    let mut back = Vec::new();
    for e in g.edges().iter().filter(|e| keep.contains(&e.label)) {
        for v in [e.src, e.dst] {
            let before = builder.vertex_names.len();
            builder.intern_vertex(g.vertex_name(v));
            if builder.vertex_names.len() > before {
                back.push(v);
            }
        }
        let s = builder.intern_vertex(g.vertex_name(e.src));
        let l = builder.intern_label(g.label_name(e.label));
        let d = builder.intern_vertex(g.vertex_name(e.dst));
        builder.add_edge_ids(s, l, d);
    }
    (builder.build(), back)
}

pub fn restrict_alphabet(g: &LabeledGraph, keep: &[&str]) -> LabeledGraph {
    restrict_alphabet_mapped(g, keep).0
}

/// A deduplicated set of vertex pairs, iterated in `(src, dst)` id order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairSet {
    pairs: BTreeSet<(VertexId, VertexId)>,
}

impl PairSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, src: VertexId, dst: VertexId) -> bool {
        self.pairs.insert((src, dst))
    }

    pub fn contains(&self, src: VertexId, dst: VertexId) -> bool {
        self.pairs.contains(&(src, dst))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn extend_from(&mut self, other: &PairSet) {
        self.pairs.extend(other.pairs.iter().copied());
    }

    /// Pairs present in exactly one of the two sets.
    pub fn symmetric_difference<'a>(
        &'a self,
        other: &'a PairSet,
    ) -> impl Iterator<Item = (VertexId, VertexId)> + 'a {
        self.pairs.symmetric_difference(&other.pairs).copied()
    }

    /// Applies `f` to both endpoints of every pair, merging duplicates.
    pub fn map_vertices(&self, mut f: impl FnMut(VertexId) -> VertexId) -> PairSet {
        self.iter().map(|(a, b)| (f(a), f(b))).collect()
    }

    /// Renders the pairs as `src<TAB>dst` lines using the graph's vertex names.
    pub fn write_named<W: Write>(&self, g: &LabeledGraph, mut out: W) -> std::io::Result<()> {
        for (s, d) in self.iter() {
            writeln!(out, "{}\t{}", g.vertex_name(s), g.vertex_name(d))?;
        }
        Ok(())
    }
}

impl FromIterator<(VertexId, VertexId)> for PairSet {
    fn from_iter<T: IntoIterator<Item = (VertexId, VertexId)>>(iter: T) -> Self {
        PairSet {
            pairs: iter.into_iter().collect(),
        }
    }
}

impl Extend<(VertexId, VertexId)> for PairSet {
    fn extend<T: IntoIterator<Item = (VertexId, VertexId)>>(&mut self, iter: T) {
        self.pairs.extend(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(g: &LabeledGraph, name: &str) -> VertexId {
        g.vertex_id(name).unwrap()
    }

    #[test]
    fn empty_stream() {
        let g = load_edge_list_str("").unwrap();
        assert_eq!(g.vertex_count(), 0);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn two_edge_path() {
        let g = load_edge_list_str("1\tb\t2\n2\tb\t3\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        let b = g.label_id("b").unwrap();
        assert_eq!(g.successors(b, v(&g, "1")), &[v(&g, "2")]);
        assert_eq!(g.predecessors(b, v(&g, "3")), &[v(&g, "2")]);
    }

    #[test]
    fn duplicate_edges_dropped() {
        let g = load_edge_list_str("1\tb\t2\n1\tb\t2\n").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = load_edge_list_str("# 7\tz\t8\n\n1\ta\t2\n   \n#x\n").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert!(g.vertex_id("7").is_none());
        assert!(g.label_id("z").is_none());
    }

    #[test]
    fn wrong_field_count_reports_line() {
        let err = load_edge_list_str("1\ta\t2\n1\ta\n").unwrap_err();
        match err {
            Error::EdgeList { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_label_rejected() {
        let err = load_edge_list_str("1\t\t2\n").unwrap_err();
        assert!(matches!(err, Error::EdgeList { line: 1, .. }));
    }

    #[test]
    fn ids_follow_first_appearance() {
        let g = load_edge_list_str("x\tq\ty\nz\tr\tx\n").unwrap();
        assert_eq!(g.vertex_id("x"), Some(VertexId(0)));
        assert_eq!(g.vertex_id("y"), Some(VertexId(1)));
        assert_eq!(g.vertex_id("z"), Some(VertexId(2)));
        assert_eq!(g.label_id("r"), Some(LabelId(1)));
    }

    #[test]
    fn restrict_filters_and_unregisters() {
        let g = load_edge_list_str("1\td\t2\n2\te\t3\n").unwrap();
        let r = restrict_alphabet(&g, &["e"]);
        assert_eq!(r.edge_count(), 1);
        assert!(r.vertex_id("1").is_none());
        assert!(r.has_edge(v(&r, "2"), r.label_id("e").unwrap(), v(&r, "3")));
    }

    #[test]
    fn restrict_to_all_labels_is_identity() {
        let g = load_edge_list_str("1\td\t2\n2\te\t3\n3\td\t1\n").unwrap();
        let (r, back) = restrict_alphabet_mapped(&g, &["d", "e"]);
        assert_eq!(r.to_edge_list_string(), g.to_edge_list_string());
        assert_eq!(back, g.vertices().collect::<Vec<_>>());
    }

    #[test]
    fn restrict_to_absent_label_is_empty() {
        let g = load_edge_list_str("1\td\t2\n").unwrap();
        let r = restrict_alphabet(&g, &["e"]);
        assert_eq!(r.vertex_count(), 0);
        assert_eq!(r.edge_count(), 0);
    }

    #[test]
    fn builder_drops_edgeless_vertices() {
        let mut b = GraphBuilder::new();
        b.intern_vertex("lonely");
        b.add_edge("1", "a", "2");
        let g = b.build();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.vertex_id("1"), Some(VertexId(0)));
    }
}
