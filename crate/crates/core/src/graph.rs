//! Edge-labelled graphs, their unlabelled projection, and the TSV edge-list
//! format they are loaded from.
//!
//! Nodes and labels are interned into dense `u32` ids. Adjacency is kept in
//! ascending `(label, target)` order so every traversal built on top of it is
//! reproducible.

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Write};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown node id {0}")]
    UnknownNode(u32),
    #[error("unknown node `{0}`")]
    UnknownNodeName(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Dense index of a node in a graph's interning table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

/// Dense index of an edge label in a graph's interning table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl Label {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Bijection between strings and contiguous ids `0..len`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Interner {
    names: Vec<String>,
    ids: HashMap<String, u32>,
}

impl Interner {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = u32::try_from(self.names.len()).expect("interning table overflow");
        self.names.push(name.to_owned());
        self.ids.insert(name.to_owned(), id);
        id
    }

    pub fn get(&self, name: &str) -> Option<u32> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, id: u32) -> Option<&str> {
        self.names.get(id as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &str)> {
        self.names.iter().enumerate().map(|(i, n)| (i as u32, n.as_str()))
    }
}

/// A graph database: nodes, a label alphabet and a set of labelled edges.
#[derive(Debug, Clone, Default)]
pub struct LabelledGraph {
    nodes: Interner,
    labels: Interner,
    /// Sorted, duplicate-free `(src, label, dst)` triples.
    edges: Vec<(NodeId, Label, NodeId)>,
    /// Per node, outgoing `(label, dst)` pairs sorted ascending.
    out_all: Vec<Vec<(Label, NodeId)>>,
}

impl LabelledGraph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn label_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(NodeId, Label, NodeId)] {
        &self.edges
    }

    pub fn nodes(&self) -> &Interner {
        &self.nodes
    }

    pub fn labels(&self) -> &Interner {
        &self.labels
    }

    pub fn node_id(&self, name: &str) -> Option<NodeId> {
        self.nodes.get(name).map(NodeId)
    }

    pub fn label_id(&self, name: &str) -> Option<Label> {
        self.labels.get(name).map(Label)
    }

    pub fn node_name(&self, n: NodeId) -> &str {
        self.nodes.name(n.0).expect("node id out of range")
    }

    pub fn label_name(&self, a: Label) -> &str {
        self.labels.name(a.0).expect("label id out of range")
    }

    pub fn contains_node(&self, n: NodeId) -> bool {
        n.index() < self.node_count()
    }

    pub fn has_edge(&self, src: NodeId, label: Label, dst: NodeId) -> bool {
        self.edges.binary_search(&(src, label, dst)).is_ok()
    }

    /// Outgoing `(label, dst)` pairs of `n`, ascending by label then target.
    pub fn out_edges(&self, n: NodeId) -> &[(Label, NodeId)] {
        self.out_all.get(n.index()).map_or(&[], Vec::as_slice)
    }

    /// Successors of `n` along `label`-edges, ascending.
    pub fn successors(&self, n: NodeId, label: Label) -> impl Iterator<Item = NodeId> + '_ {
        let out = self.out_edges(n);
        let lo = out.partition_point(|&(a, _)| a < label);
        let hi = out.partition_point(|&(a, _)| a <= label);
        out[lo..hi].iter().map(|&(_, dst)| dst)
    }

    /// Writes the graph in the TSV edge-list format accepted by
    /// [`load_labelled_graph`]. Isolated nodes cannot be represented and are
    /// dropped.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for &(s, a, d) in &self.edges {
            writeln!(out, "{}\t{}\t{}", self.node_name(s), self.label_name(a), self.node_name(d))?;
        }
        Ok(())
    }
}

/// Incremental constructor for [`LabelledGraph`].
#[derive(Debug, Default)]
pub struct GraphBuilder {
    nodes: Interner,
    labels: Interner,
    edges: Vec<(NodeId, Label, NodeId)>,
}

impl GraphBuilder {
    pub fn add_node(&mut self, name: &str) -> NodeId {
        NodeId(self.nodes.intern(name))
    }

    pub fn add_label(&mut self, name: &str) -> Label {
        Label(self.labels.intern(name))
    }

    pub fn add_edge(&mut self, src: &str, label: &str, dst: &str) -> &mut Self {
        let s = self.add_node(src);
        let a = self.add_label(label);
        let d = self.add_node(dst);
        self.edges.push((s, a, d));
        self
    }

    pub fn build(self) -> LabelledGraph {
        let GraphBuilder { nodes, labels, mut edges } = self;
        edges.sort_unstable();
        edges.dedup();
        let mut out_all = vec![Vec::new(); nodes.len()];
        // edges are sorted by (src, label, dst), so each list comes out sorted
        for &(s, a, d) in &edges {
            out_all[s.index()].push((a, d));
        }
        LabelledGraph { nodes, labels, edges, out_all }
    }
}

/// Parses the TSV edge-list format: one `src<TAB>label<TAB>dst` per line,
/// blank lines and `#` comments skipped.
pub fn load_labelled_graph<R: BufRead>(source: R) -> Result<LabelledGraph, GraphError> {
    let mut builder = GraphBuilder::default();
    for (i, line) in source.lines().enumerate() {
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let lineno = i + 1;
        if fields.len() != 3 {
            return Err(GraphError::Parse {
                line: lineno,
                message: format!("expected 3 tab-separated fields, found {}", fields.len()),
            });
        }
        if let Some(pos) = fields.iter().position(|f| f.is_empty()) {
            return Err(GraphError::Parse {
                line: lineno,
                message: format!("field {} is empty", pos + 1),
            });
        }
        builder.add_edge(fields[0], fields[1], fields[2]);
    }
    Ok(builder.build())
}

pub fn parse_labelled_graph(text: &str) -> Result<LabelledGraph, GraphError> {
    load_labelled_graph(text.as_bytes())
}

/// A plain directed graph `E ⊆ V × V`.
#[derive(Debug, Clone, Default)]
pub struct UnlabelledGraph {
    nodes: Interner,
    out: Vec<Vec<NodeId>>,
    edge_count: usize,
}

impl UnlabelledGraph {
    /// Builds a graph on nodes named `"0"..node_count`; duplicate pairs collapse.
    pub fn from_pairs(node_count: usize, pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut nodes = Interner::new();
        for i in 0..node_count {
            nodes.intern(&i.to_string());
        }
        let mut out = vec![Vec::new(); node_count];
        for (s, d) in pairs {
            assert!((d as usize) < node_count, "edge target {d} out of range");
            out[s as usize].push(NodeId(d));
        }
        Self::finish(nodes, out)
    }

    fn finish(nodes: Interner, mut out: Vec<Vec<NodeId>>) -> Self {
        let mut edge_count = 0;
        for succ in &mut out {
            succ.sort_unstable();
            succ.dedup();
            edge_count += succ.len();
        }
        UnlabelledGraph { nodes, out, edge_count }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn nodes(&self) -> &Interner {
        &self.nodes
    }

    pub fn node_id(&self, name: &str) -> Option<NodeId> {
        self.nodes.get(name).map(NodeId)
    }

    pub fn node_name(&self, n: NodeId) -> &str {
        self.nodes.name(n.0).expect("node id out of range")
    }

    pub fn contains_node(&self, n: NodeId) -> bool {
        n.index() < self.node_count()
    }

    /// Successors of `n` in ascending id order.
    pub fn neighbours(&self, n: NodeId) -> Result<&[NodeId], GraphError> {
        self.out
            .get(n.index())
            .map(Vec::as_slice)
            .ok_or(GraphError::UnknownNode(n.0))
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(s, succ)| succ.iter().map(move |&d| (NodeId(s as u32), d)))
    }

    pub(crate) fn out_unchecked(&self, n: NodeId) -> &[NodeId] {
        &self.out[n.index()]
    }
}

/// Forgets edge labels; parallel edges with different labels collapse to one.
pub fn strip_labels(g: &LabelledGraph) -> UnlabelledGraph {
    let out = g
        .out_all
        .iter()
        .map(|succ| succ.iter().map(|&(_, d)| d).collect())
        .collect();
    UnlabelledGraph::finish(g.nodes.clone(), out)
}

/// A path `n1 a1 n2 ... ak n(k+1)`. Unlabelled paths have no `edge_labels`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub nodes: Vec<NodeId>,
    pub edge_labels: Vec<Label>,
}

impl Path {
    pub fn empty(start: NodeId) -> Self {
        Path { nodes: vec![start], edge_labels: Vec::new() }
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn start(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn end(&self) -> NodeId {
        *self.nodes.last().expect("path has at least one node")
    }

    /// Checks every step against `g`.
    pub fn is_valid_in(&self, g: &LabelledGraph) -> bool {
        self.edge_labels.len() + 1 == self.nodes.len()
            && self
                .nodes
                .windows(2)
                .zip(&self.edge_labels)
                .all(|(w, &a)| g.has_edge(w[0], a, w[1]))
    }

    /// Checks every step against an unlabelled graph.
    pub fn is_valid_in_unlabelled(&self, g: &UnlabelledGraph) -> bool {
        self.edge_labels.is_empty()
            && self.nodes.windows(2).all(|w| {
                g.neighbours(w[0]).is_ok_and(|succ| succ.binary_search(&w[1]).is_ok())
            })
    }

    /// Renders as `n1 -a-> n2 -b-> n3`, or just `n1` for the empty path.
    pub fn render(&self, g: &LabelledGraph) -> String {
        let mut s = g.node_name(self.nodes[0]).to_owned();
        for (i, &n) in self.nodes[1..].iter().enumerate() {
            s.push_str(" -");
            s.push_str(g.label_name(self.edge_labels[i]));
            s.push_str("-> ");
            s.push_str(g.node_name(n));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::fixtures::FAN_IN;

    fn id(g: &UnlabelledGraph, name: &str) -> NodeId {
        g.node_id(name).unwrap()
    }

    #[test]
    fn loads_simple_stream() {
        let g = parse_labelled_graph("v\ta\tx\nx\tb\ty").unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.label_count(), 2);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn duplicate_triples_collapse() {
        let g = parse_labelled_graph("v\ta\tx\nv\ta\tx\n").unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn comments_blank_lines_and_crlf() {
        let g = parse_labelled_graph("# header\n\nv\ta\tx\r\n   \n#v\tb\ty\n").unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.node_count(), 2);
    }

    #[test]
    fn empty_stream_is_empty_graph() {
        let g = parse_labelled_graph("").unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (0, 0));
        let u = strip_labels(&g);
        assert_eq!((u.node_count(), u.edge_count()), (0, 0));
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = parse_labelled_graph("v\ta\tx\n\nv\ta\n").unwrap_err();
        match err {
            GraphError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_labelled_graph("a\tb\tc\td").unwrap_err(),
            GraphError::Parse { line: 1, .. }
        ));
        assert!(matches!(
            parse_labelled_graph("a\t\tc").unwrap_err(),
            GraphError::Parse { line: 1, .. }
        ));
    }

    #[test]
    fn fan_in_loads_and_projects() {
        let g = parse_labelled_graph(FAN_IN).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (6, 7));
        let u = strip_labels(&g);
        assert_eq!(u.edge_count(), 7);
        let names: Vec<(&str, &str)> =
            u.edges().map(|(s, d)| (u.node_name(s), u.node_name(d))).collect();
        let mut expected = vec![
            ("v", "n1"),
            ("v", "n2"),
            ("v", "n3"),
            ("n1", "n4"),
            ("n2", "n4"),
            ("n3", "n4"),
            ("n4", "n5"),
        ];
        let mut got = names.clone();
        got.sort();
        expected.sort();
        assert_eq!(got, expected);
        assert_eq!(
            u.neighbours(id(&u, "v")).unwrap(),
            &[id(&u, "n1"), id(&u, "n2"), id(&u, "n3")]
        );
        assert!(u.neighbours(id(&u, "n5")).unwrap().is_empty());
    }

    #[test]
    fn parallel_labels_collapse_when_stripped() {
        let g = parse_labelled_graph("v\ta\tx\nv\tb\tx\n").unwrap();
        assert_eq!(g.edge_count(), 2);
        let u = strip_labels(&g);
        assert_eq!(u.edge_count(), 1);
        assert_eq!(u.neighbours(NodeId(0)).unwrap(), &[NodeId(1)]);
    }

    #[test]
    fn self_loop_neighbour() {
        let u = strip_labels(&parse_labelled_graph("n\ta\tn\n").unwrap());
        assert_eq!(u.neighbours(NodeId(0)).unwrap(), &[NodeId(0)]);
    }

    #[test]
    fn unknown_node_is_lookup_error() {
        let u = UnlabelledGraph::from_pairs(2, [(0, 1)]);
        assert!(matches!(u.neighbours(NodeId(5)), Err(GraphError::UnknownNode(5))));
    }

    #[test]
    fn successors_by_label() {
        let g = parse_labelled_graph("v\ta\ty\nv\tb\tz\nv\ta\tx\n").unwrap();
        let v = g.node_id("v").unwrap();
        let a = g.label_id("a").unwrap();
        let got: Vec<&str> = g.successors(v, a).map(|n| g.node_name(n)).collect();
        assert_eq!(got, ["y", "x"]); // ascending id order: y was interned before x
    }

    #[test]
    fn path_rendering() {
        let g = parse_labelled_graph("v\ta\tx\nx\tb\ty\n").unwrap();
        let p = Path {
            nodes: vec![NodeId(0), NodeId(1), NodeId(2)],
            edge_labels: vec![Label(0), Label(1)],
        };
        assert!(p.is_valid_in(&g));
        assert_eq!(p.render(&g), "v -a-> x -b-> y");
        assert_eq!(Path::empty(NodeId(0)).render(&g), "v");
    }
}
