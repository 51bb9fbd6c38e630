//! Evaluation of anchored regular path queries `(v, regex, ?x)`.
//!
//! Every mode runs a breadth-first search over the product of the graph and
//! the deterministic query automaton, built on the fly from `(v, q0)`. A
//! node becomes an answer the first time it is popped paired with a final
//! state; the depth of that pop is recorded in an answer dictionary and any
//! later pop of the same node (through another final state) at a greater
//! depth is discarded. Pops at the same depth through different final states
//! are grouped into one answer.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::allsp::{search, DagKey, EntryId, PathDag};
use crate::automaton::{compile, Dfa, StateId, SymbolId};
use crate::enumerate::{count_paths, PathEnumerator};
use crate::graph::{GraphError, Label, LabelledGraph, NodeId, Path};
use crate::regex::{parse_regex, RegexAst, RegexError};

#[derive(Debug, Error)]
pub enum RpqError {
    #[error(transparent)]
    Regex(#[from] RegexError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A node of the product graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProductState {
    pub node: NodeId,
    pub state: StateId,
}

impl DagKey for ProductState {
    fn node(&self) -> NodeId {
        self.node
    }
}

pub type ProductDag = PathDag<ProductState, Label>;

/// A compiled query bound to the labels of one graph.
#[derive(Debug, Clone)]
pub struct Rpq {
    source: NodeId,
    ast: RegexAst,
    dfa: Dfa,
    /// Graph label id -> automaton symbol, `None` when the regex never
    /// mentions the label.
    label_map: Vec<Option<SymbolId>>,
}

impl Rpq {
    pub fn new(g: &LabelledGraph, source: NodeId, ast: RegexAst) -> Result<Self, RpqError> {
        if !g.contains_node(source) {
            return Err(GraphError::UnknownNode(source.0).into());
        }
        let dfa = compile(&ast);
        let label_map = g.labels().iter().map(|(_, name)| dfa.symbol(name)).collect();
        Ok(Rpq { source, ast, dfa, label_map })
    }

    /// Resolves `source` by name and parses `regex`.
    pub fn parse(g: &LabelledGraph, source: &str, regex: &str) -> Result<Self, RpqError> {
        let ast = parse_regex(regex)?;
        let v = g
            .node_id(source)
            .ok_or_else(|| GraphError::UnknownNodeName(source.to_owned()))?;
        Rpq::new(g, v, ast)
    }

    /// The same query re-anchored at another node.
    pub fn with_source(&self, source: NodeId) -> Self {
        Rpq { source, ..self.clone() }
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn ast(&self) -> &RegexAst {
        &self.ast
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn start(&self) -> ProductState {
        ProductState { node: self.source, state: self.dfa.initial() }
    }

    /// Does the automaton accept this label word? Labels are graph ids.
    pub fn accepts(&self, word: &[Label]) -> bool {
        let mut q = self.dfa.initial();
        for a in word {
            match self.symbol(*a).and_then(|s| self.dfa.next(q, s)) {
                Some(r) => q = r,
                None => return false,
            }
        }
        self.dfa.is_final(q)
    }

    #[inline]
    fn symbol(&self, a: Label) -> Option<SymbolId> {
        self.label_map.get(a.index()).copied().flatten()
    }

    fn is_final(&self, p: ProductState) -> bool {
        self.dfa.is_final(p.state)
    }

    /// Pushes the product successors of `p`, ordered by label id then node id.
    pub fn extend_product_neighbours(
        &self,
        g: &LabelledGraph,
        p: ProductState,
        out: &mut Vec<(ProductState, Label)>,
    ) {
        for &(a, dst) in g.out_edges(p.node) {
            if let Some(q) = self.symbol(a).and_then(|s| self.dfa.next(p.state, s)) {
                out.push((ProductState { node: dst, state: q }, a));
            }
        }
    }
}

pub fn product_neighbours(
    g: &LabelledGraph,
    q: &Rpq,
    p: ProductState,
) -> Vec<(ProductState, Label)> {
    let mut out = Vec::new();
    q.extend_product_neighbours(g, p, &mut out);
    out
}

/// An answer node with its shortest witnessing distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReachAnswer {
    pub node: NodeId,
    pub depth: usize,
}

/// All answers of `q`, each once, in nondecreasing depth order.
pub fn eval_reach(g: &LabelledGraph, q: &Rpq) -> Vec<ReachAnswer> {
    let states = q.dfa.state_count();
    let slot = |p: ProductState| p.node.index() * states + p.state as usize;
    let mut visited = vec![false; g.node_count() * states];
    let mut answered = vec![false; g.node_count()];
    let mut queue = VecDeque::new();
    let mut answers = Vec::new();
    let mut buf = Vec::new();

    visited[slot(q.start())] = true;
    queue.push_back((q.start(), 0usize));
    while let Some((p, depth)) = queue.pop_front() {
        if q.is_final(p) && !answered[p.node.index()] {
            answered[p.node.index()] = true;
            answers.push(ReachAnswer { node: p.node, depth });
        }
        buf.clear();
        q.extend_product_neighbours(g, p, &mut buf);
        for &(next, _) in &buf {
            let s = slot(next);
            if !visited[s] {
                visited[s] = true;
                queue.push_back((next, depth + 1));
            }
        }
    }
    answers
}

/// One shortest witnessing path per answer, reconstructed from single
/// predecessor links. Answers arrive in nondecreasing path length.
pub fn eval_single_path<F>(g: &LabelledGraph, q: &Rpq, mut on_solution: F)
where
    F: FnMut(NodeId, Path),
{
    struct Visit {
        key: ProductState,
        prev: Option<(u32, Label)>,
    }

    let mut visited: Vec<Visit> = vec![Visit { key: q.start(), prev: None }];
    let mut index: HashMap<ProductState, u32> = HashMap::from([(q.start(), 0)]);
    let mut answered: HashMap<NodeId, usize> = HashMap::new();
    let mut buf = Vec::new();
    let mut head = 0usize;

    while head < visited.len() {
        let current = head as u32;
        head += 1;
        let key = visited[current as usize].key;
        if q.is_final(key) && !answered.contains_key(&key.node) {
            let mut nodes = vec![key.node];
            let mut labels = Vec::new();
            let mut cursor = visited[current as usize].prev;
            while let Some((p, a)) = cursor {
                labels.push(a);
                nodes.push(visited[p as usize].key.node);
                cursor = visited[p as usize].prev;
            }
            nodes.reverse();
            labels.reverse();
            answered.insert(key.node, labels.len());
            on_solution(key.node, Path { nodes, edge_labels: labels });
        }
        buf.clear();
        q.extend_product_neighbours(g, key, &mut buf);
        for &(next, a) in &buf {
            if let Entry::Vacant(slot) = index.entry(next) {
                slot.insert(visited.len() as u32);
                visited.push(Visit { key: next, prev: Some((current, a)) });
            }
        }
    }
}

/// An answer of [`eval_all_shortest`]: a node, its shortest distance, and
/// the final-state DAG entries that together encode its shortest paths.
#[derive(Debug, Clone, Copy)]
pub struct AllShortestAnswer<'a> {
    pub node: NodeId,
    pub depth: usize,
    pub entries: &'a [EntryId],
    pub dag: &'a ProductDag,
}

impl<'a> AllShortestAnswer<'a> {
    /// Every shortest witnessing path, each exactly once.
    pub fn paths(&self) -> AnswerPaths<'a> {
        AnswerPaths { dag: self.dag, entries: self.entries, current: None }
    }

    pub fn count(&self) -> BigUint {
        self.entries
            .iter()
            .map(|&e| count_paths(self.dag, e).expect("answer entry in dag"))
            .sum()
    }
}

/// Paths of one answer, enumerating its entries one after another.
pub struct AnswerPaths<'a> {
    dag: &'a ProductDag,
    entries: &'a [EntryId],
    current: Option<PathEnumerator<'a, ProductState, Label>>,
}

impl AnswerPaths<'_> {
    pub fn next_into(&mut self, out: &mut Path) -> bool {
        loop {
            if let Some(cursor) = &mut self.current {
                if cursor.next_into(out) {
                    return true;
                }
            }
            let Some((&first, rest)) = self.entries.split_first() else {
                return false;
            };
            self.entries = rest;
            self.current = Some(PathEnumerator::new(self.dag, first).expect("answer entry in dag"));
        }
    }
}

impl Iterator for AnswerPaths<'_> {
    type Item = Path;

    fn next(&mut self) -> Option<Path> {
        let mut p = Path { nodes: Vec::new(), edge_labels: Vec::new() };
        self.next_into(&mut p).then_some(p)
    }
}

/// Groups final-state pops by node within one BFS level.
struct AnswerGrouper<T> {
    shortest: HashMap<NodeId, usize>,
    level: usize,
    pending: Vec<(NodeId, T)>,
    slot: HashMap<NodeId, usize>,
}

impl<T> AnswerGrouper<T> {
    fn new() -> Self {
        AnswerGrouper { shortest: HashMap::new(), level: 0, pending: Vec::new(), slot: HashMap::new() }
    }

    /// Must be called for every pop before `offer`; returns the finished
    /// group when `depth` starts a new level.
    fn advance(&mut self, depth: usize) -> Option<(usize, Vec<(NodeId, T)>)> {
        if depth == self.level {
            return None;
        }
        let level = std::mem::replace(&mut self.level, depth);
        self.slot.clear();
        (!self.pending.is_empty()).then(|| (level, std::mem::take(&mut self.pending)))
    }

    /// Records a final-state pop at the current level. Returns the group
    /// value to extend, or `None` when the node was already answered at a
    /// smaller depth.
    fn offer(&mut self, node: NodeId, init: impl FnOnce() -> T) -> Option<&mut T> {
        let depth = self.level;
        match self.shortest.get(&node) {
            Some(&d) if d < depth => None,
            Some(_) => Some(&mut self.pending[self.slot[&node]].1),
            None => {
                self.shortest.insert(node, depth);
                self.slot.insert(node, self.pending.len());
                self.pending.push((node, init()));
                Some(&mut self.pending.last_mut().expect("just pushed").1)
            }
        }
    }

    fn finish(mut self) -> Option<(usize, Vec<(NodeId, T)>)> {
        (!self.pending.is_empty()).then(|| (self.level, std::mem::take(&mut self.pending)))
    }
}

/// All shortest witnessing paths per answer node.
///
/// `on_solution` runs once per answer node as soon as the BFS level holding
/// its shortest paths is exhausted; the answer can be enumerated right away.
/// Returns the complete product DAG.
pub fn eval_all_shortest<F>(g: &LabelledGraph, q: &Rpq, mut on_solution: F) -> ProductDag
where
    F: FnMut(AllShortestAnswer<'_>),
{
    let mut grouper: AnswerGrouper<Vec<EntryId>> = AnswerGrouper::new();
    let mut emit = |dag: &ProductDag, depth: usize, group: Vec<(NodeId, Vec<EntryId>)>| {
        for (node, entries) in group {
            on_solution(AllShortestAnswer { node, depth, entries: &entries, dag });
        }
    };
    let dag = search(
        q.start(),
        |p, out| q.extend_product_neighbours(g, p, out),
        |dag, id| {
            let e = dag.entry_raw(id);
            if let Some((depth, group)) = grouper.advance(e.depth) {
                emit(dag, depth, group);
            }
            if q.is_final(e.key) {
                if let Some(entries) = grouper.offer(e.key.node, Vec::new) {
                    entries.push(id);
                }
            }
        },
    );
    if let Some((depth, group)) = grouper.finish() {
        emit(&dag, depth, group);
    }
    dag
}

/// Number of shortest witnessing paths per answer node, without building
/// predecessor lists.
pub fn eval_count<F>(g: &LabelledGraph, q: &Rpq, mut on_solution: F)
where
    F: FnMut(NodeId, usize, &BigUint),
{
    struct Visit {
        key: ProductState,
        depth: usize,
        num_paths: BigUint,
    }

    let mut visited = vec![Visit { key: q.start(), depth: 0, num_paths: BigUint::one() }];
    let mut index: HashMap<ProductState, u32> = HashMap::from([(q.start(), 0)]);
    let mut grouper: AnswerGrouper<BigUint> = AnswerGrouper::new();
    let mut buf = Vec::new();
    let mut head = 0usize;

    while head < visited.len() {
        let current = head;
        head += 1;
        let (key, depth) = (visited[current].key, visited[current].depth);
        if let Some((d, group)) = grouper.advance(depth) {
            for (node, count) in group {
                on_solution(node, d, &count);
            }
        }
        if q.is_final(key) {
            if let Some(total) = grouper.offer(key.node, BigUint::zero) {
                *total += &visited[current].num_paths;
            }
        }

        // every predecessor of `current` has been popped, so its count is final
        let num_paths = std::mem::take(&mut visited[current].num_paths);
        buf.clear();
        q.extend_product_neighbours(g, key, &mut buf);
        for &(next, _) in &buf {
            match index.get(&next) {
                None => {
                    index.insert(next, visited.len() as u32);
                    visited.push(Visit { key: next, depth: depth + 1, num_paths: num_paths.clone() });
                }
                Some(&seen) => {
                    let seen = &mut visited[seen as usize];
                    debug_assert!(seen.depth <= depth + 1);
                    if seen.depth == depth + 1 {
                        seen.num_paths += &num_paths;
                    }
                }
            }
        }
        visited[current].num_paths = num_paths;
    }
    if let Some((d, group)) = grouper.finish() {
        for (node, count) in group {
            on_solution(node, d, &count);
        }
    }
}
