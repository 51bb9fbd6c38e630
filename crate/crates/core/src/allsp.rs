//! Single-source all-shortest-paths breadth-first search.
//!
//! The search keeps, for every visited key, its BFS depth and a list of
//! predecessor entries through which it is reached on a shortest path. The
//! predecessor lists form a DAG rooted at the source entry; every backward
//! walk from an entry to the root spells one shortest path, and every
//! shortest path is spelled by exactly one such walk.
//!
//! The same search drives the plain graph case (keys are nodes) and the
//! product-graph case used by RPQ evaluation (keys are `(node, state)` pairs,
//! predecessor links carry the edge label).

use std::collections::HashMap;
use std::hash::Hash;

use crate::graph::{GraphError, Label, NodeId, UnlabelledGraph};

/// Position of an entry in a [`PathDag`]; ids grow with depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntryId(pub u32);

impl EntryId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Search key of a DAG entry that projects onto a graph node.
pub trait DagKey: Copy + Eq + Hash {
    fn node(&self) -> NodeId;
}

impl DagKey for NodeId {
    fn node(&self) -> NodeId {
        *self
    }
}

/// Annotation stored on a predecessor link.
pub trait EdgeTag: Copy {
    fn label(&self) -> Option<Label>;
}

impl EdgeTag for () {
    fn label(&self) -> Option<Label> {
        None
    }
}

impl EdgeTag for Label {
    fn label(&self) -> Option<Label> {
        Some(*self)
    }
}

pub(crate) const NIL: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub(crate) struct PrevRef<A> {
    pub(crate) pred: EntryId,
    pub(crate) tag: A,
    pub(crate) next: u32,
}

#[derive(Debug, Clone)]
pub struct DagEntry<K> {
    pub key: K,
    pub depth: usize,
    pub(crate) head: u32,
    pub(crate) tail: u32,
}

/// The `Visited` store of an all-shortest search read as a DAG.
///
/// Predecessor lists are singly linked through one shared arena, so
/// appending is O(1) and the structure takes O(entries + references) space.
#[derive(Debug, Clone)]
pub struct PathDag<K, A> {
    entries: Vec<DagEntry<K>>,
    refs: Vec<PrevRef<A>>,
    index: HashMap<K, EntryId>,
}

pub type PathDagU = PathDag<NodeId, ()>;

impl<K: DagKey, A: EdgeTag> PathDag<K, A> {
    fn with_root(key: K) -> Self {
        let mut index = HashMap::new();
        index.insert(key, EntryId(0));
        PathDag {
            entries: vec![DagEntry { key, depth: 0, head: NIL, tail: NIL }],
            refs: Vec::new(),
            index,
        }
    }

    pub fn root(&self) -> EntryId {
        EntryId(0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn reference_count(&self) -> usize {
        self.refs.len()
    }

    pub fn entry(&self, id: EntryId) -> Option<&DagEntry<K>> {
        self.entries.get(id.index())
    }

    pub fn lookup(&self, key: &K) -> Option<EntryId> {
        self.index.get(key).copied()
    }

    pub fn key(&self, id: EntryId) -> K {
        self.entries[id.index()].key
    }

    pub fn depth(&self, id: EntryId) -> usize {
        self.entries[id.index()].depth
    }

    pub fn entries(&self) -> impl Iterator<Item = (EntryId, &DagEntry<K>)> {
        self.entries.iter().enumerate().map(|(i, e)| (EntryId(i as u32), e))
    }

    /// Predecessors of `id` in discovery order.
    pub fn predecessors(&self, id: EntryId) -> Predecessors<'_, A> {
        Predecessors { refs: &self.refs, cursor: self.entries[id.index()].head }
    }

    pub(crate) fn entry_raw(&self, id: EntryId) -> &DagEntry<K> {
        &self.entries[id.index()]
    }

    pub(crate) fn prev_ref(&self, r: u32) -> &PrevRef<A> {
        &self.refs[r as usize]
    }

    fn push_entry(&mut self, key: K, depth: usize, pred: EntryId, tag: A) -> EntryId {
        let id = EntryId(u32::try_from(self.entries.len()).expect("too many DAG entries"));
        let r = self.refs.len() as u32;
        self.refs.push(PrevRef { pred, tag, next: NIL });
        self.entries.push(DagEntry { key, depth, head: r, tail: r });
        self.index.insert(key, id);
        id
    }

    fn append_pred(&mut self, id: EntryId, pred: EntryId, tag: A) {
        let r = self.refs.len() as u32;
        self.refs.push(PrevRef { pred, tag, next: NIL });
        let e = &mut self.entries[id.index()];
        self.refs[e.tail as usize].next = r;
        e.tail = r;
    }
}

pub struct Predecessors<'a, A> {
    refs: &'a [PrevRef<A>],
    cursor: u32,
}

impl<A: Copy> Iterator for Predecessors<'_, A> {
    type Item = (EntryId, A);

    fn next(&mut self) -> Option<Self::Item> {
        if self.cursor == NIL {
            return None;
        }
        let r = &self.refs[self.cursor as usize];
        self.cursor = r.next;
        Some((r.pred, r.tag))
    }
}

/// Core of the all-shortest search.
///
/// `successors(key, out)` must push the out-neighbours of `key` in a
/// deterministic order. `on_pop` runs for every entry when it leaves the
/// queue, in nondecreasing depth order; by then its predecessor list is
/// final.
pub(crate) fn search<K, A, S, F>(start: K, mut successors: S, mut on_pop: F) -> PathDag<K, A>
where
    K: DagKey,
    A: EdgeTag,
    S: FnMut(K, &mut Vec<(K, A)>),
    F: FnMut(&PathDag<K, A>, EntryId),
{
    let mut dag = PathDag::with_root(start);
    let mut buf = Vec::new();
    // Entries enter the queue and the store together, so the queue is the
    // suffix of the store starting at `head`.
    let mut head = 0usize;
    while head < dag.entries.len() {
        let current = EntryId(head as u32);
        head += 1;
        on_pop(&dag, current);

        let (key, depth) = {
            let e = &dag.entries[current.index()];
            (e.key, e.depth)
        };
        buf.clear();
        successors(key, &mut buf);
        for &(next, tag) in &buf {
            match dag.index.get(&next) {
                None => {
                    dag.push_entry(next, depth + 1, current, tag);
                }
                Some(&seen) => {
                    let seen_depth = dag.entries[seen.index()].depth;
                    debug_assert!(seen_depth <= depth + 1, "FIFO order violated");
                    if seen_depth == depth + 1 {
                        dag.append_pred(seen, current, tag);
                    }
                }
            }
        }
    }
    dag
}

/// A node popped by [`all_shortest_search`].
#[derive(Debug, Clone, Copy)]
pub struct Solution<'a> {
    pub node: NodeId,
    pub depth: usize,
    pub entry: EntryId,
    /// The DAG as built so far; complete for `entry` and everything at or
    /// below its depth.
    pub dag: &'a PathDagU,
}

/// All shortest paths from `source` to every node reachable from it.
///
/// `on_solution` fires once per reachable node (the source first, at depth
/// 0) in nondecreasing depth order.
pub fn all_shortest_search<F>(
    g: &UnlabelledGraph,
    source: NodeId,
    mut on_solution: F,
) -> Result<PathDagU, GraphError>
where
    F: FnMut(Solution<'_>),
{
    if !g.contains_node(source) {
        return Err(GraphError::UnknownNode(source.0));
    }
    Ok(search(
        source,
        |n, out: &mut Vec<(NodeId, ())>| out.extend(g.out_unchecked(n).iter().map(|&m| (m, ()))),
        |dag, entry| {
            let e = dag.entry_raw(entry);
            on_solution(Solution { node: e.key, depth: e.depth, entry, dag });
        },
    ))
}

/// `(entries, predecessor references)`.
pub fn dag_stats<K: DagKey, A: EdgeTag>(dag: &PathDag<K, A>) -> (usize, usize) {
    (dag.len(), dag.reference_count())
}
