//! Decoding shortest paths out of a [`PathDag`].
//!
//! [`PathEnumerator`] walks predecessor lists depth-first from the target
//! back to the root. It keeps one frame per path edge and, separately, the
//! stack of frames whose predecessor link still has an untried successor.
//! Moving to the next path jumps straight to the deepest such fork, advances
//! it, and descends along first predecessors again, so the work between two
//! outputs is proportional to the length of the next path.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::allsp::{DagKey, EdgeTag, EntryId, PathDag, NIL};
use crate::graph::{GraphError, Path};

#[derive(Debug, Clone, Copy)]
struct Frame {
    entry: EntryId,
    /// Link currently followed out of `entry`.
    link: u32,
}

/// Resumable iterator over all root-to-target paths of a DAG.
pub struct PathEnumerator<'a, K, A> {
    dag: &'a PathDag<K, A>,
    target: EntryId,
    /// `frames[0]` is the target; the predecessor of the last frame is the root.
    frames: Vec<Frame>,
    forks: Vec<usize>,
    started: bool,
    done: bool,
    steps: u64,
}

impl<'a, K: DagKey, A: EdgeTag> PathEnumerator<'a, K, A> {
    pub fn new(dag: &'a PathDag<K, A>, target: EntryId) -> Result<Self, GraphError> {
        if dag.entry(target).is_none() {
            return Err(GraphError::UnknownNode(target.0));
        }
        Ok(PathEnumerator {
            dag,
            target,
            frames: Vec::with_capacity(dag.depth(target)),
            forks: Vec::new(),
            started: false,
            done: false,
            steps: 0,
        })
    }

    /// Basic operations performed so far: one per frame pushed while
    /// descending, one per fork resumed.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    fn descend(&mut self, mut entry: EntryId) {
        loop {
            let link = self.dag.entry_raw(entry).head;
            if link == NIL {
                return;
            }
            self.steps += 1;
            let r = self.dag.prev_ref(link);
            if r.next != NIL {
                self.forks.push(self.frames.len());
            }
            self.frames.push(Frame { entry, link });
            entry = r.pred;
        }
    }

    fn advance(&mut self) -> bool {
        if !self.started {
            self.started = true;
            self.descend(self.target);
            return true;
        }
        let Some(fork) = self.forks.pop() else {
            return false;
        };
        self.steps += 1;
        self.frames.truncate(fork + 1);
        let next = self.dag.prev_ref(self.frames[fork].link).next;
        self.frames[fork].link = next;
        let r = self.dag.prev_ref(next);
        if r.next != NIL {
            self.forks.push(fork);
        }
        self.descend(r.pred);
        true
    }

    /// Writes the next path into `out`, reusing its buffers. Returns `false`
    /// once every path has been produced.
    pub fn next_into(&mut self, out: &mut Path) -> bool {
        if self.done || !self.advance() {
            self.done = true;
            return false;
        }
        out.nodes.clear();
        out.edge_labels.clear();
        let root = self.dag.root();
        out.nodes.push(self.dag.key(root).node());
        for frame in self.frames.iter().rev() {
            let tag = self.dag.prev_ref(frame.link).tag;
            if let Some(label) = tag.label() {
                out.edge_labels.push(label);
            }
            out.nodes.push(self.dag.key(frame.entry).node());
        }
        true
    }
}

impl<K: DagKey, A: EdgeTag> Iterator for PathEnumerator<'_, K, A> {
    type Item = Path;

    fn next(&mut self) -> Option<Path> {
        let mut p = Path { nodes: Vec::new(), edge_labels: Vec::new() };
        self.next_into(&mut p).then_some(p)
    }
}

pub fn enumerate_paths<K: DagKey, A: EdgeTag>(
    dag: &PathDag<K, A>,
    target: EntryId,
) -> Result<PathEnumerator<'_, K, A>, GraphError> {
    PathEnumerator::new(dag, target)
}

/// Number of root-to-`target` paths.
pub fn count_paths<K: DagKey, A: EdgeTag>(
    dag: &PathDag<K, A>,
    target: EntryId,
) -> Result<BigUint, GraphError> {
    if dag.entry(target).is_none() {
        return Err(GraphError::UnknownNode(target.0));
    }
    Ok(count_all_upto(dag, target).swap_remove(target.index()))
}

/// Path counts for every entry, indexed by entry id.
pub fn count_all<K: DagKey, A: EdgeTag>(dag: &PathDag<K, A>) -> Vec<BigUint> {
    match dag.len() {
        0 => Vec::new(),
        n => count_all_upto(dag, EntryId(n as u32 - 1)),
    }
}

fn count_all_upto<K: DagKey, A: EdgeTag>(dag: &PathDag<K, A>, last: EntryId) -> Vec<BigUint> {
    // predecessors always have smaller ids, so one forward pass suffices
    let mut counts: Vec<BigUint> = Vec::with_capacity(last.index() + 1);
    for i in 0..=last.index() {
        let id = EntryId(i as u32);
        let c = if id == dag.root() {
            BigUint::one()
        } else {
            let mut c = BigUint::zero();
            for (p, _) in dag.predecessors(id) {
                debug_assert!(p < id);
                c += &counts[p.index()];
            }
            c
        };
        counts.push(c);
    }
    counts
}
