//! Small graph families used by tests, benchmarks and examples.
//!
//! Generated graphs name node `i` as the decimal string `"i"` and intern
//! nodes in index order, so `NodeId(i)` is the node named `i`. Labelled
//! variants put the single label `e` on every edge.

use crate::graph::{GraphBuilder, LabelledGraph};

/// The six-node example graph: `v` fans out to `n1`, `n2`, `n3`, which all
/// lead to `n4`, which leads to `n5`.
pub const FAN_IN: &str = "\
v\te\tn1
v\te\tn2
v\te\tn3
n1\te\tn4
n2\te\tn4
n3\te\tn4
n4\te\tn5
";

pub fn fan_in() -> LabelledGraph {
    crate::graph::parse_labelled_graph(FAN_IN).expect("fixture parses")
}

fn labelled(node_count: usize, pairs: &[(u32, u32)]) -> LabelledGraph {
    let mut b = GraphBuilder::default();
    for i in 0..node_count {
        b.add_node(&i.to_string());
    }
    for &(s, d) in pairs {
        b.add_edge(&s.to_string(), "e", &d.to_string());
    }
    b.build()
}

/// `k` diamonds in a row. Diamond `i` forks from `3i` to `3i+1` and `3i+2`,
/// both of which rejoin at `3i+3`; node `3k` has `2^k` shortest paths from 0.
pub fn diamond_chain_pairs(k: usize) -> (usize, Vec<(u32, u32)>) {
    let mut pairs = Vec::with_capacity(4 * k);
    for i in 0..k as u32 {
        let s = 3 * i;
        pairs.extend([(s, s + 1), (s, s + 2), (s + 1, s + 3), (s + 2, s + 3)]);
    }
    (3 * k + 1, pairs)
}

pub fn diamond_chain(k: usize) -> LabelledGraph {
    let (n, pairs) = diamond_chain_pairs(k);
    labelled(n, &pairs)
}

/// `0 -> 1 -> ... -> n-1`.
pub fn path_pairs(n: usize) -> (usize, Vec<(u32, u32)>) {
    (n, (1..n as u32).map(|i| (i - 1, i)).collect())
}

pub fn path_graph(n: usize) -> LabelledGraph {
    let (n, pairs) = path_pairs(n);
    labelled(n, &pairs)
}

/// `width × height` grid with right and down edges; node `r * width + c`.
pub fn grid_pairs(width: usize, height: usize) -> (usize, Vec<(u32, u32)>) {
    let mut pairs = Vec::with_capacity(2 * width * height);
    for r in 0..height {
        for c in 0..width {
            let n = (r * width + c) as u32;
            if c + 1 < width {
                pairs.push((n, n + 1));
            }
            if r + 1 < height {
                pairs.push((n, n + width as u32));
            }
        }
    }
    (width * height, pairs)
}

pub fn grid_graph(width: usize, height: usize) -> LabelledGraph {
    let (n, pairs) = grid_pairs(width, height);
    labelled(n, &pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::NodeId;

    #[test]
    fn generated_ids_match_names() {
        let g = grid_graph(3, 2);
        assert_eq!(g.node_count(), 6);
        assert_eq!(g.edge_count(), 2 * 6 - 3 - 2);
        for i in 0..6u32 {
            assert_eq!(g.node_name(NodeId(i)), i.to_string());
        }
        let d = diamond_chain(4);
        assert_eq!((d.node_count(), d.edge_count()), (13, 16));
        assert_eq!(path_graph(5).edge_count(), 4);
    }
}
