//! Brute-force reference answers for small instances.
//!
//! These functions share no code with the search engine: paths are expanded
//! explicitly, level by level, and regex membership is decided straight from
//! the syntax tree. They are exponential and guarded by hard size limits.
//!
//! Expansion drops a walk only when its end point (for RPQs: end point plus
//! residual language, computed with Brzozowski derivatives) was already
//! reached by a strictly shorter walk. Such a walk cannot be the prefix of a
//! shortest answer, since swapping in the shorter prefix would give a shorter
//! accepted walk to the same node.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::graph::{LabelledGraph, NodeId, Path, UnlabelledGraph};
use crate::regex::RegexAst;
use crate::rpq::Rpq;

pub const MAX_UNLABELLED_NODES: usize = 16;
pub const MAX_RPQ_NODES: usize = 12;
pub const MAX_REGEX_SIZE: usize = 12;
pub const MAX_WORD_LEN: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("oracle refuses {what} of size {actual} (limit {limit})")]
pub struct OracleError {
    pub what: &'static str,
    pub actual: usize,
    pub limit: usize,
}

fn guard(what: &'static str, actual: usize, limit: usize) -> Result<(), OracleError> {
    if actual > limit {
        Err(OracleError { what, actual, limit })
    } else {
        Ok(())
    }
}

/// Per answer node: shortest distance and every path of that length.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OracleResult {
    pub answers: BTreeMap<NodeId, (usize, BTreeSet<Path>)>,
}

impl OracleResult {
    fn record(&mut self, node: NodeId, path: Path) {
        let len = path.len();
        let slot = self.answers.entry(node).or_insert_with(|| (len, BTreeSet::new()));
        if slot.0 == len {
            slot.1.insert(path);
        }
    }
}

pub fn brute_all_shortest_unlabelled(
    g: &UnlabelledGraph,
    source: NodeId,
) -> Result<OracleResult, OracleError> {
    guard("graph", g.node_count(), MAX_UNLABELLED_NODES)?;
    let mut result = OracleResult::default();
    if !g.contains_node(source) {
        return Ok(result);
    }
    let mut first_seen: HashMap<NodeId, usize> = HashMap::from([(source, 0)]);
    let mut frontier = vec![vec![source]];
    result.record(source, Path::empty(source));
    for level in 1..=g.node_count() {
        let mut next = Vec::new();
        for walk in &frontier {
            let last = *walk.last().expect("walks are non-empty");
            for &m in g.neighbours(last).expect("valid node") {
                let seen = *first_seen.entry(m).or_insert(level);
                if seen < level {
                    continue;
                }
                let mut w = walk.clone();
                w.push(m);
                result.record(m, Path { nodes: w.clone(), edge_labels: Vec::new() });
                next.push(w);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(result)
}

pub fn brute_all_shortest_rpq(g: &LabelledGraph, q: &Rpq) -> Result<OracleResult, OracleError> {
    guard("graph", g.node_count(), MAX_RPQ_NODES)?;
    guard("regex", q.ast().size(), MAX_REGEX_SIZE)?;
    let max_len = g.node_count() * q.dfa().state_count();
    let mut result = OracleResult::default();

    struct Walk {
        path: Path,
        residual: Deriv,
    }

    let start = Deriv::from_ast(q.ast());
    let mut first_seen: HashMap<(NodeId, Deriv), usize> = HashMap::new();
    first_seen.insert((q.source(), start.clone()), 0);
    let mut frontier = vec![Walk { path: Path::empty(q.source()), residual: start }];
    let mut len = 0;
    loop {
        for walk in &frontier {
            let word: Vec<&str> = walk.path.edge_labels.iter().map(|&a| g.label_name(a)).collect();
            if walk.residual.nullable() {
                assert!(brute_regex_membership_unbounded(q.ast(), &word));
                let end = walk.path.end();
                if result.answers.get(&end).is_none_or(|(d, _)| *d == len) {
                    assert!(walk.path.is_valid_in(g));
                    result.record(end, walk.path.clone());
                }
            }
        }
        if len == max_len {
            break;
        }
        len += 1;
        let mut next = Vec::new();
        for walk in &frontier {
            for &(a, m) in g.out_edges(walk.path.end()) {
                let residual = walk.residual.derive(g.label_name(a));
                if residual == Deriv::Empty {
                    continue;
                }
                let seen = *first_seen.entry((m, residual.clone())).or_insert(len);
                if seen < len {
                    continue;
                }
                let mut path = walk.path.clone();
                path.nodes.push(m);
                path.edge_labels.push(a);
                next.push(Walk { path, residual });
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(result)
}

/// Is `word` in the language of `ast`? Decided by trying every split point.
pub fn brute_regex_membership<S: AsRef<str>>(ast: &RegexAst, word: &[S]) -> bool {
    assert!(word.len() <= MAX_WORD_LEN, "word longer than {MAX_WORD_LEN}");
    brute_regex_membership_unbounded(ast, word)
}

fn brute_regex_membership_unbounded<S: AsRef<str>>(ast: &RegexAst, word: &[S]) -> bool {
    fn star<S: AsRef<str>>(c: &RegexAst, w: &[S]) -> bool {
        w.is_empty()
            || (1..=w.len()).any(|i| {
                brute_regex_membership_unbounded(c, &w[..i]) && star(c, &w[i..])
            })
    }
    match ast {
        RegexAst::Symbol(s) => word.len() == 1 && word[0].as_ref() == s,
        RegexAst::Epsilon => word.is_empty(),
        RegexAst::Union(l, r) => {
            brute_regex_membership_unbounded(l, word) || brute_regex_membership_unbounded(r, word)
        }
        RegexAst::Concat(l, r) => (0..=word.len()).any(|i| {
            brute_regex_membership_unbounded(l, &word[..i])
                && brute_regex_membership_unbounded(r, &word[i..])
        }),
        RegexAst::Star(c) => star(c, word),
        RegexAst::Plus(c) => (0..=word.len())
            .any(|i| brute_regex_membership_unbounded(c, &word[..i]) && star(c, &word[i..])),
        RegexAst::Optional(c) => word.is_empty() || brute_regex_membership_unbounded(c, word),
    }
}

/// Regular expressions modulo associativity, commutativity and idempotence
/// of `|`, with ∅/ε simplification. Brzozowski: finitely many derivatives.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Deriv {
    Empty,
    Eps,
    Sym(String),
    Cat(Box<Deriv>, Box<Deriv>),
    Alt(BTreeSet<Deriv>),
    Star(Box<Deriv>),
}

impl Deriv {
    fn from_ast(ast: &RegexAst) -> Deriv {
        match ast {
            RegexAst::Symbol(s) => Deriv::Sym(s.clone()),
            RegexAst::Epsilon => Deriv::Eps,
            RegexAst::Concat(l, r) => Deriv::cat(Deriv::from_ast(l), Deriv::from_ast(r)),
            RegexAst::Union(l, r) => Deriv::alt(Deriv::from_ast(l), Deriv::from_ast(r)),
            RegexAst::Star(c) => Deriv::star(Deriv::from_ast(c)),
            RegexAst::Plus(c) => {
                let c = Deriv::from_ast(c);
                Deriv::cat(c.clone(), Deriv::star(c))
            }
            RegexAst::Optional(c) => Deriv::alt(Deriv::Eps, Deriv::from_ast(c)),
        }
    }

    fn cat(l: Deriv, r: Deriv) -> Deriv {
        match (l, r) {
            (Deriv::Empty, _) | (_, Deriv::Empty) => Deriv::Empty,
            (Deriv::Eps, r) => r,
            (l, Deriv::Eps) => l,
            (Deriv::Cat(a, b), r) => Deriv::cat(*a, Deriv::cat(*b, r)),
            (l, r) => Deriv::Cat(Box::new(l), Box::new(r)),
        }
    }

    fn alt(l: Deriv, r: Deriv) -> Deriv {
        let mut set = BTreeSet::new();
        for d in [l, r] {
            match d {
                Deriv::Empty => {}
                Deriv::Alt(inner) => set.extend(inner),
                d => {
                    set.insert(d);
                }
            }
        }
        match set.len() {
            0 => Deriv::Empty,
            1 => set.pop_first().expect("one element"),
            _ => Deriv::Alt(set),
        }
    }

    fn star(c: Deriv) -> Deriv {
        match c {
            Deriv::Empty | Deriv::Eps => Deriv::Eps,
            s @ Deriv::Star(_) => s,
            c => Deriv::Star(Box::new(c)),
        }
    }

    fn nullable(&self) -> bool {
        match self {
            Deriv::Empty | Deriv::Sym(_) => false,
            Deriv::Eps | Deriv::Star(_) => true,
            Deriv::Cat(l, r) => l.nullable() && r.nullable(),
            Deriv::Alt(set) => set.iter().any(Deriv::nullable),
        }
    }

    fn derive(&self, a: &str) -> Deriv {
        match self {
            Deriv::Empty | Deriv::Eps => Deriv::Empty,
            Deriv::Sym(s) => {
                if s == a {
                    Deriv::Eps
                } else {
                    Deriv::Empty
                }
            }
            Deriv::Cat(l, r) => {
                let head = Deriv::cat(l.derive(a), (**r).clone());
                if l.nullable() {
                    Deriv::alt(head, r.derive(a))
                } else {
                    head
                }
            }
            Deriv::Alt(set) => set.iter().fold(Deriv::Empty, |acc, d| Deriv::alt(acc, d.derive(a))),
            Deriv::Star(c) => Deriv::cat(c.derive(a), self.clone()),
        }
    }
}
