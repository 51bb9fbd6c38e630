//! Query automata: the Glushkov (position) automaton of a regex and its
//! determinization by subset construction.
//!
//! Automata carry their own symbol alphabet, interned in order of first
//! occurrence in the regex. Mapping graph labels onto these symbols is the
//! job of the query compiler in [`crate::rpq`].

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::io::{self, Write};

use crate::graph::Interner;
use crate::regex::RegexAst;

/// Index into an automaton's alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolId(pub u32);

pub type StateId = u32;

/// An ε-free nondeterministic automaton.
#[derive(Debug, Clone)]
pub struct Nfa {
    alphabet: Interner,
    state_count: usize,
    finals: BTreeSet<StateId>,
    /// Sorted, duplicate-free.
    transitions: Vec<(StateId, SymbolId, StateId)>,
}

impl Nfa {
    pub fn new(
        alphabet: Interner,
        state_count: usize,
        finals: impl IntoIterator<Item = StateId>,
        transitions: impl IntoIterator<Item = (StateId, SymbolId, StateId)>,
    ) -> Self {
        let mut transitions: Vec<_> = transitions.into_iter().collect();
        transitions.sort_unstable();
        transitions.dedup();
        let finals: BTreeSet<_> = finals.into_iter().collect();
        assert!(state_count >= 1, "automaton needs an initial state");
        assert!(finals.iter().all(|&q| (q as usize) < state_count));
        assert!(transitions
            .iter()
            .all(|&(p, a, q)| (p as usize) < state_count
                && (q as usize) < state_count
                && (a.0 as usize) < alphabet.len()));
        Nfa { alphabet, state_count, finals, transitions }
    }

    pub fn alphabet(&self) -> &Interner {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn initial(&self) -> StateId {
        0
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn transitions(&self) -> &[(StateId, SymbolId, StateId)] {
        &self.transitions
    }

    pub fn write_dump<W: Write>(&self, out: W) -> io::Result<()> {
        write_dump(
            out,
            "nfa",
            &self.alphabet,
            self.state_count,
            self.finals.iter().copied(),
            self.transitions.iter().copied(),
        )
    }
}

/// A deterministic automaton with a partial transition function. State 0 is
/// initial; every state is reachable from it.
#[derive(Debug, Clone)]
pub struct Dfa {
    alphabet: Interner,
    state_count: usize,
    finals: Vec<bool>,
    /// Row-major `state * |alphabet| + symbol`.
    table: Vec<Option<StateId>>,
}

impl Dfa {
    pub fn alphabet(&self) -> &Interner {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn initial(&self) -> StateId {
        0
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals[q as usize]
    }

    pub fn finals(&self) -> impl Iterator<Item = StateId> + '_ {
        self.finals
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(|(q, _)| q as StateId)
    }

    pub fn symbol(&self, name: &str) -> Option<SymbolId> {
        self.alphabet.get(name).map(SymbolId)
    }

    #[inline]
    pub fn next(&self, q: StateId, a: SymbolId) -> Option<StateId> {
        self.table[q as usize * self.alphabet.len() + a.0 as usize]
    }

    /// All transitions, ordered by source state then symbol.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, SymbolId, StateId)> + '_ {
        let width = self.alphabet.len();
        self.table.iter().enumerate().filter_map(move |(i, t)| {
            t.map(|q| ((i / width) as StateId, SymbolId((i % width) as u32), q))
        })
    }

    pub fn accepts(&self, word: &[SymbolId]) -> bool {
        let mut q = self.initial();
        for &a in word {
            match self.next(q, a) {
                Some(r) => q = r,
                None => return false,
            }
        }
        self.is_final(q)
    }

    /// Like [`Dfa::accepts`] for a word of label names; names outside the
    /// alphabet have no transition.
    pub fn accepts_labels<S: AsRef<str>>(&self, word: &[S]) -> bool {
        let mut syms = Vec::with_capacity(word.len());
        for s in word {
            match self.symbol(s.as_ref()) {
                Some(a) => syms.push(a),
                None => return false,
            }
        }
        self.accepts(&syms)
    }

    pub fn write_dump<W: Write>(&self, out: W) -> io::Result<()> {
        write_dump(out, "dfa", &self.alphabet, self.state_count, self.finals(), self.transitions())
    }
}

fn write_dump<W: Write>(
    mut out: W,
    kind: &str,
    alphabet: &Interner,
    state_count: usize,
    finals: impl Iterator<Item = StateId>,
    transitions: impl Iterator<Item = (StateId, SymbolId, StateId)>,
) -> io::Result<()> {
    let finals: Vec<String> = finals.map(|q| q.to_string()).collect();
    writeln!(out, "# {kind} states={state_count} initial=0 finals={}", finals.join(","))?;
    for (p, a, q) in transitions {
        writeln!(out, "{p}\t{}\t{q}", alphabet.name(a.0).unwrap_or("?"))?;
    }
    Ok(())
}

/// Position automaton: one state per symbol occurrence plus the initial
/// state 0. No ε-transitions, and nothing enters state 0.
pub fn glushkov(ast: &RegexAst) -> Nfa {
    struct Info {
        nullable: bool,
        first: Vec<usize>,
        last: Vec<usize>,
    }

    struct Builder {
        alphabet: Interner,
        position_symbol: Vec<SymbolId>, // index 0 unused
        follow: Vec<BTreeSet<usize>>,
    }

    impl Builder {
        fn link(&mut self, from: &[usize], to: &[usize]) {
            for &p in from {
                self.follow[p].extend(to.iter().copied());
            }
        }

        fn visit(&mut self, ast: &RegexAst) -> Info {
            match ast {
                RegexAst::Symbol(s) => {
                    let sym = SymbolId(self.alphabet.intern(s));
                    let pos = self.position_symbol.len();
                    self.position_symbol.push(sym);
                    self.follow.push(BTreeSet::new());
                    Info { nullable: false, first: vec![pos], last: vec![pos] }
                }
                RegexAst::Epsilon => Info { nullable: true, first: vec![], last: vec![] },
                RegexAst::Union(l, r) => {
                    let l = self.visit(l);
                    let r = self.visit(r);
                    Info {
                        nullable: l.nullable || r.nullable,
                        first: [l.first, r.first].concat(),
                        last: [l.last, r.last].concat(),
                    }
                }
                RegexAst::Concat(l, r) => {
                    let l = self.visit(l);
                    let r = self.visit(r);
                    self.link(&l.last, &r.first);
                    let first = if l.nullable { [l.first, r.first.clone()].concat() } else { l.first };
                    let last = if r.nullable { [l.last, r.last.clone()].concat() } else { r.last };
                    Info { nullable: l.nullable && r.nullable, first, last }
                }
                RegexAst::Star(c) | RegexAst::Plus(c) => {
                    let c_info = self.visit(c);
                    self.link(&c_info.last, &c_info.first);
                    let nullable = matches!(ast, RegexAst::Star(_)) || c_info.nullable;
                    Info { nullable, ..c_info }
                }
                RegexAst::Optional(c) => Info { nullable: true, ..self.visit(c) },
            }
        }
    }

    let mut b = Builder {
        alphabet: Interner::new(),
        position_symbol: vec![SymbolId(u32::MAX)],
        follow: vec![BTreeSet::new()],
    };
    let root = b.visit(ast);
    let mut transitions = Vec::new();
    for &p in &root.first {
        transitions.push((0, b.position_symbol[p], p as StateId));
    }
    for (p, follow) in b.follow.iter().enumerate() {
        for &q in follow {
            transitions.push((p as StateId, b.position_symbol[q], q as StateId));
        }
    }
    let mut finals: Vec<StateId> = root.last.iter().map(|&p| p as StateId).collect();
    if root.nullable {
        finals.push(0);
    }
    Nfa::new(b.alphabet, b.position_symbol.len(), finals, transitions)
}

/// Subset construction over reachable subsets. States are numbered in
/// breadth-first discovery order, exploring symbols in ascending id order.
pub fn determinize(nfa: &Nfa) -> Dfa {
    let width = nfa.alphabet.len();
    let mut out_edges: Vec<Vec<(SymbolId, StateId)>> = vec![Vec::new(); nfa.state_count];
    for &(p, a, q) in &nfa.transitions {
        out_edges[p as usize].push((a, q));
    }

    let mut ids: HashMap<Vec<StateId>, StateId> = HashMap::new();
    let mut subsets: Vec<Vec<StateId>> = Vec::new();
    let mut table: Vec<Option<StateId>> = Vec::new();
    let mut queue = VecDeque::new();

    let start = vec![nfa.initial()];
    ids.insert(start.clone(), 0);
    subsets.push(start);
    table.resize(width, None);
    queue.push_back(0 as StateId);

    let mut targets: Vec<BTreeSet<StateId>> = vec![BTreeSet::new(); width];
    while let Some(d) = queue.pop_front() {
        for t in &mut targets {
            t.clear();
        }
        for &p in &subsets[d as usize] {
            for &(a, q) in &out_edges[p as usize] {
                targets[a.0 as usize].insert(q);
            }
        }
        for (a, target) in targets.iter().enumerate() {
            if target.is_empty() {
                continue;
            }
            let key: Vec<StateId> = target.iter().copied().collect();
            let id = match ids.get(&key) {
                Some(&id) => id,
                None => {
                    let id = subsets.len() as StateId;
                    ids.insert(key.clone(), id);
                    subsets.push(key);
                    table.resize(table.len() + width, None);
                    queue.push_back(id);
                    id
                }
            };
            table[d as usize * width + a] = Some(id);
        }
    }

    let finals = subsets
        .iter()
        .map(|s| s.iter().any(|q| nfa.finals.contains(q)))
        .collect();
    Dfa { alphabet: nfa.alphabet.clone(), state_count: subsets.len(), finals, table }
}

/// `determinize(glushkov(ast))`.
pub fn compile(ast: &RegexAst) -> Dfa {
    determinize(&glushkov(ast))
}

pub fn accepts(dfa: &Dfa, word: &[SymbolId]) -> bool {
    dfa.accepts(word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regex::parse_regex;

    fn nfa(s: &str) -> Nfa {
        glushkov(&parse_regex(s).unwrap())
    }

    fn dfa(s: &str) -> Dfa {
        compile(&parse_regex(s).unwrap())
    }

    fn words(alphabet: &[&'static str], max_len: usize) -> Vec<Vec<&'static str>> {
        let mut all = vec![vec![]];
        let mut frontier = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for &a in alphabet {
                    let mut w2: Vec<&str> = w.clone();
                    w2.push(a);
                    next.push(w2);
                }
            }
            all.extend(next.iter().cloned());
            frontier = next;
        }
        all
    }

    #[test]
    fn single_symbol() {
        let n = nfa("a");
        assert_eq!(n.state_count(), 2);
        assert_eq!(n.transitions(), &[(0, SymbolId(0), 1)]);
        assert!(!n.finals().contains(&0));
        assert_eq!(n.finals().iter().copied().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn star_of_symbol() {
        let n = nfa("a*");
        assert_eq!(n.state_count(), 2);
        assert_eq!(n.transitions(), &[(0, SymbolId(0), 1), (1, SymbolId(0), 1)]);
        assert_eq!(n.finals().iter().copied().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn union_with_shared_prefix_merges_on_determinization() {
        let n = nfa("a b | a c");
        assert_eq!(n.state_count(), 5);
        // two `a` transitions from the initial state
        assert_eq!(n.transitions().iter().filter(|t| t.0 == 0).count(), 2);
        let d = determinize(&n);
        // {0} -a-> {1,3} -b-> {2}, -c-> {4}
        assert_eq!(d.state_count(), 4);
        let a = d.symbol("a").unwrap();
        assert_eq!(d.transitions().filter(|&(p, s, _)| p == 0 && s == a).count(), 1);
        for w in words(&["a", "b", "c"], 4) {
            let expected = w == ["a", "b"] || w == ["a", "c"];
            assert_eq!(d.accepts_labels(&w), expected, "{w:?}");
        }
    }

    #[test]
    fn classic_ends_with_a() {
        let d = dfa("(a|b)* a");
        // positions a=1 b=2 a=3; reachable subsets by hand:
        // {0} -a-> {1,3}, {0} -b-> {2}, and {1,3}, {2} both go a -> {1,3}, b -> {2}.
        // Not minimal ({0} and {2} are equivalent); no minimization is done.
        assert_eq!(d.state_count(), 3);
        for w in words(&["a", "b"], 6) {
            assert_eq!(d.accepts_labels(&w), w.last() == Some(&"a"), "{w:?}");
        }
    }

    #[test]
    fn deterministic_input_keeps_structure() {
        let n = nfa("a b c");
        let d = determinize(&n);
        assert_eq!(d.state_count(), n.state_count());
        let got: Vec<_> = d.transitions().collect();
        assert_eq!(got, n.transitions());
    }

    #[test]
    fn empty_language_has_no_finals() {
        let alphabet = {
            let mut i = Interner::new();
            i.intern("a");
            i
        };
        let n = Nfa::new(alphabet, 3, [2], [(0, SymbolId(0), 1)]);
        let d = determinize(&n);
        assert_eq!(d.finals().count(), 0);
        assert_eq!(d.state_count(), 2);
    }

    #[test]
    fn acceptance_basics() {
        let d = dfa("a*");
        assert!(d.accepts(&[]));
        let d = dfa("a b");
        assert!(d.accepts_labels(&["a", "b"]));
        assert!(!d.accepts_labels(&["a"]));
        assert!(!d.accepts_labels(&["a", "z"]));
    }

    #[test]
    fn glushkov_initial_has_no_incoming() {
        for s in ["(a|b)* a", "(a b)+ c?", "a** | ()", "((a|()) b*)*"] {
            let n = nfa(s);
            assert!(n.transitions().iter().all(|&(_, _, q)| q != 0), "{s}");
            assert_eq!(n.state_count(), parse_regex(s).unwrap().symbols().len() + 1);
        }
    }

    #[test]
    fn dump_format() {
        let mut buf = Vec::new();
        dfa("a b*").write_dump(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "# dfa states=3 initial=0 finals=1,2\n0\ta\t1\n1\tb\t2\n2\tb\t2\n");
    }
}
