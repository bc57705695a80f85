//! Graphs, words in right-angled Artin groups, and the word problem.
//!
//! `A(H)` has a generator `s_v` per vertex and the relations `s_v s_w = s_w s_v`
//! exactly for edges `vw`. A word is reduced when no two syllables on the same vertex
//! are separated only by syllables that commute with that vertex; reduced words have
//! minimal syllable length, and the identity is the only element with an empty one.

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("graph too small: {0}")]
    TooSmall(String),
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("value overflows 64 bits")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error("zero exponent on vertex {0}")]
    ZeroExponent(usize),
    #[error("cannot parse token {0:?}")]
    BadToken(String),
}

/// Simple undirected graph on vertices `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    vertex_count: usize,
    adjacency: Vec<bool>,
}

impl SimpleGraph {
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::TooSmall("a graph needs at least one vertex".into()));
        }
        let mut adjacency = vec![false; vertex_count * vertex_count];
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= vertex_count {
                    return Err(GraphError::VertexOutOfRange { vertex: x, count: vertex_count });
                }
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            if adjacency[u * vertex_count + v] {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            adjacency[u * vertex_count + v] = true;
            adjacency[v * vertex_count + u] = true;
        }
        Ok(Self { vertex_count, adjacency })
    }

    /// The cycle `C_n` with edges `{i, i+1 mod n}`.
    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::TooSmall(format!("cycle on {n} vertices")));
        }
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::new(n, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn is_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count && v < self.vertex_count && self.adjacency[u * self.vertex_count + v]
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.vertex_count;
        (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| self.is_edge(u, v))
            .collect()
    }

    pub fn non_edges(&self) -> Vec<(usize, usize)> {
        let n = self.vertex_count;
        (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !self.is_edge(u, v))
            .collect()
    }

    pub fn is_triangle_free(&self) -> bool {
        let n = self.vertex_count;
        !(0..n).any(|a| {
            (a + 1..n).any(|b| self.is_edge(a, b) && (b + 1..n).any(|c| self.is_edge(a, c) && self.is_edge(b, c)))
        })
    }
}

/// `cycle_graph` under its conventional name.
pub fn cycle_graph(n: usize) -> Result<SimpleGraph, GraphError> {
    SimpleGraph::cycle(n)
}

/// Genus `1 + (n−4)·2^(n−3)` of the closed surface whose group embeds in `A(C_n)`.
pub fn cycle_surface_genus(n: u32) -> Result<u64, GraphError> {
    if n < 5 {
        return Err(GraphError::TooSmall(format!("genus formula needs n >= 5, got {n}")));
    }
    1u64.checked_shl(n - 3)
        .filter(|_| n - 3 < 64)
        .and_then(|p| p.checked_mul(u64::from(n - 4)))
        .and_then(|x| x.checked_add(1))
        .ok_or(GraphError::Overflow)
}

/// A syllable `s_vertex^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub vertex: usize,
    pub exponent: i64,
}

/// A word in the generators; exponents are never zero.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    syllables: Vec<Syllable>,
}

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(syllables: Vec<(usize, i64)>) -> Result<Self, WordError> {
        if let Some(&(v, _)) = syllables.iter().find(|(_, e)| *e == 0) {
            return Err(WordError::ZeroExponent(v));
        }
        Ok(Self {
            syllables: syllables.into_iter().map(|(vertex, exponent)| Syllable { vertex, exponent }).collect(),
        })
    }

    pub fn generator(vertex: usize) -> Self {
        Self { syllables: vec![Syllable { vertex, exponent: 1 }] }
    }

    /// The commutator `s_v s_w s_v⁻¹ s_w⁻¹`.
    pub fn commutator(v: usize, w: usize) -> Self {
        Self::new(vec![(v, 1), (w, 1), (v, -1), (w, -1)]).expect("nonzero exponents")
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn syllable_count(&self) -> usize {
        self.syllables.len()
    }

    /// Total number of letters `Σ |exponent|`.
    pub fn letter_count(&self) -> u64 {
        self.syllables.iter().map(|s| s.exponent.unsigned_abs()).sum()
    }

    pub fn inverse(&self) -> Self {
        Self {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable { vertex: s.vertex, exponent: -s.exponent })
                .collect(),
        }
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut syllables = self.syllables.clone();
        syllables.extend_from_slice(&other.syllables);
        Self { syllables }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("1");
        }
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if s.exponent == 1 {
                write!(f, "s{}", s.vertex)?;
            } else {
                write!(f, "s{}^{}", s.vertex, s.exponent)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordError;

    /// Parses `"s0 s1^-2 s4^3"`; `"1"` or an empty string is the identity.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Self::empty());
        }
        let mut syllables = Vec::new();
        for token in s.split_whitespace() {
            let bad = || WordError::BadToken(token.to_string());
            let body = token.strip_prefix('s').ok_or_else(bad)?;
            let (v, e) = match body.split_once('^') {
                Some((v, e)) => (v, e.parse::<i64>().map_err(|_| bad())?),
                None => (body, 1),
            };
            syllables.push((v.parse::<usize>().map_err(|_| bad())?, e));
        }
        Self::new(syllables)
    }
}

/// Shuffle-and-cancel reduction.
///
/// Syllables are pushed one at a time; an incoming `s_v^e` scans back past syllables
/// commuting with `s_v` and merges into the first one on `v` it meets. The stack stays
/// reduced after every step, so a single pass suffices. Result has minimal syllable length.
pub fn reduce(word: &Word, graph: &SimpleGraph) -> Word {
    let mut stack: Vec<Syllable> = Vec::with_capacity(word.syllables.len());
    for &s in &word.syllables {
        push_reduced(&mut stack, s, graph);
    }
    Word { syllables: stack }
}

fn push_reduced(stack: &mut Vec<Syllable>, s: Syllable, graph: &SimpleGraph) {
    for i in (0..stack.len()).rev() {
        let u = stack[i].vertex;
        if u == s.vertex {
            stack[i].exponent += s.exponent;
            if stack[i].exponent == 0 {
                stack.remove(i);
            }
            return;
        }
        if !graph.is_edge(u, s.vertex) {
            break;
        }
    }
    stack.push(s);
}

pub fn is_trivial(word: &Word, graph: &SimpleGraph) -> bool {
    reduce(word, graph).is_empty()
}

/// Canonical spelling: the lexicographically least (by vertex) rearrangement of the
/// reduced word under commutation of adjacent generators.
pub fn normal_form(word: &Word, graph: &SimpleGraph) -> Word {
    let mut rest = reduce(word, graph).syllables;
    let mut out = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        let pick = (0..rest.len())
            .filter(|&j| rest[..j].iter().all(|p| graph.is_edge(p.vertex, rest[j].vertex)))
            .min_by_key(|&j| rest[j].vertex)
            .expect("first syllable is always movable");
        out.push(rest.remove(pick));
    }
    Word { syllables: out }
}

/// Whether appending a syllable on `vertex` to a word already in normal form keeps it
/// in normal form. Fails when the new syllable could merge with an earlier one or
/// could move left past a larger vertex.
pub fn extends_normal_form(prefix: &[Syllable], vertex: usize, graph: &SimpleGraph) -> bool {
    for s in prefix.iter().rev() {
        if s.vertex == vertex {
            return false;
        }
        if !graph.is_edge(s.vertex, vertex) {
            return true;
        }
        if s.vertex > vertex {
            return false;
        }
    }
    true
}

/// Exponent choices in enumeration order: `−bound, …, −1, 1, …, bound`.
pub fn exponent_choices(bound: i64) -> Vec<i64> {
    (-bound..=bound).filter(|&e| e != 0).collect()
}

/// Every non-identity group element with at most `max_syllables` syllables and
/// exponents bounded by `exponent_bound`, each exactly once, in normal form.
pub fn enumerate_words(graph: &SimpleGraph, max_syllables: usize, exponent_bound: i64) -> WordEnumerator<'_> {
    WordEnumerator {
        graph,
        max_syllables,
        exponents: exponent_choices(exponent_bound.max(0)),
        prefix: Vec::new(),
        choice: Vec::new(),
        started: false,
    }
}

/// Depth-first iterator behind [`enumerate_words`].
pub struct WordEnumerator<'g> {
    graph: &'g SimpleGraph,
    max_syllables: usize,
    exponents: Vec<i64>,
    prefix: Vec<Syllable>,
    choice: Vec<usize>,
    started: bool,
}

impl WordEnumerator<'_> {
    fn choice_count(&self) -> usize {
        self.graph.vertex_count() * self.exponents.len()
    }

    /// First admissible choice at index `>= from` for the next position.
    fn admissible(&self, from: usize) -> Option<usize> {
        let k = self.exponents.len();
        (from..self.choice_count()).find(|&c| extends_normal_form(&self.prefix, c / k, self.graph))
    }

    fn syllable(&self, c: usize) -> Syllable {
        let k = self.exponents.len();
        Syllable { vertex: c / k, exponent: self.exponents[c % k] }
    }

    fn push(&mut self, c: usize) {
        let s = self.syllable(c);
        self.prefix.push(s);
        self.choice.push(c);
    }
}

impl Iterator for WordEnumerator<'_> {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.exponents.is_empty() || self.max_syllables == 0 {
            return None;
        }
        if !self.started {
            self.started = true;
            let c = self.admissible(0)?;
            self.push(c);
            return Some(Word { syllables: self.prefix.clone() });
        }
        if self.prefix.len() < self.max_syllables {
            if let Some(c) = self.admissible(0) {
                self.push(c);
                return Some(Word { syllables: self.prefix.clone() });
            }
        }
        while let Some(last) = self.choice.pop() {
            self.prefix.pop();
            if let Some(c) = self.admissible(last + 1) {
                self.push(c);
                return Some(Word { syllables: self.prefix.clone() });
            }
        }
        None
    }
}
