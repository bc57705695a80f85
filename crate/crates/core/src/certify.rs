//! Certificates for the finitely checkable hypotheses of the flat-configuration
//! criterion, plus word-level smoke tests and conjugacy fingerprints.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{json, Value};

use crate::builders::Configuration;
use crate::exactfield::json::element_to_json;
use crate::exactfield::{ExactMatrix, FieldElement};
use crate::modp::{mul_mod, ModularImage};
use crate::raag::{enumerate_words, Word};
use crate::symspace::{char_poly, flat_uniqueness, same_geodesic, singular_directions};

/// A geodesic in a configuration: the axis of a vertex generator, or an extra member
/// of an edge's singular set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeodesicId {
    Vertex(usize),
    Member { edge: (usize, usize), index: usize },
}

impl fmt::Display for GeodesicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeodesicId::Vertex(v) => write!(f, "γ{v}"),
            GeodesicId::Member { edge: (v, w), index } => write!(f, "η{v}{w}.{index}"),
        }
    }
}

impl GeodesicId {
    /// The isometry this id names in `c`, if it exists.
    pub fn matrix<'a>(&self, c: &'a Configuration) -> Option<&'a ExactMatrix> {
        match *self {
            GeodesicId::Vertex(v) => c.generators().get(v).map(|t| t.matrix()),
            GeodesicId::Member { edge, index } => c.edges().iter().find(|e| e.pair == edge)?.extras.get(index),
        }
    }

    fn to_json(self) -> Value {
        match self {
            GeodesicId::Vertex(v) => json!({"vertex": v}),
            GeodesicId::Member { edge: (v, w), index } => json!({"edge": [v, w], "member": index}),
        }
    }
}

/// Why a pair must be non-adjacent. Declaration order is reporting priority.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairReason {
    /// Generators of non-adjacent vertices.
    NonEdgeVertices,
    /// Extra singular geodesics of different edges, or an extra against a generator
    /// off its edge.
    EtaPairs,
    /// Members of `S_vw − {γ_w}` and `S_wx − {γ_w}`.
    SharedEndpoint,
    /// Members of the singular sets of disjoint edges.
    DisjointEdges,
}

impl PairReason {
    pub fn as_str(self) -> &'static str {
        match self {
            PairReason::NonEdgeVertices => "non_edge_vertices",
            PairReason::EtaPairs => "eta_pairs",
            PairReason::SharedEndpoint => "shared_endpoint",
            PairReason::DisjointEdges => "disjoint_edges",
        }
    }
}

/// An unordered pair of distinct geodesics that must not be adjacent. `incidences`
/// counts how many rule instances produced it before deduplication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairRequirement {
    pub left: GeodesicId,
    pub right: GeodesicId,
    pub reason: PairReason,
    pub incidences: usize,
}

/// The distinct geodesics of a configuration. Extras on the same geodesic as an
/// earlier entry are folded into it.
struct Registry {
    ids: Vec<GeodesicId>,
    matrices: Vec<ExactMatrix>,
    /// Per edge, indices into `ids` of its singular set (deduplicated, sorted).
    sets: Vec<BTreeSet<usize>>,
}

impl Registry {
    fn new(c: &Configuration) -> Self {
        let n = c.graph().vertex_count();
        let mut ids: Vec<GeodesicId> = (0..n).map(GeodesicId::Vertex).collect();
        let mut matrices = c.generator_matrices();
        let mut sets = Vec::with_capacity(c.edges().len());
        for e in c.edges() {
            let mut set: BTreeSet<usize> = [e.pair.0, e.pair.1].into_iter().collect();
            for (index, m) in e.extras.iter().enumerate() {
                let known = (0..matrices.len()).find(|&k| same_geodesic(&matrices[k], m).unwrap_or(false));
                let k = known.unwrap_or_else(|| {
                    ids.push(GeodesicId::Member { edge: e.pair, index });
                    matrices.push(m.clone());
                    matrices.len() - 1
                });
                set.insert(k);
            }
            sets.push(set);
        }
        Self { ids, matrices, sets }
    }

    fn is_vertex(&self, k: usize) -> bool {
        matches!(self.ids[k], GeodesicId::Vertex(_))
    }

    fn requirements(&self, c: &Configuration) -> Vec<(usize, usize, PairReason, usize)> {
        let graph = c.graph();
        let mut found: BTreeMap<(usize, usize), (PairReason, usize)> = BTreeMap::new();
        let mut add = |a: usize, b: usize, reason: PairReason| {
            // Generators joined by an edge must commute; the set rules would otherwise
            // pair γ_v ∈ S_uv with γ_w ∈ S_wx when vw is itself an edge.
            if self.is_vertex(a) && self.is_vertex(b) && graph.is_edge(a, b) {
                return;
            }
            let entry = found.entry((a.min(b), a.max(b))).or_insert((reason, 0));
            entry.0 = entry.0.min(reason);
            entry.1 += 1;
        };
        for (v, w) in graph.non_edges() {
            add(v, w, PairReason::NonEdgeVertices);
        }
        let edges: Vec<(usize, usize)> = c.edges().iter().map(|e| e.pair).collect();
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                let (e, f) = (edges[i], edges[j]);
                let shared = [e.0, e.1].into_iter().find(|&x| x == f.0 || x == f.1);
                let (left, right): (Vec<usize>, Vec<usize>) = match shared {
                    None => (self.sets[i].iter().copied().collect(), self.sets[j].iter().copied().collect()),
                    Some(w) => (
                        self.sets[i].iter().copied().filter(|&k| k != w).collect(),
                        self.sets[j].iter().copied().filter(|&k| k != w).collect(),
                    ),
                };
                let reason = if shared.is_some() { PairReason::SharedEndpoint } else { PairReason::DisjointEdges };
                for &a in &left {
                    for &b in &right {
                        add(a, b, reason);
                    }
                }
            }
        }
        for (i, e) in edges.iter().enumerate() {
            for &a in self.sets[i].iter().filter(|&&k| !self.is_vertex(k)) {
                for v in (0..graph.vertex_count()).filter(|&v| v != e.0 && v != e.1) {
                    add(a, v, PairReason::EtaPairs);
                }
                for (j, _) in edges.iter().enumerate().skip(i + 1) {
                    for &b in self.sets[j].iter().filter(|&&k| !self.is_vertex(k)) {
                        if !self.sets[i].contains(&b) || !self.sets[j].contains(&a) {
                            add(a, b, PairReason::EtaPairs);
                        }
                    }
                }
            }
        }
        found.into_iter().map(|((a, b), (reason, n))| (a, b, reason, n)).collect()
    }
}

/// Every pair of geodesics the criterion requires to be non-adjacent, deduplicated
/// across rules and tagged with the highest-priority rule that demands it.
pub fn required_pairs(c: &Configuration) -> Vec<PairRequirement> {
    let reg = Registry::new(c);
    reg.requirements(c)
        .into_iter()
        .map(|(a, b, reason, incidences)| PairRequirement { left: reg.ids[a], right: reg.ids[b], reason, incidences })
        .collect()
}

/// A nonzero entry of the additive commutator `XY − YX`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub row: usize,
    pub col: usize,
    pub value: FieldElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCheck {
    pub requirement: PairRequirement,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeCheck {
    pub pair: (usize, usize),
    pub spans_flat: bool,
    pub unique_flat: bool,
    /// Number of singular lines through the basepoint, `None` when infinite or undefined.
    pub singular_count: Option<usize>,
    /// Distinct geodesics listed in the edge's singular set.
    pub listed: usize,
    pub members_commute: bool,
}

impl EdgeCheck {
    fn failure(&self) -> Option<String> {
        let (v, w) = self.pair;
        if !self.spans_flat {
            return Some(format!("edge {v}-{w}: generators do not span a flat"));
        }
        if !self.unique_flat {
            return Some(format!("edge {v}-{w}: flat is not unique"));
        }
        let count = match self.singular_count {
            None => return Some(format!("edge {v}-{w}: infinitely many singular geodesics")),
            Some(k) => k,
        };
        if !self.members_commute {
            return Some(format!("edge {v}-{w}: singular-set members do not commute"));
        }
        if self.listed != count {
            return Some(format!("edge {v}-{w}: singular set lists {} of {count} geodesics", self.listed));
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(String),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub construction: String,
    pub adjacency_ok: bool,
    pub edges: Vec<EdgeCheck>,
    pub pairs: Vec<PairCheck>,
    pub verdict: Verdict,
}

impl Certificate {
    pub fn witnessed(&self) -> usize {
        self.pairs.iter().filter(|p| p.witness.is_some()).count()
    }

    /// Sum of rule incidences over all pairs, i.e. the count before deduplication.
    pub fn incidences(&self) -> usize {
        self.pairs.iter().map(|p| p.requirement.incidences).sum()
    }

    pub fn to_json(&self) -> Value {
        let pairs: Vec<Value> = self
            .pairs
            .iter()
            .map(|p| {
                let witness = p.witness.as_ref().map(|w| {
                    json!({"row": w.row, "col": w.col, "value": element_to_json(&w.value, &w.value.basis())})
                });
                json!({
                    "left": p.requirement.left.to_json(),
                    "right": p.requirement.right.to_json(),
                    "reason": p.requirement.reason.as_str(),
                    "incidences": p.requirement.incidences,
                    "witness": witness,
                })
            })
            .collect();
        let edges: Vec<Value> = self
            .edges
            .iter()
            .map(|e| {
                json!({
                    "pair": [e.pair.0, e.pair.1],
                    "unique_flat": e.unique_flat,
                    "singular_count": e.singular_count.map_or(json!("infinite"), |k| json!(k)),
                    "listed": e.listed,
                    "members_commute": e.members_commute,
                })
            })
            .collect();
        let (verdict, failure) = match &self.verdict {
            Verdict::Pass => ("pass", Value::Null),
            Verdict::Fail(why) => ("fail", json!(why)),
        };
        json!({
            "construction": self.construction,
            "adjacency_ok": self.adjacency_ok,
            "pair_count": self.pairs.len(),
            "incidence_count": self.incidences(),
            "pairs": pairs,
            "edges": edges,
            "verdict": verdict,
            "first_failure": failure,
        })
    }
}

fn witness(a: &ExactMatrix, b: &ExactMatrix) -> Option<Witness> {
    let comm = a.commutator(b).ok()?;
    comm.first_nonzero().map(|(row, col, value)| Witness { row, col, value: value.clone() })
}

/// Runs every check and records the outcome; never fails.
pub fn certify_configuration(c: &Configuration) -> Certificate {
    let n = c.graph().vertex_count();
    let mut failures = Vec::new();

    let mut adjacency_ok = true;
    for v in 0..n {
        for w in v + 1..n {
            let commute = c.generator(v).commutes_with(c.generator(w)).unwrap_or(false);
            if commute != c.graph().is_edge(v, w) {
                adjacency_ok = false;
                failures.push(format!(
                    "generators {v} and {w} {} commute, contrary to the graph",
                    if commute { "do" } else { "do not" }
                ));
            }
        }
    }

    let reg = Registry::new(c);
    let edges: Vec<EdgeCheck> = c
        .edges()
        .iter()
        .zip(&reg.sets)
        .map(|(e, set)| {
            let members: Vec<&ExactMatrix> = set.iter().map(|&k| &reg.matrices[k]).collect();
            let members_commute = members
                .iter()
                .enumerate()
                .all(|(i, a)| members[i + 1..].iter().all(|b| a.commutes_with(b).unwrap_or(false)));
            let (unique_flat, singular_count) = match &e.flat_span {
                Some(span) => (flat_uniqueness(span), singular_directions(span).count()),
                None => (false, None),
            };
            EdgeCheck {
                pair: e.pair,
                spans_flat: e.flat_span.is_some(),
                unique_flat,
                singular_count,
                listed: set.len(),
                members_commute,
            }
        })
        .collect();
    failures.extend(edges.iter().filter_map(EdgeCheck::failure));

    let pairs: Vec<PairCheck> = reg
        .requirements(c)
        .into_iter()
        .map(|(a, b, reason, incidences)| PairCheck {
            requirement: PairRequirement { left: reg.ids[a], right: reg.ids[b], reason, incidences },
            witness: witness(&reg.matrices[a], &reg.matrices[b]),
        })
        .collect();
    failures.extend(
        pairs
            .iter()
            .filter(|p| p.witness.is_none())
            .map(|p| format!("{} and {} are adjacent ({})", p.requirement.left, p.requirement.right, p.requirement.reason.as_str())),
    );

    let verdict = failures.into_iter().next().map_or(Verdict::Pass, Verdict::Fail);
    Certificate { construction: c.name().to_string(), adjacency_ok, edges, pairs, verdict }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmokeReport {
    pub words_checked: u64,
    pub all_nonidentity: bool,
    pub counterexample: Option<Word>,
    /// Prime used for the modular filter.
    pub prime: u64,
}

fn mul_mod_matrix(a: &[u64], b: &[u64], n: usize, p: u64) -> Vec<u64> {
    let mut out = vec![0u64; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] = (out[i * n + j] + mul_mod(x, b[k * n + j], p)) % p;
            }
        }
    }
    out
}

fn is_identity_flat(m: &[u64], n: usize) -> bool {
    m.iter().enumerate().all(|(k, &x)| x == u64::from(k / n == k % n))
}

/// Checks that every nontrivial reduced word with at most `max_syllables` syllables and
/// exponents in `±1…±exponent_bound` maps to a non-identity matrix.
///
/// Products are tracked modulo a prime `P` through a ring map of the coefficient ring
/// to `𝔽_P`: a non-identity image proves the exact product is not the identity. Words
/// whose image is the identity are recomputed exactly.
pub fn faithfulness_smoke(c: &Configuration, max_syllables: usize, exponent_bound: i64) -> SmokeReport {
    let bound = exponent_bound.max(0);
    let dim = c.form().dim();
    let gens = c.generator_matrices();
    let exps: Vec<i64> = (-bound..=bound).filter(|&e| e != 0).collect();
    let powers: Vec<Vec<ExactMatrix>> = gens
        .iter()
        .map(|g| exps.iter().map(|&e| g.pow(e).expect("generators are invertible")).collect())
        .collect();
    let image = ModularImage::for_matrices(powers.iter().flatten());
    let p = image.prime();
    let table: Vec<Vec<Vec<u64>>> = powers
        .iter()
        .map(|row| row.iter().map(|m| image.reduce_matrix(m).expect("prime chosen to fit")).collect())
        .collect();
    let exp_index = |e: i64| if e < 0 { (e + bound) as usize } else { (e + bound - 1) as usize };

    let identity: Vec<u64> = (0..dim * dim).map(|k| u64::from(k / dim == k % dim)).collect();
    let mut stack: Vec<Vec<u64>> = Vec::new();
    let mut checked = 0u64;
    for word in enumerate_words(c.graph(), max_syllables, bound) {
        let syl = word.syllables();
        let len = syl.len();
        stack.truncate(len - 1);
        let last = syl[len - 1];
        let prev = stack.last().unwrap_or(&identity);
        let next = mul_mod_matrix(prev, &table[last.vertex][exp_index(last.exponent)], dim, p);
        checked += 1;
        if is_identity_flat(&next, dim) {
            let exact = syl.iter().fold(ExactMatrix::identity(dim), |acc, s| {
                acc.try_mul(&powers[s.vertex][exp_index(s.exponent)]).expect("square matrices")
            });
            if exact.is_identity() {
                return SmokeReport { words_checked: checked, all_nonidentity: false, counterexample: Some(word), prime: p };
            }
        }
        stack.push(next);
    }
    SmokeReport { words_checked: checked, all_nonidentity: true, counterexample: None, prime: p }
}

/// Characteristic polynomials of the generators (coefficients from the constant term up).
pub fn conjugacy_fingerprint(c: &Configuration) -> Vec<Vec<FieldElement>> {
    c.generators().iter().map(|t| char_poly(t.matrix())).collect()
}

/// Whether two fingerprints agree as multisets of polynomials.
pub fn same_fingerprint(a: &[Vec<FieldElement>], b: &[Vec<FieldElement>]) -> bool {
    let key = |f: &[Vec<FieldElement>]| {
        let mut v: Vec<String> = f.iter().map(|p| p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")).collect();
        v.sort();
        v
    };
    key(a) == key(b)
}
