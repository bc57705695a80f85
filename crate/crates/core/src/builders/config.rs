use serde_json::{json, Map, Value};

use super::BuildError;
use crate::exactfield::json::{matrix_from_json, matrix_to_json};
use crate::exactfield::{ExactMatrix, FieldError};
use crate::raag::SimpleGraph;
use crate::symspace::{flat_span, FlatSpan, GroupForm, GroupKind, Transvection};

/// Data attached to an edge `vw`: the span of the two generators and the axial
/// isometries of the remaining singular geodesics through the basepoint in that plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeData {
    pub pair: (usize, usize),
    /// `None` when the generators fail to span a flat (they do not commute, or no
    /// exact common eigenbasis exists).
    pub flat_span: Option<FlatSpan>,
    pub extras: Vec<ExactMatrix>,
}

/// A graph with one axial isometry per vertex and per-edge flat data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    name: String,
    graph: SimpleGraph,
    form: GroupForm,
    generators: Vec<Transvection>,
    edges: Vec<EdgeData>,
    provenance: Value,
}

impl Configuration {
    /// Assembles a configuration, computing each edge's span. Structural consistency
    /// (sizes, edges matching the graph, isometry of every matrix) is enforced here;
    /// the geometric hypotheses are left to [`Configuration::validate`] and the certifier.
    pub fn new(
        name: &str,
        graph: SimpleGraph,
        form: GroupForm,
        generators: Vec<ExactMatrix>,
        edges: Vec<((usize, usize), Vec<ExactMatrix>)>,
        provenance: Value,
    ) -> Result<Self, BuildError> {
        if generators.len() != graph.vertex_count() {
            return Err(BuildError::Invalid(format!(
                "{} generators for {} vertices",
                generators.len(),
                graph.vertex_count()
            )));
        }
        let generators = generators
            .into_iter()
            .map(|m| Transvection::new(m, form.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        let mut expected = graph.edges();
        let mut given: Vec<(usize, usize)> = edges.iter().map(|((u, v), _)| ((*u).min(*v), (*u).max(*v))).collect();
        expected.sort_unstable();
        given.sort_unstable();
        if expected != given {
            return Err(BuildError::Invalid(format!("edge data {given:?} does not match graph edges {expected:?}")));
        }
        let mut edge_data = Vec::with_capacity(edges.len());
        for ((v, w), extras) in edges {
            for e in &extras {
                if !form.is_isometry(e)? {
                    return Err(BuildError::Invalid(format!("singular-set member on edge {v}-{w} is not an isometry")));
                }
            }
            let span = flat_span(generators[v].matrix(), generators[w].matrix()).ok();
            edge_data.push(EdgeData { pair: (v, w), flat_span: span, extras });
        }
        Ok(Self { name: name.to_string(), graph, form, generators, edges: edge_data, provenance })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn form(&self) -> &GroupForm {
        &self.form
    }

    pub fn generators(&self) -> &[Transvection] {
        &self.generators
    }

    pub fn generator(&self, v: usize) -> &ExactMatrix {
        self.generators[v].matrix()
    }

    pub fn generator_matrices(&self) -> Vec<ExactMatrix> {
        self.generators.iter().map(|t| t.matrix().clone()).collect()
    }

    pub fn edges(&self) -> &[EdgeData] {
        &self.edges
    }

    pub fn provenance(&self) -> &Value {
        &self.provenance
    }

    /// `[γ_v, γ_w, extras…]` for the edge at position `index`.
    pub fn singular_set(&self, index: usize) -> Vec<ExactMatrix> {
        let e = &self.edges[index];
        let mut out = vec![self.generator(e.pair.0).clone(), self.generator(e.pair.1).clone()];
        out.extend(e.extras.iter().cloned());
        out
    }

    /// Generator commutation matches the graph, every edge spans a flat, and every
    /// singular-set member commutes with both endpoint generators.
    pub fn validate(&self) -> Result<(), BuildError> {
        let n = self.graph.vertex_count();
        for v in 0..n {
            for w in v + 1..n {
                let commute = self.generator(v).commutes_with(self.generator(w))?;
                if commute != self.graph.is_edge(v, w) {
                    return Err(BuildError::Invalid(format!(
                        "generators {v} and {w} {} but the graph says otherwise",
                        if commute { "commute" } else { "do not commute" }
                    )));
                }
            }
        }
        for e in &self.edges {
            let (v, w) = e.pair;
            if e.flat_span.is_none() {
                return Err(BuildError::Invalid(format!("edge {v}-{w} does not span a flat")));
            }
            for x in &e.extras {
                if !x.commutes_with(self.generator(v))? || !x.commutes_with(self.generator(w))? {
                    return Err(BuildError::Invalid(format!("singular-set member on edge {v}-{w} leaves the flat")));
                }
            }
        }
        Ok(())
    }

    /// A copy with generator `v` replaced; the result is not validated.
    pub fn with_generator(&self, v: usize, m: ExactMatrix) -> Result<Self, BuildError> {
        let mut gens = self.generator_matrices();
        if v >= gens.len() {
            return Err(BuildError::Invalid(format!("no vertex {v}")));
        }
        gens[v] = m;
        let edges = self.edges.iter().map(|e| (e.pair, e.extras.clone())).collect();
        Self::new(&self.name, self.graph.clone(), self.form.clone(), gens, edges, self.provenance.clone())
    }

    /// `P·c·P⁻¹` applied to every matrix.
    pub fn conjugate(&self, p: &ExactMatrix) -> Result<Self, BuildError> {
        let p_inv = p.inv()?;
        let conj = |m: &ExactMatrix| -> Result<ExactMatrix, FieldError> { p.try_mul(m)?.try_mul(&p_inv) };
        let gens = self.generators.iter().map(|t| conj(t.matrix())).collect::<Result<Vec<_>, _>>()?;
        let edges = self
            .edges
            .iter()
            .map(|e| Ok((e.pair, e.extras.iter().map(conj).collect::<Result<Vec<_>, FieldError>>()?)))
            .collect::<Result<Vec<_>, FieldError>>()?;
        let mut provenance = self.provenance.clone();
        if let Value::Object(map) = &mut provenance {
            map.insert("conjugated".into(), Value::Bool(true));
        }
        Self::new(&self.name, self.graph.clone(), self.form.clone(), gens, edges, provenance)
    }

    pub fn to_json(&self) -> Value {
        let group = match self.form.kind() {
            GroupKind::SpecialLinear(n) => json!({"kind": "SL", "n": n}),
            GroupKind::Orthogonal(p, q) => json!({"kind": "SO", "p": p, "q": q}),
        };
        let edges: Vec<Value> = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| {
                json!({
                    "pair": [e.pair.0, e.pair.1],
                    "flat_span": e.flat_span.as_ref().map(|s| s.forms().iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>()),
                    "singular_set": self.singular_set(i).iter().map(matrix_to_json).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "construction": self.name,
            "graph": {
                "vertex_count": self.graph.vertex_count(),
                "edges": self.graph.edges().iter().map(|&(u, v)| json!([u, v])).collect::<Vec<_>>(),
            },
            "group": group,
            "generators": self.generators.iter().map(|t| matrix_to_json(t.matrix())).collect::<Vec<_>>(),
            "edges": edges,
            "provenance": self.provenance,
        })
    }

    /// Rebuilds a configuration from [`Configuration::to_json`] output, recomputing and
    /// cross-checking every flat span.
    pub fn from_json(v: &Value) -> Result<Self, BuildError> {
        let bad = |what: &str| BuildError::Invalid(format!("configuration JSON: {what}"));
        let name = v.get("construction").and_then(Value::as_str).ok_or_else(|| bad("construction"))?;
        let g = v.get("graph").ok_or_else(|| bad("graph"))?;
        let count = g.get("vertex_count").and_then(Value::as_u64).ok_or_else(|| bad("vertex_count"))? as usize;
        let graph_edges: Vec<(usize, usize)> =
            serde_json::from_value(g.get("edges").cloned().unwrap_or(Value::Null)).map_err(|_| bad("graph edges"))?;
        let graph = SimpleGraph::new(count, &graph_edges)?;
        let group = v.get("group").ok_or_else(|| bad("group"))?;
        let dim = |key: &str| group.get(key).and_then(Value::as_u64).map(|x| x as usize).ok_or_else(|| bad(key));
        let form = match group.get("kind").and_then(Value::as_str) {
            Some("SL") => GroupForm::special_linear(dim("n")?),
            Some("SO") => GroupForm::orthogonal(dim("p")?, dim("q")?),
            _ => return Err(bad("group kind")),
        };
        let generators = v
            .get("generators")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("generators"))?
            .iter()
            .map(matrix_from_json)
            .collect::<Result<Vec<_>, _>>()?;
        let mut edges = Vec::new();
        let mut spans = Vec::new();
        for e in v.get("edges").and_then(Value::as_array).ok_or_else(|| bad("edges"))? {
            let pair: (usize, usize) =
                serde_json::from_value(e.get("pair").cloned().unwrap_or(Value::Null)).map_err(|_| bad("pair"))?;
            if pair.0 >= generators.len() || pair.1 >= generators.len() {
                return Err(bad("pair out of range"));
            }
            let set = e
                .get("singular_set")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("singular_set"))?
                .iter()
                .map(matrix_from_json)
                .collect::<Result<Vec<_>, _>>()?;
            if set.len() < 2 || set[0] != generators[pair.0] || set[1] != generators[pair.1] {
                return Err(bad("singular_set must start with the two endpoint generators"));
            }
            let span: Option<Vec<(i64, i64)>> =
                serde_json::from_value(e.get("flat_span").cloned().unwrap_or(Value::Null)).map_err(|_| bad("flat_span"))?;
            spans.push(span);
            edges.push((pair, set[2..].to_vec()));
        }
        let provenance = v.get("provenance").cloned().unwrap_or_else(|| Value::Object(Map::new()));
        let config = Self::new(name, graph, form, generators, edges, provenance)?;
        for (e, stored) in config.edges.iter().zip(spans) {
            if e.flat_span.as_ref().map(|s| s.forms().to_vec()) != stored {
                return Err(bad(&format!("flat span of edge {:?} does not match its matrices", e.pair)));
            }
        }
        Ok(config)
    }
}
