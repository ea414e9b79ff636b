//! Problem instances: directed multigraphs with exact costs, an optional
//! s-t pair and optional node weights.

use std::collections::HashMap;

use num_traits::Signed;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Closed tours, (ATSP LP).
    Atsp,
    /// s-t walks, (ATSPP LP).
    Atspp { s: usize, t: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub cost: Rational,
}

/// A validated instance. Absent edges stand for infinite cost.
///
/// Vertices are addressed by dense indices assigned in declaration order;
/// the original string ids are kept for I/O.
#[derive(Clone, Debug)]
pub struct Instance {
    name: String,
    vertices: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    mode: Mode,
    node_weights: Option<Vec<Rational>>,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.vertices == other.vertices
            && self.edges == other.edges
            && self.mode == other.mode
            && self.node_weights == other.node_weights
    }
}

/// On-disk form of an instance; every number is an exact rational string.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawInstance {
    pub name: String,
    pub mode: String,
    pub vertices: Vec<String>,
    pub edges: Vec<RawEdge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_weights: Option<Map<String, Value>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawEdge {
    pub tail: String,
    pub head: String,
    pub cost: Value,
}

fn value_to_rational(value: &Value) -> Result<Rational> {
    match value {
        Value::String(s) => rational::parse(s),
        Value::Number(n) if n.is_i64() => Ok(rational::int(n.as_i64().unwrap_or_default())),
        other => Err(Error::BadRational(other.to_string())),
    }
}

/// Checks a raw description and turns it into an [`Instance`].
pub fn validate_instance(raw: &RawInstance) -> Result<Instance> {
    let mut builder = InstanceBuilder::new(&raw.name);
    for v in &raw.vertices {
        builder.try_vertex(v)?;
    }
    for e in &raw.edges {
        let cost = value_to_rational(&e.cost)?;
        builder.try_edge(&e.tail, &e.head, cost)?;
    }
    match raw.mode.as_str() {
        "atsp" => {}
        "atspp" => {
            let (Some(s), Some(t)) = (&raw.s, &raw.t) else {
                return Err(Error::MissingEndpoints);
            };
            builder.endpoints(s, t)?;
        }
        other => return Err(Error::Malformed(format!("unknown mode {other:?}"))),
    }
    if let Some(weights) = &raw.node_weights {
        let mut by_index = vec![None; builder.vertices.len()];
        for (v, w) in weights {
            let i = builder.lookup(v)?;
            by_index[i] = Some(value_to_rational(w)?);
        }
        let mut out = Vec::with_capacity(by_index.len());
        for (i, w) in by_index.into_iter().enumerate() {
            match w {
                Some(w) => out.push(w),
                None => {
                    return Err(Error::Malformed(format!(
                        "node weight missing for {:?}",
                        builder.vertices[i]
                    )))
                }
            }
        }
        builder.node_weights = Some(out);
    }
    builder.build()
}

/// Incremental construction with validation at [`InstanceBuilder::build`].
#[derive(Clone, Debug, Default)]
pub struct InstanceBuilder {
    name: String,
    vertices: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    endpoints: Option<(usize, usize)>,
    node_weights: Option<Vec<Rational>>,
}

impl InstanceBuilder {
    pub fn new(name: &str) -> Self {
        InstanceBuilder { name: name.to_string(), ..Default::default() }
    }

    pub fn try_vertex(&mut self, name: &str) -> Result<usize> {
        if self.index.contains_key(name) {
            return Err(Error::DuplicateVertex(name.to_string()));
        }
        let i = self.vertices.len();
        self.vertices.push(name.to_string());
        self.index.insert(name.to_string(), i);
        Ok(i)
    }

    /// Adds a vertex whose name is known to be fresh.
    pub fn vertex(&mut self, name: &str) -> usize {
        self.try_vertex(name).expect("vertex names are unique")
    }

    fn lookup(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn try_edge(&mut self, tail: &str, head: &str, cost: Rational) -> Result<usize> {
        let tail = self.lookup(tail)?;
        let head = self.lookup(head)?;
        Ok(self.edge(tail, head, cost))
    }

    pub fn edge(&mut self, tail: usize, head: usize, cost: Rational) -> usize {
        self.edges.push(Edge { tail, head, cost });
        self.edges.len() - 1
    }

    pub fn endpoints(&mut self, s: &str, t: &str) -> Result<()> {
        let s = self.lookup(s)?;
        let t = self.lookup(t)?;
        self.endpoints = Some((s, t));
        Ok(())
    }

    pub fn endpoint_indices(&mut self, s: usize, t: usize) {
        self.endpoints = Some((s, t));
    }

    pub fn node_weights(&mut self, weights: Vec<Rational>) {
        self.node_weights = Some(weights);
    }

    pub fn build(self) -> Result<Instance> {
        let instance = self.build_unchecked();
        instance.validate()?;
        Ok(instance)
    }

    /// Skips validation; used for auxiliary instances whose feedback edge
    /// may carry a negative probe cost.
    pub(crate) fn build_unchecked(self) -> Instance {
        let mode = match self.endpoints {
            Some((s, t)) => Mode::Atspp { s, t },
            None => Mode::Atsp,
        };
        Instance {
            name: self.name,
            vertices: self.vertices,
            index: self.index,
            edges: self.edges,
            mode,
            node_weights: self.node_weights,
        }
    }
}

impl Instance {
    fn validate(&self) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::Empty);
        }
        let n = self.vertices.len();
        for e in &self.edges {
            if e.tail >= n || e.head >= n {
                return Err(Error::Malformed("edge endpoint out of range".into()));
            }
            if e.cost.is_negative() {
                return Err(Error::NegativeCost {
                    tail: self.vertices[e.tail].clone(),
                    head: self.vertices[e.head].clone(),
                    cost: rational::format(&e.cost),
                });
            }
        }
        if let Mode::Atspp { s, t } = self.mode {
            if s == t {
                return Err(Error::EqualEndpoints);
            }
        }
        if let Some(weights) = &self.node_weights {
            if weights.len() != n {
                return Err(Error::Malformed("node weight count differs from vertex count".into()));
            }
            if let Some(i) = weights.iter().position(|w| w.is_negative()) {
                return Err(Error::NegativeWeight(self.vertices[i].clone()));
            }
            for e in &self.edges {
                let expected = &weights[e.tail] + &weights[e.head];
                if expected != e.cost {
                    return Err(Error::NodeWeightMismatch {
                        tail: self.vertices[e.tail].clone(),
                        head: self.vertices[e.head].clone(),
                        cost: rational::format(&e.cost),
                        expected: rational::format(&expected),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Instance> {
        let raw: RawInstance = serde_json::from_str(text)?;
        validate_instance(&raw)
    }

    pub fn to_raw(&self) -> RawInstance {
        let (s, t) = match self.mode {
            Mode::Atspp { s, t } => (Some(self.vertices[s].clone()), Some(self.vertices[t].clone())),
            Mode::Atsp => (None, None),
        };
        RawInstance {
            name: self.name.clone(),
            mode: if self.is_atspp() { "atspp" } else { "atsp" }.to_string(),
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| RawEdge {
                    tail: self.vertices[e.tail].clone(),
                    head: self.vertices[e.head].clone(),
                    cost: Value::String(rational::format(&e.cost)),
                })
                .collect(),
            s,
            t,
            node_weights: self.node_weights.as_ref().map(|w| {
                self.vertices
                    .iter()
                    .zip(w)
                    .map(|(v, w)| (v.clone(), Value::String(rational::format(w))))
                    .collect()
            }),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("instance serializes")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Instance {
        self.name = name.to_string();
        self
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_atspp(&self) -> bool {
        matches!(self.mode, Mode::Atspp { .. })
    }

    pub fn endpoints(&self) -> Option<(usize, usize)> {
        match self.mode {
            Mode::Atspp { s, t } => Some((s, t)),
            Mode::Atsp => None,
        }
    }

    /// `(s, t)`, or an error naming `what` in ATSP mode.
    pub fn require_endpoints(&self, what: &str) -> Result<(usize, usize)> {
        self.endpoints()
            .ok_or_else(|| Error::Precondition(format!("{what} requires an atspp instance")))
    }

    pub fn node_weights(&self) -> Option<&[Rational]> {
        self.node_weights.as_deref()
    }

    pub fn digraph(&self) -> Digraph {
        Digraph::new(self.n(), self.edges.iter().map(|e| (e.tail, e.head)))
    }

    /// Copy keeping only the listed edges, in the given order.
    pub fn restrict_edges(&self, keep: &[usize]) -> Instance {
        Instance {
            name: self.name.clone(),
            vertices: self.vertices.clone(),
            index: self.index.clone(),
            edges: keep.iter().map(|&e| self.edges[e].clone()).collect(),
            mode: self.mode,
            node_weights: self.node_weights.clone(),
        }
    }

    /// Copy with one extra edge; the cost is not validated.
    pub(crate) fn with_extra_edge(&self, tail: usize, head: usize, cost: Rational) -> Instance {
        let mut out = self.clone();
        out.node_weights = None;
        out.edges.push(Edge { tail, head, cost });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn raw(json: &str) -> RawInstance {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn accepts_fig4_description() {
        let r = raw(r#"{"name":"fig4","mode":"atspp","vertices":["s","v","w","t"],
            "edges":[{"tail":"s","head":"v","cost":"0"},{"tail":"s","head":"w","cost":"0"},
                     {"tail":"v","head":"w","cost":"1"},{"tail":"v","head":"t","cost":"0"},
                     {"tail":"w","head":"t","cost":"0"}],"s":"s","t":"t"}"#);
        let inst = validate_instance(&r).unwrap();
        assert_eq!((inst.n(), inst.m()), (4, 5));
        assert_eq!(inst.endpoints(), Some((0, 3)));
        assert_eq!(inst.edge(2).cost, int(1));
    }

    #[test]
    fn rejects_negative_cost() {
        let r = raw(r#"{"name":"x","mode":"atsp","vertices":["a","b"],
            "edges":[{"tail":"a","head":"b","cost":"-1"}]}"#);
        let err = validate_instance(&r).unwrap_err();
        assert!(err.to_string().contains("negative cost"), "{err}");
    }

    #[test]
    fn rejects_node_weight_mismatch() {
        let r = raw(r#"{"name":"tri","mode":"atsp","vertices":["u","v","w"],
            "edges":[{"tail":"u","head":"v","cost":"2"},{"tail":"v","head":"w","cost":"3"},
                     {"tail":"w","head":"u","cost":"2"}],
            "node_weights":{"u":"1","v":"1","w":"1"}}"#);
        let err = validate_instance(&r).unwrap_err();
        assert!(err.to_string().contains("node-weight mismatch"), "{err}");
    }

    #[test]
    fn rejects_unknown_vertex_and_equal_endpoints() {
        let r = raw(r#"{"name":"x","mode":"atsp","vertices":["a"],
            "edges":[{"tail":"a","head":"z","cost":"1"}]}"#);
        assert!(matches!(validate_instance(&r), Err(Error::UnknownVertex(_))));
        let r = raw(r#"{"name":"x","mode":"atspp","vertices":["a","b"],"edges":[],"s":"a","t":"a"}"#);
        assert!(matches!(validate_instance(&r), Err(Error::EqualEndpoints)));
    }

    #[test]
    fn json_round_trip_is_stable() {
        let r = raw(r#"{"name":"nw","mode":"atspp","vertices":["s","t"],
            "edges":[{"tail":"s","head":"t","cost":"3/2"}],"s":"s","t":"t",
            "node_weights":{"s":"1","t":"1/2"}}"#);
        let inst = validate_instance(&r).unwrap();
        let text = inst.to_json();
        let back = Instance::from_json(&text).unwrap();
        assert_eq!(inst, back);
        assert_eq!(text, back.to_json());
    }
}
