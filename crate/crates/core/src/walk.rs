//! Walks: edge sequences with their derived vertex sequence.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Digraph, VertexSet};
use crate::instance::Instance;
use crate::rational::{self, Rational};

/// An edge sequence together with the vertices it passes. A walk with no
/// edges consists of its start vertex only.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Walk {
    vertices: Vec<usize>,
    edges: Vec<usize>,
}

impl Walk {
    pub fn trivial(v: usize) -> Walk {
        Walk { vertices: vec![v], edges: Vec::new() }
    }

    /// Checks that `edges` chain head-to-tail starting at `start`.
    pub fn along(graph: &Digraph, start: usize, edges: Vec<usize>) -> Result<Walk> {
        if start >= graph.n() {
            return Err(Error::InvalidWalk(format!("start vertex {start} out of range")));
        }
        let mut vertices = Vec::with_capacity(edges.len() + 1);
        vertices.push(start);
        let mut at = start;
        for (pos, &e) in edges.iter().enumerate() {
            let &(tail, head) = graph
                .edges()
                .get(e)
                .ok_or_else(|| Error::InvalidWalk(format!("edge {e} does not exist")))?;
            if tail != at {
                return Err(Error::InvalidWalk(format!(
                    "edge {e} at position {pos} leaves {tail} but the walk is at {at}"
                )));
            }
            at = head;
            vertices.push(head);
        }
        Ok(Walk { vertices, edges })
    }

    pub fn new(instance: &Instance, start: usize, edges: Vec<usize>) -> Result<Walk> {
        Walk::along(&instance.digraph(), start, edges)
    }

    /// Walk through the given vertices using the cheapest parallel edge
    /// (smallest index on ties) for every step.
    pub fn through(instance: &Instance, vertices: &[usize]) -> Result<Walk> {
        let (&first, rest) = vertices
            .split_first()
            .ok_or_else(|| Error::InvalidWalk("empty vertex sequence".into()))?;
        let mut edges = Vec::with_capacity(rest.len());
        let mut at = first;
        for &next in rest {
            let e = cheapest_edge(instance, at, next).ok_or_else(|| {
                Error::InvalidWalk(format!(
                    "no edge {}->{}",
                    instance.vertex_name(at),
                    instance.vertex_name(next)
                ))
            })?;
            edges.push(e);
            at = next;
        }
        Walk::new(instance, first, edges)
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().expect("walks hold at least one vertex")
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Appends `other`, which must start where `self` ends.
    pub fn extend(&mut self, other: &Walk) {
        assert_eq!(self.end(), other.start(), "walks must meet to be concatenated");
        self.vertices.extend_from_slice(&other.vertices[1..]);
        self.edges.extend_from_slice(&other.edges);
    }

    /// Appends one edge leaving the current end.
    pub fn push_edge(&mut self, edge: usize, head: usize) {
        self.edges.push(edge);
        self.vertices.push(head);
    }

    /// Number of edges entering and leaving `set`.
    pub fn crossings(&self, set: &VertexSet) -> (usize, usize) {
        let mut enters = 0;
        let mut leaves = 0;
        for pair in self.vertices.windows(2) {
            match (set.contains(pair[0]), set.contains(pair[1])) {
                (false, true) => enters += 1,
                (true, false) => leaves += 1,
                _ => {}
            }
        }
        (enters, leaves)
    }

    /// Removes closed sub-walks so that no vertex repeats.
    pub fn loop_erased(&self) -> Walk {
        let mut vertices: Vec<usize> = Vec::with_capacity(self.vertices.len());
        let mut edges: Vec<usize> = Vec::with_capacity(self.edges.len());
        vertices.push(self.vertices[0]);
        for (i, &e) in self.edges.iter().enumerate() {
            let head = self.vertices[i + 1];
            if let Some(pos) = vertices.iter().position(|&v| v == head) {
                vertices.truncate(pos + 1);
                edges.truncate(pos);
            } else {
                vertices.push(head);
                edges.push(e);
            }
        }
        Walk { vertices, edges }
    }

    pub fn to_json(&self, instance: &Instance) -> serde_json::Value {
        #[derive(Serialize)]
        struct WalkJson<'a> {
            vertices: Vec<&'a str>,
            cost: String,
        }
        let cost = self.edges.iter().map(|&e| &instance.edge(e).cost).sum::<Rational>();
        serde_json::to_value(WalkJson {
            vertices: self.vertices.iter().map(|&v| instance.vertex_name(v)).collect(),
            cost: rational::format(&cost),
        })
        .expect("walk serializes")
    }
}

pub fn cheapest_edge(instance: &Instance, tail: usize, head: usize) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, e) in instance.edges().iter().enumerate() {
        if e.tail == tail && e.head == head && best.is_none_or(|b| e.cost < instance.edge(b).cost) {
            best = Some(i);
        }
    }
    best
}

/// Total cost of `walk`, re-validated against `instance`; with
/// `require_cover` every vertex must be visited.
pub fn walk_cost_and_check(instance: &Instance, walk: &Walk, require_cover: bool) -> Result<Rational> {
    let checked = Walk::new(instance, walk.start(), walk.edges.clone())?;
    let mut cost = Rational::zero();
    for &e in checked.edges() {
        cost += &instance.edge(e).cost;
    }
    if require_cover {
        let mut seen = vec![false; instance.n()];
        for &v in checked.vertices() {
            seen[v] = true;
        }
        if let Some(v) = seen.iter().position(|&b| !b) {
            return Err(Error::CoverViolation(instance.vertex_name(v).to_string()));
        }
    }
    Ok(cost)
}

/// Like [`walk_cost_and_check`] with cover, and the walk must run from s
/// to t.
pub fn st_tour_cost(instance: &Instance, walk: &Walk) -> Result<Rational> {
    let (s, t) = instance.require_endpoints("an s-t tour")?;
    if walk.start() != s || walk.end() != t {
        return Err(Error::InvalidWalk(format!(
            "walk runs {}->{} instead of {}->{}",
            instance.vertex_name(walk.start()),
            instance.vertex_name(walk.end()),
            instance.vertex_name(s),
            instance.vertex_name(t)
        )));
    }
    walk_cost_and_check(instance, walk, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::gen_fig4;
    use crate::rational::int;

    #[test]
    fn fig4_walk_costs() {
        let inst = gen_fig4();
        let walk = Walk::through(&inst, &[0, 1, 2, 3]).unwrap();
        assert_eq!(walk_cost_and_check(&inst, &walk, true).unwrap(), int(1));
        assert_eq!(st_tour_cost(&inst, &walk).unwrap(), int(1));
    }

    #[test]
    fn empty_walk_costs_nothing() {
        let inst = gen_fig4();
        assert_eq!(walk_cost_and_check(&inst, &Walk::trivial(0), false).unwrap(), int(0));
    }

    #[test]
    fn missing_vertex_is_a_cover_violation() {
        let inst = gen_fig4();
        let walk = Walk::through(&inst, &[0, 1, 3]).unwrap();
        let err = walk_cost_and_check(&inst, &walk, true).unwrap_err();
        assert!(matches!(err, Error::CoverViolation(ref v) if v == "w"), "{err}");
    }

    #[test]
    fn broken_chain_is_rejected() {
        let inst = gen_fig4();
        // s->v followed by w->t does not chain.
        assert!(Walk::new(&inst, 0, vec![0, 4]).is_err());
    }

    #[test]
    fn loop_erasure_drops_cycles() {
        let g = Digraph::new(3, [(0, 1), (1, 0), (1, 2)]);
        let w = Walk::along(&g, 0, vec![0, 1, 0, 2]).unwrap();
        let erased = w.loop_erased();
        assert_eq!(erased.vertices(), &[0, 1, 2]);
        assert_eq!(erased.edges(), &[0, 2]);
    }
}
