//! Connectivity pre-checks and the metric closure with path recovery.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::instance::{Instance, InstanceBuilder, Mode};
use crate::rational::Rational;
use crate::walk::Walk;

/// Fails with "no finite tour exists" unless a covering walk exists: the
/// strongly connected components must form a chain from s to t (ATSPP),
/// or the graph must be strongly connected (ATSP).
pub fn check_connectivity(instance: &Instance) -> Result<()> {
    let g = instance.digraph();
    let (from, to) = match instance.mode() {
        Mode::Atspp { s, t } => (s, t),
        Mode::Atsp => (0, 0),
    };
    let fwd = g.reachable_from(from, None);
    if let Some(v) = fwd.iter().position(|&b| !b) {
        return Err(Error::NoFiniteTour(format!(
            "{} is not reachable from {}",
            instance.vertex_name(v),
            instance.vertex_name(from)
        )));
    }
    let back = g.reaching(to, None);
    if let Some(v) = back.iter().position(|&b| !b) {
        return Err(Error::NoFiniteTour(format!(
            "{} cannot reach {}",
            instance.vertex_name(v),
            instance.vertex_name(to)
        )));
    }
    // one walk covers every component only if each reaches the next
    let chain = g.scc_chain(None);
    let comps = chain.components();
    for pair in comps.windows(2) {
        let joined = pair[0].iter().any(|&u| g.out_edges(u).iter().any(|&e| pair[1].contains(&g.edges()[e].1)));
        if !joined {
            return Err(Error::NoFiniteTour(format!(
                "no walk visits both {} and {}",
                instance.vertex_name(pair[0][0]),
                instance.vertex_name(pair[1][0])
            )));
        }
    }
    Ok(())
}

/// Shortest-path table of an instance; expands closure edges back into
/// walks of the original graph.
#[derive(Clone, Debug)]
pub struct PathMap {
    dist: Vec<Vec<Option<Rational>>>,
    first_edge: Vec<Vec<Option<usize>>>,
    heads: Vec<usize>,
    closure_pairs: Vec<(usize, usize)>,
}

impl PathMap {
    pub fn dist(&self, u: usize, v: usize) -> Option<&Rational> {
        self.dist[u][v].as_ref()
    }

    /// Original edges of a shortest `u`-`v` path (empty when `u == v`).
    pub fn expand(&self, u: usize, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut at = u;
        while at != v {
            let e = self.first_edge[at][v].expect("pair has a finite distance");
            out.push(e);
            at = self.heads[e];
            assert!(out.len() <= self.heads.len() + self.dist.len(), "path map loops");
        }
        out
    }

    /// Expands a walk over closure edges into a walk over original edges.
    pub fn expand_walk(&self, original: &Instance, closure_walk: &Walk) -> Result<Walk> {
        let mut edges = Vec::new();
        for &e in closure_walk.edges() {
            let (u, v) = self.closure_pairs[e];
            edges.extend(self.expand(u, v));
        }
        Walk::new(original, closure_walk.start(), edges)
    }
}

fn all_pairs(instance: &Instance) -> (Vec<Vec<Option<Rational>>>, Vec<Vec<Option<usize>>>) {
    let n = instance.n();
    let mut dist: Vec<Vec<Option<Rational>>> = vec![vec![None; n]; n];
    let mut first: Vec<Vec<Option<usize>>> = vec![vec![None; n]; n];
    for (v, row) in dist.iter_mut().enumerate() {
        row[v] = Some(Rational::zero());
    }
    for (i, e) in instance.edges().iter().enumerate() {
        if e.tail == e.head {
            continue;
        }
        let better = match &dist[e.tail][e.head] {
            None => true,
            Some(d) => e.cost < *d,
        };
        if better {
            dist[e.tail][e.head] = Some(e.cost.clone());
            first[e.tail][e.head] = Some(i);
        }
    }
    for k in 0..n {
        for i in 0..n {
            let Some(dik) = dist[i][k].clone() else { continue };
            if i == k {
                continue;
            }
            for j in 0..n {
                if j == k || j == i {
                    continue;
                }
                let Some(dkj) = &dist[k][j] else { continue };
                let through = &dik + dkj;
                let better = match &dist[i][j] {
                    None => true,
                    Some(d) => through < *d,
                };
                if better {
                    dist[i][j] = Some(through);
                    first[i][j] = first[i][k];
                }
            }
        }
    }
    (dist, first)
}

/// Complete instance on shortest-path costs (pairs with finite distance
/// only) plus the map back to original walks.
pub fn metric_closure(instance: &Instance) -> Result<(Instance, PathMap)> {
    check_connectivity(instance)?;
    let n = instance.n();
    let (dist, first_edge) = all_pairs(instance);
    let mut builder = InstanceBuilder::new(&format!("{}-closure", instance.name()));
    for v in instance.vertices() {
        builder.vertex(v);
    }
    if let Some((s, t)) = instance.endpoints() {
        builder.endpoint_indices(s, t);
    }
    let mut closure_pairs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            if let Some(d) = &dist[u][v] {
                builder.edge(u, v, d.clone());
                closure_pairs.push((u, v));
            }
        }
    }
    let complete = builder.build()?;
    let heads = instance.edges().iter().map(|e| e.head).collect();
    Ok((complete, PathMap { dist, first_edge, heads, closure_pairs }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::gen_fig4;
    use crate::rational::int;
    use crate::walk::walk_cost_and_check;
    use proptest::prelude::*;

    #[test]
    fn fig4_closure_distances() {
        let inst = gen_fig4();
        let (closure, map) = metric_closure(&inst).unwrap();
        let (s, t) = inst.endpoints().unwrap();
        assert_eq!(map.dist(s, t), Some(&int(0)));
        let path = map.expand(s, t);
        let walk = Walk::new(&inst, s, path).unwrap();
        assert_eq!(walk.vertices().len(), 3);
        assert_eq!(walk_cost_and_check(&inst, &walk, false).unwrap(), int(0));
        // t reaches nothing, so only pairs out of s, v, w exist.
        assert!(closure.edges().iter().all(|e| e.tail != t));
    }

    #[test]
    fn metric_instance_is_unchanged() {
        let mut b = InstanceBuilder::new("k3");
        for v in ["a", "b", "c"] {
            b.vertex(v);
        }
        for u in 0..3 {
            for v in 0..3 {
                if u != v {
                    b.edge(u, v, int(1));
                }
            }
        }
        let inst = b.build().unwrap();
        let (closure, _) = metric_closure(&inst).unwrap();
        assert_eq!(closure.edges(), inst.edges());
    }

    #[test]
    fn isolated_pair_has_no_tour() {
        let mut b = InstanceBuilder::new("iso");
        b.vertex("a");
        b.vertex("b");
        let err = metric_closure(&b.build().unwrap()).unwrap_err();
        assert!(err.to_string().contains("no finite tour exists"), "{err}");
    }

    proptest! {
        #[test]
        fn closure_is_metric_and_expansion_preserves_cost(
            n in 2usize..7,
            raw in proptest::collection::vec((0usize..7, 0usize..7, 0i64..6), 1..30)
        ) {
            let mut b = InstanceBuilder::new("p");
            for v in 0..n { b.vertex(&format!("v{v}")); }
            // a Hamiltonian cycle keeps the graph strongly connected
            for v in 0..n { b.edge(v, (v + 1) % n, int(5)); }
            for (u, v, c) in raw { b.edge(u % n, v % n, int(c)); }
            let inst = b.build().unwrap();
            let (closure, map) = metric_closure(&inst).unwrap();
            for a in 0..n { for b2 in 0..n { for c in 0..n {
                if let (Some(x), Some(y), Some(z)) = (map.dist(a, b2), map.dist(b2, c), map.dist(a, c)) {
                    prop_assert!(z <= &(x + y));
                }
            }}}
            for (i, e) in closure.edges().iter().enumerate() {
                let w = Walk::new(&closure, e.tail, vec![i]).unwrap();
                let expanded = map.expand_walk(&inst, &w).unwrap();
                prop_assert_eq!(walk_cost_and_check(&inst, &expanded, false).unwrap(), e.cost.clone());
            }
        }
    }
}
