//! Structural certificates on support graphs: chains of tight sets,
//! paths respecting a laminar family, vertex-avoiding path pairs and the
//! dual improvement step.

use std::collections::BTreeSet;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::graph::{Digraph, VertexSet};
use crate::instance::{Instance, Mode};
use crate::rational::Rational;
use crate::relaxation::{verify_dual, DualSolution, LpSolution};
use crate::walk::Walk;

/// Strongly connected components `U_1..U_l` of `G[U]` with the edge sets
/// `δ⁺(U_i) = δ⁻(U_{i+1})` linking them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainDecomposition {
    pub set: VertexSet,
    pub components: Vec<VertexSet>,
    pub links: Vec<Vec<usize>>,
}

fn entering(instance: &Instance, set: &VertexSet) -> BTreeSet<usize> {
    instance
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| !set.contains(e.tail) && set.contains(e.head))
        .map(|(i, _)| i)
        .collect()
}

fn leaving(instance: &Instance, set: &VertexSet) -> BTreeSet<usize> {
    instance
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| set.contains(e.tail) && !set.contains(e.head))
        .map(|(i, _)| i)
        .collect()
}

fn require_support_graph(instance: &Instance, lp: &LpSolution) -> Result<()> {
    if lp.x.len() != instance.m() || lp.x.iter().any(|x| !x.is_positive()) {
        return Err(Error::Precondition("instance is not the support graph of the given solution".into()));
    }
    Ok(())
}

/// Chain of components of `G[U]` for `U = V` or a tight cut set `U`,
/// with every boundary identity checked.
pub fn tight_chain(instance: &Instance, lp: &LpSolution, set: &VertexSet) -> Result<ChainDecomposition> {
    require_support_graph(instance, lp)?;
    let n = instance.n();
    let whole = set.len() == n;
    if set.is_empty() || set.iter().any(|v| v >= n) {
        return Err(Error::Precondition(format!("{set} is not a vertex subset")));
    }
    if !whole {
        if let Mode::Atspp { s, t } = instance.mode() {
            if set.contains(s) || set.contains(t) {
                return Err(Error::Precondition(format!("{set} contains s or t")));
            }
        }
        if lp.cut_value(instance, set) != Rational::from_integer(2.into()) {
            return Err(Error::Precondition(format!("{set} is not tight")));
        }
    }
    let graph = instance.digraph();
    let chain = graph.scc_chain(Some(&set.mask(n)));
    let components: Vec<VertexSet> = chain.components().iter().map(|c| VertexSet::new(c.clone())).collect();
    let l = components.len();
    let fail = |what: String| Err(Error::Internal(format!("chain of {set}: {what}")));
    if entering(instance, set) != entering(instance, &components[0]) {
        return fail("edges entering U do not all enter U_1".into());
    }
    if leaving(instance, set) != leaving(instance, &components[l - 1]) {
        return fail("edges leaving U do not all leave U_l".into());
    }
    let mut links = Vec::with_capacity(l.saturating_sub(1));
    for i in 0..l - 1 {
        let out = leaving(instance, &components[i]);
        if out.is_empty() || out != entering(instance, &components[i + 1]) {
            return fail(format!("components {} and {} are not linked exactly", i + 1, i + 2));
        }
        links.push(out.into_iter().collect());
    }
    if whole {
        if let Mode::Atspp { s, t } = instance.mode() {
            if !components[0].contains(s) || !components[l - 1].contains(t) {
                return fail("s or t is not at the end of the chain".into());
            }
        }
    }
    Ok(ChainDecomposition { set: set.clone(), components, links })
}

/// Repeatedly reroutes `walk` through the largest set it enters or leaves
/// more than once, then erases loops. Entries of a tight set all reach its
/// first component, exits all leave from its last one, which keeps the
/// detours inside the set.
fn respect_sets(graph: &Digraph, walk: Walk, sets: &[VertexSet]) -> Result<Walk> {
    let mut walk = walk;
    let budget = 4 * (sets.len() + 1) * (graph.n() + 1) * (graph.n() + 1);
    for _ in 0..budget {
        let violated = sets
            .iter()
            .filter(|set| {
                let (enters, leaves) = walk.crossings(set);
                enters > 1 || leaves > 1
            })
            .max_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.cmp(a)));
        let Some(set) = violated else {
            return Ok(walk.loop_erased());
        };
        let verts = walk.vertices().to_vec();
        let (enters, _) = walk.crossings(set);
        let positions: Vec<usize> = if enters > 1 {
            (1..verts.len()).filter(|&i| !set.contains(verts[i - 1]) && set.contains(verts[i])).collect()
        } else {
            (0..verts.len() - 1).filter(|&i| set.contains(verts[i]) && !set.contains(verts[i + 1])).collect()
        };
        let (from, to) = (positions[0], *positions.last().expect("at least two crossings"));
        let mask = set.mask(graph.n());
        let detour = graph.bfs_path(verts[from], verts[to], Some(&mask)).ok_or_else(|| {
            Error::Precondition(format!("no path inside {set} between two of its crossings; the set is not tight"))
        })?;
        let edges = walk.edges();
        let mut new_edges = edges[..from].to_vec();
        new_edges.extend(detour);
        new_edges.extend_from_slice(&edges[to..]);
        walk = Walk::along(graph, walk.start(), new_edges)?;
    }
    Err(Error::Internal("rerouting through violated sets did not settle".into()))
}

/// A `v`-`w` path in `G[Ū]` entering and leaving every support set of the
/// dual at most once.
pub fn laminar_respecting_path(
    instance: &Instance,
    dual: &DualSolution,
    within: &VertexSet,
    v: usize,
    w: usize,
) -> Result<Walk> {
    if !dual.laminar {
        return Err(Error::Precondition("dual support is not laminar".into()));
    }
    let n = instance.n();
    if within.len() != n && !dual.y.contains_key(within) {
        return Err(Error::Precondition(format!("{within} is neither V nor a support set")));
    }
    if !within.contains(v) || !within.contains(w) {
        return Err(Error::Precondition("path endpoints must lie in the set".into()));
    }
    let graph = instance.digraph();
    let mask = within.mask(n);
    let start = graph
        .bfs_path(v, w, Some(&mask))
        .ok_or_else(|| Error::Precondition(format!("{} is unreachable", instance.vertex_name(w))))?;
    let walk = Walk::along(&graph, v, start)?;
    let inner: Vec<VertexSet> = dual.y.keys().filter(|s| s.is_subset(within) && *s != within).cloned().collect();
    let out = respect_sets(&graph, walk, &inner)?;
    for set in &inner {
        let (enters, leaves) = out.crossings(set);
        if enters > 1 || leaves > 1 {
            return Err(Error::Internal(format!("path crosses {set} more than once")));
        }
    }
    Ok(out)
}

/// Two s-t paths sharing no vertex of `avoid`, from an integral flow in
/// the vertex-split network (unit capacity through vertices of `avoid`).
pub fn two_paths_vertex_avoiding(graph: &Digraph, s: usize, t: usize, avoid: &VertexSet) -> Result<(Walk, Walk)> {
    let n = graph.n();
    if avoid.contains(s) || avoid.contains(t) {
        return Err(Error::Precondition("s and t cannot be avoided".into()));
    }
    if !graph.reachable_from(s, None)[t] {
        return Err(Error::Precondition("t is not reachable from s".into()));
    }
    for u in avoid.iter() {
        let mut mask = vec![true; n];
        mask[u] = false;
        if !graph.reachable_from(s, Some(&mask))[t] {
            return Err(Error::Precondition(format!("vertex {u} lies on every s-t path")));
        }
    }
    let big = n as i64 + 1;
    let mut net: FlowNetwork<i64> = FlowNetwork::new(2 * n);
    for u in 0..n {
        net.add_arc(2 * u, 2 * u + 1, if avoid.contains(u) { 1 } else { big });
    }
    let mut arc_edge = Vec::new();
    for (i, &(a, b)) in graph.edges().iter().enumerate() {
        if a == b {
            continue;
        }
        let id = net.add_arc(2 * a + 1, 2 * b, big);
        arc_edge.push((id, i));
    }
    let value = net.max_flow(2 * s, 2 * t + 1, Some(&2));
    if value < 2 {
        return Err(Error::Internal("vertex-split flow below 2 despite the precondition".into()));
    }
    // remaining flow per original edge, decremented while decomposing
    let mut remaining: Vec<i64> = vec![0; graph.edges().len()];
    for &(id, i) in &arc_edge {
        remaining[i] = (*net.flow(id)).max(0);
    }
    let mut paths = Vec::with_capacity(2);
    for _ in 0..2 {
        let mut at = s;
        let mut edges = Vec::new();
        while at != t {
            let e = graph
                .out_edges(at)
                .iter()
                .copied()
                .find(|&e| remaining[e] > 0)
                .ok_or_else(|| Error::Internal("flow decomposition got stuck".into()))?;
            remaining[e] -= 1;
            edges.push(e);
            at = graph.edges()[e].1;
        }
        paths.push(Walk::along(graph, s, edges)?.loop_erased());
    }
    let second = paths.pop().expect("two paths");
    let first = paths.pop().expect("two paths");
    for u in avoid.iter() {
        if first.vertices().contains(&u) && second.vertices().contains(&u) {
            return Err(Error::Internal(format!("both paths use vertex {u}")));
        }
    }
    Ok((first, second))
}

/// Maximal members of a laminar family.
fn maximal_sets(sets: &[VertexSet]) -> Vec<VertexSet> {
    sets.iter().filter(|a| !sets.iter().any(|b| b != *a && a.is_subset(b))).cloned().collect()
}

/// Two s-t paths whose crossings of every support set add up to at most 2.
/// Maximal support sets are contracted, two paths sharing no contracted
/// vertex are found, and each passage through a set is routed inside it.
pub fn two_cut_respecting_paths(instance: &Instance, lp: &LpSolution, dual: &DualSolution) -> Result<(Walk, Walk)> {
    require_support_graph(instance, lp)?;
    let (s, t) = instance.require_endpoints("two_cut_respecting_paths")?;
    if !dual.laminar {
        return Err(Error::Precondition("dual support is not laminar".into()));
    }
    if dual.objective != lp.objective {
        return Err(Error::Precondition("dual is not optimal".into()));
    }
    let n = instance.n();
    let sets: Vec<VertexSet> = dual.y.keys().cloned().collect();
    let maximal = maximal_sets(&sets);
    // contracted node of each vertex
    let mut node = vec![usize::MAX; n];
    let mut count = 0;
    for set in &maximal {
        for v in set.iter() {
            node[v] = count;
        }
        count += 1;
    }
    let first_free = count;
    for slot in node.iter_mut() {
        if *slot == usize::MAX {
            *slot = count;
            count += 1;
        }
    }
    let mut h_edges = Vec::new();
    let mut h_origin = Vec::new();
    for (i, e) in instance.edges().iter().enumerate() {
        if node[e.tail] != node[e.head] {
            h_edges.push((node[e.tail], node[e.head]));
            h_origin.push(i);
        }
    }
    let contracted = Digraph::new(count, h_edges);
    let avoid = VertexSet::new((0..first_free).collect());
    let (p1, p2) = two_paths_vertex_avoiding(&contracted, node[s], node[t], &avoid)?;
    let graph = instance.digraph();
    let mut out = Vec::with_capacity(2);
    for p in [p1, p2] {
        let mut edges = Vec::new();
        let mut at = s;
        for &he in p.edges() {
            let e = instance.edge(h_origin[he]);
            if e.tail != at {
                let set = &maximal[node[at]];
                let inside = graph
                    .bfs_path(at, e.tail, Some(&set.mask(n)))
                    .ok_or_else(|| Error::Precondition(format!("{set} is not internally connected")))?;
                edges.extend(inside);
            }
            edges.push(h_origin[he]);
            at = e.head;
        }
        let walk = Walk::along(&graph, s, edges)?;
        out.push(respect_sets(&graph, walk, &sets)?);
    }
    let second = out.pop().expect("two paths");
    let first = out.pop().expect("two paths");
    for set in &sets {
        let (e1, l1) = first.crossings(set);
        let (e2, l2) = second.crossings(set);
        if e1 + l1 + e2 + l2 > 2 {
            return Err(Error::BoundViolated(format!("paths cross {set} {} times", e1 + l1 + e2 + l2)));
        }
    }
    Ok((first, second))
}

/// Moves the whole weight of an unavoidable support set into the
/// potentials: with `ε = y_Ū` and `R` the vertices reachable from `s`
/// without touching `Ū`, lowers `a` by `2ε` on `R` and by `ε` on `Ū`.
pub fn dual_improvement_step(instance: &Instance, dual: &DualSolution, set: &VertexSet) -> Result<DualSolution> {
    let (s, t) = instance.require_endpoints("dual_improvement_step")?;
    let eps = dual
        .y
        .get(set)
        .filter(|v| v.is_positive())
        .cloned()
        .ok_or_else(|| Error::Precondition(format!("{set} carries no dual weight")))?;
    let n = instance.n();
    let outside: Vec<bool> = (0..n).map(|v| !set.contains(v)).collect();
    let reach = instance.digraph().reachable_from(s, Some(&outside));
    if reach[t] {
        return Err(Error::Precondition(format!("{set} is avoided by some s-t path")));
    }
    let two_eps = &eps + &eps;
    let mut a = dual.a.clone();
    for v in 0..n {
        if reach[v] {
            a[v] -= &two_eps;
        } else if set.contains(v) {
            a[v] -= &eps;
        }
    }
    let mut y = dual.y.clone();
    y.remove(set);
    let out = DualSolution::new(instance, a, y);
    verify_dual(instance, &out)?;
    if out.objective != dual.objective {
        return Err(Error::Internal("improvement step changed the objective".into()));
    }
    Ok(out)
}

/// Whether some s-t path avoids every vertex of `set`.
pub fn avoidable(instance: &Instance, set: &VertexSet) -> Result<bool> {
    let (s, t) = instance.require_endpoints("avoidability")?;
    let outside: Vec<bool> = (0..instance.n()).map(|v| !set.contains(v)).collect();
    Ok(instance.digraph().reachable_from(s, Some(&outside))[t])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::InstanceBuilder;
    use crate::instances::{gen_fig1, gen_fig4};
    use crate::rational::int;
    use crate::relaxation::{min_gap_dual, normalize};
    use std::collections::BTreeMap;

    #[test]
    fn fig4_chain_is_the_path() {
        let norm = normalize(&gen_fig4()).unwrap();
        let all = VertexSet::new((0..4).collect());
        let chain = tight_chain(&norm.instance, &norm.lp, &all).unwrap();
        let comps: Vec<Vec<usize>> = chain.components.iter().map(|c| c.as_slice().to_vec()).collect();
        assert_eq!(comps, vec![vec![0], vec![1], vec![2], vec![3]]);
        assert!(chain.links.iter().all(|l| l.len() == 1));
    }

    #[test]
    fn fig1_chain_has_three_blocks() {
        let (inst, cert) = gen_fig1(4);
        let lp = LpSolution { x: cert.x.clone(), objective: int(4), cuts: Vec::new() };
        let chain = tight_chain(&inst, &lp, &VertexSet::new((0..12).collect())).unwrap();
        assert_eq!(chain.components.len(), 3);
        assert_eq!(chain.components[1].len(), 10);
        for set in cert.dual.y.keys() {
            tight_chain(&inst, &lp, set).unwrap();
        }
    }

    #[test]
    fn respecting_path_in_fig1() {
        let (inst, cert) = gen_fig1(4);
        let all = VertexSet::new((0..12).collect());
        let p = laminar_respecting_path(&inst, &cert.dual, &all, 1, 5).unwrap();
        assert_eq!(p.vertices(), &[1, 2, 3, 4, 5]);
        let trivial = laminar_respecting_path(&inst, &cert.dual, &all, 3, 3).unwrap();
        assert!(trivial.is_empty());
    }

    #[test]
    fn diamond_paths_and_cut_vertex() {
        let g = Digraph::new(4, [(0, 1), (0, 2), (1, 3), (2, 3)]);
        let (p, q) = two_paths_vertex_avoiding(&g, 0, 3, &VertexSet::new(vec![1, 2])).unwrap();
        let mut mids = vec![p.vertices()[1], q.vertices()[1]];
        mids.sort();
        assert_eq!(mids, vec![1, 2]);
        let line = Digraph::new(3, [(0, 1), (1, 2)]);
        assert!(two_paths_vertex_avoiding(&line, 0, 2, &VertexSet::singleton(1)).is_err());
    }

    #[test]
    fn fig1_two_paths() {
        let (inst, cert) = gen_fig1(4);
        let lp = LpSolution { x: cert.x.clone(), objective: int(4), cuts: Vec::new() };
        let (p, q) = two_cut_respecting_paths(&inst, &lp, &cert.dual).unwrap();
        assert_eq!(p.start(), 0);
        assert_eq!(q.end(), 11);
    }

    #[test]
    fn fig4_two_paths_with_min_gap_dual() {
        let norm = normalize(&gen_fig4()).unwrap();
        let cert = min_gap_dual(&norm.instance, &norm.lp).unwrap();
        let (p, q) = two_cut_respecting_paths(&norm.instance, &norm.lp, &cert.dual).unwrap();
        assert_eq!(p.vertices(), &[0, 1, 2, 3]);
        assert_eq!(q.vertices(), &[0, 1, 2, 3]);
    }

    fn s_u_t() -> Instance {
        let mut b = InstanceBuilder::new("sut");
        let s = b.vertex("s");
        let u = b.vertex("u");
        let t = b.vertex("t");
        b.edge(s, u, int(1));
        b.edge(u, t, int(1));
        b.endpoint_indices(s, t);
        b.build().unwrap()
    }

    #[test]
    fn improvement_step_on_a_path() {
        let inst = s_u_t();
        let mut y = BTreeMap::new();
        y.insert(VertexSet::singleton(1), int(1));
        let dual = DualSolution::new(&inst, vec![int(0); 3], y);
        assert_eq!(dual.objective, int(2));
        let out = dual_improvement_step(&inst, &dual, &VertexSet::singleton(1)).unwrap();
        assert_eq!(out.a, vec![int(-2), int(-1), int(0)]);
        assert!(out.y.is_empty());
        assert_eq!(out.objective, int(2));
        assert_eq!(out.gap(&inst).unwrap(), int(-2));
        let empty = DualSolution::new(&inst, vec![int(0); 3], BTreeMap::new());
        assert!(dual_improvement_step(&inst, &empty, &VertexSet::singleton(1)).is_err());
    }

    #[test]
    fn improvement_step_needs_unavoidable_set() {
        let inst = gen_fig4();
        let mut y = BTreeMap::new();
        y.insert(VertexSet::singleton(1), int(1));
        let dual = DualSolution::new(&inst, vec![int(0); 4], y);
        assert!(dual_improvement_step(&inst, &dual, &VertexSet::singleton(1)).is_err());
    }
}
