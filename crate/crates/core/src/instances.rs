//! Instance families and reductions between problem variants.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::closure::{check_connectivity, metric_closure};
use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::instance::{Instance, InstanceBuilder, Mode};
use crate::rational::{self, frac, int, Rational};
use crate::relaxation::DualSolution;
use crate::walk::Walk;

/// The half-integral primal solution and the nested-set dual that certify
/// `LP = k` on [`gen_fig1`].
#[derive(Clone, Debug)]
pub struct Fig1Certificate {
    pub x: Vec<Rational>,
    pub dual: DualSolution,
}

/// Two rows `a_1..a_{k+1}` and `b_1..b_{k+1}` between `s` and `t`; vertex
/// order is `s, a_1.., b_1.., t`.
pub fn gen_fig1(k: usize) -> (Instance, Fig1Certificate) {
    assert!(k >= 1, "fig1 needs k >= 1");
    let mut b = InstanceBuilder::new(&format!("fig1-k{k}"));
    let s = b.vertex("s");
    let a: Vec<usize> = (1..=k + 1).map(|j| b.vertex(&format!("a{j}"))).collect();
    let bb: Vec<usize> = (1..=k + 1).map(|j| b.vertex(&format!("b{j}"))).collect();
    let t = b.vertex("t");
    b.edge(s, a[0], int(0));
    b.edge(s, bb[0], int(0));
    for row in [&a, &bb] {
        for j in 0..k {
            b.edge(row[j], row[j + 1], int(0));
        }
    }
    b.edge(a[0], bb[k], int(0));
    b.edge(bb[0], a[k], int(0));
    b.edge(a[k], t, int(0));
    b.edge(bb[k], t, int(0));
    for row in [&a, &bb] {
        for j in 0..k {
            b.edge(row[j + 1], row[j], int(1));
        }
    }
    b.endpoint_indices(s, t);
    let instance = b.build().expect("fig1 is well formed");

    let x = vec![frac(1, 2); instance.m()];
    let mut pot = vec![Rational::zero(); instance.n()];
    pot[s] = int(k as i64);
    for j in 0..=k {
        let val = frac((k - j) as i64, 2);
        pot[a[j]] = val.clone();
        pot[bb[j]] = val;
    }
    let mut y = BTreeMap::new();
    for j in 1..=k {
        y.insert(VertexSet::new(a[..j].to_vec()), frac(1, 2));
        y.insert(VertexSet::new(bb[..j].to_vec()), frac(1, 2));
    }
    let dual = DualSolution::new(&instance, pot, y);
    (instance, Fig1Certificate { x, dual })
}

/// Four vertices `s, v, w, t`: zero-cost edges `s->v, s->w, v->t, w->t`
/// and `v->w` of cost 1.
pub fn gen_fig4() -> Instance {
    let mut b = InstanceBuilder::new("fig4");
    let s = b.vertex("s");
    let v = b.vertex("v");
    let w = b.vertex("w");
    let t = b.vertex("t");
    b.edge(s, v, int(0));
    b.edge(s, w, int(0));
    b.edge(v, w, int(1));
    b.edge(v, t, int(0));
    b.edge(w, t, int(0));
    b.endpoint_indices(s, t);
    b.build().expect("fig4 is well formed")
}

/// Working form of the recursive family: named vertices, unit edges
/// flagged when they lie on a spoke, and the four terminals.
#[derive(Clone, Debug)]
struct BemGraph {
    names: Vec<String>,
    edges: Vec<(usize, usize, bool)>,
    v: usize,
    v2: usize,
    w: usize,
    w2: usize,
    /// Vertices of the spoke joining `v` to `v2` (top to bottom) and of
    /// the one joining `w` to `w2`.
    first_spoke: Vec<usize>,
    last_spoke: Vec<usize>,
}

impl BemGraph {
    fn add_vertex(&mut self, name: String) -> usize {
        self.names.push(name);
        self.names.len() - 1
    }

    fn absorb(&mut self, other: &BemGraph, prefix: &str) -> usize {
        let offset = self.names.len();
        for name in &other.names {
            self.names.push(format!("{prefix}{name}"));
        }
        for &(u, v, spoke) in &other.edges {
            self.edges.push((u + offset, v + offset, spoke));
        }
        offset
    }
}

/// Spoke length `d_i` with `d_0 = 0` and `d_i = l^i - d_{i-1} - 2`.
pub fn bem_spoke_length(l: usize, i: usize) -> usize {
    let mut d: i64 = 0;
    for level in 1..=i {
        d = (l as i64).pow(level as u32) - d - 2;
    }
    d as usize
}

fn bem_level(l: usize, i: usize) -> BemGraph {
    if i == 0 {
        let mut g = BemGraph {
            names: Vec::new(),
            edges: Vec::new(),
            v: 0,
            v2: 0,
            w: l,
            w2: l,
            first_spoke: vec![0],
            last_spoke: vec![l],
        };
        for p in 0..=l {
            g.add_vertex(format!("p{p}"));
        }
        for p in 0..l {
            g.edges.push((p, p + 1, false));
            g.edges.push((p + 1, p, false));
        }
        return g;
    }
    let inner = bem_level(l, i - 1);
    let d = bem_spoke_length(l, i);
    let mut g = BemGraph {
        names: Vec::new(),
        edges: Vec::new(),
        v: 0,
        v2: 0,
        w: 0,
        w2: 0,
        first_spoke: Vec::new(),
        last_spoke: Vec::new(),
    };
    // spokes[j] lists the vertices from top o_j to bottom u_j
    let mut spokes: Vec<Vec<usize>> = Vec::new();
    for j in 1..=l + 1 {
        let path: Vec<usize> = (0..=d).map(|q| g.add_vertex(format!("s{j}.{q}"))).collect();
        for q in 0..d {
            if j % 2 == 1 {
                g.edges.push((path[q], path[q + 1], true));
            } else {
                g.edges.push((path[q + 1], path[q], true));
            }
        }
        spokes.push(path);
    }
    for c in 1..=l {
        let off = g.absorb(&inner, &format!("c{c}."));
        let (iv, iv2, iw, iw2) = (inner.v + off, inner.v2 + off, inner.w + off, inner.w2 + off);
        let (o_c, u_c) = (spokes[c - 1][0], spokes[c - 1][d]);
        let (o_n, u_n) = (spokes[c][0], spokes[c][d]);
        if c % 2 == 1 {
            let (tl, tr, bl, br) = (iv2, iv, iw, iw2);
            g.edges.push((tl, o_c, false));
            g.edges.push((u_c, bl, false));
            g.edges.push((o_n, tr, false));
            g.edges.push((br, u_n, false));
        } else {
            let (tl, tr, bl, br) = (iv, iv2, iw2, iw);
            g.edges.push((o_c, tl, false));
            g.edges.push((bl, u_c, false));
            g.edges.push((tr, o_n, false));
            g.edges.push((u_n, br, false));
        }
    }
    g.v = spokes[0][0];
    g.v2 = spokes[0][d];
    g.w = spokes[l][0];
    g.w2 = spokes[l][d];
    g.first_spoke = spokes[0].clone();
    g.last_spoke = spokes[l].clone();
    g
}

fn check_bem_params(l: usize) -> Result<()> {
    if l < 4 || l % 2 == 1 {
        return Err(Error::Precondition(format!("l must be even and at least 4, got {l}")));
    }
    Ok(())
}

fn bem_instance(name: String, names: &[String], edges: &[(usize, usize, bool)]) -> (Instance, Vec<Rational>) {
    let mut b = InstanceBuilder::new(&name);
    for v in names {
        b.vertex(v);
    }
    let mut x = Vec::with_capacity(edges.len());
    for &(u, v, spoke) in edges {
        b.edge(u, v, int(1));
        x.push(if spoke { int(1) } else { frac(1, 2) });
    }
    (b.build().expect("bem graph is well formed"), x)
}

/// The unit-cost graph `G_i` before terminal identification, with its
/// half-integral solution (1 on spoke edges, 1/2 elsewhere).
pub fn gen_bem_raw(l: usize, i: usize) -> Result<(Instance, Vec<Rational>)> {
    check_bem_params(l)?;
    let g = bem_level(l, i);
    Ok(bem_instance(format!("bem-raw-l{l}-i{i}"), &g.names, &g.edges))
}

/// `G_i'`: `G_i` with the `v`-`v'` spoke identified with the `w`-`w'`
/// spoke vertex by vertex. For `i = 0` this glues the two ends of the
/// bidirected path into a bidirected cycle on `l` vertices. Returned with
/// the half-integral solution of cost `|V|`.
pub fn gen_bem(l: usize, i: usize) -> Result<(Instance, Vec<Rational>)> {
    check_bem_params(l)?;
    let g = bem_level(l, i);
    let mut target: Vec<usize> = (0..g.names.len()).collect();
    for (&keep, &drop) in g.first_spoke.iter().zip(&g.last_spoke) {
        target[drop] = keep;
    }
    let mut new_index = vec![usize::MAX; g.names.len()];
    let mut names = Vec::new();
    for v in 0..g.names.len() {
        if target[v] == v {
            new_index[v] = names.len();
            names.push(g.names[v].clone());
        }
    }
    let relabel = |v: usize| new_index[target[v]];
    let dropped: Vec<bool> = {
        let mut mask = vec![false; g.names.len()];
        for &v in &g.last_spoke {
            mask[v] = true;
        }
        mask
    };
    let edges: Vec<(usize, usize, bool)> = g
        .edges
        .iter()
        .filter(|&&(u, v, spoke)| !(spoke && dropped[u] && dropped[v]))
        .map(|&(u, v, spoke)| (relabel(u), relabel(v), spoke))
        .collect();
    Ok(bem_instance(format!("bem-l{l}-i{i}"), &names, &edges))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomSpec {
    pub n: usize,
    pub edge_probability: f64,
    pub cost_bound: u64,
    pub seed: u64,
    pub node_weighted: bool,
    /// ATSPP with `s = v0`, `t = v{n-1}` when true, ATSP otherwise.
    pub path_mode: bool,
}

/// Seeded random digraph that passes the connectivity pre-check; up to 100
/// draws from the seeded stream are tried.
pub fn gen_random(spec: &RandomSpec) -> Result<Instance> {
    if spec.n < 2 {
        return Err(Error::Precondition("random instances need n >= 2".into()));
    }
    if !(spec.edge_probability > 0.0 && spec.edge_probability <= 1.0) {
        return Err(Error::Precondition("edge probability must lie in (0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n;
    for _ in 0..100 {
        let mut b = InstanceBuilder::new(&format!("random-n{n}-seed{}", spec.seed));
        for v in 0..n {
            b.vertex(&format!("v{v}"));
        }
        let weights: Option<Vec<Rational>> = spec
            .node_weighted
            .then(|| (0..n).map(|_| Rational::from_integer(rng.gen_range(0..=spec.cost_bound).into())).collect());
        for u in 0..n {
            for v in 0..n {
                if u == v || !rng.gen_bool(spec.edge_probability) {
                    continue;
                }
                let cost = match &weights {
                    Some(w) => &w[u] + &w[v],
                    None => Rational::from_integer(rng.gen_range(0..=spec.cost_bound).into()),
                };
                b.edge(u, v, cost);
            }
        }
        if let Some(w) = weights {
            b.node_weights(w);
        }
        if spec.path_mode {
            b.endpoint_indices(0, n - 1);
        }
        let instance = b.build()?;
        if check_connectivity(&instance).is_ok() {
            return Ok(instance);
        }
    }
    Err(Error::Precondition(format!(
        "no connected instance found in 100 draws (n={n}, seed={})",
        spec.seed
    )))
}

/// `k` s-t walks jointly covering every vertex: the vertices are dealt out
/// at random (each walk gets at least one when possible) and every walk
/// visits its share along shortest paths, in random order inside each
/// strongly connected component.
pub fn random_covering_walks(instance: &Instance, k: usize, seed: u64) -> Result<Vec<Walk>> {
    let (s, t) = instance.require_endpoints("covering walks")?;
    if k == 0 {
        return Err(Error::Precondition("need at least one walk".into()));
    }
    let (_, map) = metric_closure(instance)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut middle: Vec<usize> = (0..instance.n()).filter(|&v| v != s && v != t).collect();
    middle.shuffle(&mut rng);
    let mut shares: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (pos, &v) in middle.iter().enumerate() {
        let owner = if pos < k { pos } else { rng.gen_range(0..k) };
        shares[owner].push(v);
    }
    // visit the components of the SCC chain in order so every hop exists
    let chain = instance.digraph().scc_chain(None);
    let mut walks = Vec::with_capacity(k);
    for mut share in shares {
        share.sort_by_key(|&v| chain.component_of(v));
        let mut edges = Vec::new();
        let mut at = s;
        for v in share.into_iter().chain(std::iter::once(t)) {
            if map.dist(at, v).is_none() {
                return Err(Error::Precondition(format!(
                    "{} cannot reach {}",
                    instance.vertex_name(at),
                    instance.vertex_name(v)
                )));
            }
            edges.extend(map.expand(at, v));
            at = v;
        }
        walks.push(Walk::new(instance, s, edges)?);
    }
    Ok(walks)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionKind {
    NwToUnweighted,
    SplitVertex,
    FeedbackAugment,
}

/// Correspondence between a derived instance and the instance it came
/// from: every derived vertex names its original vertex, every derived
/// edge names its original edge or `None` when it was inserted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionMap {
    pub kind: ReductionKind,
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<Option<usize>>,
    pub scale: Rational,
    pub epsilon: Option<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitStyle {
    /// `s` keeps the outgoing edges, `t` the entering ones.
    OutIn,
    /// `s` and `t` both keep every incident edge.
    Duplicate,
}

/// Turns an ATSP instance into an ATSPP instance by splitting `v` into
/// `s` (keeping the name of `v`) and a new vertex `t`.
pub fn split_vertex(instance: &Instance, v: usize, style: SplitStyle) -> Result<(Instance, ReductionMap)> {
    if instance.is_atspp() {
        return Err(Error::Precondition("split_vertex expects an atsp instance".into()));
    }
    if v >= instance.n() {
        return Err(Error::Precondition(format!("vertex {v} does not exist")));
    }
    let mut b = InstanceBuilder::new(&format!("{}-split-{}", instance.name(), instance.vertex_name(v)));
    for name in instance.vertices() {
        b.vertex(name);
    }
    let mut t_name = format!("{}'", instance.vertex_name(v));
    while instance.vertex_index(&t_name).is_ok() {
        t_name.push('\'');
    }
    let t = b.vertex(&t_name);
    let mut edge_map = Vec::new();
    for (i, e) in instance.edges().iter().enumerate() {
        if e.tail == v && e.head == v {
            continue;
        }
        let mut push = |b: &mut InstanceBuilder, tail: usize, head: usize| {
            b.edge(tail, head, e.cost.clone());
            edge_map.push(Some(i));
        };
        match style {
            SplitStyle::OutIn => {
                if e.head == v {
                    push(&mut b, e.tail, t);
                } else {
                    push(&mut b, e.tail, e.head);
                }
            }
            SplitStyle::Duplicate => {
                if e.tail == v {
                    push(&mut b, v, e.head);
                    push(&mut b, t, e.head);
                } else if e.head == v {
                    push(&mut b, e.tail, v);
                    push(&mut b, e.tail, t);
                } else {
                    push(&mut b, e.tail, e.head);
                }
            }
        }
    }
    b.endpoint_indices(v, t);
    let out = b.build()?;
    check_connectivity(&out)?;
    let mut vertex_map: Vec<usize> = (0..instance.n()).collect();
    vertex_map.push(v);
    let map = ReductionMap { kind: ReductionKind::SplitVertex, vertex_map, edge_map, scale: Rational::one(), epsilon: None };
    Ok((out, map))
}

/// Unit-cost ATSP instance `G'` approximating a node-weighted instance:
/// with `M = 2ε c(V)/n²` and `c̄_v = ⌊2c_v/M⌋`, each vertex with `c̄_v > 0`
/// becomes `v⁻`, `v⁺` joined by a path of `c̄_v` unit edges.
pub fn nw_to_unweighted(instance: &Instance, epsilon: &Rational) -> Result<(Instance, ReductionMap)> {
    let weights = instance
        .node_weights()
        .ok_or_else(|| Error::Precondition("nw_to_unweighted needs a node-weighted instance".into()))?;
    if instance.is_atspp() {
        return Err(Error::Precondition("nw_to_unweighted expects an atsp instance".into()));
    }
    if !epsilon.is_positive() {
        return Err(Error::Precondition("epsilon must be positive".into()));
    }
    let n = instance.n();
    let total: Rational = weights.iter().sum();
    let name = format!("{}-unweighted", instance.name());
    if total.is_zero() {
        let mut b = InstanceBuilder::new(&name);
        b.vertex(instance.vertex_name(0));
        let map = ReductionMap {
            kind: ReductionKind::NwToUnweighted,
            vertex_map: vec![0],
            edge_map: Vec::new(),
            scale: Rational::one(),
            epsilon: Some(epsilon.clone()),
        };
        return Ok((b.build()?, map));
    }
    let n_sq = Rational::from_integer(BigInt::from(n * n));
    let scale = int(2) * epsilon * &total / &n_sq;
    let mut b = InstanceBuilder::new(&name);
    let mut vertex_map = Vec::new();
    let mut edge_map = Vec::new();
    // entry and exit copy of every original vertex
    let mut ends = Vec::with_capacity(n);
    for (v, w) in weights.iter().enumerate() {
        let units = (int(2) * w / &scale).floor().to_integer().to_usize().expect("path length fits");
        let name = instance.vertex_name(v);
        if units == 0 {
            let id = b.vertex(name);
            vertex_map.push(v);
            ends.push((id, id));
            continue;
        }
        let mut path = Vec::with_capacity(units + 1);
        for q in 0..=units {
            let label = if q == 0 {
                format!("{name}-")
            } else if q == units {
                format!("{name}+")
            } else {
                format!("{name}~{q}")
            };
            path.push(b.vertex(&label));
            vertex_map.push(v);
        }
        for q in 0..units {
            b.edge(path[q], path[q + 1], Rational::one());
            edge_map.push(None);
        }
        ends.push((path[0], path[units]));
    }
    for (i, e) in instance.edges().iter().enumerate() {
        b.edge(ends[e.tail].1, ends[e.head].0, Rational::one());
        edge_map.push(Some(i));
    }
    let out = b.build()?;
    let limit = Rational::from_integer(BigInt::from(n)) + &n_sq / epsilon;
    if Rational::from_integer(BigInt::from(out.n())) > limit {
        return Err(Error::BoundViolated(format!(
            "reduced instance has {} vertices, above n + n^2/eps = {}",
            out.n(),
            rational::format(&limit)
        )));
    }
    let map = ReductionMap {
        kind: ReductionKind::NwToUnweighted,
        vertex_map,
        edge_map,
        scale,
        epsilon: Some(epsilon.clone()),
    };
    Ok((out, map))
}

/// Contracts the inserted paths of a tour of the reduced instance, giving
/// a tour of the original instance.
pub fn lift_tour(original: &Instance, reduced: &Instance, map: &ReductionMap, tour: &Walk) -> Result<Walk> {
    let checked = Walk::new(reduced, tour.start(), tour.edges().to_vec())?;
    if checked.start() != checked.end() {
        return Err(Error::InvalidWalk("tour is not closed".into()));
    }
    crate::walk::walk_cost_and_check(reduced, &checked, true)?;
    let edges: Vec<usize> = checked.edges().iter().filter_map(|&e| map.edge_map[e]).collect();
    let start = match edges.first() {
        Some(&e) => original.edge(e).tail,
        None => map.vertex_map[checked.start()],
    };
    let lifted = Walk::new(original, start, edges)?;
    if lifted.start() != lifted.end() {
        return Err(Error::InvalidWalk("lifted tour is not closed".into()));
    }
    crate::walk::walk_cost_and_check(original, &lifted, true)?;
    Ok(lifted)
}

/// ATSP instance `I'` used to turn tours into s-t walks: a new vertex `v*`
/// with edges `(t, v*)` of cost `feedback_cost` and `(v*, s)` of cost 0.
pub fn feedback_augment(instance: &Instance, feedback_cost: &Rational) -> Result<(Instance, ReductionMap)> {
    let (s, t) = instance.require_endpoints("feedback augmentation")?;
    let mut b = InstanceBuilder::new(&format!("{}-augmented", instance.name()));
    for name in instance.vertices() {
        b.vertex(name);
    }
    let mut star = "v*".to_string();
    while instance.vertex_index(&star).is_ok() {
        star.push('*');
    }
    let vstar = b.vertex(&star);
    let mut edge_map = Vec::new();
    for (i, e) in instance.edges().iter().enumerate() {
        b.edge(e.tail, e.head, e.cost.clone());
        edge_map.push(Some(i));
    }
    b.edge(t, vstar, feedback_cost.clone());
    b.edge(vstar, s, Rational::zero());
    edge_map.extend([None, None]);
    let mut vertex_map: Vec<usize> = (0..instance.n()).collect();
    vertex_map.push(usize::MAX);
    let out = b.build()?;
    debug_assert!(matches!(out.mode(), Mode::Atsp));
    let map = ReductionMap {
        kind: ReductionKind::FeedbackAugment,
        vertex_map,
        edge_map,
        scale: Rational::one(),
        epsilon: None,
    };
    Ok((out, map))
}

/// Least common multiple of the denominators of `values`.
pub(crate) fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relaxation::verify_dual;

    #[test]
    fn fig1_shape_and_certificate() {
        let (inst, cert) = gen_fig1(4);
        assert_eq!((inst.n(), inst.m()), (12, 22));
        verify_dual(&inst, &cert.dual).unwrap();
        assert_eq!(cert.dual.objective, int(4));
        assert!(cert.dual.laminar);
        let cost: Rational = inst.edges().iter().zip(&cert.x).map(|(e, x)| &e.cost * x).sum();
        assert_eq!(cost, int(4));
        assert_eq!(inst.edges().iter().filter(|e| e.cost == int(1)).count(), 8);
    }

    #[test]
    fn fig4_shape() {
        let inst = gen_fig4();
        assert_eq!((inst.n(), inst.m()), (4, 5));
    }

    #[test]
    fn bem_sizes() {
        let (raw, _) = gen_bem_raw(4, 0).unwrap();
        assert_eq!((raw.n(), raw.m()), (5, 8));
        let (g0, x0) = gen_bem(4, 0).unwrap();
        assert_eq!((g0.n(), g0.m()), (4, 8));
        assert_eq!(x0.iter().sum::<Rational>(), int(4));
        assert_eq!(bem_spoke_length(4, 1), 2);
        assert_eq!(bem_spoke_length(6, 1), 4);
        let (g, _) = gen_bem(6, 1).unwrap();
        assert_eq!((g.n(), g.m()), (72, 120));
        assert!(gen_bem(5, 0).is_err());
        assert!(gen_bem(2, 0).is_err());
    }

    #[test]
    fn random_is_deterministic() {
        let spec = RandomSpec { n: 6, edge_probability: 0.5, cost_bound: 10, seed: 7, node_weighted: false, path_mode: true };
        assert_eq!(gen_random(&spec).unwrap().to_json(), gen_random(&spec).unwrap().to_json());
        let nw = RandomSpec { node_weighted: true, ..spec };
        let inst = gen_random(&nw).unwrap();
        let w = inst.node_weights().unwrap();
        assert!(inst.edges().iter().all(|e| e.cost == &w[e.tail] + &w[e.head]));
    }

    fn complete_triangle(weight: i64) -> Instance {
        let mut b = InstanceBuilder::new("tri");
        for v in ["x", "y", "z"] {
            b.vertex(v);
        }
        for u in 0..3 {
            for v in 0..3 {
                if u != v {
                    b.edge(u, v, int(2 * weight));
                }
            }
        }
        b.node_weights(vec![int(weight); 3]);
        b.build().unwrap()
    }

    #[test]
    fn split_out_in_partitions_edges() {
        let tri = complete_triangle(1);
        let (split, map) = split_vertex(&tri, 0, SplitStyle::OutIn).unwrap();
        let (s, t) = split.endpoints().unwrap();
        assert_eq!(split.edges().iter().filter(|e| e.tail == s).count(), 2);
        assert_eq!(split.edges().iter().filter(|e| e.head == s).count(), 0);
        assert_eq!(split.edges().iter().filter(|e| e.head == t).count(), 2);
        assert_eq!(map.vertex_map[t], 0);
    }

    #[test]
    fn split_isolated_vertex_fails() {
        let mut b = InstanceBuilder::new("iso");
        b.vertex("a");
        b.vertex("b");
        b.vertex("c");
        b.edge(1, 2, int(1));
        b.edge(2, 1, int(1));
        let inst = b.build().unwrap();
        assert!(split_vertex(&inst, 0, SplitStyle::OutIn).is_err());
    }

    #[test]
    fn triangle_reduction_sizes() {
        let tri = complete_triangle(1);
        let (red, map) = nw_to_unweighted(&tri, &frac(1, 2)).unwrap();
        assert_eq!(map.scale, frac(1, 3));
        assert_eq!(red.n(), 21);
        let zero = complete_triangle(0);
        let (red0, map0) = nw_to_unweighted(&zero, &frac(1, 2)).unwrap();
        assert_eq!(red0.n(), 1);
        assert_eq!(map0.scale, int(1));
    }

    #[test]
    fn lift_rejects_invalid_tours() {
        let tri = complete_triangle(1);
        let (red, map) = nw_to_unweighted(&tri, &frac(1, 2)).unwrap();
        // a single original edge does not form a tour of the reduced graph
        let e = map.edge_map.iter().position(|m| m.is_some()).unwrap();
        let walk = Walk::new(&red, red.edge(e).tail, vec![e]).unwrap();
        assert!(lift_tour(&tri, &red, &map, &walk).is_err());
    }
}
