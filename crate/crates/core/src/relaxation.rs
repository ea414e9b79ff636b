//! The Held–Karp relaxations solved by cutting planes, their optimal
//! duals, laminar uncrossing and the minimum potential-gap dual.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::graph::VertexSet;
use crate::instance::{Instance, Mode};
use crate::lp::{Bound, LinearProgram, LpResult, Relation};
use crate::rational::{self, Rational};
use crate::walk::Walk;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    /// One value per edge of the instance, in edge order.
    pub x: Vec<Rational>,
    pub objective: Rational,
    /// Cut family of the final restricted LP.
    pub cuts: Vec<VertexSet>,
}

impl LpSolution {
    pub fn total(&self) -> Rational {
        self.x.iter().sum()
    }

    pub fn cut_value(&self, instance: &Instance, set: &VertexSet) -> Rational {
        cut_weight(instance, &self.x, set)
    }
}

/// Potentials `a` and cut variables `y` of the dual; only positive `y`
/// entries are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualSolution {
    pub a: Vec<Rational>,
    pub y: BTreeMap<VertexSet, Rational>,
    pub laminar: bool,
    pub objective: Rational,
}

impl DualSolution {
    pub fn new(instance: &Instance, a: Vec<Rational>, y: BTreeMap<VertexSet, Rational>) -> DualSolution {
        let y: BTreeMap<_, _> = y.into_iter().filter(|(_, v)| v.is_positive()).collect();
        let laminar = is_laminar(y.keys());
        let objective = dual_objective(instance, &a, &y);
        DualSolution { a, y, laminar, objective }
    }

    pub fn support(&self) -> impl Iterator<Item = &VertexSet> {
        self.y.keys()
    }

    /// `a_s - a_t`.
    pub fn gap(&self, instance: &Instance) -> Result<Rational> {
        let (s, t) = instance.require_endpoints("the potential gap")?;
        Ok(&self.a[s] - &self.a[t])
    }

    /// Left-hand side of the dual constraint of edge `e`.
    pub fn edge_load(&self, instance: &Instance, e: usize) -> Rational {
        let edge = instance.edge(e);
        &self.a[edge.head] - &self.a[edge.tail] + self.cy_edge(edge.tail, edge.head)
    }

    /// Sum of `y_U` over the support sets cut by `(tail, head)`.
    pub fn cy_edge(&self, tail: usize, head: usize) -> Rational {
        self.y.iter().filter(|(u, _)| u.cuts(tail, head)).map(|(_, v)| v.clone()).sum()
    }

    pub fn is_tight(&self, instance: &Instance, e: usize) -> bool {
        self.edge_load(instance, e) == instance.edge(e).cost
    }

    pub fn to_json(&self, instance: &Instance) -> Value {
        let a: Map<String, Value> = self
            .a
            .iter()
            .enumerate()
            .map(|(v, val)| (instance.vertex_name(v).to_string(), Value::String(rational::format(val))))
            .collect();
        let y: Vec<Value> = self
            .y
            .iter()
            .map(|(set, val)| {
                json!({
                    "set": set.iter().map(|v| instance.vertex_name(v)).collect::<Vec<_>>(),
                    "value": rational::format(val),
                })
            })
            .collect();
        json!({
            "a": a,
            "y": y,
            "laminar": self.laminar,
            "objective": rational::format(&self.objective),
        })
    }
}

/// Minimum `a_s - a_t` over optimal duals, with a laminar witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapCertificate {
    pub delta: Rational,
    pub dual: DualSolution,
}

/// LP value of an instance with the feedback edge `(t, s)` added.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FeedbackLp {
    Bounded(Rational),
    /// The probe cost closes a negative cycle.
    Unbounded,
}

impl FeedbackLp {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            FeedbackLp::Bounded(v) => Some(v),
            FeedbackLp::Unbounded => None,
        }
    }

    pub fn is_below(&self, bound: &Rational) -> bool {
        match self {
            FeedbackLp::Bounded(v) => v < bound,
            FeedbackLp::Unbounded => true,
        }
    }
}

pub fn is_laminar<'a>(sets: impl IntoIterator<Item = &'a VertexSet>) -> bool {
    let sets: Vec<&VertexSet> = sets.into_iter().collect();
    sets.iter().enumerate().all(|(i, a)| sets[i + 1..].iter().all(|b| !a.crosses(b)))
}

pub fn cut_weight(instance: &Instance, weights: &[Rational], set: &VertexSet) -> Rational {
    instance
        .edges()
        .iter()
        .zip(weights)
        .filter(|(e, w)| !w.is_zero() && set.cuts(e.tail, e.head))
        .map(|(_, w)| w.clone())
        .sum()
}

fn conservation_rhs(instance: &Instance, v: usize) -> Rational {
    match instance.mode() {
        Mode::Atspp { s, .. } if v == s => -Rational::one(),
        Mode::Atspp { t, .. } if v == t => Rational::one(),
        _ => Rational::zero(),
    }
}

fn dual_objective(instance: &Instance, a: &[Rational], y: &BTreeMap<VertexSet, Rational>) -> Rational {
    let mut obj: Rational = (0..instance.n()).map(|v| conservation_rhs(instance, v) * &a[v]).sum();
    for val in y.values() {
        obj += val * Rational::from_integer(2.into());
    }
    obj
}

/// Whether `set` is an admissible cut set for the instance's mode.
fn admissible(instance: &Instance, set: &VertexSet) -> bool {
    if set.is_empty() {
        return false;
    }
    match instance.mode() {
        Mode::Atspp { s, t } => !set.contains(s) && !set.contains(t),
        Mode::Atsp => set.len() < instance.n(),
    }
}

/// Sets `U` with `weights(δ(U)) < threshold`, found by one minimum cut per
/// vertex against the contracted terminal (s and t in ATSPP mode, vertex 0
/// in ATSP mode). The returned sets are distinct, in discovery order.
pub fn light_cuts(instance: &Instance, weights: &[Rational], threshold: &Rational) -> Vec<VertexSet> {
    let n = instance.n();
    let (sink, alias) = match instance.mode() {
        Mode::Atspp { s, t } => (s, Some(t)),
        Mode::Atsp => (0, None),
    };
    let node = |v: usize| if Some(v) == alias { sink } else { v };
    let mut base = FlowNetwork::new(n);
    for (e, w) in instance.edges().iter().zip(weights) {
        let (u, v) = (node(e.tail), node(e.head));
        if u != v && w.is_positive() {
            base.add_undirected(u, v, w.clone());
        }
    }
    let mut found = Vec::new();
    let mut seen = BTreeSet::new();
    for v in 0..n {
        if v == sink || Some(v) == alias {
            continue;
        }
        let mut net = base.clone();
        let value = net.max_flow(v, sink, Some(threshold));
        if value >= *threshold {
            continue;
        }
        let set = VertexSet::from_mask(&net.source_side(v));
        debug_assert!(admissible(instance, &set));
        if seen.insert(set.clone()) {
            found.push(set);
        }
    }
    found
}

/// Cut sets violated by `x`; empty exactly when every cut constraint holds.
pub fn separate_subtour_cuts(instance: &Instance, x: &[Rational]) -> Vec<VertexSet> {
    light_cuts(instance, x, &Rational::from_integer(2.into()))
}

struct RestrictedOptimum {
    x: Vec<Rational>,
    duals: Vec<Rational>,
    objective: Rational,
    cuts: Vec<VertexSet>,
}

/// Cutting-plane loop for `min costs·x` over the relaxation, optionally
/// with `x <= upper`.
fn cutting_plane(instance: &Instance, costs: &[Rational], upper: Option<&[Rational]>) -> Result<RestrictedOptimum> {
    let n = instance.n();
    let m = instance.m();
    let mut cuts: Vec<VertexSet> = match instance.mode() {
        Mode::Atspp { s, t } => (0..n).filter(|&v| v != s && v != t).map(VertexSet::singleton).collect(),
        Mode::Atsp if n > 1 => (0..n).map(VertexSet::singleton).collect(),
        Mode::Atsp => Vec::new(),
    };
    loop {
        let mut lp = LinearProgram::new(costs.to_vec());
        for v in 0..n {
            let mut row = vec![Rational::zero(); m];
            for (i, e) in instance.edges().iter().enumerate() {
                if e.head == v {
                    row[i] += Rational::one();
                }
                if e.tail == v {
                    row[i] -= Rational::one();
                }
            }
            lp.add_row(row, Relation::Eq, conservation_rhs(instance, v));
        }
        for set in &cuts {
            let row = instance
                .edges()
                .iter()
                .map(|e| if set.cuts(e.tail, e.head) { Rational::one() } else { Rational::zero() })
                .collect();
            lp.add_row(row, Relation::Ge, Rational::from_integer(2.into()));
        }
        if let Some(upper) = upper {
            for (i, u) in upper.iter().enumerate() {
                lp.add_sparse_row([(i, Rational::one())], Relation::Le, u.clone());
            }
        }
        match crate::lp::solve_exact_lp(&lp)? {
            LpResult::Optimal { primal, duals, objective } => {
                let violated = separate_subtour_cuts(instance, &primal);
                if violated.is_empty() {
                    return Ok(RestrictedOptimum { x: primal, duals, objective, cuts });
                }
                for set in violated {
                    if cuts.contains(&set) {
                        return Err(Error::Internal(format!("separation returned existing cut {set}")));
                    }
                    cuts.push(set);
                }
            }
            LpResult::Infeasible { farkas } => return Err(Error::Infeasible { rows: farkas.len(), farkas }),
            LpResult::Unbounded { .. } => return Err(Error::Unbounded),
        }
    }
}

/// Optimal primal and dual solutions of the relaxation.
pub fn solve_relaxation(instance: &Instance) -> Result<(LpSolution, DualSolution)> {
    let costs: Vec<Rational> = instance.edges().iter().map(|e| e.cost.clone()).collect();
    let opt = cutting_plane(instance, &costs, None)?;
    let n = instance.n();
    let a = opt.duals[..n].to_vec();
    let y: BTreeMap<VertexSet, Rational> =
        opt.cuts.iter().cloned().zip(opt.duals[n..].iter().cloned()).collect();
    let dual = DualSolution::new(instance, a, y);
    if dual.objective != opt.objective {
        return Err(Error::Internal("dual objective differs from LP value".into()));
    }
    let lp = LpSolution { x: opt.x, objective: opt.objective, cuts: opt.cuts };
    Ok((lp, dual))
}

/// Checks every dual edge constraint and the stored objective.
pub fn verify_dual(instance: &Instance, dual: &DualSolution) -> Result<()> {
    for (set, val) in &dual.y {
        if !val.is_positive() || !admissible(instance, set) {
            return Err(Error::Internal(format!("inadmissible dual set {set}")));
        }
    }
    for (e, edge) in instance.edges().iter().enumerate() {
        if dual.edge_load(instance, e) > edge.cost {
            return Err(Error::Internal(format!(
                "dual constraint of edge {}->{} violated",
                instance.vertex_name(edge.tail),
                instance.vertex_name(edge.head)
            )));
        }
    }
    if dual_objective(instance, &dual.a, &dual.y) != dual.objective {
        return Err(Error::Internal("stored dual objective is stale".into()));
    }
    if is_laminar(dual.y.keys()) != dual.laminar {
        return Err(Error::Internal("stored laminar flag is stale".into()));
    }
    Ok(())
}

/// Complementary slackness between `lp` and `dual`: positive `y_U` forces
/// `x(δ(U)) = 2`, positive `x_e` forces a tight edge constraint.
pub fn check_complementary_slackness(instance: &Instance, lp: &LpSolution, dual: &DualSolution) -> Result<()> {
    let two = Rational::from_integer(2.into());
    for set in dual.y.keys() {
        if lp.cut_value(instance, set) != two {
            return Err(Error::Internal(format!("support set {set} is not tight")));
        }
    }
    for (e, x) in lp.x.iter().enumerate() {
        if x.is_positive() && !dual.is_tight(instance, e) {
            return Err(Error::Internal(format!("edge {e} carries flow but is not tight")));
        }
    }
    Ok(())
}

/// Edge indices with positive `x`.
pub fn support_edges(lp: &LpSolution) -> Vec<usize> {
    lp.x.iter().enumerate().filter(|(_, v)| v.is_positive()).map(|(e, _)| e).collect()
}

/// The instance restricted to edges with positive `x`.
pub fn support_graph(instance: &Instance, lp: &LpSolution) -> Instance {
    instance.restrict_edges(&support_edges(lp))
}

/// An instance reduced to the support of an optimal solution, together
/// with the restricted optimal solutions and the map back to the original
/// edge indices.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub instance: Instance,
    pub edge_map: Vec<usize>,
    pub lp: LpSolution,
    pub dual: DualSolution,
}

pub fn normalize(instance: &Instance) -> Result<Normalized> {
    let (lp, dual) = solve_relaxation(instance)?;
    let edge_map = support_edges(&lp);
    let support = instance.restrict_edges(&edge_map);
    let lp = LpSolution {
        x: edge_map.iter().map(|&e| lp.x[e].clone()).collect(),
        objective: lp.objective,
        cuts: lp.cuts,
    };
    let dual = DualSolution::new(&support, dual.a, dual.y);
    Ok(Normalized { instance: support, edge_map, lp, dual })
}

/// Uncrosses the support of an optimal dual: repeatedly takes the
/// lexicographically smallest crossing pair `A, B`, lowers both by
/// `min(y_A, y_B)` and raises `A∖B` and `B∖A` by the same amount.
pub fn uncross_dual(instance: &Instance, dual: &DualSolution) -> Result<DualSolution> {
    let mut y = dual.y.clone();
    let cap = 4u128.checked_pow(instance.n() as u32).unwrap_or(u128::MAX);
    let mut steps: u128 = 0;
    loop {
        let keys: Vec<&VertexSet> = y.keys().collect();
        let pair = keys
            .iter()
            .enumerate()
            .find_map(|(i, a)| keys[i + 1..].iter().find(|b| a.crosses(b)).map(|b| ((*a).clone(), (*b).clone())));
        let Some((a, b)) = pair else { break };
        steps += 1;
        if steps > cap {
            return Err(Error::Internal("uncrossing exceeded its iteration cap".into()));
        }
        let eps = y[&a].clone().min(y[&b].clone());
        for (set, delta) in [(a.clone(), -eps.clone()), (b.clone(), -eps.clone()), (a.difference(&b), eps.clone()), (b.difference(&a), eps.clone())] {
            let entry = y.entry(set).or_insert_with(Rational::zero);
            *entry += delta;
        }
        y.retain(|_, v| v.is_positive());
    }
    let out = DualSolution::new(instance, dual.a.clone(), y);
    if out.objective != dual.objective {
        return Err(Error::Internal("uncrossing changed the dual objective".into()));
    }
    verify_dual(instance, &out)?;
    Ok(out)
}

/// Minimum `a_s - a_t` over all optimal duals, by column generation over
/// the cut variables. `lp` must be an optimal solution of `instance`
/// itself; zero edges are kept, so on an instance that is not a support
/// graph the gap can be larger than on its support graph.
pub fn min_gap_dual(instance: &Instance, lp: &LpSolution) -> Result<GapCertificate> {
    let (s, t) = instance.require_endpoints("min_gap_dual")?;
    if lp.x.len() != instance.m() {
        return Err(Error::Precondition(
            "solution does not belong to this instance; normalize via support_graph first".into(),
        ));
    }
    let n = instance.n();
    let m = instance.m();
    let two = Rational::from_integer(2.into());
    let mut family: Vec<VertexSet> = Vec::new();
    for set in &lp.cuts {
        if !family.contains(set) {
            family.push(set.clone());
        }
    }
    loop {
        let k = family.len();
        let mut objective = vec![Rational::zero(); n + k];
        objective[s] = Rational::one();
        objective[t] = -Rational::one();
        let mut master = LinearProgram::new(objective);
        for v in 0..n {
            master.set_bound(v, Bound::Free);
        }
        for edge in instance.edges() {
            let mut terms = vec![(edge.head, Rational::one()), (edge.tail, -Rational::one())];
            for (j, set) in family.iter().enumerate() {
                if set.cuts(edge.tail, edge.head) {
                    terms.push((n + j, Rational::one()));
                }
            }
            master.add_sparse_row(terms, Relation::Le, edge.cost.clone());
        }
        let mut terms = vec![(t, Rational::one()), (s, -Rational::one())];
        terms.extend((0..k).map(|j| (n + j, two.clone())));
        master.add_sparse_row(terms, Relation::Eq, lp.objective.clone());
        let (primal, duals) = match crate::lp::solve_exact_lp(&master)? {
            LpResult::Optimal { primal, duals, .. } => (primal, duals),
            other => {
                return Err(Error::Internal(format!("gap master LP not optimal: {other:?}")));
            }
        };
        let x_hat: Vec<Rational> = duals[..m].iter().map(|p| -p).collect();
        let lambda = &duals[m];
        let threshold = lambda * &two;
        let entering = if threshold.is_positive() { light_cuts(instance, &x_hat, &threshold) } else { Vec::new() };
        if entering.is_empty() {
            let a = primal[..n].to_vec();
            let y: BTreeMap<VertexSet, Rational> = family.iter().cloned().zip(primal[n..].iter().cloned()).collect();
            let dual = DualSolution::new(instance, a, y);
            verify_dual(instance, &dual)?;
            if dual.objective != lp.objective {
                return Err(Error::Internal("gap dual is not optimal".into()));
            }
            let dual = uncross_dual(instance, &dual)?;
            let delta = dual.gap(instance)?;
            if delta > lp.objective || delta < -&lp.objective {
                return Err(Error::BoundViolated(format!(
                    "potential gap {} outside [-LP, LP] with LP = {}",
                    rational::format(&delta),
                    rational::format(&lp.objective)
                )));
            }
            return Ok(GapCertificate { delta, dual });
        }
        for set in entering {
            if family.contains(&set) {
                return Err(Error::Internal(format!("pricing returned existing column {set}")));
            }
            family.push(set);
        }
    }
}

/// LP value after adding the feedback edge `(t, s)` with cost `delta`
/// (which may be negative).
pub fn lp_with_feedback_edge(instance: &Instance, delta: &Rational) -> Result<FeedbackLp> {
    let (s, t) = instance.require_endpoints("lp_with_feedback_edge")?;
    let augmented = instance.with_extra_edge(t, s, delta.clone());
    match solve_relaxation(&augmented) {
        Ok((lp, _)) => Ok(FeedbackLp::Bounded(lp.objective)),
        Err(Error::Unbounded) => Ok(FeedbackLp::Unbounded),
        Err(e) => Err(e),
    }
}

/// A componentwise-minimal feasible `x' <= x`, found by minimizing `x'(E)`.
pub fn minimize_primal(instance: &Instance, lp: &LpSolution) -> Result<LpSolution> {
    let ones = vec![Rational::one(); instance.m()];
    let opt = cutting_plane(instance, &ones, Some(&lp.x))?;
    let n = instance.n() as i64;
    if opt.objective > Rational::from_integer((n * n).into()) {
        return Err(Error::BoundViolated(format!(
            "minimal solution has total {} > n^2 = {}",
            rational::format(&opt.objective),
            n * n
        )));
    }
    let objective = instance.edges().iter().zip(&opt.x).map(|(e, x)| &e.cost * x).sum();
    Ok(LpSolution { x: opt.x, objective, cuts: opt.cuts })
}

/// `c^y` of a walk: for every step, the `y` mass of the sets it crosses.
pub fn cy_cost(dual: &DualSolution, walk: &Walk) -> Rational {
    walk.vertices().windows(2).map(|p| dual.cy_edge(p[0], p[1])).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::InstanceBuilder;
    use crate::instances::{gen_fig1, gen_fig4};
    use crate::rational::{frac, int};

    fn path_instance(costs: &[i64]) -> Instance {
        let mut b = InstanceBuilder::new("path");
        let vs: Vec<usize> = (0..=costs.len()).map(|i| b.vertex(&format!("p{i}"))).collect();
        for (i, &c) in costs.iter().enumerate() {
            b.edge(vs[i], vs[i + 1], int(c));
        }
        b.endpoint_indices(vs[0], *vs.last().unwrap());
        b.build().unwrap()
    }

    #[test]
    fn fig4_relaxation() {
        let inst = gen_fig4();
        let (lp, dual) = solve_relaxation(&inst).unwrap();
        assert_eq!(lp.objective, int(1));
        assert_eq!(lp.x, vec![int(1), int(0), int(1), int(0), int(1)]);
        verify_dual(&inst, &dual).unwrap();
        check_complementary_slackness(&inst, &lp, &dual).unwrap();
        let support = support_graph(&inst, &lp);
        assert_eq!(support.m(), 3);
        assert_eq!(solve_relaxation(&support).unwrap().0.objective, int(1));
    }

    #[test]
    fn two_vertex_instance_has_no_cuts() {
        let inst = path_instance(&[0]);
        let (lp, _) = solve_relaxation(&inst).unwrap();
        assert_eq!(lp.objective, int(0));
        assert!(lp.cuts.is_empty());
    }

    #[test]
    fn fig1_half_solution_is_not_separated() {
        let (inst, cert) = gen_fig1(4);
        assert!(separate_subtour_cuts(&inst, &cert.x).is_empty());
        let (lp, _) = solve_relaxation(&inst).unwrap();
        assert_eq!(lp.objective, int(4));
        let half = LpSolution { x: cert.x.clone(), objective: int(4), cuts: Vec::new() };
        assert_eq!(support_graph(&inst, &half).m(), 22);
    }

    #[test]
    fn separation_finds_violated_sets() {
        let inst = gen_fig4();
        let zero = vec![int(0); 5];
        let found = separate_subtour_cuts(&inst, &zero);
        assert_eq!(found, vec![VertexSet::singleton(1), VertexSet::singleton(2)]);
        let x = vec![int(1), int(0), frac(1, 2), int(0), int(1)];
        assert_eq!(cut_weight(&inst, &x, &VertexSet::singleton(1)), frac(3, 2));
        assert!(separate_subtour_cuts(&inst, &x).contains(&VertexSet::singleton(1)));
    }

    #[test]
    fn uncrossing_crossing_pair() {
        let mut b = InstanceBuilder::new("cross");
        let s = b.vertex("s");
        let u = b.vertex("u");
        let v = b.vertex("v");
        let w = b.vertex("w");
        let t = b.vertex("t");
        for (p, q) in [(s, u), (u, v), (v, w), (w, t)] {
            b.edge(p, q, int(1));
        }
        b.endpoint_indices(s, t);
        let inst = b.build().unwrap();
        let mut y = BTreeMap::new();
        y.insert(VertexSet::new(vec![u, v]), frac(1, 2));
        y.insert(VertexSet::new(vec![v, w]), frac(1, 2));
        let a = vec![int(0), int(0), int(0), int(0), int(0)];
        let dual = DualSolution::new(&inst, a, y);
        assert!(!dual.laminar);
        let out = uncross_dual(&inst, &dual).unwrap();
        let expected: BTreeMap<VertexSet, Rational> =
            [(VertexSet::singleton(u), frac(1, 2)), (VertexSet::singleton(w), frac(1, 2))].into_iter().collect();
        assert_eq!(out.y, expected);
        assert!(out.laminar);
        assert_eq!(out.objective, dual.objective);
        assert_eq!(out.a, dual.a);
    }

    #[test]
    fn uncrossing_keeps_laminar_duals() {
        let (inst, cert) = gen_fig1(4);
        let out = uncross_dual(&inst, &cert.dual).unwrap();
        assert_eq!(out, cert.dual);
        let empty = DualSolution::new(&inst, cert.dual.a.clone(), BTreeMap::new());
        assert_eq!(uncross_dual(&inst, &empty).unwrap(), empty);
    }

    #[test]
    fn fig4_gap_and_feedback_edge() {
        let inst = gen_fig4();
        let (lp, _) = solve_relaxation(&inst).unwrap();
        let cert = min_gap_dual(&inst, &lp).unwrap();
        assert_eq!(cert.delta, int(1));
        assert_eq!(lp_with_feedback_edge(&inst, &frac(1, 2)).unwrap(), FeedbackLp::Bounded(frac(1, 2)));
        assert_eq!(lp_with_feedback_edge(&inst, &int(1)).unwrap(), FeedbackLp::Bounded(int(1)));
        assert_eq!(lp_with_feedback_edge(&inst, &int(2)).unwrap(), FeedbackLp::Bounded(int(1)));
        assert_eq!(lp_with_feedback_edge(&inst, &int(-1)).unwrap(), FeedbackLp::Unbounded);
    }

    #[test]
    fn gap_on_fig4_support_graph_drops() {
        // On the bare path s->v->w->t nothing stops y = 0, a_s - a_t = -1.
        let norm = normalize(&gen_fig4()).unwrap();
        assert_eq!(min_gap_dual(&norm.instance, &norm.lp).unwrap().delta, int(-1));
        let (lp, _) = solve_relaxation(&gen_fig4()).unwrap();
        let err = min_gap_dual(&norm.instance, &lp).unwrap_err();
        assert!(err.to_string().contains("normalize via support_graph first"));
    }

    #[test]
    fn single_edge_gap_is_zero() {
        let inst = path_instance(&[0]);
        let norm = normalize(&inst).unwrap();
        assert_eq!(min_gap_dual(&norm.instance, &norm.lp).unwrap().delta, int(0));
    }

    #[test]
    fn triangle_minimization_halves_doubled_solution() {
        let mut b = InstanceBuilder::new("tri");
        let v: Vec<usize> = (0..3).map(|i| b.vertex(&format!("v{i}"))).collect();
        for i in 0..3 {
            b.edge(v[i], v[(i + 1) % 3], int(1));
        }
        let inst = b.build().unwrap();
        let doubled = LpSolution { x: vec![int(2); 3], objective: int(6), cuts: Vec::new() };
        let min = minimize_primal(&inst, &doubled).unwrap();
        assert_eq!(min.x, vec![int(1); 3]);
    }

    #[test]
    fn fig1_minimal_solution_within_bound() {
        let (inst, cert) = gen_fig1(4);
        let half = LpSolution { x: cert.x.clone(), objective: int(4), cuts: Vec::new() };
        let min = minimize_primal(&inst, &half).unwrap();
        assert!(min.total() <= int(11));
        assert!(min.total() <= int(144));
    }

    #[test]
    fn cy_cost_of_tight_walk() {
        let (inst, cert) = gen_fig1(4);
        let n = inst.n();
        let (s, t) = inst.endpoints().unwrap();
        // top row s, a1..a5, t
        let top: Vec<usize> = std::iter::once(s).chain(1..=5).chain(std::iter::once(t)).collect();
        assert!(top.iter().all(|&v| v < n));
        let walk = Walk::through(&inst, &top).unwrap();
        let cy = cy_cost(&cert.dual, &walk);
        let cost = crate::walk::walk_cost_and_check(&inst, &walk, false).unwrap();
        assert_eq!(cost, &cert.dual.a[t] - &cert.dual.a[s] + cy);
        assert_eq!(cy_cost(&cert.dual, &Walk::trivial(s)), int(0));
    }
}
