//! Merging several covering s-t walks into one, and the pipeline that
//! turns an ATSP tour of an augmented instance into an s-t walk.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{exact_atsp_capped, DEFAULT_EXACT_CAP};
use crate::graph::VertexSet;
use crate::instance::Instance;
use crate::instances::feedback_augment;
use crate::rational::{self, int, Rational};
use crate::relaxation::{min_gap_dual, normalize, DualSolution, GapCertificate};
use crate::structure::laminar_respecting_path;
use crate::walk::{st_tour_cost, walk_cost_and_check, Walk};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MergeMode {
    General,
    NodeWeighted,
}

#[derive(Clone, Debug)]
pub struct MergeOutcome {
    pub walk: Walk,
    pub cost: Rational,
    /// Total cost `L` of the input walks.
    pub input_cost: Rational,
    pub connector_cost: Rational,
    /// The bound the cost was audited against.
    pub bound: Rational,
}

/// Per walk, the index range of its vertex sequence inside each chain
/// component.
fn sections(walk: &Walk, component_of: &[usize], l: usize) -> Result<Vec<(usize, usize)>> {
    let verts = walk.vertices();
    let mut out = Vec::with_capacity(l);
    let mut start = 0;
    for i in 1..=verts.len() {
        if i == verts.len() || component_of[verts[i]] != component_of[verts[i - 1]] {
            let comp = component_of[verts[start]];
            if comp != out.len() {
                return Err(Error::Precondition(
                    "walk does not pass the component chain in order".into(),
                ));
            }
            out.push((start, i - 1));
            start = i;
        }
    }
    if out.len() != l {
        return Err(Error::Precondition("walk skips part of the component chain".into()));
    }
    Ok(out)
}

/// Merges s-t walks that jointly cover `V` into one covering s-t walk.
///
/// Each walk is cut into its sections inside the strongly connected
/// components `V_1..V_l` of the support graph. Inside `V_j` the sections
/// are chained in the order `1..k` for odd `j` and `k..1` for even `j`,
/// joined by paths that respect the laminar dual; the walk that ends a
/// component supplies the edge into the next one.
pub fn merge_walks(instance: &Instance, dual: &DualSolution, walks: &[Walk], mode: MergeMode) -> Result<MergeOutcome> {
    let (s, t) = instance.require_endpoints("merge_walks")?;
    let k = walks.len();
    if k == 0 {
        return Err(Error::Precondition("no walks to merge".into()));
    }
    if !dual.laminar {
        return Err(Error::Precondition("dual support is not laminar".into()));
    }
    let n = instance.n();
    let mut covered = vec![false; n];
    let mut input_cost = Rational::zero();
    for w in walks {
        if w.start() != s || w.end() != t {
            return Err(Error::Precondition("every walk must run from s to t".into()));
        }
        input_cost += walk_cost_and_check(instance, w, false)?;
        for &v in w.vertices() {
            covered[v] = true;
        }
    }
    if let Some(v) = covered.iter().position(|c| !c) {
        return Err(Error::CoverViolation(instance.vertex_name(v).to_string()));
    }
    let chain = instance.digraph().scc_chain(None);
    let l = chain.len();
    let component_of: Vec<usize> =
        (0..n).map(|v| chain.component_of(v).expect("every vertex has a component")).collect();
    let cuts: Vec<Vec<(usize, usize)>> =
        walks.iter().map(|w| sections(w, &component_of, l)).collect::<Result<_>>()?;

    let everything = VertexSet::new((0..n).collect());
    let graph = instance.digraph();
    let mut edges: Vec<usize> = Vec::new();
    let mut connectors: Vec<Walk> = Vec::new();
    for j in 0..l {
        // components are numbered from 1 in the description above
        let order: Vec<usize> = if j % 2 == 0 { (0..k).collect() } else { (0..k).rev().collect() };
        for (pos, &i) in order.iter().enumerate() {
            let (a, b) = cuts[i][j];
            edges.extend_from_slice(&walks[i].edges()[a..b]);
            if let Some(&next) = order.get(pos + 1) {
                let from = walks[i].vertices()[b];
                let to = walks[next].vertices()[cuts[next][j].0];
                if from != to {
                    let conn = laminar_respecting_path(instance, dual, &everything, from, to)?;
                    edges.extend_from_slice(conn.edges());
                    connectors.push(conn);
                }
            }
        }
        if j + 1 < l {
            let last = *order.last().expect("k >= 1");
            let (_, b) = cuts[last][j];
            edges.push(walks[last].edges()[b]);
        }
    }
    let walk = Walk::along(&graph, s, edges)?;
    let cost = st_tour_cost(instance, &walk)?;

    for &e in walk.edges().iter().chain(walks.iter().flat_map(|w| w.edges())) {
        if !dual.is_tight(instance, e) {
            return Err(Error::Precondition(format!(
                "edge {}->{} is not tight for the supplied dual",
                instance.vertex_name(instance.edge(e).tail),
                instance.vertex_name(instance.edge(e).head)
            )));
        }
    }
    for set in dual.y.keys() {
        let (mut enters, mut leaves) = (0, 0);
        for c in &connectors {
            let (e, l) = c.crossings(set);
            enters += e;
            leaves += l;
        }
        if enters > k - 1 || leaves > k - 1 {
            return Err(Error::BoundViolated(format!("connectors cross {set} more than k-1 times")));
        }
    }
    let mut connector_cost = Rational::zero();
    for c in &connectors {
        connector_cost += walk_cost_and_check(instance, c, false)?;
    }
    let extra = int(k as i64 - 1);
    let bound = match mode {
        MergeMode::General => {
            let gap = dual.gap(instance)?;
            &input_cost + &extra * (&dual.objective + int(2) * gap)
        }
        MergeMode::NodeWeighted => {
            let weights = instance
                .node_weights()
                .ok_or_else(|| Error::Precondition("node-weighted merge needs node weights".into()))?;
            let per: Rational = (0..n)
                .map(|v| if v == s || v == t { weights[v].clone() } else { int(2) * &weights[v] })
                .sum();
            if connector_cost > &extra * &per {
                return Err(Error::BoundViolated(format!(
                    "connector cost {} exceeds (k-1)(c_s+c_t+2c(V-s-t)) = {}",
                    rational::format(&connector_cost),
                    rational::format(&(&extra * &per))
                )));
            }
            &input_cost + &extra * &dual.objective
        }
    };
    if cost > bound {
        return Err(Error::BoundViolated(format!(
            "merged walk costs {} but the bound is {}",
            rational::format(&cost),
            rational::format(&bound)
        )));
    }
    Ok(MergeOutcome { walk, cost, input_cost, connector_cost, bound })
}

#[derive(Clone, Debug)]
pub struct PipelineOutcome {
    /// The final s-t walk in the original instance.
    pub walk: Walk,
    pub cost: Rational,
    pub lp: Rational,
    pub gap: GapCertificate,
    /// Cost `C_R` of the tour of the augmented instance.
    pub tour_cost: Rational,
    pub k: usize,
    /// Total cost `L` of the s-t walks cut out of the tour.
    pub walks_cost: Rational,
    pub merge_bound: Rational,
    /// `C_R - d·LP`, audited when `d·LP >= LP + 2Δ*`.
    pub tour_bound: Option<Rational>,
}

/// Finds an s-t walk from an ATSP tour: normalizes to the support graph,
/// adds `v*` with `(t, v*)` of cost `d·LP` and `(v*, s)` of cost 0, cuts
/// the tour at `v*` into `k` s-t walks and merges them with the min-gap
/// dual. Without a supplied tour one is computed exactly (size capped).
pub fn path_from_tour_pipeline(instance: &Instance, d: &Rational, tour: Option<&Walk>) -> Result<PipelineOutcome> {
    let (s, _) = instance.require_endpoints("path_from_tour_pipeline")?;
    if d.is_negative() {
        return Err(Error::Precondition("d must be nonnegative".into()));
    }
    let norm = normalize(instance)?;
    let support = &norm.instance;
    let lp = norm.lp.objective.clone();
    let gap = min_gap_dual(support, &norm.lp)?;
    let (augmented, map) = feedback_augment(support, &(d * &lp))?;
    let vstar = augmented.n() - 1;
    let tour = match tour {
        Some(w) => Walk::new(&augmented, w.start(), w.edges().to_vec())?,
        None => exact_atsp_capped(&augmented, DEFAULT_EXACT_CAP)?.0,
    };
    if tour.start() != tour.end() {
        return Err(Error::InvalidWalk("tour is not closed".into()));
    }
    let tour_cost = walk_cost_and_check(&augmented, &tour, true)?;

    // rotate so the tour starts at v*, then cut it at every visit of v*
    let pos = tour.vertices().iter().position(|&v| v == vstar).expect("tour covers v*");
    let mut rotated: Vec<usize> = tour.edges()[pos..].to_vec();
    rotated.extend_from_slice(&tour.edges()[..pos]);
    let mut walks = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    for &e in &rotated {
        match map.edge_map[e] {
            Some(orig) => current.push(orig),
            None => {
                if augmented.edge(e).head == vstar {
                    walks.push(Walk::new(support, s, std::mem::take(&mut current))?);
                }
            }
        }
    }
    let k = walks.len();
    let walks_cost: Rational = walks.iter().map(|w| walk_cost_and_check(support, w, false)).sum::<Result<_>>()?;
    if walks_cost != &tour_cost - int(k as i64) * d * &lp {
        return Err(Error::Internal("walk costs do not add up to the tour cost".into()));
    }
    let merged = merge_walks(support, &gap.dual, &walks, MergeMode::General)?;
    let tour_bound = (d * &lp >= &lp + int(2) * &gap.delta).then(|| &tour_cost - d * &lp);
    if let Some(bound) = &tour_bound {
        if merged.cost > *bound {
            return Err(Error::BoundViolated(format!(
                "final walk costs {} above C_R - d*LP = {}",
                rational::format(&merged.cost),
                rational::format(bound)
            )));
        }
    }
    let edges: Vec<usize> = merged.walk.edges().iter().map(|&e| norm.edge_map[e]).collect();
    let walk = Walk::new(instance, s, edges)?;
    let cost = st_tour_cost(instance, &walk)?;
    Ok(PipelineOutcome {
        walk,
        cost,
        lp,
        gap,
        tour_cost,
        k,
        walks_cost,
        merge_bound: merged.bound,
        tour_bound,
    })
}
