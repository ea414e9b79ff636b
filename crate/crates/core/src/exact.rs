//! Exact optima at desk scale: Held–Karp subset dynamic programming over
//! the metric closure, and the complete dual LP as a test oracle.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::closure::{metric_closure, PathMap};
use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::instance::Instance;
use crate::instances::common_denominator;
use crate::lp::{solve_exact_lp, Bound, LinearProgram, LpResult, Relation};
use crate::rational::Rational;
use crate::relaxation::{DualSolution, GapCertificate};
use crate::walk::{walk_cost_and_check, Walk};

pub const DEFAULT_EXACT_CAP: usize = 20;
pub const DEFAULT_DUAL_CAP: usize = 12;

const INF: i64 = i64::MAX;

/// Closure distances scaled to integers by the common denominator.
struct ScaledDistances {
    dist: Vec<Vec<i64>>,
    scale: BigInt,
}

fn scaled_distances(map: &PathMap, n: usize) -> Result<ScaledDistances> {
    let finite: Vec<&Rational> = (0..n).flat_map(|u| (0..n).filter_map(move |v| map.dist(u, v))).collect();
    let scale = common_denominator(finite.iter().copied());
    let mut dist = vec![vec![INF; n]; n];
    for (u, row) in dist.iter_mut().enumerate() {
        for (v, slot) in row.iter_mut().enumerate() {
            if let Some(d) = map.dist(u, v) {
                let scaled = (d.numer() * (&scale / d.denom())).to_i64().ok_or_else(|| {
                    Error::Internal("scaled distance does not fit in 64 bits".into())
                })?;
                *slot = scaled;
            }
        }
    }
    Ok(ScaledDistances { dist, scale })
}

fn add(a: i64, b: i64) -> Result<i64> {
    if a == INF || b == INF {
        return Ok(INF);
    }
    a.checked_add(b).ok_or_else(|| Error::Internal("tour cost overflows 64 bits".into()))
}

/// Cheapest order through `middle` from `start` to `end`, as positions in
/// `middle`. `None` when no finite order exists.
fn held_karp(dist: &[Vec<i64>], start: usize, middle: &[usize], end: usize) -> Result<Option<(i64, Vec<usize>)>> {
    let m = middle.len();
    if m == 0 {
        let d = dist[start][end];
        return Ok((d != INF).then(|| (d, Vec::new())));
    }
    let full = (1usize << m) - 1;
    let mut dp = vec![INF; (full + 1) * m];
    let mut parent = vec![u8::MAX; (full + 1) * m];
    for j in 0..m {
        dp[(1 << j) * m + j] = dist[start][middle[j]];
    }
    for mask in 1..=full {
        for j in 0..m {
            let cur = dp[mask * m + j];
            if cur == INF || mask & (1 << j) == 0 {
                continue;
            }
            let row = &dist[middle[j]];
            for nxt in 0..m {
                if mask & (1 << nxt) != 0 {
                    continue;
                }
                let cand = add(cur, row[middle[nxt]])?;
                let slot = (mask | (1 << nxt)) * m + nxt;
                if cand < dp[slot] {
                    dp[slot] = cand;
                    parent[slot] = j as u8;
                }
            }
        }
    }
    let mut best: Option<(i64, usize)> = None;
    for j in 0..m {
        let cand = add(dp[full * m + j], dist[middle[j]][end])?;
        if cand != INF && best.is_none_or(|(b, _)| cand < b) {
            best = Some((cand, j));
        }
    }
    let Some((value, mut j)) = best else { return Ok(None) };
    let mut order = Vec::with_capacity(m);
    let mut mask = full;
    loop {
        order.push(j);
        let p = parent[mask * m + j];
        mask &= !(1 << j);
        if mask == 0 {
            break;
        }
        j = p as usize;
    }
    order.reverse();
    Ok(Some((value, order)))
}

fn expand_order(instance: &Instance, map: &PathMap, order: &[usize]) -> Result<Walk> {
    let mut edges = Vec::new();
    for pair in order.windows(2) {
        edges.extend(map.expand(pair[0], pair[1]));
    }
    Walk::new(instance, order[0], edges)
}

fn check_cap(instance: &Instance, cap: usize) -> Result<()> {
    if instance.n() > cap {
        return Err(Error::SizeCap { n: instance.n(), cap });
    }
    Ok(())
}

fn finish(instance: &Instance, walk: Walk, value: i64, scale: &BigInt) -> Result<(Walk, Rational)> {
    let cost = Rational::new(BigInt::from(value), scale.clone());
    let recomputed = walk_cost_and_check(instance, &walk, true)?;
    if recomputed != cost {
        return Err(Error::Internal("expanded tour cost differs from the DP value".into()));
    }
    Ok((walk, cost))
}

/// Optimal s-t walk visiting every vertex, for instances up to `cap`
/// vertices.
pub fn exact_atspp_capped(instance: &Instance, cap: usize) -> Result<(Walk, Rational)> {
    let (s, t) = instance.require_endpoints("exact_atspp")?;
    check_cap(instance, cap)?;
    let (_, map) = metric_closure(instance)?;
    let sd = scaled_distances(&map, instance.n())?;
    let middle: Vec<usize> = (0..instance.n()).filter(|&v| v != s && v != t).collect();
    let (value, order) = held_karp(&sd.dist, s, &middle, t)?
        .ok_or_else(|| Error::NoFiniteTour("no covering s-t walk".into()))?;
    let mut seq = vec![s];
    seq.extend(order.iter().map(|&j| middle[j]));
    seq.push(t);
    let walk = expand_order(instance, &map, &seq)?;
    finish(instance, walk, value, &sd.scale)
}

pub fn exact_atspp(instance: &Instance) -> Result<(Walk, Rational)> {
    exact_atspp_capped(instance, DEFAULT_EXACT_CAP)
}

/// Optimal closed walk through every vertex, starting at vertex 0.
pub fn exact_atsp_capped(instance: &Instance, cap: usize) -> Result<(Walk, Rational)> {
    if instance.is_atspp() {
        return Err(Error::Precondition("exact_atsp expects an atsp instance".into()));
    }
    check_cap(instance, cap)?;
    let (_, map) = metric_closure(instance)?;
    let sd = scaled_distances(&map, instance.n())?;
    if instance.n() == 1 {
        return finish(instance, Walk::trivial(0), 0, &sd.scale);
    }
    let middle: Vec<usize> = (1..instance.n()).collect();
    let (value, order) = held_karp(&sd.dist, 0, &middle, 0)?
        .ok_or_else(|| Error::NoFiniteTour("no covering closed walk".into()))?;
    let mut seq = vec![0];
    seq.extend(order.iter().map(|&j| middle[j]));
    seq.push(0);
    let walk = expand_order(instance, &map, &seq)?;
    finish(instance, walk, value, &sd.scale)
}

pub fn exact_atsp(instance: &Instance) -> Result<(Walk, Rational)> {
    exact_atsp_capped(instance, DEFAULT_EXACT_CAP)
}

/// Solves the dual with a variable for every admissible cut set: first its
/// optimum, then the least `a_s - a_t` among optimal solutions. The
/// support is reported as found, without uncrossing.
pub fn brute_force_optimal_dual(instance: &Instance) -> Result<GapCertificate> {
    let (s, t) = instance.require_endpoints("brute_force_optimal_dual")?;
    check_cap(instance, DEFAULT_DUAL_CAP)?;
    let n = instance.n();
    let middle: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
    let sets: Vec<VertexSet> = (1usize..(1 << middle.len()))
        .map(|mask| VertexSet::new((0..middle.len()).filter(|&j| mask & (1 << j) != 0).map(|j| middle[j]).collect()))
        .collect();
    let width = n + sets.len();
    let one = || Rational::from_integer(1.into());
    let two = Rational::from_integer(2.into());
    let build = |objective: Vec<Rational>| {
        let mut lp = LinearProgram::new(objective);
        for v in 0..n {
            lp.set_bound(v, Bound::Free);
        }
        for edge in instance.edges() {
            let mut terms = vec![(edge.head, one()), (edge.tail, -one())];
            for (j, set) in sets.iter().enumerate() {
                if set.cuts(edge.tail, edge.head) {
                    terms.push((n + j, one()));
                }
            }
            lp.add_sparse_row(terms, Relation::Le, edge.cost.clone());
        }
        lp
    };
    // stage 1: maximise a_t - a_s + 2 Σ y
    let mut obj = vec![Rational::zero(); width];
    obj[s] = one();
    obj[t] = -one();
    for c in obj.iter_mut().skip(n) {
        *c = -two.clone();
    }
    let value = match solve_exact_lp(&build(obj))? {
        LpResult::Optimal { objective, .. } => -objective,
        LpResult::Unbounded { .. } => {
            return Err(Error::Precondition("dual is unbounded; the relaxation is infeasible".into()))
        }
        LpResult::Infeasible { .. } => return Err(Error::Internal("dual LP infeasible".into())),
    };
    // stage 2: minimise a_s - a_t at that value
    let mut obj = vec![Rational::zero(); width];
    obj[s] = one();
    obj[t] = -one();
    let mut lp = build(obj);
    let mut terms = vec![(t, one()), (s, -one())];
    terms.extend((0..sets.len()).map(|j| (n + j, two.clone())));
    lp.add_sparse_row(terms, Relation::Eq, value.clone());
    let primal = match solve_exact_lp(&lp)? {
        LpResult::Optimal { primal, .. } => primal,
        other => return Err(Error::Internal(format!("second dual stage not optimal: {other:?}"))),
    };
    let a = primal[..n].to_vec();
    let y: BTreeMap<VertexSet, Rational> = sets.into_iter().zip(primal[n..].iter().cloned()).collect();
    let dual = DualSolution::new(instance, a, y);
    if dual.objective != value {
        return Err(Error::Internal("oracle dual lost optimality".into()));
    }
    let delta = dual.gap(instance)?;
    Ok(GapCertificate { delta, dual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::InstanceBuilder;
    use crate::instances::{gen_fig1, gen_fig4};
    use crate::rational::int;

    #[test]
    fn fig4_and_fig1_optima() {
        let (walk, cost) = exact_atspp(&gen_fig4()).unwrap();
        assert_eq!(cost, int(1));
        assert_eq!(walk.vertices(), &[0, 1, 2, 3]);
        let (inst, _) = gen_fig1(2);
        assert_eq!(exact_atspp(&inst).unwrap().1, int(3));
    }

    #[test]
    fn tiny_cases() {
        let mut b = InstanceBuilder::new("st");
        let s = b.vertex("s");
        let t = b.vertex("t");
        b.edge(s, t, int(0));
        b.endpoint_indices(s, t);
        let st = b.build().unwrap();
        assert_eq!(exact_atspp(&st).unwrap().1, int(0));

        let mut b = InstanceBuilder::new("pair");
        b.vertex("a");
        b.vertex("b");
        b.edge(0, 1, int(1));
        b.edge(1, 0, int(1));
        assert_eq!(exact_atsp(&b.build().unwrap()).unwrap().1, int(2));

        let mut b = InstanceBuilder::new("c3");
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
        assert_eq!(exact_atsp(&b.build().unwrap()).unwrap().1, int(3));
    }

    #[test]
    fn size_cap_is_enforced() {
        let (inst, _) = gen_fig1(2);
        assert!(matches!(exact_atspp_capped(&inst, 5), Err(Error::SizeCap { n: 8, cap: 5 })));
    }

    #[test]
    fn oracle_on_small_cases() {
        assert_eq!(brute_force_optimal_dual(&gen_fig4()).unwrap().delta, int(1));
        let mut b = InstanceBuilder::new("st");
        let s = b.vertex("s");
        let t = b.vertex("t");
        b.edge(s, t, int(5));
        b.endpoint_indices(s, t);
        assert_eq!(brute_force_optimal_dual(&b.build().unwrap()).unwrap().delta, int(-5));
    }
}
