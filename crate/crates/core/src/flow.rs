//! Shortest-augmenting-path maximum flow over an exact numeric type.

use std::collections::VecDeque;
use std::ops::{Add, Sub};

use num_traits::Zero;

#[derive(Clone, Debug)]
struct Arc<T> {
    to: usize,
    cap: T,
    flow: T,
}

/// Residual network; arcs are stored in pairs `(a, a ^ 1)`.
#[derive(Clone, Debug)]
pub struct FlowNetwork<T> {
    arcs: Vec<Arc<T>>,
    adj: Vec<Vec<usize>>,
}

impl<T> FlowNetwork<T>
where
    T: Clone + Ord + Zero + Add<Output = T> + Sub<Output = T>,
    for<'a> &'a T: Add<&'a T, Output = T> + Sub<&'a T, Output = T>,
{
    pub fn new(n: usize) -> Self {
        FlowNetwork { arcs: Vec::new(), adj: vec![Vec::new(); n] }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Directed arc `u -> v`; returns its id.
    pub fn add_arc(&mut self, u: usize, v: usize, cap: T) -> usize {
        self.push_pair(u, v, cap, T::zero())
    }

    /// Undirected edge with capacity `cap` in both directions.
    pub fn add_undirected(&mut self, u: usize, v: usize, cap: T) -> usize {
        let back = cap.clone();
        self.push_pair(u, v, cap, back)
    }

    fn push_pair(&mut self, u: usize, v: usize, cap: T, back: T) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc { to: v, cap, flow: T::zero() });
        self.arcs.push(Arc { to: u, cap: back, flow: T::zero() });
        self.adj[u].push(id);
        self.adj[v].push(id + 1);
        id
    }

    fn residual(&self, a: usize) -> T {
        &self.arcs[a].cap - &self.arcs[a].flow
    }

    /// Net flow on arc `id` in its forward direction.
    pub fn flow(&self, id: usize) -> &T {
        &self.arcs[id].flow
    }

    pub fn head(&self, id: usize) -> usize {
        self.arcs[id].to
    }

    /// Augments until no path remains or `limit` is reached; returns the
    /// value of the flow found by this call.
    pub fn max_flow(&mut self, s: usize, t: usize, limit: Option<&T>) -> T {
        let mut total = T::zero();
        if s == t {
            return total;
        }
        loop {
            if let Some(limit) = limit {
                if &total >= limit {
                    break;
                }
            }
            let mut pred: Vec<Option<usize>> = vec![None; self.n()];
            let mut seen = vec![false; self.n()];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                if u == t {
                    break;
                }
                for &a in &self.adj[u] {
                    let v = self.arcs[a].to;
                    if !seen[v] && self.residual(a) > T::zero() {
                        seen[v] = true;
                        pred[v] = Some(a);
                        queue.push_back(v);
                    }
                }
            }
            if !seen[t] {
                break;
            }
            let mut bottleneck: Option<T> = None;
            let mut v = t;
            while v != s {
                let a = pred[v].expect("augmenting path is recorded");
                let r = self.residual(a);
                bottleneck = Some(match bottleneck {
                    Some(b) if b <= r => b,
                    _ => r,
                });
                v = self.arcs[a ^ 1].to;
            }
            let mut delta = bottleneck.expect("path has at least one arc");
            if let Some(limit) = limit {
                let room = limit - &total;
                if room < delta {
                    delta = room;
                }
            }
            let mut v = t;
            while v != s {
                let a = pred[v].expect("augmenting path is recorded");
                self.arcs[a].flow = &self.arcs[a].flow + &delta;
                self.arcs[a ^ 1].flow = &self.arcs[a ^ 1].flow - &delta;
                v = self.arcs[a ^ 1].to;
            }
            total = total + delta;
        }
        total
    }

    /// Vertices reachable from `s` in the residual network.
    pub fn source_side(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let v = self.arcs[a].to;
                if !seen[v] && self.residual(a) > T::zero() {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    /// Forward arc ids leaving `u` (excluding reverse twins).
    pub fn forward_arcs(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[u].iter().copied().filter(|a| a % 2 == 0)
    }
}
