//! Plain digraph structure: reachability, shortest-hop paths and the
//! strongly connected component chain.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;

use crate::instance::Instance;

/// A set of vertex indices kept sorted; ordering is lexicographic on the
/// sorted sequence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        VertexSet(vertices)
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        VertexSet(mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect())
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(vec![v])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for v in self.iter() {
            mask[v] = true;
        }
        mask
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| !other.contains(v))
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| !other.contains(v)).collect())
    }

    /// Nested or disjoint pairs do not cross.
    pub fn crosses(&self, other: &VertexSet) -> bool {
        let common = self.iter().any(|v| other.contains(v));
        common && !self.is_subset(other) && !other.is_subset(self)
    }

    /// Whether the edge `(tail, head)` has exactly one endpoint in the set.
    pub fn cuts(&self, tail: usize, head: usize) -> bool {
        self.contains(tail) != self.contains(head)
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Debug)]
pub struct Digraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let edges: Vec<_> = edges.into_iter().collect();
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            out_edges[u].push(i);
            in_edges[v].push(i);
        }
        Digraph { n, edges, out_edges, in_edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    fn allowed(mask: Option<&[bool]>, v: usize) -> bool {
        mask.is_none_or(|m| m[v])
    }

    /// Vertices reachable from `src` using only vertices in `within`.
    pub fn reachable_from(&self, src: usize, within: Option<&[bool]>) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        if !Self::allowed(within, src) {
            return seen;
        }
        seen[src] = true;
        let mut stack = vec![src];
        while let Some(u) = stack.pop() {
            for &e in &self.out_edges[u] {
                let w = self.edges[e].1;
                if !seen[w] && Self::allowed(within, w) {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Vertices that can reach `dst` using only vertices in `within`.
    pub fn reaching(&self, dst: usize, within: Option<&[bool]>) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        if !Self::allowed(within, dst) {
            return seen;
        }
        seen[dst] = true;
        let mut stack = vec![dst];
        while let Some(u) = stack.pop() {
            for &e in &self.in_edges[u] {
                let w = self.edges[e].0;
                if !seen[w] && Self::allowed(within, w) {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Fewest-edge path from `src` to `dst` inside `within`, as edge
    /// indices. Ties resolve toward smaller edge indices.
    pub fn bfs_path(&self, src: usize, dst: usize, within: Option<&[bool]>) -> Option<Vec<usize>> {
        if !Self::allowed(within, src) || !Self::allowed(within, dst) {
            return None;
        }
        let mut pred: Vec<Option<usize>> = vec![None; self.n];
        let mut seen = vec![false; self.n];
        seen[src] = true;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            if u == dst {
                break;
            }
            for &e in &self.out_edges[u] {
                let w = self.edges[e].1;
                if !seen[w] && Self::allowed(within, w) {
                    seen[w] = true;
                    pred[w] = Some(e);
                    queue.push_back(w);
                }
            }
        }
        if !seen[dst] {
            return None;
        }
        let mut path = Vec::new();
        let mut v = dst;
        while v != src {
            let e = pred[v].expect("predecessor recorded during search");
            path.push(e);
            v = self.edges[e].0;
        }
        path.reverse();
        Some(path)
    }

    /// Strongly connected components of the subgraph induced by `within`,
    /// in a topological order. Among simultaneously available components
    /// the one holding the smallest vertex comes first.
    pub fn scc_chain(&self, within: Option<&[bool]>) -> SccChain {
        let comps = self.tarjan(within);
        let mut comp_of = vec![usize::MAX; self.n];
        for (c, vs) in comps.iter().enumerate() {
            for &v in vs {
                comp_of[v] = c;
            }
        }
        let k = comps.len();
        let mut indeg = vec![0usize; k];
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); k];
        for &(u, v) in &self.edges {
            let (cu, cv) = (comp_of[u], comp_of[v]);
            if cu == usize::MAX || cv == usize::MAX || cu == cv {
                continue;
            }
            succ[cu].push(cv);
            indeg[cv] += 1;
        }
        let key = |c: usize| comps[c][0];
        let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
            (0..k).filter(|&c| indeg[c] == 0).map(|c| Reverse((key(c), c))).collect();
        let mut order = Vec::with_capacity(k);
        while let Some(Reverse((_, c))) = heap.pop() {
            order.push(c);
            for &d in &succ[c] {
                indeg[d] -= 1;
                if indeg[d] == 0 {
                    heap.push(Reverse((key(d), d)));
                }
            }
        }
        let components: Vec<Vec<usize>> = order.into_iter().map(|c| comps[c].clone()).collect();
        SccChain::from_components(self.n, components)
    }

    /// Iterative Tarjan; each component is returned sorted.
    fn tarjan(&self, within: Option<&[bool]>) -> Vec<Vec<usize>> {
        const UNSEEN: usize = usize::MAX;
        let mut index = vec![UNSEEN; self.n];
        let mut low = vec![0usize; self.n];
        let mut on_stack = vec![false; self.n];
        let mut stack = Vec::new();
        let mut comps = Vec::new();
        let mut counter = 0;
        for root in 0..self.n {
            if index[root] != UNSEEN || !Self::allowed(within, root) {
                continue;
            }
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(top) = call.last_mut() {
                let v = top.0;
                if top.1 < self.out_edges[v].len() {
                    let w = self.edges[self.out_edges[v][top.1]].1;
                    top.1 += 1;
                    if !Self::allowed(within, w) {
                        continue;
                    }
                    if index[w] == UNSEEN {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack holds the component");
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        comps.push(comp);
                    }
                }
            }
        }
        comps
    }
}

/// Vertex sets `V_1..V_l` of strongly connected components in topological
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccChain {
    components: Vec<Vec<usize>>,
    component_of: Vec<Option<usize>>,
}

impl SccChain {
    fn from_components(n: usize, components: Vec<Vec<usize>>) -> Self {
        let mut component_of = vec![None; n];
        for (i, c) in components.iter().enumerate() {
            for &v in c {
                component_of[v] = Some(i);
            }
        }
        SccChain { components, component_of }
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Index of the component holding `v`, if `v` was part of the subgraph.
    pub fn component_of(&self, v: usize) -> Option<usize> {
        self.component_of[v]
    }
}

/// SCC chain of the whole instance graph.
pub fn scc_topological_order(instance: &Instance) -> SccChain {
    instance.digraph().scc_chain(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dag_gives_singletons_in_order() {
        let g = Digraph::new(3, [(0, 1), (1, 2)]);
        assert_eq!(g.scc_chain(None).components(), &[vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn bidirected_path_is_one_component() {
        let g = Digraph::new(3, [(0, 1), (1, 0), (1, 2), (2, 1)]);
        assert_eq!(g.scc_chain(None).components(), &[vec![0, 1, 2]]);
    }

    #[test]
    fn ties_prefer_smallest_vertex() {
        // 2 and 0 are both sources; 0 must be listed first.
        let g = Digraph::new(3, [(2, 1), (0, 1)]);
        assert_eq!(g.scc_chain(None).components(), &[vec![0], vec![2], vec![1]]);
    }

    #[test]
    fn induced_subgraph_restriction() {
        let g = Digraph::new(4, [(0, 1), (1, 2), (2, 0), (2, 3)]);
        let mask = [true, true, false, true];
        let chain = g.scc_chain(Some(&mask));
        assert_eq!(chain.components(), &[vec![0], vec![1], vec![3]]);
        assert_eq!(chain.component_of(2), None);
    }

    #[test]
    fn vertex_set_crossing() {
        let a = VertexSet::new(vec![1, 2]);
        let b = VertexSet::new(vec![2, 3]);
        let c = VertexSet::new(vec![1, 2, 3]);
        assert!(a.crosses(&b));
        assert!(!a.crosses(&c));
        assert!(!a.crosses(&VertexSet::singleton(5)));
        assert_eq!(a.difference(&b), VertexSet::singleton(1));
    }

    proptest! {
        #[test]
        fn scc_order_respects_every_edge(n in 1usize..9, raw in proptest::collection::vec((0usize..9, 0usize..9), 0..30)) {
            let edges: Vec<_> = raw.into_iter().map(|(u, v)| (u % n, v % n)).collect();
            let g = Digraph::new(n, edges.clone());
            let chain = g.scc_chain(None);
            let mut all: Vec<usize> = chain.components().concat();
            all.sort_unstable();
            prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
            for (u, v) in edges {
                prop_assert!(chain.component_of(u).unwrap() <= chain.component_of(v).unwrap());
            }
            for comp in chain.components() {
                let mask: Vec<bool> = (0..n).map(|v| comp.contains(&v)).collect();
                let reach = g.reachable_from(comp[0], Some(&mask));
                prop_assert!(comp.iter().all(|&v| reach[v]));
            }
        }
    }
}
