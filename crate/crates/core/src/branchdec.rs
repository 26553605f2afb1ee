//! Branch decompositions: a tree whose leaves are in bijection with the edges
//! of a graph. The middle set of a tree edge is the set of vertices incident to
//! graph edges on both of its sides.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::treedec::TreeDecomposition;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchDecomposition {
    /// Number of tree nodes; nodes are `0..nodes`.
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
    /// Leaf node to graph edge.
    pub leaf_map: BTreeMap<usize, (usize, usize)>,
    /// Middle sets as declared by the producer, one per entry of `edges`.
    /// Never trusted: validation recomputes and compares them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub middle_sets: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BdViolation {
    NotATree(String),
    /// Internal node whose degree is not 3.
    NotTernary { node: usize, degree: usize },
    UnmappedLeaf(usize),
    MappedInternalNode(usize),
    UnknownEdge(usize, usize),
    DuplicateEdge(usize, usize),
    MissingEdge(usize, usize),
    MiddleSetMismatch { tree_edge: usize },
}

impl fmt::Display for BdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BdViolation::NotATree(m) => write!(f, "decomposition tree is not a tree: {m}"),
            BdViolation::NotTernary { node, degree } => {
                write!(f, "internal node {node} has degree {degree}, expected 3")
            }
            BdViolation::UnmappedLeaf(l) => write!(f, "leaf {l} is not mapped to an edge"),
            BdViolation::MappedInternalNode(l) => write!(f, "internal node {l} is mapped to an edge"),
            BdViolation::UnknownEdge(u, v) => write!(f, "leaf maps to non-edge {{{u}, {v}}}"),
            BdViolation::DuplicateEdge(u, v) => write!(f, "edge {{{u}, {v}}} is mapped twice"),
            BdViolation::MissingEdge(u, v) => write!(f, "edge {{{u}, {v}}} has no leaf"),
            BdViolation::MiddleSetMismatch { tree_edge } => {
                write!(f, "declared middle set of tree edge {tree_edge} is wrong")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BdReport {
    pub width: usize,
    /// Recomputed middle set of each tree edge, sorted.
    pub middle_sets: Vec<Vec<usize>>,
    pub violations: Vec<BdViolation>,
}

impl BdReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn norm(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl BranchDecomposition {
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes];
        for &(a, b) in &self.edges {
            if a < self.nodes && b < self.nodes {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        adj
    }

    /// Linear ("caterpillar") decomposition following the given edge order.
    pub fn caterpillar(order: &[(usize, usize)]) -> Self {
        let m = order.len();
        let mut bd = BranchDecomposition::default();
        match m {
            0 => {}
            1 => {
                bd.nodes = 1;
                bd.leaf_map.insert(0, norm(order[0].0, order[0].1));
            }
            2 => {
                bd.nodes = 2;
                bd.edges.push((0, 1));
                bd.leaf_map.insert(0, norm(order[0].0, order[0].1));
                bd.leaf_map.insert(1, norm(order[1].0, order[1].1));
            }
            _ => {
                // leaves 0..m, spine m..2m-2
                bd.nodes = 2 * m - 2;
                let spine = |i: usize| m + i;
                for (i, &(u, v)) in order.iter().enumerate() {
                    bd.leaf_map.insert(i, norm(u, v));
                    let s = match i {
                        0 | 1 => 0,
                        _ if i == m - 1 => m - 3,
                        _ => i - 1,
                    };
                    bd.edges.push((i, spine(s)));
                }
                for s in 0..m - 3 {
                    bd.edges.push((spine(s), spine(s + 1)));
                }
            }
        }
        bd
    }

    fn tree_problem(&self) -> Option<String> {
        let k = self.nodes;
        if k == 0 {
            return (!self.edges.is_empty()).then(|| "edges without nodes".into());
        }
        if let Some(&(a, b)) = self.edges.iter().find(|&&(a, b)| a >= k || b >= k) {
            return Some(format!("edge ({a}, {b}) references a missing node"));
        }
        if self.edges.len() != k - 1 {
            return Some(format!("{k} nodes but {} edges", self.edges.len()));
        }
        let adj = self.adjacency();
        let mut seen = vec![false; k];
        seen[0] = true;
        let mut stack = vec![0];
        let mut count = 1;
        while let Some(a) = stack.pop() {
            for &b in &adj[a] {
                if !seen[b] {
                    seen[b] = true;
                    count += 1;
                    stack.push(b);
                }
            }
        }
        (count != k).then(|| "tree is disconnected".into())
    }

    /// Validates the tree shape and leaf bijection and recomputes every middle set.
    pub fn validate(&self, g: &Graph) -> BdReport {
        let mut violations = Vec::new();
        if let Some(m) = self.tree_problem() {
            violations.push(BdViolation::NotATree(m));
            return BdReport {
                width: 0,
                middle_sets: Vec::new(),
                violations,
            };
        }
        let adj = self.adjacency();
        for (node, ns) in adj.iter().enumerate() {
            let leaf = ns.len() <= 1;
            if leaf && !self.leaf_map.contains_key(&node) {
                violations.push(BdViolation::UnmappedLeaf(node));
            }
            if !leaf {
                if self.leaf_map.contains_key(&node) {
                    violations.push(BdViolation::MappedInternalNode(node));
                }
                if ns.len() != 3 {
                    violations.push(BdViolation::NotTernary {
                        node,
                        degree: ns.len(),
                    });
                }
            }
        }
        let mut used = BTreeSet::new();
        for &(u, v) in self.leaf_map.values() {
            let e = norm(u, v);
            if e.1 >= g.n() || !g.has_edge(e.0, e.1) {
                violations.push(BdViolation::UnknownEdge(e.0, e.1));
            } else if !used.insert(e) {
                violations.push(BdViolation::DuplicateEdge(e.0, e.1));
            }
        }
        for e in g.edges() {
            if !used.contains(&e) {
                violations.push(BdViolation::MissingEdge(e.0, e.1));
            }
        }
        if !violations.is_empty() {
            return BdReport {
                width: 0,
                middle_sets: Vec::new(),
                violations,
            };
        }
        let middle_sets = self.middle_sets_unchecked(g);
        if let Some(declared) = &self.middle_sets {
            for (i, computed) in middle_sets.iter().enumerate() {
                let mut d = declared.get(i).cloned().unwrap_or_default();
                d.sort_unstable();
                d.dedup();
                if declared.len() != middle_sets.len() || &d != computed {
                    violations.push(BdViolation::MiddleSetMismatch { tree_edge: i });
                }
            }
        }
        BdReport {
            width: middle_sets.iter().map(Vec::len).max().unwrap_or(0),
            middle_sets,
            violations,
        }
    }

    /// Middle sets indexed like `self.edges`, assuming a valid decomposition.
    pub(crate) fn middle_sets_unchecked(&self, g: &Graph) -> Vec<Vec<usize>> {
        if self.nodes == 0 {
            return Vec::new();
        }
        let adj = self.adjacency();
        // iterative DFS from node 0: parent, preorder, leaf positions
        let mut parent = vec![usize::MAX; self.nodes];
        let mut order = Vec::with_capacity(self.nodes);
        let mut stack = vec![0];
        parent[0] = 0;
        while let Some(a) = stack.pop() {
            order.push(a);
            for &b in adj[a].iter().rev() {
                if parent[b] == usize::MAX {
                    parent[b] = a;
                    stack.push(b);
                }
            }
        }
        let mut lo = vec![usize::MAX; self.nodes];
        let mut hi = vec![0usize; self.nodes];
        let mut pos = 0;
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
        for &a in &order {
            if let Some(&(u, v)) = self.leaf_map.get(&a) {
                lo[a] = pos;
                hi[a] = pos + 1;
                incident[u].push(pos);
                incident[v].push(pos);
                pos += 1;
            }
        }
        for &a in order.iter().rev() {
            if a != 0 {
                let p = parent[a];
                lo[p] = lo[p].min(lo[a]);
                hi[p] = hi[p].max(hi[a]);
            }
        }
        let inside = |v: usize, a: usize| {
            let ps = &incident[v];
            let start = ps.partition_point(|&p| p < lo[a]);
            let end = ps.partition_point(|&p| p < hi[a]);
            end - start
        };
        // middle set of the edge above node a, bottom-up
        let mut mid: Vec<Vec<usize>> = vec![Vec::new(); self.nodes];
        for &a in order.iter().rev() {
            if a == 0 {
                continue;
            }
            let mut cand: Vec<usize> = Vec::new();
            if let Some(&(u, v)) = self.leaf_map.get(&a) {
                cand.push(u);
                cand.push(v);
            }
            for &b in &adj[a] {
                if b != parent[a] {
                    cand.extend_from_slice(&mid[b]);
                }
            }
            cand.sort_unstable();
            cand.dedup();
            cand.retain(|&v| {
                let c = inside(v, a);
                c > 0 && c < incident[v].len()
            });
            mid[a] = cand;
        }
        self.edges
            .iter()
            .map(|&(a, b)| {
                let child = if parent[a] == b && a != 0 { a } else { b };
                mid[child].clone()
            })
            .collect()
    }

    /// Keeps only the leaves mapped to edges of `keep`, then prunes dead
    /// branches and suppresses degree-2 nodes. Middle sets can only shrink.
    pub fn restrict(&self, keep: &BTreeSet<(usize, usize)>) -> BranchDecomposition {
        let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.nodes];
        for &(a, b) in &self.edges {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        let leaf_map = self
            .leaf_map
            .iter()
            .map(|(&l, &(u, v))| (l, norm(u, v)))
            .filter(|(_, e)| keep.contains(e))
            .collect();
        normalize(adj, leaf_map)
    }

    /// A branch decomposition whose middle sets lie inside bags of `td`, so its
    /// width is at most the width of `td` plus one.
    pub fn from_tree_decomposition(g: &Graph, td: &TreeDecomposition) -> BranchDecomposition {
        let edges: Vec<(usize, usize)> = g.edges().collect();
        if edges.len() <= 2 {
            return BranchDecomposition::caterpillar(&edges);
        }
        let mut sorted: Vec<Vec<usize>> = td.bags.clone();
        for b in &mut sorted {
            b.sort_unstable();
        }
        let k = td.bags.len();
        let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k + edges.len()];
        for &(a, b) in &td.edges {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        let mut leaf_map = BTreeMap::new();
        for (i, &(u, v)) in edges.iter().enumerate() {
            let home = (0..k)
                .find(|&b| sorted[b].binary_search(&u).is_ok() && sorted[b].binary_search(&v).is_ok())
                .expect("tree decomposition covers every edge");
            adj[home].insert(k + i);
            adj[k + i].insert(home);
            leaf_map.insert(k + i, (u, v));
        }
        normalize(adj, leaf_map)
    }
}

/// Turns a tree with some leaves mapped to edges into a branch decomposition:
/// unmapped leaves are pruned, nodes of degree above 3 are split into
/// chains and degree-2 nodes are suppressed. Middle sets never grow.
fn normalize(mut adj: Vec<BTreeSet<usize>>, mut leaf_map: BTreeMap<usize, (usize, usize)>) -> BranchDecomposition {
    let mut alive = vec![true; adj.len()];
    let mut stack: Vec<usize> = (0..adj.len()).collect();
    while let Some(a) = stack.pop() {
        if !alive[a] || adj[a].len() > 1 || leaf_map.contains_key(&a) {
            continue;
        }
        alive[a] = false;
        let ns: Vec<usize> = std::mem::take(&mut adj[a]).into_iter().collect();
        for b in ns {
            adj[b].remove(&a);
            stack.push(b);
        }
    }
    // a mapped node of degree > 1 becomes a leaf hanging off a fresh node
    let mapped: Vec<usize> = leaf_map.keys().copied().filter(|&l| adj[l].len() > 1).collect();
    for l in mapped {
        let x = adj.len();
        let moved = std::mem::take(&mut adj[l]);
        adj.push(moved);
        alive.push(true);
        let ns: Vec<usize> = adj[x].iter().copied().collect();
        for b in ns {
            adj[b].remove(&l);
            adj[b].insert(x);
        }
        adj[x].insert(l);
        adj[l].insert(x);
    }
    for a in 0..adj.len() {
        if !alive[a] || adj[a].len() <= 3 {
            continue;
        }
        let ns: Vec<usize> = adj[a].iter().copied().collect();
        // keep two neighbours at a, move the rest down a chain
        let mut cur = a;
        for (i, &b) in ns.iter().enumerate().skip(2) {
            if i == ns.len() - 1 {
                if cur != a {
                    adj[a].remove(&b);
                    adj[b].remove(&a);
                    adj[cur].insert(b);
                    adj[b].insert(cur);
                }
                break;
            }
            let x = adj.len();
            adj.push(BTreeSet::new());
            alive.push(true);
            adj[a].remove(&b);
            adj[b].remove(&a);
            adj[cur].insert(x);
            adj[x].insert(cur);
            adj[x].insert(b);
            adj[b].insert(x);
            cur = x;
        }
    }
    for a in 0..adj.len() {
        if alive[a] && adj[a].len() == 2 && !leaf_map.contains_key(&a) {
            let ns: Vec<usize> = adj[a].iter().copied().collect();
            let (x, y) = (ns[0], ns[1]);
            adj[x].remove(&a);
            adj[y].remove(&a);
            adj[x].insert(y);
            adj[y].insert(x);
            adj[a].clear();
            alive[a] = false;
        }
    }
    let mut index = vec![usize::MAX; adj.len()];
    let mut next = 0;
    for a in 0..adj.len() {
        if alive[a] {
            index[a] = next;
            next += 1;
        }
    }
    let mut edges = Vec::new();
    for a in 0..adj.len() {
        for &b in &adj[a] {
            if alive[a] && alive[b] && a < b {
                edges.push((index[a], index[b]));
            }
        }
    }
    let leaf_map = std::mem::take(&mut leaf_map)
        .into_iter()
        .map(|(l, e)| (index[l], e))
        .collect();
    BranchDecomposition {
        nodes: next,
        edges,
        leaf_map,
        middle_sets: None,
    }
}

/// Branchwidth by dynamic programming over edge subsets. Only for graphs with
/// at most 16 edges; callers should stay far below that.
pub fn brute_force_branchwidth(g: &Graph) -> usize {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let m = edges.len();
    assert!(m <= 16, "brute-force branchwidth is limited to 16 edges");
    if m <= 1 {
        return 0;
    }
    let full: u32 = (1u32 << m) - 1;
    let touch = |set: u32| -> u64 {
        let mut t = 0u64;
        for (i, &(u, v)) in edges.iter().enumerate() {
            if set >> i & 1 == 1 {
                t |= 1 << u | 1 << v;
            }
        }
        t
    };
    let boundary = |set: u32| (touch(set) & touch(full & !set)).count_ones() as usize;
    // best[S]: least width of a subtree with leaf set S, including the edge above it
    let mut best = vec![usize::MAX; 1 << m];
    let mut sets: Vec<u32> = (1..=full).collect();
    sets.sort_by_key(|s| s.count_ones());
    for &s in &sets {
        let b = boundary(s);
        if s.count_ones() == 1 {
            best[s as usize] = b;
            continue;
        }
        let mut inner = usize::MAX;
        // proper nonempty submasks, each split counted once
        let low = s & s.wrapping_neg();
        let mut a = (s - 1) & s;
        while a > 0 {
            if a & low != 0 {
                let c = s & !a;
                inner = inner.min(best[a as usize].max(best[c as usize]));
            }
            a = (a - 1) & s;
        }
        best[s as usize] = b.max(inner);
    }
    let mut bw = usize::MAX;
    let low = 1u32;
    let mut a = (full - 1) & full;
    while a > 0 {
        if a & low != 0 {
            let c = full & !a;
            bw = bw.min(best[a as usize].max(best[c as usize]));
        }
        a = (a - 1) & full;
    }
    bw
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn star_middle_sets_are_the_centre() {
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let bd = BranchDecomposition::caterpillar(&g.edges().collect::<Vec<_>>());
        let r = bd.validate(&g);
        assert!(r.is_ok(), "{:?}", r.violations);
        assert!(r.middle_sets.iter().all(|m| m == &vec![0]));
        assert_eq!(r.width, 1);
    }

    #[test]
    fn single_edge_is_degenerate() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let bd = BranchDecomposition::caterpillar(&[(0, 1)]);
        let r = bd.validate(&g);
        assert!(r.is_ok());
        assert_eq!(r.width, 0);
    }

    #[test]
    fn c4_caterpillar_has_width_two() {
        let g = cycle(4);
        let bd = BranchDecomposition::caterpillar(&[(0, 1), (1, 2), (2, 3), (0, 3)]);
        let r = bd.validate(&g);
        assert!(r.is_ok());
        assert_eq!(r.width, 2);
        // the spine edge splits {01, 12} from {23, 30}
        let spine = r.middle_sets.last().unwrap();
        assert_eq!(spine, &vec![0, 2]);
    }

    #[test]
    fn violations_are_reported() {
        let g = cycle(4);
        let mut bd = BranchDecomposition::caterpillar(&[(0, 1), (1, 2), (2, 3), (0, 3)]);
        bd.leaf_map.insert(3, (1, 3));
        let r = bd.validate(&g);
        assert!(r.violations.contains(&BdViolation::UnknownEdge(1, 3)));
        assert!(r.violations.contains(&BdViolation::MissingEdge(0, 3)));

        let mut bd = BranchDecomposition::caterpillar(&[(0, 1), (1, 2), (2, 3), (0, 3)]);
        bd.middle_sets = Some(vec![vec![]; 5]);
        let r = bd.validate(&g);
        assert!(matches!(r.violations[0], BdViolation::MiddleSetMismatch { .. }));

        // a path of three nodes has a degree-2 internal node
        let bd = BranchDecomposition {
            nodes: 3,
            edges: vec![(0, 1), (1, 2)],
            leaf_map: [(0, (0, 1)), (2, (1, 2))].into_iter().collect(),
            middle_sets: None,
        };
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let r = bd.validate(&g);
        assert!(r.violations.contains(&BdViolation::NotTernary { node: 1, degree: 2 }));
    }

    #[test]
    fn restrict_shrinks_middle_sets() {
        let g = cycle(6);
        let order: Vec<_> = g.edges().collect();
        let bd = BranchDecomposition::caterpillar(&order);
        let keep: BTreeSet<_> = order.iter().copied().filter(|&e| e != (0, 5)).collect();
        let sub = bd.restrict(&keep);
        let path = Graph::from_edges(6, keep.iter().copied()).unwrap();
        let r = sub.validate(&path);
        assert!(r.is_ok(), "{:?}", r.violations);
        assert!(r.width <= bd.validate(&g).width);
    }

    #[test]
    fn brute_force_small_cases() {
        assert_eq!(brute_force_branchwidth(&Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap()), 1);
        assert_eq!(brute_force_branchwidth(&cycle(5)), 2);
        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(brute_force_branchwidth(&k4), 3);
        let p4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(brute_force_branchwidth(&p4), 2);
    }

    #[test]
    fn from_tree_decomposition_is_valid() {
        for seed in 0..10 {
            let (g, td) = crate::generators::partial_ktree(25, 3, 0.8, seed);
            let bd = BranchDecomposition::from_tree_decomposition(&g, &td);
            let r = bd.validate(&g);
            assert!(r.is_ok(), "{:?}", r.violations);
            assert!(r.width <= 4);
        }
    }

    #[test]
    fn middle_sets_ignore_the_root() {
        let g = crate::generators::grid(3, 3);
        let bd = BranchDecomposition::caterpillar(&g.edges().collect::<Vec<_>>());
        let base = bd.validate(&g).middle_sets;
        // renumber nodes so the traversal starts elsewhere
        let n = bd.nodes;
        let perm = |x: usize| (x + 5) % n;
        let moved = BranchDecomposition {
            nodes: n,
            edges: bd.edges.iter().map(|&(a, b)| (perm(a), perm(b))).collect(),
            leaf_map: bd.leaf_map.iter().map(|(&l, &e)| (perm(l), e)).collect(),
            middle_sets: None,
        };
        assert_eq!(moved.validate(&g).middle_sets, base);
    }
}
