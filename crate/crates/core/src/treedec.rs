//! Tree decompositions and their validation.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;

/// An unrooted tree decomposition; bag `i` is node `i` of the tree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TdViolation {
    NotATree(String),
    VertexOutOfRange { bag: usize, vertex: usize },
    UncoveredVertex(usize),
    UncoveredEdge(usize, usize),
    /// The bags containing this vertex do not induce a connected subtree.
    DisconnectedOccurrence(usize),
}

impl fmt::Display for TdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TdViolation::NotATree(m) => write!(f, "decomposition tree is not a tree: {m}"),
            TdViolation::VertexOutOfRange { bag, vertex } => {
                write!(f, "bag {bag} mentions vertex {vertex} outside the graph")
            }
            TdViolation::UncoveredVertex(v) => write!(f, "vertex {v} is in no bag"),
            TdViolation::UncoveredEdge(u, v) => write!(f, "edge {{{u}, {v}}} is in no bag"),
            TdViolation::DisconnectedOccurrence(v) => {
                write!(f, "bags containing vertex {v} are not connected")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TdReport {
    /// Largest bag size minus one (0 for an empty decomposition).
    pub width: usize,
    pub violations: Vec<TdViolation>,
}

impl TdReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl TreeDecomposition {
    /// The decomposition with one bag holding every vertex.
    pub fn trivial(n: usize) -> Self {
        TreeDecomposition {
            bags: vec![(0..n).collect()],
            edges: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    pub(crate) fn tree_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            if a < adj.len() && b < adj.len() {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        adj
    }

    fn tree_problem(&self) -> Option<String> {
        let k = self.bags.len();
        if k == 0 {
            return (!self.edges.is_empty()).then(|| "edges without bags".to_string());
        }
        if let Some(&(a, b)) = self.edges.iter().find(|&&(a, b)| a >= k || b >= k) {
            return Some(format!("edge ({a}, {b}) references a missing bag"));
        }
        if self.edges.len() != k - 1 {
            return Some(format!("{} bags but {} edges", k, self.edges.len()));
        }
        let adj = self.tree_adjacency();
        let mut seen = vec![false; k];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut count = 1;
        while let Some(a) = queue.pop_front() {
            for &b in &adj[a] {
                if !seen[b] {
                    seen[b] = true;
                    count += 1;
                    queue.push_back(b);
                }
            }
        }
        (count != k).then(|| "tree is disconnected".to_string())
    }

    /// Checks vertex coverage, edge coverage and connectivity of every
    /// vertex's occurrence subtree.
    pub fn validate(&self, g: &Graph) -> TdReport {
        let mut violations = Vec::new();
        if let Some(m) = self.tree_problem() {
            violations.push(TdViolation::NotATree(m));
        }
        let mut occurrences = vec![Vec::new(); g.n()];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= g.n() {
                    violations.push(TdViolation::VertexOutOfRange { bag: i, vertex: v });
                } else {
                    occurrences[v].push(i);
                }
            }
        }
        for (v, occ) in occurrences.iter().enumerate() {
            if occ.is_empty() {
                violations.push(TdViolation::UncoveredVertex(v));
            }
        }
        let mut sorted_bags: Vec<Vec<usize>> = self.bags.clone();
        for b in &mut sorted_bags {
            b.sort_unstable();
        }
        for (u, v) in g.edges() {
            let covered = occurrences[u]
                .iter()
                .any(|&i| sorted_bags[i].binary_search(&v).is_ok());
            if !covered {
                violations.push(TdViolation::UncoveredEdge(u, v));
            }
        }
        if violations.iter().all(|x| !matches!(x, TdViolation::NotATree(_))) {
            let adj = self.tree_adjacency();
            let mut mark = vec![usize::MAX; self.bags.len()];
            for (v, occ) in occurrences.iter().enumerate() {
                if occ.len() <= 1 {
                    continue;
                }
                for &i in occ {
                    mark[i] = v;
                }
                let mut reached = 1;
                let mut stack = vec![occ[0]];
                let mut visited = vec![occ[0]];
                mark[occ[0]] = usize::MAX - 1;
                while let Some(a) = stack.pop() {
                    for &b in &adj[a] {
                        if mark[b] == v {
                            mark[b] = usize::MAX - 1;
                            visited.push(b);
                            reached += 1;
                            stack.push(b);
                        }
                    }
                }
                if reached != occ.len() {
                    violations.push(TdViolation::DisconnectedOccurrence(v));
                }
                for &i in occ.iter().chain(&visited) {
                    mark[i] = usize::MAX;
                }
            }
        }
        TdReport {
            width: self.width(),
            violations,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn trivial_decomposition_is_valid() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let r = TreeDecomposition::trivial(4).validate(&g);
        assert!(r.is_ok());
        assert_eq!(r.width, 3);
    }

    #[test]
    fn path_decomposition_of_p4() {
        let td = TreeDecomposition {
            bags: vec![vec![0, 1], vec![1, 2], vec![2, 3]],
            edges: vec![(0, 1), (1, 2)],
        };
        let r = td.validate(&path(4));
        assert!(r.is_ok(), "{:?}", r.violations);
        assert_eq!(r.width, 1);
    }

    #[test]
    fn missing_edge_is_named() {
        let td = TreeDecomposition {
            bags: vec![vec![0, 1], vec![2, 3]],
            edges: vec![(0, 1)],
        };
        let r = td.validate(&path(4));
        assert_eq!(r.violations, vec![TdViolation::UncoveredEdge(1, 2)]);
    }

    #[test]
    fn disconnected_occurrence_is_named() {
        let td = TreeDecomposition {
            bags: vec![vec![0, 1], vec![1, 2], vec![0, 2]],
            edges: vec![(0, 1), (1, 2)],
        };
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let r = td.validate(&g);
        assert_eq!(r.violations, vec![TdViolation::DisconnectedOccurrence(0)]);
    }

    #[test]
    fn uncovered_vertex_and_bad_tree() {
        let td = TreeDecomposition {
            bags: vec![vec![0], vec![1]],
            edges: vec![],
        };
        let r = td.validate(&Graph::new(3));
        assert!(matches!(r.violations[0], TdViolation::NotATree(_)));
        assert!(r.violations.contains(&TdViolation::UncoveredVertex(2)));
    }
}
