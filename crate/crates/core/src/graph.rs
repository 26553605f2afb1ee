//! Simple undirected graphs with dense vertex numbering `0..n`.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// A simple undirected graph. Neighbour lists are kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list. Loops are rejected, duplicate edges are
    /// silently merged (callers that care about duplicates check `m()`).
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            if u >= n {
                return Err(Error::UnknownVertex(u));
            }
            if v >= n {
                return Err(Error::UnknownVertex(v));
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from neighbour lists, which must be symmetric. Lists are
    /// sorted and deduplicated.
    pub fn from_adjacency(mut adj: Vec<Vec<usize>>) -> Result<Self> {
        let n = adj.len();
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            if let Some(&v) = list.last() {
                if v >= n {
                    return Err(Error::UnknownVertex(v));
                }
            }
            if list.binary_search(&u).is_ok() {
                return Err(Error::SelfLoop(u));
            }
        }
        let mut half = 0;
        for (u, list) in adj.iter().enumerate() {
            for &v in list {
                if adj[v].binary_search(&u).is_err() {
                    return Err(Error::InvalidArgument(format!("adjacency is not symmetric at ({u}, {v})")));
                }
                half += 1;
            }
        }
        Ok(Graph { adj, m: half / 2 })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    /// Inserts `{u, v}`; returns false if it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert!(u != v, "self-loop {u}");
        match self.adj[u].binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                self.m += 1;
                true
            }
        }
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        match self.adj[u].binary_search(&v) {
            Ok(pos) => {
                self.adj[u].remove(pos);
                let pos = self.adj[v].binary_search(&u).unwrap();
                self.adj[v].remove(pos);
                self.m -= 1;
                true
            }
            Err(_) => false,
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        d.sort_unstable();
        d
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = id;
                        members.push(v);
                        queue.push_back(v);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }

    /// Subgraph induced by `vertices`; vertex `i` of the result is `vertices[i]`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut g = Graph::new(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = index[w];
                if j != usize::MAX && i < j {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n();
        let mut g = self.clone();
        for _ in 0..other.n() {
            g.add_vertex();
        }
        for (u, v) in other.edges() {
            g.add_edge(u + off, v + off);
        }
        g
    }

    /// BFS distances from `root`; unreachable vertices get `usize::MAX`.
    pub fn bfs_distances(&self, root: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dedupes_and_rejects_loops() {
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (1, 2)]).unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(
            Graph::from_edges(2, [(1, 1)]).unwrap_err(),
            Error::SelfLoop(1)
        );
        assert!(Graph::from_edges(2, [(0, 2)]).is_err());
    }

    #[test]
    fn components_and_induced() {
        let g = Graph::from_edges(5, [(0, 1), (3, 4)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 1], vec![2], vec![3, 4]]);
        let h = g.induced(&[3, 4, 0]);
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }
}
