//! Deterministic instance families.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::treedec::TreeDecomposition;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "a cycle needs at least 3 vertices");
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
}

pub fn star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("valid star")
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("valid clique")
}

/// `rows × cols` grid, vertex `(r, c)` is `r * cols + c`.
pub fn grid(rows: usize, cols: usize) -> Graph {
    let id = |r: usize, c: usize| r * cols + c;
    let mut g = Graph::new(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                g.add_edge(id(r, c), id(r, c + 1));
            }
            if r + 1 < rows {
                g.add_edge(id(r, c), id(r + 1, c));
            }
        }
    }
    g
}

/// Erdős–Rényi `G(n, p)`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut r = rng(seed);
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if r.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// A random partial `k`-tree on `n ≥ k + 1` vertices with a tree
/// decomposition of width `k`. Every edge of the underlying `k`-tree is kept
/// with probability `keep`; vertex labels are shuffled.
pub fn partial_ktree(n: usize, k: usize, keep: f64, seed: u64) -> (Graph, TreeDecomposition) {
    assert!(n > k, "a k-tree needs at least k + 1 vertices");
    let mut r = rng(seed);
    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(&mut r);
    let mut g = Graph::new(n);
    let mut bags: Vec<Vec<usize>> = vec![(0..=k).collect()];
    let mut edges = Vec::new();
    let add = |g: &mut Graph, r: &mut ChaCha8Rng, a: usize, b: usize| {
        if r.gen_bool(keep) {
            g.add_edge(label[a], label[b]);
        }
    };
    for a in 0..=k {
        for b in a + 1..=k {
            add(&mut g, &mut r, a, b);
        }
    }
    for v in k + 1..n {
        // attach to a k-subset of a random existing bag
        let host = r.gen_range(0..bags.len());
        let mut clique = bags[host].clone();
        if clique.len() > k {
            let drop = r.gen_range(0..clique.len());
            clique.remove(drop);
        }
        for &u in &clique {
            add(&mut g, &mut r, u, v);
        }
        clique.push(v);
        bags.push(clique);
        edges.push((host, bags.len() - 1));
    }
    for bag in &mut bags {
        for x in bag.iter_mut() {
            *x = label[*x];
        }
        bag.sort_unstable();
    }
    (g, TreeDecomposition { bags, edges })
}

/// Complete bipartite graph, left side `0..a`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    Graph::from_edges(a + b, (0..a).flat_map(|u| (0..b).map(move |v| (u, a + v)))).expect("valid")
}

/// Uniformly random labelled tree on `n` vertices (random attachment).
pub fn random_tree(n: usize, seed: u64) -> Graph {
    let mut r = rng(seed);
    let mut g = Graph::new(n);
    for v in 1..n {
        let p = r.gen_range(0..v);
        g.add_edge(p, v);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ktree_decomposition_is_valid() {
        for seed in 0..20 {
            for k in 1..=4 {
                let (g, td) = partial_ktree(30, k, 0.7, seed);
                let rep = td.validate(&g);
                assert!(rep.is_ok(), "{:?}", rep.violations);
                assert_eq!(rep.width, k);
            }
        }
        let (g, _) = partial_ktree(10, 2, 1.0, 3);
        assert_eq!(g.m(), 3 + 2 * 7);
    }

    #[test]
    fn deterministic() {
        assert_eq!(gnp(20, 0.3, 7), gnp(20, 0.3, 7));
        assert_eq!(partial_ktree(20, 3, 0.5, 1), partial_ktree(20, 3, 0.5, 1));
    }

    #[test]
    fn grid_counts() {
        let g = grid(3, 4);
        assert_eq!(g.n(), 12);
        assert_eq!(g.m(), 3 * 3 + 2 * 4);
    }
}
