//! The universal bipartite graph `B(n)`: one side is `[n]`, the other all
//! subsets of `[n]`, with `i` adjacent to every subset containing it.
//!
//! Vertex `i < n` is the element `i`; vertex `n + mask` is the subset `mask`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sequence::{ContractionSequence, Contractor};
use crate::trigraph::{Trigraph, VertexId};

pub const MAX_N: usize = 20;

pub fn subset_vertex(n: usize, mask: usize) -> VertexId {
    n + mask
}

pub fn build(n: usize) -> Result<Graph> {
    if n == 0 || n > MAX_N {
        return Err(Error::InvalidArgument(format!("n must lie in 1..={MAX_N}, got {n}")));
    }
    let mut adj = vec![Vec::new(); n + (1 << n)];
    for mask in 0usize..1 << n {
        for i in 0..n {
            if mask >> i & 1 == 1 {
                adj[i].push(n + mask);
                adj[n + mask].push(i);
            }
        }
    }
    Graph::from_adjacency(adj)
}

/// `max(1, ⌊log₂ n − 1⌋)`.
pub fn default_k(n: usize) -> usize {
    let log = usize::BITS as usize - 1 - n.max(1).leading_zeros() as usize;
    log.saturating_sub(1).max(1).min(n.max(1))
}

/// `max(2^k, n − k, k + 1)`.
pub fn ub_bound(n: usize, k: usize) -> usize {
    (1usize << k).max(n.saturating_sub(k)).max(k + 1)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BipartiteReport {
    pub n: usize,
    pub k: usize,
    pub bound: usize,
    pub width: usize,
    /// Largest red degree of an element vertex outside `A` after the first phase.
    pub phase1_red: usize,
    pub violations: Vec<String>,
}

/// Contraction sequence for `B(n)` with `A = {0, .., k-1}`: subsets are merged
/// by their trace on `A`, then the elements outside `A`, then the subsets, and
/// finally everything left.
pub fn ub_sequence(n: usize, k: Option<usize>) -> Result<(ContractionSequence, BipartiteReport)> {
    let g = build(n)?;
    let k = k.unwrap_or_else(|| default_k(n));
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("k must lie in 1..={n}, got {k}")));
    }
    let mut c = Contractor::new(&g);
    let mut report = BipartiteReport {
        n,
        k,
        bound: ub_bound(n, k),
        ..Default::default()
    };
    // trace on A is the low k bits; members in increasing mask order
    let low = (1usize << k) - 1;
    let mut classes = Vec::with_capacity(1 << k);
    for trace in 0..=low {
        let members: Vec<VertexId> = (0usize..1 << (n - k)).map(|hi| subset_vertex(n, hi << k | trace)).collect();
        classes.push(c.fold(&members)?.expect("classes are nonempty"));
    }
    for a in 0..k {
        if c.trigraph().red_degree(a) != 0 {
            report.violations.push(format!("element {a} of A has red degree after the first phase"));
        }
    }
    for x in k..n {
        let d = c.trigraph().red_degree(x);
        report.phase1_red = report.phase1_red.max(d);
        let expected = if n - k >= 1 { classes.len() } else { 0 };
        if d != expected {
            report
                .violations
                .push(format!("element {x} has red degree {d}, expected {expected}"));
        }
    }
    let rest: Vec<VertexId> = (k..n).collect();
    let x = c.fold(&rest)?;
    let y = c.fold(&classes)?;
    let mut last: Vec<VertexId> = (0..k).collect();
    last.extend(x);
    last.extend(y);
    c.fold(&last)?;
    let (seq, width) = c.finish();
    report.width = width;
    if width > report.bound {
        report.violations.push(format!("width {width} exceeds {}", report.bound));
    }
    Ok((seq, report))
}

/// Largest `n − k + 1` over `k ∈ [n]` with `2^(n−1) − n·2^(n−k) − 1 > n − k`,
/// or 0 if no `k` qualifies.
pub fn lower_bound(n: usize) -> usize {
    let n_i = n as i128;
    (1..=n)
        .filter(|&k| {
            let lhs = (1i128 << (n - 1)) - n_i * (1i128 << (n - k)) - 1;
            lhs > (n - k) as i128
        })
        .map(|k| n - k + 1)
        .max()
        .unwrap_or(0)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub n: usize,
    /// Steps replayed before the first contraction touching an element vertex.
    pub steps_checked: usize,
    pub violations: Vec<String>,
}

/// Replays `seq` on `B(n)` and checks that, until an element vertex is first
/// contracted, every merged subset vertex of red degree `d` holds at most
/// `2^d` subsets.
pub fn audit_bipartite(n: usize, seq: &ContractionSequence) -> Result<AuditReport> {
    let g = build(n)?;
    if seq.n != g.n() {
        return Err(Error::InvalidArgument(format!(
            "sequence is for {} vertices, B({n}) has {}",
            seq.n,
            g.n()
        )));
    }
    let mut t = Trigraph::from_graph(&g);
    let mut report = AuditReport {
        n,
        ..Default::default()
    };
    for (i, s) in seq.steps.iter().enumerate() {
        if s.w != t.next_id() {
            return Err(Error::InvalidArgument(format!("step {i} uses fresh id {}, expected {}", s.w, t.next_id())));
        }
        if t.contains(s.u) && t.contains(s.v) && (t.min_origin(s.u) < n || t.min_origin(s.v) < n) {
            break;
        }
        let c = t.contract(s.u, s.v)?;
        report.steps_checked += 1;
        // only the merged vertex and its neighbours changed
        let mut check = vec![c.merged];
        check.extend(t.red_neighbours(c.merged));
        for v in check {
            if t.min_origin(v) < n {
                continue;
            }
            let d = t.red_degree(v);
            let size = t.origin(v).len();
            if d < usize::BITS as usize && size > 1 << d {
                report
                    .violations
                    .push(format!("step {i}: vertex {v} has red degree {d} but merges {size} subsets"));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::replay_graph;

    #[test]
    fn sizes() {
        let g = build(1).unwrap();
        assert_eq!((g.n(), g.m()), (3, 1));
        let g = build(2).unwrap();
        assert_eq!(g.n(), 6);
        assert_eq!(g.degree(0), 2);
        assert_eq!(g.degree(1), 2);
        let g = build(3).unwrap();
        assert_eq!((g.n(), g.m()), (11, 12));
        assert!(build(0).is_err());
        assert!(build(21).is_err());
    }

    #[test]
    fn default_k_values() {
        assert_eq!(default_k(1), 1);
        assert_eq!(default_k(4), 1);
        assert_eq!(default_k(8), 2);
        assert_eq!(default_k(16), 3);
        assert_eq!(default_k(20), 3);
    }

    #[test]
    fn ub_within_formula() {
        for n in 1..=8 {
            for k in 1..=n {
                let (seq, rep) = ub_sequence(n, Some(k)).unwrap();
                let r = replay_graph(&build(n).unwrap(), &seq).unwrap();
                assert!(r.is_complete());
                assert_eq!(r.width, rep.width);
                assert!(rep.width <= ub_bound(n, k), "n={n} k={k}: {}", rep.width);
                assert!(rep.violations.is_empty(), "{:?}", rep.violations);
            }
        }
        assert!(ub_sequence(4, Some(5)).is_err());
        assert!(ub_sequence(4, Some(0)).is_err());
    }

    #[test]
    fn lower_bound_direct() {
        assert_eq!(lower_bound(1), 0);
        assert_eq!(lower_bound(2), 0);
        // n = 8: k = 5 gives 128 - 64 - 1 = 63 > 3, k = 4 gives 128 - 128 - 1 < 4
        assert_eq!(lower_bound(8), 4);
    }

    #[test]
    fn audit_accepts_constructed_sequences() {
        for n in 2..=6 {
            let (seq, _) = ub_sequence(n, None).unwrap();
            let rep = audit_bipartite(n, &seq).unwrap();
            assert!(rep.violations.is_empty(), "{:?}", rep.violations);
            assert!(rep.steps_checked > 0);
        }
    }
}
