//! Contraction sequences from tree decompositions.
//!
//! A decomposition is first turned into an elimination ordering; its
//! elimination forest, with bag `f(u) = {u} ∪ f*(u)`, is a clean rooted
//! decomposition. The constructor then walks that forest bottom-up, keeping
//! the contracted part of every finished subtree as a small block of vertices
//! whose red edges never leave the block.

use std::collections::{BTreeSet, VecDeque};

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sequence::{ContractionSequence, Contractor};
use crate::treedec::TreeDecomposition;
use crate::trigraph::VertexId;

/// `3 · 2^(w−1)`, and 0 for `w = 0`.
pub fn tw_bound(w: usize) -> usize {
    if w == 0 {
        0
    } else {
        3usize << (w - 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Heuristic {
    MinDegree,
    MinFill,
}

/// A rooted forest on the vertices of `G` with bags `f(u)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CleanTreeDecomposition {
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    /// `f*(u)`, sorted.
    pub upper: Vec<Vec<usize>>,
    pub roots: Vec<usize>,
}

impl CleanTreeDecomposition {
    pub fn n(&self) -> usize {
        self.parent.len()
    }

    /// `max |f(u)| − 1`.
    pub fn width(&self) -> usize {
        self.upper.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn bag(&self, u: usize) -> Vec<usize> {
        let mut b = self.upper[u].clone();
        b.push(u);
        b.sort_unstable();
        b
    }

    /// Nodes in post-order (children before parents), children visited in
    /// the stored order.
    pub fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n());
        let mut stack: Vec<(usize, usize)> = self.roots.iter().rev().map(|&r| (r, 0)).collect();
        while let Some((v, i)) = stack.pop() {
            if i < self.children[v].len() {
                stack.push((v, i + 1));
                stack.push((self.children[v][i], 0));
            } else {
                out.push(v);
            }
        }
        out
    }

    /// As an ordinary tree decomposition; roots of different trees are
    /// chained so the result is a single tree.
    pub fn to_tree_decomposition(&self) -> TreeDecomposition {
        let bags = (0..self.n()).map(|u| self.bag(u)).collect();
        let mut edges: Vec<(usize, usize)> = (0..self.n())
            .filter_map(|u| self.parent[u].map(|p| (p, u)))
            .collect();
        edges.extend(self.roots.windows(2).map(|w| (w[0], w[1])));
        TreeDecomposition { bags, edges }
    }

    /// Checks normality, `u ∈ f(u) ⊆ T≥(u)`, the clean equation
    /// `f*(u) = N(T≤(u)) ∩ T>(u)`, and `p(u) ∈ f(u)`.
    pub fn check(&self, g: &Graph) -> Result<()> {
        let n = self.n();
        let bad = |msg: String| Err(Error::InvalidTreeDecomposition(msg));
        if g.n() != n || self.children.len() != n || self.upper.len() != n {
            return bad(format!("decomposition has {n} nodes, graph has {}", g.n()));
        }
        let mut tin = vec![usize::MAX; n];
        let mut tout = vec![0; n];
        let mut clock = 0;
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for &r in &self.roots {
            if self.parent[r].is_some() {
                return bad(format!("root {r} has a parent"));
            }
            stack.push((r, 0));
            tin[r] = clock;
            clock += 1;
            while let Some(&mut (v, ref mut i)) = stack.last_mut() {
                if *i < self.children[v].len() {
                    let c = self.children[v][*i];
                    *i += 1;
                    if self.parent[c] != Some(v) || tin[c] != usize::MAX {
                        return bad(format!("child list of {v} is inconsistent at {c}"));
                    }
                    tin[c] = clock;
                    clock += 1;
                    stack.push((c, 0));
                } else {
                    tout[v] = clock;
                    stack.pop();
                }
            }
        }
        if clock != n {
            return bad("the forest does not span every vertex".into());
        }
        let below = |a: usize, b: usize| tin[a] <= tin[b] && tout[b] <= tout[a];
        for (u, v) in g.edges() {
            if !below(u, v) && !below(v, u) {
                return bad(format!("edge {{{u}, {v}}} joins incomparable nodes"));
            }
        }
        // vertices by preorder index, so each subtree is a contiguous range
        let mut by_tin = vec![0; n];
        for v in 0..n {
            by_tin[tin[v]] = v;
        }
        for u in 0..n {
            let mut expect = BTreeSet::new();
            for &x in &by_tin[tin[u]..tout[u]] {
                for &y in g.neighbours(x) {
                    if !below(u, y) {
                        if !below(y, u) {
                            return bad(format!("neighbour {y} of subtree {u} is not an ancestor"));
                        }
                        expect.insert(y);
                    }
                }
            }
            let got: BTreeSet<usize> = self.upper[u].iter().copied().collect();
            if got != expect {
                return bad(format!("f*({u}) is not the outside neighbourhood of its subtree"));
            }
            if let Some(p) = self.parent[u] {
                if !got.contains(&p) {
                    return bad(format!("parent {p} of {u} is missing from f({u})"));
                }
            }
        }
        Ok(())
    }
}

/// Elimination forest of an ordering: the parent of `v` is its earliest
/// later-eliminated filled neighbour.
pub fn from_elimination_order(g: &Graph, order: &[usize]) -> Result<CleanTreeDecomposition> {
    let n = g.n();
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return Err(Error::InvalidArgument(format!("ordering is not a permutation at {v}")));
        }
        pos[v] = i;
    }
    if order.len() != n {
        return Err(Error::InvalidArgument("ordering is not a permutation".into()));
    }
    let mut parent = vec![None; n];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut upper: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &v in order {
        let mut set: FxHashSet<usize> = g.neighbours(v).iter().copied().filter(|&x| pos[x] > pos[v]).collect();
        for &c in &children[v] {
            set.extend(upper[c].iter().copied().filter(|&x| x != v));
        }
        let mut up: Vec<usize> = set.into_iter().collect();
        up.sort_unstable();
        if let Some(&p) = up.iter().min_by_key(|&&x| pos[x]) {
            parent[v] = Some(p);
            children[p].push(v);
        }
        upper[v] = up;
    }
    let roots = order.iter().copied().filter(|&v| parent[v].is_none()).collect();
    Ok(CleanTreeDecomposition {
        parent,
        children,
        upper,
        roots,
    })
}

/// An ordering whose elimination never leaves the bags of `td`: vertices
/// whose topmost bag is deepest go first.
pub fn order_from_tree_decomposition(g: &Graph, td: &TreeDecomposition) -> Result<Vec<usize>> {
    let report = td.validate(g);
    if !report.is_ok() {
        let msg: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
        return Err(Error::InvalidTreeDecomposition(msg.join("; ")));
    }
    if g.n() == 0 {
        return Ok(Vec::new());
    }
    let adj = td.tree_adjacency();
    let mut depth = vec![usize::MAX; td.bags.len()];
    depth[0] = 0;
    let mut queue = VecDeque::from([0]);
    while let Some(a) = queue.pop_front() {
        for &b in &adj[a] {
            if depth[b] == usize::MAX {
                depth[b] = depth[a] + 1;
                queue.push_back(b);
            }
        }
    }
    let mut top = vec![usize::MAX; g.n()];
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            top[v] = top[v].min(depth[i]);
        }
    }
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(top[v]), v));
    Ok(order)
}

/// Greedy elimination ordering.
pub fn heuristic_order(g: &Graph, h: Heuristic) -> Vec<usize> {
    let n = g.n();
    let mut adj: Vec<FxHashSet<usize>> = (0..n).map(|v| g.neighbours(v).iter().copied().collect()).collect();
    let fill = |adj: &[FxHashSet<usize>], v: usize| -> usize {
        let ns: Vec<usize> = adj[v].iter().copied().collect();
        let mut missing = 0;
        for (i, &a) in ns.iter().enumerate() {
            for &b in &ns[i + 1..] {
                if !adj[a].contains(&b) {
                    missing += 1;
                }
            }
        }
        missing
    };
    let score = |adj: &[FxHashSet<usize>], v: usize| match h {
        Heuristic::MinDegree => adj[v].len(),
        Heuristic::MinFill => fill(adj, v),
    };
    let mut entry: Vec<(usize, usize, usize)> = (0..n).map(|v| (score(&adj, v), adj[v].len(), v)).collect();
    let mut queue: BTreeSet<(usize, usize, usize)> = entry.iter().copied().collect();
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while let Some((_, _, v)) = queue.pop_first() {
        done[v] = true;
        order.push(v);
        let ns: Vec<usize> = adj[v].iter().copied().collect();
        for &a in &ns {
            adj[a].remove(&v);
        }
        for (i, &a) in ns.iter().enumerate() {
            for &b in &ns[i + 1..] {
                if adj[a].insert(b) {
                    adj[b].insert(a);
                }
            }
        }
        adj[v].clear();
        let mut affected: Vec<usize> = ns.clone();
        if h == Heuristic::MinFill {
            for &a in &ns {
                affected.extend(adj[a].iter().copied());
            }
            affected.sort_unstable();
            affected.dedup();
        }
        for a in affected {
            if done[a] {
                continue;
            }
            queue.remove(&entry[a]);
            entry[a] = (score(&adj, a), adj[a].len(), a);
            queue.insert(entry[a]);
        }
    }
    order
}

/// Clean decomposition of a connected graph derived from `td`; its width is
/// at most the width of `td`.
pub fn clean_decomposition(g: &Graph, td: &TreeDecomposition) -> Result<CleanTreeDecomposition> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let order = order_from_tree_decomposition(g, td)?;
    let ctd = from_elimination_order(g, &order)?;
    ctd.check(g)?;
    debug_assert!(ctd.width() <= td.width());
    Ok(ctd)
}

/// Per-node bookkeeping reported by [`tw_contraction_sequence`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TwStats {
    /// Largest block kept for a finished subtree.
    pub max_block: usize,
    /// Largest red degree of `v` before it is absorbed.
    pub max_v_red: usize,
}

/// Contraction sequence of width at most `3 · 2^(w−1)` for a clean forest
/// decomposition of width `w`. Components are finished separately and their
/// final vertices merged at the end.
pub fn tw_contraction_sequence(g: &Graph, ctd: &CleanTreeDecomposition) -> Result<(ContractionSequence, TwStats)> {
    ctd.check(g)?;
    let n = g.n();
    let mut ordered = ctd.clone();
    let mut size = vec![1usize; n];
    for &v in &ctd.post_order() {
        if let Some(p) = ctd.parent[v] {
            size[p] += size[v];
        }
    }
    for ch in &mut ordered.children {
        ch.sort_by_key(|&c| (size[c], c));
    }
    let mut c = Contractor::new(g);
    let mut stats = TwStats::default();
    let mut block: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    let mut finals = Vec::new();
    for v in ordered.post_order() {
        let ystar = &ordered.upper[v];
        let mut b: Vec<VertexId> = Vec::new();
        for &u in &ordered.children[v] {
            let a = std::mem::take(&mut block[u]);
            let tilde = contract_classes(&mut c, &a, ystar)?;
            let mut joint = b;
            joint.extend(tilde);
            b = contract_classes(&mut c, &joint, ystar)?;
            stats.max_v_red = stats.max_v_red.max(c.trigraph().red_degree(v));
        }
        // absorb v into the block vertex with the same trace, if any
        let mut trace_v = c.trigraph().neighbourhood_classes(&[v], ystar)?.classes[0].trace.clone();
        trace_v.red.clear();
        let cls = c.trigraph().neighbourhood_classes(&b, ystar)?;
        let twin = cls
            .classes
            .iter()
            .find(|k| k.trace.red.is_empty() && k.trace.black == trace_v.black)
            .map(|k| k.members[0]);
        let mut done: Vec<VertexId> = b.into_iter().filter(|&x| Some(x) != twin).collect();
        done.push(match twin {
            Some(t) => c.contract(t, v)?,
            None => v,
        });
        done.sort_unstable();
        check_block(&c, v, &done, ystar.len())?;
        stats.max_block = stats.max_block.max(done.len());
        if ordered.parent[v].is_none() {
            finals.extend(done);
        } else {
            block[v] = done;
        }
    }
    c.fold(&finals)?;
    let (seq, _) = c.finish();
    Ok((seq, stats))
}

/// Folds every class of `xs` by trace on `ys` into its smallest member.
fn contract_classes(c: &mut Contractor, xs: &[VertexId], ys: &[VertexId]) -> Result<Vec<VertexId>> {
    let cls = c.trigraph().neighbourhood_classes(xs, ys)?;
    let mut out = Vec::with_capacity(cls.len());
    for class in cls.classes {
        if let Some(w) = c.fold(&class.members)? {
            out.push(w);
        }
    }
    Ok(out)
}

fn check_block(c: &Contractor, v: usize, block: &[VertexId], ystar: usize) -> Result<()> {
    let t = c.trigraph();
    if ystar < usize::BITS as usize && block.len() > 1usize << ystar {
        return Err(Error::internal(
            format!("node {v}"),
            format!("block of size {} exceeds 2^{ystar}", block.len()),
        ));
    }
    for &x in block {
        for r in t.red_neighbours(x) {
            if block.binary_search(&r).is_err() {
                return Err(Error::internal(
                    format!("node {v}"),
                    format!("red edge {x}-{r} leaves the block"),
                ));
            }
        }
    }
    Ok(())
}

/// Convenience: heuristic or supplied decomposition, then the constructor.
pub fn tw_sequence(g: &Graph, td: Option<&TreeDecomposition>) -> Result<(ContractionSequence, usize)> {
    let order = match td {
        Some(td) => order_from_tree_decomposition(g, td)?,
        None => heuristic_order(g, Heuristic::MinFill),
    };
    let ctd = from_elimination_order(g, &order)?;
    let (seq, _) = tw_contraction_sequence(g, &ctd)?;
    Ok((seq, ctd.width()))
}
