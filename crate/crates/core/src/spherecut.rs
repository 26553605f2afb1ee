//! Neighbourhood classes across a noose, sphere-cut decompositions, and the
//! contraction sequence built bottom-up over a rooted branch decomposition.
//!
//! At a tree edge `e` with child edges `e1`, `e2`, the vertices strictly
//! below `e1` and `e2` have already been contracted into blocks `A1`, `A2`
//! classified by their neighbourhood in the respective middle sets. With
//! `I = mid(e1) ∩ mid(e2) ∖ mid(e)`, each `Ai` is first coarsened by trace on
//! `mid(ei) ∖ I`, then `I ∪ Ã1 ∪ Ã2` is coarsened by trace on `mid(e)`.

use std::collections::{BTreeMap, BTreeSet};

use crate::branchdec::BranchDecomposition;
use crate::embed::RotationSystem;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sequence::{ContractionSequence, Contractor};
use crate::trigraph::VertexId;

/// `4k − 4`.
pub fn h(k: usize) -> isize {
    4 * k as isize - 4
}

/// Largest possible number of neighbourhood classes across a noose through
/// `k` vertices. Matches [`h`] for `k ≥ 2`; for `k ≤ 1` the classes `∅` and
/// `{v}` are both realisable, which `h` does not allow for.
pub fn class_bound(k: usize) -> usize {
    if k <= 1 {
        1 << k
    } else {
        4 * k - 4
    }
}

/// `max(4k, ⌈9k/2⌉ − 3)`.
pub fn bw_bound(k: usize) -> usize {
    (4 * k).max((9 * k).div_ceil(2).saturating_sub(3))
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct NooseBoundCertificate {
    pub k: usize,
    pub class_count: usize,
    pub bound: usize,
}

/// Counts the distinct traces on `noose` of the vertices of `inside`, after
/// checking that `noose` separates `inside` from the remaining vertices.
pub fn verify_noose_bound(g: &Graph, noose: &[usize], inside: &[usize]) -> Result<NooseBoundCertificate> {
    let n = g.n();
    let mut role = vec![0u8; n]; // 0 outside, 1 noose, 2 inside
    for &v in noose {
        if v >= n || role[v] != 0 {
            return Err(Error::InvalidNoose(format!("noose vertex {v} is out of range or repeated")));
        }
        role[v] = 1;
    }
    for &v in inside {
        if v >= n || role[v] != 0 {
            return Err(Error::InvalidNoose(format!("inside vertex {v} is out of range or on the noose")));
        }
        role[v] = 2;
    }
    for (u, v) in g.edges() {
        if role[u] + role[v] == 2 && role[u] != 1 {
            return Err(Error::InvalidNoose(format!("edge {{{u}, {v}}} crosses the noose")));
        }
    }
    let mut traces: BTreeSet<Vec<usize>> = BTreeSet::new();
    for &x in inside {
        traces.insert(g.neighbours(x).iter().copied().filter(|&y| role[y] == 1).collect());
    }
    let k = noose.len();
    let cert = NooseBoundCertificate {
        k,
        class_count: traces.len(),
        bound: class_bound(k),
    };
    if cert.class_count > cert.bound {
        return Err(Error::NooseBoundViolated {
            k,
            count: cert.class_count,
            bound: cert.bound,
        });
    }
    Ok(cert)
}

/// The extremal configuration for `k ≥ 3` noose vertices `0..k` (in noose
/// order): one inside vertex for each of the neighbourhoods `∅`, `{i}`,
/// `{i, i+1}`, `{0, i}` for `2 ≤ i < k` and `{0, i, i+1}` for `1 ≤ i < k−1`.
/// Returns the graph, the noose order, the inside vertices and a planar
/// rotation system obtained from a straight-line drawing.
pub fn tight_example(k: usize) -> Result<(Graph, Vec<usize>, Vec<usize>, RotationSystem)> {
    if k < 3 {
        return Err(Error::InvalidArgument("the tight example needs k >= 3".into()));
    }
    let tau = std::f64::consts::TAU;
    let mut pts: Vec<(f64, f64)> = (0..k)
        .map(|i| {
            let t = tau * i as f64 / k as f64;
            (t.cos(), t.sin())
        })
        .collect();
    let mut g = Graph::new(k);
    let attach = |g: &mut Graph, pts: &mut Vec<(f64, f64)>, at: (f64, f64), nb: &[usize]| {
        let w = g.add_vertex();
        pts.push(at);
        for &x in nb {
            g.add_edge(w, x);
        }
        w
    };
    let lerp = |a: (f64, f64), b: (f64, f64), t: f64| (a.0 + (b.0 - a.0) * t, a.1 + (b.1 - a.1) * t);
    // pushes a point on segment p_i p_j towards the centre, by `d` times the segment length
    let inward = |p: (f64, f64), a: (f64, f64), b: (f64, f64), d: f64| {
        let len = ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt();
        let norm = (p.0 * p.0 + p.1 * p.1).sqrt().max(1e-12);
        (p.0 - p.0 / norm * d * len, p.1 - p.1 / norm * d * len)
    };
    let p = pts.clone();
    let empty = attach(&mut g, &mut pts, (0.0, 0.0), &[]);
    let mut inside = vec![empty];
    for i in 0..k {
        let j = (i + 1) % k;
        let at = inward(lerp(p[i], p[j], 0.02), p[i], p[j], 0.002);
        inside.push(attach(&mut g, &mut pts, at, &[i]));
    }
    for i in 0..k - 1 {
        let at = inward(lerp(p[i], p[i + 1], 0.5), p[i], p[i + 1], 0.01);
        inside.push(attach(&mut g, &mut pts, at, &[i, i + 1]));
    }
    for i in 2..k {
        inside.push(attach(&mut g, &mut pts, lerp(p[0], p[i], 0.5), &[0, i]));
    }
    for i in 1..k - 1 {
        let c = (
            (p[0].0 + p[i].0 + p[i + 1].0) / 3.0,
            (p[0].1 + p[i].1 + p[i + 1].1) / 3.0,
        );
        inside.push(attach(&mut g, &mut pts, c, &[0, i, i + 1]));
    }
    // the isolated witness sits at the centre; move it somewhere unused
    pts[empty] = lerp(p[0], p[1], 0.5);
    pts[empty] = (pts[empty].0 * 2.0, pts[empty].1 * 2.0);
    let rotation = (0..g.n())
        .map(|v| {
            let mut ns: Vec<usize> = g.neighbours(v).to_vec();
            let (x, y) = pts[v];
            ns.sort_by(|&a, &b| {
                let ta = (pts[a].1 - y).atan2(pts[a].0 - x);
                let tb = (pts[b].1 - y).atan2(pts[b].0 - x);
                ta.total_cmp(&tb)
            });
            ns
        })
        .collect();
    let rs = RotationSystem {
        rotation,
        outer: (0, g.neighbours(0)[0]),
    };
    rs.validate_for(&g)?;
    Ok((g, (0..k).collect(), inside, rs))
}

/// Extends a branch decomposition of the subgraph left after repeatedly
/// deleting degree-one vertices to one of `g`, hanging each pendant tree off
/// a tree edge whose middle set contains its attachment vertex.
pub fn extend_for_degree_one(g: &Graph, core_bd: &BranchDecomposition) -> Result<BranchDecomposition> {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut in_core = vec![true; n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| deg[v] == 1).collect();
    while let Some(v) = stack.pop() {
        if !in_core[v] || deg[v] != 1 {
            continue;
        }
        in_core[v] = false;
        for &w in g.neighbours(v) {
            if in_core[w] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    stack.push(w);
                }
            }
        }
    }
    for v in 0..n {
        if deg[v] == 0 {
            in_core[v] = false;
        }
    }
    let core_edges: Vec<(usize, usize)> = g.edges().filter(|&(u, v)| in_core[u] && in_core[v]).collect();
    if core_edges.is_empty() {
        return Err(Error::InvalidArgument("the graph has no part without degree-one vertices".into()));
    }
    let mut core = Graph::new(n);
    for &(u, v) in &core_edges {
        core.add_edge(u, v);
    }
    let report = core_bd.validate(&core);
    if !report.is_ok() {
        return Err(Error::InvalidBranchDecomposition(format!(
            "decomposition does not fit the core: {}",
            report.violations[0]
        )));
    }
    if core_edges.len() == g.m() {
        return Ok(core_bd.clone());
    }
    let mut bd = core_bd.clone();
    bd.middle_sets = None;
    let mut mids = report.middle_sets;
    for r in 0..n {
        if !in_core[r] {
            continue;
        }
        let kids: Vec<usize> = g.neighbours(r).iter().copied().filter(|&c| !in_core[c]).collect();
        if kids.is_empty() {
            continue;
        }
        let Some(ei) = mids.iter().position(|m| m.binary_search(&r).is_ok()) else {
            return Err(Error::InvalidBranchDecomposition(format!("no middle set contains {r}")));
        };
        for c in kids {
            let piece = pendant_piece(g, &in_core, &mut bd, c, r);
            let (a, b) = bd.edges[ei];
            let s = bd.nodes;
            bd.nodes += 1;
            bd.edges[ei] = (a, s);
            bd.edges.push((s, b));
            bd.edges.push((s, piece));
            mids.push(mids[ei].clone());
            mids.push(vec![r]);
        }
    }
    Ok(bd)
}

/// Builds the decomposition of the pendant subtree hanging from `p` through
/// `v`; returns the node to connect upwards.
fn pendant_piece(g: &Graph, in_core: &[bool], bd: &mut BranchDecomposition, v: usize, p: usize) -> usize {
    let new_node = |bd: &mut BranchDecomposition| {
        bd.nodes += 1;
        bd.nodes - 1
    };
    // explicit stack of (vertex, parent, partial node, remaining children)
    let leaf = new_node(bd);
    bd.leaf_map.insert(leaf, (v.min(p), v.max(p)));
    let kids = |x: usize, px: usize| -> Vec<usize> {
        g.neighbours(x).iter().copied().filter(|&c| c != px && !in_core[c]).collect()
    };
    let mut stack: Vec<(usize, usize, usize, Vec<usize>)> = vec![(v, p, leaf, kids(v, p))];
    let mut result = leaf;
    while let Some((x, px, cur, mut rest)) = stack.pop() {
        if let Some(c) = rest.pop() {
            stack.push((x, px, cur, rest));
            let l = new_node(bd);
            bd.leaf_map.insert(l, (x.min(c), x.max(c)));
            stack.push((c, x, l, kids(c, x)));
        } else if let Some(top) = stack.last_mut() {
            // join the finished piece for x with its parent's running node
            let j = new_node(bd);
            bd.edges.push((j, top.2));
            bd.edges.push((j, cur));
            top.2 = j;
        } else {
            result = cur;
        }
    }
    result
}

/// Step-by-step measurements and proof audits of [`bw_contraction_sequence`].
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct BwReport {
    pub k: usize,
    pub bound: usize,
    pub width: usize,
    /// Largest `|Ã1| + |Ã2|`.
    pub max_pair: usize,
    /// Largest `|Ã1| + |Ã2| + |I| − 2`.
    pub max_triple: isize,
    pub max_block: usize,
    /// Audits that failed; empty on a sphere-cut decomposition.
    pub violations: Vec<String>,
}

/// Contraction sequence for a connected graph from a branch decomposition of
/// width `k`. Graphs of branchwidth at most 1 are stars and get the direct
/// width-0 sequence.
pub fn bw_contraction_sequence(g: &Graph, bd: &BranchDecomposition) -> Result<(ContractionSequence, BwReport)> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let rep = bd.validate(g);
    if !rep.is_ok() {
        let msg: Vec<String> = rep.violations.iter().map(ToString::to_string).collect();
        return Err(Error::InvalidBranchDecomposition(msg.join("; ")));
    }
    let k = rep.width;
    if let Some(seq) = star_sequence(g) {
        let report = BwReport {
            k,
            bound: bw_bound(k),
            ..Default::default()
        };
        return Ok((seq, report));
    }
    if k < 2 {
        return Err(Error::internal("bw_contraction_sequence", "width below 2 on a non-star"));
    }
    let mids = rep.middle_sets;
    // root by subdividing tree edge 0; node `root` is virtual
    let adj = bd.adjacency();
    let (ra, rb) = bd.edges[0];
    let root = bd.nodes;
    let mut parent = vec![usize::MAX; bd.nodes];
    let mut mid_above: Vec<Vec<usize>> = vec![Vec::new(); bd.nodes];
    let mut edge_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (i, &(a, b)) in bd.edges.iter().enumerate() {
        edge_index.insert((a.min(b), a.max(b)), i);
    }
    let mut order = Vec::with_capacity(bd.nodes);
    let mut stack = vec![ra, rb];
    parent[ra] = root;
    parent[rb] = root;
    mid_above[ra] = mids[0].clone();
    mid_above[rb] = mids[0].clone();
    while let Some(a) = stack.pop() {
        order.push(a);
        for &b in &adj[a] {
            if parent[b] == usize::MAX && b != ra && b != rb {
                parent[b] = a;
                mid_above[b] = mids[edge_index[&(a.min(b), a.max(b))]].clone();
                stack.push(b);
            }
        }
    }
    let children = |a: usize| -> Vec<usize> {
        adj[a]
            .iter()
            .copied()
            .filter(|&b| parent[b] == a && !(a == ra && b == rb) && !(a == rb && b == ra))
            .collect()
    };
    let mut c = Contractor::new(g);
    let mut report = BwReport {
        k,
        bound: bw_bound(k),
        ..Default::default()
    };
    let mut block: Vec<Vec<VertexId>> = vec![Vec::new(); bd.nodes];
    for &a in order.iter().rev() {
        block[a] = if let Some(&(u, v)) = bd.leaf_map.get(&a) {
            let m = &mid_above[a];
            let lower: Vec<usize> = [u, v].into_iter().filter(|x| m.binary_search(x).is_err()).collect();
            contract_classes(&mut c, &lower, m)?
        } else {
            let ch = children(a);
            let (b1, b2) = (ch[0], ch[1]);
            let a1 = std::mem::take(&mut block[b1]);
            let a2 = std::mem::take(&mut block[b2]);
            step(&mut c, &mut report, &format!("node {a}"), &mid_above[a], (&mid_above[b1], a1), (&mid_above[b2], a2))?
        };
    }
    // the root edge has an empty middle set
    let a1 = std::mem::take(&mut block[ra]);
    let a2 = std::mem::take(&mut block[rb]);
    let last = step(&mut c, &mut report, "root", &[], (&mid_above[ra], a1), (&mid_above[rb], a2))?;
    if last.len() != 1 || c.trigraph().len() != 1 {
        return Err(Error::internal("root", "contraction did not end in one vertex"));
    }
    let (seq, width) = c.finish();
    report.width = width;
    Ok((seq, report))
}

type Child<'a> = (&'a [usize], Vec<VertexId>);

fn step(
    c: &mut Contractor,
    report: &mut BwReport,
    at: &str,
    mid: &[usize],
    (m1, a1): Child<'_>,
    (m2, a2): Child<'_>,
) -> Result<Vec<VertexId>> {
    let k = report.k;
    let in_mid = |x: &usize| mid.binary_search(x).is_ok();
    let i_set: Vec<usize> = m1
        .iter()
        .copied()
        .filter(|x| m2.binary_search(x).is_ok() && !in_mid(x))
        .collect();
    let x = m1.iter().filter(|v| in_mid(v)).count();
    let y = m2.iter().filter(|v| in_mid(v)).count();
    if x + y > k + 2 {
        report.violations.push(format!("{at}: x + y = {} exceeds k + 2", x + y));
    }
    let minus = |m: &[usize]| -> Vec<usize> { m.iter().copied().filter(|v| i_set.binary_search(v).is_err()).collect() };
    let (r1, r2) = (minus(m1), minus(m2));
    let t1 = contract_classes(c, &a1, &r1)?;
    let t2 = contract_classes(c, &a2, &r2)?;
    for (t, r) in [(&t1, &r1), (&t2, &r2)] {
        if t.len() > class_bound(r.len()) {
            report
                .violations
                .push(format!("{at}: {} classes on a set of {} vertices", t.len(), r.len()));
        }
    }
    let pair = t1.len() + t2.len();
    let triple = pair as isize + i_set.len() as isize - 2;
    report.max_pair = report.max_pair.max(pair);
    report.max_triple = report.max_triple.max(triple);
    if pair > 4 * k {
        report.violations.push(format!("{at}: |Ã1| + |Ã2| = {pair} exceeds 4k"));
    }
    if 2 * triple > 9 * k as isize - 6 {
        report
            .violations
            .push(format!("{at}: |Ã1| + |Ã2| + |I| − 2 = {triple} exceeds 9k/2 − 3"));
    }
    let mut joint = i_set;
    joint.extend(t1);
    joint.extend(t2);
    let a = contract_classes(c, &joint, mid)?;
    if a.len() > class_bound(mid.len()) {
        report
            .violations
            .push(format!("{at}: block of {} on a middle set of {}", a.len(), mid.len()));
    }
    report.max_block = report.max_block.max(a.len());
    let t = c.trigraph();
    let mut sorted = a.clone();
    sorted.sort_unstable();
    for &v in &a {
        if t.red_neighbours(v).iter().any(|r| sorted.binary_search(r).is_err()) {
            return Err(Error::internal(at, format!("red edge leaves the block at {v}")));
        }
    }
    Ok(a)
}

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

/// Width-0 sequence for a star (including `K1` and `K2`): leaves first,
/// then the centre. `None` if `g` is not a star.
pub fn star_sequence(g: &Graph) -> Option<ContractionSequence> {
    let n = g.n();
    if g.m() + 1 != n {
        return None;
    }
    let centre = (0..n).max_by_key(|&v| g.degree(v)).unwrap_or(0);
    if n > 0 && g.degree(centre) + 1 != n {
        return None;
    }
    let mut c = Contractor::new(g);
    let leaves: Vec<usize> = (0..n).filter(|&v| v != centre).collect();
    let last = c.fold(&leaves).expect("fresh ids");
    if let Some(l) = last {
        c.contract(l, centre).expect("fresh ids");
    }
    Some(c.finish().0)
}

/// Square grid with one diagonal per cell, `rows × cols`.
pub fn diagonal_grid(rows: usize, cols: usize) -> Graph {
    let mut g = crate::generators::grid(rows, cols);
    for r in 0..rows.saturating_sub(1) {
        for c in 0..cols.saturating_sub(1) {
            g.add_edge(r * cols + c, (r + 1) * cols + c + 1);
        }
    }
    g
}

/// Caterpillar decomposition sweeping a grid-like graph column by column.
pub fn column_sweep(g: &Graph, cols: usize) -> BranchDecomposition {
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    edges.sort_by_key(|&(u, v)| {
        let (cu, cv) = (u % cols, v % cols);
        (cu.max(cv), cu.min(cv), (u / cols).min(v / cols), (u / cols).max(v / cols))
    });
    BranchDecomposition::caterpillar(&edges)
}

/// A random triangulated polygon on `n ≥ 3` vertices `0..n` in boundary
/// order, with its width-2 decomposition following the dual tree.
pub fn outerplanar_instance(n: usize, seed: u64) -> (Graph, BranchDecomposition) {
    use rand::Rng;
    assert!(n >= 3, "a polygon needs at least 3 vertices");
    let mut r = crate::generators::rng(seed);
    let mut g = crate::generators::cycle(n);
    let mut bd = BranchDecomposition::default();
    let leaf = |bd: &mut BranchDecomposition, u: usize, v: usize| {
        bd.nodes += 1;
        bd.leaf_map.insert(bd.nodes - 1, (u.min(v), u.max(v)));
        bd.nodes - 1
    };
    // piece(a, b): subtree for chord or side {a, b} plus everything beyond it
    // on the arc a..b; built iteratively with a result stack
    enum Task {
        Build(usize, usize),
        Join(usize, usize),
    }
    let mut tasks = vec![Task::Build(0, n - 1)];
    let mut results: Vec<usize> = Vec::new();
    while let Some(t) = tasks.pop() {
        match t {
            Task::Build(a, b) => {
                if b - a < 2 {
                    results.push(leaf(&mut bd, a, b));
                } else {
                    let c = r.gen_range(a + 1..b);
                    g.add_edge(a, c);
                    g.add_edge(c, b);
                    tasks.push(Task::Join(a, b));
                    tasks.push(Task::Build(c, b));
                    tasks.push(Task::Build(a, c));
                }
            }
            Task::Join(a, b) => {
                let right = results.pop().expect("right piece");
                let left = results.pop().expect("left piece");
                let x = bd.nodes;
                bd.nodes += 1;
                bd.edges.push((x, left));
                bd.edges.push((x, right));
                if (a, b) == (0, n - 1) {
                    let l = leaf(&mut bd, a, b);
                    bd.edges.push((x, l));
                    results.push(x);
                } else {
                    let l = leaf(&mut bd, a, b);
                    let y = bd.nodes;
                    bd.nodes += 1;
                    bd.edges.push((y, x));
                    bd.edges.push((y, l));
                    results.push(y);
                }
            }
        }
    }
    (g, bd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::{bfs_layering, cycle_inside, random_planar_triangulation};
    use crate::generators::{cycle, star};
    use crate::sequence::replay_graph;
    use rand::Rng;

    fn run(g: &Graph, bd: &BranchDecomposition) -> BwReport {
        let (seq, rep) = bw_contraction_sequence(g, bd).unwrap();
        let r = replay_graph(g, &seq).unwrap();
        assert!(r.is_complete());
        assert_eq!(r.width, rep.width);
        rep
    }

    #[test]
    fn h_values() {
        assert_eq!(h(1), 0);
        assert_eq!(h(3), 8);
        assert_eq!(h(15), 56);
        assert_eq!(class_bound(1), 2);
        assert_eq!(class_bound(0), 1);
        assert_eq!(bw_bound(2), 8);
        assert_eq!(bw_bound(4), 16);
        assert_eq!(bw_bound(10), 42);
    }

    #[test]
    fn tight_example_counts() {
        for k in 3..=10 {
            let (g, noose, inside, _) = tight_example(k).unwrap();
            let cert = verify_noose_bound(&g, &noose, &inside).unwrap();
            assert_eq!(cert.class_count, 4 * k - 4);
            let mut by_size = [0usize; 4];
            for &x in &inside {
                by_size[g.degree(x)] += 1;
            }
            assert_eq!(by_size, [1, k, 2 * k - 3, k - 2]);
        }
        assert!(tight_example(2).is_err());
    }

    #[test]
    fn tight_example_k4_via_trigraph_classes() {
        let (g, noose, inside, _) = tight_example(4).unwrap();
        let t = crate::trigraph::Trigraph::from_graph(&g);
        assert_eq!(t.neighbourhood_classes(&inside, &noose).unwrap().len(), 12);
    }

    #[test]
    fn noose_must_separate() {
        let g = cycle(6);
        assert!(verify_noose_bound(&g, &[0, 3], &[1, 2]).is_ok());
        assert!(matches!(verify_noose_bound(&g, &[0, 3], &[1]), Err(Error::InvalidNoose(_))));
        // two noose vertices give at most 4 classes
        let c = verify_noose_bound(&g, &[0, 3], &[1, 2]).unwrap();
        assert!(c.class_count <= 4 && c.bound == 4);
    }

    #[test]
    fn fundamental_cycles_respect_the_bound() {
        let mut r = crate::generators::rng(9);
        for seed in 0..20 {
            let (g, rs) = random_planar_triangulation(40, seed);
            let l = bfs_layering(&rs);
            let non_tree: Vec<(usize, usize)> = g
                .edges()
                .filter(|&(u, v)| l.parent[u] != Some(v) && l.parent[v] != Some(u))
                .collect();
            let (u, v) = non_tree[r.gen_range(0..non_tree.len())];
            let cyc = l.fundamental_cycle(u, v);
            let inside = cycle_inside(&rs, &cyc).unwrap();
            let cert = verify_noose_bound(&g, &cyc, &inside).unwrap();
            assert!(cert.class_count <= cert.bound);
        }
    }

    #[test]
    fn stars_get_width_zero() {
        let g = star(5);
        let bd = BranchDecomposition::caterpillar(&g.edges().collect::<Vec<_>>());
        let rep = run(&g, &bd);
        assert_eq!(rep.width, 0);
    }

    #[test]
    fn outerplanar_within_bound() {
        for seed in 0..20 {
            let (g, bd) = outerplanar_instance(30, seed);
            let v = bd.validate(&g);
            assert!(v.is_ok(), "{:?}", v.violations);
            assert_eq!(v.width, 2);
            let rep = run(&g, &bd);
            assert!(rep.violations.is_empty(), "{:?}", rep.violations);
            assert!(rep.width <= 8);
        }
    }

    #[test]
    fn grid_sweeps_within_bound() {
        for rows in 2..=5 {
            let g = diagonal_grid(rows, 6);
            let bd = column_sweep(&g, 6);
            let rep = run(&g, &bd);
            assert!(rep.violations.is_empty(), "{:?}", rep.violations);
            assert!(rep.width <= rep.bound, "{rep:?}");
        }
    }

    #[test]
    fn degree_one_extension() {
        // triangle 0 1 2 with pendant 3 on 0
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (0, 2), (0, 3)]).unwrap();
        let core = BranchDecomposition::caterpillar(&[(0, 1), (1, 2), (0, 2)]);
        let bd = extend_for_degree_one(&g, &core).unwrap();
        let r = bd.validate(&g);
        assert!(r.is_ok(), "{:?}", r.violations);
        assert_eq!(r.width, 2);

        // no degree-one vertices: unchanged
        let c = cycle(5);
        let cbd = BranchDecomposition::caterpillar(&c.edges().collect::<Vec<_>>());
        assert_eq!(extend_for_degree_one(&c, &cbd).unwrap(), cbd);

        // three triangles sharing vertex 0, each with a pendant path of length 2
        let mut g = Graph::new(13);
        for t in 0..3 {
            let (a, b) = (1 + 2 * t, 2 + 2 * t);
            g.add_edge(0, a);
            g.add_edge(0, b);
            g.add_edge(a, b);
            let (p, q) = (7 + 2 * t, 8 + 2 * t);
            g.add_edge(a, p);
            g.add_edge(p, q);
        }
        let core_edges: Vec<_> = g.edges().filter(|&(u, v)| u < 7 && v < 7).collect();
        let core = BranchDecomposition::caterpillar(&core_edges);
        let mut cg = Graph::new(13);
        for &(u, v) in &core_edges {
            cg.add_edge(u, v);
        }
        let before = core.validate(&cg).width;
        let bd = extend_for_degree_one(&g, &core).unwrap();
        let r = bd.validate(&g);
        assert!(r.is_ok(), "{:?}", r.violations);
        assert_eq!(r.width, before);
    }
}
