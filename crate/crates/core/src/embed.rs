//! Combinatorial planar embeddings (rotation systems), face tracing,
//! triangulation and BFS layering.
//!
//! The face after dart `u → v` continues with `v → succ_v(u)`, where `succ_v`
//! is the cyclic successor in the rotation at `v`. The outer face is named by
//! one of its darts.

use std::collections::{BTreeMap, VecDeque};

use rand::Rng;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::generators::rng;
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationSystem {
    pub rotation: Vec<Vec<usize>>,
    /// A dart `(u, v)` of the outer face.
    pub outer: (usize, usize),
}

#[derive(Serialize, Deserialize)]
struct RotationJson {
    rotation: RotationTable,
    outer_face: (usize, usize),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RotationTable {
    Map(BTreeMap<String, Vec<usize>>),
    List(Vec<Vec<usize>>),
}

impl Serialize for RotationSystem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RotationJson {
            rotation: RotationTable::Map(
                self.rotation.iter().enumerate().map(|(v, r)| (v.to_string(), r.clone())).collect(),
            ),
            outer_face: self.outer,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RotationSystem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = RotationJson::deserialize(d)?;
        let rotation = match j.rotation {
            RotationTable::List(l) => l,
            RotationTable::Map(m) => {
                let mut keyed = Vec::with_capacity(m.len());
                for (k, v) in m {
                    let k: usize = k
                        .parse()
                        .map_err(|_| serde::de::Error::custom(format!("vertex key '{k}' is not an integer")))?;
                    keyed.push((k, v));
                }
                let n = keyed.iter().map(|&(k, _)| k + 1).max().unwrap_or(0);
                let mut l = vec![Vec::new(); n];
                for (k, v) in keyed {
                    l[k] = v;
                }
                l
            }
        };
        Ok(RotationSystem {
            rotation,
            outer: j.outer_face,
        })
    }
}

/// Faces of an embedding, each a closed walk given by the tails of its darts.
#[derive(Clone, Debug)]
pub struct Faces {
    pub walks: Vec<Vec<usize>>,
    face_of: FxHashMap<(usize, usize), usize>,
}

impl Faces {
    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }

    pub fn face_of_dart(&self, u: usize, v: usize) -> Option<usize> {
        self.face_of.get(&(u, v)).copied()
    }
}

impl RotationSystem {
    pub fn n(&self) -> usize {
        self.rotation.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("rotation serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::parse(e.line(), e.to_string()))
    }

    pub fn graph(&self) -> Result<Graph> {
        let mut g = Graph::new(self.n());
        for (u, ns) in self.rotation.iter().enumerate() {
            for &v in ns {
                if v >= self.n() || v == u {
                    return Err(Error::InvalidEmbedding(format!("bad neighbour {v} of {u}")));
                }
                g.add_edge(u, v);
            }
        }
        Ok(g)
    }

    pub fn succ(&self, v: usize, u: usize) -> usize {
        let r = &self.rotation[v];
        let i = r.iter().position(|&x| x == u).expect("dart exists");
        r[(i + 1) % r.len()]
    }

    pub fn pred(&self, v: usize, u: usize) -> usize {
        let r = &self.rotation[v];
        let i = r.iter().position(|&x| x == u).expect("dart exists");
        r[(i + r.len() - 1) % r.len()]
    }

    /// Traces every face. Assumes the rotation lists are symmetric.
    pub fn faces(&self) -> Faces {
        let mut index: FxHashMap<(usize, usize), usize> = FxHashMap::default();
        for (u, ns) in self.rotation.iter().enumerate() {
            for (i, &v) in ns.iter().enumerate() {
                index.insert((v, u), i);
            }
        }
        let mut face_of = FxHashMap::default();
        let mut walks = Vec::new();
        for (u, ns) in self.rotation.iter().enumerate() {
            for &v in ns {
                if face_of.contains_key(&(u, v)) {
                    continue;
                }
                let id = walks.len();
                let mut walk = Vec::new();
                let (mut a, mut b) = (u, v);
                loop {
                    face_of.insert((a, b), id);
                    walk.push(a);
                    let rb = &self.rotation[b];
                    let c = rb[(index[&(a, b)] + 1) % rb.len()];
                    (a, b) = (b, c);
                    if (a, b) == (u, v) {
                        break;
                    }
                }
                walks.push(walk);
            }
        }
        Faces { walks, face_of }
    }

    pub fn outer_face_walk(&self, faces: &Faces) -> Vec<usize> {
        faces
            .face_of_dart(self.outer.0, self.outer.1)
            .map(|f| faces.walks[f].clone())
            .unwrap_or_default()
    }

    /// Checks symmetry, simplicity, the outer dart, and Euler's formula
    /// `n − m + f = 2c` (an isolated vertex counts as one face).
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        let bad = |m: String| Err(Error::InvalidEmbedding(m));
        for (u, ns) in self.rotation.iter().enumerate() {
            let mut s = ns.clone();
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return bad(format!("rotation of {u} repeats a neighbour"));
            }
            for &v in ns {
                if v >= n || v == u {
                    return bad(format!("rotation of {u} lists invalid neighbour {v}"));
                }
                if !self.rotation[v].contains(&u) {
                    return bad(format!("{v} is in the rotation of {u} but not conversely"));
                }
            }
        }
        let g = self.graph()?;
        let faces = self.faces();
        let isolated = (0..n).filter(|&v| g.degree(v) == 0).count();
        let c = g.components().len();
        let f = faces.len() + isolated;
        if n + f != g.m() + 2 * c {
            return bad(format!(
                "Euler check fails: n = {n}, m = {}, f = {f}, components = {c}",
                g.m()
            ));
        }
        if n > 0 && g.m() > 0 && faces.face_of_dart(self.outer.0, self.outer.1).is_none() {
            return bad(format!("outer dart {:?} is not an edge", self.outer));
        }
        Ok(())
    }

    /// Checks that this embeds exactly `g`.
    pub fn validate_for(&self, g: &Graph) -> Result<()> {
        self.validate()?;
        if &self.graph()? != g {
            return Err(Error::InvalidEmbedding("rotation does not match the graph".into()));
        }
        Ok(())
    }

    fn insert_after(&mut self, v: usize, after: usize, x: usize) {
        let r = &mut self.rotation[v];
        let i = r.iter().position(|&y| y == after).expect("anchor exists");
        r.insert(i + 1, x);
    }

    fn remove(&mut self, v: usize, x: usize) {
        let r = &mut self.rotation[v];
        let i = r.iter().position(|&y| y == x).expect("neighbour exists");
        r.remove(i);
    }

    /// Adds the chord `w_i w_j` inside a face walk `w`.
    fn add_chord(&mut self, w: &[usize], i: usize, j: usize) {
        let l = w.len();
        let (a, b) = (w[i], w[j]);
        let pa = w[(i + l - 1) % l];
        let pb = w[(j + l - 1) % l];
        self.insert_after(a, pa, b);
        self.insert_after(b, pb, a);
    }
}

/// Triangulates every face without creating parallel edges. Needs a connected
/// graph on at least 3 vertices.
pub fn triangulate(rs: &RotationSystem) -> Result<(Graph, RotationSystem)> {
    rs.validate()?;
    let mut g = rs.graph()?;
    if g.n() < 3 {
        return Err(Error::InvalidArgument("triangulation needs at least 3 vertices".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut out = rs.clone();
    let faces = out.faces();
    let mut work: Vec<(usize, usize)> = faces
        .walks
        .iter()
        .filter(|w| w.len() > 3)
        .map(|w| (w[0], w[1]))
        .collect();
    while let Some((u, v)) = work.pop() {
        let walk = face_walk(&out, u, v);
        let l = walk.len();
        if l <= 3 {
            continue;
        }
        let Some((i, j)) = legal_chord(&g, &walk) else {
            return Err(Error::internal("triangulate", format!("face {walk:?} has no legal chord")));
        };
        out.add_chord(&walk, i, j);
        g.add_edge(walk[i], walk[j]);
        work.push((walk[i], walk[j]));
        work.push((walk[j], walk[i]));
    }
    Ok((g, out))
}

fn face_walk(rs: &RotationSystem, u: usize, v: usize) -> Vec<usize> {
    let mut walk = Vec::new();
    let (mut a, mut b) = (u, v);
    loop {
        walk.push(a);
        let c = rs.succ(b, a);
        (a, b) = (b, c);
        if (a, b) == (u, v) {
            return walk;
        }
    }
}

/// An ear chord `w_{i−1} w_{i+1}` if one is legal, else the lexicographically
/// smallest legal chord by walk position.
fn legal_chord(g: &Graph, w: &[usize]) -> Option<(usize, usize)> {
    let l = w.len();
    let ok = |i: usize, j: usize| w[i] != w[j] && !g.has_edge(w[i], w[j]);
    for i in 0..l {
        let (a, b) = ((i + l - 1) % l, (i + 1) % l);
        if ok(a, b) {
            return Some((a.min(b), a.max(b)));
        }
    }
    for i in 0..l {
        for j in i + 2..l {
            if (i, j) != (0, l - 1) && ok(i, j) {
                return Some((i, j));
            }
        }
    }
    None
}

/// A maximal planar graph on `n ≥ 3` vertices: random stacking into inner
/// faces followed by random edge flips. The outer face is the triangle
/// `1, 0, 2`.
pub fn random_planar_triangulation(n: usize, seed: u64) -> (Graph, RotationSystem) {
    assert!(n >= 3, "a triangulation needs at least 3 vertices");
    let mut r = rng(seed);
    let mut rs = RotationSystem {
        rotation: vec![vec![1, 2], vec![2, 0], vec![0, 1]],
        outer: (1, 0),
    };
    rs.rotation.resize(n, Vec::new());
    let mut g = Graph::from_edges(n, [(0, 1), (1, 2), (0, 2)]).expect("triangle");
    let mut inner: Vec<[usize; 3]> = vec![[0, 1, 2]];
    for v in 3..n {
        let fi = r.gen_range(0..inner.len());
        let [a, b, c] = inner[fi];
        rs.insert_after(a, c, v);
        rs.insert_after(b, a, v);
        rs.insert_after(c, b, v);
        rs.rotation[v] = vec![a, c, b];
        for x in [a, b, c] {
            g.add_edge(v, x);
        }
        inner[fi] = [a, b, v];
        inner.push([b, c, v]);
        inner.push([c, a, v]);
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut edges = edges;
    for _ in 0..2 * n {
        let k = r.gen_range(0..edges.len());
        let (a, b) = edges[k];
        if a <= 2 && b <= 2 {
            continue;
        }
        let c = rs.succ(b, a);
        let d = rs.succ(a, b);
        if c == d || g.has_edge(c, d) || g.degree(a) <= 3 || g.degree(b) <= 3 {
            continue;
        }
        rs.remove(a, b);
        rs.remove(b, a);
        g.remove_edge(a, b);
        rs.insert_after(c, b, d);
        rs.insert_after(d, a, c);
        g.add_edge(c, d);
        edges[k] = (c.min(d), c.max(d));
    }
    (g, rs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BfsLayering {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    pub layer: Vec<usize>,
}

impl BfsLayering {
    pub fn depth(&self) -> usize {
        self.layer.iter().copied().filter(|&l| l != usize::MAX).max().unwrap_or(0)
    }

    /// Path from `v` up to the root, `v` first.
    pub fn path_to_root(&self, v: usize) -> Vec<usize> {
        let mut p = vec![v];
        let mut x = v;
        while let Some(y) = self.parent[x] {
            p.push(y);
            x = y;
        }
        p
    }

    /// The cycle closed by the non-tree edge `uv`: tree path from `u` up to the
    /// common ancestor, then down to `v`.
    pub fn fundamental_cycle(&self, u: usize, v: usize) -> Vec<usize> {
        let pu = self.path_to_root(u);
        let pv = self.path_to_root(v);
        let on_v: rustc_hash::FxHashSet<usize> = pv.iter().copied().collect();
        let lca = *pu.iter().find(|x| on_v.contains(x)).expect("same tree");
        let mut cyc: Vec<usize> = pu.iter().copied().take_while(|&x| x != lca).collect();
        cyc.push(lca);
        let back: Vec<usize> = pv.iter().copied().take_while(|&x| x != lca).collect();
        cyc.extend(back.into_iter().rev());
        cyc
    }
}

/// BFS from the tail of the outer dart, scanning neighbours in rotation order.
pub fn bfs_layering(rs: &RotationSystem) -> BfsLayering {
    let n = rs.n();
    let root = rs.outer.0;
    let mut parent = vec![None; n];
    let mut layer = vec![usize::MAX; n];
    if n == 0 {
        return BfsLayering { root, parent, layer };
    }
    layer[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &v in &rs.rotation[u] {
            if layer[v] == usize::MAX {
                layer[v] = layer[u] + 1;
                parent[v] = Some(u);
                queue.push_back(v);
            }
        }
    }
    BfsLayering { root, parent, layer }
}

/// Vertices strictly on the left of the closed walk `cycle` (the side of the
/// faces containing the darts `c_i → c_{i+1}`), found by flooding faces
/// without crossing cycle edges.
pub fn cycle_inside(rs: &RotationSystem, cycle: &[usize]) -> Result<Vec<usize>> {
    let k = cycle.len();
    if k < 3 {
        return Err(Error::InvalidNoose("a cycle needs at least 3 vertices".into()));
    }
    let faces = rs.faces();
    let mut on_cycle = vec![false; rs.n()];
    for &c in cycle {
        on_cycle[c] = true;
    }
    let mut wall = rustc_hash::FxHashSet::default();
    let mut start = Vec::new();
    for i in 0..k {
        let (a, b) = (cycle[i], cycle[(i + 1) % k]);
        let f = faces
            .face_of_dart(a, b)
            .ok_or_else(|| Error::InvalidNoose(format!("{{{a}, {b}}} is not an edge")))?;
        wall.insert((a.min(b), a.max(b)));
        start.push(f);
    }
    let mut seen = vec![false; faces.len()];
    let mut stack = Vec::new();
    for f in start {
        if !seen[f] {
            seen[f] = true;
            stack.push(f);
        }
    }
    let mut inside = vec![false; rs.n()];
    while let Some(f) = stack.pop() {
        let w = &faces.walks[f];
        for i in 0..w.len() {
            let (a, b) = (w[i], w[(i + 1) % w.len()]);
            if !on_cycle[a] {
                inside[a] = true;
            }
            if wall.contains(&(a.min(b), a.max(b))) {
                continue;
            }
            let g = faces.face_of_dart(b, a).expect("reverse dart");
            if !seen[g] {
                seen[g] = true;
                stack.push(g);
            }
        }
    }
    Ok((0..rs.n()).filter(|&v| inside[v]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> RotationSystem {
        RotationSystem {
            rotation: vec![vec![1, 2], vec![2, 0], vec![0, 1]],
            outer: (1, 0),
        }
    }

    fn k4() -> RotationSystem {
        // 3 in the middle of the triangle 0 1 2
        let (_, rs) = random_planar_triangulation(4, 0);
        rs
    }

    #[test]
    fn triangle_has_two_faces() {
        let f = triangle().faces();
        assert_eq!(f.len(), 2);
        assert!(f.walks.iter().all(|w| w.len() == 3));
        triangle().validate().unwrap();
    }

    #[test]
    fn k4_has_four_faces() {
        let rs = k4();
        rs.validate().unwrap();
        assert_eq!(rs.graph().unwrap().m(), 6);
        assert_eq!(rs.faces().len(), 4);
    }

    #[test]
    fn tree_has_one_face() {
        let rs = RotationSystem {
            rotation: vec![vec![1, 2, 3], vec![0], vec![0], vec![0]],
            outer: (0, 1),
        };
        rs.validate().unwrap();
        assert_eq!(rs.faces().len(), 1);
    }

    #[test]
    fn non_planar_rotation_fails_euler() {
        // K4 with a rotation of genus one
        let rs = RotationSystem {
            rotation: vec![vec![1, 2, 3], vec![0, 2, 3], vec![0, 1, 3], vec![0, 1, 2]],
            outer: (0, 1),
        };
        assert!(rs.validate().is_err());
    }

    #[test]
    fn triangulate_small_inputs() {
        let p3 = RotationSystem {
            rotation: vec![vec![1], vec![0, 2], vec![1]],
            outer: (0, 1),
        };
        let (g, rs) = triangulate(&p3).unwrap();
        assert_eq!(g.m(), 3);
        rs.validate_for(&g).unwrap();

        let c4 = RotationSystem {
            rotation: vec![vec![1, 3], vec![2, 0], vec![3, 1], vec![0, 2]],
            outer: (1, 0),
        };
        c4.validate().unwrap();
        let (g, rs) = triangulate(&c4).unwrap();
        rs.validate_for(&g).unwrap();
        assert!(rs.faces().walks.iter().all(|w| w.len() == 3));
        assert!(g.m() == 5 || g.m() == 6);

        let (tg, trs) = random_planar_triangulation(12, 5);
        let (g2, rs2) = triangulate(&trs).unwrap();
        assert_eq!((g2, rs2), (tg, trs));
    }

    #[test]
    fn triangulating_a_star_stays_simple() {
        let n = 9;
        let mut rot = vec![(1..n).collect::<Vec<_>>()];
        rot.extend((1..n).map(|_| vec![0]));
        let rs = RotationSystem { rotation: rot, outer: (0, 1) };
        let (g, out) = triangulate(&rs).unwrap();
        out.validate_for(&g).unwrap();
        assert_eq!(g.m(), 3 * n - 6);
    }

    #[test]
    fn generator_is_a_triangulation() {
        for seed in 0..30 {
            let (g, rs) = random_planar_triangulation(10 + seed as usize, seed);
            rs.validate_for(&g).unwrap();
            assert_eq!(g.m(), 3 * g.n() - 6);
            assert!(rs.faces().walks.iter().all(|w| w.len() == 3));
        }
        assert_eq!(random_planar_triangulation(30, 4), random_planar_triangulation(30, 4));
    }

    #[test]
    fn layering_of_triangle_and_invariant() {
        let l = bfs_layering(&triangle());
        let mut layers = l.layer.clone();
        layers.sort_unstable();
        assert_eq!(layers, vec![0, 1, 1]);
        let (g, rs) = random_planar_triangulation(200, 1);
        let l = bfs_layering(&rs);
        let dist = g.bfs_distances(l.root);
        for v in 0..g.n() {
            assert_eq!(l.layer[v], dist[v]);
            if let Some(p) = l.parent[v] {
                assert_eq!(l.layer[v], l.layer[p] + 1);
            }
        }
    }

    #[test]
    fn rotation_json_round_trip() {
        let rs = k4();
        let back = RotationSystem::from_json(&rs.to_json()).unwrap();
        assert_eq!(back, rs);
        let list = r#"{"rotation": [[1, 2], [2, 0], [0, 1]], "outer_face": [1, 0]}"#;
        assert_eq!(RotationSystem::from_json(list).unwrap(), triangle());
    }

    #[test]
    fn cycle_inside_of_k4() {
        let rs = k4();
        // vertex 3 sits inside the inner face 0 1 2
        assert_eq!(cycle_inside(&rs, &[0, 1, 2]).unwrap(), vec![3]);
        assert_eq!(cycle_inside(&rs, &[1, 0, 2]).unwrap(), Vec::<usize>::new());
    }
}
