//! Contraction sequences for planar graphs by recursive Sperner
//! decomposition of a BFS-layered triangulation.
//!
//! A region is a cycle of the triangulation made of vertical paths of the BFS
//! tree, together with its strict interior. Colouring interior vertices by the
//! boundary arc their tree path reaches first yields a tri-coloured face; the
//! tree paths from its corners split the region into at most three smaller
//! regions. Regions are processed bottom-up: after the subregions are done,
//! each of their layer blocks is coarsened by trace on the region boundary,
//! and then, layer by layer, the coarsened blocks and the splitting paths are
//! merged by trace on the region boundary again.

use std::collections::BTreeMap;

use rustc_hash::FxHashSet;
use serde::Serialize;

use crate::embed::{bfs_layering, triangulate, BfsLayering, Faces, RotationSystem};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sequence::{ContractionSequence, Contractor};
use crate::spherecut::{h, star_sequence};
use crate::trigraph::VertexId;

pub const PLANAR_BOUND: usize = 183;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LayerTrace {
    pub layer: usize,
    /// Sizes of the coarsened subregion blocks on this layer.
    pub tilde: Vec<usize>,
    pub splitting: usize,
    pub block: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RegionTrace {
    pub id: usize,
    pub parent: Option<usize>,
    pub component: usize,
    /// Number of vertical paths on the boundary.
    pub k: usize,
    pub boundary: usize,
    pub interior: usize,
    /// Tri-coloured face, original vertex ids.
    pub sperner: Option<[usize; 3]>,
    pub children: Vec<usize>,
    pub layers: Vec<LayerTrace>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PlanarReport {
    pub width: usize,
    pub regions: usize,
    pub max_k: usize,
    /// Regions whose boundary needed more than five vertical paths.
    pub over_five: usize,
    pub max_block: usize,
    pub max_tilde: usize,
    pub max_tilde_sum: usize,
    /// Audit failures; none of them invalidates the sequence.
    pub violations: Vec<String>,
    pub trace: Vec<RegionTrace>,
}

struct Region {
    /// Boundary cycle, oriented with the interior on the left of every dart.
    boundary: Vec<usize>,
    k: usize,
    interior: Vec<usize>,
    faces: Vec<usize>,
    splitting: Vec<usize>,
    children: Vec<usize>,
    parent: Option<usize>,
    sperner: Option<[usize; 3]>,
}

/// Everything the decomposition needs about one connected component.
struct Layout {
    layering: BfsLayering,
    faces: Faces,
    /// Scratch arrays indexed by local vertex, reset after use.
    pos: Vec<usize>,
    first: Vec<usize>,
    face_mark: Vec<u32>,
    vertex_mark: Vec<u32>,
    stamp: u32,
}

impl Layout {
    fn parent(&self, v: usize) -> Option<usize> {
        self.layering.parent[v]
    }

    fn next_stamp(&mut self) -> u32 {
        self.stamp += 1;
        self.stamp
    }

    /// Minimum number of vertical paths partitioning `cycle`.
    fn path_count(&self, cycle: &[usize]) -> usize {
        let l = cycle.len();
        if l <= 1 {
            return l;
        }
        // 1 = down, 2 = up, 0 = no tree edge
        let rel = |i: usize| {
            let (a, b) = (cycle[i % l], cycle[(i + 1) % l]);
            if self.parent(b) == Some(a) {
                1
            } else if self.parent(a) == Some(b) {
                2
            } else {
                0
            }
        };
        let Some(s) = (0..l).find(|&i| rel(i + l - 1) == 0) else {
            // a cycle cannot lie inside the tree, so this only happens for l = 2
            return 1;
        };
        let mut runs = 1;
        let mut dir = 0;
        for i in s..s + l - 1 {
            let r = rel(i);
            if r != 0 && (dir == 0 || dir == r) {
                dir = r;
            } else {
                runs += 1;
                dir = 0;
            }
        }
        runs
    }

    /// Faces on the left of `cycle` and the vertices strictly inside.
    fn flood(&mut self, cycle: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let l = cycle.len();
        let wall: FxHashSet<(usize, usize)> = (0..l)
            .map(|i| {
                let (a, b) = (cycle[i], cycle[(i + 1) % l]);
                (a.min(b), a.max(b))
            })
            .collect();
        let fs = self.next_stamp();
        let mut stack = Vec::new();
        let mut faces = Vec::new();
        for i in 0..l {
            let f = self.faces.face_of_dart(cycle[i], cycle[(i + 1) % l]).expect("boundary dart");
            if self.face_mark[f] != fs {
                self.face_mark[f] = fs;
                stack.push(f);
            }
        }
        while let Some(f) = stack.pop() {
            faces.push(f);
            let w = &self.faces.walks[f];
            for i in 0..w.len() {
                let (a, b) = (w[i], w[(i + 1) % w.len()]);
                if wall.contains(&(a.min(b), a.max(b))) {
                    continue;
                }
                let g = self.faces.face_of_dart(b, a).expect("reverse dart");
                if self.face_mark[g] != fs {
                    self.face_mark[g] = fs;
                    stack.push(g);
                }
            }
        }
        let vs = self.next_stamp();
        for &c in cycle {
            self.vertex_mark[c] = vs;
        }
        let mut interior = Vec::new();
        for &f in &faces {
            for &v in &self.faces.walks[f] {
                if self.vertex_mark[v] != vs {
                    self.vertex_mark[v] = vs;
                    interior.push(v);
                }
            }
        }
        interior.sort_unstable();
        (faces, interior)
    }
}

/// A candidate split of a region.
struct Split {
    corners: [usize; 3],
    /// `Q'_i`, bottom-up, possibly empty.
    paths: [Vec<usize>; 3],
    cycles: Vec<Vec<usize>>,
    score: usize,
}

fn build_split(lay: &Layout, boundary: &[usize], corners: [usize; 3]) -> Split {
    let l = boundary.len();
    let mut paths: [Vec<usize>; 3] = Default::default();
    let mut top = [0usize; 3];
    for i in 0..3 {
        let mut v = corners[i];
        while lay.pos[v] == usize::MAX {
            paths[i].push(v);
            v = lay.parent(v).expect("tree path reaches the boundary");
        }
        top[i] = v;
    }
    let mut cycles = Vec::with_capacity(3);
    for a in 0..3 {
        let b = (a + 1) % 3;
        let mut cyc = Vec::new();
        let (pa, pb) = (lay.pos[top[a]], lay.pos[top[b]]);
        let mut p = pa;
        loop {
            cyc.push(boundary[p]);
            if p == pb {
                break;
            }
            p = (p + 1) % l;
        }
        cyc.extend(paths[b].iter().rev().copied());
        cyc.extend(paths[a].iter().copied());
        cycles.push(cyc);
    }
    let score = cycles
        .iter()
        .filter(|c| c.len() >= 3)
        .map(|c| lay.path_count(c))
        .max()
        .unwrap_or(0);
    Split {
        corners,
        paths,
        cycles,
        score,
    }
}

/// Candidate cut positions for grouping the boundary into three arcs.
fn cut_candidates(lay: &Layout, boundary: &[usize]) -> Vec<usize> {
    let l = boundary.len();
    let tree_edge = |a: usize, b: usize| lay.parent(a) == Some(b) || lay.parent(b) == Some(a);
    // starts of an optimal segmentation
    let mut starts = Vec::new();
    let s = (0..l)
        .find(|&i| !tree_edge(boundary[(i + l - 1) % l], boundary[i]))
        .unwrap_or(0);
    let mut dir = 0;
    starts.push(s);
    for i in s..s + l - 1 {
        let (a, b) = (boundary[i % l], boundary[(i + 1) % l]);
        let r = if lay.parent(b) == Some(a) {
            1
        } else if lay.parent(a) == Some(b) {
            2
        } else {
            0
        };
        if r != 0 && (dir == 0 || dir == r) {
            dir = r;
        } else {
            starts.push(i + 1);
            dir = 0;
        }
    }
    let mut cuts: Vec<usize> = starts.iter().map(|&x| x % l).collect();
    if starts.len() < 3 {
        for (i, &st) in starts.iter().enumerate() {
            let end = if i + 1 < starts.len() { starts[i + 1] } else { starts[0] + l };
            let len = end - st;
            if len >= 2 {
                cuts.push((st + 1) % l);
            }
            if len >= 3 {
                cuts.push((end - 1) % l);
            }
        }
    }
    cuts.sort_unstable();
    cuts.dedup();
    cuts
}

/// Chooses the grouping and tri-coloured face giving subregions with as few
/// boundary paths as possible, stopping at the first with at most five.
fn choose_split(lay: &mut Layout, region: &Region) -> Result<Split> {
    let boundary = &region.boundary;
    let l = boundary.len();
    for (i, &b) in boundary.iter().enumerate() {
        lay.pos[b] = i;
    }
    // first boundary vertex on the tree path of every interior vertex
    let mut by_layer = region.interior.clone();
    by_layer.sort_by_key(|&v| lay.layering.layer[v]);
    for &v in &by_layer {
        let p = lay.parent(v).ok_or_else(|| Error::internal("planar", "interior vertex is the root"))?;
        lay.first[v] = if lay.pos[p] != usize::MAX {
            p
        } else if lay.first[p] != usize::MAX {
            lay.first[p]
        } else {
            return Err(Error::internal("planar", format!("tree path of {v} leaves the region")));
        };
    }
    let cuts = cut_candidates(lay, boundary);
    let mut best: Option<Split> = None;
    let mut colour = vec![0u8; l];
    'outer: for a in 0..cuts.len() {
        for b in a + 1..cuts.len() {
            for c in b + 1..cuts.len() {
                let (c1, c2, c3) = (cuts[a], cuts[b], cuts[c]);
                for (p, col) in colour.iter_mut().enumerate() {
                    *col = if p >= c1 && p < c2 {
                        0
                    } else if p >= c2 && p < c3 {
                        1
                    } else {
                        2
                    };
                }
                let col_of = |v: usize| -> u8 {
                    let w = if lay.pos[v] != usize::MAX { v } else { lay.first[v] };
                    colour[lay.pos[w]]
                };
                let mut tried = 0;
                for &f in &region.faces {
                    let w = &lay.faces.walks[f];
                    let cs = [col_of(w[0]), col_of(w[1]), col_of(w[2])];
                    if cs[1] != (cs[0] + 1) % 3 || cs[2] != (cs[1] + 1) % 3 {
                        continue;
                    }
                    let mut corners = [0; 3];
                    for i in 0..3 {
                        corners[cs[i] as usize] = w[i];
                    }
                    let s = build_split(lay, boundary, corners);
                    let better = best.as_ref().is_none_or(|b| s.score < b.score);
                    if better {
                        best = Some(s);
                    }
                    if best.as_ref().is_some_and(|b| b.score <= 5) {
                        break 'outer;
                    }
                    tried += 1;
                    if tried >= 4 {
                        break;
                    }
                }
            }
        }
    }
    for &v in &region.interior {
        lay.first[v] = usize::MAX;
    }
    for &b in boundary {
        lay.pos[b] = usize::MAX;
    }
    best.ok_or_else(|| Error::internal("planar", "no tri-coloured face with the boundary orientation"))
}

/// Contraction sequence of width at most 183 for a planar graph given with a
/// rotation system.
pub fn planar_contraction_sequence(g: &Graph, rs: &RotationSystem) -> Result<(ContractionSequence, PlanarReport)> {
    rs.validate_for(g)?;
    let mut report = PlanarReport::default();
    if let Some(seq) = star_sequence(g) {
        return Ok((seq, report));
    }
    let mut c = Contractor::new(g);
    let mut finals = Vec::new();
    for (ci, comp) in g.components().into_iter().enumerate() {
        if comp.len() < 3 {
            finals.extend(c.fold(&comp)?);
            continue;
        }
        let last = component(&mut c, g, rs, &comp, ci, &mut report)?;
        finals.push(last);
    }
    c.fold(&finals)?;
    let (seq, width) = c.finish();
    report.width = width;
    Ok((seq, report))
}

fn component(
    c: &mut Contractor,
    g: &Graph,
    rs: &RotationSystem,
    comp: &[usize],
    ci: usize,
    report: &mut PlanarReport,
) -> Result<VertexId> {
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in comp.iter().enumerate() {
        local[v] = i;
    }
    let rotation: Vec<Vec<usize>> = comp
        .iter()
        .map(|&v| rs.rotation[v].iter().map(|&w| local[w]).collect())
        .collect();
    let outer = if local[rs.outer.0] != usize::MAX {
        (local[rs.outer.0], local[rs.outer.1])
    } else {
        (0, rotation[0][0])
    };
    let sub = RotationSystem { rotation, outer };
    let (_, plus) = triangulate(&sub)?;
    let faces = plus.faces();
    let n = comp.len();
    let nf = faces.len();
    let mut lay = Layout {
        layering: bfs_layering(&plus),
        faces,
        pos: vec![usize::MAX; n],
        first: vec![usize::MAX; n],
        face_mark: vec![0; nf],
        vertex_mark: vec![0; n],
        stamp: 0,
    };
    let outer_walk = {
        let f = lay.faces.face_of_dart(plus.outer.0, plus.outer.1).expect("outer dart");
        lay.faces.walks[f].clone()
    };
    if outer_walk.len() != 3 {
        return Err(Error::internal("planar", "outer face of the triangulation is not a triangle"));
    }
    let top: Vec<usize> = vec![outer_walk[0], outer_walk[2], outer_walk[1]];
    let (faces0, interior0) = lay.flood(&top);
    let mut regions = vec![Region {
        k: lay.path_count(&top),
        boundary: top.clone(),
        interior: interior0,
        faces: faces0,
        splitting: Vec::new(),
        children: Vec::new(),
        parent: None,
        sperner: None,
    }];
    // decomposition, breadth first
    let mut next = 0;
    while next < regions.len() {
        let id = next;
        next += 1;
        if regions[id].interior.is_empty() {
            regions[id].faces = Vec::new();
            continue;
        }
        let split = choose_split(&mut lay, &regions[id])?;
        let mut covered: Vec<usize> = split.paths.iter().flatten().copied().collect();
        regions[id].splitting = covered.clone();
        regions[id].sperner = Some(split.corners.map(|v| comp[v]));
        for cyc in &split.cycles {
            if cyc.len() < 3 {
                continue;
            }
            let (faces, interior) = lay.flood(cyc);
            if interior.is_empty() {
                continue;
            }
            covered.extend(interior.iter().copied());
            let child = regions.len();
            regions.push(Region {
                k: lay.path_count(cyc),
                boundary: cyc.clone(),
                interior,
                faces,
                splitting: Vec::new(),
                children: Vec::new(),
                parent: Some(id),
                sperner: None,
            });
            regions[id].children.push(child);
        }
        regions[id].faces = Vec::new();
        covered.sort_unstable();
        if covered != regions[id].interior {
            return Err(Error::internal(
                format!("region {id}"),
                "subregions and splitting paths do not partition the interior",
            ));
        }
    }
    let base = report.trace.len();
    for (id, r) in regions.iter().enumerate() {
        report.max_k = report.max_k.max(r.k);
        if r.k > 5 {
            report.over_five += 1;
            log::debug!("region {} has {} boundary paths", base + id, r.k);
        }
        report.trace.push(RegionTrace {
            id: base + id,
            parent: r.parent.map(|p| base + p),
            component: ci,
            k: r.k,
            boundary: r.boundary.len(),
            interior: r.interior.len(),
            sperner: r.sperner,
            children: r.children.iter().map(|&x| base + x).collect(),
            layers: Vec::new(),
        });
    }
    report.regions += regions.len();

    // contraction, children before parents
    let layer = &lay.layering.layer;
    let mut blocks: Vec<BTreeMap<usize, Vec<VertexId>>> = vec![BTreeMap::new(); regions.len()];
    for id in (0..regions.len()).rev() {
        let r = &regions[id];
        let ys: Vec<VertexId> = r.boundary.iter().map(|&v| comp[v]).collect();
        let mut tilde: Vec<BTreeMap<usize, Vec<VertexId>>> = Vec::new();
        for &ch in &r.children {
            let mut t = BTreeMap::new();
            for (j, a) in std::mem::take(&mut blocks[ch]) {
                t.insert(j, contract_classes(c, &a, &ys)?);
            }
            tilde.push(t);
        }
        let mut split_by_layer: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
        for &v in &r.splitting {
            split_by_layer.entry(layer[v]).or_default().push(comp[v]);
        }
        let mut layers: Vec<usize> = split_by_layer.keys().copied().collect();
        for t in &tilde {
            layers.extend(t.keys().copied());
        }
        layers.sort_unstable();
        layers.dedup();
        let trace = &mut report.trace[base + id];
        let mut out = BTreeMap::new();
        for j in layers {
            let sizes: Vec<usize> = tilde.iter().map(|t| t.get(&j).map_or(0, Vec::len)).collect();
            let mut joint: Vec<VertexId> = split_by_layer.get(&j).cloned().unwrap_or_default();
            let splitting = joint.len();
            for t in &tilde {
                joint.extend(t.get(&j).into_iter().flatten().copied());
            }
            let a = contract_classes(c, &joint, &ys)?;
            let sum: usize = sizes.iter().sum();
            let max = sizes.iter().copied().max().unwrap_or(0);
            report.max_tilde = report.max_tilde.max(max);
            report.max_tilde_sum = report.max_tilde_sum.max(sum);
            report.max_block = report.max_block.max(a.len());
            if max as isize > h(9) {
                report.violations.push(format!("region {}: layer {j} has a coarsened block of {max}", base + id));
            }
            if sum as isize > h(15) + 5 {
                report.violations.push(format!("region {}: layer {j} coarsened blocks sum to {sum}", base + id));
            }
            if a.len() as isize > h(3 * r.k) {
                report
                    .violations
                    .push(format!("region {}: layer {j} block of {} with k = {}", base + id, a.len(), r.k));
            }
            trace.layers.push(LayerTrace {
                layer: j,
                tilde: sizes,
                splitting,
                block: a.len(),
            });
            if !a.is_empty() {
                out.insert(j, a);
            }
        }
        blocks[id] = out;
    }
    // outer phase: each layer to one vertex, then the path, then the outer face
    let mut path = Vec::new();
    for (_, a) in std::mem::take(&mut blocks[0]) {
        path.extend(c.fold(&a)?);
    }
    let mut rest = path;
    rest.extend(top.iter().map(|&v| comp[v]));
    let last = c.fold(&rest)?.expect("component is nonempty");
    Ok(last)
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

/// Searches the faces of a near-triangulation for one whose three vertices
/// carry three distinct colours.
pub fn sperner_face(rs: &RotationSystem, colour: &[u8]) -> Option<[usize; 3]> {
    let faces = rs.faces();
    let outer = faces.face_of_dart(rs.outer.0, rs.outer.1);
    faces.walks.iter().enumerate().find_map(|(f, w)| {
        if Some(f) == outer || w.len() != 3 {
            return None;
        }
        let cs = [colour[w[0]], colour[w[1]], colour[w[2]]];
        (cs[0] != cs[1] && cs[1] != cs[2] && cs[0] != cs[2]).then(|| [w[0], w[1], w[2]])
    })
}
