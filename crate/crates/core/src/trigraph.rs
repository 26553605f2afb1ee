//! Trigraphs: graphs whose edges are either black or red, and the contraction
//! operation that twin-width is defined by.
//!
//! Vertex ids are dense. A trigraph built from an `n`-vertex graph uses ids
//! `0..n`; every contraction allocates the next unused id for the merged vertex,
//! so ids are never reused and a contraction sequence names vertices
//! unambiguously.

use std::collections::BTreeMap;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub type VertexId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Colour {
    Black,
    Red,
}

#[derive(Clone, Debug)]
struct Slot {
    adj: FxHashMap<u32, Colour>,
    red_degree: usize,
    origin: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct Trigraph {
    slots: Vec<Option<Slot>>,
    alive: usize,
    original_n: usize,
}

/// Outcome of a single contraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Contraction {
    /// The fresh vertex that replaced `u` and `v`.
    pub merged: VertexId,
    /// Largest red degree among the vertices whose red degree may have changed
    /// (the merged vertex and its neighbours).
    pub touched_max_red: usize,
}

impl Trigraph {
    pub fn from_graph(g: &Graph) -> Self {
        let slots = (0..g.n())
            .map(|v| {
                Some(Slot {
                    adj: g
                        .neighbours(v)
                        .iter()
                        .map(|&w| (w as u32, Colour::Black))
                        .collect(),
                    red_degree: 0,
                    origin: vec![v as u32],
                })
            })
            .collect();
        Trigraph {
            slots,
            alive: g.n(),
            original_n: g.n(),
        }
    }

    /// Builds a trigraph on `0..n` from explicit black and red edge lists.
    pub fn from_edges(
        n: usize,
        black: impl IntoIterator<Item = (VertexId, VertexId)>,
        red: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self> {
        let mut t = Trigraph::from_graph(&Graph::new(n));
        let coloured = black
            .into_iter()
            .map(|e| (e, Colour::Black))
            .chain(red.into_iter().map(|e| (e, Colour::Red)));
        for ((u, v), c) in coloured {
            if u >= n {
                return Err(Error::UnknownVertex(u));
            }
            if v >= n {
                return Err(Error::UnknownVertex(v));
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            match t.edge(u, v) {
                Some(existing) if existing != c => return Err(Error::ColourConflict(u, v)),
                Some(_) => {}
                None => t.insert_edge(u, v, c),
            }
        }
        Ok(t)
    }

    fn insert_edge(&mut self, u: VertexId, v: VertexId, c: Colour) {
        for (a, b) in [(u, v), (v, u)] {
            let slot = self.slots[a].as_mut().unwrap();
            slot.adj.insert(b as u32, c);
            if c == Colour::Red {
                slot.red_degree += 1;
            }
        }
    }

    fn slot(&self, v: VertexId) -> Result<&Slot> {
        self.slots
            .get(v)
            .and_then(Option::as_ref)
            .ok_or(Error::UnknownVertex(v))
    }

    /// Number of live vertices.
    pub fn len(&self) -> usize {
        self.alive
    }

    pub fn is_empty(&self) -> bool {
        self.alive == 0
    }

    /// Number of vertices of the graph this trigraph was built from.
    pub fn original_len(&self) -> usize {
        self.original_n
    }

    /// The id the next contraction will allocate.
    pub fn next_id(&self) -> VertexId {
        self.slots.len()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        matches!(self.slots.get(v), Some(Some(_)))
    }

    /// Live vertices in increasing id order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_some())
            .map(|(v, _)| v)
    }

    pub fn edge(&self, u: VertexId, v: VertexId) -> Option<Colour> {
        self.slots
            .get(u)
            .and_then(Option::as_ref)
            .and_then(|s| s.adj.get(&(v as u32)).copied())
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.slots[v].as_ref().map_or(0, |s| s.adj.len())
    }

    pub fn red_degree(&self, v: VertexId) -> usize {
        self.slots[v].as_ref().map_or(0, |s| s.red_degree)
    }

    /// Neighbours of `v` with edge colours, unordered.
    pub fn neighbours(&self, v: VertexId) -> impl Iterator<Item = (VertexId, Colour)> + '_ {
        self.slots[v]
            .as_ref()
            .into_iter()
            .flat_map(|s| s.adj.iter().map(|(&w, &c)| (w as VertexId, c)))
    }

    fn sorted_neighbours(&self, v: VertexId, colour: Colour) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self
            .neighbours(v)
            .filter(|&(_, c)| c == colour)
            .map(|(w, _)| w)
            .collect();
        out.sort_unstable();
        out
    }

    pub fn black_neighbours(&self, v: VertexId) -> Vec<VertexId> {
        self.sorted_neighbours(v, Colour::Black)
    }

    pub fn red_neighbours(&self, v: VertexId) -> Vec<VertexId> {
        self.sorted_neighbours(v, Colour::Red)
    }

    /// Original vertices merged into `v`, sorted.
    pub fn origin(&self, v: VertexId) -> Vec<VertexId> {
        let mut o: Vec<VertexId> = self.slots[v]
            .as_ref()
            .map(|s| s.origin.iter().map(|&x| x as VertexId).collect())
            .unwrap_or_default();
        o.sort_unstable();
        o
    }

    /// Smallest original vertex merged into `v`.
    pub fn min_origin(&self, v: VertexId) -> VertexId {
        self.slots[v]
            .as_ref()
            .and_then(|s| s.origin.iter().min())
            .map_or(usize::MAX, |&x| x as VertexId)
    }

    fn edges_of(&self, colour: Colour) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for u in self.vertices() {
            for (w, c) in self.neighbours(u) {
                if c == colour && u < w {
                    out.push((u, w));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn black_edges(&self) -> Vec<(VertexId, VertexId)> {
        self.edges_of(Colour::Black)
    }

    pub fn red_edges(&self) -> Vec<(VertexId, VertexId)> {
        self.edges_of(Colour::Red)
    }

    pub fn edge_count(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Maximum red degree over live vertices; 0 on an empty trigraph.
    pub fn max_red_degree(&self) -> usize {
        self.slots
            .iter()
            .flatten()
            .map(|s| s.red_degree)
            .max()
            .unwrap_or(0)
    }

    /// Contracts `u` and `v` into a fresh vertex. The merged vertex keeps a black
    /// edge to the common black neighbours of `u` and `v`; every other inherited
    /// adjacency becomes red.
    pub fn contract(&mut self, u: VertexId, v: VertexId) -> Result<Contraction> {
        if u == v {
            return Err(Error::SelfContraction(u));
        }
        self.slot(u)?;
        self.slot(v)?;
        let su = self.slots[u].take().unwrap();
        let sv = self.slots[v].take().unwrap();
        let w = self.slots.len();
        let (uu, vv) = (u as u32, v as u32);

        let mut adj: FxHashMap<u32, Colour> =
            FxHashMap::with_capacity_and_hasher(su.adj.len().max(sv.adj.len()), Default::default());
        for (&x, &c) in &su.adj {
            if x == vv {
                continue;
            }
            let merged = match (c, sv.adj.get(&x)) {
                (Colour::Black, Some(Colour::Black)) => Colour::Black,
                _ => Colour::Red,
            };
            adj.insert(x, merged);
        }
        for &x in sv.adj.keys() {
            if x != uu {
                adj.entry(x).or_insert(Colour::Red);
            }
        }

        let mut touched_max = 0;
        let mut red_degree = 0;
        for (&x, &c) in &adj {
            let slot = self.slots[x as usize].as_mut().unwrap();
            for gone in [uu, vv] {
                if slot.adj.remove(&gone) == Some(Colour::Red) {
                    slot.red_degree -= 1;
                }
            }
            slot.adj.insert(w as u32, c);
            if c == Colour::Red {
                slot.red_degree += 1;
                red_degree += 1;
            }
            touched_max = touched_max.max(slot.red_degree);
        }
        touched_max = touched_max.max(red_degree);

        let (mut big, small) = if su.origin.len() >= sv.origin.len() {
            (su.origin, sv.origin)
        } else {
            (sv.origin, su.origin)
        };
        big.extend(small);
        self.slots.push(Some(Slot {
            adj,
            red_degree,
            origin: big,
        }));
        self.alive -= 1;
        Ok(Contraction {
            merged: w,
            touched_max_red: touched_max,
        })
    }

    /// Partitions `xs` by their trace on `ys`.
    ///
    /// The trace of `x` is the pair (black neighbours in `ys`, red neighbours in
    /// `ys`); on a trigraph without red edges towards `ys` this is just
    /// `N(x) ∩ ys`.
    pub fn neighbourhood_classes(
        &self,
        xs: &[VertexId],
        ys: &[VertexId],
    ) -> Result<NeighbourhoodClassification> {
        for &v in xs.iter().chain(ys) {
            self.slot(v)?;
        }
        let mut ys_sorted = ys.to_vec();
        ys_sorted.sort_unstable();
        ys_sorted.dedup();
        let members: FxHashSet<u32> = ys_sorted.iter().map(|&y| y as u32).collect();
        let mut classes: BTreeMap<Trace, Vec<VertexId>> = BTreeMap::new();
        let mut seen = FxHashSet::default();
        for &x in xs {
            if !seen.insert(x) {
                continue;
            }
            let trace = self.trace(x, &ys_sorted, &members);
            classes.entry(trace).or_default().push(x);
        }
        Ok(NeighbourhoodClassification {
            classes: classes
                .into_iter()
                .map(|(trace, mut members)| {
                    members.sort_unstable();
                    NeighbourhoodClass { trace, members }
                })
                .collect(),
        })
    }

    fn trace(&self, x: VertexId, ys_sorted: &[VertexId], members: &FxHashSet<u32>) -> Trace {
        let slot = self.slots[x].as_ref().unwrap();
        let mut trace = Trace::default();
        if ys_sorted.len() <= slot.adj.len() {
            for &y in ys_sorted {
                match slot.adj.get(&(y as u32)) {
                    Some(Colour::Black) => trace.black.push(y),
                    Some(Colour::Red) => trace.red.push(y),
                    None => {}
                }
            }
        } else {
            for (&w, &c) in &slot.adj {
                if members.contains(&w) {
                    match c {
                        Colour::Black => trace.black.push(w as VertexId),
                        Colour::Red => trace.red.push(w as VertexId),
                    }
                }
            }
            trace.black.sort_unstable();
            trace.red.sort_unstable();
        }
        trace
    }
}

/// Black and red neighbours of a vertex inside a reference set.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Trace {
    pub black: Vec<VertexId>,
    pub red: Vec<VertexId>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.black.len() + self.red.len()
    }

    pub fn is_empty(&self) -> bool {
        self.black.is_empty() && self.red.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighbourhoodClass {
    pub trace: Trace,
    pub members: Vec<VertexId>,
}

/// Partition of a vertex set by trace, classes ordered by trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighbourhoodClassification {
    pub classes: Vec<NeighbourhoodClass>,
}

impl NeighbourhoodClassification {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn traces(&self) -> impl Iterator<Item = &Trace> {
        self.classes.iter().map(|c| &c.trace)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn contracting_k2_leaves_isolated_vertex() {
        let mut t = Trigraph::from_graph(&Graph::from_edges(2, [(0, 1)]).unwrap());
        let c = t.contract(0, 1).unwrap();
        assert_eq!(c.merged, 2);
        assert_eq!(t.len(), 1);
        assert_eq!(t.edge_count(), 0);
        assert_eq!(t.max_red_degree(), 0);
    }

    #[test]
    fn twins_in_p3_stay_black() {
        let mut t = Trigraph::from_graph(&path(3));
        let w = t.contract(0, 2).unwrap().merged;
        assert_eq!(t.black_edges(), vec![(1, w)]);
        assert!(t.red_edges().is_empty());
    }

    #[test]
    fn non_twins_in_p3_become_red() {
        let mut t = Trigraph::from_graph(&path(3));
        let c = t.contract(0, 1).unwrap();
        assert_eq!(t.red_edges(), vec![(2, c.merged)]);
        assert!(t.black_edges().is_empty());
        assert_eq!(t.max_red_degree(), 1);
        assert_eq!(c.touched_max_red, 1);
        assert_eq!(t.origin(c.merged), vec![0, 1]);
    }

    #[test]
    fn contract_rejects_bad_ids() {
        let mut t = Trigraph::from_graph(&path(3));
        assert_eq!(t.contract(1, 1), Err(Error::SelfContraction(1)));
        assert_eq!(t.contract(0, 7), Err(Error::UnknownVertex(7)));
        t.contract(0, 1).unwrap();
        assert_eq!(t.contract(0, 2), Err(Error::UnknownVertex(0)));
    }

    #[test]
    fn red_is_sticky() {
        // 0 -red- 2, 1 -black- 2: contracting 0,1 keeps 2 red.
        let mut t = Trigraph::from_edges(3, [(1, 2)], [(0, 2)]).unwrap();
        let w = t.contract(0, 1).unwrap().merged;
        assert_eq!(t.edge(w, 2), Some(Colour::Red));
        let mut t = Trigraph::from_edges(4, [(0, 2), (1, 2), (0, 3)], [(1, 3)]).unwrap();
        let w = t.contract(0, 1).unwrap().merged;
        assert_eq!(t.edge(w, 2), Some(Colour::Black));
        assert_eq!(t.edge(w, 3), Some(Colour::Red));
    }

    #[test]
    fn from_edges_rejects_colour_conflict() {
        assert_eq!(
            Trigraph::from_edges(2, [(0, 1)], [(1, 0)]).unwrap_err(),
            Error::ColourConflict(1, 0)
        );
    }

    #[test]
    fn classes_with_empty_reference_set() {
        let t = Trigraph::from_graph(&path(4));
        let c = t.neighbourhood_classes(&[0, 1, 2, 3], &[]).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.classes[0].members, vec![0, 1, 2, 3]);
    }

    #[test]
    fn classes_of_triangle_on_itself() {
        let k3 = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let t = Trigraph::from_graph(&k3);
        let c = t.neighbourhood_classes(&[0, 1, 2], &[0, 1, 2]).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c.traces().all(|tr| tr.len() == 2));
    }

    #[test]
    fn classes_separate_red_from_black() {
        let t = Trigraph::from_edges(4, [(0, 3)], [(1, 3)]).unwrap();
        let c = t.neighbourhood_classes(&[0, 1, 2], &[3]).unwrap();
        assert_eq!(c.len(), 3);
    }
}
