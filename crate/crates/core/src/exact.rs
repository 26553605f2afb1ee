//! Exact twin-width of small graphs.
//!
//! A trigraph reached from a graph by contractions is determined by the
//! partition of the original vertices into merged parts: two parts are joined
//! by a black edge iff every cross pair is adjacent, by a red edge iff some but
//! not all cross pairs are, and not at all otherwise. The search therefore runs
//! over partitions (at most Bell(n) states) with a memo of partitions already
//! shown to be dead ends for the current width.

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sequence::ContractionSequence;

pub const DEFAULT_CAP: usize = 10;
/// Hard limit imposed by the bitmask representation.
pub const MAX_CAP: usize = 32;
pub const EXHAUSTIVE_CAP: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactOptions {
    pub cap: usize,
    /// Stop once the twin-width is known to exceed this value.
    pub budget: Option<usize>,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            cap: DEFAULT_CAP,
            budget: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactOutcome {
    Solved {
        width: usize,
        witness: ContractionSequence,
    },
    /// No sequence of width at most `budget` exists.
    ExceedsBudget { budget: usize },
}

impl ExactOutcome {
    pub fn width(&self) -> Option<usize> {
        match self {
            ExactOutcome::Solved { width, .. } => Some(*width),
            ExactOutcome::ExceedsBudget { .. } => None,
        }
    }
}

#[derive(Clone, Copy)]
struct Part {
    mask: u32,
    /// Vertices adjacent to some member.
    any: u32,
    /// Vertices adjacent to every member.
    all: u32,
}

impl Part {
    fn merge(a: Part, b: Part) -> Part {
        Part {
            mask: a.mask | b.mask,
            any: a.any | b.any,
            all: a.all & b.all,
        }
    }

    fn red_to(&self, other: &Part) -> bool {
        self.any & other.mask != 0 && other.mask & !self.all != 0
    }
}

fn max_red(parts: &[Part]) -> usize {
    let mut best = 0;
    for (i, p) in parts.iter().enumerate() {
        let d = parts
            .iter()
            .enumerate()
            .filter(|&(j, q)| j != i && p.red_to(q))
            .count();
        best = best.max(d);
    }
    best
}

fn key(parts: &[Part]) -> Vec<u32> {
    let mut k: Vec<u32> = parts.iter().map(|p| p.mask).collect();
    k.sort_unstable();
    k
}

struct Search {
    dead: FxHashSet<Vec<u32>>,
    merges: Vec<(u32, u32)>,
}

impl Search {
    fn run(&mut self, parts: &[Part], d: usize) -> bool {
        if parts.len() <= 1 {
            return true;
        }
        let k = key(parts);
        if self.dead.contains(&k) {
            return false;
        }
        let mut candidates = Vec::new();
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                let next = merged(parts, i, j);
                let red = max_red(&next);
                if red <= d {
                    candidates.push((red, i, j, next));
                }
            }
        }
        candidates.sort_by_key(|c| (c.0, c.1, c.2));
        for (_, i, j, next) in candidates {
            self.merges.push((parts[i].mask, parts[j].mask));
            if self.run(&next, d) {
                return true;
            }
            self.merges.pop();
        }
        self.dead.insert(k);
        false
    }
}

fn merged(parts: &[Part], i: usize, j: usize) -> Vec<Part> {
    let mut next = Vec::with_capacity(parts.len() - 1);
    next.push(Part::merge(parts[i], parts[j]));
    next.extend(
        parts
            .iter()
            .enumerate()
            .filter(|&(t, _)| t != i && t != j)
            .map(|(_, p)| *p),
    );
    next
}

fn initial_parts(g: &Graph) -> Vec<Part> {
    (0..g.n())
        .map(|v| {
            let nb = g.neighbours(v).iter().fold(0u32, |m, &w| m | (1 << w));
            Part {
                mask: 1 << v,
                any: nb,
                all: nb,
            }
        })
        .collect()
}

fn witness(n: usize, merges: &[(u32, u32)]) -> ContractionSequence {
    let mut ids: Vec<(u32, usize)> = (0..n).map(|v| (1u32 << v, v)).collect();
    let mut pairs = Vec::with_capacity(merges.len());
    for (step, &(a, b)) in merges.iter().enumerate() {
        let ia = ids.iter().position(|&(m, _)| m == a).unwrap();
        let (_, ua) = ids.swap_remove(ia);
        let ib = ids.iter().position(|&(m, _)| m == b).unwrap();
        let (_, ub) = ids.swap_remove(ib);
        pairs.push((ua, ub));
        ids.push((a | b, n + step));
    }
    ContractionSequence::from_pairs(n, pairs)
}

/// Exact twin-width with a replayable witness.
pub fn exact_twinwidth(g: &Graph, opts: ExactOptions) -> Result<ExactOutcome> {
    let cap = opts.cap.min(MAX_CAP);
    if g.n() > cap {
        return Err(Error::CapExceeded { n: g.n(), cap });
    }
    let start = initial_parts(g);
    let mut d = 0;
    loop {
        if let Some(b) = opts.budget {
            if d > b {
                return Ok(ExactOutcome::ExceedsBudget { budget: b });
            }
        }
        let mut search = Search {
            dead: FxHashSet::default(),
            merges: Vec::new(),
        };
        if search.run(&start, d) {
            let mut witness = witness(g.n(), &search.merges);
            witness.claimed_width = Some(d);
            return Ok(ExactOutcome::Solved { width: d, witness });
        }
        d += 1;
    }
}

/// Twin-width by enumerating every contraction order, with no pruning and no
/// memo. Uses its own adjacency-matrix trigraph so it shares no code with
/// [`crate::trigraph::Trigraph`] or [`exact_twinwidth`].
pub fn exhaustive_twinwidth(g: &Graph) -> Result<usize> {
    if g.n() > EXHAUSTIVE_CAP {
        return Err(Error::CapExceeded {
            n: g.n(),
            cap: EXHAUSTIVE_CAP,
        });
    }
    let n = g.n();
    let mut cells = vec![vec![0u8; n]; n];
    for (u, v) in g.edges() {
        cells[u][v] = 1;
        cells[v][u] = 1;
    }
    let alive: Vec<usize> = (0..n).collect();
    Ok(enumerate(&cells, &alive))
}

// cell codes: 0 = none, 1 = black, 2 = red
fn enumerate(cells: &[Vec<u8>], alive: &[usize]) -> usize {
    if alive.len() <= 1 {
        return 0;
    }
    let mut best = usize::MAX;
    for a in 0..alive.len() {
        for b in a + 1..alive.len() {
            let (u, v) = (alive[a], alive[b]);
            let mut next = cells.to_vec();
            for &x in alive {
                if x == u || x == v {
                    continue;
                }
                let merged = match (cells[u][x], cells[v][x]) {
                    (0, 0) => 0,
                    (1, 1) => 1,
                    _ => 2,
                };
                next[u][x] = merged;
                next[x][u] = merged;
                next[v][x] = 0;
                next[x][v] = 0;
            }
            next[u][v] = 0;
            next[v][u] = 0;
            let rest: Vec<usize> = alive.iter().copied().filter(|&x| x != v).collect();
            let here = rest
                .iter()
                .map(|&x| rest.iter().filter(|&&y| next[x][y] == 2).count())
                .max()
                .unwrap_or(0);
            best = best.min(here.max(enumerate(&next, &rest)));
        }
    }
    best
}
