//! Contraction sequences, their replay, and the recording builder that the
//! constructors use to emit them.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::trigraph::{Trigraph, VertexId};

/// One contraction: `u` and `v` are merged into the fresh vertex `w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub u: VertexId,
    pub v: VertexId,
    pub w: VertexId,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionSequence {
    /// Number of vertices of the graph the sequence is for.
    pub n: usize,
    pub claimed_width: Option<usize>,
    pub steps: Vec<Step>,
}

impl ContractionSequence {
    pub fn new(n: usize) -> Self {
        ContractionSequence {
            n,
            claimed_width: None,
            steps: Vec::new(),
        }
    }

    /// Builds a sequence from merge pairs, assigning fresh ids `n, n+1, ...`.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (VertexId, VertexId)>) -> Self {
        let steps = pairs
            .into_iter()
            .enumerate()
            .map(|(i, (u, v))| Step { u, v, w: n + i })
            .collect();
        ContractionSequence {
            n,
            claimed_width: None,
            steps,
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sequence serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::parse(e.line(), e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReplayErrorKind {
    #[error("sequence is for {expected} vertices but the graph has {actual}")]
    SizeMismatch { expected: usize, actual: usize },
    #[error("vertex {0} is unknown or already contracted")]
    DeadVertex(VertexId),
    #[error("vertex {0} is contracted with itself")]
    SelfContraction(VertexId),
    #[error("fresh id {found} does not match the next free id {expected}")]
    FreshId { expected: VertexId, found: VertexId },
}

/// A replay failure naming the offending step (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("step {step}: {kind}")]
pub struct ReplayError {
    pub step: usize,
    pub kind: ReplayErrorKind,
}

#[derive(Clone, Debug)]
pub struct Replay {
    pub trigraph: Trigraph,
    /// Maximum red degree over the trigraphs produced by each step.
    pub width: usize,
}

impl Replay {
    /// True if the replay ended in a single vertex (or the graph was empty).
    pub fn is_complete(&self) -> bool {
        self.trigraph.len() <= 1
    }
}

/// Replays `seq` on a copy of `start`.
pub fn replay(start: &Trigraph, seq: &ContractionSequence) -> std::result::Result<Replay, ReplayError> {
    if seq.n != start.original_len() {
        return Err(ReplayError {
            step: 0,
            kind: ReplayErrorKind::SizeMismatch {
                expected: seq.n,
                actual: start.original_len(),
            },
        });
    }
    let mut t = start.clone();
    let mut width = 0;
    for (i, s) in seq.steps.iter().enumerate() {
        let fail = |kind| ReplayError { step: i, kind };
        if s.u == s.v {
            return Err(fail(ReplayErrorKind::SelfContraction(s.u)));
        }
        for x in [s.u, s.v] {
            if !t.contains(x) {
                return Err(fail(ReplayErrorKind::DeadVertex(x)));
            }
        }
        if s.w != t.next_id() {
            return Err(fail(ReplayErrorKind::FreshId {
                expected: t.next_id(),
                found: s.w,
            }));
        }
        let c = t.contract(s.u, s.v).expect("ids checked above");
        width = if i == 0 {
            t.max_red_degree()
        } else {
            width.max(c.touched_max_red)
        };
    }
    Ok(Replay { trigraph: t, width })
}

pub fn replay_graph(g: &Graph, seq: &ContractionSequence) -> std::result::Result<Replay, ReplayError> {
    replay(&Trigraph::from_graph(g), seq)
}

/// Summary of checking a sequence against a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub n: usize,
    pub steps: usize,
    pub width: usize,
    pub complete: bool,
    pub claimed_width: Option<usize>,
    /// Complete and within the claimed width (if any).
    pub valid: bool,
}

pub fn verify(g: &Graph, seq: &ContractionSequence) -> std::result::Result<Verdict, ReplayError> {
    let r = replay_graph(g, seq)?;
    let complete = r.is_complete();
    let within = seq.claimed_width.is_none_or(|c| r.width <= c);
    Ok(Verdict {
        n: g.n(),
        steps: seq.steps.len(),
        width: r.width,
        complete,
        claimed_width: seq.claimed_width,
        valid: complete && within,
    })
}

/// Records contractions on a live trigraph while tracking the width reached.
#[derive(Clone, Debug)]
pub struct Contractor {
    trigraph: Trigraph,
    steps: Vec<Step>,
    width: usize,
    n: usize,
}

impl Contractor {
    pub fn new(g: &Graph) -> Self {
        Contractor {
            trigraph: Trigraph::from_graph(g),
            steps: Vec::new(),
            width: 0,
            n: g.n(),
        }
    }

    pub fn trigraph(&self) -> &Trigraph {
        &self.trigraph
    }

    /// Width reached so far.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn contract(&mut self, u: VertexId, v: VertexId) -> Result<VertexId> {
        let w = self.trigraph.next_id();
        let c = self.trigraph.contract(u, v)?;
        self.width = self.width.max(c.touched_max_red);
        self.steps.push(Step { u, v, w });
        Ok(c.merged)
    }

    /// Contracts `members` into one vertex, folding left to right. Returns the
    /// surviving id, or `None` for an empty slice.
    pub fn fold(&mut self, members: &[VertexId]) -> Result<Option<VertexId>> {
        let Some((&first, rest)) = members.split_first() else {
            return Ok(None);
        };
        let mut acc = first;
        for &x in rest {
            acc = self.contract(acc, x)?;
        }
        Ok(Some(acc))
    }

    /// Contracts every live vertex into one, in increasing id order.
    pub fn collapse_all(&mut self) -> Result<Option<VertexId>> {
        let all: Vec<VertexId> = self.trigraph.vertices().collect();
        self.fold(&all)
    }

    pub fn finish(self) -> (ContractionSequence, usize) {
        let seq = ContractionSequence {
            n: self.n,
            claimed_width: Some(self.width),
            steps: self.steps,
        };
        (seq, self.width)
    }

    pub fn into_parts(self) -> (ContractionSequence, Trigraph, usize) {
        let seq = ContractionSequence {
            n: self.n,
            claimed_width: Some(self.width),
            steps: self.steps,
        };
        (seq, self.trigraph, self.width)
    }
}
