//! Instance families and construction strategies shared by `gen` and `bench`.

use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Result};
use tww::bipartite;
use tww::branchdec::BranchDecomposition;
use tww::embed::{random_planar_triangulation, RotationSystem};
use tww::exact::{exact_twinwidth, ExactOptions};
use tww::generators;
use tww::planar::{planar_contraction_sequence, PLANAR_BOUND};
use tww::spherecut::{bw_bound, bw_contraction_sequence, column_sweep, diagonal_grid, outerplanar_instance};
use tww::treedec::TreeDecomposition;
use tww::treewidth::{
    from_elimination_order, heuristic_order, order_from_tree_decomposition, tw_bound, tw_contraction_sequence, Heuristic,
};
use tww::{ContractionSequence, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Path,
    Cycle,
    Star,
    Grid,
    DiagonalGrid,
    Gnp,
    Ktree,
    PlanarTri,
    Outerplanar,
    Bipartite,
}

pub const FAMILIES: &[(&str, Family)] = &[
    ("path", Family::Path),
    ("cycle", Family::Cycle),
    ("star", Family::Star),
    ("grid", Family::Grid),
    ("diagonal-grid", Family::DiagonalGrid),
    ("gnp", Family::Gnp),
    ("ktree", Family::Ktree),
    ("planar-tri", Family::PlanarTri),
    ("outerplanar", Family::Outerplanar),
    ("bipartite", Family::Bipartite),
];

impl FromStr for Family {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match FAMILIES.iter().find(|(name, _)| *name == s) {
            Some(&(_, f)) => Ok(f),
            None => {
                let known: Vec<&str> = FAMILIES.iter().map(|(n, _)| *n).collect();
                bail!("unknown family '{s}'; known families: {}", known.join(", "))
            }
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = FAMILIES.iter().find(|(_, x)| x == self).map(|(n, _)| *n).unwrap_or("?");
        f.write_str(name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Strategy {
    Exact,
    Treewidth,
    Spherecut,
    Planar183,
    BipartiteUb,
}

pub const STRATEGIES: &[(&str, Strategy)] = &[
    ("exact", Strategy::Exact),
    ("treewidth-seq", Strategy::Treewidth),
    ("spherecut-seq", Strategy::Spherecut),
    ("planar183", Strategy::Planar183),
    ("bipartite-ub", Strategy::BipartiteUb),
];

impl FromStr for Strategy {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match STRATEGIES.iter().find(|(name, _)| *name == s) {
            Some(&(_, x)) => Ok(x),
            None => {
                let known: Vec<&str> = STRATEGIES.iter().map(|(n, _)| *n).collect();
                bail!("unknown strategy '{s}'; known strategies: {}", known.join(", "))
            }
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = STRATEGIES.iter().find(|(_, x)| x == self).map(|(n, _)| *n).unwrap_or("?");
        f.write_str(name)
    }
}

/// Family parameters. `n` is the size; `k` is the treewidth for `ktree`, the
/// number of rows for the grids and the set size for `bipartite`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub seed: u64,
}

pub struct Instance {
    pub family: Family,
    pub params: Params,
    pub graph: Graph,
    pub td: Option<TreeDecomposition>,
    pub bd: Option<BranchDecomposition>,
    pub embedding: Option<RotationSystem>,
}

pub fn generate(family: Family, params: Params) -> Result<Instance> {
    let Params { n, k, p, seed } = params;
    let mut inst = Instance {
        family,
        params,
        graph: Graph::new(0),
        td: None,
        bd: None,
        embedding: None,
    };
    match family {
        Family::Path => inst.graph = generators::path(n),
        Family::Cycle => {
            if n < 3 {
                bail!("a cycle needs n >= 3");
            }
            inst.graph = generators::cycle(n);
        }
        Family::Star => inst.graph = generators::star(n.saturating_sub(1)),
        Family::Grid => inst.graph = generators::grid(k.max(1), n),
        Family::DiagonalGrid => {
            let rows = k.max(2);
            if n < 2 {
                bail!("a diagonal grid needs at least 2 columns");
            }
            inst.graph = diagonal_grid(rows, n);
            inst.bd = Some(column_sweep(&inst.graph, n));
        }
        Family::Gnp => inst.graph = generators::gnp(n, p, seed),
        Family::Ktree => {
            if n <= k {
                bail!("a partial {k}-tree needs n > {k}");
            }
            let (g, td) = generators::partial_ktree(n, k, p, seed);
            inst.graph = g;
            inst.td = Some(td);
        }
        Family::PlanarTri => {
            if n < 3 {
                bail!("a triangulation needs n >= 3");
            }
            let (g, rs) = random_planar_triangulation(n, seed);
            inst.graph = g;
            inst.embedding = Some(rs);
        }
        Family::Outerplanar => {
            if n < 3 {
                bail!("a polygon needs n >= 3");
            }
            let (g, bd) = outerplanar_instance(n, seed);
            inst.graph = g;
            inst.bd = Some(bd);
        }
        Family::Bipartite => inst.graph = bipartite::build(n)?,
    }
    Ok(inst)
}

/// Whether `strategy` has the input it needs on `family`.
pub fn applicable(family: Family, strategy: Strategy) -> bool {
    match strategy {
        Strategy::Planar183 => family == Family::PlanarTri,
        Strategy::BipartiteUb => family == Family::Bipartite,
        _ => true,
    }
}

/// Output of one construction, before independent verification.
pub struct Built {
    pub sequence: ContractionSequence,
    /// The bound the construction promises, if any.
    pub bound: Option<usize>,
}

pub fn build(inst: &Instance, strategy: Strategy) -> Result<Built> {
    let g = &inst.graph;
    match strategy {
        Strategy::Exact => {
            let out = exact_twinwidth(g, ExactOptions::default())?;
            match out {
                tww::exact::ExactOutcome::Solved { width, witness } => Ok(Built {
                    sequence: witness,
                    bound: Some(width),
                }),
                tww::exact::ExactOutcome::ExceedsBudget { budget } => bail!("twin-width exceeds {budget}"),
            }
        }
        Strategy::Treewidth => {
            let order = match &inst.td {
                Some(td) => order_from_tree_decomposition(g, td)?,
                None => heuristic_order(g, Heuristic::MinFill),
            };
            let ctd = from_elimination_order(g, &order)?;
            let (seq, _) = tw_contraction_sequence(g, &ctd)?;
            let tw = ctd.width();
            Ok(Built {
                sequence: seq,
                bound: Some(tw_bound(tw)),
            })
        }
        Strategy::Spherecut => {
            let bd = match &inst.bd {
                Some(bd) => bd.clone(),
                None => heuristic_bd(g),
            };
            let (seq, rep) = bw_contraction_sequence(g, &bd)?;
            Ok(Built {
                sequence: seq,
                bound: Some(bw_bound(rep.k)),
            })
        }
        Strategy::Planar183 => {
            let Some(rs) = &inst.embedding else {
                bail!("planar183 needs an embedded instance (family planar-tri)");
            };
            let (seq, _) = planar_contraction_sequence(g, rs)?;
            Ok(Built {
                sequence: seq,
                bound: Some(PLANAR_BOUND),
            })
        }
        Strategy::BipartiteUb => {
            if inst.family != Family::Bipartite {
                bail!("bipartite-ub needs the bipartite family");
            }
            let (seq, rep) = bipartite::ub_sequence(inst.params.n, None)?;
            Ok(Built {
                sequence: seq,
                bound: Some(rep.bound),
            })
        }
    }
}

/// Branch decomposition from a min-fill tree decomposition.
pub fn heuristic_bd(g: &Graph) -> BranchDecomposition {
    let order = heuristic_order(g, Heuristic::MinFill);
    let td = from_elimination_order(g, &order)
        .expect("heuristic orders are permutations")
        .to_tree_decomposition();
    BranchDecomposition::from_tree_decomposition(g, &td)
}
