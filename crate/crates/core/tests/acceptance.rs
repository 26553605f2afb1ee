//! Acceptance checks. Runs without the libtest harness and prints one
//! `PASS`/`FAIL` line per criterion; exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;

use tww::bipartite::{self, lower_bound, ub_bound, ub_sequence};
use tww::branchdec::BranchDecomposition;
use tww::embed::{bfs_layering, cycle_inside, random_planar_triangulation};
use tww::exact::{exact_twinwidth, exhaustive_twinwidth, ExactOptions};
use tww::generators::{gnp, partial_ktree, rng};
use tww::planar::planar_contraction_sequence;
use tww::spherecut::{bw_bound, bw_contraction_sequence, column_sweep, diagonal_grid, h, outerplanar_instance};
use tww::spherecut::{tight_example, verify_noose_bound};
use tww::treewidth::tw_sequence;
use tww::{replay_graph, ContractionSequence, Graph, Step};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("exact solver agrees with exhaustive search", exact_vs_exhaustive),
        ("treewidth construction within 3*2^(k-1)", treewidth_bound),
        ("noose class bound 4k-4 is tight and holds", noose_classes),
        ("branchwidth construction within max(4k, ceil(9k/2)-3)", branchwidth_bound),
        ("planar construction within 183", planar_bound),
        ("universal bipartite upper bound", bipartite_upper),
        ("universal bipartite lower bound consistency", bipartite_sandwich),
        ("verifier agrees with matrix replay under mutation", verifier_fuzz),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let secs = start.elapsed().as_secs_f64();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} {} {name}: {} [{secs:.1}s]", i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

/// Graph on `n ≤ 7` vertices from a bitmask over pairs `(i, j)`, `i < j`.
fn graph_from_mask(n: usize, mask: u32) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if mask >> bit & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out
}

/// One representative per isomorphism class: the smallest mask over all
/// relabellings.
fn non_isomorphic(n: usize) -> Vec<Graph> {
    let pairs = n * n.saturating_sub(1) / 2;
    let mut index = vec![vec![0usize; n]; n];
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            index[i][j] = bit;
            index[j][i] = bit;
            bit += 1;
        }
    }
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    for mask in 0u32..1 << pairs {
        let mut canon = u32::MAX;
        for p in &perms {
            let mut m = 0u32;
            let mut bit = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if mask >> bit & 1 == 1 {
                        m |= 1 << index[p[i]][p[j]];
                    }
                    bit += 1;
                }
            }
            canon = canon.min(m);
        }
        seen.insert(canon);
    }
    seen.into_iter().map(|m| graph_from_mask(n, m)).collect()
}

fn exact_vs_exhaustive() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut per_size = Vec::new();
    let mut mismatches = Vec::new();
    let mut check = |g: &Graph, label: String| {
        let exact = exact_twinwidth(g, ExactOptions::default()).unwrap();
        let truth = exhaustive_twinwidth(g).unwrap();
        if exact.width() != Some(truth) {
            mismatches.push(format!("{label}: exact {:?} vs {truth}", exact.width()));
        }
        if let tww::exact::ExactOutcome::Solved { witness, width } = &exact {
            let r = replay_graph(g, witness).unwrap();
            if r.width != *width || !r.is_complete() {
                mismatches.push(format!("{label}: witness replays to {}", r.width));
            }
        }
    };
    for n in 1..=6 {
        let classes = non_isomorphic(n);
        per_size.push(classes.len());
        for (i, g) in classes.iter().enumerate() {
            check(g, format!("n={n} #{i}"));
            checked += 1;
        }
    }
    for seed in 0..200 {
        let p = 0.2 + 0.6 * (seed as f64 / 200.0);
        let g = gnp(7, p, 10_000 + seed);
        check(&g, format!("n=7 seed={seed}"));
        checked += 1;
    }
    // 1, 2, 4, 11, 34, 156 graphs on 1..=6 vertices
    let counts_ok = per_size == [1, 2, 4, 11, 34, 156];
    let fast = start.elapsed() < Duration::from_secs(600);
    outcome(
        mismatches.is_empty() && counts_ok && fast,
        format!(
            "{checked} graphs, classes per size {per_size:?}, {} mismatches{}",
            mismatches.len(),
            mismatches.first().map(|m| format!(" (first: {m})")).unwrap_or_default()
        ),
    )
}

fn treewidth_bound() -> Outcome {
    let mut worst = [0usize; 5];
    let mut failures = Vec::new();
    let mut instances = 0;
    for k in 1..=4usize {
        let bound = 3 << (k - 1);
        for seed in 0..50u64 {
            let n = 20 + (seed as usize * 37) % 181;
            let keep = 0.5 + 0.5 * ((seed % 5) as f64 / 4.0);
            let (g, td) = partial_ktree(n, k, keep, seed);
            let (seq, _) = tw_sequence(&g, Some(&td)).unwrap();
            let r = replay_graph(&g, &seq).unwrap();
            instances += 1;
            worst[k] = worst[k].max(r.width);
            if !r.is_complete() || r.width > bound {
                failures.push(format!("k={k} seed={seed} width {}", r.width));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{instances} partial k-trees, max width per k=1..4 {:?} vs 3/6/12/24, {} violations",
            &worst[1..],
            failures.len()
        ),
    )
}

fn noose_classes() -> Outcome {
    let mut tight = Vec::new();
    let mut ok = true;
    for k in 3..=10 {
        let (g, noose, inside, _) = tight_example(k).unwrap();
        let cert = verify_noose_bound(&g, &noose, &inside).unwrap();
        ok &= cert.class_count as isize == h(k);
        tight.push(cert.class_count);
    }
    let mut r = rng(55);
    let mut worst_ratio = 0.0f64;
    let mut violations = 0;
    for i in 0..500u64 {
        let n = r.gen_range(8..80);
        let (g, rs) = random_planar_triangulation(n, 1_000 + i);
        let l = bfs_layering(&rs);
        let non_tree: Vec<(usize, usize)> = g
            .edges()
            .filter(|&(u, v)| l.parent[u] != Some(v) && l.parent[v] != Some(u))
            .collect();
        let (u, v) = non_tree[r.gen_range(0..non_tree.len())];
        let cyc = l.fundamental_cycle(u, v);
        let inside = cycle_inside(&rs, &cyc).unwrap();
        let cert = verify_noose_bound(&g, &cyc, &inside).unwrap();
        if cert.class_count > cert.bound {
            violations += 1;
        }
        worst_ratio = worst_ratio.max(cert.class_count as f64 / cert.bound.max(1) as f64);
    }
    ok &= violations == 0;
    outcome(
        ok,
        format!(
            "tight counts for k=3..10 {tight:?}; 500 random nooses, {violations} over bound, max count/bound {worst_ratio:.2}"
        ),
    )
}

fn branchwidth_bound() -> Outcome {
    let mut cases: Vec<(String, Graph, BranchDecomposition)> = Vec::new();
    for seed in 0..20 {
        let (g, bd) = outerplanar_instance(10 + 5 * seed as usize, seed);
        cases.push((format!("polygon seed {seed}"), g, bd));
    }
    for rows in 2..=6 {
        for cols in [3, 5, 8] {
            let g = diagonal_grid(rows, cols);
            let bd = column_sweep(&g, cols);
            cases.push((format!("diagonal grid {rows}x{cols}"), g, bd));
        }
    }
    let mut seen_k = BTreeSet::new();
    let mut failures = Vec::new();
    let mut worst_slack = isize::MAX;
    for (label, g, bd) in &cases {
        let rep = bd.validate(g);
        if !rep.is_ok() || !(2..=6).contains(&rep.width) {
            continue;
        }
        let k = rep.width;
        seen_k.insert(k);
        let (seq, audit) = bw_contraction_sequence(g, bd).unwrap();
        let r = replay_graph(g, &seq).unwrap();
        worst_slack = worst_slack.min(bw_bound(k) as isize - r.width as isize);
        if r.width > bw_bound(k) || !r.is_complete() {
            failures.push(format!("{label}: width {} > {}", r.width, bw_bound(k)));
        }
        if !audit.violations.is_empty() {
            failures.push(format!("{label}: {}", audit.violations[0]));
        }
    }
    let covered = seen_k == (2..=6).collect();
    outcome(
        failures.is_empty() && covered,
        format!(
            "{} instances, widths covered {seen_k:?}, min slack {worst_slack}, {} failures{}",
            cases.len(),
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    )
}

fn planar_bound() -> Outcome {
    let mut ok = true;
    let mut summary = Vec::new();
    for n in [100usize, 500, 2000] {
        let mut worst = 0;
        let mut slowest = Duration::ZERO;
        for seed in 0..20 {
            let (g, rs) = random_planar_triangulation(n, seed);
            let start = Instant::now();
            let (seq, _) = planar_contraction_sequence(&g, &rs).unwrap();
            let r = replay_graph(&g, &seq).unwrap();
            let took = start.elapsed();
            slowest = slowest.max(took);
            worst = worst.max(r.width);
            ok &= r.width <= 183 && r.is_complete();
            if n == 2000 {
                ok &= took <= Duration::from_secs(60);
            }
        }
        summary.push(format!("n={n}: max width {worst}, slowest {:.2}s", slowest.as_secs_f64()));
    }
    outcome(ok, summary.join("; "))
}

fn bipartite_upper() -> Outcome {
    let mut failures = Vec::new();
    let mut runs = 0;
    for n in 1..=12 {
        let g = bipartite::build(n).unwrap();
        for k in 1..=n {
            let (seq, _) = ub_sequence(n, Some(k)).unwrap();
            let r = replay_graph(&g, &seq).unwrap();
            runs += 1;
            if r.width > ub_bound(n, k) || !r.is_complete() {
                failures.push(format!("n={n} k={k}: {} > {}", r.width, ub_bound(n, k)));
            }
        }
    }
    let mut widths = Vec::new();
    for n in 1..=20usize {
        let w = default_width(n);
        let log = usize::BITS as usize - 1 - n.leading_zeros() as usize;
        if w > n - log + 3 {
            failures.push(format!("n={n} default k: {w} > {}", n - log + 3));
        }
        widths.push(w);
    }
    outcome(
        failures.is_empty(),
        format!(
            "{runs} (n, k) pairs for n <= 12; default-k widths for n=1..20 {widths:?}; {} failures",
            failures.len()
        ),
    )
}

/// Replayed width of the default-k sequence for `B(n)`, computed once.
fn default_width(n: usize) -> usize {
    static WIDTHS: OnceLock<Vec<usize>> = OnceLock::new();
    WIDTHS.get_or_init(|| {
        (0..=20)
            .map(|n| {
                if n == 0 {
                    return 0;
                }
                let g = bipartite::build(n).unwrap();
                let (seq, _) = ub_sequence(n, None).unwrap();
                let r = replay_graph(&g, &seq).unwrap();
                assert!(r.is_complete());
                r.width
            })
            .collect()
    })[n]
}

fn bipartite_sandwich() -> Outcome {
    let b2 = bipartite::build(2).unwrap();
    let exact = exact_twinwidth(&b2, ExactOptions::default()).unwrap().width().unwrap();
    let mut ok = lower_bound(2) <= exact;
    let mut pairs = Vec::new();
    for n in 1..=20 {
        let lb = lower_bound(n);
        let ub = default_width(n);
        ok &= lb <= ub;
        pairs.push(format!("{n}:{lb}..{ub}"));
    }
    outcome(
        ok,
        format!("B(2) exact {exact} >= lower bound {}; lower..upper {}", lower_bound(2), pairs.join(" ")),
    )
}

/// Adjacency-matrix replay that shares nothing with the library: cells are
/// 0 (none), 1 (black), 2 (red).
fn matrix_replay(g: &Graph, seq: &ContractionSequence) -> Option<(usize, bool)> {
    let n = g.n();
    if seq.n != n {
        return None;
    }
    let total = n + seq.steps.len();
    let mut cell = vec![vec![0u8; total]; total];
    for (u, v) in g.edges() {
        cell[u][v] = 1;
        cell[v][u] = 1;
    }
    let mut alive = vec![false; total];
    for a in alive.iter_mut().take(n) {
        *a = true;
    }
    let mut width = 0;
    for (i, s) in seq.steps.iter().enumerate() {
        let fresh = n + i;
        if s.u == s.v || s.w != fresh || s.u >= total || s.v >= total || !alive[s.u] || !alive[s.v] {
            return None;
        }
        alive[s.u] = false;
        alive[s.v] = false;
        for x in 0..total {
            if !alive[x] {
                continue;
            }
            let (a, b) = (cell[s.u][x], cell[s.v][x]);
            let c = match (a, b) {
                (0, 0) => 0,
                (1, 1) => 1,
                _ => 2,
            };
            cell[fresh][x] = c;
            cell[x][fresh] = c;
        }
        alive[fresh] = true;
        let live: Vec<usize> = (0..total).filter(|&x| alive[x]).collect();
        let red = live
            .iter()
            .map(|&x| live.iter().filter(|&&y| cell[x][y] == 2).count())
            .max()
            .unwrap_or(0);
        width = width.max(red);
    }
    let remaining = alive.iter().filter(|&&a| a).count();
    Some((width, remaining <= 1))
}

fn random_sequence(n: usize, r: &mut impl Rng) -> ContractionSequence {
    let mut live: Vec<usize> = (0..n).collect();
    let mut pairs = Vec::new();
    let mut next = n;
    while live.len() > 1 {
        live.shuffle(r);
        let u = live.pop().unwrap();
        let v = live.pop().unwrap();
        pairs.push((u, v));
        live.push(next);
        next += 1;
    }
    ContractionSequence::from_pairs(n, pairs)
}

fn verifier_fuzz() -> Outcome {
    let mut r = rng(8);
    let mut disagreements = Vec::new();
    let (mut rejected, mut rescored) = (0, 0);
    let total = 100_000;
    for i in 0..total {
        let n = r.gen_range(2..10);
        let g = gnp(n, r.gen_range(0.1..0.9), i as u64);
        let mut seq = random_sequence(n, &mut r);
        match r.gen_range(0..3) {
            0 if seq.steps.len() >= 2 => {
                let a = r.gen_range(0..seq.steps.len());
                let b = r.gen_range(0..seq.steps.len());
                seq.steps.swap(a, b);
            }
            1 => {
                let a = r.gen_range(0..seq.steps.len());
                let id = r.gen_range(0..n + seq.steps.len() + 1);
                let s: &mut Step = &mut seq.steps[a];
                match r.gen_range(0..3) {
                    0 => s.u = id,
                    1 => s.v = id,
                    _ => s.w = id,
                }
            }
            _ => {
                let keep = r.gen_range(0..=seq.steps.len());
                seq.steps.truncate(keep);
            }
        }
        let lib = replay_graph(&g, &seq).ok().map(|rep| (rep.width, rep.is_complete()));
        let oracle = matrix_replay(&g, &seq);
        match oracle {
            None => rejected += 1,
            Some(_) => rescored += 1,
        }
        if lib != oracle && disagreements.len() < 5 {
            disagreements.push(format!("case {i}: library {lib:?}, oracle {oracle:?}"));
        }
    }
    outcome(
        disagreements.is_empty(),
        format!(
            "{total} mutated sequences, {rejected} rejected, {rescored} re-scored, {} disagreements{}",
            disagreements.len(),
            disagreements.first().map(|d| format!(" (first: {d})")).unwrap_or_default()
        ),
    )
}
