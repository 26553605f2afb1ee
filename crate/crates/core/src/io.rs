//! Graph and decomposition file formats: graph6, PACE 2017 `.gr`/`.td`, a
//! plain edge list and JSON.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::treedec::TreeDecomposition;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    /// First line `n m`, then one 0-indexed edge `u v` per line.
    EdgeList,
    Graph6,
    PaceGr,
    /// `{"n": .., "edges": [[u, v], ..]}`
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge-list" | "edgelist" | "el" => Ok(Format::EdgeList),
            "graph6" | "g6" => Ok(Format::Graph6),
            "pace" | "gr" | "pace-gr" => Ok(Format::PaceGr),
            "json" => Ok(Format::Json),
            _ => Err(Error::InvalidArgument(format!(
                "unknown graph format '{s}' (expected edge-list, graph6, gr or json)"
            ))),
        }
    }
}

/// A parsed graph together with non-fatal problems found on the way.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parsed {
    pub graph: Graph,
    pub warnings: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct JsonGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

/// Guesses the format from the content.
pub fn sniff(text: &str) -> Format {
    let t = text.trim_start();
    if t.starts_with('{') {
        return Format::Json;
    }
    if t.starts_with(">>graph6<<") {
        return Format::Graph6;
    }
    let first = t.lines().next().unwrap_or("").trim();
    if first.starts_with("p ") || first == "c" || first.starts_with("c ") {
        return Format::PaceGr;
    }
    let g6ish = !first.is_empty()
        && !first.contains(' ')
        && first.bytes().all(|b| (63..=126).contains(&b))
        && t.lines().filter(|l| !l.trim().is_empty()).count() == 1;
    if g6ish {
        Format::Graph6
    } else {
        Format::EdgeList
    }
}

pub fn parse_graph(text: &str, format: Option<Format>) -> Result<Parsed> {
    match format.unwrap_or_else(|| sniff(text)) {
        Format::EdgeList => parse_edge_list(text),
        Format::Graph6 => parse_graph6(text.trim()).map(|graph| Parsed {
            graph,
            warnings: Vec::new(),
        }),
        Format::PaceGr => parse_pace_gr(text),
        Format::Json => parse_json_graph(text),
    }
}

pub fn write_graph(g: &Graph, format: Format) -> String {
    match format {
        Format::EdgeList => write_edge_list(g),
        Format::Graph6 => format!("{}\n", write_graph6(g)),
        Format::PaceGr => write_pace_gr(g),
        Format::Json => write_json_graph(g),
    }
}

/// Collects edges, rejecting loops and out-of-range ids and deduplicating.
fn build(n: usize, edges: Vec<(usize, usize, usize)>) -> Result<Parsed> {
    let mut g = Graph::new(n);
    let mut warnings = Vec::new();
    for (line, u, v) in edges {
        if u >= n || v >= n {
            return Err(Error::parse(line, format!("edge ({u}, {v}) is out of range for n = {n}")));
        }
        if u == v {
            return Err(Error::parse(line, format!("loop at vertex {u}")));
        }
        if !g.add_edge(u, v) {
            let msg = format!("line {line}: duplicate edge ({u}, {v}) ignored");
            log::warn!("{msg}");
            warnings.push(msg);
        }
    }
    Ok(Parsed { graph: g, warnings })
}

fn numbers(line: &str, lineno: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::parse(lineno, format!("expected an integer, found '{t}'")))
        })
        .collect()
}

fn content_lines(text: &str, comment: char) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(move |(_, l)| !l.is_empty() && !l.starts_with(comment))
}

fn parse_edge_list(text: &str) -> Result<Parsed> {
    let mut lines = content_lines(text, '#');
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "missing 'n m' header"))?;
    let h = numbers(header, hl)?;
    let [n, m] = h[..] else {
        return Err(Error::parse(hl, "header must be 'n m'"));
    };
    let mut edges = Vec::with_capacity(m);
    for (ln, l) in lines {
        let xs = numbers(l, ln)?;
        let [u, v] = xs[..] else {
            return Err(Error::parse(ln, "edge line must be 'u v'"));
        };
        edges.push((ln, u, v));
    }
    if edges.len() != m {
        return Err(Error::parse(hl, format!("header announces {m} edges, found {}", edges.len())));
    }
    build(n, edges)
}

fn write_edge_list(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

fn parse_pace_gr(text: &str) -> Result<Parsed> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (ln, l) in content_lines(text, 'c') {
        if let Some(rest) = l.strip_prefix('p') {
            if header.is_some() {
                return Err(Error::parse(ln, "second problem line"));
            }
            let toks: Vec<&str> = rest.split_whitespace().collect();
            if toks.len() != 3 || toks[0] != "tw" {
                return Err(Error::parse(ln, "problem line must be 'p tw n m'"));
            }
            let n = numbers(toks[1], ln)?[0];
            let m = numbers(toks[2], ln)?[0];
            header = Some((n, m));
            continue;
        }
        if header.is_none() {
            return Err(Error::parse(ln, "edge before the problem line"));
        }
        let xs = numbers(l, ln)?;
        let [u, v] = xs[..] else {
            return Err(Error::parse(ln, "edge line must be 'u v'"));
        };
        if u == 0 || v == 0 {
            return Err(Error::parse(ln, "PACE vertices are numbered from 1"));
        }
        edges.push((ln, u - 1, v - 1));
    }
    let (n, m) = header.ok_or_else(|| Error::parse(1, "missing 'p tw n m' line"))?;
    if edges.len() != m {
        return Err(Error::parse(1, format!("problem line announces {m} edges, found {}", edges.len())));
    }
    build(n, edges)
}

fn write_pace_gr(g: &Graph) -> String {
    let mut s = format!("p tw {} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{} {}", u + 1, v + 1);
    }
    s
}

fn parse_json_graph(text: &str) -> Result<Parsed> {
    let j: JsonGraph = serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
    build(j.n, j.edges.into_iter().map(|(u, v)| (1, u, v)).collect())
}

fn write_json_graph(g: &Graph) -> String {
    let j = JsonGraph {
        n: g.n(),
        edges: g.edges().collect(),
    };
    serde_json::to_string(&j).expect("graph serialization cannot fail")
}

pub fn parse_graph6(s: &str) -> Result<Graph> {
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes = s.as_bytes();
    if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(Error::parse(1, "graph6 contains a byte outside 63..=126"));
    }
    let data: Vec<u8> = bytes.iter().map(|b| b - 63).collect();
    let (n, rest) = match data.first() {
        None => return Err(Error::parse(1, "empty graph6 string")),
        Some(&63) if data.get(1) == Some(&63) => {
            if data.len() < 8 {
                return Err(Error::parse(1, "truncated graph6 size"));
            }
            let n = data[2..8].iter().fold(0usize, |a, &b| a << 6 | b as usize);
            (n, &data[8..])
        }
        Some(&63) => {
            if data.len() < 4 {
                return Err(Error::parse(1, "truncated graph6 size"));
            }
            let n = data[1..4].iter().fold(0usize, |a, &b| a << 6 | b as usize);
            (n, &data[4..])
        }
        Some(&b) => (b as usize, &data[1..]),
    };
    let bits = n * n.saturating_sub(1) / 2;
    if rest.len() != bits.div_ceil(6) {
        return Err(Error::parse(
            1,
            format!("graph6 body has {} bytes, expected {}", rest.len(), bits.div_ceil(6)),
        ));
    }
    let mut g = Graph::new(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if rest[k / 6] >> (5 - k % 6) & 1 == 1 {
                g.add_edge(i, j);
            }
            k += 1;
        }
    }
    Ok(g)
}

pub fn write_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8);
    } else if n <= 258_047 {
        out.push(63);
        for sh in [12, 6, 0] {
            out.push((n >> sh & 63) as u8);
        }
    } else {
        out.push(63);
        out.push(63);
        for sh in [30, 24, 18, 12, 6, 0] {
            out.push((n >> sh & 63) as u8);
        }
    }
    let mut acc = 0u8;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            k += 1;
            if k % 6 == 0 {
                out.push(acc);
                acc = 0;
            }
        }
    }
    if k % 6 != 0 {
        out.push(acc << (6 - k % 6));
    }
    out.into_iter().map(|b| (b + 63) as char).collect()
}

/// PACE 2017 `.td`: `s td <bags> <maxbag> <n>`, then `b <i> <v>...` lines and
/// tree edges, all 1-indexed.
pub fn parse_td(text: &str) -> Result<(TreeDecomposition, usize)> {
    let mut header: Option<(usize, usize)> = None;
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut edges = Vec::new();
    for (ln, l) in content_lines(text, 'c') {
        if let Some(rest) = l.strip_prefix('s') {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            if toks.len() != 4 || toks[0] != "td" {
                return Err(Error::parse(ln, "solution line must be 's td bags maxbag n'"));
            }
            let nb = numbers(toks[1], ln)?[0];
            let n = numbers(toks[3], ln)?[0];
            header = Some((nb, n));
            bags = vec![None; nb];
            continue;
        }
        let Some((nb, n)) = header else {
            return Err(Error::parse(ln, "content before the 's td' line"));
        };
        if let Some(rest) = l.strip_prefix('b') {
            let xs = numbers(rest, ln)?;
            let Some((&i, vs)) = xs.split_first() else {
                return Err(Error::parse(ln, "bag line without an index"));
            };
            if i == 0 || i > nb {
                return Err(Error::parse(ln, format!("bag index {i} out of range")));
            }
            if bags[i - 1].is_some() {
                return Err(Error::parse(ln, format!("bag {i} defined twice")));
            }
            if let Some(&v) = vs.iter().find(|&&v| v == 0 || v > n) {
                return Err(Error::parse(ln, format!("vertex {v} out of range")));
            }
            bags[i - 1] = Some(vs.iter().map(|v| v - 1).collect());
        } else {
            let xs = numbers(l, ln)?;
            let [a, b] = xs[..] else {
                return Err(Error::parse(ln, "tree edge line must be 'a b'"));
            };
            if a == 0 || b == 0 || a > nb || b > nb {
                return Err(Error::parse(ln, format!("tree edge ({a}, {b}) out of range")));
            }
            edges.push((a - 1, b - 1));
        }
    }
    let (_, n) = header.ok_or_else(|| Error::parse(1, "missing 's td' line"))?;
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| Error::parse(1, format!("bag {} is never defined", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    Ok((TreeDecomposition { bags, edges }, n))
}

pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let maxbag = td.bags.iter().map(Vec::len).max().unwrap_or(0);
    let mut s = format!("s td {} {} {}\n", td.bags.len(), maxbag, n);
    for (i, b) in td.bags.iter().enumerate() {
        let _ = write!(s, "b {}", i + 1);
        for v in b {
            let _ = write!(s, " {}", v + 1);
        }
        s.push('\n');
    }
    for &(a, b) in &td.edges {
        let _ = writeln!(s, "{} {}", a + 1, b + 1);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    #[test]
    fn edge_list_p3() {
        let p = parse_graph("3 2\n0 1\n1 2", None).unwrap();
        assert_eq!(p.graph, Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap());
        assert!(p.warnings.is_empty());
    }

    #[test]
    fn duplicates_warn_and_loops_fail() {
        let p = parse_graph("3 3\n0 1\n1 0\n1 2", None).unwrap();
        assert_eq!(p.graph.m(), 2);
        assert_eq!(p.warnings.len(), 1);
        assert!(parse_graph("2 1\n1 1", None).is_err());
        assert!(parse_graph("2 2\n0 1", None).is_err());
    }

    #[test]
    fn graph6_known_strings() {
        // K4 is "C~", the 5-cycle 0-1-2-3-4-0 is "Dhc"
        assert_eq!(write_graph6(&k(4)), "C~");
        let c5 = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        assert_eq!(write_graph6(&c5), "Dhc");
        assert_eq!(parse_graph6("Dhc").unwrap(), c5);
        assert_eq!(parse_graph6(">>graph6<<C~").unwrap(), k(4));
        assert_eq!(sniff("C~\n"), Format::Graph6);
    }

    #[test]
    fn graph6_large_n_header() {
        let g = Graph::from_edges(100, [(0, 99), (5, 6)]).unwrap();
        let s = write_graph6(&g);
        assert!(s.starts_with('~'));
        assert_eq!(parse_graph6(&s).unwrap(), g);
    }

    #[test]
    fn pace_gr_c5() {
        let text = "c a five-cycle\np tw 5 5\n1 2\n2 3\n3 4\n4 5\n5 1\n";
        assert_eq!(sniff(text), Format::PaceGr);
        let g = parse_graph(text, None).unwrap().graph;
        assert_eq!(g.m(), 5);
        assert_eq!(g.degree_sequence(), vec![2; 5]);
        assert_eq!(parse_graph(&write_pace_gr(&g), None).unwrap().graph, g);
    }

    #[test]
    fn json_round_trip() {
        let g = k(4);
        let s = write_graph(&g, Format::Json);
        assert_eq!(sniff(&s), Format::Json);
        assert_eq!(parse_graph(&s, None).unwrap().graph, g);
    }

    #[test]
    fn td_round_trip() {
        let text = "c path\ns td 3 2 4\nb 1 1 2\nb 2 2 3\nb 3 3 4\n1 2\n2 3\n";
        let (td, n) = parse_td(text).unwrap();
        assert_eq!(n, 4);
        assert_eq!(td.bags, vec![vec![0, 1], vec![1, 2], vec![2, 3]]);
        assert_eq!(parse_td(&write_td(&td, n)).unwrap(), (td, n));
        assert!(parse_td("s td 1 1 2\nb 1 3\n").is_err());
    }
}
