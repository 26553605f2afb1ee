use proptest::prelude::*;

use tww::exact::{exact_twinwidth, ExactOptions};
use tww::io::{parse_graph, write_graph, Format};
use tww::treewidth::{tw_bound, tw_sequence};
use tww::{replay_graph, ContractionSequence, Graph, Trigraph};

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut it = bits.into_iter();
            for u in 0..n {
                for v in u + 1..n {
                    if it.next().unwrap() {
                        edges.push((u, v));
                    }
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

fn exact(g: &Graph) -> usize {
    exact_twinwidth(g, ExactOptions::default()).unwrap().width().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn contraction_is_symmetric(g in graph(9), a in 0usize..9, b in 0usize..9) {
        let n = g.n();
        let (u, v) = (a % n, b % n);
        prop_assume!(u != v);
        let mut t1 = Trigraph::from_graph(&g);
        let mut t2 = t1.clone();
        let w1 = t1.contract(u, v).unwrap().merged;
        let w2 = t2.contract(v, u).unwrap().merged;
        prop_assert_eq!(w1, w2);
        let mut n1: Vec<_> = t1.neighbours(w1).collect();
        let mut n2: Vec<_> = t2.neighbours(w2).collect();
        n1.sort();
        n2.sort();
        prop_assert_eq!(n1, n2);
        prop_assert_eq!(t1.red_edges(), t2.red_edges());
    }

    #[test]
    fn edge_count_never_grows(g in graph(10), picks in proptest::collection::vec((0usize..64, 0usize..64), 1..9)) {
        let mut t = Trigraph::from_graph(&g);
        for (a, b) in picks {
            let live: Vec<_> = t.vertices().collect();
            if live.len() < 2 {
                break;
            }
            let u = live[a % live.len()];
            let v = live[b % live.len()];
            if u == v {
                continue;
            }
            let before = t.edge_count();
            t.contract(u, v).unwrap();
            prop_assert!(t.edge_count() <= before);
        }
    }

    #[test]
    fn disjoint_union_takes_the_max(g in graph(4), h in graph(4)) {
        let u = g.disjoint_union(&h);
        prop_assert_eq!(exact(&u), exact(&g).max(exact(&h)));
    }

    #[test]
    fn serialisation_round_trips(g in graph(12)) {
        for f in [Format::EdgeList, Format::Graph6, Format::PaceGr, Format::Json] {
            let text = write_graph(&g, f);
            let back = parse_graph(&text, Some(f)).unwrap();
            prop_assert_eq!(&back.graph, &g);
            prop_assert!(back.warnings.is_empty());
        }
    }

    #[test]
    fn treewidth_construction_within_bound(g in graph(9)) {
        let (seq, tw) = tw_sequence(&g, None).unwrap();
        let r = replay_graph(&g, &seq).unwrap();
        prop_assert!(r.is_complete());
        prop_assert!(r.width <= tw_bound(tw));
        prop_assert!(r.width >= exact(&g));
    }

    #[test]
    fn json_sequence_round_trips(n in 1usize..12, seed in any::<u64>()) {
        let pairs: Vec<(usize, usize)> = (0..n.saturating_sub(1))
            .map(|i| (if i == 0 { 0 } else { n + i - 1 }, i + 1))
            .collect();
        let mut seq = ContractionSequence::from_pairs(n, pairs);
        seq.claimed_width = Some((seed % 5) as usize);
        let back = ContractionSequence::from_json(&seq.to_json()).unwrap();
        prop_assert_eq!(back, seq);
    }
}
