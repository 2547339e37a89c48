use std::collections::HashSet;

use proptest::prelude::*;

use unitdim::canon::{canonical_form, canonical_graph, is_isomorphic};
use unitdim::family::enumerate_petals;
use unitdim::minimality::all_graphs;
use unitdim::minors::{join_decompose, minor_closure, one_step_minors, ClosureOptions};
use unitdim::Graph;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn brute_isomorphic(a: &Graph, b: &Graph) -> bool {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let eb: HashSet<(usize, usize)> = b.edges().into_iter().collect();
    permutations(n).iter().any(|p| {
        a.edges().iter().all(|&(u, v)| {
            let (x, y) = (p[u].min(p[v]), p[u].max(p[v]));
            eb.contains(&(x, y))
        })
    })
}

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            let edges: Vec<_> = pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e).collect();
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

#[test]
fn canonical_forms_agree_with_brute_force_on_five_vertices() {
    let all: Vec<Graph> = (0u32..1 << 10)
        .map(|bits| {
            let pairs = (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v)));
            let edges: Vec<_> = pairs.enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, e)| e).collect();
            Graph::from_edges(5, edges).unwrap()
        })
        .collect();
    // Pick a few representatives against every labeled graph.
    for a in all.iter().step_by(37) {
        let fa = canonical_form(a).unwrap();
        for b in &all {
            assert_eq!(fa == canonical_form(b).unwrap(), brute_isomorphic(a, b), "{a:?} vs {b:?}");
        }
    }
}

#[test]
fn graph_counts_match_known_sequence() {
    let counts: Vec<usize> = (1..=7).map(|n| all_graphs(n).unwrap().len()).collect();
    assert_eq!(counts, vec![1, 2, 4, 11, 34, 156, 1044]);
}

#[test]
fn join_decomposition_round_trips() {
    for n in 1..=7 {
        for g in all_graphs(n).unwrap() {
            let parts = join_decompose(&g);
            assert!(!parts.is_empty());
            let mut rebuilt = parts[0].clone();
            for p in &parts[1..] {
                rebuilt = rebuilt.join(p).unwrap();
            }
            assert!(is_isomorphic(&rebuilt, &g).unwrap(), "{g:?}");
            for p in &parts {
                // Factors are join-indecomposable.
                assert_eq!(join_decompose(p).len(), 1, "{p:?} from {g:?}");
            }
        }
    }
}

#[test]
fn petal_counts_match_partition_oracle() {
    // Paths use parts >= 1 and cycles parts >= 3; count multisets of both.
    let max = 8;
    let mut ways = vec![0u64; max + 1];
    ways[0] = 1;
    let kinds: Vec<usize> = (1..=max).chain(3..=max).collect();
    for k in kinds {
        for total in k..=max {
            ways[total] += ways[total - k];
        }
    }
    for (n, &count) in ways.iter().enumerate().skip(1) {
        let petals = enumerate_petals(n).unwrap();
        assert_eq!(petals.len() as u64, count, "n = {n}");
        for p in &petals {
            assert_eq!(p.edge_count(), n);
            assert!((0..p.vertex_count()).all(|v| (1..=2).contains(&p.degree(v))));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn canonical_form_ignores_labels(g in graph_strategy(9), seed in any::<u64>()) {
        let n = g.vertex_count();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let h = g.permuted(&perm);
        prop_assert_eq!(canonical_form(&g).unwrap(), canonical_form(&h).unwrap());
        let (_, cg) = canonical_graph(&g).unwrap();
        prop_assert!(brute_isomorphic(&cg, &g) || n > 7);
    }

    #[test]
    fn closure_is_closed(g in graph_strategy(6)) {
        let closure = minor_closure(&g, ClosureOptions { proper_only: false, include_empty: true, cap: 10 }).unwrap();
        let forms: HashSet<_> = closure.iter().map(|(f, _)| f.clone()).collect();
        prop_assert!(forms.contains(&canonical_form(&g).unwrap()));
        for (_, h) in &closure {
            for m in one_step_minors(h) {
                let (f, _) = m.unwrap();
                prop_assert!(forms.contains(&f));
            }
        }
    }
}
