use unitdim::embedder::{find_embedding, EmbedOutcome, EmbedRequest};
use unitdim::engine::{Bound, Engine, Kind, Mode};
use unitdim::minimality::all_graphs;
use unitdim::{FamilySpec, Graph, MinorOp};

fn embeds(g: &Graph, d: i64, kind: Kind, mode: Mode, restarts: usize) -> bool {
    if d < 1 {
        return false;
    }
    let mut req = EmbedRequest::new(g.clone(), d as usize)
        .non_crossing(mode == Mode::NonCrossing)
        .restarts(restarts)
        .seed(11);
    if kind == Kind::Sdim {
        req = req.on_sphere(None);
    }
    matches!(find_embedding(&req), Ok(EmbedOutcome::Found { .. }))
}

/// No embedding may exist below a rule lower bound, and exact values
/// must be realizable.
fn check_against_embedder(mode: Mode, max_n: usize) {
    let engine = Engine::new(mode);
    for n in 2..=max_n {
        for g in all_graphs(n).unwrap() {
            for kind in [Kind::Dim, Kind::Sdim] {
                let b = engine.bounds(&g, kind);
                if let Some(lo) = b.lower_value() {
                    assert!(!embeds(&g, lo - 1, kind, mode, 20), "{mode} {kind} {g:?}: embedded below {b}");
                }
                if let Some(v) = b.value() {
                    if v >= 1 && (kind == Kind::Dim || n > 2) {
                        assert!(embeds(&g, v, kind, mode, 100), "{mode} {kind} {g:?}: nothing found at {v}");
                    }
                }
            }
        }
    }
}

#[test]
fn crossings_bounds_agree_with_embedder() {
    check_against_embedder(Mode::Crossings, 5);
}

#[test]
fn non_crossing_bounds_agree_with_embedder() {
    check_against_embedder(Mode::NonCrossing, 5);
}

#[test]
fn bounds_are_ordered_and_monotone() {
    for mode in [Mode::Crossings, Mode::NonCrossing] {
        let engine = Engine::new(mode);
        for n in 1..=6 {
            for g in all_graphs(n).unwrap() {
                let dim = engine.bounds(&g, Kind::Dim);
                let sdim = engine.bounds(&g, Kind::Sdim);
                for b in [&dim, &sdim] {
                    if let Some(u) = b.upper {
                        assert!(b.lower <= u, "{g:?}: {b}");
                    }
                }
                assert!(sdim.upper.is_none_or(|u| dim.lower <= u), "{g:?}: dim {dim} sdim {sdim}");
                for (u, v) in g.edges() {
                    let h = g.apply(MinorOp::EdgeRemoval { u, v }).unwrap();
                    for kind in [Kind::Dim, Kind::Sdim] {
                        let (big, small) = (engine.bounds(&g, kind), engine.bounds(&h, kind));
                        assert!(big.upper.is_none_or(|u| small.lower <= u), "{kind} {g:?} minus {u}-{v}: {small} vs {big}");
                    }
                }
            }
        }
    }
}

#[test]
fn clique_sphere_dimension_steps_by_one() {
    let engine = Engine::new(Mode::Crossings);
    for n in 3..=8usize {
        let k = |m: usize| engine.bounds(&FamilySpec::Complete { n: m }.build().unwrap(), Kind::Sdim).value();
        assert_eq!(k(n), k(n - 1).map(|s| s + 1), "K_{n}");
        assert_eq!(k(n), Some(n as i64 - 1));
    }
}

#[test]
fn tiny_sphere_dimensions() {
    let engine = Engine::new(Mode::Crossings);
    let sdim = |n| engine.bounds(&Graph::empty(n).unwrap(), Kind::Sdim);
    assert_eq!(sdim(0).lower, Bound::NegInf);
    assert_eq!((sdim(1).value(), sdim(2).value(), sdim(3).value()), (Some(0), Some(1), Some(2)));
}
