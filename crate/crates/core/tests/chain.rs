use schrograph_core::chain::*;
use schrograph_core::*;

use schrograph_core::graph::{build_graph, GraphSpec};
use proptest::prelude::*;

fn s(x: &str) -> String {
    x.into()
}

fn triangle() -> TailedGraph {
    build_graph(&GraphSpec {
        vertices: vec![s("a"), s("b"), s("c")],
        edges: vec![(s("a"), s("b")), (s("b"), s("c")), (s("a"), s("c"))],
        tails: vec![s("a")],
    })
    .unwrap()
}

#[test]
fn single_edge_boundary() {
    let g = triangle();
    let mut c = Chain1::new();
    c.add(OrientedEdge::canonical(Edge::Base(0)), 1.0);
    let b = boundary(&c, &g).unwrap();
    assert_eq!(b.get(Vertex::Base(1)), 1.0);
    assert_eq!(b.get(Vertex::Base(0)), -1.0);
}

#[test]
fn cycle_has_no_boundary() {
    let g = triangle();
    let mut c = Chain1::new();
    c.add(OrientedEdge::canonical(Edge::Base(0)), 1.0);
    c.add(OrientedEdge::canonical(Edge::Base(1)), 1.0);
    // declared a->c, traversed c->a
    c.add(OrientedEdge::canonical(Edge::Base(2)).reverse(), 1.0);
    assert_eq!(boundary(&c, &g).unwrap().max_abs(), 0.0);
}

#[test]
fn truncated_tail_telescopes() {
    let g = triangle();
    let n = 25;
    let mut c = Chain1::new();
    for depth in 1..=n {
        c.add(OrientedEdge::canonical(Edge::Tail { tail: 0, depth }), 1.0);
    }
    let b = boundary(&c, &g).unwrap();
    assert_eq!(b.get(Vertex::Base(0)), -1.0);
    assert_eq!(b.get(Vertex::Tail { tail: 0, depth: n }), 1.0);
    assert_eq!(b.max_abs_where(|v| v.depth() > 0 && v.depth() < n), 0.0);
}

#[test]
fn unknown_edge_in_chain() {
    let g = triangle();
    let mut c = Chain1::new();
    c.add(OrientedEdge::canonical(Edge::Base(9)), 1.0);
    assert!(matches!(boundary(&c, &g), Err(Error::UnknownEdge(_))));
}

fn chain_from(edges: &[Edge], coeffs: &[f64]) -> Chain1 {
    let mut c = Chain1::new();
    for (e, v) in edges.iter().zip(coeffs) {
        c.add(OrientedEdge::canonical(*e), *v);
    }
    c
}

proptest! {
    #[test]
    fn boundary_is_linear(
        x in prop::collection::vec(-10.0f64..10.0, 9),
        y in prop::collection::vec(-10.0f64..10.0, 9),
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
    ) {
        let g = triangle();
        let edges: Vec<Edge> = g.edges_to_depth(6);
        let c1 = chain_from(&edges, &x);
        let c2 = chain_from(&edges, &y);
        let lhs = boundary(&c1.combine(a, &c2, b), &g).unwrap();
        let (b1, b2) = (boundary(&c1, &g).unwrap(), boundary(&c2, &g).unwrap());
        for v in g.vertices_to_depth(6) {
            prop_assert!((lhs.get(v) - (a * b1.get(v) + b * b2.get(v))).abs() <= 1e-12);
        }
    }

    #[test]
    fn orientation_reversal_negates(v in -5.0f64..5.0, depth in 1usize..20) {
        let mut c = Chain1::new();
        let oe = OrientedEdge::canonical(Edge::Tail { tail: 0, depth });
        c.add(oe.reverse(), v);
        prop_assert_eq!(c.get(oe), -v);
        prop_assert_eq!(c.get(oe.reverse()), v);
    }
}
