use schrograph_core::graph::*;
use schrograph_core::*;

fn s(x: &str) -> String {
    x.into()
}

fn line() -> TailedGraph {
    build_graph(&GraphSpec { vertices: vec![s("v0")], edges: vec![], tails: vec![s("v0"), s("v0")] }).unwrap()
}

fn cycle4(nests: [&str; 2]) -> TailedGraph {
    build_graph(&GraphSpec {
        vertices: vec![s("v0"), s("v1"), s("v2"), s("v3")],
        edges: vec![(s("v0"), s("v1")), (s("v1"), s("v2")), (s("v2"), s("v3")), (s("v3"), s("v0"))],
        tails: nests.iter().map(|n| s(n)).collect(),
    })
    .unwrap()
}

#[test]
fn minimal_line_graph() {
    let g = line();
    assert_eq!(g.tail_count(), 2);
    assert_eq!(g.nest_count(), 1);
    assert_eq!(g.degree(Vertex::Base(0)).unwrap(), 2);
}

#[test]
fn four_cycle_with_two_tails() {
    let g = cycle4(["v1", "v3"]);
    assert_eq!(g.tail_count(), 2);
    assert_eq!(g.nest_count(), 2);
    assert_eq!(g.degree(Vertex::Base(1)).unwrap(), 3);
    assert_eq!(g.degree(Vertex::Base(0)).unwrap(), 2);
    assert_eq!(g.degree(Vertex::Tail { tail: 1, depth: 7 }).unwrap(), 2);
}

#[test]
fn end_vertex_rejected() {
    let err = build_graph(&GraphSpec {
        vertices: vec![s("v0"), s("v1")],
        edges: vec![(s("v0"), s("v1"))],
        tails: vec![s("v0")],
    })
    .unwrap_err();
    assert_eq!(err, Error::EndVertex { vertex: s("v1"), degree: 1 });
    assert_eq!(err.code(), "E_END_VERTEX");
}

#[test]
fn construction_errors() {
    let dangling = GraphSpec { vertices: vec![s("a")], edges: vec![(s("a"), s("b"))], tails: vec![s("a")] };
    assert!(matches!(build_graph(&dangling), Err(Error::DanglingEdge { edge: 0, .. })));
    let no_tails = GraphSpec { vertices: vec![s("a"), s("b")], edges: vec![(s("a"), s("b")); 2], tails: vec![] };
    assert_eq!(build_graph(&no_tails), Err(Error::NoTails));
    let looped = GraphSpec { vertices: vec![s("a")], edges: vec![(s("a"), s("a"))], tails: vec![s("a")] };
    assert!(matches!(build_graph(&looped), Err(Error::SelfLoop { .. })));
    let dup = GraphSpec { vertices: vec![s("a"), s("a")], edges: vec![], tails: vec![s("a")] };
    assert!(matches!(build_graph(&dup), Err(Error::DuplicateVertex(_))));
    let nest = GraphSpec { vertices: vec![s("a")], edges: vec![], tails: vec![s("a"), s("z")] };
    assert!(matches!(build_graph(&nest), Err(Error::UnknownNest { tail: 2, .. })));
}

#[test]
fn parallel_edges_allowed() {
    let g = build_graph(&GraphSpec {
        vertices: vec![s("a"), s("b")],
        edges: vec![(s("a"), s("b")), (s("b"), s("a"))],
        tails: vec![s("a")],
    })
    .unwrap();
    assert_eq!(g.edges_between(Vertex::Base(0), Vertex::Base(1)).unwrap().len(), 2);
    // each parallel edge meets the other at both ends, plus the tail at `a`
    assert_eq!(g.line_neighbors(Edge::Base(0)).unwrap().len(), 3);
}

#[test]
fn line_neighbors_on_path() {
    let g = line();
    let mut n = g.line_neighbors(Edge::Tail { tail: 0, depth: 2 }).unwrap();
    n.sort();
    assert_eq!(
        n,
        vec![
            (Edge::Tail { tail: 0, depth: 1 }, Vertex::Tail { tail: 0, depth: 1 }),
            (Edge::Tail { tail: 0, depth: 3 }, Vertex::Tail { tail: 0, depth: 2 }),
        ]
    );
}

#[test]
fn line_neighbors_on_star_and_cycle() {
    let star = build_graph(&GraphSpec { vertices: vec![s("c")], edges: vec![], tails: vec![s("c"); 3] }).unwrap();
    for tail in 0..3 {
        let n = star.line_neighbors(Edge::Tail { tail, depth: 1 }).unwrap();
        let at_center = n.iter().filter(|(_, v)| *v == Vertex::Base(0)).count();
        assert_eq!(at_center, 2);
    }
    let g = cycle4(["v1", "v3"]);
    let n = g.line_neighbors(Edge::Base(2)).unwrap();
    // v2 has no tail, v3 carries one
    assert_eq!(n.iter().filter(|(_, v)| *v == Vertex::Base(2)).count(), 1);
    assert_eq!(n.iter().filter(|(_, v)| *v == Vertex::Base(3)).count(), 2);
    let plain = cycle4(["v1", "v1"]);
    let n = plain.line_neighbors(Edge::Base(2)).unwrap();
    assert_eq!(n.len(), 2);
    assert_ne!(n[0].1, n[1].1);
}

#[test]
fn unknown_edge() {
    let g = line();
    assert!(matches!(g.line_neighbors(Edge::Base(0)), Err(Error::UnknownEdge(_))));
    assert!(matches!(g.endpoints(Edge::Tail { tail: 2, depth: 1 }), Err(Error::UnknownEdge(_))));
}

#[test]
fn orientation_involution() {
    let oe = OrientedEdge::canonical(Edge::Tail { tail: 1, depth: 3 });
    assert_eq!(oe.reverse().reverse(), oe);
    let g = line();
    let (s0, t0) = oe.ends(&g).unwrap();
    assert_eq!(oe.reverse().ends(&g).unwrap(), (t0, s0));
}
