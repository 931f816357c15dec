mod common;

use common::*;
use schrograph_core::wronskian::*;
use schrograph_core::*;

use schrograph_core::operator::{free_operator, Flavor};
use schrograph_core::phase::{solution_basis, skew_terms, tail_modes};

#[test]
fn equal_inputs_give_zero_chain() {
    let op = delta_line(2.0);
    let basis = solution_basis(&op, 0.3, 12).unwrap();
    let w = wronskian(&op, &basis.functions[0], &basis.functions[0], 10).unwrap();
    assert_eq!(w.chain.max_abs(), 0.0);
    assert_eq!(tail_constants(&w, &op).unwrap(), vec![0.0, 0.0]);
}

#[test]
fn free_line_c_and_s() {
    let op = free_operator(&line(), Flavor::Vertex);
    for (lambda, n) in [(-1.4, 15), (0.6, 15), (2.7, 6)] {
        let m = tail_modes(lambda).unwrap();
        // C on tail 2 continued through the origin to tail 1, likewise S
        let c = SiteFunction::<f64>::from_fn(&op, n + 1, |s| match s {
            Site::Base(_) => 1.0,
            Site::Tail { tail: 1, depth } => m.c(depth),
            Site::Tail { depth, .. } => m.eval(1.0, lambda - 2.0 * m.c(1), depth),
        });
        let s = SiteFunction::<f64>::from_fn(&op, n + 1, |s| match s {
            Site::Base(_) => 0.0,
            Site::Tail { tail: 1, depth } => m.s(depth),
            Site::Tail { depth, .. } => -m.s(depth),
        });
        let w = wronskian(&op, &c, &s, n).unwrap();
        let kappa = tail_constants(&w, &op).unwrap();
        assert!((kappa[1] - 1.0).abs() < 1e-10, "{kappa:?}");
        assert!((kappa[0] + 1.0).abs() < 1e-10, "{kappa:?}");
        assert!(w.boundary_residual(&op).unwrap() < 1e-10);
    }
}

#[test]
fn star_at_zero_sums_to_zero() {
    let op = free_operator(&star(3), Flavor::Vertex);
    let basis = solution_basis(&op, 0.0, 12).unwrap();
    assert_eq!(basis.functions.len(), 3);
    for a in &basis.functions {
        for b in &basis.functions {
            let w = wronskian(&op, a, b, 11).unwrap();
            let kappa = tail_constants(&w, &op).unwrap();
            assert!(kappa.iter().sum::<f64>().abs() < 1e-12);
            assert!(w.boundary_residual(&op).unwrap() < 1e-12);
        }
    }
}

#[test]
fn delta_line_kappa_matches_skew_terms() {
    let op = delta_line(2.0);
    let basis = solution_basis(&op, 0.0, 12).unwrap();
    let w = wronskian(&op, &basis.functions[0], &basis.functions[1], 11).unwrap();
    let kappa = tail_constants(&w, &op).unwrap();
    assert!(kappa.iter().sum::<f64>().abs() < 1e-12);
    let terms = skew_terms(&basis.phases[0], &basis.phases[1]);
    for (k, t) in kappa.iter().zip(terms) {
        assert!((k - t).abs() < 1e-12);
    }
}

#[test]
fn edge_flavor_orientations_agree_on_solutions() {
    let op = free_operator(&cycle4(&["v1", "v3", "v3"]), Flavor::Edge);
    let basis = solution_basis(&op, 0.8, 10).unwrap();
    let (a, b) = (&basis.functions[0], &basis.functions[1]);
    let w = wronskian(&op, a, b, 9).unwrap();
    for e in op.graph().edges_to_depth(9) {
        let oe = OrientedEdge::canonical(e);
        let back = oriented_value(&op, a, b, oe.reverse()).unwrap();
        assert!((w.chain.get(oe.reverse()) - back).abs() < 1e-12, "{e}");
    }
    assert!(w.boundary_residual(&op).unwrap() < 1e-12);
    // κ carries the opposite sign to the per-tail skew terms in this flavor
    let kappa = tail_constants(&w, &op).unwrap();
    for (k, t) in kappa.iter().zip(skew_terms(&basis.phases[0], &basis.phases[1])) {
        assert!((k + t).abs() < 1e-12);
    }
}

#[test]
fn non_solutions_are_not_constant() {
    let op = free_operator(&line(), Flavor::Vertex);
    let a = SiteFunction::<f64>::from_fn(&op, 10, |s| s.depth() as f64);
    let b = SiteFunction::<f64>::from_fn(&op, 10, |s| (s.depth() * s.depth()) as f64);
    let w = wronskian(&op, &a, &b, 9).unwrap();
    assert!(matches!(tail_constants(&w, &op), Err(Error::NotConstant { .. })));
    assert_eq!(wronskian(&op, &a, &b, 10).unwrap_err().code(), "E_INSUFFICIENT_DEPTH");
    let e = free_operator(&line(), Flavor::Edge);
    let c = SiteFunction::<f64>::zeros(&e, 10);
    assert!(matches!(wronskian(&op, &a, &c, 5), Err(Error::FlavorMismatch(_))));
}
