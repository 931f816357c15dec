mod common;

use common::*;
use schrograph_core::oracle::*;
use schrograph_core::*;

use schrograph_core::operator::{apply, free_operator, SiteFunction};
use core::f64::consts::SQRT_2;

#[test]
fn free_line_truncation_inside_band() {
    let eig = truncated_spectrum(&free_operator(&line(), Flavor::Vertex), 200).unwrap();
    assert_eq!(eig.len(), 401);
    assert!(eig.iter().all(|l| l.abs() < 2.0));
}

#[test]
fn delta_line_truncation() {
    let eig = truncated_spectrum(&delta_line(2.0), 200).unwrap();
    let above: Vec<f64> = eig.iter().copied().filter(|&l| l > 2.0).collect();
    assert_eq!(above.len(), 1);
    assert!((above[0] - 2.0 * SQRT_2).abs() < 1e-6);
    assert_eq!(truncated_spectrum(&delta_line(2.0), 5), Err(Error::TooSmall { depth: 5, min: 10 }));
}

#[test]
fn truncation_converged() {
    let op = delta_line(-1.3);
    let a: Vec<f64> = truncated_spectrum(&op, 60).unwrap().into_iter().filter(|l| l.abs() > 2.001).collect();
    let b: Vec<f64> = truncated_spectrum(&op, 110).unwrap().into_iter().filter(|l| l.abs() > 2.001).collect();
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() <= 1e-8);
    }
}

#[test]
fn truncation_matches_apply() {
    let op = random_instance(&CorpusParams { seed: 11, ..Default::default() }).unwrap().1;
    let n = op.n0() + 6;
    let t = truncate(&op, n);
    let psi = SiteFunction::<f64>::from_fn(&op, n + 1, |s| if s.depth() < n { 0.3 + s.depth() as f64 } else { 0.0 });
    let direct = apply(&op, &psi, n).unwrap();
    let restricted: Vec<f64> = t.layout.sites().map(|s| psi.at(s)).collect();
    assert_eq!(t.apply(&restricted), direct.values());
    assert_eq!(t.matrix, t.matrix.transpose());
}

#[test]
fn dense_solution_examples() {
    assert_eq!(dense_solution_space(&free_operator(&line(), Flavor::Vertex), 1.0, 10).unwrap(), 2);
    let op = cycle4_zero(&["v1", "v3"]);
    assert_eq!(dense_solution_space(&op, 0.0, 6).unwrap(), 3);
    assert_eq!(dense_solution_space(&op, 0.5, 6).unwrap(), 2);
    assert_eq!(dense_solution_space(&op, 0.5, 1), Err(Error::TooSmall { depth: 1, min: 2 }));
}

#[test]
fn random_instance_examples() {
    let p = CorpusParams { seed: 1, base_vertices: (1, 6), tails: (1, 3), ..Default::default() };
    let a = random_instance(&p).unwrap();
    assert_eq!(a, random_instance(&p).unwrap());
    assert!(a.0.base_vertex_count() <= 6);

    let p = CorpusParams { seed: 4, potential_amplitude: 0.0, coupling_amplitude: 0.0, ..Default::default() };
    let (g, op) = random_instance(&p).unwrap();
    assert_eq!(op.overrides(), &Overrides::default());
    assert_eq!(op.gershgorin_bound(), free_operator(&g, Flavor::Vertex).gershgorin_bound());

    let p = CorpusParams { seed: 2, base_vertices: (6, 6), edge_density: 0.0, tails: (1, 1), ..Default::default() };
    assert!(matches!(random_instance(&p), Err(Error::Unsatisfiable(_))));
    let p = CorpusParams { tails: (3, 2), ..Default::default() };
    assert!(matches!(random_instance(&p), Err(Error::BadParams(_))));
}

#[test]
fn couplings_bounded_away_from_zero() {
    for seed in 0..40 {
        for flavor in [Flavor::Vertex, Flavor::Edge] {
            let p = CorpusParams { seed, flavor, coupling_amplitude: 1.5, ..Default::default() };
            let (_, op) = random_instance(&p).unwrap();
            assert!(op.overrides().coupling.values().all(|c| c.abs() >= MIN_COUPLING));
        }
    }
}
