#![allow(dead_code)]

use schrograph_core::*;

pub fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

pub fn graph(vertices: &[&str], edges: &[(&str, &str)], tails: &[&str]) -> TailedGraph {
    build_graph(&GraphSpec {
        vertices: names(vertices),
        edges: edges.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        tails: names(tails),
    })
    .unwrap()
}

pub fn line() -> TailedGraph {
    graph(&["v0"], &[], &["v0", "v0"])
}

pub fn star(arms: usize) -> TailedGraph {
    graph(&["c"], &[], &vec!["c"; arms])
}

pub fn cycle4(nests: &[&str]) -> TailedGraph {
    graph(&["v0", "v1", "v2", "v3"], &[("v0", "v1"), ("v1", "v2"), ("v2", "v3"), ("v3", "v0")], nests)
}

pub fn delta_line(w: f64) -> OperatorCoefficients {
    let mut o = Overrides::default();
    o.potential.insert(Site::Base(0), w);
    assemble(&line(), Flavor::Vertex, &o, 0).unwrap()
}

/// 4-cycle, tails at the given nests, vertex flavor with all base potentials 0.
pub fn cycle4_zero(nests: &[&str]) -> OperatorCoefficients {
    zero_base(&cycle4(nests))
}

pub fn zero_base(g: &TailedGraph) -> OperatorCoefficients {
    let mut o = Overrides::default();
    for i in 0..g.base_vertex_count() {
        o.potential.insert(Site::Base(i), 0.0);
    }
    assemble(g, Flavor::Vertex, &o, 0).unwrap()
}

/// First satisfiable instance at or after `seed`.
pub fn instance(seed: u64, flavor: Flavor, potential: f64, coupling: f64) -> OperatorCoefficients {
    (0..)
        .find_map(|i| {
            let p = CorpusParams {
                seed: seed * 1009 + i,
                flavor,
                potential_amplitude: potential,
                coupling_amplitude: coupling,
                ..Default::default()
            };
            random_instance(&p).ok()
        })
        .unwrap()
        .1
}

pub fn band_gap_lambda(x: f64) -> f64 {
    // map [0, 1) onto (-4, 4) avoiding a window around ±2
    let l = -4.0 + 8.0 * x;
    if (l.abs() - 2.0).abs() < 1e-3 {
        l + 0.01
    } else {
        l
    }
}
