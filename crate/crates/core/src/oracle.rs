//! Brute-force references: Dirichlet truncations, dense solution counting and a
//! seeded random instance generator.
//!
//! Random instances use `ChaCha8Rng::seed_from_u64(seed)` and draw, in order: the
//! base size, a spanning tree, extra edges, the tail count, the nests, `n0`, the
//! potentials and the couplings. All integer draws go through `u32` ranges so the
//! stream is the same on every platform.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{build_graph, GraphSpec, TailedGraph};
use crate::linalg;
use crate::operator::{assemble, CouplingKey, Flavor, Layout, OperatorCoefficients, Overrides, Site};

/// The operator on all sites of depth `<= depth`, with zero boundary values beyond.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedOperator {
    pub flavor: Flavor,
    pub depth: usize,
    pub layout: Layout,
    pub matrix: DMatrix<f64>,
}

/// Rows: sites of `rows`; columns: sites of `cols` (which must contain `rows`).
fn section(op: &OperatorCoefficients, rows: Layout, cols: Layout) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(rows.len(), cols.len());
    for (r, site) in rows.sites().enumerate() {
        m[(r, cols.index(site).expect("row inside columns"))] += op.potential(site);
        for (nb, c) in op.neighbors(site).expect("site in graph") {
            if let Some(j) = cols.index(nb) {
                m[(r, j)] += c;
            }
        }
    }
    m
}

pub fn truncate(op: &OperatorCoefficients, depth: usize) -> TruncatedOperator {
    let layout = Layout::new(op, depth);
    TruncatedOperator { flavor: op.flavor(), depth, layout, matrix: section(op, layout, layout) }
}

impl TruncatedOperator {
    /// Matrix-vector product on values in layout order.
    pub fn apply(&self, values: &[f64]) -> Vec<f64> {
        (&self.matrix * nalgebra::DVector::from_column_slice(values)).iter().copied().collect()
    }
}

/// Sorted eigenvalues of the Dirichlet truncation at depth `depth >= n0 + 10`.
pub fn truncated_spectrum(op: &OperatorCoefficients, depth: usize) -> Result<Vec<f64>> {
    let min = op.n0() + 10;
    if depth < min {
        return Err(Error::TooSmall { depth, min });
    }
    Ok(linalg::sym_eigenvalues(&truncate(op, depth).matrix))
}

/// Null-space dimension of `(L - λ)ψ = 0` imposed at depth `<= depth - 1` on
/// unknowns of depth `<= depth`.
pub fn dense_solution_space(op: &OperatorCoefficients, lambda: f64, depth: usize) -> Result<usize> {
    let min = op.anchor_depth() + 2;
    if depth < min {
        return Err(Error::TooSmall { depth, min });
    }
    let cols = Layout::new(op, depth);
    let rows = Layout::new(op, depth - 1);
    let mut m = section(op, rows, cols);
    for (r, site) in rows.sites().enumerate() {
        m[(r, cols.index(site).expect("row inside columns"))] -= lambda;
    }
    Ok(cols.len() - linalg::rank(&m))
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields, default))]
pub struct CorpusParams {
    pub seed: u64,
    pub flavor: Flavor,
    /// Inclusive range of base vertex counts.
    pub base_vertices: (u32, u32),
    /// Probability of each non-tree vertex pair becoming an edge.
    pub edge_density: f64,
    /// Inclusive range of tail counts; raised to cover degree deficits.
    pub tails: (u32, u32),
    /// Potentials are the free value plus `U(-a, a)`.
    pub potential_amplitude: f64,
    /// Couplings are `1 + U(-a, a)`, kept at least 0.1 away from 0.
    pub coupling_amplitude: f64,
    /// Inclusive range of the finitary depth.
    pub n0: (u32, u32),
}

impl Default for CorpusParams {
    fn default() -> Self {
        CorpusParams {
            seed: 0,
            flavor: Flavor::Vertex,
            base_vertices: (1, 6),
            edge_density: 0.3,
            tails: (1, 3),
            potential_amplitude: 1.0,
            coupling_amplitude: 0.5,
            n0: (0, 2),
        }
    }
}

/// Smallest magnitude of a drawn coupling.
pub const MIN_COUPLING: f64 = 0.1;

fn check_params(p: &CorpusParams) -> Result<()> {
    if p.base_vertices.0 == 0 || p.base_vertices.0 > p.base_vertices.1 {
        return Err(Error::BadParams("base vertex range must be non-empty and start at 1 or more"));
    }
    if p.tails.0 == 0 || p.tails.0 > p.tails.1 {
        return Err(Error::BadParams("tail range must be non-empty and start at 1 or more"));
    }
    if p.n0.0 > p.n0.1 {
        return Err(Error::BadParams("n0 range is empty"));
    }
    if !(0.0..=1.0).contains(&p.edge_density) {
        return Err(Error::BadParams("edge density must lie in [0, 1]"));
    }
    if !(p.potential_amplitude >= 0.0 && p.potential_amplitude.is_finite()) {
        return Err(Error::BadParams("potential amplitude must be finite and non-negative"));
    }
    if !(p.coupling_amplitude >= 0.0 && p.coupling_amplitude.is_finite()) {
        return Err(Error::BadParams("coupling amplitude must be finite and non-negative"));
    }
    Ok(())
}

fn uniform(rng: &mut ChaCha8Rng, a: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        rng.random_range(-a..a)
    }
}

/// A random connected base with tails and a random finitary operator on it.
pub fn random_instance(p: &CorpusParams) -> Result<(TailedGraph, OperatorCoefficients)> {
    check_params(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let nb = rng.random_range(p.base_vertices.0..=p.base_vertices.1) as usize;
    let name = |i: usize| -> String { format!("v{i}") };

    let mut edges: Vec<(usize, usize)> = Vec::new();
    for v in 1..nb {
        let parent = rng.random_range(0..v as u32) as usize;
        edges.push((parent, v));
    }
    for a in 0..nb {
        for b in a + 1..nb {
            if edges.contains(&(a, b)) {
                continue;
            }
            if rng.random_bool(p.edge_density) {
                edges.push((a, b));
            }
        }
    }
    let mut degree = vec![0usize; nb];
    for &(a, b) in &edges {
        degree[a] += 1;
        degree[b] += 1;
    }
    let deficit: usize = degree.iter().map(|&d| 2usize.saturating_sub(d)).sum();
    if deficit > p.tails.1 as usize {
        return Err(Error::Unsatisfiable("degree deficits exceed the maximum tail count"));
    }
    let k = (rng.random_range(p.tails.0..=p.tails.1) as usize).max(deficit);
    let mut nests = Vec::with_capacity(k);
    for (v, &d) in degree.iter().enumerate() {
        for _ in d..2 {
            nests.push(v);
        }
    }
    while nests.len() < k {
        nests.push(rng.random_range(0..nb as u32) as usize);
    }

    let spec = GraphSpec {
        vertices: (0..nb).map(name).collect(),
        edges: edges.iter().map(|&(a, b)| (name(a), name(b))).collect(),
        tails: nests.iter().map(|&v| name(v)).collect(),
    };
    let graph = build_graph(&spec)?;
    let n0 = rng.random_range(p.n0.0..=p.n0.1) as usize;

    let free = assemble(&graph, p.flavor, &Overrides::default(), n0)?;
    let mut overrides = Overrides::default();
    if p.potential_amplitude > 0.0 {
        for site in Layout::new(&free, n0).sites() {
            let value = free.free_potential(site) + uniform(&mut rng, p.potential_amplitude);
            overrides.potential.insert(site, value);
        }
    }
    if p.coupling_amplitude > 0.0 {
        let mut keys = BTreeSet::new();
        for e in graph.edges_to_depth(n0) {
            match p.flavor {
                Flavor::Vertex => {
                    keys.insert(CouplingKey::Across(e));
                }
                Flavor::Edge => {
                    for (other, _) in graph.line_neighbors(e)? {
                        let key = CouplingKey::between(e, other);
                        if key.depth() <= n0 {
                            keys.insert(key);
                        }
                    }
                }
            }
        }
        for key in keys {
            let mut value = 1.0 + uniform(&mut rng, p.coupling_amplitude);
            if value.abs() < MIN_COUPLING {
                value = if value < 0.0 { -MIN_COUPLING } else { MIN_COUPLING };
            }
            overrides.coupling.insert(key, value);
        }
    }
    let op = assemble(&graph, p.flavor, &overrides, n0)?;
    Ok((graph, op))
}

/// Sites of depth `<= depth` in layout order, as a plain list.
pub fn sites(op: &OperatorCoefficients, depth: usize) -> Vec<Site> {
    Layout::new(op, depth).sites().collect()
}
