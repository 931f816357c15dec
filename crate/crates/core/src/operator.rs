//! Schrödinger operators on tailed graphs, in the vertex flavor (functions on
//! vertices) and the edge flavor (functions on edges).
//!
//! `(Lψ)_x = W_x ψ_x + Σ_{y~x} c_{x:y} ψ_y`. The free operator `L₀ + 2` has unit
//! couplings and potential `2 - m_T` (vertex flavor) or `0` (edge flavor); on a
//! tail it acts as `ψ_{n-1} + ψ_{n+1}`. An operator is finitary with depth `n0`:
//! every site and coupling deeper than `n0` keeps its free value.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use nalgebra::{ComplexField, DMatrix};

use crate::error::{Error, Result};
use crate::graph::{Edge, TailedGraph, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Flavor {
    /// Functions on vertices, couplings `b_{T:T'}` across edges.
    #[cfg_attr(feature = "serde", serde(rename = "V"))]
    Vertex,
    /// Functions on edges, couplings `d_{R:R'}` between edges meeting at a vertex.
    #[cfg_attr(feature = "serde", serde(rename = "E"))]
    Edge,
}

/// A point where functions live: a vertex or an edge depending on the flavor.
///
/// `Base(i)` is base vertex `i` or base edge `i`; `Tail { tail, depth }` is
/// `T_{tail,depth}` or `R_{tail,depth}`, always with `depth >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Site {
    Base(usize),
    Tail { tail: usize, depth: usize },
}

impl Site {
    pub fn depth(self) -> usize {
        match self {
            Site::Base(_) => 0,
            Site::Tail { depth, .. } => depth,
        }
    }

    pub fn vertex(self) -> Vertex {
        match self {
            Site::Base(i) => Vertex::Base(i),
            Site::Tail { tail, depth } => Vertex::Tail { tail, depth },
        }
    }

    pub fn edge(self) -> Edge {
        match self {
            Site::Base(i) => Edge::Base(i),
            Site::Tail { tail, depth } => Edge::Tail { tail, depth },
        }
    }
}

impl From<Vertex> for Site {
    fn from(v: Vertex) -> Self {
        match v {
            Vertex::Base(i) => Site::Base(i),
            Vertex::Tail { tail, depth } => Site::Tail { tail, depth },
        }
    }
}

impl From<Edge> for Site {
    fn from(e: Edge) -> Self {
        match e {
            Edge::Base(i) => Site::Base(i),
            Edge::Tail { tail, depth } => Site::Tail { tail, depth },
        }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Site::Base(i) => write!(f, "base site #{i}"),
            Site::Tail { tail, depth } => write!(f, "tail site {}:{}", tail + 1, depth),
        }
    }
}

/// Key of an off-diagonal coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum CouplingKey {
    /// Vertex flavor: `b` across one edge, between its two endpoints.
    Across(Edge),
    /// Edge flavor: `d` between two distinct edges that meet; stored sorted.
    Between(Edge, Edge),
}

impl CouplingKey {
    pub fn between(a: Edge, b: Edge) -> Self {
        if a <= b {
            CouplingKey::Between(a, b)
        } else {
            CouplingKey::Between(b, a)
        }
    }

    /// Deepest site the coupling touches.
    pub fn depth(self) -> usize {
        match self {
            CouplingKey::Across(e) => e.depth(),
            CouplingKey::Between(a, b) => a.depth().max(b.depth()),
        }
    }
}

impl fmt::Display for CouplingKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CouplingKey::Across(e) => write!(f, "coupling across {e}"),
            CouplingKey::Between(a, b) => write!(f, "coupling between {a} and {b}"),
        }
    }
}

/// Departures from the free operator.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub potential: BTreeMap<Site, f64>,
    pub coupling: BTreeMap<CouplingKey, f64>,
}

/// Real symmetric nearest-neighbour coefficients plus potential.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorCoefficients {
    graph: TailedGraph,
    flavor: Flavor,
    n0: usize,
    overrides: Overrides,
}

/// The free operator `L₀ + 2`: unit couplings, potential `2 - m_T` or `0`, `n0 = 0`.
pub fn free_operator(graph: &TailedGraph, flavor: Flavor) -> OperatorCoefficients {
    OperatorCoefficients { graph: graph.clone(), flavor, n0: 0, overrides: Overrides::default() }
}

/// The free operator with `overrides` applied, validated against finitary depth `n0`.
pub fn assemble(graph: &TailedGraph, flavor: Flavor, overrides: &Overrides, n0: usize) -> Result<OperatorCoefficients> {
    let op = OperatorCoefficients { graph: graph.clone(), flavor, n0, overrides: Overrides::default() };
    for &site in overrides.potential.keys() {
        if !op.contains_site(site) {
            return Err(Error::UnknownSite(site.to_string()));
        }
        if site.depth() > n0 {
            return Err(Error::NotFinitary { depth: site.depth(), n0 });
        }
    }
    for (&key, &value) in overrides.coupling.iter() {
        op.check_coupling_key(key)?;
        if key.depth() > n0 {
            return Err(Error::NotFinitary { depth: key.depth(), n0 });
        }
        if value == 0.0 {
            return Err(Error::ZeroCoupling(key.to_string()));
        }
    }
    Ok(OperatorCoefficients { overrides: overrides.clone(), ..op })
}

impl OperatorCoefficients {
    pub fn graph(&self) -> &TailedGraph {
        &self.graph
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn overrides(&self) -> &Overrides {
        &self.overrides
    }

    pub fn tail_count(&self) -> usize {
        self.graph.tail_count()
    }

    /// Number of base sites: base vertices (V) or base edges (E).
    pub fn base_site_count(&self) -> usize {
        match self.flavor {
            Flavor::Vertex => self.graph.base_vertex_count(),
            Flavor::Edge => self.graph.base_edge_count(),
        }
    }

    /// First tail depth `f` from which a tail solution is fixed by its values at `f, f+1`
    /// through the free recursion. Equals `n0` for vertices and `max(n0, 1)` for edges,
    /// since edge sites start at depth 1.
    pub fn anchor_depth(&self) -> usize {
        match self.flavor {
            Flavor::Vertex => self.n0,
            Flavor::Edge => self.n0.max(1),
        }
    }

    pub fn contains_site(&self, site: Site) -> bool {
        match site {
            Site::Base(i) => i < self.base_site_count(),
            Site::Tail { tail, depth } => tail < self.tail_count() && depth >= 1,
        }
    }

    fn check_coupling_key(&self, key: CouplingKey) -> Result<()> {
        match (self.flavor, key) {
            (Flavor::Vertex, CouplingKey::Across(e)) => {
                if !self.graph.contains_edge(e) {
                    return Err(Error::UnknownEdge(e.to_string()));
                }
            }
            (Flavor::Edge, CouplingKey::Between(a, b)) => {
                for e in [a, b] {
                    if !self.graph.contains_edge(e) {
                        return Err(Error::UnknownEdge(e.to_string()));
                    }
                }
                if !self.graph.line_neighbors(a)?.iter().any(|&(other, _)| other == b) {
                    return Err(Error::NotNearestNeighbor(format!("{a} and {b}")));
                }
            }
            (Flavor::Vertex, _) => return Err(Error::FlavorMismatch("vertex flavor couplings sit across edges")),
            (Flavor::Edge, _) => return Err(Error::FlavorMismatch("edge flavor couplings sit between edge pairs")),
        }
        Ok(())
    }

    /// Potential of the free operator at `site`.
    pub fn free_potential(&self, site: Site) -> f64 {
        match self.flavor {
            Flavor::Vertex => 2.0 - self.graph.degree(site.vertex()).unwrap_or(2) as f64,
            Flavor::Edge => 0.0,
        }
    }

    /// `W_x`.
    pub fn potential(&self, site: Site) -> f64 {
        self.overrides.potential.get(&site).copied().unwrap_or_else(|| self.free_potential(site))
    }

    pub fn coupling(&self, key: CouplingKey) -> f64 {
        self.overrides.coupling.get(&key).copied().unwrap_or(1.0)
    }

    /// Off-diagonal row of `site`: each neighbour with its coupling. Parallel
    /// edges contribute one entry each.
    pub fn neighbors(&self, site: Site) -> Result<Vec<(Site, f64)>> {
        if !self.contains_site(site) {
            return Err(Error::UnknownSite(site.to_string()));
        }
        let mut out = Vec::new();
        match self.flavor {
            Flavor::Vertex => {
                let v = site.vertex();
                for e in self.graph.incident_edges(v)? {
                    let other = self.graph.opposite(e, v)?;
                    out.push((Site::from(other), self.coupling(CouplingKey::Across(e))));
                }
            }
            Flavor::Edge => {
                let e = site.edge();
                for (other, _) in self.graph.line_neighbors(e)? {
                    out.push((Site::from(other), self.coupling(CouplingKey::between(e, other))));
                }
            }
        }
        Ok(out)
    }

    /// Sites at which the operator may differ from the free one, plus one more layer.
    pub fn sites_to_depth(&self, depth: usize) -> impl Iterator<Item = Site> + '_ {
        Layout::new(self, depth).sites()
    }

    /// Gershgorin radius `max_x (|W_x| + Σ_y |c_{x:y}|)`. Sites beyond `n0 + 1`
    /// repeat the free value 2.
    pub fn gershgorin_bound(&self) -> f64 {
        self.sites_to_depth(self.n0 + 1)
            .map(|s| {
                let row: f64 = self.neighbors(s).unwrap_or_default().iter().map(|(_, c)| c.abs()).sum();
                self.potential(s).abs() + row
            })
            .fold(2.0, f64::max)
    }

    /// `j:n` for tails (1-based), the vertex name or `e<i>` for the base.
    pub fn site_label(&self, site: Site) -> String {
        match (self.flavor, site) {
            (Flavor::Vertex, Site::Base(i)) => self.graph.vertex_name(i).into(),
            (Flavor::Edge, Site::Base(i)) => format!("e{i}"),
            (_, Site::Tail { tail, depth }) => format!("{}:{}", tail + 1, depth),
        }
    }
}

/// Index map for the sites of depth `<= depth`: base sites first, then each
/// tail's sites `1..=depth` in order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    base: usize,
    tails: usize,
    depth: usize,
}

impl Layout {
    pub fn new(op: &OperatorCoefficients, depth: usize) -> Self {
        Layout { base: op.base_site_count(), tails: op.tail_count(), depth }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn len(&self) -> usize {
        self.base + self.tails * self.depth
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, site: Site) -> Option<usize> {
        match site {
            Site::Base(i) if i < self.base => Some(i),
            Site::Tail { tail, depth } if tail < self.tails && depth >= 1 && depth <= self.depth => {
                Some(self.base + tail * self.depth + depth - 1)
            }
            _ => None,
        }
    }

    pub fn site(&self, index: usize) -> Site {
        if index < self.base {
            Site::Base(index)
        } else {
            let r = index - self.base;
            Site::Tail { tail: r / self.depth, depth: r % self.depth + 1 }
        }
    }

    pub fn sites(self) -> impl Iterator<Item = Site> {
        (0..self.len()).map(move |i| self.site(i))
    }
}

/// Scalars a [`SiteFunction`] may carry: `f64` or `Complex<f64>`.
pub trait Scalar: ComplexField<RealField = f64> + Copy {}
impl<T: ComplexField<RealField = f64> + Copy> Scalar for T {}

/// Values on all sites up to a working depth.
#[derive(Clone, Debug, PartialEq)]
pub struct SiteFunction<T> {
    flavor: Flavor,
    layout: Layout,
    values: Vec<T>,
}

impl<T: Scalar> SiteFunction<T> {
    pub fn zeros(op: &OperatorCoefficients, depth: usize) -> Self {
        let layout = Layout::new(op, depth);
        SiteFunction { flavor: op.flavor, layout, values: alloc::vec![T::zero(); layout.len()] }
    }

    pub fn from_fn(op: &OperatorCoefficients, depth: usize, mut f: impl FnMut(Site) -> T) -> Self {
        let layout = Layout::new(op, depth);
        SiteFunction { flavor: op.flavor, layout, values: layout.sites().map(&mut f).collect() }
    }

    /// Values in [`Layout`] order.
    pub fn from_values(op: &OperatorCoefficients, depth: usize, values: Vec<T>) -> Result<Self> {
        let layout = Layout::new(op, depth);
        if values.len() != layout.len() {
            return Err(Error::DimensionMismatch { expected: layout.len(), found: values.len() });
        }
        Ok(SiteFunction { flavor: op.flavor, layout, values })
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn depth(&self) -> usize {
        self.layout.depth
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn get(&self, site: Site) -> Option<T> {
        self.layout.index(site).map(|i| self.values[i])
    }

    /// Value at `site`; zero outside the stored window.
    pub fn at(&self, site: Site) -> T {
        self.get(site).unwrap_or_else(T::zero)
    }

    pub fn set(&mut self, site: Site, value: T) -> Result<()> {
        let i = self.layout.index(site).ok_or_else(|| Error::UnknownSite(site.to_string()))?;
        self.values[i] = value;
        Ok(())
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.modulus()))
    }

    /// `a * self + b * other` on the common depth.
    pub fn combine(&self, a: T, other: &Self, b: T) -> Self {
        let layout = if self.layout.depth <= other.layout.depth { self.layout } else { other.layout };
        let values = layout.sites().map(|s| a * self.at(s) + b * other.at(s)).collect();
        SiteFunction { flavor: self.flavor, layout, values }
    }

    pub fn scaled(&self, a: T) -> Self {
        SiteFunction { flavor: self.flavor, layout: self.layout, values: self.values.iter().map(|&v| a * v).collect() }
    }
}

/// `(Lψ)` on every site of depth `<= depth`; `psi` must be known one layer deeper.
pub fn apply<T: Scalar>(op: &OperatorCoefficients, psi: &SiteFunction<T>, depth: usize) -> Result<SiteFunction<T>> {
    if psi.flavor != op.flavor {
        return Err(Error::FlavorMismatch("function and operator flavors differ"));
    }
    if psi.depth() < depth + 1 {
        return Err(Error::InsufficientDepth { have: psi.depth(), need: depth + 1 });
    }
    let layout = Layout::new(op, depth);
    let mut values = Vec::with_capacity(layout.len());
    for site in layout.sites() {
        let mut acc = T::from_real(op.potential(site)) * psi.at(site);
        for (nb, c) in op.neighbors(site)? {
            acc += T::from_real(c) * psi.at(nb);
        }
        values.push(acc);
    }
    Ok(SiteFunction { flavor: op.flavor, layout, values })
}

/// `L'`, the operator truncated to the base sites, together with the rows that
/// couple the first site of each tail back into the base.
#[derive(Clone, Debug, PartialEq)]
pub struct BaseOperator {
    pub flavor: Flavor,
    /// Symmetric, indexed by base sites.
    pub matrix: DMatrix<f64>,
    /// Base sites a tail touches: the nests (V) or the base edges meeting a nest (E).
    pub nests: Vec<usize>,
    /// Row `j` holds the couplings from tail site `(j, 1)` to each base site.
    /// A base function extended by zero onto the tails solves the full equation
    /// exactly when it is a base eigenfunction annihilated by every row.
    pub boundary: DMatrix<f64>,
}

pub fn restrict_to_base(op: &OperatorCoefficients) -> BaseOperator {
    let n = op.base_site_count();
    let k = op.tail_count();
    let mut matrix = DMatrix::zeros(n, n);
    for i in 0..n {
        matrix[(i, i)] = op.potential(Site::Base(i));
        for (nb, c) in op.neighbors(Site::Base(i)).expect("base site") {
            if let Site::Base(j) = nb {
                matrix[(i, j)] += c;
            }
        }
    }
    let mut boundary = DMatrix::zeros(k, n);
    let mut nests = BTreeSet::new();
    for tail in 0..k {
        for (nb, c) in op.neighbors(Site::Tail { tail, depth: 1 }).expect("tail site") {
            if let Site::Base(j) = nb {
                boundary[(tail, j)] += c;
                nests.insert(j);
            }
        }
    }
    BaseOperator { flavor: op.flavor, matrix, nests: nests.into_iter().collect(), boundary }
}
