//! Tailed graphs: a finite base graph with half-line tails attached at nest vertices.
//!
//! Tail `j` has vertices `T_{j,n}` for `n >= 1` and edges `R_{j,n}` running from
//! `T_{j,n-1}` to `T_{j,n}`; `T_{j,0}` is the nest, a base vertex. Tail sites are
//! addressed by `(tail, depth)` and never materialized.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Vertex {
    Base(usize),
    /// `T_{tail,depth}` with `depth >= 1`.
    Tail { tail: usize, depth: usize },
}

impl Vertex {
    pub fn depth(self) -> usize {
        match self {
            Vertex::Base(_) => 0,
            Vertex::Tail { depth, .. } => depth,
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Base(i) => write!(f, "base vertex #{i}"),
            Vertex::Tail { tail, depth } => write!(f, "T[{}:{}]", tail + 1, depth),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Edge {
    Base(usize),
    /// `R_{tail,depth}` with `depth >= 1`, from `T_{tail,depth-1}` to `T_{tail,depth}`.
    Tail { tail: usize, depth: usize },
}

impl Edge {
    pub fn depth(self) -> usize {
        match self {
            Edge::Base(_) => 0,
            Edge::Tail { depth, .. } => depth,
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Edge::Base(i) => write!(f, "base edge #{i}"),
            Edge::Tail { tail, depth } => write!(f, "R[{}:{}]", tail + 1, depth),
        }
    }
}

/// An edge with an orientation. The canonical orientation of a base edge is the
/// order it was declared in; tail edges point away from the nest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrientedEdge {
    pub edge: Edge,
    pub reversed: bool,
}

impl OrientedEdge {
    pub fn canonical(edge: Edge) -> Self {
        OrientedEdge { edge, reversed: false }
    }

    pub fn reverse(self) -> Self {
        OrientedEdge { edge: self.edge, reversed: !self.reversed }
    }

    /// `(source, target)` of this orientation.
    pub fn ends(self, graph: &TailedGraph) -> Result<(Vertex, Vertex)> {
        let (a, b) = graph.endpoints(self.edge)?;
        Ok(if self.reversed { (b, a) } else { (a, b) })
    }
}

/// Input description of a tailed graph, by vertex name.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
    /// Nest vertex of each tail, in tail order.
    pub tails: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TailedGraph {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    edges: Vec<(usize, usize)>,
    nests: Vec<usize>,
    incident: Vec<Vec<usize>>,
    tails_at: Vec<Vec<usize>>,
}

/// Validate a [`GraphSpec`] and build the graph.
pub fn build_graph(spec: &GraphSpec) -> Result<TailedGraph> {
    TailedGraph::new(spec)
}

impl TailedGraph {
    pub fn new(spec: &GraphSpec) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, name) in spec.vertices.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(name.clone()));
            }
        }
        let n = spec.vertices.len();
        let lookup = |edge: usize, name: &String| {
            index.get(name).copied().ok_or_else(|| Error::DanglingEdge { edge, vertex: name.clone() })
        };
        let mut edges = Vec::with_capacity(spec.edges.len());
        let mut incident = alloc::vec![Vec::new(); n];
        for (e, (a, b)) in spec.edges.iter().enumerate() {
            let (ia, ib) = (lookup(e, a)?, lookup(e, b)?);
            if ia == ib {
                return Err(Error::SelfLoop { edge: e, vertex: a.clone() });
            }
            incident[ia].push(e);
            incident[ib].push(e);
            edges.push((ia, ib));
        }
        let mut nests = Vec::with_capacity(spec.tails.len());
        let mut tails_at = alloc::vec![Vec::new(); n];
        for (j, nest) in spec.tails.iter().enumerate() {
            let v = index
                .get(nest)
                .copied()
                .ok_or_else(|| Error::UnknownNest { tail: j + 1, vertex: nest.clone() })?;
            tails_at[v].push(j);
            nests.push(v);
        }
        if nests.is_empty() {
            return Err(Error::NoTails);
        }
        for v in 0..n {
            let degree = incident[v].len() + tails_at[v].len();
            if degree < 2 {
                return Err(Error::EndVertex { vertex: spec.vertices[v].clone(), degree });
            }
        }
        Ok(TailedGraph { names: spec.vertices.clone(), index, edges, nests, incident, tails_at })
    }

    /// Reconstruct the input description.
    pub fn spec(&self) -> GraphSpec {
        GraphSpec {
            vertices: self.names.clone(),
            edges: self.edges.iter().map(|&(a, b)| (self.names[a].clone(), self.names[b].clone())).collect(),
            tails: self.nests.iter().map(|&v| self.names[v].clone()).collect(),
        }
    }

    pub fn base_vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn base_edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `k`, the number of tails.
    pub fn tail_count(&self) -> usize {
        self.nests.len()
    }

    /// `s`, the number of distinct nests.
    pub fn nest_count(&self) -> usize {
        self.tails_at.iter().filter(|t| !t.is_empty()).count()
    }

    /// Base vertex index of the nest of `tail`.
    pub fn nest(&self, tail: usize) -> usize {
        self.nests[tail]
    }

    pub fn nests(&self) -> &[usize] {
        &self.nests
    }

    /// Tails attached at base vertex `v`.
    pub fn tails_at(&self, v: usize) -> &[usize] {
        &self.tails_at[v]
    }

    pub fn base_edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// `T_{tail,depth}`, with depth 0 resolving to the nest.
    pub fn tail_vertex(&self, tail: usize, depth: usize) -> Vertex {
        if depth == 0 {
            Vertex::Base(self.nests[tail])
        } else {
            Vertex::Tail { tail, depth }
        }
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        match v {
            Vertex::Base(i) => i < self.names.len(),
            Vertex::Tail { tail, depth } => tail < self.nests.len() && depth >= 1,
        }
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        match e {
            Edge::Base(i) => i < self.edges.len(),
            Edge::Tail { tail, depth } => tail < self.nests.len() && depth >= 1,
        }
    }

    /// Endpoints in canonical orientation, `(source, target)`.
    pub fn endpoints(&self, e: Edge) -> Result<(Vertex, Vertex)> {
        if !self.contains_edge(e) {
            return Err(Error::UnknownEdge(e.to_string()));
        }
        Ok(match e {
            Edge::Base(i) => {
                let (a, b) = self.edges[i];
                (Vertex::Base(a), Vertex::Base(b))
            }
            Edge::Tail { tail, depth } => (self.tail_vertex(tail, depth - 1), Vertex::Tail { tail, depth }),
        })
    }

    /// Edges incident to `v`; parallel edges appear once each.
    pub fn incident_edges(&self, v: Vertex) -> Result<Vec<Edge>> {
        if !self.contains_vertex(v) {
            return Err(Error::UnknownSite(v.to_string()));
        }
        Ok(match v {
            Vertex::Base(i) => self.incident[i]
                .iter()
                .map(|&e| Edge::Base(e))
                .chain(self.tails_at[i].iter().map(|&tail| Edge::Tail { tail, depth: 1 }))
                .collect(),
            Vertex::Tail { tail, depth } => {
                alloc::vec![Edge::Tail { tail, depth }, Edge::Tail { tail, depth: depth + 1 }]
            }
        })
    }

    /// `m_T`, counting tail attachments.
    pub fn degree(&self, v: Vertex) -> Result<usize> {
        self.incident_edges(v).map(|e| e.len())
    }

    /// The vertex at the other end of `e` from `v`.
    pub fn opposite(&self, e: Edge, v: Vertex) -> Result<Vertex> {
        let (a, b) = self.endpoints(e)?;
        if a == v {
            Ok(b)
        } else if b == v {
            Ok(a)
        } else {
            Err(Error::NotNearestNeighbor(format!("{e} and {v}")))
        }
    }

    /// All edges joining `a` and `b` (several when the base has parallel edges).
    pub fn edges_between(&self, a: Vertex, b: Vertex) -> Result<Vec<Edge>> {
        Ok(self
            .incident_edges(a)?
            .into_iter()
            .filter(|&e| self.opposite(e, a).map(|o| o == b).unwrap_or(false))
            .collect())
    }

    /// Edges `R' != R` sharing an endpoint `T` with `R`, tagged with `T`.
    ///
    /// A parallel edge shares both endpoints and is listed once per shared vertex.
    pub fn line_neighbors(&self, e: Edge) -> Result<Vec<(Edge, Vertex)>> {
        let (a, b) = self.endpoints(e)?;
        let mut out = Vec::new();
        for t in [a, b] {
            for other in self.incident_edges(t)? {
                if other != e {
                    out.push((other, t));
                }
            }
        }
        Ok(out)
    }

    /// Base vertices followed by tail vertices of depth `1..=depth`, tail-major.
    pub fn vertices_to_depth(&self, depth: usize) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = (0..self.names.len()).map(Vertex::Base).collect();
        for tail in 0..self.nests.len() {
            out.extend((1..=depth).map(|d| Vertex::Tail { tail, depth: d }));
        }
        out
    }

    /// Base edges followed by tail edges of depth `1..=depth`, tail-major.
    pub fn edges_to_depth(&self, depth: usize) -> Vec<Edge> {
        let mut out: Vec<Edge> = (0..self.edges.len()).map(Edge::Base).collect();
        for tail in 0..self.nests.len() {
            out.extend((1..=depth).map(|d| Edge::Tail { tail, depth: d }));
        }
        out
    }

    /// Human-readable key: the base name, or `j:n` with 1-based tail index.
    pub fn vertex_label(&self, v: Vertex) -> String {
        match v {
            Vertex::Base(i) => self.names[i].clone(),
            Vertex::Tail { tail, depth } => format!("{}:{}", tail + 1, depth),
        }
    }
}
