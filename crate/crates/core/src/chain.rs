//! Finitely supported 0- and 1-chains and the boundary operator.

use alloc::collections::BTreeMap;
use alloc::string::ToString;

use crate::error::{Error, Result};
use crate::graph::{Edge, OrientedEdge, TailedGraph, Vertex};

/// Real 1-chain. One coefficient per edge, stored against the canonical
/// orientation, so `coeff(reverse(R)) = -coeff(R)` holds by construction.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Chain1 {
    coeffs: BTreeMap<Edge, f64>,
}

impl Chain1 {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, oe: OrientedEdge) -> f64 {
        let c = self.coeffs.get(&oe.edge).copied().unwrap_or(0.0);
        if oe.reversed {
            -c
        } else {
            c
        }
    }

    /// Adds `value` to the coefficient of `oe`.
    pub fn add(&mut self, oe: OrientedEdge, value: f64) {
        let v = if oe.reversed { -value } else { value };
        *self.coeffs.entry(oe.edge).or_insert(0.0) += v;
    }

    pub fn set(&mut self, oe: OrientedEdge, value: f64) {
        let v = if oe.reversed { -value } else { value };
        self.coeffs.insert(oe.edge, v);
    }

    /// `(edge, coefficient)` pairs in canonical orientation.
    pub fn iter(&self) -> impl Iterator<Item = (Edge, f64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &Chain1, b: f64) -> Chain1 {
        let mut out = Chain1::new();
        for (e, c) in self.iter() {
            out.add(OrientedEdge::canonical(e), a * c);
        }
        for (e, c) in other.iter() {
            out.add(OrientedEdge::canonical(e), b * c);
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// Real 0-chain.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Chain0 {
    coeffs: BTreeMap<Vertex, f64>,
}

impl Chain0 {
    pub fn get(&self, v: Vertex) -> f64 {
        self.coeffs.get(&v).copied().unwrap_or(0.0)
    }

    pub fn add(&mut self, v: Vertex, value: f64) {
        *self.coeffs.entry(v).or_insert(0.0) += value;
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, f64)> + '_ {
        self.coeffs.iter().map(|(&v, &c)| (v, c))
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Largest `|coefficient|` over vertices satisfying `keep`.
    pub fn max_abs_where(&self, keep: impl Fn(Vertex) -> bool) -> f64 {
        self.iter().filter(|&(v, _)| keep(v)).fold(0.0, |m, (_, c)| m.max(c.abs()))
    }
}

/// `∂c`, with `∂(T T') = T' - T`.
pub fn boundary(c: &Chain1, graph: &TailedGraph) -> Result<Chain0> {
    let mut out = Chain0::default();
    for (e, coeff) in c.iter() {
        if !graph.contains_edge(e) {
            return Err(Error::UnknownEdge(e.to_string()));
        }
        let (source, target) = graph.endpoints(e)?;
        out.add(target, coeff);
        out.add(source, -coeff);
    }
    Ok(out)
}
