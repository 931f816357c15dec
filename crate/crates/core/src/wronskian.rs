//! The Wronskian 1-chain of two solutions and its tail constants.
//!
//! Vertex flavor: on the oriented edge `(T T')`, `b (ψ1_T ψ2_T' - ψ2_T ψ1_T')`.
//! Edge flavor: on the oriented edge `R = (T T')`, the sum over edges `R'` meeting
//! `R` at the source `T` of `d (ψ1_R ψ2_R' - ψ2_R ψ1_R')`. For solutions the two
//! orientations of an edge then carry opposite values; for the edge flavor that
//! is a consequence of the equation at `R`, not of the storage.

use alloc::vec::Vec;

use crate::chain::{boundary, Chain0, Chain1};
use crate::error::{Error, Result};
use crate::graph::{Edge, OrientedEdge, Vertex};
use crate::operator::{CouplingKey, Flavor, OperatorCoefficients, Site, SiteFunction};
use crate::tol;

#[derive(Clone, Debug, PartialEq)]
pub struct WronskianChain {
    pub chain: Chain1,
    pub flavor: Flavor,
    /// Edges of depth `<= depth` carry coefficients.
    pub depth: usize,
}

fn check_inputs(op: &OperatorCoefficients, psi1: &SiteFunction<f64>, psi2: &SiteFunction<f64>, depth: usize) -> Result<()> {
    if psi1.flavor() != op.flavor() || psi2.flavor() != op.flavor() {
        return Err(Error::FlavorMismatch("function and operator flavors differ"));
    }
    let have = psi1.depth().min(psi2.depth());
    if have < depth + 1 {
        return Err(Error::InsufficientDepth { have, need: depth + 1 });
    }
    Ok(())
}

fn vertex_value(psi: &SiteFunction<f64>, v: Vertex) -> f64 {
    psi.at(Site::from(v))
}

/// Edge flavor value of `oe` read at its source vertex.
fn edge_sum(op: &OperatorCoefficients, psi1: &SiteFunction<f64>, psi2: &SiteFunction<f64>, oe: OrientedEdge) -> Result<f64> {
    let (source, _) = oe.ends(op.graph())?;
    let r = Site::from(oe.edge);
    let mut w = 0.0;
    for (other, shared) in op.graph().line_neighbors(oe.edge)? {
        if shared != source {
            continue;
        }
        let o = Site::from(other);
        let d = op.coupling(CouplingKey::between(oe.edge, other));
        w += d * (psi1.at(r) * psi2.at(o) - psi2.at(r) * psi1.at(o));
    }
    Ok(w)
}

/// `W(ψ1, ψ2)` on every edge of depth `<= depth`. Both functions must be known to `depth + 1`.
pub fn wronskian(
    op: &OperatorCoefficients,
    psi1: &SiteFunction<f64>,
    psi2: &SiteFunction<f64>,
    depth: usize,
) -> Result<WronskianChain> {
    check_inputs(op, psi1, psi2, depth)?;
    let mut chain = Chain1::new();
    for e in op.graph().edges_to_depth(depth) {
        let oe = OrientedEdge::canonical(e);
        let w = match op.flavor() {
            Flavor::Vertex => {
                let (s, t) = oe.ends(op.graph())?;
                let b = op.coupling(CouplingKey::Across(e));
                let (a1, a2) = (vertex_value(psi1, s), vertex_value(psi2, s));
                let (b1, b2) = (vertex_value(psi1, t), vertex_value(psi2, t));
                b * (a1 * b2 - a2 * b1)
            }
            Flavor::Edge => edge_sum(op, psi1, psi2, oe)?,
        };
        chain.set(oe, w);
    }
    Ok(WronskianChain { chain, flavor: op.flavor(), depth })
}

/// Value computed directly on `oe` as oriented, without using the stored
/// canonical orientation. For the edge flavor this reads the sum at the source of
/// `oe`, which for the reversed orientation is the other endpoint.
pub fn oriented_value(
    op: &OperatorCoefficients,
    psi1: &SiteFunction<f64>,
    psi2: &SiteFunction<f64>,
    oe: OrientedEdge,
) -> Result<f64> {
    match op.flavor() {
        Flavor::Vertex => {
            let (s, t) = oe.ends(op.graph())?;
            let b = op.coupling(CouplingKey::Across(oe.edge));
            Ok(b * (vertex_value(psi1, s) * vertex_value(psi2, t) - vertex_value(psi2, s) * vertex_value(psi1, t)))
        }
        Flavor::Edge => edge_sum(op, psi1, psi2, oe),
    }
}

impl WronskianChain {
    /// `∂W`.
    pub fn boundary(&self, op: &OperatorCoefficients) -> Result<Chain0> {
        boundary(&self.chain, op.graph())
    }

    /// Largest `|∂W|` over vertices of depth `<= depth - 1`, where every incident
    /// edge carries a coefficient.
    pub fn boundary_residual(&self, op: &OperatorCoefficients) -> Result<f64> {
        let b = self.boundary(op)?;
        Ok(b.max_abs_where(|v| v.depth() < self.depth))
    }
}

/// `κ_j`: the constant coefficient of `W` on the outward tail edges `R_{j,n}`,
/// read for `n` from `anchor + 1` to `depth`.
pub fn tail_constants(w: &WronskianChain, op: &OperatorCoefficients) -> Result<Vec<f64>> {
    let f = op.anchor_depth();
    if w.depth < f + 2 {
        return Err(Error::InsufficientDepth { have: w.depth, need: f + 2 });
    }
    let mut out = Vec::with_capacity(op.tail_count());
    for tail in 0..op.tail_count() {
        let values: Vec<f64> = (f + 1..=w.depth)
            .map(|depth| w.chain.get(OrientedEdge::canonical(Edge::Tail { tail, depth })))
            .collect();
        let first = values[0];
        let spread = values.iter().fold(0.0f64, |m, v| m.max((v - first).abs()));
        if spread > tol::TAIL_CONSTANCY {
            return Err(Error::NotConstant { tail, spread });
        }
        out.push(first);
    }
    Ok(out)
}
