//! Tail modes and the symplectic phase space `ℝ^{2k}`.
//!
//! On a free tail every solution of `ψ_{n-1} + ψ_{n+1} = λψ_n` is `αC_n + βS_n`
//! with `C_0 = 1, C_1 = 2/λ` and `S_0 = 0, S_1 = 1`; the Casoratian
//! `C_n S_{n+1} - S_n C_{n+1}` is identically 1. Near `λ = 0` the C mode is
//! seeded with `C_1 = λ/2` instead, which keeps the Casoratian at 1.
//!
//! A global solution is fixed by its values on the base and on each tail up to
//! the anchor depth `f` plus one. Its phase vector collects `(α_j, β_j)` per tail;
//! the set of all of them is `Λ_λ^∞`.

use alloc::vec::Vec;

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;
use crate::operator::{Layout, OperatorCoefficients, Site, SiteFunction};
use crate::tol;

/// The two tail modes at a fixed `λ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailModes {
    lambda: f64,
    a_plus: Complex<f64>,
    a_minus: Complex<f64>,
    c1: f64,
}

/// Tail modes at `λ`; fails at the band edges `|λ| = 2`.
pub fn tail_modes(lambda: f64) -> Result<TailModes> {
    TailModes::new(lambda)
}

impl TailModes {
    pub fn new(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || (lambda.abs() - 2.0).abs() <= tol::BAND_EDGE {
            return Err(Error::DegenerateBand(lambda));
        }
        let disc = lambda * lambda - 4.0;
        let (a_plus, a_minus) = if disc > 0.0 {
            // larger root first to avoid cancellation, the other from a₊a₋ = 1
            let big = 0.5 * (lambda + lambda.signum() * libm::sqrt(disc));
            let small = 1.0 / big;
            let (p, m) = if lambda > 0.0 { (big, small) } else { (small, big) };
            (Complex::new(p, 0.0), Complex::new(m, 0.0))
        } else {
            let im = 0.5 * libm::sqrt(-disc);
            (Complex::new(0.5 * lambda, im), Complex::new(0.5 * lambda, -im))
        };
        let c1 = if lambda.abs() < tol::LAMBDA_ZERO { 0.5 * lambda } else { 2.0 / lambda };
        Ok(TailModes { lambda, a_plus, a_minus, c1 })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `a₊ = ½(λ + √(λ²-4))`; equals `e^{iθ}` with `θ ∈ (0, π)` inside the band.
    pub fn a_plus(&self) -> Complex<f64> {
        self.a_plus
    }

    pub fn a_minus(&self) -> Complex<f64> {
        self.a_minus
    }

    /// `(C_0, C_1)`.
    pub fn c_seed(&self) -> (f64, f64) {
        (1.0, self.c1)
    }

    /// True when the `λ ≈ 0` seed `(1, λ/2)` is in use.
    pub fn is_fallback(&self) -> bool {
        self.lambda.abs() < tol::LAMBDA_ZERO
    }

    /// `(C_n, S_n)`.
    pub fn values(&self, n: usize) -> (f64, f64) {
        let (mut c0, mut c1) = (1.0, self.c1);
        let (mut s0, mut s1) = (0.0, 1.0);
        for _ in 0..n {
            let c2 = self.lambda * c1 - c0;
            let s2 = self.lambda * s1 - s0;
            (c0, c1, s0, s1) = (c1, c2, s1, s2);
        }
        (c0, s0)
    }

    pub fn c(&self, n: usize) -> f64 {
        self.values(n).0
    }

    pub fn s(&self, n: usize) -> f64 {
        self.values(n).1
    }

    /// `αC_n + βS_n`.
    pub fn eval(&self, alpha: f64, beta: f64, n: usize) -> f64 {
        let (c, s) = self.values(n);
        alpha * c + beta * s
    }

    /// `(α, β)` of the tail solution taking values `psi_f, psi_f1` at depths `f, f+1`.
    pub fn phase_of(&self, f: usize, psi_f: f64, psi_f1: f64) -> (f64, f64) {
        let (cf, sf) = self.values(f);
        let (cf1, sf1) = self.values(f + 1);
        let det = cf * sf1 - sf * cf1;
        ((sf1 * psi_f - sf * psi_f1) / det, (cf * psi_f1 - cf1 * psi_f) / det)
    }

    /// Amplitudes `(p, q)` with `αC_n + βS_n = p a₊ⁿ + q a₋ⁿ`; `p` is outgoing.
    pub fn wave_amplitudes(&self, alpha: f64, beta: f64) -> (Complex<f64>, Complex<f64>) {
        let d = self.a_plus - self.a_minus;
        let c1 = Complex::new(self.c1, 0.0);
        let (pc, qc) = ((c1 - self.a_minus) / d, (self.a_plus - c1) / d);
        let ps = Complex::new(1.0, 0.0) / d;
        (pc * alpha + ps * beta, qc * alpha - ps * beta)
    }

    /// Amplitudes `(p, q)` of the tail solution `p a₊ⁿ + q a₋ⁿ` taking values
    /// `psi_f, psi_f1` at depths `f, f+1`. Unlike going through `(α, β)` this
    /// stays well conditioned near `λ = 0`.
    pub fn wave_of(&self, f: usize, psi_f: f64, psi_f1: f64) -> (Complex<f64>, Complex<f64>) {
        let (ap, am) = (self.a_plus, self.a_minus);
        let d = ap - am;
        let (x, y) = (Complex::new(psi_f, 0.0), Complex::new(psi_f1, 0.0));
        let n = f as i32;
        (am.powi(n) * (y - am * x) / d, ap.powi(n) * (ap * x - y) / d)
    }

    /// The root of `a² - λa + 1` inside the unit disk, for `|λ| > 2`.
    pub fn decaying_root(&self) -> Result<f64> {
        if self.lambda.abs() <= 2.0 {
            return Err(Error::InsideBand(self.lambda));
        }
        Ok(if self.a_minus.re.abs() < 1.0 { self.a_minus.re } else { self.a_plus.re })
    }
}

/// A point `(α_1, β_1, …, α_k, β_k)` of `ℝ^{2k}`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhaseVector {
    coords: Vec<f64>,
}

impl PhaseVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if !coords.len().is_multiple_of(2) {
            return Err(Error::DimensionMismatch { expected: coords.len() + 1, found: coords.len() });
        }
        Ok(PhaseVector { coords })
    }

    pub fn zeros(k: usize) -> Self {
        PhaseVector { coords: alloc::vec![0.0; 2 * k] }
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Self {
        PhaseVector { coords: pairs.iter().flat_map(|&(a, b)| [a, b]).collect() }
    }

    /// Unit vector along `C_j` (`beta = false`) or `S_j` (`beta = true`), 0-based `j`.
    pub fn axis(k: usize, j: usize, beta: bool) -> Self {
        let mut v = Self::zeros(k);
        v.coords[2 * j + beta as usize] = 1.0;
        v
    }

    pub fn k(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn alpha(&self, j: usize) -> f64 {
        self.coords[2 * j]
    }

    pub fn beta(&self, j: usize) -> f64 {
        self.coords[2 * j + 1]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.coords.iter().map(|x| x * x).sum())
    }
}

/// `⟨u, v⟩ = Σ_j (α_j(u) β_j(v) - β_j(u) α_j(v))`.
pub fn skew_product(u: &PhaseVector, v: &PhaseVector) -> Result<f64> {
    if u.k() != v.k() {
        return Err(Error::DimensionMismatch { expected: u.k(), found: v.k() });
    }
    Ok((0..u.k()).map(|j| u.alpha(j) * v.beta(j) - u.beta(j) * v.alpha(j)).sum())
}

/// Per-tail terms of the skew product.
pub fn skew_terms(u: &PhaseVector, v: &PhaseVector) -> Vec<f64> {
    (0..u.k().min(v.k())).map(|j| u.alpha(j) * v.beta(j) - u.beta(j) * v.alpha(j)).collect()
}

/// A subspace of `ℝ^{2k}` given by independent vectors.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LagrangianFrame {
    pub lambda: f64,
    pub k: usize,
    pub vectors: Vec<PhaseVector>,
    /// Global solutions with zero phase vector (vanishing on every tail).
    pub kernel_dim: usize,
    /// Dimension of the space of global solutions behind the frame.
    pub solution_dim: usize,
}

impl LagrangianFrame {
    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    /// Vectors as columns of a `2k × rank` matrix.
    pub fn matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(2 * self.k, self.vectors.len());
        for (c, v) in self.vectors.iter().enumerate() {
            m.set_column(c, &DVector::from_column_slice(v.as_slice()));
        }
        m
    }

    /// Largest `|⟨u, v⟩|` over pairs of frame vectors.
    pub fn max_skew(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, u) in self.vectors.iter().enumerate() {
            for v in &self.vectors[i + 1..] {
                worst = worst.max(skew_product(u, v).unwrap_or(f64::NAN).abs());
            }
        }
        worst
    }
}

/// The finite linear system whose null space is the space of global solutions at `λ`.
///
/// Unknowns: every site of depth `<= f + 1`. Equations: `(L - λ)ψ = 0` at every
/// site of depth `<= f`. Beyond `f + 1` the free recursion determines the rest,
/// so no truncation is involved.
#[derive(Clone, Debug)]
pub struct MatchingSystem {
    anchor: usize,
    k: usize,
    base_sites: usize,
    rows: Layout,
    cols: Layout,
    coupling: DMatrix<f64>,
    diagonal: Vec<(usize, usize)>,
}

impl MatchingSystem {
    pub fn new(op: &OperatorCoefficients) -> Self {
        let anchor = op.anchor_depth();
        let rows = Layout::new(op, anchor);
        let cols = Layout::new(op, anchor + 1);
        let mut coupling = DMatrix::zeros(rows.len(), cols.len());
        let mut diagonal = Vec::with_capacity(rows.len());
        for (r, site) in rows.sites().enumerate() {
            let c = cols.index(site).expect("row site is a column site");
            coupling[(r, c)] += op.potential(site);
            diagonal.push((r, c));
            for (nb, value) in op.neighbors(site).expect("site in graph") {
                let cn = cols.index(nb).expect("neighbour within one layer");
                coupling[(r, cn)] += value;
            }
        }
        MatchingSystem { anchor, k: op.tail_count(), base_sites: op.base_site_count(), rows, cols, coupling, diagonal }
    }

    pub fn anchor(&self) -> usize {
        self.anchor
    }

    /// Column layout: sites of depth `<= anchor + 1`.
    pub fn unknowns(&self) -> Layout {
        self.cols
    }

    pub fn equations(&self) -> Layout {
        self.rows
    }

    pub fn matrix(&self, lambda: f64) -> DMatrix<f64> {
        let mut m = self.coupling.clone();
        for &(r, c) in &self.diagonal {
            m[(r, c)] -= lambda;
        }
        m
    }

    /// Orthonormal basis of global solutions, restricted to the unknowns.
    pub fn null_space(&self, lambda: f64) -> DMatrix<f64> {
        linalg::null_space(&self.matrix(lambda))
    }

    /// Values of a solution vector at `(tail, depth)`, resolving depth 0 to the nest.
    fn tail_value(&self, x: &[f64], nest: usize, tail: usize, depth: usize) -> f64 {
        if depth == 0 {
            x[nest]
        } else {
            x[self.cols.index(Site::Tail { tail, depth }).expect("within window")]
        }
    }

    /// `(ψ_{j,f}, ψ_{j,f+1})` of a solution vector for every tail `j`.
    pub fn tail_data(&self, op: &OperatorCoefficients, x: &[f64]) -> Vec<(f64, f64)> {
        let f = self.anchor;
        (0..self.k)
            .map(|tail| {
                let nest = op.graph().nest(tail);
                (self.tail_value(x, nest, tail, f), self.tail_value(x, nest, tail, f + 1))
            })
            .collect()
    }

    /// Phase vector of each column of `solutions`, as columns of a `2k × m` matrix.
    pub fn phase_map(&self, op: &OperatorCoefficients, modes: &TailModes, solutions: &DMatrix<f64>) -> DMatrix<f64> {
        let f = self.anchor;
        let mut out = DMatrix::zeros(2 * self.k, solutions.ncols());
        for c in 0..solutions.ncols() {
            let col = solutions.column(c);
            let x = col.as_slice();
            for tail in 0..self.k {
                let nest = op.graph().nest(tail);
                let (a, b) =
                    modes.phase_of(f, self.tail_value(x, nest, tail, f), self.tail_value(x, nest, tail, f + 1));
                out[(2 * tail, c)] = a;
                out[(2 * tail + 1, c)] = b;
            }
        }
        out
    }

    /// Extend a solution of the window to every site of depth `<= depth` by the
    /// free tail recursion.
    pub fn extend(&self, op: &OperatorCoefficients, lambda: f64, x: &[f64], depth: usize) -> Result<SiteFunction<f64>> {
        let f = self.anchor;
        if depth < f + 1 {
            return Err(Error::InsufficientDepth { have: depth, need: f + 1 });
        }
        let mut psi = SiteFunction::<f64>::zeros(op, depth);
        for i in 0..self.base_sites {
            psi.set(Site::Base(i), x[i])?;
        }
        for tail in 0..self.k {
            let nest = op.graph().nest(tail);
            let (mut prev, mut cur) = (self.tail_value(x, nest, tail, f), self.tail_value(x, nest, tail, f + 1));
            for d in 1..=f + 1 {
                psi.set(Site::Tail { tail, depth: d }, self.tail_value(x, nest, tail, d))?;
            }
            for d in f + 2..=depth {
                let next = lambda * cur - prev;
                psi.set(Site::Tail { tail, depth: d }, next)?;
                (prev, cur) = (cur, next);
            }
        }
        Ok(psi)
    }

    fn frame(&self, op: &OperatorCoefficients, modes: &TailModes) -> LagrangianFrame {
        let null = self.null_space(modes.lambda());
        let image = self.phase_map(op, modes, &null);
        let basis = linalg::column_space(&image);
        let vectors = (0..basis.ncols())
            .map(|c| PhaseVector { coords: basis.column(c).iter().copied().collect() })
            .collect::<Vec<_>>();
        LagrangianFrame {
            lambda: modes.lambda(),
            k: self.k,
            kernel_dim: null.ncols() - vectors.len(),
            solution_dim: null.ncols(),
            vectors,
        }
    }

    /// `Λ_λ^∞` with orthonormal frame vectors.
    pub fn lagrangian(&self, op: &OperatorCoefficients, lambda: f64) -> Result<LagrangianFrame> {
        Ok(self.frame(op, &TailModes::new(lambda)?))
    }
}

/// `Λ_λ^∞`: phase vectors of all global solutions at `λ`, with an orthonormal frame.
///
/// `depth` is the caller's working depth and must reach `n0 + 2`; the
/// construction itself is exact.
pub fn lagrangian_at_infinity(op: &OperatorCoefficients, lambda: f64, depth: usize) -> Result<LagrangianFrame> {
    if depth < op.n0() + 2 {
        return Err(Error::InsufficientDepth { have: depth, need: op.n0() + 2 });
    }
    MatchingSystem::new(op).lagrangian(op, lambda)
}

/// A basis of global solutions at `λ`, each normalized to unit sup-norm on the
/// sites of depth `<= depth`, together with their phase vectors.
#[derive(Clone, Debug)]
pub struct SolutionBasis {
    pub lambda: f64,
    pub functions: Vec<SiteFunction<f64>>,
    pub phases: Vec<PhaseVector>,
}

pub fn solution_basis(op: &OperatorCoefficients, lambda: f64, depth: usize) -> Result<SolutionBasis> {
    let modes = TailModes::new(lambda)?;
    let ms = MatchingSystem::new(op);
    let null = ms.null_space(lambda);
    let image = ms.phase_map(op, &modes, &null);
    let mut functions = Vec::with_capacity(null.ncols());
    let mut phases = Vec::with_capacity(null.ncols());
    for c in 0..null.ncols() {
        let psi = ms.extend(op, lambda, null.column(c).as_slice(), depth)?;
        let scale = 1.0 / psi.sup_norm();
        functions.push(psi.scaled(scale));
        phases.push(PhaseVector { coords: image.column(c).iter().map(|x| x * scale).collect() });
    }
    Ok(SolutionBasis { lambda, functions, phases })
}

/// `Λ_λ^-`: tail `j` carries the decaying mode `ψ_n = a_dⁿ`, `|a_d| < 1`, i.e.
/// `(α_j, β_j) = (1, a_d - C_1)`; other tails are zero.
pub fn decaying_plane(lambda: f64, k: usize) -> Result<LagrangianFrame> {
    if lambda.abs() <= 2.0 {
        return Err(Error::InsideBand(lambda));
    }
    let modes = TailModes::new(lambda)?;
    let beta = modes.decaying_root()? - modes.c_seed().1;
    let vectors = (0..k)
        .map(|j| {
            let mut v = PhaseVector::zeros(k);
            v.coords[2 * j] = 1.0;
            v.coords[2 * j + 1] = beta;
            v
        })
        .collect();
    Ok(LagrangianFrame { lambda, k, vectors, kernel_dim: 0, solution_dim: k })
}

/// Intersection of two subspaces of the same phase space.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Intersection {
    pub dim: usize,
    /// Orthonormal basis.
    pub basis: Vec<PhaseVector>,
}

fn check_pair(a: &LagrangianFrame, b: &LagrangianFrame) -> Result<()> {
    if a.k != b.k {
        return Err(Error::DimensionMismatch { expected: a.k, found: b.k });
    }
    if a.lambda != b.lambda {
        return Err(Error::LambdaMismatch(a.lambda, b.lambda));
    }
    Ok(())
}

/// `dim = rank(f1) + rank(f2) - rank([f1 | f2])`, with a basis of the common part.
pub fn intersect(a: &LagrangianFrame, b: &LagrangianFrame) -> Result<Intersection> {
    check_pair(a, b)?;
    let qa = linalg::column_space(&a.matrix());
    let qb = linalg::column_space(&b.matrix());
    let mut stacked = DMatrix::zeros(2 * a.k, qa.ncols() + qb.ncols());
    stacked.columns_mut(0, qa.ncols()).copy_from(&qa);
    stacked.columns_mut(qa.ncols(), qb.ncols()).copy_from(&(-&qb));
    let null = linalg::null_space(&stacked);
    let common = &qa * null.rows(0, qa.ncols());
    let basis = linalg::column_space(&common);
    let vectors: Vec<PhaseVector> =
        (0..basis.ncols()).map(|c| PhaseVector { coords: basis.column(c).iter().copied().collect() }).collect();
    Ok(Intersection { dim: vectors.len(), basis: vectors })
}

/// Singular values (descending) of `[Q_a | Q_b]` with orthonormalized frames.
/// The smallest one vanishes exactly when the subspaces meet.
pub fn intersection_spectrum(a: &LagrangianFrame, b: &LagrangianFrame) -> Result<Vec<f64>> {
    check_pair(a, b)?;
    let qa = linalg::column_space(&a.matrix());
    let qb = linalg::column_space(&b.matrix());
    let mut stacked = DMatrix::zeros(2 * a.k, qa.ncols() + qb.ncols());
    stacked.columns_mut(0, qa.ncols()).copy_from(&qa);
    stacked.columns_mut(qa.ncols(), qb.ncols()).copy_from(&qb);
    Ok(linalg::singular_values(&stacked))
}
