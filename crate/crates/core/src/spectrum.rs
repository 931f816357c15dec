//! Scattering matrix inside the band, bound states outside it, singular base
//! eigenvalues, Morse counts and the sufficient conditions for discrete spectrum.

use alloc::vec::Vec;

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::linalg;
use crate::operator::{restrict_to_base, Flavor, Layout, OperatorCoefficients, Site};
use crate::phase::{decaying_plane, intersection_spectrum, MatchingSystem, TailModes};
use crate::tol;

/// `S(λ)` with `λ = 2cos θ`, `θ ∈ (0, π)` and outgoing waves `e^{+inθ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScatteringMatrix {
    pub lambda: f64,
    pub theta: f64,
    pub s: DMatrix<Complex<f64>>,
}

fn op_norm(m: &DMatrix<Complex<f64>>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().iter().fold(0.0, |a: f64, &b| a.max(b))
}

impl ScatteringMatrix {
    pub fn k(&self) -> usize {
        self.s.nrows()
    }

    /// `‖S*S - I‖` in operator norm.
    pub fn unitarity_residual(&self) -> f64 {
        let k = self.k();
        op_norm(&(self.s.adjoint() * &self.s - DMatrix::identity(k, k)))
    }

    /// `‖S - Sᵀ‖` in operator norm.
    pub fn symmetry_residual(&self) -> f64 {
        op_norm(&(&self.s - self.s.transpose()))
    }
}

pub fn scattering_matrix(op: &OperatorCoefficients, lambda: f64) -> Result<ScatteringMatrix> {
    scattering_with(op, &MatchingSystem::new(op), lambda)
}

/// Same as [`scattering_matrix`] with a prebuilt matching system, for sweeps.
pub fn scattering_with(op: &OperatorCoefficients, ms: &MatchingSystem, lambda: f64) -> Result<ScatteringMatrix> {
    if !lambda.is_finite() || lambda.abs() >= 2.0 - tol::BAND_EDGE {
        return Err(Error::OutsideBand(lambda));
    }
    let modes = TailModes::new(lambda)?;
    let frame = ms.lagrangian(op, lambda)?;
    let k = op.tail_count();
    if frame.kernel_dim > 0 || frame.rank() != k {
        return Err(Error::EmbeddedSingular { lambda, extra: frame.kernel_dim.max(k.saturating_sub(frame.rank())) });
    }
    // Columns: the global solutions, which span Λ^∞ when there is no kernel.
    let null = ms.null_space(lambda);
    let mut p = DMatrix::<Complex<f64>>::zeros(k, null.ncols());
    let mut q = DMatrix::<Complex<f64>>::zeros(k, null.ncols());
    for c in 0..null.ncols() {
        for (j, (x, y)) in ms.tail_data(op, null.column(c).as_slice()).into_iter().enumerate() {
            let (pj, qj) = modes.wave_of(ms.anchor(), x, y);
            p[(j, c)] = pj;
            q[(j, c)] = qj;
        }
    }
    let sv = q.singular_values();
    let (smax, smin) = sv.iter().fold((0.0f64, f64::INFINITY), |(a, b), &s| (a.max(s), b.min(s)));
    let inverse = match q.try_inverse() {
        Some(inv) if smin > tol::RANK_REL * smax => inv,
        _ => return Err(Error::EmbeddedSingular { lambda, extra: 0 }),
    };
    Ok(ScatteringMatrix { lambda, theta: libm::acos(0.5 * lambda), s: p * inverse })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum BoundStateKind {
    Normal,
    EmbeddedSingular,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundState {
    pub lambda: f64,
    pub multiplicity: usize,
    pub kind: BoundStateKind,
    /// Smallest singular value of `[Λ^∞ | Λ^-]` at `lambda` (0 inside the band).
    pub detector: f64,
}

/// Smallest singular value of the stacked orthonormal frames of `Λ_λ^∞` and
/// `Λ_λ^-`; zero exactly when a decaying solution exists. Needs `|λ| > 2`.
pub fn detector(op: &OperatorCoefficients, lambda: f64) -> Result<f64> {
    detector_with(op, &MatchingSystem::new(op), lambda)
}

pub fn detector_with(op: &OperatorCoefficients, ms: &MatchingSystem, lambda: f64) -> Result<f64> {
    let dec = decaying_plane(lambda, op.tail_count())?;
    let inf = ms.lagrangian(op, lambda)?;
    Ok(intersection_spectrum(&inf, &dec)?.last().copied().unwrap_or(0.0))
}

/// Eliminating the free tails beyond the anchor depth `f` leaves the finite matrix
/// `A(λ) = H - λ + d(λ) P` on the sites of depth `<= f`: `H` is the operator cut
/// off below depth `f + 1`, `d(λ)` the decaying root and `P` counts the tails
/// leaving each site. By inertia additivity, the number of eigenvalues of `L`
/// beyond `λ` (above for `λ > 2`, below for `λ < -2`) equals the number of
/// eigenvalues of `A(λ)` of the same sign.
#[derive(Clone, Debug)]
struct Inertia {
    h: DMatrix<f64>,
    exits: Vec<usize>,
}

impl Inertia {
    fn new(op: &OperatorCoefficients) -> Self {
        let f = op.anchor_depth();
        let core = Layout::new(op, f);
        let mut h = DMatrix::zeros(core.len(), core.len());
        for (r, site) in core.sites().enumerate() {
            h[(r, r)] += op.potential(site);
            for (nb, c) in op.neighbors(site).expect("site in graph") {
                if let Some(j) = core.index(nb) {
                    h[(r, j)] += c;
                }
            }
        }
        let exits = (0..op.tail_count())
            .map(|tail| {
                let site = if f == 0 { Site::Base(op.graph().nest(tail)) } else { Site::Tail { tail, depth: f } };
                core.index(site).expect("exit site in core")
            })
            .collect();
        Inertia { h, exits }
    }

    fn count(&self, lambda: f64) -> Result<usize> {
        let d = TailModes::new(lambda)?.decaying_root()?;
        let mut a = self.h.clone();
        for i in 0..a.nrows() {
            a[(i, i)] -= lambda;
        }
        for &i in &self.exits {
            a[(i, i)] += d;
        }
        let eig = linalg::sym_eigenvalues(&a);
        Ok(if lambda > 0.0 { eig.iter().filter(|&&m| m > 0.0).count() } else { eig.iter().filter(|&&m| m < 0.0).count() })
    }
}

/// Number of eigenvalues of `L` above `λ > 2`, or below `λ < -2`, with multiplicity.
pub fn bound_state_count(op: &OperatorCoefficients, lambda: f64) -> Result<usize> {
    if lambda.abs() <= 2.0 {
        return Err(Error::InsideBand(lambda));
    }
    Inertia::new(op).count(lambda)
}

fn check_scan_range(lambda_min: f64, lambda_max: f64, step: f64) -> Result<()> {
    if !(lambda_min.is_finite() && lambda_max.is_finite() && step.is_finite()) {
        return Err(Error::BadRange("range and step must be finite"));
    }
    if step <= 0.0 {
        return Err(Error::BadRange("step must be positive"));
    }
    if lambda_min >= lambda_max {
        return Err(Error::BadRange("lambda_min must be below lambda_max"));
    }
    let edge = 2.0 + tol::SCAN_EDGE_MARGIN;
    if !(lambda_min >= edge || lambda_max <= -edge) {
        return Err(Error::BadRange("scan window must lie in |lambda| > 2 on one side of the band"));
    }
    Ok(())
}

/// Uniform grid of spacing at most `step`, plus points halving the distance to
/// the endpoint nearest the band.
pub fn scan_grid(lambda_min: f64, lambda_max: f64, step: f64) -> Vec<f64> {
    let n = libm::ceil((lambda_max - lambda_min) / step).max(2.0) as usize;
    let mut grid: Vec<f64> = (0..=n).map(|i| lambda_min + (lambda_max - lambda_min) * i as f64 / n as f64).collect();
    let width = (lambda_max - lambda_min) / n as f64;
    let (edge, dir) = if lambda_min > 0.0 { (lambda_min, 1.0) } else { (lambda_max, -1.0) };
    let mut d = 0.5 * width;
    while d > tol::SCAN_EDGE_MARGIN {
        grid.push(edge + dir * d);
        d *= 0.5;
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

fn bisect(inertia: &Inertia, a: f64, ca: usize, b: f64, cb: usize, out: &mut Vec<(f64, usize)>) -> Result<()> {
    if ca == cb {
        return Ok(());
    }
    let mid = 0.5 * (a + b);
    if b - a <= tol::ROOT_WIDTH || mid <= a || mid >= b {
        out.push((mid, ca.abs_diff(cb)));
        return Ok(());
    }
    let cm = inertia.count(mid)?;
    bisect(inertia, a, ca, mid, cm, out)?;
    bisect(inertia, mid, cm, b, cb, out)
}

/// Bound states in `[λ_min, λ_max]`, a window strictly on one side of the band.
///
/// The eigenvalue count beyond `λ` is evaluated on a grid of spacing at most
/// `step` (refined towards the band) and every change is bisected down to
/// `ROOT_WIDTH`; the size of the jump is the multiplicity. Each root carries the
/// Lagrangian detector value there, which vanishes for states reaching the tails.
pub fn bound_state_scan(op: &OperatorCoefficients, lambda_min: f64, lambda_max: f64, step: f64) -> Result<Vec<BoundState>> {
    check_scan_range(lambda_min, lambda_max, step)?;
    let inertia = Inertia::new(op);
    let grid = scan_grid(lambda_min, lambda_max, step);
    let counts = grid.iter().map(|&l| inertia.count(l)).collect::<Result<Vec<_>>>()?;
    let mut roots = Vec::new();
    for i in 1..grid.len() {
        bisect(&inertia, grid[i - 1], counts[i - 1], grid[i], counts[i], &mut roots)?;
    }
    let ms = MatchingSystem::new(op);
    roots
        .into_iter()
        .map(|(lambda, multiplicity)| {
            Ok(BoundState { lambda, multiplicity, kind: BoundStateKind::Normal, detector: detector_with(op, &ms, lambda)? })
        })
        .collect()
}

/// An eigenvalue of the base operator with eigenvectors that do not couple into any tail.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SingularEigenvalue {
    pub lambda: f64,
    /// Dimension of the part of the eigenspace annihilated at the nests.
    pub multiplicity: usize,
    /// Largest nest coupling among the retained directions (0 when exact).
    pub nest_residual: f64,
}

/// Singular base eigenvalues. Eigenvalues closer than `tol` are clustered into one
/// eigenspace; within it, directions whose nest couplings are at most `tol` count.
pub fn singular_eigenvalues(op: &OperatorCoefficients, tol: f64) -> Vec<SingularEigenvalue> {
    let base = restrict_to_base(op);
    let (values, vectors) = linalg::sym_eigen(&base.matrix);
    let mut out = Vec::new();
    let mut start = 0;
    while start < values.len() {
        let mut end = start + 1;
        while end < values.len() && values[end] - values[end - 1] <= tol * values[end].abs().max(1.0) {
            end += 1;
        }
        let m = end - start;
        let space = vectors.columns(start, m).into_owned();
        let coupled = &base.boundary * &space;
        let sv = linalg::singular_values(&coupled);
        let rank = sv.iter().filter(|&&s| s > tol).count();
        if rank < m {
            let lambda = values[start..end].iter().sum::<f64>() / m as f64;
            out.push(SingularEigenvalue { lambda, multiplicity: m - rank, nest_residual: sv.get(rank).copied().unwrap_or(0.0) });
        }
        start = end;
    }
    out
}

/// Dimension of the space of global solutions at `λ`.
pub fn solution_space_dim(op: &OperatorCoefficients, lambda: f64) -> Result<usize> {
    TailModes::new(lambda)?;
    Ok(MatchingSystem::new(op).null_space(lambda).ncols())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Zone {
    /// `λ > 2`.
    Plus,
    /// `λ < -2`.
    Minus,
}

/// `2 + ` the Gershgorin radius; no eigenvalue lies beyond it.
pub fn scan_limit(op: &OperatorCoefficients) -> f64 {
    2.0 + op.gershgorin_bound()
}

/// Scan window for a zone.
pub fn zone_window(op: &OperatorCoefficients, zone: Zone) -> (f64, f64) {
    let (lo, hi) = (2.0 + tol::SCAN_EDGE_MARGIN, scan_limit(op));
    match zone {
        Zone::Plus => (lo, hi),
        Zone::Minus => (-hi, -lo),
    }
}

/// Total multiplicity of bound states in the zone.
pub fn morse_index(op: &OperatorCoefficients, zone: Zone, step: f64) -> Result<usize> {
    let (lo, hi) = zone_window(op, zone);
    Ok(bound_state_scan(op, lo, hi, step)?.iter().map(|b| b.multiplicity).sum())
}

/// The sufficient conditions for discrete spectrum, evaluated with threshold 4.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Prop1Report {
    pub flavor: Flavor,
    /// `max_x (Σ_y c_{x:y}² + W_x²)` for the operator's flavor.
    pub site_max: f64,
    pub site_predicate: bool,
    /// `max_q |λ'_q|` over the base spectrum (0 for an empty base).
    pub base_max: f64,
    pub base_predicate: bool,
    pub threshold: f64,
}

impl Prop1Report {
    pub fn any(&self) -> bool {
        self.site_predicate || self.base_predicate
    }

    /// Whether either quantity exceeds another threshold.
    pub fn exceeds(&self, threshold: f64) -> bool {
        self.site_max > threshold || self.base_max > threshold
    }
}

pub fn prop1_predicates(op: &OperatorCoefficients) -> Prop1Report {
    let site_max = op
        .sites_to_depth(op.n0() + 1)
        .map(|s: Site| {
            let w = op.potential(s);
            op.neighbors(s).unwrap_or_default().iter().map(|(_, c)| c * c).sum::<f64>() + w * w
        })
        .fold(0.0, f64::max);
    let base = restrict_to_base(op);
    let base_max = linalg::sym_eigenvalues(&base.matrix).iter().fold(0.0f64, |m, l| m.max(l.abs()));
    let threshold = tol::PROP1_THRESHOLD;
    Prop1Report {
        flavor: op.flavor(),
        site_max,
        site_predicate: site_max > threshold,
        base_max,
        base_predicate: base_max > threshold,
        threshold,
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectralReport {
    pub bound_states: Vec<BoundState>,
    pub morse_index_plus: usize,
    pub morse_index_minus: usize,
    pub prop1: Prop1Report,
    pub singular_base_eigenvalues: Vec<SingularEigenvalue>,
}

/// Bound states in both zones, embedded singular eigenvalues inside the band,
/// Morse counts and predicates.
pub fn spectral_report(op: &OperatorCoefficients, step: f64) -> Result<SpectralReport> {
    let singular = singular_eigenvalues(op, tol::SINGULAR);
    let (lo, hi) = zone_window(op, Zone::Minus);
    let minus = bound_state_scan(op, lo, hi, step)?;
    let (lo, hi) = zone_window(op, Zone::Plus);
    let plus = bound_state_scan(op, lo, hi, step)?;
    let morse_index_minus = minus.iter().map(|b| b.multiplicity).sum();
    let morse_index_plus = plus.iter().map(|b| b.multiplicity).sum();
    let mut bound_states = minus;
    bound_states.extend(singular.iter().filter(|s| s.lambda.abs() < 2.0).map(|s| BoundState {
        lambda: s.lambda,
        multiplicity: s.multiplicity,
        kind: BoundStateKind::EmbeddedSingular,
        detector: 0.0,
    }));
    bound_states.extend(plus);
    Ok(SpectralReport {
        bound_states,
        morse_index_plus,
        morse_index_minus,
        prop1: prop1_predicates(op),
        singular_base_eigenvalues: singular,
    })
}
