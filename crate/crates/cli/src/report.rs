//! Serializable reports, one per subcommand, for a single operator.

use serde::Serialize;

use schrograph_core::phase::{intersection_spectrum, skew_terms};
use schrograph_core::spectrum::{detector_with, scattering_with};
use schrograph_core::{
    bound_state_scan, decaying_plane, dense_solution_space, intersect, lagrangian_at_infinity, linalg, prop1_predicates,
    restrict_to_base, singular_eigenvalues, skew_product, solution_basis, solution_space_dim, spectral_report,
    tail_constants, tol, truncated_spectrum, wronskian, BoundState, BoundStateKind, Complex, DMatrix, Error, Flavor,
    MatchingSystem, OperatorCoefficients, Prop1Report, SingularEigenvalue, Site, SpectralReport,
};

use crate::error::Result;
use crate::spec::nest_names;

/// Bound states are compared with the truncation oracle only beyond this `|λ|`.
pub const ORACLE_WINDOW: f64 = 2.001;
pub const ORACLE_TOLERANCE: f64 = 1e-4;
pub const DEFAULT_ORACLE_DEPTH: usize = 400;
pub const DEFAULT_SCAN_STEP: f64 = 1e-2;

/// Maximum that keeps NaN, so a broken residual never passes as small.
pub fn worst(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

fn c2(z: Complex<f64>) -> [f64; 2] {
    [z.re, z.im]
}

fn complex_rows(m: &DMatrix<Complex<f64>>) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| c2(m[(i, j)])).collect()).collect()
}

#[derive(Debug, Serialize)]
pub struct ValidateReport {
    pub flavor: Flavor,
    pub base_vertices: usize,
    pub base_edges: usize,
    pub tails: usize,
    pub nests: Vec<String>,
    pub n0: usize,
    pub anchor_depth: usize,
    pub base_sites: usize,
    pub potential_overrides: usize,
    pub coupling_overrides: usize,
}

pub fn validate(op: &OperatorCoefficients) -> ValidateReport {
    let g = op.graph();
    ValidateReport {
        flavor: op.flavor(),
        base_vertices: g.base_vertex_count(),
        base_edges: g.base_edge_count(),
        tails: g.tail_count(),
        nests: nest_names(g),
        n0: op.n0(),
        anchor_depth: op.anchor_depth(),
        base_sites: op.base_site_count(),
        potential_overrides: op.overrides().potential.len(),
        coupling_overrides: op.overrides().coupling.len(),
    }
}

#[derive(Debug, Serialize)]
pub struct BaseSpectrumReport {
    pub flavor: Flavor,
    pub sites: Vec<String>,
    pub eigenvalues: Vec<f64>,
    pub singular: Vec<SingularEigenvalue>,
}

pub fn base_spectrum(op: &OperatorCoefficients) -> BaseSpectrumReport {
    let base = restrict_to_base(op);
    BaseSpectrumReport {
        flavor: op.flavor(),
        sites: (0..op.base_site_count()).map(|i| op.site_label(Site::Base(i))).collect(),
        eigenvalues: linalg::sym_eigenvalues(&base.matrix),
        singular: singular_eigenvalues(op, tol::SINGULAR),
    }
}

/// `κ_j` equals the per-tail skew term in the vertex flavor and its negative in
/// the edge flavor, where the chain is read at the source of each tail edge.
pub fn kappa_sign(flavor: Flavor) -> f64 {
    match flavor {
        Flavor::Vertex => 1.0,
        Flavor::Edge => -1.0,
    }
}

#[derive(Debug, Serialize)]
pub struct WronskianPair {
    pub i: usize,
    pub j: usize,
    pub kappa: Vec<f64>,
    pub skew_product: f64,
    pub boundary_residual: f64,
}

#[derive(Debug, Serialize)]
pub struct WronskianReport {
    pub lambda: f64,
    pub depth: usize,
    pub kappa_sign: f64,
    pub basis_size: usize,
    pub pairs: Vec<WronskianPair>,
    /// Largest `|∂W|` over vertices where every incident edge is covered.
    pub max_boundary_residual: f64,
    pub max_kappa_sum: f64,
    /// Largest deviation of `κ_j` (and of `Σκ_j`) from the signed skew terms.
    pub max_kappa_vs_skew: f64,
}

pub fn wronskian_check(op: &OperatorCoefficients, lambda: f64, depth: Option<usize>) -> Result<WronskianReport> {
    let depth = depth.unwrap_or(op.anchor_depth() + 4);
    let basis = solution_basis(op, lambda, depth + 1)?;
    let sign = kappa_sign(op.flavor());
    let mut pairs = Vec::new();
    let (mut res, mut sum_max, mut dev) = (0.0f64, 0.0f64, 0.0f64);
    for (i, (a, pa)) in basis.functions.iter().zip(&basis.phases).enumerate() {
        for (j, (b, pb)) in basis.functions.iter().zip(&basis.phases).enumerate().skip(i + 1) {
            let w = wronskian(op, a, b, depth)?;
            let boundary_residual = w.boundary_residual(op)?;
            let kappa = tail_constants(&w, op)?;
            let skew = skew_product(pa, pb)?;
            let sum: f64 = kappa.iter().sum();
            res = worst(res, boundary_residual);
            sum_max = worst(sum_max, sum.abs());
            dev = worst(dev, (sum - sign * skew).abs());
            for (k, t) in kappa.iter().zip(skew_terms(pa, pb)) {
                dev = worst(dev, (k - sign * t).abs());
            }
            pairs.push(WronskianPair { i, j, kappa, skew_product: skew, boundary_residual });
        }
    }
    Ok(WronskianReport {
        lambda,
        depth,
        kappa_sign: sign,
        basis_size: basis.functions.len(),
        pairs,
        max_boundary_residual: res,
        max_kappa_sum: sum_max,
        max_kappa_vs_skew: dev,
    })
}

#[derive(Debug, Serialize)]
pub struct OutsideBand {
    pub decaying_plane: Vec<Vec<f64>>,
    pub intersection_dim: usize,
    pub detector: f64,
}

#[derive(Debug, Serialize)]
pub struct LagrangianReport {
    pub lambda: f64,
    pub k: usize,
    /// Phase vectors `(α_1, β_1, …, α_k, β_k)` spanning `Λ^∞`.
    pub frame: Vec<Vec<f64>>,
    pub rank: usize,
    pub kernel_dim: usize,
    pub solution_dim: usize,
    pub dense_depth: usize,
    pub dense_solution_dim: usize,
    pub max_skew: f64,
    pub outside: Option<OutsideBand>,
}

pub fn lagrangian(op: &OperatorCoefficients, lambda: f64, depth: Option<usize>) -> Result<LagrangianReport> {
    let dense_depth = depth.unwrap_or(op.anchor_depth() + 2);
    let frame = lagrangian_at_infinity(op, lambda, dense_depth.max(op.n0() + 2))?;
    let outside = if lambda.abs() > 2.0 {
        let dec = decaying_plane(lambda, op.tail_count())?;
        let sv = intersection_spectrum(&frame, &dec)?;
        Some(OutsideBand {
            decaying_plane: dec.vectors.iter().map(|v| v.as_slice().to_vec()).collect(),
            intersection_dim: intersect(&frame, &dec)?.dim,
            detector: sv.last().copied().unwrap_or(0.0),
        })
    } else {
        None
    };
    Ok(LagrangianReport {
        lambda,
        k: frame.k,
        frame: frame.vectors.iter().map(|v| v.as_slice().to_vec()).collect(),
        rank: frame.rank(),
        kernel_dim: frame.kernel_dim,
        solution_dim: frame.solution_dim,
        dense_depth,
        dense_solution_dim: dense_solution_space(op, lambda, dense_depth)?,
        max_skew: frame.max_skew(),
        outside,
    })
}

#[derive(Debug, Serialize)]
pub struct ScatteringReport {
    pub lambda: f64,
    pub theta: f64,
    pub k: usize,
    /// `S[i][j] = [re, im]`; column `j` is the wave incoming on tail `j`.
    pub s: Vec<Vec<[f64; 2]>>,
    pub unitarity_residual: f64,
    pub symmetry_residual: f64,
}

pub fn scattering(op: &OperatorCoefficients, lambda: f64) -> Result<ScatteringReport> {
    let s = scattering_with(op, &MatchingSystem::new(op), lambda)?;
    Ok(ScatteringReport {
        lambda,
        theta: s.theta,
        k: s.k(),
        s: complex_rows(&s.s),
        unitarity_residual: s.unitarity_residual(),
        symmetry_residual: s.symmetry_residual(),
    })
}

#[derive(Debug, Serialize)]
pub struct ScanReport {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub step: f64,
    pub bound_states: Vec<BoundState>,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum BoundStatesReport {
    Window(ScanReport),
    Full(SpectralReport),
}

pub fn bound_states(op: &OperatorCoefficients, range: Option<(f64, f64)>, step: f64) -> Result<BoundStatesReport> {
    Ok(match range {
        Some((lambda_min, lambda_max)) => BoundStatesReport::Window(ScanReport {
            lambda_min,
            lambda_max,
            step,
            bound_states: bound_state_scan(op, lambda_min, lambda_max, step)?,
        }),
        None => BoundStatesReport::Full(spectral_report(op, step)?),
    })
}

#[derive(Debug, Serialize)]
pub struct MorseReport {
    pub step: f64,
    pub morse_index_plus: usize,
    pub morse_index_minus: usize,
}

pub fn morse(op: &OperatorCoefficients, step: f64) -> Result<MorseReport> {
    let r = spectral_report(op, step)?;
    Ok(MorseReport { step, morse_index_plus: r.morse_index_plus, morse_index_minus: r.morse_index_minus })
}

fn discrete_count(r: &SpectralReport) -> usize {
    r.bound_states.iter().filter(|b| b.kind == BoundStateKind::Normal).map(|b| b.multiplicity).sum()
}

#[derive(Debug, Serialize)]
pub struct Prop1Summary {
    #[serde(flatten)]
    pub predicates: Prop1Report,
    /// Whether either quantity already exceeds 2.
    pub exceeds_two: bool,
    /// Eigenvalues with `|λ| > 2`, with multiplicity.
    pub discrete_count: usize,
    /// False when a predicate holds but no eigenvalue was found outside the band.
    pub consistent: bool,
}

pub fn prop1(op: &OperatorCoefficients, step: f64) -> Result<Prop1Summary> {
    let predicates = prop1_predicates(op);
    let discrete_count = discrete_count(&spectral_report(op, step)?);
    Ok(Prop1Summary {
        exceeds_two: predicates.exceeds(2.0),
        consistent: !predicates.any() || discrete_count > 0,
        predicates,
        discrete_count,
    })
}

#[derive(Debug, Serialize)]
pub struct Embedded {
    pub lambda: f64,
    pub multiplicity: usize,
    pub solution_dim: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Band {
    Inside,
    Outside,
    /// Within `1e-9` of `±2`; nothing is evaluated there.
    Edge,
}

#[derive(Debug, Serialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub band: Band,
    pub solution_dim: Option<usize>,
    pub detector: Option<f64>,
    pub intersection_dim: Option<usize>,
    pub unitarity_residual: Option<f64>,
    /// Absent inside the band at embedded singular eigenvalues.
    pub s: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Serialize)]
pub struct Sweep {
    pub flavor: Flavor,
    pub k: usize,
    pub embedded: Vec<Embedded>,
    pub rows: Vec<SweepRow>,
}

/// `λ_i = λ_min + i·step` for `i = 0..=round((λ_max - λ_min)/step)`.
pub fn sweep_grid(lambda_min: f64, lambda_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(lambda_min.is_finite() && lambda_max.is_finite() && step.is_finite() && step > 0.0 && lambda_min <= lambda_max) {
        return Err(Error::BadRange("sweep needs finite lambda_min <= lambda_max and a positive step").into());
    }
    let n = ((lambda_max - lambda_min) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| lambda_min + i as f64 * step).collect())
}

fn sweep_row(op: &OperatorCoefficients, ms: &MatchingSystem, lambda: f64) -> Result<SweepRow> {
    let mut row = SweepRow {
        lambda,
        band: Band::Edge,
        solution_dim: None,
        detector: None,
        intersection_dim: None,
        unitarity_residual: None,
        s: None,
    };
    if (lambda.abs() - 2.0).abs() <= tol::BAND_EDGE {
        return Ok(row);
    }
    let frame = ms.lagrangian(op, lambda)?;
    row.solution_dim = Some(frame.solution_dim);
    if lambda.abs() < 2.0 {
        row.band = Band::Inside;
        match scattering_with(op, ms, lambda) {
            Ok(s) => {
                row.unitarity_residual = Some(s.unitarity_residual());
                row.s = Some(complex_rows(&s.s));
            }
            Err(Error::EmbeddedSingular { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    } else {
        row.band = Band::Outside;
        let dec = decaying_plane(lambda, op.tail_count())?;
        row.detector = Some(detector_with(op, ms, lambda)?);
        row.intersection_dim = Some(intersect(&frame, &dec)?.dim);
    }
    Ok(row)
}

pub fn sweep(op: &OperatorCoefficients, lambda_min: f64, lambda_max: f64, step: f64) -> Result<Sweep> {
    use rayon::prelude::*;
    let grid = sweep_grid(lambda_min, lambda_max, step)?;
    let ms = MatchingSystem::new(op);
    let rows = grid.par_iter().map(|&l| sweep_row(op, &ms, l)).collect::<Result<Vec<_>>>()?;
    let embedded = singular_eigenvalues(op, tol::SINGULAR)
        .into_iter()
        .filter(|s| s.lambda.abs() < 2.0 - tol::LAMBDA_ZERO)
        .map(|s| Ok(Embedded { lambda: s.lambda, multiplicity: s.multiplicity, solution_dim: solution_space_dim(op, s.lambda)? }))
        .collect::<Result<Vec<_>>>()?;
    Ok(Sweep { flavor: op.flavor(), k: op.tail_count(), embedded, rows })
}

/// Fixed CSV columns, then `s_<i>_<j>_re`, `s_<i>_<j>_im` for 1-based tails.
pub fn sweep_csv(sweep: &Sweep) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> =
        ["lambda", "band", "solution_dim", "detector", "intersection_dim", "unitarity_residual"].map(String::from).to_vec();
    for i in 1..=sweep.k {
        for j in 1..=sweep.k {
            header.push(format!("s_{i}_{j}_re"));
            header.push(format!("s_{i}_{j}_im"));
        }
    }
    let err = |e: csv::Error| crate::error::CliError::Usage(format!("csv: {e}"));
    w.write_record(&header).map_err(err)?;
    let num = |x: f64| format!("{x:.16e}");
    let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
    let int = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
    for r in &sweep.rows {
        let band = match r.band {
            Band::Inside => "inside",
            Band::Outside => "outside",
            Band::Edge => "edge",
        };
        let mut rec = vec![
            num(r.lambda),
            band.to_string(),
            int(r.solution_dim),
            opt(r.detector),
            int(r.intersection_dim),
            opt(r.unitarity_residual),
        ];
        for i in 0..sweep.k {
            for j in 0..sweep.k {
                match &r.s {
                    Some(s) => {
                        rec.push(num(s[i][j][0]));
                        rec.push(num(s[i][j][1]));
                    }
                    None => rec.extend([String::new(), String::new()]),
                }
            }
        }
        w.write_record(&rec).map_err(err)?;
    }
    w.into_inner().map_err(|e| crate::error::CliError::Usage(format!("csv: {e}")))
}

pub fn bound_states_csv(states: &[BoundState]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| crate::error::CliError::Usage(format!("csv: {e}"));
    w.write_record(["lambda", "multiplicity", "kind", "detector"]).map_err(err)?;
    for b in states {
        let kind = match b.kind {
            BoundStateKind::Normal => "normal",
            BoundStateKind::EmbeddedSingular => "embedded-singular",
        };
        w.write_record([format!("{:.16e}", b.lambda), b.multiplicity.to_string(), kind.into(), format!("{:.16e}", b.detector)])
            .map_err(err)?;
    }
    w.into_inner().map_err(|e| crate::error::CliError::Usage(format!("csv: {e}")))
}

#[derive(Debug, Serialize)]
pub struct OracleComparison {
    pub depth: usize,
    pub step: f64,
    pub window: f64,
    pub tolerance: f64,
    pub bound_states: Vec<BoundState>,
    pub morse_index_plus: usize,
    pub morse_index_minus: usize,
    /// Scanned eigenvalues beyond the window, repeated by multiplicity.
    pub scanned: Vec<f64>,
    pub truncated: Vec<f64>,
    pub count_match: bool,
    pub max_deviation: Option<f64>,
    pub agree: bool,
}

pub fn oracle_compare(op: &OperatorCoefficients, depth: usize, step: f64) -> Result<OracleComparison> {
    let report = spectral_report(op, step)?;
    let mut scanned = Vec::new();
    for b in report.bound_states.iter().filter(|b| b.kind == BoundStateKind::Normal && b.lambda.abs() > ORACLE_WINDOW) {
        scanned.extend(std::iter::repeat_n(b.lambda, b.multiplicity));
    }
    let truncated: Vec<f64> = truncated_spectrum(op, depth)?.into_iter().filter(|l| l.abs() > ORACLE_WINDOW).collect();
    let count_match = scanned.len() == truncated.len();
    let max_deviation = count_match.then(|| scanned.iter().zip(&truncated).fold(0.0, |m, (s, t)| worst(m, (s - t).abs())));
    let agree = count_match && max_deviation.is_some_and(|d| d <= ORACLE_TOLERANCE);
    Ok(OracleComparison {
        depth,
        step,
        window: ORACLE_WINDOW,
        tolerance: ORACLE_TOLERANCE,
        morse_index_plus: report.morse_index_plus,
        morse_index_minus: report.morse_index_minus,
        bound_states: report.bound_states,
        scanned,
        truncated,
        count_match,
        max_deviation,
        agree,
    })
}
