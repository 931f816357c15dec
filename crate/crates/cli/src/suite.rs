//! Corpus-wide runs of the checks, one summary per subcommand.
//!
//! Instances run in parallel; results are collected in manifest order, so the
//! reports do not depend on scheduling.

use rayon::prelude::*;
use serde::Serialize;

use schrograph_core::{
    dense_solution_space, lagrangian_at_infinity, scattering_matrix, singular_eigenvalues, tol, Error, Flavor,
};

use crate::corpus::{draw_lambda, lambda_rng, Instance};
use crate::report::{oracle_compare, prop1, wronskian_check, worst};

/// A check that could not be carried out or came out wrong.
#[derive(Debug, Serialize)]
pub struct Failure {
    pub group: String,
    pub seed: u64,
    pub lambda: Option<f64>,
    pub what: String,
}

impl Failure {
    fn new(inst: &Instance, lambda: Option<f64>, what: impl Into<String>) -> Self {
        Failure { group: inst.group.clone(), seed: inst.seed, lambda, what: what.into() }
    }
}

#[derive(Debug, Default, Serialize)]
pub struct FlavorCounts {
    pub vertex: usize,
    pub edge: usize,
}

fn flavor_counts(instances: &[Instance]) -> FlavorCounts {
    let vertex = instances.iter().filter(|i| i.op.flavor() == Flavor::Vertex).count();
    FlavorCounts { vertex, edge: instances.len() - vertex }
}

fn lambdas(inst: &Instance, run_seed: u64, count: usize, limit: f64, margin: f64) -> Vec<f64> {
    let mut rng = lambda_rng(run_seed, inst.seed, inst.op.flavor());
    (0..count).map(|_| draw_lambda(&mut rng, limit, margin)).collect()
}

/// Away from the band edges by this much when drawing random `λ`.
const EDGE_MARGIN: f64 = 1e-3;

pub const BOUNDARY_TOL: f64 = 1e-10;
pub const SKEW_TOL: f64 = 1e-9;
pub const UNITARITY_TOL: f64 = 1e-8;

#[derive(Debug, Serialize)]
pub struct WronskianSuite {
    pub instances: usize,
    pub flavors: FlavorCounts,
    pub lambdas_per_instance: usize,
    pub pairs: usize,
    pub max_boundary_residual: f64,
    pub max_kappa_sum: f64,
    pub max_kappa_vs_skew: f64,
    pub failures: Vec<Failure>,
}

impl WronskianSuite {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
            && self.max_boundary_residual <= BOUNDARY_TOL
            && self.max_kappa_sum <= SKEW_TOL
            && self.max_kappa_vs_skew <= SKEW_TOL
    }
}

pub fn wronskian_suite(instances: &[Instance], run_seed: u64, per: usize) -> WronskianSuite {
    let results: Vec<_> = instances
        .par_iter()
        .map(|inst| {
            lambdas(inst, run_seed, per, 4.0, EDGE_MARGIN)
                .into_iter()
                .map(|l| (l, wronskian_check(&inst.op, l, None)))
                .collect::<Vec<_>>()
        })
        .collect();
    let mut s = WronskianSuite {
        instances: instances.len(),
        flavors: flavor_counts(instances),
        lambdas_per_instance: per,
        pairs: 0,
        max_boundary_residual: 0.0,
        max_kappa_sum: 0.0,
        max_kappa_vs_skew: 0.0,
        failures: Vec::new(),
    };
    for (inst, cases) in instances.iter().zip(results) {
        for (l, r) in cases {
            match r {
                Ok(r) => {
                    s.pairs += r.pairs.len();
                    s.max_boundary_residual = worst(s.max_boundary_residual, r.max_boundary_residual);
                    s.max_kappa_sum = worst(s.max_kappa_sum, r.max_kappa_sum);
                    s.max_kappa_vs_skew = worst(s.max_kappa_vs_skew, r.max_kappa_vs_skew);
                }
                Err(e) => s.failures.push(Failure::new(inst, Some(l), format!("{}: {e}", e.code()))),
            }
        }
    }
    s
}

#[derive(Debug, Serialize)]
pub struct LagrangianSuite {
    pub instances: usize,
    pub flavors: FlavorCounts,
    pub lambdas_per_instance: usize,
    pub max_skew: f64,
    /// Frames whose rank differs from the number of tails.
    pub rank_deficient: usize,
    /// `min(solution_dim - k)`; negative would contradict the lower bound.
    pub min_excess_dim: i64,
    /// Singular base eigenvalues away from `±2` that were checked.
    pub singular_points: usize,
    /// Singular eigenvalues where the solution space is not `k` plus the multiplicity.
    pub singular_mismatches: Vec<Failure>,
    /// Evaluations of the dense null-space count.
    pub dense_checks: usize,
    pub dense_mismatches: Vec<Failure>,
    /// Evaluations that raised an error.
    pub failures: Vec<Failure>,
}

#[derive(Default)]
struct LagrangianCase {
    skew: f64,
    rank_ok: bool,
    excess: i64,
    dense: usize,
    singular: Vec<Failure>,
    dense_mismatches: Vec<Failure>,
    failures: Vec<Failure>,
}

fn lagrangian_case(inst: &Instance, lambda: f64, expect_extra: Option<usize>) -> LagrangianCase {
    let op = &inst.op;
    let k = op.tail_count();
    let mut case = LagrangianCase { rank_ok: true, excess: i64::MAX, ..Default::default() };
    let frame = match lagrangian_at_infinity(op, lambda, op.n0() + 2) {
        Ok(f) => f,
        Err(e) => {
            case.failures.push(Failure::new(inst, Some(lambda), format!("{}: {e}", e.code())));
            return case;
        }
    };
    case.skew = frame.max_skew();
    case.rank_ok = frame.rank() == k;
    case.excess = frame.solution_dim as i64 - k as i64;
    if let Some(extra) = expect_extra {
        if frame.solution_dim != k + extra {
            case.singular.push(Failure::new(
                inst,
                Some(lambda),
                format!("solution space has dimension {} at a singular eigenvalue, expected {}", frame.solution_dim, k + extra),
            ));
        }
    }
    let f = op.anchor_depth();
    for depth in [f + 2, f + 5] {
        case.dense += 1;
        match dense_solution_space(op, lambda, depth) {
            Ok(d) if d == frame.solution_dim => {}
            Ok(d) => case.dense_mismatches.push(Failure::new(
                inst,
                Some(lambda),
                format!("dense count {d} at depth {depth} differs from solution_dim {}", frame.solution_dim),
            )),
            Err(e) => case.failures.push(Failure::new(inst, Some(lambda), format!("{}: {e}", e.code()))),
        }
    }
    case
}

impl LagrangianSuite {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
            && self.singular_mismatches.is_empty()
            && self.dense_mismatches.is_empty()
            && self.rank_deficient == 0
            && self.min_excess_dim >= 0
            && self.max_skew <= SKEW_TOL
    }
}

pub fn lagrangian_suite(instances: &[Instance], run_seed: u64, per: usize) -> LagrangianSuite {
    let results: Vec<_> = instances
        .par_iter()
        .map(|inst| {
            let mut cases: Vec<LagrangianCase> =
                lambdas(inst, run_seed, per, 4.0, EDGE_MARGIN).into_iter().map(|l| lagrangian_case(inst, l, None)).collect();
            let singular: Vec<_> = singular_eigenvalues(&inst.op, tol::SINGULAR)
                .into_iter()
                .filter(|s| (s.lambda.abs() - 2.0).abs() > tol::LAMBDA_ZERO)
                .collect();
            let points = singular.len();
            cases.extend(singular.into_iter().map(|s| lagrangian_case(inst, s.lambda, Some(s.multiplicity))));
            (points, cases)
        })
        .collect();
    let mut s = LagrangianSuite {
        instances: instances.len(),
        flavors: flavor_counts(instances),
        lambdas_per_instance: per,
        max_skew: 0.0,
        rank_deficient: 0,
        min_excess_dim: i64::MAX,
        singular_points: 0,
        singular_mismatches: Vec::new(),
        dense_checks: 0,
        dense_mismatches: Vec::new(),
        failures: Vec::new(),
    };
    for (points, cases) in results {
        s.singular_points += points;
        for c in cases {
            s.max_skew = worst(s.max_skew, c.skew);
            s.rank_deficient += usize::from(!c.rank_ok);
            s.min_excess_dim = s.min_excess_dim.min(c.excess);
            s.dense_checks += c.dense;
            s.singular_mismatches.extend(c.singular);
            s.dense_mismatches.extend(c.dense_mismatches);
            s.failures.extend(c.failures);
        }
    }
    s
}

#[derive(Debug, Serialize)]
pub struct ScatteringSuite {
    pub instances: usize,
    pub flavors: FlavorCounts,
    pub lambdas_per_instance: usize,
    pub evaluated: usize,
    /// Draws that landed on an embedded singular eigenvalue, where `S` is undefined.
    pub embedded: usize,
    pub max_unitarity_residual: f64,
    pub max_symmetry_residual: f64,
    /// Where the unitarity residual is largest.
    pub worst: Option<Worst>,
    pub failures: Vec<Failure>,
}

#[derive(Debug, Serialize)]
pub struct Worst {
    pub group: String,
    pub seed: u64,
    pub lambda: f64,
    pub value: f64,
}

impl ScatteringSuite {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
            && self.max_unitarity_residual <= UNITARITY_TOL
            && self.max_symmetry_residual <= UNITARITY_TOL
    }
}

pub fn scattering_suite(instances: &[Instance], run_seed: u64, per: usize) -> ScatteringSuite {
    let results: Vec<_> = instances
        .par_iter()
        .map(|inst| {
            lambdas(inst, run_seed, per, 2.0, EDGE_MARGIN)
                .into_iter()
                .map(|l| (l, scattering_matrix(&inst.op, l)))
                .collect::<Vec<_>>()
        })
        .collect();
    let mut s = ScatteringSuite {
        instances: instances.len(),
        flavors: flavor_counts(instances),
        lambdas_per_instance: per,
        evaluated: 0,
        embedded: 0,
        max_unitarity_residual: 0.0,
        max_symmetry_residual: 0.0,
        worst: None,
        failures: Vec::new(),
    };
    for (inst, cases) in instances.iter().zip(results) {
        for (l, r) in cases {
            match r {
                Ok(m) => {
                    s.evaluated += 1;
                    let u = m.unitarity_residual();
                    if s.worst.as_ref().is_none_or(|w| !(u <= w.value)) {
                        s.worst = Some(Worst { group: inst.group.clone(), seed: inst.seed, lambda: l, value: u });
                    }
                    s.max_unitarity_residual = worst(s.max_unitarity_residual, u);
                    s.max_symmetry_residual = worst(s.max_symmetry_residual, m.symmetry_residual());
                }
                Err(Error::EmbeddedSingular { .. })
                    if singular_eigenvalues(&inst.op, tol::SINGULAR).iter().any(|x| (x.lambda - l).abs() <= 1e-6) =>
                {
                    s.embedded += 1
                }
                Err(e) => s.failures.push(Failure::new(inst, Some(l), format!("{}: {e}", e.code()))),
            }
        }
    }
    s
}

#[derive(Debug, Serialize)]
pub struct OracleRow {
    pub group: String,
    pub seed: u64,
    pub scanned: usize,
    pub truncated: usize,
    pub max_deviation: Option<f64>,
    pub agree: bool,
}

#[derive(Debug, Serialize)]
pub struct OracleSuite {
    pub instances: usize,
    pub flavors: FlavorCounts,
    pub depth: usize,
    pub step: f64,
    pub agreeing: usize,
    pub max_deviation: f64,
    pub rows: Vec<OracleRow>,
    pub failures: Vec<Failure>,
}

pub fn oracle_suite(instances: &[Instance], depth: usize, step: f64) -> OracleSuite {
    let results: Vec<_> = instances.par_iter().map(|inst| oracle_compare(&inst.op, depth, step)).collect();
    let mut s = OracleSuite {
        instances: instances.len(),
        flavors: flavor_counts(instances),
        depth,
        step,
        agreeing: 0,
        max_deviation: 0.0,
        rows: Vec::new(),
        failures: Vec::new(),
    };
    for (inst, r) in instances.iter().zip(results) {
        match r {
            Ok(c) => {
                s.agreeing += usize::from(c.agree);
                s.max_deviation = worst(s.max_deviation, c.max_deviation.unwrap_or(f64::NAN));
                s.rows.push(OracleRow {
                    group: inst.group.clone(),
                    seed: inst.seed,
                    scanned: c.scanned.len(),
                    truncated: c.truncated.len(),
                    max_deviation: c.max_deviation,
                    agree: c.agree,
                });
            }
            Err(e) => s.failures.push(Failure::new(inst, None, format!("{}: {e}", e.code()))),
        }
    }
    s
}

#[derive(Debug, Serialize)]
pub struct Prop1Entry {
    pub group: String,
    pub seed: u64,
    pub flavor: Flavor,
    pub site_max: f64,
    pub base_max: f64,
    pub discrete_count: usize,
}

#[derive(Debug, Serialize)]
pub struct Prop1Suite {
    pub instances: usize,
    pub flavors: FlavorCounts,
    pub threshold: f64,
    pub predicate_true: usize,
    /// Predicate true but no eigenvalue found outside the band.
    pub violations: Vec<Prop1Entry>,
    /// Predicate false at threshold 4 but a quantity exceeds 2.
    pub threshold_two: Vec<Prop1Entry>,
    pub failures: Vec<Failure>,
}

pub fn prop1_suite(instances: &[Instance], step: f64) -> Prop1Suite {
    let results: Vec<_> = instances.par_iter().map(|inst| prop1(&inst.op, step)).collect();
    let mut s = Prop1Suite {
        instances: instances.len(),
        flavors: flavor_counts(instances),
        threshold: tol::PROP1_THRESHOLD,
        predicate_true: 0,
        violations: Vec::new(),
        threshold_two: Vec::new(),
        failures: Vec::new(),
    };
    for (inst, r) in instances.iter().zip(results) {
        let r = match r {
            Ok(r) => r,
            Err(e) => {
                s.failures.push(Failure::new(inst, None, format!("{}: {e}", e.code())));
                continue;
            }
        };
        let entry = || Prop1Entry {
            group: inst.group.clone(),
            seed: inst.seed,
            flavor: inst.op.flavor(),
            site_max: r.predicates.site_max,
            base_max: r.predicates.base_max,
            discrete_count: r.discrete_count,
        };
        if r.predicates.any() {
            s.predicate_true += 1;
            if !r.consistent {
                s.violations.push(entry());
            }
        } else if r.exceeds_two {
            s.threshold_two.push(entry());
        }
    }
    s
}
