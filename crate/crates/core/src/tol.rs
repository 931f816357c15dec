//! Numerical thresholds shared across the crate.

/// Relative singular-value threshold for every rank and null-space decision.
pub const RANK_REL: f64 = 1e-9;

/// `|λ| = 2` is treated as the band edge within this distance.
pub const BAND_EDGE: f64 = 1e-9;

/// Below this `|λ|` the C mode is seeded with `(C_0, C_1) = (1, λ/2)` instead of `(1, 2/λ)`.
pub const LAMBDA_ZERO: f64 = 1e-6;

/// Constancy tolerance for the Wronskian along a tail.
pub const TAIL_CONSTANCY: f64 = 1e-10;

/// Bound-state scans stay this far outside the band.
pub const SCAN_EDGE_MARGIN: f64 = 1e-6;

/// Detector value below which a scanned root counts as a Lagrangian intersection.
pub const ROOT_ACCEPT: f64 = 1e-7;

/// Bracket width at which root refinement stops.
pub const ROOT_WIDTH: f64 = 1e-12;

/// Default tolerance for singular base eigenvalues (eigenvalue clustering and nest residual).
pub const SINGULAR: f64 = 1e-8;

/// Threshold in the sufficient conditions for discrete spectrum.
pub const PROP1_THRESHOLD: f64 = 4.0;
