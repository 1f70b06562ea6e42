//! Numeric tolerances shared across the crate.
//!
//! Functional-equation checks operate on normalized residuals, where true
//! identities land at machine-noise level (~1e-14) and failures at 1e-2 or
//! above, so the thresholds below separate the two regimes by several
//! orders of magnitude.

/// Unit-norm defect allowed for homogeneous sphere points and isometry pairs.
pub const NORM_TOL: f64 = 1e-12;

/// Cross-product tolerance for sphere-point equality.
pub const POINT_EQ_TOL: f64 = 1e-9;

/// Element-equality tolerance for canonicalized isometry pairs.
pub const ISOMETRY_EQ_TOL: f64 = 1e-9;

/// Normalized coefficient-residual tolerance for rational-map equality.
pub const MAP_EQ_TOL: f64 = 1e-9;

/// Relative residual accepted for a polynomial root.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-8;

/// Roots closer than this are considered shared when reducing P/Q to
/// coprime form.
pub const ROOT_PAIR_TOL: f64 = 1e-8;

/// Iteration cap for the simultaneous root finder.
pub const MAX_ROOT_ITERS: usize = 200;

/// Group-closure enumeration cap; the largest finite isometry group has
/// 60 elements, so exceeding this signals tolerance-induced drift.
pub const GROUP_CLOSURE_CAP: usize = 200;

/// Relative tolerance for the local-degree test at a superattracting
/// fixed point.
pub const LOCAL_DEGREE_TOL: f64 = 1e-8;

/// Chordal radius around a superattracting fixed point that counts as
/// "entered the basin" for basin-potential iteration.
pub const BASIN_ENTRY_RADIUS: f64 = 1e-3;

/// Chordal distance below which a potential evaluation point collides
/// with a measure sample (log pole).
pub const SAMPLE_COLLISION_TOL: f64 = 1e-14;

/// Default burn-in for backward-orbit sampling.
pub const DEFAULT_BURN_IN: usize = 50;

/// Default sample count for measure clouds.
pub const DEFAULT_SAMPLES: usize = 100_000;

/// Default rotation-order search bound for symmetry classification.
pub const DEFAULT_MAX_ORDER: usize = 64;

/// Default Hausdorff tolerance for numeric symmetry verification.
pub const DEFAULT_HAUSDORFF_TOL: f64 = 0.02;

/// Matching tolerance for precritical-set permutation checks.
pub const PRECRITICAL_MATCH_TOL: f64 = 1e-6;

/// Unit-circle tolerance used by the exact McMullen classifier.
pub const MCMULLEN_BOUNDARY_TOL: f64 = 1e-12;

/// Width of the |lambda| = 1 band flagged as "near boundary" in reports.
pub const MCMULLEN_NEAR_BOUNDARY: f64 = 1e-3;

/// Default iteration cap for parameter-plane rendering.
pub const DEFAULT_PARAM_MAX_ITER: usize = 512;
