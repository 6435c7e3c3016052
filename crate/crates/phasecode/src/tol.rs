//! Centralized numerical tolerances.
//!
//! Every floating-point comparison in the crate goes through one of these
//! constants so the precision story lives in one place.

/// Structural equality of matrix and vector entries; also Hermiticity and
/// unitarity checks.
pub const STRUCTURAL: f64 = 1e-12;

/// Slack allowed below zero for eigenvalues when checking positive
/// semidefiniteness.
pub const PSD_SLACK: f64 = 1e-10;

/// Allowed deviation of a squared norm from 1 for inputs that must arrive
/// normalized (states and logical amplitude pairs).
pub const NORMALIZATION: f64 = 1e-9;

/// Agreement required between an exact simulation and a closed-form value.
pub const FORMULA_MATCH: f64 = 1e-10;

/// Acceptance probability at or below which a post-selected run is reported
/// as degenerate instead of being renormalized.
pub const DEGENERATE_ACCEPTANCE: f64 = 1e-12;

/// Residual norm below which a Gram-Schmidt candidate counts as linearly
/// dependent. Genuine residuals in encoder completion are never below ~0.3,
/// so any cutoff in between works; this one leaves ample room for rounding.
pub const DEPENDENT_RESIDUAL: f64 = 1e-6;
