//! Shared numeric tolerances for the game-theoretic inequality checks.
//!
//! All checked quantities are plain arithmetic on finite reals, so the
//! tolerances are tight: a violation beyond them indicates a bug, not
//! modeling noise.

/// Relative tolerance for equality and ordering checks.
pub const REL_TOL: f64 = 1e-9;

/// Absolute floor applied when the compared magnitudes are near zero.
pub const ABS_TOL: f64 = 1e-12;

/// Tolerance scaled to the magnitude of the operands.
pub fn tolerance(a: f64, b: f64) -> f64 {
    ABS_TOL + REL_TOL * a.abs().max(b.abs())
}

/// `a == b` up to the combined absolute/relative tolerance.
pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= tolerance(a, b)
}

/// `a <= b` up to the combined absolute/relative tolerance.
pub fn approx_le(a: f64, b: f64) -> bool {
    a <= b + tolerance(a, b)
}

/// Positive part `max(x, 0)`.
pub fn pos(x: f64) -> f64 {
    x.max(0.0)
}
