//! Fourier multipliers of the operators appearing in the equation.
//!
//! On `[-π, π]` with the convention `u(x) = Σ_n û_n e^{inx}`, the periodic
//! Hilbert transform and the fractional Laplacian act diagonally:
//!
//! ```text
//!     (Hu)^(n) = -i sgn(n) û_n,          (Λ^α u)^(n) = |n|^α û_n .
//! ```
//!
//! `H` annihilates the mean and `Λ^α` damps every nonzero mode; both facts
//! fall straight out of the symbols below.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Multiplier of the periodic Hilbert transform at wavenumber `n`:
/// `-i sgn(n)`, with `sgn(0) = 0`.
pub fn hilbert_symbol(n: i64) -> Complex64 {
    Complex64::new(0.0, -(n.signum() as f64))
}

/// Multiplier of `Λ^α` at wavenumber `n`: `|n|^α`.
///
/// Requires `0 < α ≤ 2`; the zero mode is untouched (`|0|^α = 0`).
pub fn frac_laplacian_symbol(n: i64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::invalid(
            "alpha",
            format!("fractional order must lie in (0, 2], got {alpha}"),
        ));
    }
    Ok((n.unsigned_abs() as f64).powf(alpha))
}

/// Multiplier of the advecting operator `H^a ∂_x^b` at wavenumber `n`:
/// `(-i sgn(n))^a (i n)^b` for `a, b ∈ {0, 1}`.
pub fn advection_symbol(n: i64, a: u8, b: u8) -> Complex64 {
    debug_assert!(a <= 1 && b <= 1);
    let mut sym = Complex64::new(1.0, 0.0);
    if a == 1 {
        sym *= hilbert_symbol(n);
    }
    if b == 1 {
        sym *= Complex64::new(0.0, n as f64);
    }
    sym
}
