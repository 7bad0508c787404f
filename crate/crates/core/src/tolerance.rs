//! Shared numerical tolerances.

use num_complex::Complex64;

/// Tolerance bundle used for equality, PSD and partition-function checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Relative tolerance for "equal" complex values, twin detection and
    /// realness checks.
    pub equality: f64,
    /// PSD threshold, scaled by `1 + ‖M‖_F`.
    pub psd: f64,
    /// Relative tolerance when comparing partition-function values.
    pub partition: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            equality: 1e-9,
            psd: 1e-8,
            partition: 1e-8,
        }
    }
}

impl ToleranceConfig {
    /// A bundle with every field set to `tol`.
    pub fn uniform(tol: f64) -> Self {
        ToleranceConfig {
            equality: tol,
            psd: tol,
            partition: tol,
        }
    }

    pub fn approx_eq(&self, a: Complex64, b: Complex64) -> bool {
        approx_eq(a, b, self.equality)
    }
}

/// `|a - b| <= tol * (1 + max(|a|, |b|))`.
pub fn approx_eq(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

/// Relative error `|a - b| / (1 + |b|)`.
pub fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / (1.0 + b.norm())
}

/// True iff every value is finite.
pub fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
