use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{frobenius, CMatrix};
use crate::error::{Error, Result};

const TAYLOR_TERMS: usize = 12;
pub const MAX_GROUP_DIM: usize = 32;

/// Matrix exponential by scaling and squaring on a 12-term Taylor base.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let norm1 = (0..n)
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut squarings = 0u32;
    if norm1 > 0.5 {
        squarings = (norm1 / 0.5).log2().ceil() as u32;
    }
    let scaled = a / Complex64::new(2f64.powi(squarings as i32), 0.0);
    let mut result = CMatrix::identity(n, n);
    let mut term = CMatrix::identity(n, n);
    for j in 1..=TAYLOR_TERMS {
        term = &term * &scaled / Complex64::new(j as f64, 0.0);
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// `‖gᵀg − I‖_F`.
pub fn orthogonality_residual(g: &CMatrix) -> f64 {
    let n = g.ncols();
    frobenius(&(g.transpose() * g - CMatrix::identity(n, n)))
}

/// Samples `exp(X + iY)` with `X`, `Y` skew-symmetric, upper entries uniform
/// in `[-scale, scale]`; `Y = 0` when `imaginary` is false.
pub fn sample_orthogonal<R: Rng + ?Sized>(
    l: usize,
    scale: f64,
    imaginary: bool,
    rng: &mut R,
) -> Result<CMatrix> {
    if l > MAX_GROUP_DIM {
        return Err(Error::TooLarge(format!("group dimension {l} > {MAX_GROUP_DIM}")));
    }
    if scale == 0.0 {
        return Ok(CMatrix::identity(l, l));
    }
    let mut z = CMatrix::zeros(l, l);
    for i in 0..l {
        for j in i + 1..l {
            let x = rng.gen_range(-scale..=scale);
            let y = if imaginary {
                rng.gen_range(-scale..=scale)
            } else {
                0.0
            };
            z[(i, j)] = Complex64::new(x, y);
            z[(j, i)] = -z[(i, j)];
        }
    }
    Ok(expm(&z))
}

/// A seeded random element of `O_l(ℂ)` near the identity.
pub fn random_complex_orthogonal(l: usize, scale: f64, seed: u64) -> Result<CMatrix> {
    sample_orthogonal(l, scale, true, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// A seeded random element of `O_l(ℝ)` (as a complex matrix).
pub fn random_real_orthogonal(l: usize, scale: f64, seed: u64) -> Result<CMatrix> {
    sample_orthogonal(l, scale, false, &mut ChaCha8Rng::seed_from_u64(seed))
}
