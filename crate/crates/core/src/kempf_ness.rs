//! The Kempf–Ness function `f_W(g) = ‖gW‖_F²` on the complex orthogonal
//! group and a descent-based search for an orthogonal `g` making an
//! evaluation-form edge model real.
//!
//! Tangent directions at `g` are `Z·g` with `Z = X + iY`, `X`, `Y` real
//! skew-symmetric. `f` is invariant under the real part `X` to first order,
//! so descent only moves along `iY`. With `W' = gW = V + iT` the derivative
//! along `iY` is `⟨Y, 2(TVᵀ − VTᵀ)⟩`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    eig_real_symmetric, expm, frobenius, orthogonality_residual, sample_orthogonal, CMatrix,
    RMatrix,
};
use crate::models::{EdgeModel, EdgeModelEval};
use crate::szegedy::{apply_group, is_real_edge_model, point_matrix, Realness};

/// Largest orthogonality residual tolerated at API boundaries.
pub const MAX_ORTHOGONALITY_RESIDUAL: f64 = 1e-8;

/// A point of `O_l(ℂ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KnPoint {
    pub g: CMatrix,
    pub orthogonality_residual: f64,
}

impl KnPoint {
    pub fn new(g: CMatrix) -> Result<Self> {
        let res = orthogonality_residual(&g);
        if res > MAX_ORTHOGONALITY_RESIDUAL {
            return Err(Error::Numerical(format!("orthogonality residual {res:e}")));
        }
        Ok(KnPoint {
            g,
            orthogonality_residual: res,
        })
    }

    pub fn identity(l: usize) -> Self {
        KnPoint {
            g: CMatrix::identity(l, l),
            orthogonality_residual: 0.0,
        }
    }
}

/// `W ∈ ℂ^{l×n}`, typically the zero-padded point matrix of an edge model.
#[derive(Clone, Debug, PartialEq)]
pub struct KnProblem {
    w: CMatrix,
}

impl KnProblem {
    pub fn new(w: CMatrix) -> Self {
        KnProblem { w }
    }

    /// Point matrix of `h` padded to `l` rows.
    pub fn from_edge_model(h: &EdgeModelEval, l: usize) -> Result<Self> {
        if l < h.colors() {
            return Err(Error::DimensionTooSmall {
                target: l,
                points: h.colors(),
            });
        }
        Ok(KnProblem {
            w: point_matrix(h, l),
        })
    }

    pub fn w(&self) -> &CMatrix {
        &self.w
    }

    pub fn dim(&self) -> usize {
        self.w.nrows()
    }

    fn moved(&self, g: &CMatrix) -> Result<CMatrix> {
        if g.nrows() != self.dim() || g.ncols() != self.dim() {
            return Err(Error::ShapeMismatch(format!(
                "g is {}x{} but W has {} rows",
                g.nrows(),
                g.ncols(),
                self.dim()
            )));
        }
        Ok(g * &self.w)
    }
}

/// `f_W(g) = tr((gW)*(gW))`.
pub fn f(problem: &KnProblem, g: &CMatrix) -> Result<f64> {
    Ok(frobenius(&problem.moved(g)?).powi(2))
}

/// `TVᵀ − VTᵀ` for `W = V + iT`; the imaginary part of `WW*`.
fn imag_gram(w: &CMatrix) -> RMatrix {
    let v = w.map(|z| z.re);
    let t = w.map(|z| z.im);
    &t * v.transpose() - &v * t.transpose()
}

/// `‖TVᵀ − VTᵀ‖_F`: zero exactly when `WW*` is real, i.e. when the identity
/// is a critical point of `f_W`.
pub fn critical_residual(problem: &KnProblem) -> f64 {
    imag_gram(&problem.w).norm()
}

/// Gradient of `Y ↦ f(exp(iY)·g)` at `Y = 0` (a real skew matrix).
pub fn gradient(problem: &KnProblem, g: &CMatrix) -> Result<RMatrix> {
    Ok(imag_gram(&problem.moved(g)?) * 2.0)
}

/// `exp(iY)·g` for a real skew `Y`.
pub fn retract(g: &CMatrix, y: &RMatrix) -> CMatrix {
    let z = y.map(|x| Complex64::new(0.0, x));
    expm(&z) * g
}

/// Descent direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Direction {
    /// Negative gradient scaled by `1 / f`.
    #[default]
    Gradient,
    /// Solves the Lyapunov system `YA + AY = −S` of the local quadratic
    /// model, where `gW(gW)* = A + iS`.
    Newton,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DescentOptions {
    pub iterations: usize,
    pub step: f64,
    pub direction: Direction,
}

impl Default for DescentOptions {
    fn default() -> Self {
        DescentOptions {
            iterations: 500,
            step: 0.5,
            direction: Direction::Gradient,
        }
    }
}

const MAX_HALVINGS: usize = 30;
const ARMIJO: f64 = 1e-4;

/// Result of a descent run.
#[derive(Clone, Debug, PartialEq)]
pub struct DescentTrace {
    pub point: KnPoint,
    /// `f` at the start and after every accepted step; non-increasing.
    pub f_history: Vec<f64>,
}

fn newton_direction(wg: &CMatrix, grad: &RMatrix) -> Result<RMatrix> {
    let a = (wg * wg.adjoint()).map(|z| z.re);
    let a = (&a + a.transpose()) * 0.5;
    let dec = eig_real_symmetric(&a)?;
    let q = &dec.vectors;
    // The gradient is 2S.
    let s_hat = q.transpose() * (grad * 0.5) * q;
    let floor = 1e-10 * dec.spectral_radius().max(f64::MIN_POSITIVE);
    let l = a.nrows();
    let y_hat = RMatrix::from_fn(l, l, |i, j| {
        let denom = dec.eigenvalues[i] + dec.eigenvalues[j];
        if i == j || denom <= 0.0 {
            0.0
        } else {
            -s_hat[(i, j)] / denom.max(floor)
        }
    });
    Ok(q * y_hat * q.transpose())
}

/// Descends `f_W` from `start`. `on_accept` sees every accepted iterate
/// (including the start) and may stop the run by returning `true`.
pub fn descend_with(
    problem: &KnProblem,
    start: &CMatrix,
    opts: DescentOptions,
    mut on_accept: impl FnMut(&CMatrix, f64) -> bool,
) -> Result<DescentTrace> {
    let mut g = start.clone();
    let mut fg = f(problem, &g)?;
    let mut history = vec![fg];
    if on_accept(&g, fg) {
        return Ok(DescentTrace {
            point: KnPoint::new(g)?,
            f_history: history,
        });
    }
    for _ in 0..opts.iterations {
        let grad = gradient(problem, &g)?;
        let gnorm2 = grad.norm_squared();
        if gnorm2.sqrt() <= 1e-15 * (1.0 + fg) {
            break;
        }
        let dir = match opts.direction {
            Direction::Gradient => -&grad / fg.max(f64::MIN_POSITIVE),
            Direction::Newton => {
                let d = newton_direction(&problem.moved(&g)?, &grad)?;
                // Fall back to the gradient when the model direction is not descending.
                if grad.dot(&d) < 0.0 {
                    d
                } else {
                    -&grad / fg.max(f64::MIN_POSITIVE)
                }
            }
        };
        let slope = grad.dot(&dir);
        let mut s = opts.step;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let cand = retract(&g, &(&dir * s));
            let fc = f(problem, &cand)?;
            if fc <= fg + ARMIJO * s * slope {
                accepted = Some((cand, fc));
                break;
            }
            s *= 0.5;
        }
        let Some((cand, fc)) = accepted else {
            break;
        };
        g = cand;
        fg = fc;
        history.push(fg);
        if on_accept(&g, fg) {
            break;
        }
    }
    Ok(DescentTrace {
        point: KnPoint::new(g)?,
        f_history: history,
    })
}

/// Plain gradient descent from `start`.
pub fn descend(
    problem: &KnProblem,
    start: &CMatrix,
    iterations: usize,
    step: f64,
) -> Result<DescentTrace> {
    descend_with(
        problem,
        start,
        DescentOptions {
            iterations,
            step,
            direction: Direction::Gradient,
        },
        |_, _| false,
    )
}

/// Settings for [`find_conjugating_g`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchOptions {
    /// Total iteration budget, split evenly over the restarts.
    pub budget: usize,
    pub restarts: usize,
    pub step: f64,
    pub seed: u64,
    /// Closure tolerance for the conjugation pairing.
    pub tol: f64,
    /// Spread of the random starting points of restarts after the first.
    pub start_scale: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: 4000,
            restarts: 8,
            step: 1.0,
            seed: 0,
            tol: 1e-8,
            start_scale: 0.5,
        }
    }
}

/// A successful search.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchHit {
    pub point: KnPoint,
    pub f: f64,
    pub restart: usize,
    /// `g·h`, whose stacked vectors are conjugation closed.
    pub model: EdgeModelEval,
    pub pairing: Vec<usize>,
}

/// Outcome of a search, with the `f` history of the selected restart (or of
/// restart 0 when nothing was found).
#[derive(Clone, Debug, PartialEq)]
pub struct SearchReport {
    pub hit: Option<SearchHit>,
    pub f_history: Vec<f64>,
}

fn closure_at(h: &EdgeModelEval, g: &CMatrix, l: usize, tol: f64) -> Option<(EdgeModelEval, Vec<usize>)> {
    let moved = apply_group(h, g, l, 1e-6).ok()?;
    match is_real_edge_model(&moved, tol) {
        Ok(Realness::Real { pairing }) => Some((moved, pairing)),
        _ => None,
    }
}

fn restart_seed(seed: u64, restart: usize) -> u64 {
    seed ^ (restart as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Searches `O_l(ℂ)` for `g` with `{(g·uᵢ; aᵢ)}` closed under conjugation by
/// minimizing `f_W` from several starts and testing closure at every
/// accepted iterate.
pub fn find_conjugating_g(
    h: &EdgeModelEval,
    l: usize,
    opts: SearchOptions,
) -> Result<SearchReport> {
    let problem = KnProblem::from_edge_model(h, l)?;
    let identity = CMatrix::identity(l, l);
    if let Some((model, pairing)) = closure_at(h, &identity, l, opts.tol) {
        let fe = f(&problem, &identity)?;
        return Ok(SearchReport {
            hit: Some(SearchHit {
                point: KnPoint::identity(l),
                f: fe,
                restart: 0,
                model,
                pairing,
            }),
            f_history: vec![fe],
        });
    }
    let restarts = opts.restarts.max(1);
    let per_restart = opts.budget / restarts;
    let runs: Vec<Result<(Option<SearchHit>, Vec<f64>)>> = {
        use rayon::prelude::*;
        (0..restarts)
            .into_par_iter()
            .map(|r| {
                let start = if r == 0 {
                    identity.clone()
                } else {
                    let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(opts.seed, r));
                    sample_orthogonal(l, opts.start_scale, true, &mut rng)?
                };
                let mut hit = None;
                let trace = descend_with(
                    &problem,
                    &start,
                    DescentOptions {
                        iterations: per_restart,
                        step: opts.step,
                        direction: Direction::Newton,
                    },
                    |g, fg| match closure_at(h, g, l, opts.tol) {
                        Some((model, pairing)) => {
                            hit = Some((g.clone(), fg, model, pairing));
                            true
                        }
                        None => false,
                    },
                )?;
                let hit = match hit {
                    Some((g, fg, model, pairing)) => Some(SearchHit {
                        point: KnPoint::new(g)?,
                        f: fg,
                        restart: r,
                        model,
                        pairing,
                    }),
                    None => None,
                };
                Ok((hit, trace.f_history))
            })
            .collect()
    };
    let mut best: Option<(SearchHit, Vec<f64>)> = None;
    let mut first_history = Vec::new();
    for (r, run) in runs.into_iter().enumerate() {
        let (hit, history) = run?;
        if r == 0 {
            first_history = history.clone();
        }
        if let Some(hit) = hit {
            let better = match &best {
                None => true,
                Some((b, _)) => hit.f < b.f - 1e-9 * (1.0 + b.f),
            };
            if better {
                best = Some((hit, history));
            }
        }
    }
    Ok(match best {
        Some((hit, history)) => SearchReport {
            hit: Some(hit),
            f_history: history,
        },
        None => SearchReport {
            hit: None,
            f_history: first_history,
        },
    })
}
