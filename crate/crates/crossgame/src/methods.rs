//! The four first-order methods run on a game's vector field, with exact
//! iterate tracing and vector-field-evaluation accounting.
//!
//! Update rules, with `v` the game's vector field:
//!
//! ```text
//! gd    w'  = w - h v(w)
//! gdm   w'  = w - h v(w) + m (w - w_prev)
//! eg    w'  = w - h v(w - h v(w))
//! egm   w'  = w - h v(w - g v(w)) + m (w - w_prev)
//! ```
//!
//! Both momentum methods take their first step damped by `1/(1+m)` (no
//! `w_{-1}` convention); that choice makes the iterate error equal the
//! residual polynomial of the method exactly on linear fields, instead of
//! only asymptotically. `gd`/`eg` are the `m = 0` members of the same
//! recurrences, executed on the same code path, so the reduction
//! identities hold bitwise.

use serde::Serialize;
use thiserror::Error;

use crate::game::{GameError, QuadraticGame};
use crate::linalg::euclidean_norm;
use crate::respoly::Hyperparams;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("iteration count must be >= 1")]
    NoIterations,
    #[error("invalid step/momentum parameters: {0}")]
    BadParams(String),
    #[error("fit window [{lo}, {hi}] is invalid for a trace of length {len}")]
    BadWindow { lo: usize, hi: usize, len: usize },
    #[error("fit window touches the numerical floor (distance {dist:e} at iteration {at})")]
    WindowAtFloor { at: usize, dist: f64 },
}

/// Relative blow-up at which a run is declared divergent and truncated.
pub const DIVERGENCE_GUARD: f64 = 1e12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Gd,
    Gdm,
    Eg,
    Egm,
}

impl Method {
    /// Vector-field evaluations consumed per iteration.
    pub fn evals_per_iter(&self) -> u64 {
        match self {
            Method::Gd | Method::Gdm => 1,
            Method::Eg | Method::Egm => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::Gd => "gd",
            Method::Gdm => "gdm",
            Method::Eg => "eg",
            Method::Egm => "egm",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gd" => Ok(Method::Gd),
            "gdm" => Ok(Method::Gdm),
            "eg" => Ok(Method::Eg),
            "egm" => Ok(Method::Egm),
            other => Err(format!("unknown method '{other}' (expected gd|gdm|eg|egm)")),
        }
    }
}

/// Distances to the stationary point at `t = 0..T` plus cumulative
/// vector-field evaluation counts. `diverged` marks a truncated run.
#[derive(Clone, Debug)]
pub struct RunTrace {
    pub method: Method,
    pub params: Hyperparams,
    pub distances: Vec<f64>,
    pub vf_evals: Vec<u64>,
    pub diverged: bool,
}

impl RunTrace {
    pub fn final_distance(&self) -> f64 {
        *self.distances.last().expect("trace is never empty")
    }

    pub fn initial_distance(&self) -> f64 {
        self.distances[0]
    }

    /// Distances normalized by the initial distance (used for plotting).
    /// A zero initial distance yields an all-zero profile.
    pub fn relative(&self) -> Vec<f64> {
        let d0 = self.distances[0];
        if d0 == 0.0 {
            return vec![0.0; self.distances.len()];
        }
        self.distances.iter().map(|d| d / d0).collect()
    }
}

enum Extrapolation {
    None,
    Step(f64),
}

fn check_common(game: &QuadraticGame, w0: &[f64], iters: usize) -> Result<(), RunError> {
    if iters == 0 {
        return Err(RunError::NoIterations);
    }
    if w0.len() != game.dim() {
        return Err(RunError::Game(GameError::DimensionMismatch {
            expected: game.dim(),
            got: w0.len(),
        }));
    }
    Ok(())
}

/// Shared engine. `gd`/`gdm` are the no-extrapolation instances, `eg`/`egm`
/// the extrapolated ones; with `m = 0` the momentum term is skipped
/// entirely so the reductions are bit-exact.
fn run_engine(
    game: &QuadraticGame,
    method: Method,
    h: f64,
    extrapolation: Extrapolation,
    m: f64,
    w0: &[f64],
    iters: usize,
) -> Result<RunTrace, RunError> {
    check_common(game, w0, iters)?;
    if !h.is_finite() || !(0.0..1.0).contains(&m) {
        return Err(RunError::BadParams(format!("h={h}, m={m}")));
    }
    let evals = method.evals_per_iter();
    let params = Hyperparams {
        h,
        gamma: match extrapolation {
            Extrapolation::None => 0.0,
            Extrapolation::Step(g) => g,
        },
        m,
    };

    let field = |w: &[f64]| game.eval_vector_field(w).expect("dimension checked");
    let update_direction = |w: &[f64]| -> Vec<f64> {
        match extrapolation {
            Extrapolation::None => field(w),
            Extrapolation::Step(g) => {
                let vw = field(w);
                let probe: Vec<f64> = w.iter().zip(&vw).map(|(wi, vi)| wi - g * vi).collect();
                field(&probe)
            }
        }
    };

    let d0 = euclidean_norm(&sub(w0, &game.w_star));
    let mut distances = Vec::with_capacity(iters + 1);
    let mut vf_evals = Vec::with_capacity(iters + 1);
    distances.push(d0);
    vf_evals.push(0);
    let mut diverged = false;

    let mut prev = w0.to_vec();
    // damped first step h/(1+m); with m = 0 this is exactly h
    let dir = update_direction(&prev);
    let damped = h / (1.0 + m);
    let mut cur: Vec<f64> = prev.iter().zip(&dir).map(|(w, v)| w - damped * v).collect();
    let mut total_evals = evals;
    for t in 1..=iters {
        if t > 1 {
            let dir = update_direction(&cur);
            let next: Vec<f64> = if m == 0.0 {
                cur.iter().zip(&dir).map(|(w, v)| w - h * v).collect()
            } else {
                cur.iter()
                    .zip(&dir)
                    .zip(&prev)
                    .map(|((w, v), p)| w - h * v + m * (w - p))
                    .collect()
            };
            prev = std::mem::replace(&mut cur, next);
            total_evals += evals;
        }
        let dist = euclidean_norm(&sub(&cur, &game.w_star));
        distances.push(dist);
        vf_evals.push(total_evals);
        let finite = dist.is_finite() && cur.iter().all(|x| x.is_finite());
        if !finite || (d0 > 0.0 && dist > DIVERGENCE_GUARD * d0) {
            diverged = true;
            break;
        }
    }

    Ok(RunTrace {
        method,
        params,
        distances,
        vf_evals,
        diverged,
    })
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    crate::linalg::sub(a, b)
}

pub fn run_gd(
    game: &QuadraticGame,
    h: f64,
    w0: &[f64],
    iters: usize,
) -> Result<RunTrace, RunError> {
    run_engine(game, Method::Gd, h, Extrapolation::None, 0.0, w0, iters)
}

pub fn run_gdm(
    game: &QuadraticGame,
    h: f64,
    m: f64,
    w0: &[f64],
    iters: usize,
) -> Result<RunTrace, RunError> {
    run_engine(game, Method::Gdm, h, Extrapolation::None, m, w0, iters)
}

/// Extragradient; the extrapolation step reuses the main step size `h`.
pub fn run_eg(
    game: &QuadraticGame,
    h: f64,
    w0: &[f64],
    iters: usize,
) -> Result<RunTrace, RunError> {
    run_engine(game, Method::Eg, h, Extrapolation::Step(h), 0.0, w0, iters)
}

pub fn run_egm(
    game: &QuadraticGame,
    params: &Hyperparams,
    w0: &[f64],
    iters: usize,
) -> Result<RunTrace, RunError> {
    run_engine(
        game,
        Method::Egm,
        params.h,
        Extrapolation::Step(params.gamma),
        params.m,
        w0,
        iters,
    )
}

/// Least-squares slope of `ln distance` over the inclusive iteration window
/// `[lo, hi]`, exponentiated into a per-iteration contraction factor.
///
/// Rejects windows where any distance is zero or below `1e-13 *
/// distances[0]`: past that point the trace measures roundoff, not rate.
pub fn fit_rate(trace: &RunTrace, window: (usize, usize)) -> Result<f64, RunError> {
    let (lo, hi) = window;
    let len = trace.distances.len();
    if lo >= hi || hi >= len {
        return Err(RunError::BadWindow { lo, hi, len });
    }
    let floor = 1e-13 * trace.distances[0];
    for t in lo..=hi {
        let d = trace.distances[t];
        if d <= 0.0 || d <= floor {
            return Err(RunError::WindowAtFloor { at: t, dist: d });
        }
    }
    let n = (hi - lo + 1) as f64;
    let t_mean = (lo + hi) as f64 / 2.0;
    let y_mean: f64 = (lo..=hi).map(|t| trace.distances[t].ln()).sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for t in lo..=hi {
        let dt = t as f64 - t_mean;
        num += dt * (trace.distances[t].ln() - y_mean);
        den += dt * dt;
    }
    Ok((num / den).exp())
}
