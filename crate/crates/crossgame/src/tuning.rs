//! Hyperparameter selection: closed-form optimal parameters for the
//! extragradient method with momentum on a cross-shaped spectrum, theory
//! step sizes and spectral-radius bounds for the baselines, asymptotic
//! expansions, and exhaustive grid search.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::game::QuadraticGame;
use crate::methods::{run_eg, run_gd, run_gdm, Method, RunError};
use crate::respoly::{asymptotic_rate, Hyperparams, PolyError};
use crate::spectrum::Spectrum;

#[derive(Debug, Error)]
pub enum TuneError {
    #[error("require 0 < mu <= L and c >= 0 (got mu={mu}, L={l}, c={c})")]
    InvalidConstants { mu: f64, l: f64, c: f64 },
    #[error("tau must lie in (0, 1) and theta must be positive (got tau={tau}, theta={theta})")]
    InvalidBranchInputs { tau: f64, theta: f64 },
    #[error("invalid grid: require lo <= hi and step > 0 (got lo={lo}, hi={hi}, step={step})")]
    InvalidGrid { lo: f64, hi: f64, step: f64 },
    #[error("grid search for {0} needs a momentum range")]
    MissingMomentumRange(Method),
    #[error("grid search does not apply to {0}; its parameters are closed-form")]
    UnsupportedMethod(Method),
    #[error("every grid candidate diverged")]
    AllCandidatesDiverged,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Run(#[from] RunError),
}

fn check_constants(mu: f64, l: f64, c: f64) -> Result<(), TuneError> {
    let ok = mu.is_finite() && l.is_finite() && c.is_finite() && mu > 0.0 && l >= mu && c >= 0.0;
    if ok {
        Ok(())
    } else {
        Err(TuneError::InvalidConstants { mu, l, c })
    }
}

/// Optimal hyperparameters of the momentum extragradient method for the
/// cross `[mu, L] U {(mu+L)/2 + bi : |b| <= c}`:
///
/// ```text
/// h = 16 (mu + L) / ( sqrt(4c^2 + (mu+L)^2) + sqrt(4 mu L) )^2
/// gamma = 1 / (mu + L)
/// m = ( (sqrt(4c^2 + (mu+L)^2) - sqrt(4 mu L))
///     / (sqrt(4c^2 + (mu+L)^2) + sqrt(4 mu L)) )^2
/// ```
///
/// These make the robust region coincide with the cross: the link sends
/// `mu` and `L` to `1` and the segment tips to `-1`.
pub fn optimal_egm(mu: f64, l: f64, c: f64) -> Result<Hyperparams, TuneError> {
    check_constants(mu, l, c)?;
    let s = (4.0 * c * c + (mu + l) * (mu + l)).sqrt();
    let r = (4.0 * mu * l).sqrt();
    let h = 16.0 * (mu + l) / ((s + r) * (s + r));
    let gamma = 1.0 / (mu + l);
    let sqrt_m = (s - r) / (s + r);
    Ok(Hyperparams {
        h,
        gamma,
        m: sqrt_m * sqrt_m,
    })
}

/// Specialization of [`optimal_egm`] to the equal-length cross
/// `c = (L - mu)/2`:
///
/// ```text
/// h = 8 (mu + L) / ( sqrt(mu^2 + L^2) + sqrt(2 mu L) )^2
/// gamma = 1 / (mu + L)
/// m = ( (sqrt(mu^2 + L^2) - sqrt(2 mu L))
///     / (sqrt(mu^2 + L^2) + sqrt(2 mu L)) )^2
/// ```
pub fn optimal_egm_equal_length(mu: f64, l: f64) -> Result<Hyperparams, TuneError> {
    check_constants(mu, l, 0.0)?;
    let s = (mu * mu + l * l).sqrt();
    let r = (2.0 * mu * l).sqrt();
    let h = 8.0 * (mu + l) / ((s + r) * (s + r));
    let gamma = 1.0 / (mu + l);
    let sqrt_m = (s - r) / (s + r);
    Ok(Hyperparams {
        h,
        gamma,
        m: sqrt_m * sqrt_m,
    })
}

/// Tuned asymptotic rate and its ill-conditioned first-order expansion.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RateExpansion {
    /// `m^(1/4)` at the optimal parameters.
    pub exact: f64,
    /// `1 - 2 sqrt(tau) / sqrt((2c/L)^2 + 1)`, the leading behavior as
    /// `tau = mu/L -> 0`.
    pub first_order: f64,
    /// False when `mu = L`, where there is no ill-conditioned limit to
    /// expand around.
    pub applicable: bool,
}

/// Compares the tuned asymptotic rate `m^(1/4)` against its first-order
/// expansion in `sqrt(tau)`. For `c = (L-mu)/2` the expansion approaches
/// `1 - sqrt(2) sqrt(tau)`, and for `c = 0` it reduces to the classical
/// momentum shape `1 - 2 sqrt(tau)`.
pub fn egm_rate_expansion(mu: f64, l: f64, c: f64) -> Result<RateExpansion, TuneError> {
    let params = optimal_egm(mu, l, c)?;
    let tau = mu / l;
    let first_order = 1.0 - 2.0 * tau.sqrt() / ((2.0 * c / l) * (2.0 * c / l) + 1.0).sqrt();
    Ok(RateExpansion {
        exact: asymptotic_rate(params.m),
        first_order,
        applicable: tau < 1.0,
    })
}

/// Per-iteration and per-evaluation contraction bounds for one method.
#[derive(Clone, Debug, Serialize)]
pub struct RateReport {
    pub method: Method,
    /// Bound on the contraction factor per iteration.
    pub per_iter_bound: f64,
    /// Same bound normalized per vector-field evaluation.
    pub per_eval_bound: f64,
    pub tau: f64,
    pub notes: String,
}

fn rate_report(method: Method, squared_radius_bound: f64, tau: f64, notes: String) -> RateReport {
    let per_iter = squared_radius_bound.max(0.0).sqrt();
    let per_eval = per_iter.powf(1.0 / method.evals_per_iter() as f64);
    RateReport {
        method,
        per_iter_bound: per_iter,
        per_eval_bound: per_eval,
        tau,
        notes,
    }
}

fn nonempty(s: &Spectrum) -> Result<(), TuneError> {
    if s.is_empty() {
        return Err(TuneError::InvalidConstants {
            mu: f64::NAN,
            l: f64::NAN,
            c: f64::NAN,
        });
    }
    Ok(())
}

/// Gradient-method theory step size `h = min Re(1/lambda)` over the
/// spectrum.
pub fn gd_theory_step(s: &Spectrum) -> Result<f64, TuneError> {
    nonempty(s)?;
    Ok(s.extremes().min_re_inv)
}

/// Gradient-method local rate bound at the theory step size:
/// squared spectral radius `<= 1 - min Re(1/lambda) * min Re(lambda)`.
pub fn gd_rate_bound(s: &Spectrum) -> Result<RateReport, TuneError> {
    nonempty(s)?;
    let e = s.extremes();
    let squared = 1.0 - e.min_re_inv * e.min_re;
    Ok(rate_report(
        Method::Gd,
        squared,
        e.tau,
        format!(
            "squared radius bound {} = 1 - min_re_inv * min_re at h = {}",
            squared, e.min_re_inv
        ),
    ))
}

/// Extragradient theory step size `h = 1 / (4 max |lambda|)`.
pub fn eg_theory_step(s: &Spectrum) -> Result<f64, TuneError> {
    nonempty(s)?;
    Ok(1.0 / (4.0 * s.extremes().max_abs))
}

/// The two published shapes of the extragradient rate bound. They differ
/// by a factor 16 in the second term's denominator and are reported side
/// by side rather than silently merged.
#[derive(Clone, Debug, Serialize)]
pub struct EgRateBounds {
    /// `1 - (min Re(lambda)/max|lambda| + min|lambda|^2/max|lambda|^2) / 4`
    /// evaluated from the measured extremes.
    pub general: RateReport,
    /// The piecewise closed form for the equal-length cross, evaluated at
    /// `(mu, L) = (min_re, max_abs)`: the second term is `mu^2 / (16 L^2)`
    /// when `L >= (sqrt(2)+1) mu` and `(L-mu)^2 / (16 L^2)` otherwise.
    pub equal_length_cross: RateReport,
}

/// Extragradient local rate bounds at the theory step size.
pub fn eg_rate_bound(s: &Spectrum) -> Result<EgRateBounds, TuneError> {
    nonempty(s)?;
    let e = s.extremes();
    let general_sq =
        1.0 - 0.25 * (e.min_re / e.max_abs + e.min_abs_sq / (e.max_abs * e.max_abs));
    let (mu, l) = (e.min_re, e.max_abs);
    let second = if l >= (2f64.sqrt() + 1.0) * mu {
        mu * mu / (16.0 * l * l)
    } else {
        (l - mu) * (l - mu) / (16.0 * l * l)
    };
    let printed_sq = 1.0 - 0.25 * (mu / l + second);
    Ok(EgRateBounds {
        general: rate_report(
            Method::Eg,
            general_sq,
            e.tau,
            "second term min|lambda|^2 / max|lambda|^2 from measured extremes".to_string(),
        ),
        equal_length_cross: rate_report(
            Method::Eg,
            printed_sq,
            e.tau,
            "piecewise equal-length-cross form; differs from the general form by a 16x denominator"
                .to_string(),
        ),
    })
}

/// Which elliptic-perturbation regime a momentum-gradient bound falls in,
/// by the exponent `theta` in `epsilon/L = tau^theta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GdmBranch {
    /// `theta > 1/2`: accelerated, `1 - 2 sqrt(tau)`.
    AboveHalf,
    /// `theta = 1/2`: accelerated with a worse constant,
    /// `1 - 2 (sqrt(2) - 1) sqrt(tau)`.
    AtHalf,
    /// `theta < 1/2`: not accelerated, `1 - tau^(1 - theta)`.
    BelowHalf,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GdmRateBound {
    pub bound: f64,
    pub branch: GdmBranch,
}

/// Leading-order momentum-gradient rate bound when the spectrum sits in an
/// ellipse of height `epsilon = L tau^theta` around the real segment.
/// Remainder terms are not modeled.
pub fn gdm_rate_bound(tau: f64, theta: f64) -> Result<GdmRateBound, TuneError> {
    let valid = tau.is_finite() && theta.is_finite() && tau > 0.0 && tau < 1.0 && theta > 0.0;
    if !valid {
        return Err(TuneError::InvalidBranchInputs { tau, theta });
    }
    let (bound, branch) = if theta > 0.5 {
        (1.0 - 2.0 * tau.sqrt(), GdmBranch::AboveHalf)
    } else if theta == 0.5 {
        (1.0 - 2.0 * (2f64.sqrt() - 1.0) * tau.sqrt(), GdmBranch::AtHalf)
    } else {
        (1.0 - tau.powf(1.0 - theta), GdmBranch::BelowHalf)
    };
    Ok(GdmRateBound { bound, branch })
}

/// True when the momentum gradient method cannot reach an accelerated rate
/// on the equal-length cross, i.e. when the condition number `L/mu`
/// exceeds `sqrt(5)` (strictly).
pub fn gdm_acceleration_threshold(mu: f64, l: f64) -> Result<bool, TuneError> {
    check_constants(mu, l, 0.0)?;
    Ok(l > 5f64.sqrt() * mu)
}

/// Inclusive arithmetic progression `lo, lo + step, ...` up to `hi`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GridRange {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl GridRange {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self, TuneError> {
        if !(lo.is_finite() && hi.is_finite() && step.is_finite()) || lo > hi || step <= 0.0 {
            return Err(TuneError::InvalidGrid { lo, hi, step });
        }
        Ok(GridRange { lo, hi, step })
    }

    pub fn points(&self) -> Vec<f64> {
        // tolerate the usual binary rounding of (hi - lo) / step
        let n = ((self.hi - self.lo) / self.step * (1.0 + 1e-12) + 1e-9).floor() as usize;
        (0..=n).map(|i| self.lo + i as f64 * self.step).collect()
    }
}

/// Step-size grid plus an optional momentum grid (only the momentum
/// gradient method uses one).
#[derive(Clone, Debug, Serialize)]
pub struct GridSpec {
    pub h: GridRange,
    pub m: Option<GridRange>,
}

/// Step-size grid shared by the gradient method and its momentum variant:
/// `0.005..=0.015`, increment `1e-3`.
pub fn gd_default_grid() -> GridSpec {
    GridSpec {
        h: GridRange::new(0.005, 0.015, 1e-3).expect("constant grid"),
        m: None,
    }
}

/// Momentum-gradient grid: the step grid above crossed with momentum
/// `0.01..=0.99`, increment `1e-2`.
pub fn gdm_default_grid() -> GridSpec {
    GridSpec {
        h: GridRange::new(0.005, 0.015, 1e-3).expect("constant grid"),
        m: Some(GridRange::new(0.01, 0.99, 1e-2).expect("constant grid")),
    }
}

/// Extragradient grid: `0.001..=0.05`, increment `1e-4`.
pub fn eg_default_grid() -> GridSpec {
    GridSpec {
        h: GridRange::new(0.001, 0.05, 1e-4).expect("constant grid"),
        m: None,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GridOutcome {
    pub best: Hyperparams,
    pub final_distance: f64,
    pub candidates: usize,
    pub diverged: usize,
}

/// Exhaustively runs the grid from `w0 = 0` and keeps the candidate with
/// the smallest final distance to the stationary point. Diverged or
/// non-finite runs are excluded. Ties break toward smaller `h`, then
/// smaller `m`, so the outcome is deterministic; candidates are
/// independent and evaluated in parallel.
pub fn grid_search(
    game: &QuadraticGame,
    method: Method,
    spec: &GridSpec,
    iters: usize,
) -> Result<GridOutcome, TuneError> {
    let h_points = spec.h.points();
    let m_points = match (method, &spec.m) {
        (Method::Gd, _) | (Method::Eg, _) => vec![0.0],
        (Method::Gdm, Some(range)) => range.points(),
        (Method::Gdm, None) => return Err(TuneError::MissingMomentumRange(method)),
        (Method::Egm, _) => return Err(TuneError::UnsupportedMethod(method)),
    };

    let mut candidates: Vec<(f64, f64)> = Vec::with_capacity(h_points.len() * m_points.len());
    for &h in &h_points {
        for &m in &m_points {
            candidates.push((h, m));
        }
    }

    let w0 = vec![0.0; game.dim()];
    let results: Vec<Option<(f64, usize)>> = candidates
        .par_iter()
        .enumerate()
        .map(|(idx, &(h, m))| {
            let trace = match method {
                Method::Gd => run_gd(game, h, &w0, iters),
                Method::Gdm => run_gdm(game, h, m, &w0, iters),
                Method::Eg => run_eg(game, h, &w0, iters),
                Method::Egm => unreachable!("rejected above"),
            };
            match trace {
                Ok(t) if !t.diverged && t.final_distance().is_finite() => {
                    Some((t.final_distance(), idx))
                }
                _ => None,
            }
        })
        .collect();

    let diverged = results.iter().filter(|r| r.is_none()).count();
    // candidate index is lexicographic in (h, m), so min over (distance,
    // index) realizes the documented tie-breaking
    let best = results
        .into_iter()
        .flatten()
        .min_by(|a, b| a.partial_cmp(b).expect("finite distances"))
        .ok_or(TuneError::AllCandidatesDiverged)?;

    let (h, m) = candidates[best.1];
    Ok(GridOutcome {
        best: Hyperparams {
            h,
            gamma: if method == Method::Eg { h } else { 0.0 },
            m,
        },
        final_distance: best.0,
        candidates: candidates.len(),
        diverged,
    })
}
