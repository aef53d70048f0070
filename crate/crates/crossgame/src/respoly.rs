//! Residual polynomials of the momentum methods, written with Chebyshev
//! polynomials, plus the classification of the hyperparameter modes and the
//! robust region they induce.
//!
//! On a linear vector field the error of iteration `t` is a degree-`t`
//! polynomial in the Jacobian applied to the initial error. For the
//! extragradient method with momentum that polynomial obeys
//!
//! ```text
//! P(0) = 1,  P(1) = 1 - h*l*(1 - g*l)/(1 + m),
//! P(t+1) = (1 + m - h*l*(1 - g*l)) * P(t) - m * P(t-1)
//! ```
//!
//! and collapses, for `m > 0`, to
//!
//! ```text
//! P(t) = m^(t/2) * ( 2m/(1+m) * T_t(sigma) + (1-m)/(1+m) * U_t(sigma) )
//! sigma(l) = (1 + m - h*l*(1 - g*l)) / (2*sqrt(m))
//! ```
//!
//! with `T_t`, `U_t` the Chebyshev polynomials of the first and second
//! kind. The plain momentum method has the same shape with the linear link
//! `xi(l) = (1 + m - h*l) / (2*sqrt(m))` in place of the quadratic
//! `sigma`. Everything interesting about convergence happens through
//! whether the link lands in `[-1, 1]`, where `|T_t| <= 1` and
//! `|U_t| <= t + 1`; outside that interval the combination grows
//! exponentially in `t`.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PolyError {
    #[error("invalid hyperparameters: require h > 0, gamma >= 0, 0 <= m < 1 (got h={h}, gamma={gamma}, m={m})")]
    InvalidHyperparams { h: f64, gamma: f64, m: f64 },
    #[error("operation requires m > 0 (the Chebyshev form divides by sqrt(m)); use the recurrence form for m = 0")]
    ZeroMomentum,
    #[error("operation requires gamma > 0")]
    ZeroExtrapolation,
    #[error("robust region interval form requires the mixed mode (one real interval, one vertical segment)")]
    WrongMode,
}

/// Step size `h`, extrapolation step size `gamma`, momentum `m`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Hyperparams {
    pub h: f64,
    pub gamma: f64,
    pub m: f64,
}

impl Hyperparams {
    pub fn new(h: f64, gamma: f64, m: f64) -> Result<Self, PolyError> {
        let ok = h.is_finite()
            && gamma.is_finite()
            && m.is_finite()
            && h > 0.0
            && gamma >= 0.0
            && (0.0..1.0).contains(&m);
        if !ok {
            return Err(PolyError::InvalidHyperparams { h, gamma, m });
        }
        Ok(Hyperparams { h, gamma, m })
    }
}

/// Chebyshev polynomial of the first kind, `T_0 = 1`, `T_1 = z`,
/// `T_{t+1} = 2 z T_t - T_{t-1}`.
pub fn chebyshev_t(t: u32, z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    match t {
        0 => one,
        _ => {
            let mut prev = one;
            let mut cur = z;
            for _ in 1..t {
                let next = 2.0 * z * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// Chebyshev polynomial of the second kind, `U_0 = 1`, `U_1 = 2z`, same
/// recurrence as `T`.
pub fn chebyshev_u(t: u32, z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    match t {
        0 => one,
        _ => {
            let mut prev = one;
            let mut cur = 2.0 * z;
            for _ in 1..t {
                let next = 2.0 * z * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// Quadratic link function of the extragradient-with-momentum residual:
/// `sigma(lambda) = (1 + m - h*lambda*(1 - gamma*lambda)) / (2 sqrt(m))`.
pub fn link_sigma(p: &Hyperparams, lambda: Complex64) -> Result<Complex64, PolyError> {
    if p.m <= 0.0 {
        return Err(PolyError::ZeroMomentum);
    }
    let num = Complex64::new(1.0 + p.m, 0.0) - p.h * lambda * (Complex64::new(1.0, 0.0) - p.gamma * lambda);
    Ok(num / (2.0 * p.m.sqrt()))
}

/// Linear link function of the momentum-gradient residual:
/// `xi(lambda) = (1 + m - h*lambda) / (2 sqrt(m))`. Ignores `gamma`.
pub fn link_xi(p: &Hyperparams, lambda: Complex64) -> Result<Complex64, PolyError> {
    if p.m <= 0.0 {
        return Err(PolyError::ZeroMomentum);
    }
    let num = Complex64::new(1.0 + p.m, 0.0) - p.h * lambda;
    Ok(num / (2.0 * p.m.sqrt()))
}

/// Extragradient-with-momentum residual polynomial by its defining
/// three-term recurrence. Total in `m` (works for `m = 0`, where it
/// reduces to the plain extragradient or gradient polynomial).
pub fn residual_egm_recurrence(p: &Hyperparams, lambda: Complex64, t: u32) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let step = p.h * lambda * (one - p.gamma * lambda);
    match t {
        0 => one,
        _ => {
            let mut prev = one;
            let mut cur = one - step / (1.0 + p.m);
            let coeff = Complex64::new(1.0 + p.m, 0.0) - step;
            for _ in 1..t {
                let next = coeff * cur - p.m * prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

fn chebyshev_combination(m: f64, t: u32, z: Complex64) -> Complex64 {
    let tt = chebyshev_t(t, z);
    let uu = chebyshev_u(t, z);
    m.powf(t as f64 / 2.0) * ((2.0 * m / (1.0 + m)) * tt + ((1.0 - m) / (1.0 + m)) * uu)
}

/// Extragradient-with-momentum residual polynomial in Chebyshev form.
/// Requires `m > 0`; equals [`residual_egm_recurrence`] wherever both are
/// defined.
pub fn residual_egm_chebyshev(
    p: &Hyperparams,
    lambda: Complex64,
    t: u32,
) -> Result<Complex64, PolyError> {
    let z = link_sigma(p, lambda)?;
    Ok(chebyshev_combination(p.m, t, z))
}

/// Momentum-gradient residual polynomial in Chebyshev form (linear link,
/// `gamma` unused). Encodes a first step damped by `1/(1+m)`.
pub fn residual_gdm(p: &Hyperparams, lambda: Complex64, t: u32) -> Result<Complex64, PolyError> {
    let z = link_xi(p, lambda)?;
    Ok(chebyshev_combination(p.m, t, z))
}

/// The three placements of the link-function preimage `sigma^{-1}({-1, 1})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ModeCase {
    /// `h/(4 gamma) >= (1 + sqrt(m))^2`: all four extreme points real.
    AllReal,
    /// `(1 - sqrt(m))^2 <= h/(4 gamma) < (1 + sqrt(m))^2`: `sigma^{-1}(-1)`
    /// complex, `sigma^{-1}(1)` real.
    ComplexAndReal,
    /// `h/(4 gamma) < (1 - sqrt(m))^2`: all four extreme points complex.
    AllComplex,
}

/// Mode label together with the four extreme points, each reported as a
/// `+/-` pair around `1/(2 gamma)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeClass {
    pub case: ModeCase,
    /// The pair `sigma^{-1}(-1)`.
    pub sigma_inv_neg: [Complex64; 2],
    /// The pair `sigma^{-1}(1)`.
    pub sigma_inv_pos: [Complex64; 2],
}

fn extreme_pair(center: f64, discriminant: f64) -> [Complex64; 2] {
    if discriminant >= 0.0 {
        let s = discriminant.sqrt();
        [
            Complex64::new(center - s, 0.0),
            Complex64::new(center + s, 0.0),
        ]
    } else {
        let s = (-discriminant).sqrt();
        [Complex64::new(center, -s), Complex64::new(center, s)]
    }
}

/// Classifies the hyperparameters into one of the three modes and computes
/// the four extreme points
///
/// ```text
/// sigma^{-1}(-1) = 1/(2g) +- sqrt( 1/(4g^2) - (1 + sqrt(m))^2/(h g) )
/// sigma^{-1}( 1) = 1/(2g) +- sqrt( 1/(4g^2) - (1 - sqrt(m))^2/(h g) )
/// ```
///
/// with principal complex square roots when a discriminant is negative.
/// Boundary ties: equality at `h/(4g) = (1 + sqrt(m))^2` is `AllReal`, and
/// equality at `h/(4g) = (1 - sqrt(m))^2` is `ComplexAndReal`.
pub fn classify_mode(p: &Hyperparams) -> Result<ModeClass, PolyError> {
    if p.gamma <= 0.0 {
        return Err(PolyError::ZeroExtrapolation);
    }
    let sqrt_m = p.m.sqrt();
    let q = p.h / (4.0 * p.gamma);
    let case = if q >= (1.0 + sqrt_m) * (1.0 + sqrt_m) {
        ModeCase::AllReal
    } else if q >= (1.0 - sqrt_m) * (1.0 - sqrt_m) {
        ModeCase::ComplexAndReal
    } else {
        ModeCase::AllComplex
    };
    let center = 1.0 / (2.0 * p.gamma);
    let center_sq = 1.0 / (4.0 * p.gamma * p.gamma);
    let disc_neg = center_sq - (1.0 + sqrt_m) * (1.0 + sqrt_m) / (p.h * p.gamma);
    let disc_pos = center_sq - (1.0 - sqrt_m) * (1.0 - sqrt_m) / (p.h * p.gamma);
    Ok(ModeClass {
        case,
        sigma_inv_neg: extreme_pair(center, disc_neg),
        sigma_inv_pos: extreme_pair(center, disc_pos),
    })
}

/// Robust region in the mixed mode: the real interval spanned by
/// `sigma^{-1}(1)` plus the vertical segment through `1/(2 gamma)` reaching
/// up to the imaginary part of `sigma^{-1}(-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RobustRegion {
    pub real_lo: f64,
    pub real_hi: f64,
    pub segment_re: f64,
    pub segment_half_len: f64,
}

/// Computes the robust region `sigma^{-1}([-1, 1])` in the mixed
/// (complex-and-real) mode. Rejects hyperparameters in the other modes.
pub fn robust_region_case2(p: &Hyperparams) -> Result<RobustRegion, PolyError> {
    let mode = classify_mode(p)?;
    if mode.case != ModeCase::ComplexAndReal {
        return Err(PolyError::WrongMode);
    }
    let sqrt_m = p.m.sqrt();
    let center = 1.0 / (2.0 * p.gamma);
    let center_sq = 1.0 / (4.0 * p.gamma * p.gamma);
    let spread = (center_sq - (1.0 - sqrt_m) * (1.0 - sqrt_m) / (p.h * p.gamma)).sqrt();
    let half_len = ((1.0 + sqrt_m) * (1.0 + sqrt_m) / (p.h * p.gamma) - center_sq).sqrt();
    Ok(RobustRegion {
        real_lo: center - spread,
        real_hi: center + spread,
        segment_re: center,
        segment_half_len: half_len,
    })
}

/// Worst-case contraction of the residual after `t` iterations inside the
/// robust region: `m^(t/2) * (t + 2)`.
pub fn worst_case_rate_bound(m: f64, t: u32) -> f64 {
    debug_assert!((0.0..1.0).contains(&m));
    m.powf(t as f64 / 2.0) * (t as f64 + 2.0)
}

/// Asymptotic contraction factor per vector-field evaluation: `m^(1/4)`
/// (each iteration costs two evaluations).
pub fn asymptotic_rate(m: f64) -> f64 {
    debug_assert!((0.0..1.0).contains(&m));
    m.powf(0.25)
}
