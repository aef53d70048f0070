//! Quadratic games with a prescribed cross-shaped Jacobian spectrum, the
//! first-order methods that solve them, and the Chebyshev
//! residual-polynomial machinery that predicts how fast.
//!
//! The spectrum model is a real segment `[mu, L]` union a vertical segment
//! `{c' + bi : |b| <= c}` in the right half plane. The crate can
//!
//! - synthesize dense two-player quadratic games whose Jacobian has exactly
//!   that spectrum, and verify the construction ([`game`]);
//! - evaluate the residual polynomials of the gradient, momentum-gradient,
//!   extragradient, and momentum-extragradient methods, classify the
//!   hyperparameter modes, and compute robust regions and worst-case rates
//!   ([`respoly`]);
//! - derive closed-form optimal momentum-extragradient parameters, theory
//!   step sizes and rate bounds for the baselines, and run exhaustive grid
//!   searches ([`tuning`]);
//! - run the four methods with exact iterate tracing and
//!   vector-field-evaluation accounting ([`methods`]);
//! - drive the whole benchmark and emit game files, trace CSVs, and SVG
//!   plots ([`experiment`], [`gamefile`], [`trace`], [`svg`]).
//!
//! The `crossgame` binary exposes all of it on the command line.

pub mod experiment;
pub mod game;
pub mod gamefile;
pub mod linalg;
pub mod methods;
pub mod respoly;
pub mod rng;
pub mod spectrum;
pub mod svg;
pub mod trace;
pub mod tuning;

pub use num_complex::Complex64;

pub use game::{build_cross_game, verify_game, BlockSpec, QuadraticGame};
pub use methods::{fit_rate, run_eg, run_egm, run_gd, run_gdm, Method, RunTrace};
pub use respoly::{
    asymptotic_rate, chebyshev_t, chebyshev_u, classify_mode, link_sigma, link_xi,
    residual_egm_chebyshev, residual_egm_recurrence, residual_gdm, robust_region_case2,
    worst_case_rate_bound, Hyperparams, ModeCase, ModeClass,
};
pub use spectrum::{sample_cross, Spectrum, SpectrumModel};
pub use tuning::{
    eg_rate_bound, eg_theory_step, egm_rate_expansion, gd_rate_bound, gd_theory_step,
    gdm_acceleration_threshold, gdm_rate_bound, grid_search, optimal_egm,
    optimal_egm_equal_length, GridRange, GridSpec,
};
