//! The end-to-end benchmark: build the reference game, run every method at
//! its tuned or grid-searched parameters for 2000 iterations from the
//! origin, and emit one combined CSV plus one SVG.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::game::{build_cross_game, verify_game, GameError, QuadraticGame};
use crate::gamefile::GameFileError;
use crate::methods::{run_eg, run_egm, run_gd, run_gdm, RunError, RunTrace};
use crate::respoly::Hyperparams;
use crate::spectrum::{SpectrumError, SpectrumModel};
use crate::svg::{render_convergence_svg, PlotSeries};
use crate::trace::{csv_string, LabeledTrace};
use crate::tuning::{
    eg_default_grid, eg_theory_step, gd_default_grid, gd_theory_step, gdm_default_grid,
    grid_search, optimal_egm, GridSpec, TuneError,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    GameFile(#[from] GameFileError),
    #[error(transparent)]
    Tune(#[from] TuneError),
    #[error(transparent)]
    Run(#[from] RunError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("game failed verification: {0}")]
    VerificationFailed(String),
}

/// One series of the benchmark: a method plus how its parameters are
/// chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    EgmOptimal,
    GdTheory,
    EgTheory,
    GdGrid,
    EgGrid,
    GdmGrid,
}

impl SeriesKind {
    pub fn label(&self) -> &'static str {
        match self {
            SeriesKind::EgmOptimal => "egm_optimal",
            SeriesKind::GdTheory => "gd_theory",
            SeriesKind::EgTheory => "eg_theory",
            SeriesKind::GdGrid => "gd_grid",
            SeriesKind::EgGrid => "eg_grid",
            SeriesKind::GdmGrid => "gdm_grid",
        }
    }

    pub fn all() -> Vec<SeriesKind> {
        vec![
            SeriesKind::EgmOptimal,
            SeriesKind::GdTheory,
            SeriesKind::EgTheory,
            SeriesKind::GdGrid,
            SeriesKind::EgGrid,
            SeriesKind::GdmGrid,
        ]
    }
}

/// Benchmark configuration. The default reproduces the reference setup:
/// `mu = 1`, `L = 200`, equal-length cross (`c = 99.5`, `c' = 100.5`),
/// dimension 200 split into 100 real eigenvalues and 50 conjugate pairs,
/// seed 0, 2000 iterations from the origin, all six series, reference
/// grids.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub mu: f64,
    pub l: f64,
    pub c: f64,
    pub c_prime: f64,
    pub n_real: usize,
    pub n_pairs: usize,
    pub iters: usize,
    pub seed: u64,
    pub b_zero: bool,
    pub series: Vec<SeriesKind>,
    pub gd_grid: GridSpec,
    pub eg_grid: GridSpec,
    pub gdm_grid: GridSpec,
    pub outdir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            mu: 1.0,
            l: 200.0,
            c: 99.5,
            c_prime: 100.5,
            n_real: 100,
            n_pairs: 50,
            iters: 2000,
            seed: 0,
            b_zero: false,
            series: SeriesKind::all(),
            gd_grid: gd_default_grid(),
            eg_grid: eg_default_grid(),
            gdm_grid: gdm_default_grid(),
            outdir: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    pub fn model(&self) -> Result<SpectrumModel, SpectrumError> {
        SpectrumModel::new(self.mu, self.l, self.c, self.c_prime)
    }
}

/// Chosen parameters for one series, recorded for the summary output.
#[derive(Clone, Debug, Serialize)]
pub struct SeriesSummary {
    pub label: String,
    pub params: Hyperparams,
    pub final_distance: f64,
    pub final_relative: f64,
    pub diverged: bool,
}

pub struct Fig4Outcome {
    pub game: QuadraticGame,
    pub series: Vec<(String, RunTrace)>,
    pub summaries: Vec<SeriesSummary>,
    pub csv_path: PathBuf,
    pub svg_path: PathBuf,
}

/// Builds the configured game (aborting if verification fails), runs all
/// six series, and writes `fig4.csv` and `fig4.svg` into the output
/// directory.
///
/// Series, in output order:
/// `egm_optimal` (closed-form parameters), `gd_theory`, `eg_theory`
/// (theory step sizes from the declared spectrum), `gd_grid`, `eg_grid`,
/// `gdm_grid` (grid-searched step sizes, reference grids).
pub fn reproduce_fig4(cfg: &ExperimentConfig) -> Result<Fig4Outcome, HarnessError> {
    let model = cfg.model()?;
    let game = build_cross_game(&model, cfg.n_real, cfg.n_pairs, cfg.seed, cfg.b_zero)?;
    let report = verify_game(&game);
    if !report.all_ok() {
        return Err(HarnessError::VerificationFailed(format!("{report:?}")));
    }

    let w0 = vec![0.0; game.dim()];
    let mut series: Vec<(String, RunTrace)> = Vec::with_capacity(cfg.series.len());
    for kind in &cfg.series {
        let trace = match kind {
            SeriesKind::EgmOptimal => {
                let params = optimal_egm(model.mu, model.l, model.c)?;
                run_egm(&game, &params, &w0, cfg.iters)?
            }
            SeriesKind::GdTheory => {
                run_gd(&game, gd_theory_step(&game.declared)?, &w0, cfg.iters)?
            }
            SeriesKind::EgTheory => {
                run_eg(&game, eg_theory_step(&game.declared)?, &w0, cfg.iters)?
            }
            SeriesKind::GdGrid => {
                let best = grid_search(&game, crate::methods::Method::Gd, &cfg.gd_grid, cfg.iters)?;
                run_gd(&game, best.best.h, &w0, cfg.iters)?
            }
            SeriesKind::EgGrid => {
                let best = grid_search(&game, crate::methods::Method::Eg, &cfg.eg_grid, cfg.iters)?;
                run_eg(&game, best.best.h, &w0, cfg.iters)?
            }
            SeriesKind::GdmGrid => {
                let best =
                    grid_search(&game, crate::methods::Method::Gdm, &cfg.gdm_grid, cfg.iters)?;
                run_gdm(&game, best.best.h, best.best.m, &w0, cfg.iters)?
            }
        };
        series.push((kind.label().to_string(), trace));
    }

    fs::create_dir_all(&cfg.outdir)?;
    let csv_path = cfg.outdir.join("fig4.csv");
    let labeled: Vec<LabeledTrace<'_>> = series
        .iter()
        .map(|(label, trace)| LabeledTrace {
            label: label.clone(),
            trace,
        })
        .collect();
    fs::write(&csv_path, csv_string(&labeled))?;

    let svg_path = cfg.outdir.join("fig4.svg");
    let plot: Vec<PlotSeries> = series
        .iter()
        .map(|(label, trace)| PlotSeries {
            label: label.clone(),
            values: trace.relative(),
        })
        .collect();
    fs::write(
        &svg_path,
        render_convergence_svg("first-order methods on a cross-spectrum game", &plot),
    )?;

    let summaries = series
        .iter()
        .map(|(label, trace)| {
            let d0 = trace.initial_distance();
            SeriesSummary {
                label: label.clone(),
                params: trace.params,
                final_distance: trace.final_distance(),
                final_relative: if d0 > 0.0 {
                    trace.final_distance() / d0
                } else {
                    0.0
                },
                diverged: trace.diverged,
            }
        })
        .collect();

    Ok(Fig4Outcome {
        game,
        series,
        summaries,
        csv_path,
        svg_path,
    })
}

/// Writes a game file produced by the configured generator, verifying the
/// construction first. Returns the path written.
pub fn generate_game_file(cfg: &ExperimentConfig, path: &Path) -> Result<(), HarnessError> {
    let model = cfg.model()?;
    let game = build_cross_game(&model, cfg.n_real, cfg.n_pairs, cfg.seed, cfg.b_zero)?;
    let report = verify_game(&game);
    if !report.all_ok() {
        return Err(HarnessError::VerificationFailed(format!("{report:?}")));
    }
    crate::gamefile::write_game_file(path, &game)?;
    Ok(())
}
