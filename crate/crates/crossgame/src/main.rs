//! Command-line front door.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when a built
//! game fails verification or an entire grid diverges.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;

use crossgame::experiment::{generate_game_file, reproduce_fig4, ExperimentConfig, HarnessError};
use crossgame::gamefile::read_game_file;
use crossgame::methods::{run_eg, run_egm, run_gd, run_gdm, Method, RunTrace};
use crossgame::respoly::{
    classify_mode, link_sigma, link_xi, residual_egm_chebyshev, residual_egm_recurrence,
    residual_gdm, robust_region_case2, ModeCase,
};
use crossgame::spectrum::{Spectrum, SpectrumModel};
use crossgame::trace::{csv_string, LabeledTrace};
use crossgame::respoly::asymptotic_rate;
use crossgame::tuning::{
    eg_default_grid, eg_rate_bound, eg_theory_step, egm_rate_expansion, gd_default_grid,
    gd_theory_step, gdm_acceleration_threshold, gdm_default_grid, grid_search, optimal_egm,
    GridRange, GridSpec, TuneError,
};
use crossgame::Hyperparams;

#[derive(Parser)]
#[command(
    name = "crossgame",
    version,
    about = "Cross-spectrum quadratic games: generate, tune, run, and plot first-order methods"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print tuned parameters, rates, and theory step sizes as JSON
    Tune(TuneArgs),
    /// Build a game with a prescribed spectrum and write it as JSON
    Generate(GenerateArgs),
    /// Run one method on a game file and write a trace CSV
    Run(RunArgs),
    /// Exhaustive grid search for a method on a game file
    Grid(GridArgs),
    /// Classify hyperparameters into the three link-preimage modes
    Modes(ModesArgs),
    /// Evaluate residual polynomials at one eigenvalue
    Respoly(RespolyArgs),
    /// Full benchmark: six runs, combined CSV, SVG plot
    ReproduceFig4(Fig4Args),
}

#[derive(Args)]
struct TuneArgs {
    #[arg(long)]
    mu: f64,
    #[arg(long = "L")]
    l: f64,
    #[arg(long)]
    c: f64,
    /// Real part of the vertical segment; defaults to (mu + L) / 2
    #[arg(long = "c-prime")]
    c_prime: Option<f64>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    #[arg(long = "L", default_value_t = 200.0)]
    l: f64,
    /// Half-length of the vertical segment; defaults to (L - mu) / 2
    #[arg(long)]
    c: Option<f64>,
    /// Real part of the vertical segment; defaults to (mu + L) / 2
    #[arg(long = "c-prime")]
    c_prime: Option<f64>,
    #[arg(long = "n-real", default_value_t = 100)]
    n_real: usize,
    #[arg(long = "n-pairs", default_value_t = 50)]
    n_pairs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Force b = 0 and w_star = 0 instead of a random stationary point
    #[arg(long = "b-zero")]
    b_zero: bool,
    #[arg(long, default_value = "game.json")]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long)]
    method: Method,
    /// Step size; defaults to the method's tuned/theory value where one exists
    #[arg(long)]
    h: Option<f64>,
    /// Extrapolation step size (egm only)
    #[arg(long)]
    gamma: Option<f64>,
    /// Momentum (gdm/egm)
    #[arg(long)]
    m: Option<f64>,
    #[arg(long, default_value_t = 2000)]
    iters: usize,
    /// Trace CSV destination; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long)]
    game: PathBuf,
    #[arg(long)]
    method: Method,
    #[arg(long, default_value_t = 2000)]
    iters: usize,
    #[arg(long = "h-lo")]
    h_lo: Option<f64>,
    #[arg(long = "h-hi")]
    h_hi: Option<f64>,
    #[arg(long = "h-step")]
    h_step: Option<f64>,
    #[arg(long = "m-lo")]
    m_lo: Option<f64>,
    #[arg(long = "m-hi")]
    m_hi: Option<f64>,
    #[arg(long = "m-step")]
    m_step: Option<f64>,
}

#[derive(Args)]
struct ModesArgs {
    #[arg(long)]
    h: f64,
    #[arg(long)]
    gamma: f64,
    #[arg(long)]
    m: f64,
}

#[derive(Args)]
struct RespolyArgs {
    #[arg(long)]
    h: f64,
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    #[arg(long)]
    m: f64,
    #[arg(long)]
    t: u32,
    #[arg(long = "lambda-re")]
    lambda_re: f64,
    #[arg(long = "lambda-im", default_value_t = 0.0)]
    lambda_im: f64,
    /// egm (quadratic link) or gdm (linear link)
    #[arg(long, default_value = "egm")]
    method: String,
}

#[derive(Args)]
struct Fig4Args {
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2000)]
    iters: usize,
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    #[arg(long = "L", default_value_t = 200.0)]
    l: f64,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long = "c-prime")]
    c_prime: Option<f64>,
    #[arg(long = "n-real", default_value_t = 100)]
    n_real: usize,
    #[arg(long = "n-pairs", default_value_t = 50)]
    n_pairs: usize,
    /// Force b = 0 and w_star = 0
    #[arg(long = "b-zero")]
    b_zero: bool,
}

/// Error carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn fatal(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match &e {
            HarnessError::VerificationFailed(_) => Failure::fatal(e.to_string()),
            HarnessError::Tune(TuneError::AllCandidatesDiverged) => Failure::fatal(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<TuneError> for Failure {
    fn from(e: TuneError) -> Self {
        match e {
            TuneError::AllCandidatesDiverged => Failure::fatal(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

fn complex_json(z: Complex64) -> serde_json::Value {
    json!({"re": z.re, "im": z.im})
}

/// The finite set where every extremal statistic of the cross is attained:
/// the real endpoints, the segment's real part (its closest point to the
/// origin), and the segment tips.
fn extreme_point_spectrum(model: &SpectrumModel) -> Result<Spectrum, Failure> {
    let mut evs = vec![Complex64::new(model.mu, 0.0)];
    if model.l != model.mu {
        evs.push(Complex64::new(model.l, 0.0));
    }
    evs.push(Complex64::new(model.c_prime, 0.0));
    if model.c > 0.0 {
        evs.push(Complex64::new(model.c_prime, model.c));
        evs.push(Complex64::new(model.c_prime, -model.c));
    }
    Spectrum::new(evs).map_err(|e| Failure::usage(e.to_string()))
}

fn cmd_tune(args: &TuneArgs) -> Result<(), Failure> {
    let c_prime = args.c_prime.unwrap_or((args.mu + args.l) / 2.0);
    let model = SpectrumModel::new(args.mu, args.l, args.c, c_prime)
        .map_err(|e| Failure::usage(e.to_string()))?;
    let params = optimal_egm(model.mu, model.l, model.c)?;
    let rate = asymptotic_rate(params.m);
    let expansion = egm_rate_expansion(model.mu, model.l, model.c)?;
    let spectrum = extreme_point_spectrum(&model)?;
    let gd_step = gd_theory_step(&spectrum)?;
    let gd_bound = crossgame::tuning::gd_rate_bound(&spectrum)?;
    let eg_step = eg_theory_step(&spectrum)?;
    let eg_bounds = eg_rate_bound(&spectrum)?;
    let cannot_accelerate = gdm_acceleration_threshold(model.mu, model.l)?;

    let out = json!({
        "mu": model.mu,
        "L": model.l,
        "c": model.c,
        "c_prime": model.c_prime,
        "hyperparams": params,
        "asymptotic_rate_per_eval": rate,
        "expansion": expansion,
        "gd": {"theory_step": gd_step, "bound": gd_bound},
        "eg": {"theory_step": eg_step, "bounds": eg_bounds},
        "gdm": {"cannot_accelerate": cannot_accelerate, "condition_number": model.l / model.mu},
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
    Ok(())
}

fn cmd_generate(args: &GenerateArgs) -> Result<(), Failure> {
    let cfg = ExperimentConfig {
        mu: args.mu,
        l: args.l,
        c: args.c.unwrap_or((args.l - args.mu) / 2.0),
        c_prime: args.c_prime.unwrap_or((args.mu + args.l) / 2.0),
        n_real: args.n_real,
        n_pairs: args.n_pairs,
        iters: 1,
        seed: args.seed,
        b_zero: args.b_zero,
        outdir: PathBuf::new(),
        ..ExperimentConfig::default()
    };
    generate_game_file(&cfg, &args.out)?;
    eprintln!("wrote {}", args.out.display());
    Ok(())
}

fn default_run_params(
    game_model: &SpectrumModel,
    declared: &Spectrum,
    method: Method,
    args: &RunArgs,
) -> Result<Hyperparams, Failure> {
    match method {
        Method::Gd => {
            let h = match args.h {
                Some(h) => h,
                None => gd_theory_step(declared)?,
            };
            Ok(Hyperparams { h, gamma: 0.0, m: 0.0 })
        }
        Method::Eg => {
            let h = match args.h {
                Some(h) => h,
                None => eg_theory_step(declared)?,
            };
            Ok(Hyperparams { h, gamma: h, m: 0.0 })
        }
        Method::Gdm => match (args.h, args.m) {
            (Some(h), Some(m)) => Ok(Hyperparams { h, gamma: 0.0, m }),
            _ => Err(Failure::usage(
                "gdm has no closed-form tuning; pass --h and --m (or use the grid subcommand)",
            )),
        },
        Method::Egm => {
            let tuned = optimal_egm(game_model.mu, game_model.l, game_model.c)?;
            Ok(Hyperparams {
                h: args.h.unwrap_or(tuned.h),
                gamma: args.gamma.unwrap_or(tuned.gamma),
                m: args.m.unwrap_or(tuned.m),
            })
        }
    }
}

fn cmd_run(args: &RunArgs) -> Result<(), Failure> {
    let game = read_game_file(&args.game).map_err(|e| Failure::usage(e.to_string()))?;
    let params = default_run_params(&game.model, &game.declared, args.method, args)?;
    let w0 = vec![0.0; game.dim()];
    let trace: RunTrace = match args.method {
        Method::Gd => run_gd(&game, params.h, &w0, args.iters),
        Method::Gdm => run_gdm(&game, params.h, params.m, &w0, args.iters),
        Method::Eg => run_eg(&game, params.h, &w0, args.iters),
        Method::Egm => run_egm(&game, &params, &w0, args.iters),
    }
    .map_err(|e| Failure::usage(e.to_string()))?;

    if trace.diverged {
        eprintln!("run diverged after {} iterations; partial trace kept", trace.distances.len() - 1);
    }
    let csv = csv_string(&[LabeledTrace {
        label: args.method.name().to_string(),
        trace: &trace,
    }]);
    match &args.out {
        Some(path) => {
            std::fs::write(path, csv).map_err(|e| Failure::usage(e.to_string()))?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn cmd_grid(args: &GridArgs) -> Result<(), Failure> {
    let game = read_game_file(&args.game).map_err(|e| Failure::usage(e.to_string()))?;
    let default = match args.method {
        Method::Gd => gd_default_grid(),
        Method::Gdm => gdm_default_grid(),
        Method::Eg => eg_default_grid(),
        Method::Egm => {
            return Err(Failure::usage(
                "egm is tuned in closed form; grid search applies to gd, gdm, and eg",
            ))
        }
    };
    let h = match (args.h_lo, args.h_hi, args.h_step) {
        (Some(lo), Some(hi), Some(step)) => GridRange::new(lo, hi, step)?,
        (None, None, None) => default.h,
        _ => return Err(Failure::usage("pass all of --h-lo --h-hi --h-step or none")),
    };
    let m = match (args.m_lo, args.m_hi, args.m_step) {
        (Some(lo), Some(hi), Some(step)) => Some(GridRange::new(lo, hi, step)?),
        (None, None, None) => default.m,
        _ => return Err(Failure::usage("pass all of --m-lo --m-hi --m-step or none")),
    };
    let outcome = grid_search(&game, args.method, &GridSpec { h, m }, args.iters)?;
    let out = json!({
        "method": args.method,
        "best": outcome.best,
        "final_distance": outcome.final_distance,
        "candidates": outcome.candidates,
        "diverged": outcome.diverged,
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
    Ok(())
}

fn cmd_modes(args: &ModesArgs) -> Result<(), Failure> {
    let p = Hyperparams::new(args.h, args.gamma, args.m).map_err(|e| Failure::usage(e.to_string()))?;
    let mode = classify_mode(&p).map_err(|e| Failure::usage(e.to_string()))?;
    let region = match mode.case {
        ModeCase::ComplexAndReal => {
            let r = robust_region_case2(&p).map_err(|e| Failure::usage(e.to_string()))?;
            Some(r)
        }
        _ => None,
    };
    let out = json!({
        "hyperparams": p,
        "case": mode.case,
        "case_index": match mode.case {
            ModeCase::AllReal => 1,
            ModeCase::ComplexAndReal => 2,
            ModeCase::AllComplex => 3,
        },
        "sigma_inv_minus_one": mode.sigma_inv_neg.map(complex_json),
        "sigma_inv_plus_one": mode.sigma_inv_pos.map(complex_json),
        "robust_region": region,
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
    Ok(())
}

fn cmd_respoly(args: &RespolyArgs) -> Result<(), Failure> {
    let p = Hyperparams::new(args.h, args.gamma, args.m).map_err(|e| Failure::usage(e.to_string()))?;
    let lambda = Complex64::new(args.lambda_re, args.lambda_im);
    let out = match args.method.as_str() {
        "egm" => {
            let rec = residual_egm_recurrence(&p, lambda, args.t);
            let cheb = (p.m > 0.0).then(|| residual_egm_chebyshev(&p, lambda, args.t).expect("m > 0"));
            let link = (p.m > 0.0).then(|| link_sigma(&p, lambda).expect("m > 0"));
            json!({
                "method": "egm",
                "hyperparams": p,
                "lambda": complex_json(lambda),
                "t": args.t,
                "recurrence": complex_json(rec),
                "chebyshev": cheb.map(complex_json),
                "link_sigma": link.map(complex_json),
            })
        }
        "gdm" => {
            // the linear-link recurrence is the quadratic one at gamma = 0
            let rec_params = Hyperparams { h: p.h, gamma: 0.0, m: p.m };
            let rec = residual_egm_recurrence(&rec_params, lambda, args.t);
            let cheb = (p.m > 0.0).then(|| residual_gdm(&p, lambda, args.t).expect("m > 0"));
            let link = (p.m > 0.0).then(|| link_xi(&p, lambda).expect("m > 0"));
            json!({
                "method": "gdm",
                "hyperparams": p,
                "lambda": complex_json(lambda),
                "t": args.t,
                "recurrence": complex_json(rec),
                "chebyshev": cheb.map(complex_json),
                "link_xi": link.map(complex_json),
            })
        }
        other => return Err(Failure::usage(format!("unknown method '{other}' (expected egm|gdm)"))),
    };
    println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
    Ok(())
}

fn cmd_fig4(args: &Fig4Args) -> Result<(), Failure> {
    let cfg = ExperimentConfig {
        mu: args.mu,
        l: args.l,
        c: args.c.unwrap_or((args.l - args.mu) / 2.0),
        c_prime: args.c_prime.unwrap_or((args.mu + args.l) / 2.0),
        n_real: args.n_real,
        n_pairs: args.n_pairs,
        iters: args.iters,
        seed: args.seed,
        b_zero: args.b_zero,
        outdir: args.out.clone(),
        ..ExperimentConfig::default()
    };
    let outcome = reproduce_fig4(&cfg)?;
    let out = json!({
        "csv": outcome.csv_path,
        "svg": outcome.svg_path,
        "series": outcome.summaries,
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
    Ok(())
}

fn dispatch(cmd: &Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Tune(args) => cmd_tune(args),
        Cmd::Generate(args) => cmd_generate(args),
        Cmd::Run(args) => cmd_run(args),
        Cmd::Grid(args) => cmd_grid(args),
        Cmd::Modes(args) => cmd_modes(args),
        Cmd::Respoly(args) => cmd_respoly(args),
        Cmd::ReproduceFig4(args) => cmd_fig4(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
