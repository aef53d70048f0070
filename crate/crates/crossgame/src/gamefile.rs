//! Game file I/O.
//!
//! A game is stored as a single JSON object with keys `dim, d1, d2, mu, L,
//! c, c_prime, seed, A, b, w_star, eigenvalues`, where `A` is a row-major
//! array of arrays and `eigenvalues` an array of `{re, im}` objects. Every
//! number is written with 17 significant digits, which round-trips any
//! `f64` value-exactly; the writer is deterministic, so equal games produce
//! byte-identical files.
//!
//! A game file does not carry the construction certificate (basis and
//! blocks). Because building is a pure function of `(model, counts, seed)`,
//! the reader regenerates the game from the stored header and then checks
//! the stored arrays against the regenerated ones value-for-value. A file
//! that was edited by hand, or produced by a different generator, is
//! rejected rather than silently trusted.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::game::{build_cross_game, GameError, QuadraticGame};
use crate::spectrum::{SpectrumError, SpectrumModel};

#[derive(Debug, Error)]
pub enum GameFileError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("malformed game file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("inconsistent game file: {0}")]
    Inconsistent(String),
}

/// `{:.16e}` prints 1 + 16 = 17 significant digits, enough to identify
/// every finite f64 uniquely.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_f64_array(out: &mut String, values: &[f64]) {
    out.push('[');
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&fmt_f64(*v));
    }
    out.push(']');
}

/// Serializes a game to the schema above.
pub fn game_to_json(game: &QuadraticGame) -> String {
    let d = game.dim();
    let mut out = String::with_capacity(32 * d * d);
    out.push_str("{\n");
    out.push_str(&format!("  \"dim\": {},\n", d));
    out.push_str(&format!("  \"d1\": {},\n", game.d1));
    out.push_str(&format!("  \"d2\": {},\n", game.d2));
    out.push_str(&format!("  \"mu\": {},\n", fmt_f64(game.model.mu)));
    out.push_str(&format!("  \"L\": {},\n", fmt_f64(game.model.l)));
    out.push_str(&format!("  \"c\": {},\n", fmt_f64(game.model.c)));
    out.push_str(&format!("  \"c_prime\": {},\n", fmt_f64(game.model.c_prime)));
    out.push_str(&format!("  \"seed\": {},\n", game.seed));
    out.push_str("  \"A\": [\n");
    for i in 0..d {
        out.push_str("    ");
        write_f64_array(&mut out, game.a.row(i));
        out.push_str(if i + 1 < d { ",\n" } else { "\n" });
    }
    out.push_str("  ],\n");
    out.push_str("  \"b\": ");
    write_f64_array(&mut out, &game.b);
    out.push_str(",\n  \"w_star\": ");
    write_f64_array(&mut out, &game.w_star);
    out.push_str(",\n  \"eigenvalues\": [\n");
    let evs = game.declared.eigenvalues();
    for (i, ev) in evs.iter().enumerate() {
        out.push_str(&format!(
            "    {{\"re\": {}, \"im\": {}}}{}",
            fmt_f64(ev.re),
            fmt_f64(ev.im),
            if i + 1 < evs.len() { ",\n" } else { "\n" }
        ));
    }
    out.push_str("  ]\n}\n");
    out
}

pub fn write_game_file(path: &Path, game: &QuadraticGame) -> Result<(), GameFileError> {
    let mut file = fs::File::create(path)?;
    file.write_all(game_to_json(game).as_bytes())?;
    Ok(())
}

#[derive(Deserialize)]
struct RawEigen {
    re: f64,
    im: f64,
}

#[derive(Deserialize)]
struct RawGameFile {
    dim: usize,
    d1: usize,
    d2: usize,
    mu: f64,
    #[serde(rename = "L")]
    l: f64,
    c: f64,
    c_prime: f64,
    seed: u64,
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    w_star: Vec<f64>,
    eigenvalues: Vec<RawEigen>,
}

/// Parses a game file and revalidates it against deterministic
/// regeneration from its own header.
pub fn game_from_json(text: &str) -> Result<QuadraticGame, GameFileError> {
    let raw: RawGameFile = serde_json::from_str(text)?;
    let model = SpectrumModel::new(raw.mu, raw.l, raw.c, raw.c_prime)?;
    if raw.d1 + raw.d2 != raw.dim || raw.d2 > raw.d1 {
        return Err(GameFileError::Inconsistent(format!(
            "dimension split d1={} + d2={} does not form dim={}",
            raw.d1, raw.d2, raw.dim
        )));
    }
    let n_pairs = raw.d2;
    let n_real = raw.d1 - raw.d2;
    let b_zero =
        raw.b.iter().all(|&x| x == 0.0) && raw.w_star.iter().all(|&x| x == 0.0);
    let game = build_cross_game(&model, n_real, n_pairs, raw.seed, b_zero)?;

    if raw.a.len() != raw.dim || raw.a.iter().any(|row| row.len() != raw.dim) {
        return Err(GameFileError::Inconsistent("A is not dim x dim".into()));
    }
    for i in 0..raw.dim {
        for j in 0..raw.dim {
            if raw.a[i][j] != game.a.get(i, j) {
                return Err(GameFileError::Inconsistent(format!(
                    "A[{i}][{j}] = {} does not match regeneration from seed {} ({})",
                    raw.a[i][j],
                    raw.seed,
                    game.a.get(i, j)
                )));
            }
        }
    }
    if raw.b != game.b {
        return Err(GameFileError::Inconsistent(
            "b does not match regeneration from seed".into(),
        ));
    }
    if raw.w_star != game.w_star {
        return Err(GameFileError::Inconsistent(
            "w_star does not match regeneration from seed".into(),
        ));
    }
    let declared = game.declared.eigenvalues();
    if raw.eigenvalues.len() != declared.len()
        || raw
            .eigenvalues
            .iter()
            .zip(declared)
            .any(|(r, d)| r.re != d.re || r.im != d.im)
    {
        return Err(GameFileError::Inconsistent(
            "eigenvalues do not match regeneration from seed".into(),
        ));
    }
    Ok(game)
}

pub fn read_game_file(path: &Path) -> Result<QuadraticGame, GameFileError> {
    let text = fs::read_to_string(path)?;
    game_from_json(&text)
}
