//! Browser bindings for the invariant generator. Every export takes and
//! returns plain strings; results are JSON, errors are messages.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use wasm_bindgen::prelude::*;

use polyinv::cli::{generate, render_json, RunOptions};
use polyinv::divisibility::{random_line, to_univariate, DEFAULT_W};
use polyinv::frontend::parse_polynomial;
use polyinv::polyring::{parse_rational, Polynomial, Rational, Ring, TermOrder};
use polyinv::vanishing::{buchberger_moeller, PointSet};

fn ring_from(vars: &str) -> Result<Arc<Ring>, String> {
    let names: Vec<&str> = vars.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if names.is_empty() {
        return Err("no variables given".into());
    }
    Ok(Ring::new(names))
}

/// Invariants of a loop program, as the CLI's JSON report.
#[wasm_bindgen]
pub fn generate_invariants(source: &str, degree: u32, seed: u64) -> Result<String, String> {
    let opts = RunOptions { seed, ..RunOptions::new(degree) };
    generate(source, &opts).map(|o| render_json(&o.report)).map_err(|e| e.to_string())
}

/// Reduced grlex basis and normal set of the ideal of points given one per
/// line, coordinates separated by commas or spaces.
#[wasm_bindgen]
pub fn vanishing_ideal(vars: &str, points: &str) -> Result<String, String> {
    let ring = ring_from(vars)?;
    let mut pts = Vec::new();
    for (i, line) in points.lines().map(str::trim).enumerate().filter(|(_, l)| !l.is_empty()) {
        let coords: Option<Vec<_>> =
            line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).map(parse_rational).collect();
        pts.push(coords.ok_or_else(|| format!("line {}: bad coordinate", i + 1))?);
    }
    let set = PointSet::new(&ring, pts).map_err(|e| e.to_string())?;
    let gb = buchberger_moeller(&set, TermOrder::GradedLex).map_err(|e| e.to_string())?;
    let one = Rational::from_integer(1.into());
    Ok(json!({
        "points": set.len(),
        "basis": gb.basis.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "normal_set": gb.normal_set.iter().map(|m| Polynomial::term(&ring, m.clone(), one.clone()).to_string()).collect::<Vec<_>>(),
        "min_degree": gb.min_degree,
    })
    .to_string())
}

/// Does `f` divide `g`? Runs the random-line filter and exact division.
#[wasm_bindgen]
pub fn check_divisibility(vars: &str, f: &str, g: &str, seed: u64) -> Result<String, String> {
    let ring = ring_from(vars)?;
    let f = parse_polynomial(f, &ring).map_err(|e| format!("f: {e}"))?;
    let g = parse_polynomial(g, &ring).map_err(|e| format!("g: {e}"))?;
    if f.is_zero() {
        return Err("f is the zero polynomial".into());
    }
    let t = random_line(ring.nvars(), &mut ChaCha8Rng::seed_from_u64(seed), DEFAULT_W);
    let ft = to_univariate(&f, &t).map_err(|e| e.to_string())?;
    let gt = to_univariate(&g, &t).map_err(|e| e.to_string())?;
    let univariate = if ft.is_zero() { None } else { Some(ft.divides(&gt)) };
    let quotient = f.exact_quotient(&g, TermOrder::GradedLex).map_err(|e| e.to_string())?;
    Ok(json!({
        "univariate_divides": univariate,
        "divides": quotient.is_some(),
        "quotient": quotient.map(|q| q.to_string()),
    })
    .to_string())
}
