//! Command-line driver: read a loop program, run the numeric or symbolic
//! pipeline, print a text or JSON report.
//!
//! Exit codes: 0 when at least one invariant is reported, 1 when none
//! verifies, 2 on input errors.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::divisibility::DEFAULT_W;
use crate::executor::{write_trace, StopReason};
use crate::frontend::{parse_program, LoopProgram};
use crate::invgen::{invgen_numeric, invgen_symbolic, InvGenConfig, InvGenError, InvariantReport};
use crate::polyring::{Point, Polynomial, Rational, TermOrder};
use crate::ratinterp::InterpConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Symbolic when the program declares parameters.
    Auto,
    Numeric,
    Symbolic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "polyinv", version, about = "Generate polynomial equation invariants of a loop")]
pub struct CliConfig {
    /// Loop program in the polyinv DSL.
    #[arg(long, value_name = "PATH")]
    pub program: PathBuf,
    /// Degree bound e (at least 1).
    #[arg(long, value_name = "E")]
    pub degree: u32,
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    pub mode: Mode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Size of the sample set for random line coefficients.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_W)]
    pub wsize: u64,
    /// Drop the loop guard while sampling (default: numeric no, symbolic yes).
    #[arg(long, value_name = "BOOL", action = clap::ArgAction::Set)]
    pub ignore_guard: Option<bool>,
    /// Numerator degree per parameter (one value applies to all).
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    pub interp_num_deg: Option<Vec<u32>>,
    /// Denominator degree per parameter (one value applies to all).
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    pub interp_den_deg: Option<Vec<u32>>,
    #[arg(long, value_name = "N")]
    pub max_steps: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the sampled trajectory to stderr.
    #[arg(long)]
    pub trace: bool,
    /// Accept candidates that pass the univariate filter without exact
    /// division. Unsound: may report non-invariants.
    #[arg(long)]
    pub unsound_stage1_only: bool,
}

/// Pipeline settings independent of where the program text comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub degree: u32,
    pub mode: Mode,
    pub seed: u64,
    pub w_size: u64,
    pub ignore_guard: Option<bool>,
    pub interp_num_deg: Option<Vec<u32>>,
    pub interp_den_deg: Option<Vec<u32>>,
    pub max_steps: Option<usize>,
    pub stage1_only: bool,
}

impl RunOptions {
    pub fn new(degree: u32) -> Self {
        RunOptions {
            degree,
            mode: Mode::Auto,
            seed: 0,
            w_size: DEFAULT_W,
            ignore_guard: None,
            interp_num_deg: None,
            interp_den_deg: None,
            max_steps: None,
            stage1_only: false,
        }
    }
}

impl From<&CliConfig> for RunOptions {
    fn from(c: &CliConfig) -> Self {
        RunOptions {
            degree: c.degree,
            mode: c.mode,
            seed: c.seed,
            w_size: c.wsize,
            ignore_guard: c.ignore_guard,
            interp_num_deg: c.interp_num_deg.clone(),
            interp_den_deg: c.interp_den_deg.clone(),
            max_steps: c.max_steps,
            stage1_only: c.unsound_stage1_only,
        }
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum RunError {
    #[error("input: {0}")]
    Input(String),
    #[error("{0}")]
    Failed(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Input(_) => 2,
            RunError::Failed(_) => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub exponents: Vec<u32>,
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonPoly {
    pub text: String,
    pub terms: Vec<JsonTerm>,
}

impl JsonPoly {
    pub fn from_poly(p: &Polynomial) -> Self {
        JsonPoly {
            text: p.to_string(),
            terms: p
                .terms_desc(TermOrder::GradedLex)
                .into_iter()
                .map(|(m, c)| JsonTerm { exponents: m.exponents().to_vec(), coefficient: fraction(c) })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonInvariant {
    pub poly: JsonPoly,
    pub quotients: Vec<String>,
}

/// The machine-readable report; the text report is rendered from it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub mode: Mode,
    pub variables: Vec<String>,
    pub parameters: Vec<String>,
    pub invariants: Vec<JsonInvariant>,
    pub min_degree: u32,
    pub degree_bound: u32,
    pub candidates: usize,
    pub over_degree: usize,
    pub candidates_checked: usize,
    pub rejected_stage1: usize,
    pub rejected_stage2: usize,
    pub samples: usize,
    pub shortfall: bool,
    pub stop: String,
    pub closure_rounds: usize,
    pub nonexistence: Option<String>,
    /// Parameter values of the reference run (symbolic mode).
    pub reference_parameters: Option<Vec<String>>,
    pub instantiations: Option<usize>,
    pub unsound_stage1_only: bool,
    pub seed: u64,
}

/// A report together with the trajectory it was computed from.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    pub trajectory: Vec<Point>,
}

fn fraction(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn stop_name(s: StopReason) -> &'static str {
    match s {
        StopReason::TargetReached => "target reached",
        StopReason::LoopExit => "loop exit",
        StopReason::FixedPoint => "fixed point",
        StopReason::MaxSteps => "step limit",
    }
}

fn classify(e: InvGenError) -> RunError {
    use crate::executor::ExecError;
    match e {
        InvGenError::InvalidDegree | InvGenError::Parametric | InvGenError::NoParameters => {
            RunError::Input(e.to_string())
        }
        InvGenError::Exec(ExecError::InvalidConfig(_) | ExecError::DimensionMismatch { .. }) => {
            RunError::Input(e.to_string())
        }
        other => RunError::Failed(other.to_string()),
    }
}

fn base_report(p: &LoopProgram, mode: Mode, r: &InvariantReport, stage1_only: bool) -> Report {
    Report {
        mode,
        variables: p.vars.names().to_vec(),
        parameters: p.params.names().to_vec(),
        invariants: Vec::new(),
        min_degree: r.min_degree,
        degree_bound: r.degree_bound,
        candidates: r.candidates_total,
        over_degree: r.over_degree,
        candidates_checked: r.candidates_checked,
        rejected_stage1: r.rejected_stage1,
        rejected_stage2: r.rejected_stage2,
        samples: r.sample_count,
        shortfall: r.shortfall,
        stop: stop_name(r.stop).into(),
        closure_rounds: r.closure_rounds,
        nonexistence: r.nonexistence.as_ref().map(|n| n.to_string()),
        reference_parameters: None,
        instantiations: None,
        unsound_stage1_only: stage1_only,
        seed: r.seed,
    }
}

/// Parse `source` and run the pipeline selected by `opts`.
pub fn generate(source: &str, opts: &RunOptions) -> Result<Outcome, RunError> {
    let p = parse_program(source).map_err(|e| RunError::Input(format!("parse: {e}")))?;
    if opts.degree == 0 {
        return Err(RunError::Input("--degree must be at least 1".into()));
    }
    if opts.w_size < 2 {
        return Err(RunError::Input("--wsize must be at least 2".into()));
    }
    let cfg = InvGenConfig {
        degree: opts.degree,
        ord: TermOrder::GradedLex,
        seed: opts.seed,
        w_size: opts.w_size,
        ignore_guard: opts.ignore_guard,
        max_steps: opts.max_steps,
        stage1_only: opts.stage1_only,
    };
    let mode = match opts.mode {
        Mode::Auto if p.params.nvars() > 0 => Mode::Symbolic,
        Mode::Auto => Mode::Numeric,
        m => m,
    };
    if mode == Mode::Symbolic {
        let m = p.params.nvars();
        let widen = |d: &Option<Vec<u32>>| -> Result<Option<Vec<u32>>, RunError> {
            match d {
                Some(v) if v.len() == 1 => Ok(Some(vec![v[0]; m])),
                Some(v) if v.len() != m => {
                    Err(RunError::Input(format!("expected 1 or {m} interpolation degrees, got {}", v.len())))
                }
                other => Ok(other.clone()),
            }
        };
        let interp = InterpConfig {
            num_degrees: widen(&opts.interp_num_deg)?,
            den_degrees: widen(&opts.interp_den_deg)?,
            ..InterpConfig::default()
        };
        let r = invgen_symbolic(&p, &cfg, &interp).map_err(classify)?;
        let mut report = base_report(&p, mode, &r.reference, opts.stage1_only);
        report.invariants = r
            .invariants
            .iter()
            .map(|v| JsonInvariant {
                poly: JsonPoly::from_poly(&v.poly),
                quotients: v.quotients.iter().map(|q| q.to_string()).collect(),
            })
            .collect();
        report.nonexistence = None;
        report.reference_parameters = Some(r.reference_params.iter().map(fraction).collect());
        report.instantiations = Some(r.instantiations);
        return Ok(Outcome { report, trajectory: r.reference.trajectory });
    }
    let r = invgen_numeric(&p, &cfg).map_err(classify)?;
    let mut report = base_report(&p, mode, &r, opts.stage1_only);
    report.invariants = r
        .invariants
        .iter()
        .map(|v| JsonInvariant {
            poly: JsonPoly::from_poly(&v.poly),
            quotients: v.quotients.iter().map(|q| q.to_string()).collect(),
        })
        .collect();
    Ok(Outcome { report, trajectory: r.trajectory })
}

pub fn render_json(r: &Report) -> String {
    serde_json::to_string_pretty(r).expect("report serializes") + "\n"
}

pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let mode = if r.mode == Mode::Symbolic { "symbolic" } else { "numeric" };
    let _ = writeln!(out, "mode: {mode}");
    if r.unsound_stage1_only {
        let _ = writeln!(out, "warning: stage-1-only verification is unsound");
    }
    if let Some(u) = &r.reference_parameters {
        let pairs: Vec<String> = r.parameters.iter().zip(u).map(|(n, v)| format!("{n} = {v}")).collect();
        let _ = writeln!(out, "reference instantiation: {}", pairs.join(", "));
    }
    let _ = writeln!(out, "invariants ({}):", r.invariants.len());
    for inv in &r.invariants {
        let _ = writeln!(out, "  {} = 0", inv.poly.text);
        for (j, q) in inv.quotients.iter().enumerate() {
            let _ = writeln!(out, "    quotient t{j}: {q}");
        }
    }
    if let Some(note) = &r.nonexistence {
        let _ = writeln!(out, "none verified: {note}");
    }
    let _ = writeln!(out, "minimal ideal degree e': {}", r.min_degree);
    let _ = writeln!(out, "degree bound e: {}", r.degree_bound);
    let _ = writeln!(out, "candidates r: {} ({} above the bound)", r.candidates, r.over_degree);
    let _ = writeln!(out, "checked after closure: {}", r.candidates_checked);
    let _ = writeln!(
        out,
        "rejected: {} by the univariate filter, {} by exact division",
        r.rejected_stage1, r.rejected_stage2
    );
    let short = if r.shortfall { ", shortfall" } else { "" };
    let _ = writeln!(out, "samples: {} ({}{short})", r.samples, r.stop);
    if r.closure_rounds > 0 {
        let _ = writeln!(out, "closure rounds: {}", r.closure_rounds);
    }
    if let Some(n) = r.instantiations {
        let _ = writeln!(out, "instantiations: {n}");
    }
    let _ = writeln!(out, "seed: {}", r.seed);
    out
}

/// Run the command; returns the process exit code.
pub fn run(cfg: &CliConfig, out: &mut impl Write, err: &mut impl Write) -> i32 {
    let source = match std::fs::read_to_string(&cfg.program) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: input: cannot read {}: {e}", cfg.program.display());
            return 2;
        }
    };
    let outcome = match generate(&source, &RunOptions::from(cfg)) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    let text = match cfg.format {
        Format::Text => render_text(&outcome.report),
        Format::Json => render_json(&outcome.report),
    };
    let _ = out.write_all(text.as_bytes());
    if cfg.trace {
        let _ = writeln!(err, "# trajectory");
        let _ = write_trace(&mut *err, &outcome.trajectory);
    }
    if outcome.report.invariants.is_empty() {
        1
    } else {
        0
    }
}
