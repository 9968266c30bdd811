//! Invariant generation: sample a trajectory, take the vanishing ideal of
//! the samples, and keep the basis elements that pass polynomial-scale
//! consecution.
//!
//! Before verification the sample set is closed under the transitions: the
//! guard-free image of every sample is added while some low-degree basis
//! element fails to vanish on it. Any polynomial that vanishes on the
//! samples and satisfies guard-free consecution also vanishes on those
//! images, so nothing is lost, while degenerate trajectories (whose ideal
//! contains a true invariant only as a sum of basis elements) get enough
//! points to expose it.

mod symbolic;

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

pub use symbolic::{
    invgen_symbolic, normalize, normalized_instance, NormalizedInvariant, ParametricInvariant,
    ParametricInvariantReport,
};

use crate::divisibility::{filter_and_verify, DivisibilityError, FilterConfig, VerifiedInvariant, DEFAULT_W};
use crate::executor::{collect_samples, successor, ExecError, ExecutionConfig, StopReason};
use crate::frontend::{to_transition_system, LoopProgram, TransitionSystem};
use crate::polyring::{Point, PolyError, Polynomial, Rational, TermOrder};
use crate::ratinterp::InterpError;
use crate::vanishing::{modular_vanishing_ideal, vanishes_on, PointSet, VanishingError};

/// Rounds of transition closure before giving up on stabilising.
pub const CLOSURE_ROUNDS: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvGenError {
    #[error("degree bound must be at least 1")]
    InvalidDegree,
    #[error("initial values depend on parameters; use the symbolic pipeline")]
    Parametric,
    #[error("the program declares no parameters")]
    NoParameters,
    #[error("the loop has no feasible transition")]
    NoTransitions,
    #[error("sampling: {0}")]
    Exec(#[from] ExecError),
    #[error("vanishing ideal: {0}")]
    Vanishing(#[from] VanishingError),
    #[error("verification: {0}")]
    Divisibility(#[from] DivisibilityError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("no parametric invariant found at this degree bound")]
    NoStableCandidate,
    #[error("interpolating the coefficient of {monomial} in invariant {invariant}: {source}")]
    Interp { invariant: usize, monomial: String, source: InterpError },
    #[error("check failed: {0}")]
    CheckFailed(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvGenConfig {
    pub degree: u32,
    pub ord: TermOrder,
    pub seed: u64,
    pub w_size: u64,
    /// `None` respects the loop guard in numeric runs and omits it in
    /// symbolic runs.
    pub ignore_guard: Option<bool>,
    pub max_steps: Option<usize>,
    /// Trust the univariate filter alone. Unsound.
    pub stage1_only: bool,
}

impl InvGenConfig {
    pub fn new(degree: u32) -> Self {
        InvGenConfig {
            degree,
            ord: TermOrder::GradedLex,
            seed: 0,
            w_size: DEFAULT_W,
            ignore_guard: None,
            max_steps: None,
            stage1_only: false,
        }
    }
}

/// What an empty result proves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonExistenceNote {
    pub min_degree: u32,
    pub degree_bound: u32,
}

impl fmt::Display for NonExistenceNote {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "no polynomial invariant of degree < {} vanishes on the samples; \
             no basis candidate of degree <= {} passed consecution",
            self.min_degree, self.degree_bound
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    /// Verified invariants with integer content removed and a positive
    /// grlex-leading coefficient, each with one quotient per transition.
    pub invariants: Vec<VerifiedInvariant>,
    /// Smallest degree in the ideal of the sampled trajectory.
    pub min_degree: u32,
    pub degree_bound: u32,
    /// Size of the reduced basis of the trajectory ideal.
    pub candidates_total: usize,
    /// Trajectory-ideal elements above the degree bound.
    pub over_degree: usize,
    /// Candidates that went through verification (after closure).
    pub candidates_checked: usize,
    pub rejected_stage1: usize,
    pub rejected_stage2: usize,
    pub sample_count: usize,
    pub shortfall: bool,
    pub stop: StopReason,
    pub closure_rounds: usize,
    pub closure_points: usize,
    pub nonexistence: Option<NonExistenceNote>,
    pub initial_state: Point,
    pub trajectory: Vec<Point>,
    pub seed: u64,
}

/// Numeric invariant generation for a program whose initial values are
/// constants.
pub fn invgen_numeric(p: &LoopProgram, cfg: &InvGenConfig) -> Result<InvariantReport, InvGenError> {
    let init = p.numeric_init().ok_or(InvGenError::Parametric)?;
    let ts = to_transition_system(p);
    run_from(&ts, &init, cfg, cfg.ignore_guard.unwrap_or(false))
}

/// The generation pipeline from a concrete initial state.
pub fn run_from(
    ts: &TransitionSystem,
    init: &[Rational],
    cfg: &InvGenConfig,
    ignore_guard: bool,
) -> Result<InvariantReport, InvGenError> {
    let e = cfg.degree;
    if e == 0 {
        return Err(InvGenError::InvalidDegree);
    }
    if ts.transitions.is_empty() {
        return Err(InvGenError::NoTransitions);
    }
    let n = ts.vars.nvars();
    let mut exec = ExecutionConfig::for_degree(n, e);
    exec.ignore_guard = ignore_guard;
    if let Some(m) = cfg.max_steps {
        exec.max_steps = m;
    }
    let samples = collect_samples(ts, init, &exec)?;
    let trajectory_ideal = modular_vanishing_ideal(&samples.points, cfg.ord, e)?;

    let mut points = samples.points.clone();
    let mut ideal = trajectory_ideal.clone();
    let mut rounds = 0;
    while !ideal.low_basis.is_empty() {
        let images: Vec<Point> = points
            .points()
            .iter()
            .flat_map(|s| ts.transitions.iter().map(move |t| t.apply(s)))
            .filter(|q| !points.points().contains(q))
            .collect();
        let fresh = PointSet::new(&ts.vars, images)?;
        if fresh.is_empty() || vanishes_on(&ideal.low_basis, &fresh) || rounds == CLOSURE_ROUNDS {
            break;
        }
        for q in fresh.points() {
            points.insert(q.clone())?;
        }
        rounds += 1;
        ideal = modular_vanishing_ideal(&points, cfg.ord, e)?;
    }

    let updates: Vec<Vec<Polynomial>> = ts.transitions.iter().map(|t| t.update.clone()).collect();
    let filter = FilterConfig { seed: cfg.seed, w_size: cfg.w_size, stage1_only: cfg.stage1_only };
    let outcome = filter_and_verify(&ideal.low_basis, &updates, &filter)?;
    let invariants: Vec<VerifiedInvariant> = outcome
        .verified
        .into_iter()
        .map(|v| VerifiedInvariant { poly: v.poly.primitive(TermOrder::GradedLex), quotients: v.quotients })
        .collect();

    if !cfg.stage1_only {
        check_invariants(ts, init, &invariants, &updates, samples.trajectory.len(), ignore_guard)?;
    }
    let nonexistence = invariants
        .is_empty()
        .then_some(NonExistenceNote { min_degree: trajectory_ideal.min_degree, degree_bound: e });
    Ok(InvariantReport {
        invariants,
        min_degree: trajectory_ideal.min_degree,
        degree_bound: e,
        candidates_total: trajectory_ideal.basis_size(),
        over_degree: trajectory_ideal.leading_monomials.iter().filter(|m| m.degree() > e).count(),
        candidates_checked: ideal.low_basis.len(),
        rejected_stage1: outcome.rejected_univariate.len(),
        rejected_stage2: outcome.rejected_multivariate.len(),
        sample_count: samples.points.len(),
        shortfall: samples.shortfall,
        stop: samples.stop,
        closure_rounds: rounds,
        closure_points: points.len() - samples.points.len(),
        nonexistence,
        initial_state: init.to_vec(),
        trajectory: samples.trajectory,
        seed: cfg.seed,
    })
}

/// Initiation, the consecution identity and vanishing on twice as many
/// iterates as were sampled.
fn check_invariants(
    ts: &TransitionSystem,
    init: &[Rational],
    invariants: &[VerifiedInvariant],
    updates: &[Vec<Polynomial>],
    sampled: usize,
    ignore_guard: bool,
) -> Result<(), InvGenError> {
    if invariants.is_empty() {
        return Ok(());
    }
    for inv in invariants {
        if !inv.poly.evaluate(init)?.is_zero() {
            return Err(InvGenError::CheckFailed(format!("{} is non-zero at the initial state", inv.poly)));
        }
        for (u, q) in updates.iter().zip(&inv.quotients) {
            let lhs = inv.poly.substitute(inv.poly.ring(), u)?;
            if !(&lhs - &(q * &inv.poly)).is_zero() {
                return Err(InvGenError::CheckFailed(format!("{} fails the consecution identity", inv.poly)));
            }
        }
    }
    let mut state = init.to_vec();
    for _ in 0..2 * sampled.max(1) {
        let next = match successor(ts, &state, ignore_guard) {
            Ok(Some((_, next))) if next != state => next,
            _ => break,
        };
        for inv in invariants {
            if !inv.poly.evaluate(&next)?.is_zero() {
                return Err(InvGenError::CheckFailed(format!("{} is non-zero on an extended trajectory", inv.poly)));
            }
        }
        state = next;
    }
    Ok(())
}

#[cfg(test)]
mod tests;
