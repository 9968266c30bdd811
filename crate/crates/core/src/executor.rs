//! Exact execution of a transition system from a concrete initial state.

use std::io::{self, Write};

use thiserror::Error;

use crate::frontend::TransitionSystem;
use crate::polyring::{Point, Rational};
use crate::vanishing::PointSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExecError {
    #[error("transitions {transitions:?} are all enabled at step {step}")]
    Ambiguous { step: usize, transitions: Vec<usize> },
    #[error("initial state has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid execution config: {0}")]
    InvalidConfig(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExecutionConfig {
    pub target_count: usize,
    pub max_steps: usize,
    /// Skip atoms that come from the `while` guard; branch tests still apply.
    pub ignore_guard: bool,
}

impl ExecutionConfig {
    /// Enough samples to determine every polynomial of degree <= `degree`
    /// in `nvars` variables, i.e. C(n+e, n).
    pub fn for_degree(nvars: usize, degree: u32) -> Self {
        let target = binomial(nvars + degree as usize, nvars);
        ExecutionConfig { target_count: target, max_steps: (10 * target).max(1000), ignore_guard: false }
    }

    fn validate(&self) -> Result<(), ExecError> {
        if self.target_count == 0 {
            return Err(ExecError::InvalidConfig("target_count must be at least 1".into()));
        }
        if self.max_steps < self.target_count {
            return Err(ExecError::InvalidConfig("max_steps must be at least target_count".into()));
        }
        Ok(())
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    (0..k.min(n - k)).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    TargetReached,
    LoopExit,
    FixedPoint,
    MaxSteps,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Samples {
    /// Distinct visited states, in first-visit order.
    pub points: PointSet,
    /// Every visited state, in order, starting with the initial one.
    pub trajectory: Vec<Point>,
    pub stop: StopReason,
    /// Fewer distinct points than requested.
    pub shortfall: bool,
}

/// The transition enabled at `state` and the successor it produces, or
/// `None` when no transition is enabled.
pub fn successor(
    ts: &TransitionSystem,
    state: &[Rational],
    ignore_guard: bool,
) -> Result<Option<(usize, Point)>, Vec<usize>> {
    let enabled: Vec<usize> =
        ts.transitions.iter().enumerate().filter(|(_, t)| t.enabled(state, ignore_guard)).map(|(i, _)| i).collect();
    match enabled.as_slice() {
        [] => Ok(None),
        [i] => Ok(Some((*i, ts.transitions[*i].apply(state)))),
        _ => Err(enabled),
    }
}

pub fn collect_samples(ts: &TransitionSystem, init: &[Rational], cfg: &ExecutionConfig) -> Result<Samples, ExecError> {
    cfg.validate()?;
    let n = ts.vars.nvars();
    if init.len() != n {
        return Err(ExecError::DimensionMismatch { expected: n, got: init.len() });
    }
    let mut points = PointSet::new(&ts.vars, []).expect("empty set");
    let mut state: Point = init.to_vec();
    points.insert(state.clone()).expect("dimension checked");
    let mut trajectory = vec![state.clone()];
    let mut steps = 0;
    let stop = loop {
        if points.len() >= cfg.target_count {
            break StopReason::TargetReached;
        }
        if steps >= cfg.max_steps {
            break StopReason::MaxSteps;
        }
        let next = match successor(ts, &state, cfg.ignore_guard) {
            Ok(Some((_, next))) => next,
            Ok(None) => break StopReason::LoopExit,
            Err(transitions) => return Err(ExecError::Ambiguous { step: steps, transitions }),
        };
        steps += 1;
        trajectory.push(next.clone());
        if next == state {
            break StopReason::FixedPoint;
        }
        points.insert(next.clone()).expect("dimension checked");
        state = next;
    };
    let shortfall = points.len() < cfg.target_count;
    Ok(Samples { points, trajectory, stop, shortfall })
}

/// One state per line, coordinates as `p/q` separated by tabs.
pub fn write_trace(mut out: impl Write, states: &[Point]) -> io::Result<()> {
    for s in states {
        let line: Vec<String> = s.iter().map(|c| format!("{}/{}", c.numer(), c.denom())).collect();
        writeln!(out, "{}", line.join("\t"))?;
    }
    Ok(())
}
