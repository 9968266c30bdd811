//! Invariants for symbolic initial values: run the numeric pipeline at
//! random parameter values, normalize each invariant so its smallest
//! monomial has coefficient 1, and interpolate the remaining coefficients
//! as rational functions of the parameters.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{run_from, InvGenConfig, InvGenError, InvariantReport};
use crate::divisibility::{filter_and_verify, FilterConfig};
use crate::executor::{collect_samples, ExecutionConfig};
use crate::frontend::{to_transition_system, LoopProgram, TransitionSystem};
use crate::polyring::{Monomial, Polynomial, Rational, Ring, TermOrder};
use crate::ratinterp::{clear_denominators, interpolate_rational, InterpConfig, ParamSampler, RationalFunction, Stream};

/// An invariant scaled so that its grlex-smallest monomial has coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedInvariant {
    pub leading: Monomial,
    pub coefficients: BTreeMap<Monomial, Rational>,
}

impl NormalizedInvariant {
    /// Monomials in increasing grlex order; the first one is the unit term.
    pub fn support(&self) -> Vec<Monomial> {
        self.coefficients.keys().cloned().collect()
    }

    fn key(&self) -> (Vec<Monomial>, Monomial) {
        (self.support(), self.leading.clone())
    }
}

pub fn normalize(eta: &Polynomial) -> NormalizedInvariant {
    let (_, c0) = eta.terms().next().expect("non-zero invariant");
    let inv = c0.recip();
    NormalizedInvariant {
        leading: eta.leading_monomial(TermOrder::GradedLex).unwrap().clone(),
        coefficients: eta.terms().map(|(m, c)| (m.clone(), c * &inv)).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParametricInvariant {
    /// Over the program variables followed by the parameters.
    pub poly: Polynomial,
    pub quotients: Vec<Polynomial>,
    pub template: Vec<Monomial>,
    pub coefficients: Vec<RationalFunction>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParametricInvariantReport {
    pub invariants: Vec<ParametricInvariant>,
    pub combined: Arc<Ring>,
    /// The numeric run at the first reference instantiation.
    pub reference: InvariantReport,
    pub reference_params: Vec<Rational>,
    /// Distinct parameter points the numeric pipeline was run at.
    pub instantiations: usize,
    pub failed_instantiations: usize,
}

/// The numeric pipeline at the given parameter values, with invariants
/// normalized for alignment.
pub fn normalized_instance(
    p: &LoopProgram,
    params: &[Rational],
    cfg: &InvGenConfig,
) -> Result<(InvariantReport, Vec<NormalizedInvariant>), InvGenError> {
    let ts = to_transition_system(p);
    let report = run_from(&ts, &p.instantiate_init(params), cfg, cfg.ignore_guard.unwrap_or(true))?;
    let normalized = report.invariants.iter().map(|v| normalize(&v.poly)).collect();
    Ok((report, normalized))
}

type Instance = Option<(InvariantReport, Vec<NormalizedInvariant>)>;

struct Cache<'a> {
    program: &'a LoopProgram,
    ts: TransitionSystem,
    cfg: &'a InvGenConfig,
    ignore_guard: bool,
    runs: HashMap<Vec<Rational>, Instance>,
}

impl Cache<'_> {
    fn get(&mut self, u: &[Rational]) -> &Instance {
        if !self.runs.contains_key(u) {
            let init = self.program.instantiate_init(u);
            let out = run_from(&self.ts, &init, self.cfg, self.ignore_guard)
                .ok()
                .map(|r| {
                    let n = r.invariants.iter().map(|v| normalize(&v.poly)).collect();
                    (r, n)
                });
            self.runs.insert(u.to_vec(), out);
        }
        &self.runs[u]
    }

    fn failures(&self) -> usize {
        self.runs.values().filter(|r| r.is_none()).count()
    }
}

/// Reference instantiations tried while looking for two that agree.
const MAX_REFERENCES: u64 = 9;

pub fn invgen_symbolic(
    p: &LoopProgram,
    cfg: &InvGenConfig,
    interp: &InterpConfig,
) -> Result<ParametricInvariantReport, InvGenError> {
    let m = p.params.nvars();
    if m == 0 {
        return Err(InvGenError::NoParameters);
    }
    let ignore_guard = cfg.ignore_guard.unwrap_or(true);
    let ts = to_transition_system(p);
    let sampler = ParamSampler::new(cfg.seed, m);
    let mut cache = Cache { program: p, ts: ts.clone(), cfg, ignore_guard, runs: HashMap::new() };

    // the support layout shared by a majority of reference runs
    let mut refs: Vec<(Vec<Rational>, Vec<(Vec<Monomial>, Monomial)>)> = Vec::new();
    let mut chosen = None;
    for idx in 0..MAX_REFERENCES {
        let u = sampler.point(Stream::Reference, idx);
        let Some((_, normalized)) = cache.get(&u) else { continue };
        let keys: Vec<_> = normalized.iter().map(NormalizedInvariant::key).collect();
        refs.push((u, keys));
        if refs.len() >= 3 {
            let agreed = refs.iter().find(|(_, k)| refs.iter().filter(|(_, o)| o == k).count() >= 2);
            if let Some(r) = agreed {
                chosen = Some(r.clone());
                break;
            }
        }
    }
    let (ref_u, keys) = chosen.ok_or(InvGenError::NoStableCandidate)?;
    if keys.is_empty() {
        return Err(InvGenError::NoStableCandidate);
    }
    let reference = cache.get(&ref_u).clone().unwrap().0;

    let nv = p.vars.nvars();
    let names: Vec<String> = p.vars.names().iter().chain(p.params.names()).cloned().collect();
    let combined = Ring::new(names);
    let mut candidates = Vec::new();
    for (k, (support, leading)) in keys.iter().enumerate() {
        let mut coefficients = vec![RationalFunction::constant(&p.params, Rational::one())];
        for t in &support[1..] {
            let mut bb = |u: &[Rational]| -> Option<Rational> {
                let (_, normalized) = cache.get(u).as_ref()?;
                let inv = normalized.iter().find(|n| n.leading == *leading && n.support() == *support)?;
                Some(inv.coefficients[t].clone())
            };
            let f = interpolate_rational(&mut bb, &p.params, interp, &sampler).map_err(|source| {
                InvGenError::Interp { invariant: k, monomial: t.render(&p.vars), source }
            })?;
            coefficients.push(f);
        }
        let poly = clear_denominators(support, &coefficients, &combined);
        candidates.push((support.clone(), coefficients, poly));
    }

    // params are inert variables of the combined ring
    let updates: Vec<Vec<Polynomial>> = ts
        .transitions
        .iter()
        .map(|t| {
            let map: Vec<usize> = (0..nv).collect();
            let mut u: Vec<Polynomial> = t.update.iter().map(|f| f.embed(&combined, &map)).collect();
            u.extend((nv..combined.nvars()).map(|j| Polynomial::var(&combined, j)));
            u
        })
        .collect();
    let polys: Vec<Polynomial> = candidates.iter().map(|c| c.2.clone()).collect();
    let filter = FilterConfig { seed: cfg.seed, w_size: cfg.w_size, stage1_only: false };
    let outcome = filter_and_verify(&polys, &updates, &filter)?;
    if outcome.verified.len() != polys.len() {
        let bad = outcome.rejected_univariate.iter().chain(&outcome.rejected_multivariate).next().unwrap();
        return Err(InvGenError::CheckFailed(format!("recovered {bad} fails consecution")));
    }
    let mut invariants = Vec::new();
    for ((template, coefficients, poly), v) in candidates.into_iter().zip(outcome.verified) {
        check_parametric(p, &ts, &poly, cfg, ignore_guard, &sampler)?;
        invariants.push(ParametricInvariant { poly, quotients: v.quotients, template, coefficients });
    }
    Ok(ParametricInvariantReport {
        invariants,
        combined,
        reference,
        reference_params: ref_u,
        instantiations: cache.runs.len(),
        failed_instantiations: cache.failures(),
    })
}

/// Fresh instantiations whose trajectories the recovered invariant must
/// vanish on.
const CHECK_POINTS: u64 = 2;

/// Initiation with symbolic initial values, then vanishing on extended
/// trajectories from fresh parameter values.
fn check_parametric(
    p: &LoopProgram,
    ts: &TransitionSystem,
    poly: &Polynomial,
    cfg: &InvGenConfig,
    ignore_guard: bool,
    sampler: &ParamSampler,
) -> Result<(), InvGenError> {
    let m = p.params.nvars();
    let mut images = p.init.clone();
    images.extend((0..m).map(|j| Polynomial::var(&p.params, j)));
    if !poly.substitute(&p.params, &images)?.is_zero() {
        return Err(InvGenError::CheckFailed(format!("{poly} does not vanish at the symbolic initial state")));
    }
    let n = p.vars.nvars();
    let base = ExecutionConfig::for_degree(n, cfg.degree);
    let target = 2 * base.target_count;
    let exec = ExecutionConfig { target_count: target, max_steps: base.max_steps.max(target), ignore_guard };
    for idx in 0..CHECK_POINTS {
        let u = sampler.point(Stream::Check, idx);
        let Ok(samples) = collect_samples(ts, &p.instantiate_init(&u), &exec) else { continue };
        for s in &samples.trajectory {
            let point: Vec<Rational> = s.iter().chain(&u).cloned().collect();
            if !poly.evaluate(&point)?.is_zero() {
                return Err(InvGenError::CheckFailed(format!("{poly} is non-zero on a fresh trajectory")));
            }
        }
    }
    Ok(())
}
