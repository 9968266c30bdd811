//! Dense rational function interpolation from black-box evaluations.
//!
//! Degrees are first probed one parameter at a time: the black box is
//! restricted to a random line in that parameter and a univariate rational
//! function of the smallest total degree that fits all samples is taken.
//! The multivariate function is then solved from the homogeneous system
//! `c(u) * den(u) - num(u) = 0` over the tensor box of probed degrees and
//! checked at fresh points. A failed check doubles the bounds.

mod linalg;

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::polyring::{Monomial, Polynomial, Rational, Ring, TermOrder};
use crate::vanishing::modp;

use linalg::kernel_vector;

/// Numerators and denominators of random parameter values are drawn from
/// `1..=VALUE_RANGE`.
pub const VALUE_RANGE: i64 = 1000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InterpError {
    #[error("degree bound exceeded the cap of {cap}")]
    BoundCapExceeded { cap: u32 },
    #[error("black box failed {failures} times")]
    TooManyFailures { failures: usize },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("expected {expected} degree bounds, got {got}")]
    BoundLength { expected: usize, got: usize },
}

/// `numerator / denominator` over a parameter ring, with a monic
/// denominator under grlex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    numerator: Polynomial,
    denominator: Polynomial,
}

impl RationalFunction {
    pub fn new(numerator: Polynomial, denominator: Polynomial) -> Result<Self, InterpError> {
        if denominator.is_zero() {
            return Err(InterpError::ZeroDenominator);
        }
        let ring = denominator.ring().clone();
        if numerator.is_zero() {
            return Ok(RationalFunction { numerator, denominator: Polynomial::one(&ring) });
        }
        let lc = denominator.leading_coefficient(TermOrder::GradedLex).unwrap().recip();
        Ok(RationalFunction { numerator: numerator.scale(&lc), denominator: denominator.scale(&lc) })
    }

    pub fn constant(ring: &Arc<Ring>, c: Rational) -> Self {
        RationalFunction { numerator: Polynomial::constant(ring, c), denominator: Polynomial::one(ring) }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    pub fn is_polynomial(&self) -> bool {
        self.denominator.is_constant()
    }

    /// `None` at a pole.
    pub fn evaluate(&self, u: &[Rational]) -> Option<Rational> {
        let d = self.denominator.evaluate(u).ok()?;
        if d.is_zero() {
            return None;
        }
        Some(self.numerator.evaluate(u).ok()? / d)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "({})/({})", self.numerator, self.denominator)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpConfig {
    /// Per-parameter numerator degrees; skips probing when set.
    pub num_degrees: Option<Vec<u32>>,
    pub den_degrees: Option<Vec<u32>>,
    /// Fresh points that must agree before a result is accepted.
    pub verify_points: usize,
    pub degree_cap: u32,
    /// Black-box failures tolerated per interpolation.
    pub max_failures: usize,
}

impl Default for InterpConfig {
    fn default() -> Self {
        InterpConfig { num_degrees: None, den_degrees: None, verify_points: 3, degree_cap: 32, max_failures: 64 }
    }
}

/// Which family of random parameter points to draw from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stream {
    Reference,
    ProbeBase,
    Probe(usize),
    Box,
    Verify,
    Check,
}

impl Stream {
    fn code(self) -> u64 {
        match self {
            Stream::Reference => 1,
            Stream::ProbeBase => 2,
            Stream::Box => 3,
            Stream::Verify => 4,
            Stream::Check => 5,
            Stream::Probe(i) => 16 + i as u64,
        }
    }
}

/// Deterministic random parameter points: the same (stream, index) always
/// gives the same point, so black-box results can be cached across
/// coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParamSampler {
    seed: u64,
    nparams: usize,
}

impl ParamSampler {
    pub fn new(seed: u64, nparams: usize) -> Self {
        ParamSampler { seed, nparams }
    }

    pub fn point(&self, stream: Stream, idx: u64) -> Vec<Rational> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream((stream.code() << 40) | idx);
        (0..self.nparams).map(|_| random_value(&mut rng)).collect()
    }
}

pub fn random_value(rng: &mut impl Rng) -> Rational {
    let n: i64 = rng.gen_range(1..=VALUE_RANGE);
    let d: i64 = rng.gen_range(1..=VALUE_RANGE);
    Rational::new(n.into(), d.into())
}

/// Black box wrapper that counts failures.
struct Counted<'a> {
    bb: &'a mut dyn FnMut(&[Rational]) -> Option<Rational>,
    failures: usize,
    budget: usize,
}

impl Counted<'_> {
    fn eval(&mut self, u: &[Rational]) -> Result<Option<Rational>, InterpError> {
        let v = (self.bb)(u);
        if v.is_none() {
            self.failures += 1;
            if self.failures > self.budget {
                return Err(InterpError::TooManyFailures { failures: self.failures });
            }
        }
        Ok(v)
    }

    /// Successful samples from `stream`, starting at index 0, until `count`
    /// are collected.
    fn samples(
        &mut self,
        sampler: &ParamSampler,
        stream: Stream,
        count: usize,
        out: &mut Vec<(Vec<Rational>, Rational)>,
        next_idx: &mut u64,
    ) -> Result<(), InterpError> {
        while out.len() < count {
            let u = sampler.point(stream, *next_idx);
            *next_idx += 1;
            if let Some(c) = self.eval(&u)? {
                out.push((u, c));
            }
        }
        Ok(())
    }
}

fn eval_monomial(e: &[u32], u: &[Rational]) -> Rational {
    e.iter().zip(u).filter(|(&k, _)| k > 0).fold(Rational::one(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize))
}

/// All exponent vectors with `e[i] <= bounds[i]`.
fn box_monomials(bounds: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &b in bounds {
        out = out.into_iter().flat_map(|e| (0..=b).map(move |k| [e.clone(), vec![k]].concat())).collect();
    }
    out
}

fn eval_monomial_mod(e: &[u32], u: &[u64], p: u64) -> u64 {
    e.iter().zip(u).fold(1, |acc, (&k, &x)| modp::mul(acc, modp::pow(x, k as u64, p), p))
}

/// Coefficients `(num, den)` fitting every sample, with the denominator not
/// identically zero. `None` when no such solution exists.
fn fit(
    samples: &[(Vec<Rational>, Rational)],
    num: &[Vec<u32>],
    den: &[Vec<u32>],
) -> Option<(Vec<Rational>, Vec<Rational>)> {
    let ncols = num.len() + den.len();
    let rows_mod = |p: u64| -> Option<Vec<Vec<u64>>> {
        samples
            .iter()
            .map(|(u, c)| {
                let u: Vec<u64> = u.iter().map(|x| modp::rational_mod(x, p)).collect::<Option<_>>()?;
                let c = modp::rational_mod(c, p)?;
                let mut row: Vec<u64> = num.iter().map(|e| modp::sub(0, eval_monomial_mod(e, &u, p), p)).collect();
                row.extend(den.iter().map(|e| modp::mul(c, eval_monomial_mod(e, &u, p), p)));
                Some(row)
            })
            .collect()
    };
    let exact_rows = || -> Vec<Vec<Rational>> {
        samples
            .iter()
            .map(|(u, c)| {
                let mut row: Vec<Rational> = num.iter().map(|e| -eval_monomial(e, u)).collect();
                row.extend(den.iter().map(|e| c * eval_monomial(e, u)));
                row
            })
            .collect()
    };
    let satisfies = |v: &[Rational]| -> bool {
        let (a, b) = v.split_at(num.len());
        samples.iter().all(|(u, c)| {
            let n: Rational = num.iter().zip(a).map(|(e, x)| x * eval_monomial(e, u)).sum();
            let d: Rational = den.iter().zip(b).map(|(e, x)| x * eval_monomial(e, u)).sum();
            c * d == n
        })
    };
    let v = kernel_vector(ncols, num.len()..ncols, rows_mod, exact_rows, satisfies)?;
    let (a, b) = v.split_at(num.len());
    Some((a.to_vec(), b.to_vec()))
}

/// Reduced (numerator, denominator) degrees of the black box along a random
/// line in parameter `i`.
fn probe_degree(
    bb: &mut Counted<'_>,
    sampler: &ParamSampler,
    i: usize,
    cfg: &InterpConfig,
) -> Result<(u32, u32), InterpError> {
    let base = sampler.point(Stream::ProbeBase, 0);
    let line = ParamSampler::new(sampler.seed, 1);
    let mut samples: Vec<(Vec<Rational>, Rational)> = Vec::new();
    let mut idx = 0u64;
    let cap = cfg.degree_cap;
    for s in 0..=2 * cap {
        while samples.len() < s as usize + 1 + cfg.verify_points {
            let t = line.point(Stream::Probe(i), idx).pop().unwrap();
            idx += 1;
            let mut u = base.clone();
            u[i] = t.clone();
            if let Some(c) = bb.eval(&u)? {
                samples.push((vec![t], c));
            }
        }
        for dd in 0..=s {
            let dn = s - dd;
            if dn > cap || dd > cap {
                continue;
            }
            let num: Vec<Vec<u32>> = (0..=dn).map(|k| vec![k]).collect();
            let den: Vec<Vec<u32>> = (0..=dd).map(|k| vec![k]).collect();
            if fit(&samples, &num, &den).is_some() {
                return Ok((dn, dd));
            }
        }
    }
    Err(InterpError::BoundCapExceeded { cap })
}

fn to_poly(ring: &Arc<Ring>, mons: &[Vec<u32>], coeffs: &[Rational]) -> Polynomial {
    Polynomial::from_terms(ring, mons.iter().zip(coeffs).map(|(e, c)| (Monomial::new(e.clone()), c.clone())))
}

/// Recover the rational function computed by `bb` over the parameters of
/// `params`. `bb` returns `None` for instantiations it cannot handle.
pub fn interpolate_rational(
    bb: &mut dyn FnMut(&[Rational]) -> Option<Rational>,
    params: &Arc<Ring>,
    cfg: &InterpConfig,
    sampler: &ParamSampler,
) -> Result<RationalFunction, InterpError> {
    let m = params.nvars();
    let mut bb = Counted { bb, failures: 0, budget: cfg.max_failures };
    if m == 0 {
        loop {
            if let Some(c) = bb.eval(&[])? {
                return Ok(RationalFunction::constant(params, c));
            }
        }
    }
    for d in [&cfg.num_degrees, &cfg.den_degrees].into_iter().flatten() {
        if d.len() != m {
            return Err(InterpError::BoundLength { expected: m, got: d.len() });
        }
    }
    let (mut dn, mut dd): (Vec<u32>, Vec<u32>) = match (&cfg.num_degrees, &cfg.den_degrees) {
        (Some(n), Some(d)) => (n.clone(), d.clone()),
        _ => {
            let probed = (0..m).map(|i| probe_degree(&mut bb, sampler, i, cfg)).collect::<Result<Vec<_>, _>>()?;
            let (pn, pd): (Vec<u32>, Vec<u32>) = probed.into_iter().unzip();
            (cfg.num_degrees.clone().unwrap_or(pn), cfg.den_degrees.clone().unwrap_or(pd))
        }
    };
    let mut box_samples = Vec::new();
    let mut box_idx = 0;
    let mut verify = Vec::new();
    let mut verify_idx = 0;
    loop {
        if dn.iter().chain(&dd).any(|&d| d > cfg.degree_cap) {
            return Err(InterpError::BoundCapExceeded { cap: cfg.degree_cap });
        }
        let num = box_monomials(&dn);
        let den = box_monomials(&dd);
        bb.samples(sampler, Stream::Box, num.len() + den.len() + 1, &mut box_samples, &mut box_idx)?;
        if let Some((a, b)) = fit(&box_samples, &num, &den) {
            let f = RationalFunction::new(to_poly(params, &num, &a), to_poly(params, &den, &b))?;
            bb.samples(sampler, Stream::Verify, cfg.verify_points, &mut verify, &mut verify_idx)?;
            if verify.iter().all(|(u, c)| f.evaluate(u).as_ref() == Some(c)) {
                return Ok(f);
            }
        }
        dn.iter_mut().chain(dd.iter_mut()).for_each(|d| *d = (*d * 2).max(1));
    }
}

/// Multiply `sum_j coeffs[j] * template[j]` through by the denominators and
/// normalize: integer content removed, grlex-leading coefficient positive.
///
/// `combined` lists the program variables (the template's ring) first and
/// the parameters after them.
pub fn clear_denominators(template: &[Monomial], coeffs: &[RationalFunction], combined: &Arc<Ring>) -> Polynomial {
    assert_eq!(template.len(), coeffs.len(), "template and coefficients differ in length");
    let ord = TermOrder::GradedLex;
    let mut dens: Vec<Polynomial> = Vec::new();
    for c in coeffs {
        let d = c.denominator();
        if d.is_constant() || dens.iter().any(|g| matches!(d.exact_quotient(g, ord), Ok(Some(_)))) {
            continue;
        }
        dens.retain(|g| !matches!(g.exact_quotient(d, ord), Ok(Some(_))));
        dens.push(d.clone());
    }
    let Some(first) = coeffs.first() else {
        return Polynomial::zero(combined);
    };
    let params = first.denominator().ring().clone();
    let lcm = dens.iter().fold(Polynomial::one(&params), |acc, d| &acc * d);
    let nv = combined.nvars() - params.nvars();
    let param_map: Vec<usize> = (nv..combined.nvars()).collect();
    let mut out = Polynomial::zero(combined);
    for (t, c) in template.iter().zip(coeffs) {
        let cofactor = c.denominator().exact_quotient(&lcm, ord).unwrap().expect("denominator divides the product");
        let coeff = (c.numerator() * &cofactor).embed(combined, &param_map);
        let mut e = t.exponents().to_vec();
        e.resize(combined.nvars(), 0);
        out = &out + &(&coeff * &Polynomial::term(combined, Monomial::new(e), Rational::one()));
    }
    out.primitive(ord)
}

#[cfg(test)]
mod tests;
