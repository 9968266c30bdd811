//! Polynomial-scale consecution checks: does `eta(V)` divide `eta(P(V))`?
//!
//! Stage 1 restricts both polynomials to a random line `x1 = Z`,
//! `xi = Bi*Z - pi` and tests univariate divisibility. A univariate failure
//! proves multivariate non-divisibility, so it only ever rejects
//! non-invariants. Survivors go through exact single-divisor division.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::polyring::{PolyError, Polynomial, Rational, TermOrder, UnivariatePolynomial};

/// Default size of the sample set {1, ..., W} for line coefficients.
pub const DEFAULT_W: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DivisibilityError {
    #[error("candidate {0} is the zero polynomial")]
    ZeroCandidate(usize),
    #[error("candidate {0} is a non-zero constant")]
    ConstantCandidate(usize),
    #[error("no transitions to check against")]
    NoTransitions,
    #[error("division by the zero univariate polynomial")]
    ZeroDivisor,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `x1 -> Z`, `xi -> b[i-2] * Z - p[i-2]` for i >= 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineTransform {
    pub b: Vec<Rational>,
    pub p: Vec<Rational>,
    pub sample_space_size: u64,
}

pub fn random_line(n: usize, rng: &mut impl Rng, w_size: u64) -> LineTransform {
    assert!(n >= 1 && w_size >= 2, "need n >= 1 and |W| >= 2");
    let mut draw = || Rational::from_integer(rng.gen_range(1..=w_size).into());
    let b = (1..n).map(|_| draw()).collect();
    let p = (1..n).map(|_| draw()).collect();
    LineTransform { b, p, sample_space_size: w_size }
}

impl LineTransform {
    pub fn nvars(&self) -> usize {
        self.b.len() + 1
    }

    fn images(&self) -> Vec<UnivariatePolynomial> {
        let mut out = vec![UnivariatePolynomial::linear(Rational::from_integer(1.into()), Rational::zero())];
        out.extend(self.b.iter().zip(&self.p).map(|(b, p)| UnivariatePolynomial::linear(b.clone(), -p)));
        out
    }
}

pub fn to_univariate(f: &Polynomial, t: &LineTransform) -> Result<UnivariatePolynomial, DivisibilityError> {
    let n = f.ring().nvars();
    if n != t.nvars() {
        return Err(PolyError::DimensionMismatch { expected: t.nvars(), got: n }.into());
    }
    let images = t.images();
    let mut powers: Vec<Vec<UnivariatePolynomial>> =
        vec![vec![UnivariatePolynomial::constant(Rational::from_integer(1.into()))]; n];
    let mut acc = UnivariatePolynomial::zero();
    for (m, c) in f.terms() {
        let mut term = UnivariatePolynomial::constant(c.clone());
        for (i, &e) in m.exponents().iter().enumerate() {
            let e = e as usize;
            while powers[i].len() <= e {
                let next = powers[i].last().unwrap().mul(&images[i]);
                powers[i].push(next);
            }
            if e > 0 {
                term = term.mul(&powers[i][e]);
            }
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

pub fn univariate_divides(ft: &UnivariatePolynomial, gt: &UnivariatePolynomial) -> Result<bool, DivisibilityError> {
    if ft.is_zero() {
        return Err(DivisibilityError::ZeroDivisor);
    }
    Ok(ft.divides(gt))
}

/// Probability bound on a univariate false pass for divisor degree `e1` and
/// dividend degree `e2` over a sample set of size `w`.
pub fn false_pass_bound(e1: u32, e2: u32, w: u64) -> f64 {
    let (e1, e2, w) = (e1 as f64, e2 as f64, w as f64);
    1.0 - (1.0 - 2.0 * e1 * e2 / w) * (1.0 - e1 / w) * (1.0 - e2 / w)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifiedInvariant {
    pub poly: Polynomial,
    /// `q` with `eta(update) = q * eta`, one per transition.
    pub quotients: Vec<Polynomial>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FilterOutcome {
    pub verified: Vec<VerifiedInvariant>,
    pub rejected_univariate: Vec<Polynomial>,
    pub rejected_multivariate: Vec<Polynomial>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterConfig {
    pub seed: u64,
    pub w_size: u64,
    /// Accept Stage-1 survivors without exact division. Unsound.
    pub stage1_only: bool,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig { seed: 0, w_size: DEFAULT_W, stage1_only: false }
    }
}

/// Line transform for candidate `i` and transition `j`, independent across
/// pairs and fixed by the run seed.
pub fn transform_for(seed: u64, i: usize, j: usize, n: usize, w_size: u64) -> LineTransform {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((i as u64) << 32) | j as u64);
    random_line(n, &mut rng, w_size)
}

/// Check every candidate against every transition update (each a list of
/// one polynomial per variable). Output lists keep the candidates' order.
pub fn filter_and_verify(
    candidates: &[Polynomial],
    updates: &[Vec<Polynomial>],
    cfg: &FilterConfig,
) -> Result<FilterOutcome, DivisibilityError> {
    if updates.is_empty() {
        return Err(DivisibilityError::NoTransitions);
    }
    let ord = TermOrder::GradedLex;
    let mut out = FilterOutcome::default();
    'candidates: for (i, eta) in candidates.iter().enumerate() {
        if eta.is_zero() {
            return Err(DivisibilityError::ZeroCandidate(i));
        }
        if eta.is_constant() {
            return Err(DivisibilityError::ConstantCandidate(i));
        }
        let ring = eta.ring();
        let images: Vec<Polynomial> = updates
            .iter()
            .map(|u| eta.substitute(ring, u))
            .collect::<Result<_, _>>()?;
        for (j, img) in images.iter().enumerate() {
            let t = transform_for(cfg.seed, i, j, ring.nvars(), cfg.w_size);
            let ft = to_univariate(eta, &t)?;
            // a line inside the zero set of eta says nothing; leave it to Stage 2
            if !ft.is_zero() && !ft.divides(&to_univariate(img, &t)?) {
                out.rejected_univariate.push(eta.clone());
                continue 'candidates;
            }
        }
        let mut quotients = Vec::with_capacity(images.len());
        for img in &images {
            if cfg.stage1_only {
                let (q, _) = img.divide(eta, ord)?;
                quotients.push(q);
                continue;
            }
            match eta.exact_quotient(img, ord)? {
                Some(q) => quotients.push(q),
                None => {
                    out.rejected_multivariate.push(eta.clone());
                    continue 'candidates;
                }
            }
        }
        out.verified.push(VerifiedInvariant { poly: eta.clone(), quotients });
    }
    Ok(out)
}
