//! Vanishing ideals of finite point sets via Buchberger-Moeller.
//!
//! Monomials are visited in increasing term order. Each one is either a new
//! leading monomial (its evaluation vector is a combination of the normal
//! monomials' vectors) or joins the normal set. The resulting basis is the
//! reduced Groebner basis of the ideal of all polynomials vanishing on the
//! points.

pub mod modp;
mod modular;

use std::collections::HashSet;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

pub use modular::{modular_vanishing_ideal, ModularIdeal};

use crate::polyring::{Monomial, Point, Polynomial, Rational, Ring, TermOrder};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VanishingError {
    #[error("the point set is empty")]
    EmptyPointSet,
    #[error("point has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("modular reconstruction did not stabilise after {0} primes")]
    ReconstructionFailed(usize),
}

/// Distinct points of affine space over the variables of a ring, in
/// insertion order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    ring: Arc<Ring>,
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(ring: &Arc<Ring>, points: impl IntoIterator<Item = Point>) -> Result<Self, VanishingError> {
        let mut s = PointSet { ring: ring.clone(), points: Vec::new() };
        for p in points {
            s.insert(p)?;
        }
        Ok(s)
    }

    /// Add a point; returns whether it was new.
    pub fn insert(&mut self, p: Point) -> Result<bool, VanishingError> {
        let n = self.ring.nvars();
        if p.len() != n {
            return Err(VanishingError::DimensionMismatch { expected: n, got: p.len() });
        }
        if self.points.contains(&p) {
            return Ok(false);
        }
        self.points.push(p);
        Ok(true)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.ring.nvars()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingIdealBasis {
    /// Reduced Groebner basis, sorted by increasing leading monomial.
    pub basis: Vec<Polynomial>,
    /// Standard monomials, in the order they were accepted.
    pub normal_set: Vec<Monomial>,
    /// Smallest total degree among the basis elements.
    pub min_degree: u32,
}

impl VanishingIdealBasis {
    pub fn leading_monomials(&self, ord: TermOrder) -> Vec<Monomial> {
        self.basis.iter().map(|g| g.leading_monomial(ord).unwrap().clone()).collect()
    }
}

/// Pending monomials and the normal parent each was generated from.
pub(crate) struct Frontier {
    pending: Vec<(Monomial, Option<(usize, usize)>)>,
    seen: HashSet<Monomial>,
    ord: TermOrder,
}

impl Frontier {
    pub(crate) fn new(nvars: usize, ord: TermOrder) -> Self {
        let one = Monomial::one(nvars);
        Frontier { pending: vec![(one.clone(), None)], seen: HashSet::from([one]), ord }
    }

    /// Remove and return the smallest pending monomial with its
    /// (normal-set index of parent, variable) pair.
    pub(crate) fn pop(&mut self) -> Option<(Monomial, Option<(usize, usize)>)> {
        let ord = self.ord;
        let (i, _) = self.pending.iter().enumerate().min_by(|a, b| ord.cmp(&a.1 .0, &b.1 .0))?;
        Some(self.pending.swap_remove(i))
    }

    /// Queue `x_i * t` for every variable, `t` being normal monomial `idx`.
    pub(crate) fn expand(&mut self, t: &Monomial, idx: usize) {
        for i in 0..t.nvars() {
            let child = t.mul_var(i);
            if self.seen.insert(child.clone()) {
                self.pending.push((child, Some((idx, i))));
            }
        }
    }
}

/// One reduced row: `v` has a 1 at `pivot` and equals the evaluation of the
/// combination `comb` of normal monomials.
struct Row {
    v: Vec<Rational>,
    comb: Vec<Rational>,
    pivot: usize,
}

fn digits(r: &Rational) -> u64 {
    r.numer().bits() + r.denom().bits()
}

/// Reduced Groebner basis of the ideal of polynomials vanishing on `s`.
pub fn buchberger_moeller(s: &PointSet, ord: TermOrder) -> Result<VanishingIdealBasis, VanishingError> {
    if s.is_empty() {
        return Err(VanishingError::EmptyPointSet);
    }
    let ring = s.ring();
    let m = s.len();
    let mut frontier = Frontier::new(ring.nvars(), ord);
    let mut normal: Vec<Monomial> = Vec::new();
    let mut raw: Vec<Vec<Rational>> = Vec::new();
    let mut rows: Vec<Row> = Vec::new();
    let mut leads: Vec<Monomial> = Vec::new();
    let mut basis: Vec<Polynomial> = Vec::new();

    while let Some((t, parent)) = frontier.pop() {
        if leads.iter().any(|l| l.divides(&t)) {
            continue;
        }
        let vec_t: Vec<Rational> = match parent {
            None => vec![Rational::one(); m],
            Some((j, i)) => raw[j].iter().zip(s.points()).map(|(a, p)| a * &p[i]).collect(),
        };
        let mut v = vec_t.clone();
        let mut comb = vec![Rational::zero(); normal.len() + 1];
        for row in &rows {
            if v[row.pivot].is_zero() {
                continue;
            }
            let f = v[row.pivot].clone();
            for (a, b) in v.iter_mut().zip(&row.v) {
                if !b.is_zero() {
                    *a -= &f * b;
                }
            }
            for (a, b) in comb.iter_mut().zip(&row.comb) {
                if !b.is_zero() {
                    *a -= &f * b;
                }
            }
        }
        let idx = normal.len();
        let pivot = v.iter().enumerate().filter(|(_, a)| !a.is_zero()).min_by_key(|(_, a)| digits(a)).map(|(k, _)| k);
        match pivot {
            None => {
                comb.truncate(idx);
                let terms = normal.iter().cloned().zip(comb).chain(std::iter::once((t.clone(), Rational::one())));
                basis.push(Polynomial::from_terms(ring, terms));
                leads.push(t);
            }
            Some(pivot) => {
                comb[idx] = Rational::one();
                let inv = v[pivot].recip();
                v.iter_mut().for_each(|a| *a *= &inv);
                comb.iter_mut().for_each(|a| *a *= &inv);
                rows.push(Row { v, comb, pivot });
                raw.push(vec_t);
                frontier.expand(&t, idx);
                normal.push(t);
            }
        }
    }
    let min_degree = leads.iter().map(Monomial::degree).min().unwrap_or(0);
    Ok(VanishingIdealBasis { basis, normal_set: normal, min_degree })
}

/// Evaluate every element of `basis` at every point; true when all vanish.
pub fn vanishes_on(basis: &[Polynomial], s: &PointSet) -> bool {
    basis.iter().all(|g| s.points().iter().all(|p| g.evaluate(p).map(|v| v.is_zero()).unwrap_or(false)))
}

#[cfg(test)]
mod tests;
