//! Multi-modular Buchberger-Moeller.
//!
//! The elimination runs over several word-sized primes. Runs are compared
//! decision by decision: at the first monomial where two runs disagree, the
//! run that accepted the monomial into the normal set is the trustworthy
//! one, since reduction modulo p can only lose rank. Basis elements up to a
//! degree bound are lifted by Chinese remaindering and rational
//! reconstruction, then checked exactly on every point over Q.
//!
//! Under a degree-compatible order every monomial of degree <= bound is
//! decided before any larger one, and a verified element certifies its own
//! decision, so the low-degree part of the result is exact. Leading
//! monomials above the bound come from the best modular run.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::modp::{self, crt, rational_mod, rational_reconstruct};
use super::{Frontier, PointSet, VanishingError};
use crate::polyring::{Monomial, Polynomial, Rational, TermOrder};

const MAX_PRIMES: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularIdeal {
    /// Leading monomials of the whole reduced basis, in increasing order.
    pub leading_monomials: Vec<Monomial>,
    pub normal_set: Vec<Monomial>,
    /// Exact reduced-basis elements whose total degree is at most the bound.
    pub low_basis: Vec<Polynomial>,
    pub min_degree: u32,
    pub primes_used: usize,
}

impl ModularIdeal {
    pub fn basis_size(&self) -> usize {
        self.leading_monomials.len()
    }
}

struct Run {
    decisions: Vec<bool>,
    normal: Vec<Monomial>,
    /// Leading monomial and its normal-form coefficients (indexed like `normal`).
    elements: Vec<(Monomial, Vec<u64>)>,
}

struct Row {
    v: Vec<u64>,
    comb: Vec<u64>,
    pivot: usize,
}

fn bm_mod(points: &[Vec<u64>], nvars: usize, p: u64, ord: TermOrder) -> Run {
    let m = points.len();
    let mut frontier = Frontier::new(nvars, ord);
    let mut run = Run { decisions: Vec::new(), normal: Vec::new(), elements: Vec::new() };
    let mut raw: Vec<Vec<u64>> = Vec::new();
    let mut rows: Vec<Row> = Vec::new();
    while let Some((t, parent)) = frontier.pop() {
        if run.elements.iter().any(|(l, _)| l.divides(&t)) {
            continue;
        }
        let vec_t: Vec<u64> = match parent {
            None => vec![1; m],
            Some((j, i)) => raw[j].iter().zip(points).map(|(&a, pt)| modp::mul(a, pt[i], p)).collect(),
        };
        let mut v = vec_t.clone();
        let idx = run.normal.len();
        let mut comb = vec![0u64; idx + 1];
        for row in &rows {
            let f = v[row.pivot];
            if f == 0 {
                continue;
            }
            for (a, &b) in v.iter_mut().zip(&row.v) {
                if b != 0 {
                    *a = modp::sub(*a, modp::mul(f, b, p), p);
                }
            }
            for (a, &b) in comb.iter_mut().zip(&row.comb) {
                if b != 0 {
                    *a = modp::sub(*a, modp::mul(f, b, p), p);
                }
            }
        }
        match v.iter().position(|&a| a != 0) {
            None => {
                comb.truncate(idx);
                run.decisions.push(false);
                run.elements.push((t, comb));
            }
            Some(pivot) => {
                comb[idx] = 1;
                let inv = modp::inv(v[pivot], p);
                v.iter_mut().for_each(|a| *a = modp::mul(*a, inv, p));
                comb.iter_mut().for_each(|a| *a = modp::mul(*a, inv, p));
                rows.push(Row { v, comb, pivot });
                raw.push(vec_t);
                run.decisions.push(true);
                frontier.expand(&t, idx);
                run.normal.push(t);
            }
        }
    }
    run
}

/// Lexicographic on decisions with "normal" above "basis element".
fn compare(a: &Run, b: &Run) -> Ordering {
    a.decisions.cmp(&b.decisions)
}

/// Per-element lifting state: CRT residues and the last reconstruction.
struct Lift {
    lead: Monomial,
    residues: Vec<BigInt>,
    modulus: BigInt,
    last: Option<Vec<Rational>>,
    done: Option<Polynomial>,
}

/// Vanishing ideal of `s` with exact basis elements up to `degree_bound`.
pub fn modular_vanishing_ideal(s: &PointSet, ord: TermOrder, degree_bound: u32) -> Result<ModularIdeal, VanishingError> {
    if s.is_empty() {
        return Err(VanishingError::EmptyPointSet);
    }
    let ring = s.ring();
    let n = ring.nvars();
    let mut best: Option<Run> = None;
    let mut lifts: Vec<Lift> = Vec::new();
    let mut used = 0;
    for p in modp::primes().take(MAX_PRIMES) {
        used += 1;
        let Some(points) = s
            .points()
            .iter()
            .map(|pt| pt.iter().map(|c| rational_mod(c, p)).collect::<Option<Vec<u64>>>())
            .collect::<Option<Vec<_>>>()
        else {
            continue;
        };
        let run = bm_mod(&points, n, p, ord);
        let restart = match &best {
            None => true,
            Some(b) => match compare(&run, b) {
                Ordering::Greater => true,
                Ordering::Less => continue,
                Ordering::Equal => false,
            },
        };
        if restart {
            lifts = run
                .elements
                .iter()
                .filter(|(t, _)| t.degree() <= degree_bound)
                .map(|(t, c)| Lift {
                    lead: t.clone(),
                    residues: vec![BigInt::zero(); c.len()],
                    modulus: BigInt::one(),
                    last: None,
                    done: None,
                })
                .collect();
        }
        // a lucky run separates every point
        let complete = run.normal.len() == s.len();
        let mut pending = false;
        for lift in lifts.iter_mut().filter(|l| l.done.is_none()) {
            let (_, comb) = run.elements.iter().find(|(t, _)| *t == lift.lead).unwrap();
            let mut modulus = lift.modulus.clone();
            for (r, &c) in lift.residues.iter_mut().zip(comb) {
                let (x, m) = crt(r, &lift.modulus, c, p);
                *r = x;
                modulus = m;
            }
            lift.modulus = modulus;
            let recon: Option<Vec<Rational>> =
                lift.residues.iter().map(|r| rational_reconstruct(r, &lift.modulus)).collect();
            if complete && recon.is_some() && recon == lift.last {
                let coeffs = recon.clone().unwrap();
                let terms = run
                    .normal
                    .iter()
                    .cloned()
                    .zip(coeffs)
                    .chain(std::iter::once((lift.lead.clone(), Rational::one())));
                let g = Polynomial::from_terms(ring, terms);
                if super::vanishes_on(std::slice::from_ref(&g), s) {
                    lift.done = Some(g);
                }
            }
            lift.last = recon;
            pending |= lift.done.is_none();
        }
        best = Some(run);
        if complete && !pending {
            let run = best.unwrap();
            let leading_monomials: Vec<Monomial> = run.elements.iter().map(|(t, _)| t.clone()).collect();
            let min_degree = leading_monomials.iter().map(Monomial::degree).min().unwrap_or(0);
            return Ok(ModularIdeal {
                leading_monomials,
                normal_set: run.normal,
                low_basis: lifts.into_iter().map(|l| l.done.unwrap()).collect(),
                min_degree,
                primes_used: used,
            });
        }
    }
    Err(VanishingError::ReconstructionFailed(used))
}
