//! Nullspaces over Q: exact Gauss-Jordan elimination, and a multi-modular
//! route for one-dimensional kernels whose exact elimination would suffer
//! coefficient growth.

use std::ops::Range;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::polyring::Rational;
use crate::vanishing::modp::{self, crt, rational_reconstruct};

const MAX_PRIMES: usize = 64;

/// A basis of `{v : A v = 0}` for the `rows x ncols` matrix `a`, one vector
/// per free column, in increasing free-column order.
pub(crate) fn nullspace(mut a: Vec<Vec<Rational>>, ncols: usize) -> Vec<Vec<Rational>> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        let Some(k) = (r..a.len()).find(|&k| !a[k][c].is_zero()) else {
            continue;
        };
        a.swap(r, k);
        let inv = a[r][c].recip();
        for x in a[r][c..].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (k, row) in a.iter_mut().enumerate() {
            if k == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut basis = Vec::new();
    let mut is_pivot = vec![false; ncols];
    pivots.iter().for_each(|&c| is_pivot[c] = true);
    for f in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rational::zero(); ncols];
        v[f] = Rational::one();
        for (row, &c) in pivots.iter().enumerate() {
            v[c] = -a[row][f].clone();
        }
        basis.push(v);
    }
    basis
}

/// Nullspace basis of a matrix over Z/pZ, same layout as [`nullspace`].
pub(crate) fn nullspace_mod(mut a: Vec<Vec<u64>>, ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        let Some(k) = (r..a.len()).find(|&k| a[k][c] != 0) else {
            continue;
        };
        a.swap(r, k);
        let inv = modp::inv(a[r][c], p);
        for x in a[r][c..].iter_mut() {
            *x = modp::mul(*x, inv, p);
        }
        let pivot_row = a[r].clone();
        for (k, row) in a.iter_mut().enumerate() {
            if k == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if y != 0 {
                    *x = modp::sub(*x, modp::mul(f, y, p), p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut is_pivot = vec![false; ncols];
    pivots.iter().for_each(|&c| is_pivot[c] = true);
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|f| {
            let mut v = vec![0u64; ncols];
            v[f] = 1;
            for (row, &c) in pivots.iter().enumerate() {
                v[c] = modp::sub(0, a[row][f], p);
            }
            v
        })
        .collect()
}

/// A kernel vector with a non-zero coordinate in `focus`, or `None` when
/// there is none.
///
/// `rows_mod(p)` gives the matrix modulo `p` (or `None` if `p` divides a
/// denominator), `exact_rows` the matrix over Q, and `satisfies` checks a
/// candidate exactly. One-dimensional kernels are lifted by Chinese
/// remaindering and rational reconstruction, normalized at the first
/// non-zero `focus` coordinate; anything else falls back to exact
/// elimination.
pub(crate) fn kernel_vector(
    ncols: usize,
    focus: Range<usize>,
    rows_mod: impl Fn(u64) -> Option<Vec<Vec<u64>>>,
    exact_rows: impl FnOnce() -> Vec<Vec<Rational>>,
    satisfies: impl Fn(&[Rational]) -> bool,
) -> Option<Vec<Rational>> {
    let mut anchor: Option<usize> = None;
    let mut residues: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    let mut last: Option<Vec<Rational>> = None;
    let mut odd = 0;
    for p in modp::primes().take(MAX_PRIMES) {
        let Some(a) = rows_mod(p) else { continue };
        let ns = nullspace_mod(a, ncols, p);
        if ns.is_empty() {
            // rank can only drop modulo p, so the kernel over Q is trivial
            return None;
        }
        let idx = (ns.len() == 1).then(|| focus.clone().find(|&i| ns[0][i] != 0)).flatten();
        let Some(idx) = idx else {
            odd += 1;
            if odd == 3 {
                break;
            }
            continue;
        };
        let scale = modp::inv(ns[0][idx], p);
        let v: Vec<u64> = ns[0].iter().map(|&x| modp::mul(x, scale, p)).collect();
        if anchor != Some(idx) {
            anchor = Some(idx);
            residues = vec![BigInt::zero(); ncols];
            modulus = BigInt::one();
            last = None;
        }
        let mut next = BigInt::one();
        for (r, &x) in residues.iter_mut().zip(&v) {
            let (y, m) = crt(r, &modulus, x, p);
            *r = y;
            next = m;
        }
        modulus = next;
        let recon: Option<Vec<Rational>> = residues.iter().map(|r| rational_reconstruct(r, &modulus)).collect();
        if recon.is_some() && recon == last && satisfies(recon.as_ref().unwrap()) {
            return recon;
        }
        last = recon;
    }
    nullspace(exact_rows(), ncols).into_iter().find(|v| v[focus.clone()].iter().any(|x| !x.is_zero()))
}
