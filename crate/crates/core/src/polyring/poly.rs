use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{same_ring, Monomial, PolyError, Rational, Ring, TermOrder};

/// Sparse polynomial in canonical form: no stored coefficient is zero.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    ring: Arc<Ring>,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Polynomial { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn constant(ring: &Arc<Ring>, c: Rational) -> Self {
        Self::term(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn term(ring: &Arc<Ring>, m: Monomial, c: Rational) -> Self {
        debug_assert_eq!(m.nvars(), ring.nvars());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { ring: ring.clone(), terms }
    }

    /// The variable `x_i`.
    pub fn var(ring: &Arc<Ring>, i: usize) -> Self {
        Self::term(ring, Monomial::var(ring.nvars(), i), Rational::one())
    }

    /// Build from (monomial, coefficient) pairs; like terms are combined.
    pub fn from_terms(ring: &Arc<Ring>, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), ring.nvars());
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Terms sorted descending under `ord`.
    pub fn terms_desc(&self, ord: TermOrder) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| ord.cmp(b.0, a.0));
        v
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    /// Total degree; `None` stands for the degree of the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn leading_term(&self, ord: TermOrder) -> Result<(&Monomial, &Rational), PolyError> {
        let lt = match ord {
            TermOrder::GradedLex => self.terms.iter().next_back(),
            _ => self.terms.iter().max_by(|a, b| ord.cmp(a.0, b.0)),
        };
        lt.ok_or(PolyError::ZeroPolynomial)
    }

    pub fn leading_monomial(&self, ord: TermOrder) -> Result<&Monomial, PolyError> {
        Ok(self.leading_term(ord)?.0)
    }

    pub fn leading_coefficient(&self, ord: TermOrder) -> Result<&Rational, PolyError> {
        Ok(self.leading_term(ord)?.1)
    }

    /// Smallest monomial of the support under `ord`.
    pub fn trailing_monomial(&self, ord: TermOrder) -> Result<&Monomial, PolyError> {
        let t = match ord {
            TermOrder::GradedLex => self.terms.keys().next(),
            _ => self.terms.keys().min_by(|a, b| ord.cmp(a, b)),
        };
        t.ok_or(PolyError::ZeroPolynomial)
    }

    pub fn make_monic(&self, ord: TermOrder) -> Result<Polynomial, PolyError> {
        let lc = self.leading_coefficient(ord)?.clone();
        Ok(self.scale(&lc.recip()))
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn negate(&self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), -a)).collect(),
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c * m * g`.
    pub(crate) fn add_scaled_shifted(&mut self, c: &Rational, m: &Monomial, g: &Polynomial) {
        for (gm, gc) in &g.terms {
            self.add_term(gm.mul(m), c * gc);
        }
    }

    pub(crate) fn remove_term(&mut self, m: &Monomial) -> Option<Rational> {
        self.terms.remove(m)
    }

    fn check_ring(&self, other: &Polynomial) -> Result<(), PolyError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(PolyError::RingMismatch)
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            out.add_scaled_shifted(c, m, other);
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        let n = self.ring.nvars();
        if point.len() != n {
            return Err(PolyError::DimensionMismatch { expected: n, got: point.len() });
        }
        let mut powers = PowerCache::new(point.to_vec(), Rational::one());
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= powers.get(i, e, |a, b| a * b);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Compose with `x_i -> images[i]`; every image lives in `target`.
    pub fn substitute(&self, target: &Arc<Ring>, images: &[Polynomial]) -> Result<Polynomial, PolyError> {
        let n = self.ring.nvars();
        if images.len() != n {
            return Err(PolyError::DimensionMismatch { expected: n, got: images.len() });
        }
        if images.iter().any(|p| !same_ring(p.ring(), target)) {
            return Err(PolyError::RingMismatch);
        }
        let mut powers = PowerCache::new(images.to_vec(), Polynomial::one(target));
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = &t * &powers.get(i, e, |a, b| a * b);
                }
            }
            for (tm, tc) in t.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    /// Like [`substitute`](Self::substitute) but keyed by variable name.
    /// Variables of `self`'s ring that do not occur in `self` need no image.
    pub fn substitute_map(
        &self,
        target: &Arc<Ring>,
        map: &std::collections::HashMap<String, Polynomial>,
    ) -> Result<Polynomial, PolyError> {
        let used = self.used_variables();
        let images = self
            .ring
            .names()
            .iter()
            .enumerate()
            .map(|(i, name)| match map.get(name) {
                Some(p) => Ok(p.clone()),
                None if !used[i] => Ok(Polynomial::zero(target)),
                None => Err(PolyError::MissingImage(name.clone())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.substitute(target, &images)
    }

    pub fn used_variables(&self) -> Vec<bool> {
        let mut used = vec![false; self.ring.nvars()];
        for m in self.terms.keys() {
            for (i, &e) in m.exponents().iter().enumerate() {
                used[i] |= e > 0;
            }
        }
        used
    }

    /// Re-express in `target`, sending variable `i` to `target` variable `map[i]`.
    pub fn embed(&self, target: &Arc<Ring>, map: &[usize]) -> Polynomial {
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.nvars()];
            for (i, &x) in m.exponents().iter().enumerate() {
                e[map[i]] += x;
            }
            out.add_term(Monomial::new(e), c.clone());
        }
        out
    }

    /// Scale to integer coefficients with gcd 1 and a positive leading
    /// coefficient under `ord`.
    pub fn primitive(&self, ord: TermOrder) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let den_lcm = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num_gcd = self
            .terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(&(c.numer() * (&den_lcm / c.denom()))));
        let mut factor = Rational::new(den_lcm, num_gcd);
        if self.leading_coefficient(ord).map(|c| c.is_negative()).unwrap_or(false) {
            factor = -factor;
        }
        self.scale(&factor)
    }
}

/// Lazily computed powers `base[i]^e`.
struct PowerCache<T> {
    powers: Vec<Vec<T>>,
}

impl<T: Clone> PowerCache<T> {
    fn new(bases: Vec<T>, one: T) -> Self {
        PowerCache { powers: bases.into_iter().map(|b| vec![one.clone(), b]).collect() }
    }

    fn get(&mut self, i: usize, e: u32, mul: impl Fn(&T, &T) -> T) -> T {
        let row = &mut self.powers[i];
        while row.len() <= e as usize {
            let next = mul(row.last().unwrap(), &row[1]);
            row.push(next);
        }
        row[e as usize].clone()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomial ring mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomial ring mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomial ring mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.negate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_polynomial;
    use proptest::prelude::*;

    fn xy() -> Arc<Ring> {
        Ring::new(["x", "y"])
    }

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn additive_inverse() {
        let r = xy();
        let f = parse_polynomial("3*x^2 - 1/2*y + 7", &r).unwrap();
        assert!((&f + &f.negate()).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let r = xy();
        let f = parse_polynomial("x + y", &r).unwrap();
        let g = parse_polynomial("x - y", &r).unwrap();
        assert_eq!(&f * &g, parse_polynomial("x^2 - y^2", &r).unwrap());
    }

    #[test]
    fn multiplicative_identity() {
        let r = xy();
        let f = parse_polynomial("-12*x + 2*y^6 - 6*y^5 + 5*y^4 - y^2", &r).unwrap();
        assert_eq!(&f * &Polynomial::one(&r), f);
    }

    #[test]
    fn sum_of_fifth_powers_invariant_vanishes_at_sample() {
        let r = xy();
        let f = parse_polynomial("-12*x + 2*y^6 - 6*y^5 + 5*y^4 - y^2", &r).unwrap();
        assert_eq!(f.evaluate(&[q(33), q(3)]).unwrap(), q(0));
        assert_eq!(Polynomial::zero(&r).evaluate(&[q(4), q(-9)]).unwrap(), q(0));
        assert!(matches!(
            f.evaluate(&[q(1)]),
            Err(PolyError::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn example2_invariant_at_initial_state() {
        let r = Ring::new(["x", "r", "a"]);
        let f = parse_polynomial("2*x + r^2 - r - a", &r).unwrap();
        assert_eq!(f.evaluate(&[q(5), q(0), q(10)]).unwrap(), q(0));
    }

    #[test]
    fn substitute_examples() {
        let r = xy();
        let z = Ring::new(["Z"]);
        let f = parse_polynomial("x + y", &r).unwrap();
        let img = [parse_polynomial("Z", &z).unwrap(), parse_polynomial("3*Z - 1", &z).unwrap()];
        assert_eq!(f.substitute(&z, &img).unwrap(), parse_polynomial("4*Z - 1", &z).unwrap());

        let x = parse_polynomial("x", &r).unwrap();
        let upd = [parse_polynomial("x + y^5", &r).unwrap(), parse_polynomial("y + 1", &r).unwrap()];
        assert_eq!(x.substitute(&r, &upd).unwrap(), upd[0]);

        let g = parse_polynomial("x^3*y - 2*y^2 + 1/3", &r).unwrap();
        let id = [Polynomial::var(&r, 0), Polynomial::var(&r, 1)];
        assert_eq!(g.substitute(&r, &id).unwrap(), g);
    }

    #[test]
    fn substitute_map_missing_image() {
        let r = xy();
        let f = parse_polynomial("x + y", &r).unwrap();
        let mut map = std::collections::HashMap::new();
        map.insert("x".to_string(), Polynomial::var(&r, 1));
        assert_eq!(f.substitute_map(&r, &map), Err(PolyError::MissingImage("y".into())));
        let g = parse_polynomial("x^2", &r).unwrap();
        assert_eq!(g.substitute_map(&r, &map).unwrap(), parse_polynomial("y^2", &r).unwrap());
    }

    #[test]
    fn degree_and_leading_terms() {
        let r = xy();
        let f = parse_polynomial("-12*x + 2*y^6 - 6*y^5 + 5*y^4 - y^2", &r).unwrap();
        assert_eq!(f.total_degree(), Some(6));
        assert_eq!(Polynomial::zero(&r).total_degree(), None);
        let g = parse_polynomial("x^2*y + x*y^2", &r).unwrap();
        assert_eq!(g.leading_monomial(TermOrder::GradedLex).unwrap(), &Monomial::new(vec![2, 1]));
        let h = parse_polynomial("3*x + 6", &r).unwrap();
        for ord in [TermOrder::GradedLex, TermOrder::Lex] {
            assert_eq!(h.make_monic(ord).unwrap(), parse_polynomial("x + 2", &r).unwrap());
        }
        assert_eq!(Polynomial::zero(&r).make_monic(TermOrder::GradedLex), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn ring_mismatch() {
        let f = Polynomial::var(&xy(), 0);
        let g = Polynomial::var(&Ring::new(["u"]), 0);
        assert_eq!(f.checked_add(&g), Err(PolyError::RingMismatch));
        assert_eq!(f.checked_mul(&g), Err(PolyError::RingMismatch));
    }

    #[test]
    fn primitive_clears_content_and_sign() {
        let r = xy();
        let f = parse_polynomial("-1/2*y^2 + 3/4*x - 1", &r).unwrap();
        assert_eq!(f.primitive(TermOrder::GradedLex), parse_polynomial("2*y^2 - 3*x + 4", &r).unwrap());
    }

    pub(crate) fn arb_poly(nvars: usize, max_terms: usize, max_deg: u32) -> impl Strategy<Value = Vec<(Vec<u32>, i64, i64)>> {
        prop::collection::vec(
            (prop::collection::vec(0..=max_deg, nvars), -9i64..=9, 1i64..=4),
            0..=max_terms,
        )
    }

    fn build(ring: &Arc<Ring>, t: Vec<(Vec<u32>, i64, i64)>) -> Polynomial {
        Polynomial::from_terms(
            ring,
            t.into_iter().map(|(e, n, d)| (Monomial::new(e), Rational::new(n.into(), d.into()))),
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]
        #[test]
        fn ring_axioms(a in arb_poly(3, 5, 3), b in arb_poly(3, 5, 3), c in arb_poly(3, 5, 3)) {
            let r = Ring::new(["x", "y", "z"]);
            let (a, b, c) = (build(&r, a), build(&r, b), build(&r, c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            for (_, coef) in (&a * &b).terms() {
                prop_assert!(!coef.is_zero());
                prop_assert!(coef.denom().is_positive());
                prop_assert!(coef.numer().gcd(coef.denom()).is_one());
            }
        }

        #[test]
        fn substitute_commutes_with_evaluate(
            f in arb_poly(2, 5, 3),
            s0 in arb_poly(3, 3, 2),
            s1 in arb_poly(3, 3, 2),
            p in prop::collection::vec((-5i64..5, 1i64..4), 3),
        ) {
            let r = xy();
            let t = Ring::new(["u", "v", "w"]);
            let f = build(&r, f);
            let imgs = [build(&t, s0), build(&t, s1)];
            let pt: Vec<Rational> = p.into_iter().map(|(n, d)| Rational::new(n.into(), d.into())).collect();
            let lhs = f.substitute(&t, &imgs).unwrap().evaluate(&pt).unwrap();
            let inner: Vec<Rational> = imgs.iter().map(|g| g.evaluate(&pt).unwrap()).collect();
            prop_assert_eq!(lhs, f.evaluate(&inner).unwrap());
        }
    }
}
