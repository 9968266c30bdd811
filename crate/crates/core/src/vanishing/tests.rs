use num_bigint::BigInt;
use proptest::prelude::*;

use super::*;
use crate::frontend::parse_polynomial;
use crate::polyring::reduce;

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn pts(ring: &Arc<Ring>, raw: &[&[i64]]) -> PointSet {
    PointSet::new(ring, raw.iter().map(|p| p.iter().map(|&c| q(c)).collect())).unwrap()
}

/// (sum_{j<k} j^5, k) for k = 0..count.
fn example1_samples(count: i64) -> Vec<Point> {
    let mut x = BigInt::from(0);
    let mut out = Vec::new();
    for k in 0..count {
        out.push(vec![Rational::from_integer(x.clone()), q(k)]);
        x += BigInt::from(k).pow(5);
    }
    out
}

#[test]
fn single_point_gives_maximal_ideal() {
    let r = Ring::new(["x", "y"]);
    let b = buchberger_moeller(&pts(&r, &[&[3, 5]]), TermOrder::GradedLex).unwrap();
    let expect: Vec<Polynomial> = ["y - 5", "x - 3"].iter().map(|s| parse_polynomial(s, &r).unwrap()).collect();
    assert_eq!(b.basis, expect);
    assert_eq!(b.normal_set, [Monomial::one(2)]);
    assert_eq!(b.min_degree, 1);
}

#[test]
fn three_points_on_parabola() {
    let r = Ring::new(["x", "y"]);
    let s = pts(&r, &[&[0, 0], &[1, 1], &[2, 4]]);
    let b = buchberger_moeller(&s, TermOrder::GradedLex).unwrap();
    assert!(vanishes_on(&b.basis, &s));
    assert_eq!(b.normal_set.len(), 3);
    let f = parse_polynomial("x^2 - y", &r).unwrap();
    assert!(reduce(&f, &b.basis, TermOrder::GradedLex).unwrap().is_zero());
}

#[test]
fn example1_ideal_has_six_elements_and_the_invariant() {
    let r = Ring::new(["x", "y"]);
    let s = PointSet::new(&r, example1_samples(36)).unwrap();
    assert!(s.points().contains(&vec![q(33), q(3)]));
    let b = buchberger_moeller(&s, TermOrder::GradedLex).unwrap();
    assert_eq!(b.basis.len(), 6);
    assert_eq!(b.min_degree, 6);
    let eta = parse_polynomial("-12*x + 2*y^6 - 6*y^5 + 5*y^4 - y^2", &r).unwrap();
    let monic = eta.make_monic(TermOrder::GradedLex).unwrap();
    assert!(b.basis.contains(&monic));
    let degrees: Vec<u32> = b.basis.iter().map(|g| g.total_degree().unwrap()).collect();
    assert_eq!(degrees, [6, 8, 8, 8, 9, 9]);

    let modular = modular_vanishing_ideal(&s, TermOrder::GradedLex, 7).unwrap();
    assert_eq!(modular.leading_monomials, b.leading_monomials(TermOrder::GradedLex));
    assert_eq!(modular.low_basis, [monic]);
    assert_eq!(modular.min_degree, 6);
    assert_eq!(modular.normal_set, b.normal_set);
}

#[test]
fn duplicates_removed_and_errors() {
    let r = Ring::new(["x"]);
    let s = pts(&r, &[&[1], &[2], &[1]]);
    assert_eq!(s.len(), 2);
    let empty = PointSet::new(&r, Vec::<Point>::new()).unwrap();
    assert_eq!(buchberger_moeller(&empty, TermOrder::GradedLex), Err(VanishingError::EmptyPointSet));
    assert_eq!(
        PointSet::new(&r, [vec![q(1), q(2)]]).unwrap_err(),
        VanishingError::DimensionMismatch { expected: 1, got: 2 }
    );
    let b = buchberger_moeller(&s, TermOrder::GradedLex).unwrap();
    assert_eq!(b.basis, [parse_polynomial("x^2 - 3*x + 2", &r).unwrap()]);
}

#[test]
fn lex_order_gives_shape_basis() {
    let r = Ring::new(["x", "y"]);
    let s = pts(&r, &[&[0, 0], &[1, 1], &[2, 4]]);
    let b = buchberger_moeller(&s, TermOrder::Lex).unwrap();
    assert!(vanishes_on(&b.basis, &s));
    let lms = b.leading_monomials(TermOrder::Lex);
    // y is the smallest variable, so the basis is {univariate in y, x - f(y)}
    assert_eq!(lms, [Monomial::new(vec![0, 3]), Monomial::new(vec![1, 0])]);
}

// property suite: small random point sets

fn arb_points(max_n: usize, max_pts: usize) -> impl Strategy<Value = (usize, Vec<Vec<(i64, i64)>>)> {
    (1..=max_n).prop_flat_map(move |n| {
        (Just(n), prop::collection::vec(prop::collection::vec((-3i64..=3, 1i64..=2), n), 1..=max_pts))
    })
}

fn to_set(n: usize, raw: Vec<Vec<(i64, i64)>>) -> PointSet {
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let r = Ring::new(names);
    PointSet::new(&r, raw.into_iter().map(|p| p.into_iter().map(|(a, b)| Rational::new(a.into(), b.into())).collect()))
        .unwrap()
}

fn arb_mult() -> impl Strategy<Value = Vec<(Vec<u32>, i64, i64)>> {
    prop::collection::vec((prop::collection::vec(0u32..=2, 3), -9i64..=9, 1i64..=4), 0..=3)
}

/// Vanishing, dimension and reduced-basis structure.
fn check_basis(s: &PointSet, b: &VanishingIdealBasis) -> Result<(), String> {
    let ord = TermOrder::GradedLex;
    if !vanishes_on(&b.basis, s) {
        return Err("basis element does not vanish".into());
    }
    if b.normal_set.len() != s.len() {
        return Err(format!("normal set {} vs {} points", b.normal_set.len(), s.len()));
    }
    let lms = b.leading_monomials(ord);
    for (i, g) in b.basis.iter().enumerate() {
        if !g.leading_coefficient(ord).unwrap().is_one() {
            return Err("basis element not monic".into());
        }
        for (j, l) in lms.iter().enumerate() {
            if i != j && g.support().any(|m| l.divides(m)) {
                return Err("basis not reduced".into());
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn basis_properties((n, raw) in arb_points(3, 10)) {
        let s = to_set(n, raw);
        let b = buchberger_moeller(&s, TermOrder::GradedLex).unwrap();
        if let Err(e) = check_basis(&s, &b) {
            return Err(TestCaseError::fail(e));
        }
    }

    #[test]
    fn membership_oracle((n, raw) in arb_points(3, 8), mults in prop::collection::vec(arb_mult(), 1..4)) {
        let s = to_set(n, raw);
        let r = s.ring().clone();
        let ord = TermOrder::GradedLex;
        let b = buchberger_moeller(&s, ord).unwrap();
        let mut f = Polynomial::zero(&r);
        for (g, h) in b.basis.iter().zip(mults) {
            let h = Polynomial::from_terms(&r, h.into_iter().map(|(e, a, d)| {
                let mut e = e;
                e.resize(n, 0);
                (Monomial::new(e), Rational::new(a.into(), d.into()))
            }));
            f = &f + &(&h * g);
        }
        prop_assert!(reduce(&f, &b.basis, ord).unwrap().is_zero());
        // shift by 1 so f is non-zero at every point
        let g = &f + &Polynomial::one(&r);
        prop_assert!(!reduce(&g, &b.basis, ord).unwrap().is_zero());
    }

    #[test]
    fn modular_matches_exact((n, raw) in arb_points(3, 12), bound in 1u32..4) {
        let s = to_set(n, raw);
        let exact = buchberger_moeller(&s, TermOrder::GradedLex).unwrap();
        let m = modular_vanishing_ideal(&s, TermOrder::GradedLex, bound).unwrap();
        prop_assert_eq!(&m.leading_monomials, &exact.leading_monomials(TermOrder::GradedLex));
        prop_assert_eq!(&m.normal_set, &exact.normal_set);
        let low: Vec<Polynomial> = exact.basis.iter().filter(|g| g.total_degree().unwrap() <= bound).cloned().collect();
        prop_assert_eq!(m.low_basis, low);
        prop_assert_eq!(m.min_degree, exact.min_degree);
    }
}
