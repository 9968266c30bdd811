use proptest::prelude::*;

use super::*;
use crate::frontend::parse_polynomial;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn poly(s: &str, r: &Arc<Ring>) -> Polynomial {
    parse_polynomial(s, r).unwrap()
}

fn rf(n: &str, d: &str, r: &Arc<Ring>) -> RationalFunction {
    RationalFunction::new(poly(n, r), poly(d, r)).unwrap()
}

#[test]
fn constant_black_box() {
    let r = Ring::new(["a", "b"]);
    let mut bb = |_: &[Rational]| Some(q(-2, 1));
    let f = interpolate_rational(&mut bb, &r, &InterpConfig::default(), &ParamSampler::new(0, 2)).unwrap();
    assert_eq!(f, RationalFunction::constant(&r, q(-2, 1)));
    assert_eq!(f.to_string(), "-2");
}

#[test]
fn quotient_of_parameters_on_fixed_box() {
    let r = Ring::new(["u1", "u2"]);
    let mut calls = 0;
    let mut bb = |u: &[Rational]| {
        calls += 1;
        Some(&u[0] / &u[1])
    };
    let cfg = InterpConfig { num_degrees: Some(vec![1, 1]), den_degrees: Some(vec![1, 1]), ..Default::default() };
    let sampler = ParamSampler::new(5, 2);
    let f = interpolate_rational(&mut bb, &r, &cfg, &sampler).unwrap();
    assert_eq!(f, rf("u1", "u2", &r));
    // 3x3 grid plus three fresh points, all checked by direct evaluation
    let grid = [q(1, 1), q(2, 1), q(3, 1)];
    for a in &grid {
        for b in &grid {
            assert_eq!(f.evaluate(&[a.clone(), b.clone()]).unwrap(), a / b);
        }
    }
    for i in 0..3 {
        let u = sampler.point(Stream::Check, i);
        assert_eq!(f.evaluate(&u).unwrap(), &u[0] / &u[1]);
    }
    assert_eq!(calls, 9 + 3);
}

#[test]
fn example3_coefficient_shape() {
    // the normalized xu coefficient of Example 3 is -1/(2ab)
    let r = Ring::new(["a", "b"]);
    let mut bb = |u: &[Rational]| Some(-(q(1, 1) / (q(2, 1) * &u[0] * &u[1])));
    let f = interpolate_rational(&mut bb, &r, &InterpConfig::default(), &ParamSampler::new(1, 2)).unwrap();
    assert_eq!(f, rf("-1/2", "a*b", &r));
    assert_eq!(f.evaluate(&[q(93, 122), q(301, 992)]).unwrap(), q(-1952, 903));
}

#[test]
fn high_degree_denominator_is_probed() {
    let r = Ring::new(["a", "b"]);
    let den = poly("b^9 - 3*b^4 + a*b - 7", &r);
    let mut bb = |u: &[Rational]| {
        let d = den.evaluate(u).unwrap();
        (!d.is_zero()).then(|| (&u[0] + q(1, 1)) / d)
    };
    let f = interpolate_rational(&mut bb, &r, &InterpConfig::default(), &ParamSampler::new(2, 2)).unwrap();
    assert_eq!(f, rf("a + 1", "b^9 - 3*b^4 + a*b - 7", &r));
}

#[test]
fn underestimated_bounds_escalate() {
    let r = Ring::new(["a"]);
    let mut bb = |u: &[Rational]| Some(num_traits::pow(u[0].clone(), 3) - q(1, 1));
    let cfg = InterpConfig { num_degrees: Some(vec![1]), den_degrees: Some(vec![0]), ..Default::default() };
    let f = interpolate_rational(&mut bb, &r, &cfg, &ParamSampler::new(3, 1)).unwrap();
    assert_eq!(f, rf("a^3 - 1", "1", &r));

    let cfg = InterpConfig { degree_cap: 2, ..cfg };
    let err = interpolate_rational(&mut bb, &r, &cfg, &ParamSampler::new(3, 1)).unwrap_err();
    assert_eq!(err, InterpError::BoundCapExceeded { cap: 2 });
}

#[test]
fn failing_black_box_is_reported() {
    let r = Ring::new(["a"]);
    let mut bb = |_: &[Rational]| None;
    let err = interpolate_rational(&mut bb, &r, &InterpConfig::default(), &ParamSampler::new(0, 1)).unwrap_err();
    assert!(matches!(err, InterpError::TooManyFailures { .. }));
    let bad = InterpConfig { num_degrees: Some(vec![1, 2]), den_degrees: Some(vec![0]), ..Default::default() };
    let mut ok = |_: &[Rational]| Some(q(1, 1));
    assert_eq!(
        interpolate_rational(&mut ok, &r, &bad, &ParamSampler::new(0, 1)).unwrap_err(),
        InterpError::BoundLength { expected: 1, got: 2 }
    );
}

#[test]
fn rational_function_normalization() {
    let r = Ring::new(["a", "b"]);
    let f = rf("4", "2*a*b", &r);
    assert_eq!(f.numerator(), &poly("2", &r));
    assert_eq!(f.denominator(), &poly("a*b", &r));
    assert_eq!(f.to_string(), "(2)/(a*b)");
    assert_eq!(f.evaluate(&[q(0, 1), q(1, 1)]), None);
    assert_eq!(RationalFunction::new(poly("a", &r), Polynomial::zero(&r)), Err(InterpError::ZeroDenominator));
    assert_eq!(rf("0", "a", &r).denominator(), &Polynomial::one(&r));
}

#[test]
fn clear_denominators_example3() {
    let combined = Ring::new(["x", "y", "u", "v", "a", "b"]);
    let params = Ring::new(["a", "b"]);
    let template: Vec<Monomial> =
        [vec![0, 0, 0, 0], vec![1, 0, 1, 0], vec![0, 1, 0, 1]].into_iter().map(Monomial::new).collect();
    let c = rf("-1", "2*a*b", &params);
    let coeffs = vec![RationalFunction::constant(&params, q(1, 1)), c.clone(), c];
    let p = clear_denominators(&template, &coeffs, &combined);
    assert_eq!(p, poly("x*u + y*v - 2*a*b", &combined));
}

#[test]
fn clear_denominators_polynomial_coefficients() {
    let combined = Ring::new(["x", "y", "a", "b"]);
    let params = Ring::new(["a", "b"]);
    let template: Vec<Monomial> = [vec![0, 0], vec![1, 0], vec![0, 1]].into_iter().map(Monomial::new).collect();
    let coeffs = vec![rf("2*a - 4", "1", &params), rf("6", "1", &params), rf("-2*b", "1", &params)];
    let p = clear_denominators(&template, &coeffs, &combined);
    // y*b leads under grlex, so the sign flips
    assert_eq!(p, poly("y*b - 3*x - a + 2", &combined));
}

#[test]
fn clear_denominators_power_sum_k4() {
    // eta_4 / (30a + b - 10b^3 + 15b^4 - 6b^5): T1 = 1, so every other
    // coefficient has that denominator
    let combined = Ring::new(["x", "y", "a", "b"]);
    let params = Ring::new(["a", "b"]);
    let eta = poly("6*y^5 - 30*x - y + 10*y^3 - 15*y^4 + b - 10*b^3 + 15*b^4 - 6*b^5 + 30*a", &combined);
    let c0 = "b - 10*b^3 + 15*b^4 - 6*b^5 + 30*a";
    let template: Vec<Monomial> = [[0, 0], [1, 0], [0, 1], [0, 3], [0, 4], [0, 5]]
        .iter()
        .map(|e| Monomial::new(e.to_vec()))
        .collect();
    let mut coeffs = vec![RationalFunction::constant(&params, q(1, 1))];
    for c in ["-30", "-1", "10", "-15", "6"] {
        coeffs.push(rf(c, c0, &params));
    }
    assert_eq!(clear_denominators(&template, &coeffs, &combined), eta);
}

#[test]
fn sampler_is_deterministic_and_in_range() {
    let s = ParamSampler::new(9, 3);
    assert_eq!(s.point(Stream::Box, 4), s.point(Stream::Box, 4));
    assert_ne!(s.point(Stream::Box, 4), s.point(Stream::Verify, 4));
    assert_ne!(s.point(Stream::Box, 4), ParamSampler::new(10, 3).point(Stream::Box, 4));
    for i in 0..50 {
        for v in s.point(Stream::Probe(1), i) {
            assert!(*v.numer() >= 1.into() && *v.numer() <= VALUE_RANGE.into());
            assert!(*v.denom() <= VALUE_RANGE.into());
        }
    }
}

fn arb_poly(r: Arc<Ring>, max_deg: u32) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((0..=max_deg, 0..=max_deg, -5i64..=5), 1..4).prop_map(move |terms| {
        Polynomial::from_terms(&r, terms.into_iter().map(|(i, j, c)| (Monomial::new(vec![i, j]), q(c, 1))))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn recovers_random_functions(
        num in arb_poly(Ring::new(["a", "b"]), 2),
        den in arb_poly(Ring::new(["a", "b"]), 2),
        seed in 0u64..1000,
    ) {
        prop_assume!(!den.is_zero());
        let r = num.ring().clone();
        let den = den.embed(&r, &[0, 1]);
        let mut bb = |u: &[Rational]| {
            let d = den.evaluate(u).unwrap();
            (!d.is_zero()).then(|| num.evaluate(u).unwrap() / d)
        };
        let sampler = ParamSampler::new(seed, 2);
        let f = interpolate_rational(&mut bb, &r, &InterpConfig::default(), &sampler).unwrap();
        // agreement at fresh points
        for i in 0..5 {
            let u = sampler.point(Stream::Check, i);
            let d = den.evaluate(&u).unwrap();
            if d.is_zero() {
                continue;
            }
            prop_assert_eq!(f.evaluate(&u), Some(num.evaluate(&u).unwrap() / d));
        }
        // determinism
        let g = interpolate_rational(&mut bb, &r, &InterpConfig::default(), &sampler).unwrap();
        prop_assert_eq!(f, g);
    }

    #[test]
    fn clearing_is_scale_invariant(
        coeffs in prop::collection::vec((-9i64..=9, 1i64..=3), 2..5),
        scale in (1i64..=50, 1i64..=50, any::<bool>()),
    ) {
        let params = Ring::new(["a"]);
        let combined = Ring::new(["x", "y", "a"]);
        let template: Vec<Monomial> = (0..coeffs.len() as u32).map(|k| Monomial::new(vec![k, 1])).collect();
        let den = poly("a + 1", &params);
        let build = |s: Rational| -> Vec<RationalFunction> {
            coeffs
                .iter()
                .map(|&(c, k)| {
                    let num = Polynomial::term(&params, Monomial::new(vec![k as u32]), q(c, 1) * &s);
                    RationalFunction::new(num, den.clone()).unwrap()
                })
                .collect()
        };
        let s = q(if scale.2 { scale.0 } else { -scale.0 }, scale.1);
        let a = clear_denominators(&template, &build(q(1, 1)), &combined);
        let b = clear_denominators(&template, &build(s), &combined);
        prop_assert_eq!(a, b);
    }
}
