use std::sync::Arc;

use super::*;
use crate::frontend::{parse_polynomial, parse_program};
use crate::polyring::{reduce, Monomial, Ring};
use crate::ratinterp::InterpConfig;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn program(src: &str) -> LoopProgram {
    parse_program(src).unwrap()
}

fn poly(s: &str, r: &Arc<Ring>) -> Polynomial {
    parse_polynomial(s, r).unwrap()
}

fn power_sum_loop(k: u32) -> LoopProgram {
    program(&format!("vars x, y; params a, b; init x := a, y := b; loop (x, y) := (x + y^{k}, y + 1); end"))
}

#[test]
fn example1_single_invariant() {
    let p = program(include_str!("../../programs/example1.loop"));
    let r = invgen_numeric(&p, &InvGenConfig::new(7)).unwrap();
    assert_eq!(r.invariants.len(), 1);
    let eta = &r.invariants[0].poly;
    assert_eq!(eta, &poly("-12*x + 2*y^6 - 6*y^5 + 5*y^4 - y^2", &p.vars));
    assert_eq!(eta.render(TermOrder::Lex), "-12*x + 2*y^6 - 6*y^5 + 5*y^4 - y^2");
    assert_eq!((r.candidates_total, r.min_degree, r.over_degree), (6, 6, 5));
    assert_eq!((r.sample_count, r.shortfall, r.closure_rounds), (36, false, 0));
    assert_eq!(r.candidates_checked, 1);
    assert_eq!(r.invariants[0].quotients, [Polynomial::one(&p.vars)]);
    assert!(r.nonexistence.is_none());
}

#[test]
fn constant_loop_finds_x_zero() {
    let p = program("vars x; init x := 0; loop x := x; end");
    let r = invgen_numeric(&p, &InvGenConfig::new(1)).unwrap();
    assert!(r.invariants.iter().any(|v| v.poly == Polynomial::var(&p.vars, 0)));
    assert_eq!(r.stop, StopReason::FixedPoint);
    assert!(r.shortfall);
}

#[test]
fn example3_numeric_instance() {
    let src = include_str!("../../programs/example3.loop")
        .replace("params a, b;", "")
        .replace("x := a, y := b, u := b, v := a", "x := 287/253, y := 751/890, u := 751/890, v := 287/253");
    let p = program(&src);
    let r = invgen_numeric(&p, &InvGenConfig::new(2)).unwrap();
    assert_eq!(r.invariants.len(), 1);
    let n = normalize(&r.invariants[0].poly);
    let c = q(-112585, 215537);
    let expect: Vec<(Monomial, Rational)> = vec![
        (Monomial::one(4), q(1, 1)),
        (Monomial::new(vec![0, 1, 0, 1]), c.clone()),
        (Monomial::new(vec![1, 0, 1, 0]), c),
    ];
    assert_eq!(n.coefficients.into_iter().collect::<Vec<_>>(), expect);
    assert!(r.closure_rounds >= 1);
}

#[test]
fn example2_symbolic() {
    let p = program(include_str!("../../programs/example2.loop"));
    let r = invgen_symbolic(&p, &InvGenConfig::new(2), &InterpConfig::default()).unwrap();
    assert_eq!(r.invariants.len(), 1);
    assert_eq!(r.invariants[0].poly, poly("2*x + r^2 - r - a", &r.combined));
}

#[test]
fn example3_symbolic() {
    let p = program(include_str!("../../programs/example3.loop"));
    let cfg = InvGenConfig::new(2);
    let r = invgen_symbolic(&p, &cfg, &InterpConfig::default()).unwrap();
    assert_eq!(r.invariants.len(), 1);
    assert_eq!(r.invariants[0].poly, poly("x*u + y*v - 2*a*b", &r.combined));

    let (_, normalized) = normalized_instance(&p, &[q(93, 122), q(301, 992)], &cfg).unwrap();
    assert_eq!(normalized.len(), 1);
    assert_eq!(normalized[0].coefficients[&Monomial::new(vec![1, 0, 1, 0])], q(-1952, 903));
}

#[test]
fn power_sum_loop_k1() {
    let p = power_sum_loop(1);
    let r = invgen_symbolic(&p, &InvGenConfig::new(2), &InterpConfig::default()).unwrap();
    assert_eq!(r.invariants.len(), 1);
    assert_eq!(r.invariants[0].poly, poly("y^2 - y - 2*x + b - b^2 + 2*a", &r.combined));
}

#[test]
fn fibonacci_has_no_quadratic_invariant() {
    let p = program("vars x, y; init x := 1, y := 1; loop (x, y) := (x + y, x); end");
    let r = invgen_numeric(&p, &InvGenConfig::new(2)).unwrap();
    assert!(r.invariants.is_empty());
    let note = r.nonexistence.unwrap();
    assert_eq!(note, NonExistenceNote { min_degree: 3, degree_bound: 2 });
    assert!(note.to_string().starts_with("no polynomial invariant of degree < 3"));
    // (x^2 - xy - y^2)^2 = 1 appears at degree 4
    let r = invgen_numeric(&p, &InvGenConfig::new(4)).unwrap();
    let expect = poly("(x^2 - x*y - y^2)^2 - 1", &p.vars).primitive(TermOrder::GradedLex);
    assert!(r.invariants.iter().any(|v| v.poly == expect));
}

#[test]
fn input_errors() {
    let p = program(include_str!("../../programs/example2.loop"));
    assert_eq!(invgen_numeric(&p, &InvGenConfig::new(2)), Err(InvGenError::Parametric));
    let p = program(include_str!("../../programs/example1.loop"));
    assert_eq!(invgen_numeric(&p, &InvGenConfig::new(0)), Err(InvGenError::InvalidDegree));
    assert_eq!(
        invgen_symbolic(&p, &InvGenConfig::new(2), &InterpConfig::default()).unwrap_err(),
        InvGenError::NoParameters
    );
    let p = program("vars x; init x := 0; guard 1 < 0; loop x := x + 1; end");
    assert_eq!(invgen_numeric(&p, &InvGenConfig::new(1)), Err(InvGenError::NoTransitions));
}

#[test]
fn reports_are_deterministic() {
    let p = program(include_str!("../../programs/example1.loop"));
    let cfg = InvGenConfig { seed: 17, ..InvGenConfig::new(7) };
    assert_eq!(invgen_numeric(&p, &cfg).unwrap(), invgen_numeric(&p, &cfg).unwrap());
    let p = program(include_str!("../../programs/example2.loop"));
    let a = invgen_symbolic(&p, &cfg_e(2, 3), &InterpConfig::default()).unwrap();
    let b = invgen_symbolic(&p, &cfg_e(2, 3), &InterpConfig::default()).unwrap();
    assert_eq!(a, b);
}

fn cfg_e(e: u32, seed: u64) -> InvGenConfig {
    InvGenConfig { seed, ..InvGenConfig::new(e) }
}

#[test]
fn stage1_only_keeps_true_invariants() {
    let p = program(include_str!("../../programs/example1.loop"));
    let cfg = InvGenConfig { stage1_only: true, ..InvGenConfig::new(7) };
    let r = invgen_numeric(&p, &cfg).unwrap();
    assert!(r.invariants.iter().any(|v| v.poly == poly("2*y^6 - 6*y^5 + 5*y^4 - y^2 - 12*x", &p.vars)));
}

/// Every invariant found at `e` is still implied by those found at `e + 1`.
fn assert_monotone(p: &LoopProgram, init: &[Rational], e: u32, ignore_guard: bool) {
    let ts = to_transition_system(p);
    let low = run_from(&ts, init, &InvGenConfig::new(e), ignore_guard).unwrap();
    let high = run_from(&ts, init, &InvGenConfig::new(e + 1), ignore_guard).unwrap();
    assert!(!low.invariants.is_empty());
    let basis: Vec<Polynomial> = high.invariants.iter().map(|v| v.poly.clone()).collect();
    for v in &low.invariants {
        assert!(
            basis.contains(&v.poly) || reduce(&v.poly, &basis, TermOrder::GradedLex).unwrap().is_zero(),
            "{} lost at degree {}",
            v.poly,
            e + 1
        );
    }
}

#[test]
fn raising_the_degree_keeps_invariants() {
    let p1 = program(include_str!("../../programs/example1.loop"));
    assert_monotone(&p1, &[q(0, 1), q(0, 1)], 7, false);
    let p2 = program(include_str!("../../programs/example2.loop"));
    assert_monotone(&p2, &p2.instantiate_init(&[q(10, 1)]), 2, false);
    assert_monotone(&p2, &p2.instantiate_init(&[q(7, 3)]), 2, true);
    let p3 = program(include_str!("../../programs/example3.loop"));
    assert_monotone(&p3, &p3.instantiate_init(&[q(287, 253), q(751, 890)]), 2, false);
}
