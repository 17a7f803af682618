use proptest::prelude::*;
use rug::{Float, Rational};

use wellsum::exactval::{ExactSum, ExactValue};
use wellsum::formulas::{closed_form, SeriesFamily};
use wellsum::specfun::{clear_grid_cache, PrecisionContext};
use wellsum::spectral::{parseval_partial, CoeffRoute, WaveState};
use wellsum::verifier::{
    certify, identity24_check, identity24_terms, identity24_target, linear_combination_check, parseval_certify,
    render_results, sum_series, verify_family, BoundKind, Format, Verdict,
};
use wellsum::Error;

fn ctx(bits: u32) -> PrecisionContext {
    PrecisionContext::new(bits).unwrap()
}

fn fam(s: &str) -> SeriesFamily {
    s.parse().unwrap()
}

const GRID: [&str; 6] = [
    "odd-sq p=1 e=2",
    "even-sq p=2 e=2",
    "odd-prod p=1 q=2 e=3",
    "even-prod p=2 q=3 e=5",
    "alln-prod p=1 q=3 e=2",
    "hyper a=1 b=1/2 w=2",
];

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

#[test]
fn bit_identical_across_thread_counts() {
    let c = ctx(128);
    for spec in GRID {
        let f = fam(spec);
        clear_grid_cache();
        let one = in_pool(1, || sum_series(&f, 160, &c).unwrap());
        clear_grid_cache();
        let four = in_pool(4, || sum_series(&f, 160, &c).unwrap());
        assert_eq!(one.partial.to_string_radix(16, None), four.partial.to_string_radix(16, None), "{spec}");
        assert_eq!(one.tail_bound, four.tail_bound, "{spec}");
    }
}

#[test]
fn reports_are_byte_identical() {
    let c = ctx(128);
    let f = fam("odd-sq p=2 e=4");
    let a = render_results(&[verify_family(&f, 100, &c).unwrap()], Format::Json, 30);
    clear_grid_cache();
    let b = render_results(&[verify_family(&f, 100, &c).unwrap()], Format::Json, 30);
    assert_eq!(a, b);
}

#[test]
fn bounds_tighten_with_more_terms() {
    let c = ctx(128);
    for spec in GRID {
        let f = fam(spec);
        let n = sum_series(&f, 100, &c).unwrap();
        let n2 = sum_series(&f, 200, &c).unwrap();
        assert!(n2.tail_bound < n.tail_bound, "{spec}");
        assert!(n.tail_bound > 0 && n.tail_bound.is_finite());
    }
}

#[test]
fn passes_survive_doubling() {
    let c = ctx(128);
    for spec in GRID {
        let f = fam(spec);
        let r = verify_family(&f, 100, &c).unwrap();
        if r.verdict != Verdict::Pass {
            continue;
        }
        let again = verify_family(&f, 200, &c.doubled()).unwrap();
        assert_eq!(again.verdict, Verdict::Pass, "{spec}");
    }
}

#[test]
fn perturbation_beyond_bound_fails() {
    let c = ctx(128);
    for spec in GRID {
        let f = fam(spec);
        let Some(exact) = closed_form(&f).unwrap() else { continue };
        let r = certify(&f, &exact, 200, &c).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{spec}");
        // shift by more than ten times the total allowance
        let allowance = Float::with_val(64, &r.tail_bound + &r.error_budget) * 10u32;
        let shift = Rational::from_f64(allowance.to_f64() * 1.01).unwrap();
        for sign in [1, -1] {
            let bumped = exact.clone() + ExactSum::from(ExactValue::rational(shift.clone() * sign));
            let r = certify(&f, &bumped, 200, &c).unwrap();
            assert_eq!(r.verdict, Verdict::Fail, "{spec} {sign}");
        }
    }
}

#[test]
fn identity_negative_control() {
    let c = ctx(128);
    assert_eq!(identity24_check(300, &c).unwrap().verdict, Verdict::Pass);
    let mut terms = identity24_terms();
    terms[0].1 = terms[0].1.clone() * ExactValue::frac(101, 100);
    let r = linear_combination_check("perturbed", &terms, &identity24_target(), 300, &c).unwrap();
    assert_eq!(r.verdict, Verdict::Fail);
    // few terms: wide bound, still consistent
    let r = identity24_check(8, &c).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert!(r.tail_bound > 1e-3);
}

#[test]
fn unknown_closed_form_is_no_exact() {
    let r = verify_family(&fam("alln-prod p=1 q=4 e=2"), 50, &ctx(128)).unwrap();
    assert_eq!(r.verdict, Verdict::NoExact);
    assert!(r.exact.is_none() && r.deviation.is_none());
}

#[test]
fn rejects_short_sums() {
    assert!(matches!(sum_series(&fam("odd-sq p=1 e=2"), 7, &ctx(128)), Err(Error::Domain(_))));
}

#[test]
fn parseval_certification() {
    let c = ctx(128);
    for (a, b) in [((1, 2), (1, 2)), ((1, 1), (1, 2)), ((5, 2), (9, 2))] {
        let s = WaveState::frac(a, b).unwrap();
        let r = parseval_certify(&s, 300, &c).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{s}");
        let expected = if a == b { BoundKind::Rigorous } else { BoundKind::Heuristic };
        assert_eq!(r.bound_kind, expected, "{s}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn parseval_partials_increase_toward_one(a in 1i64..8, b in 1i64..8, n in 2usize..30) {
        let s = WaveState::new(Rational::from((a, 2)), Rational::from((b, 2))).unwrap();
        let c = ctx(128);
        let lo = parseval_partial(&s, n, CoeffRoute::Hypergeometric, &c).unwrap();
        let hi = parseval_partial(&s, n + 1, CoeffRoute::Hypergeometric, &c).unwrap();
        prop_assert!(hi >= lo);
        prop_assert!(hi < 1);
    }
}
