use proptest::prelude::*;
use rug::Rational;

use wellsum::exactval::{beta_exact, ExactSum, ExactValue};
use wellsum::formulas::{
    closed_form, n4_sum_closed, n6_sum_closed, nis1_closed, nis2_closed, parseval_sum_closed, pfq_reduce,
    table_entries, table_entry, Parity, SeriesFamily, TABLE_IDS,
};
use wellsum::specfun::PrecisionContext;
use wellsum::verifier::{certify, Verdict};
use wellsum::Error;

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn bessel_family() -> impl Strategy<Value = SeriesFamily> {
    (0usize..3, 0u32..=12, 0u32..=12, 1u32..25).prop_map(|(k, p, q, e)| {
        let parity = [Parity::Odd, Parity::Even, Parity::All][k];
        SeriesFamily::bessel(parity, p, q, e)
    })
}

fn hyper_family() -> impl Strategy<Value = SeriesFamily> {
    (1i64..12, 1i64..12, 1u32..8)
        .prop_map(|(a, b, w)| SeriesFamily::HyperSq { alpha: q(a, 2), beta: q(b, 2), w })
        .prop_filter("convergent", |f| f.validate().is_ok())
}

proptest! {
    #[test]
    fn canonical_is_idempotent(f in prop_oneof![bessel_family(), hyper_family()]) {
        let c = f.canonical();
        prop_assert_eq!(c.canonical(), c.clone());
        prop_assert_eq!(c, f);
    }

    #[test]
    fn grammar_round_trip(f in prop_oneof![bessel_family(), hyper_family()]) {
        let text = f.to_string();
        let back: SeriesFamily = text.parse().unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn swapped_orders_are_the_same_series(p in 0u32..10, r in 0u32..10, e in 1u32..20) {
        for parity in [Parity::Odd, Parity::Even, Parity::All] {
            prop_assert_eq!(SeriesFamily::bessel(parity, p, r, e), SeriesFamily::bessel(parity, r, p, e));
        }
    }

    #[test]
    fn weighted_closed_forms_are_symmetric(a in 1i64..20, b in 1i64..20) {
        // B²(α+2, β+1) Σ n^w F_n² is a moment of |C_n|², which reflection x → 1−x preserves
        let (x, y) = (q(a, 2), q(b, 2));
        let weight = |s: &Rational, t: &Rational| {
            beta_exact(&Rational::from(s + 2u32), &Rational::from(t + 1u32)).unwrap().powi(2).unwrap()
        };
        let fs: [fn(&Rational, &Rational) -> wellsum::Result<ExactValue>; 3] =
            [parseval_sum_closed, n4_sum_closed, n6_sum_closed];
        for f in fs {
            let fwd = f(&x, &y).ok().map(|v| v * weight(&x, &y));
            let back = f(&y, &x).ok().map(|v| v * weight(&y, &x));
            prop_assert_eq!(fwd, back);
        }
    }

    #[test]
    fn raw_sums_scale_under_swap(a in 1i64..20, b in 1i64..20) {
        let (x, y) = (q(a, 2), q(b, 2));
        let ratio = Rational::from(&x + 1u32) / Rational::from(&y + 1u32);
        let k = ExactValue::rational(Rational::from(ratio.square_ref()));
        prop_assert_eq!(parseval_sum_closed(&y, &x).unwrap(), parseval_sum_closed(&x, &y).unwrap() * k);
    }

    #[test]
    fn reduce_is_stable(ups in prop::collection::vec(1i64..8, 0..4), lows in prop::collection::vec(1i64..8, 0..4)) {
        let u: Vec<Rational> = ups.iter().map(|&n| q(n, 2)).collect();
        let l: Vec<Rational> = lows.iter().map(|&n| q(n, 2)).collect();
        let (u1, l1) = pfq_reduce(&u, &l);
        prop_assert!(u1.iter().all(|x| !l1.contains(x)));
        prop_assert_eq!(u1.len() + l.len(), l1.len() + u.len());
        prop_assert_eq!(pfq_reduce(&u1, &l1), (u1, l1));
    }
}

#[test]
fn grammar_errors() {
    for bad in ["", "odd-sq p=1", "odd-sq p=1 e=2 e=3", "odd-sq p=x e=2", "quad p=1 e=1", "odd-sq p=1 e=2 z=3", "hyper a=1/0 b=1 w=2"] {
        assert!(matches!(bad.parse::<SeriesFamily>(), Err(Error::Parse(_))), "{bad:?}");
    }
    for domain in ["odd-sq p=1 e=0", "hyper a=1/2 b=1/2 w=4", "hyper a=1/4 b=1 w=2", "odd-prod p=1 q=65 e=3"] {
        assert!(matches!(domain.parse::<SeriesFamily>(), Err(Error::Domain(_))), "{domain:?}");
    }
}

#[test]
fn reduce_examples() {
    let (u, l) = pfq_reduce(&[q(3, 2), q(2, 1)], &[q(9, 4), q(11, 4), q(3, 2)]);
    assert_eq!((u, l), (vec![q(2, 1)], vec![q(9, 4), q(11, 4)]));
    let ups = vec![q(2, 1), q(5, 2)];
    let lows = vec![q(3, 2), q(11, 4), q(13, 4)];
    assert_eq!(pfq_reduce(&ups, &lows), (ups, lows));
    assert_eq!(pfq_reduce(&[], &[]), (vec![], vec![]));
}

/// Odd and even parts add up to the all-n closed forms.
#[test]
fn parity_parts_add_up() {
    let mut checked = 0;
    for p in 1..=10u32 {
        for r in p..=10 {
            let odd = closed_form(&SeriesFamily::bessel(Parity::Odd, p, r, p + r)).unwrap();
            let even = closed_form(&SeriesFamily::bessel(Parity::Even, p, r, p + r)).unwrap();
            if let (Some(o), Some(e)) = (odd, even) {
                assert_eq!(o + e, nis1_closed(p, r).unwrap(), "p={p} q={r}");
                checked += 1;
            }
            if p + r > 2 {
                let odd = closed_form(&SeriesFamily::bessel(Parity::Odd, p, r, p + r - 2)).unwrap();
                let even = closed_form(&SeriesFamily::bessel(Parity::Even, p, r, p + r - 2)).unwrap();
                if let (Some(o), Some(e)) = (odd, even) {
                    assert_eq!(o + e, ExactSum::from(nis2_closed(p, r).unwrap()), "p={p} q={r}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked >= 28, "{checked}");
}

/// The parts obtained by complement agree with brute-force sums.
#[test]
fn complement_parts_by_brute_force() {
    let ctx = PrecisionContext::new(128).unwrap();
    for p in [1u32, 2, 4, 7] {
        let even = SeriesFamily::bessel(Parity::Even, p, p, 2 * p);
        let exact = closed_form(&even).unwrap().unwrap();
        assert_eq!(certify(&even, &exact, 300, &ctx).unwrap().verdict, Verdict::Pass, "{even}");
        let mut wrong = exact.clone();
        wrong = wrong + ExactSum::from(ExactValue::new(q(1, 1000), 0));
        assert_eq!(certify(&even, &wrong, 300, &ctx).unwrap().verdict, Verdict::Fail, "{even}");
    }
}

#[test]
fn printed_rows_agree() {
    let mut mismatches = Vec::new();
    for t in TABLE_IDS {
        for e in table_entries(t).unwrap() {
            if !e.matches {
                mismatches.push((t, e.row));
            }
        }
    }
    // Table 5 row (7;8) prints 2043 where the generator gives 2048.
    assert_eq!(mismatches, vec![(5, 7)]);
    let t7 = table_entries(7).unwrap();
    let flagged: Vec<usize> = t7.iter().filter(|e| e.note.is_some()).map(|e| e.row).collect();
    assert_eq!(flagged.len(), 1);
    let row = &t7[flagged[0] - 1];
    assert_eq!(row.family, SeriesFamily::HyperSq { alpha: q(3, 1), beta: q(5, 2), w: 2 });
    assert!(!row.normalization.as_ref().unwrap().consistent);
}

#[test]
fn table_lookup_errors() {
    assert!(matches!(table_entry(8, 1), Err(Error::Range(_))));
    assert!(matches!(table_entry(1, 0), Err(Error::Range(_))));
    assert!(matches!(table_entry(1, 11), Err(Error::Range(_))));
    assert_eq!(table_entry(1, 1).unwrap().exact, ExactSum::from(ExactValue::frac(1, 3)));
}

#[test]
fn derived_tables_are_two_terms() {
    let t4 = table_entry(4, 1).unwrap();
    assert_eq!(t4.exact.to_string(), "1/3 − π²/32");
    for t in [4, 5] {
        for e in table_entries(t).unwrap() {
            assert_eq!(e.exact.terms().len(), 2, "table {t} row {}", e.row);
        }
    }
}
