//! Property tests for the certified series engine.

use cifslab_core::{sum_series, DigitSequence, Interval, TermForm};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Raising the cutoff always yields a nested enclosure with a
    // non-decreasing lower endpoint.
    #[test]
    fn enclosures_nest_as_cutoff_grows(
        slope in 2.0f64..6.0,
        intercept in 0.0f64..5.0,
        t in 0.55f64..2.0,
        m1 in 1u32..200,
        factor in 2u32..50,
    ) {
        let seq = DigitSequence::affine(slope, intercept).unwrap();
        let form = TermForm::PowerOfSquareMinusOne { t };
        let coarse = sum_series(&seq, form, m1).unwrap();
        let fine = sum_series(&seq, form, m1 * factor).unwrap();
        prop_assert!(fine.is_subset_of(&coarse), "{fine:?} not inside {coarse:?}");
        prop_assert!(fine.lo >= coarse.lo);
    }

    // The enclosure contains every brute-force partial sum from below and,
    // with an independent calculus cap on the remainder, from above too.
    #[test]
    fn enclosure_brackets_brute_force_sums(
        slope in 2.0f64..5.0,
        intercept in 0.0f64..3.0,
        t in 0.8f64..1.8,
    ) {
        let seq = DigitSequence::affine(slope, intercept).unwrap();
        let form = TermForm::PowerOfShift { t, sigma: 0 };
        let enclosure = sum_series(&seq, form, 100).unwrap();
        let n_terms = 2_000_000u32;
        let mut partial = 0.0;
        for n in 1..=n_terms {
            let d = slope * n as f64 + intercept;
            partial += d.powf(-2.0 * t);
        }
        // Independent remainder cap: sum_{n>N} (a n + b)^-2t <= integral over
        // [N, inf) of (a x)^-2t dx.
        let residual = (slope * n_terms as f64).powf(1.0 - 2.0 * t) / (slope * (2.0 * t - 1.0));
        prop_assert!(partial <= enclosure.hi * (1.0 + 1e-12));
        prop_assert!(enclosure.lo <= partial + residual + 1e-12);
    }

    // Interval arithmetic helpers stay outward-rounded.
    #[test]
    fn interval_ops_enclose(lo in -10.0f64..10.0, w in 0.0f64..5.0, k in 0.1f64..10.0) {
        let i = Interval::new(lo, lo + w);
        let s = i.scale(k);
        prop_assert!(s.lo <= lo * k && (lo + w) * k <= s.hi);
        if lo > 0.1 {
            let l = i.ln();
            prop_assert!(l.lo <= lo.ln() && (lo + w).ln() <= l.hi);
        }
    }
}
