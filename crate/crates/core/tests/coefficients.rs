use dilation_core::coefficients::{contraction_sum, regularity_bounds};
use dilation_core::{normalize, regularity_index, CoefficientVector};
use proptest::prelude::*;

fn raw_factors() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..20.0, 1..=10).prop_filter("distinct, no unit entry", |v| {
        let mut s = v.clone();
        s.sort_by(f64::total_cmp);
        s.windows(2).all(|w| w[1] - w[0] > 1e-9) && s.iter().all(|&a| (a - 1.0).abs() > 1e-9)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normalize_is_idempotent(raw in raw_factors()) {
        let once = normalize(&raw).unwrap();
        let twice = normalize(once.entries()).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert!(once.entries()[0] > 1.0);
        prop_assert!(once.entries().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn shifts_recover_factors(raw in raw_factors()) {
        let a = normalize(&raw).unwrap();
        let b = a.to_additive();
        prop_assert!(b.entries()[0] > 0.0);
        prop_assert!(b.entries().windows(2).all(|w| w[0] < w[1]));
        for (ak, bk) in a.entries().iter().zip(b.entries()) {
            prop_assert!((bk.exp() - ak).abs() <= 1e-12 * ak);
        }
    }

    #[test]
    fn regularity_index_is_minimal(raw in prop::collection::vec(1.0001f64..20.0, 1..=10)) {
        let a = match normalize(&raw) {
            Ok(a) => a,
            Err(_) => return Ok(()),
        };
        let r = regularity_index(&a).unwrap();
        prop_assert!(r.contraction < 1.0);
        prop_assert_eq!(r.contraction, contraction_sum(&a, r.m));
        let before = if r.m == 1 { a.len() as f64 } else { contraction_sum(&a, r.m - 1) };
        prop_assert!(before >= 1.0);
        prop_assert!(f64::from(r.m) <= r.upper_bound);
    }
}

#[test]
fn equidistributed_bounds_depend_on_separation() {
    // For a_k = 1 + k d the gaps are all d, so the estimates are
    // (N + 1/d)/2 - 1 and N + 1/d; they approach N/2 - 1 and N only as d grows.
    for n in 1..=8usize {
        for d in [0.1, 1.0, 10.0] {
            let a = CoefficientVector::new((1..=n).map(|k| 1.0 + k as f64 * d).collect()).unwrap();
            let (lo, hi) = regularity_bounds(&a);
            let nf = n as f64;
            assert!((lo - ((nf + 1.0 / d) / 2.0 - 1.0)).abs() < 1e-12);
            assert!((hi - (nf + 1.0 / d)).abs() < 1e-12);
            assert!(lo >= nf / 2.0 - 1.0 && hi >= nf);
        }
    }
}

#[test]
fn lower_estimate_holds_for_several_factors() {
    // The lower estimate can fail only with a single factor close to 1; for
    // N >= 2 check it on a dense deterministic family.
    for n in 2..=6usize {
        for step in 1..=60 {
            let d = 0.02 * step as f64;
            let a = CoefficientVector::new((1..=n).map(|k| 1.0 + k as f64 * d).collect()).unwrap();
            let r = regularity_index(&a).unwrap();
            assert!(r.lower_bound <= f64::from(r.m), "n={n} d={d} {r:?}");
            assert!(f64::from(r.m) <= r.upper_bound, "n={n} d={d} {r:?}");
        }
    }
}
