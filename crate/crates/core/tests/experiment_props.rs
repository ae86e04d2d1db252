use lamina::circle::unlinked;
use lamina::experiments::{
    area_decay_experiment, max_gap, sample_class_k, sample_dense_chord_portrait, SampleSpec,
};
use lamina::lamination::detect_wandering;
use lamina::portrait::validate_portrait;
use lamina::Degree;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn spec(d: u32, seed: u64, horizon: u64, eps: i64) -> SampleSpec {
    SampleSpec::new(d, seed, horizon, BigRational::new(1.into(), eps.into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn dense_samples_are_valid_reproducible_and_dense(seed in any::<u64>(), d in prop::sample::select(vec![3u32, 5])) {
        let s = spec(d, seed, 2000, 20);
        let a = sample_dense_chord_portrait(&s).unwrap();
        prop_assert_eq!(&a, &sample_dense_chord_portrait(&s).unwrap());
        prop_assert!(validate_portrait(a.portrait.degree(), a.portrait.sets().to_vec()).is_ok());
        let p = s.denominator_prime;
        for x in a.portrait.points() {
            let q = x.denom().to_u64().unwrap();
            let t = a.density.covering_time;
            let orbit: Vec<u64> = (0..=t)
                .scan(x.numer().to_u64().unwrap(), |k, _| { let y = *k; *k = *k * d as u64 % q; Some(y) })
                .collect();
            // ε = 1/20: the largest gap must be shorter than q/20.
            prop_assert!((max_gap(&orbit, q) as u128) * 20 < q as u128, "{x} within {t}");
            prop_assert!(q == p || q == d as u64 * p);
        }
    }

    #[test]
    fn class_k_certificates_reverify(seed in any::<u64>()) {
        let s = spec(3, seed, 200, 10);
        let k = sample_class_k(&s).unwrap();
        prop_assert_eq!(&k, &sample_class_k(&s).unwrap());
        prop_assert!(k.certificate.verify());
        let sets = k.portrait.sets();
        prop_assert_eq!(sets.len(), 2);
        prop_assert!(unlinked(&sets[0], &sets[1]));
    }

    #[test]
    fn area_decay_is_reproducible_and_antitone(seed in any::<u64>(), n in 2u64..6) {
        let s = spec(3, seed, 50, 10);
        let a = area_decay_experiment(&s, n, 60).unwrap();
        let b = area_decay_experiment(&s, n, 60).unwrap();
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let mut rows: Vec<(f64, usize)> = a.records.iter().map(|r| (r.area, r.survival)).collect();
        rows.sort_by(|x, y| x.0.total_cmp(&y.0));
        // Max survival over area ≥ t, for t running down the sorted areas.
        let suffix: Vec<usize> = rows.iter().rev().scan(0, |m, r| { *m = (*m).max(r.1); Some(*m) }).collect();
        prop_assert!(suffix.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(a.summary.antitone);
        for r in &a.records {
            prop_assert!(r.area >= 1.0 / n as f64);
            prop_assert_eq!(detect_wandering(&r.triangle, Degree::new(3).unwrap(), 50), r.verdict);
        }
    }
}
