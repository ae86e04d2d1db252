use lamina::circle::CircleArc;
use lamina::experiments::{random_portrait, stream_rng};
use lamina::lamination::{
    classify_class, condensity_probe, detect_wandering, generate_lamination, recurrence_horizon,
    verify_invariance, ClassStatus,
};
use lamina::portrait::{kneading_status, Kneading};
use lamina::{Angle, AngleSet, CriticalPortrait, Degree};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn aperiodic(d: u32, seed: u64) -> CriticalPortrait {
    (0..)
        .map(|i| random_portrait(Degree::new(d).unwrap(), &mut stream_rng(seed, i), 200).unwrap())
        .find(|p| kneading_status(p) == Kneading::Aperiodic)
        .unwrap()
}

fn rational_set(max_q: u64) -> impl Strategy<Value = AngleSet> {
    prop::collection::vec(
        (1..max_q).prop_flat_map(|q| (0..q).prop_map(move |n| Angle::new(n, q).unwrap())),
        2..5,
    )
    .prop_map(AngleSet::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generated_laminations_are_clean_compatible_and_monotone(
        d in 2u32..4,
        seed in any::<u64>(),
        depth in 1usize..6,
    ) {
        let p = aperiodic(d, seed);
        let coarse = generate_lamination(&p, depth - 1).unwrap();
        let fine = generate_lamination(&p, depth).unwrap();
        let report = verify_invariance(&fine);
        prop_assert!(report.linked.is_empty() && report.forward.is_empty() && report.covering.is_empty(), "{report:?}");
        for l in [&coarse, &fine] {
            prop_assert!(p.sets().iter().all(|s| l.contains_set(s)));
        }
        for c in coarse.classes() {
            prop_assert!(fine.contains_set(c), "{c:?} splits at depth {depth}");
        }
    }
}

proptest! {
    #[test]
    fn rational_sets_get_definite_verdicts(d in 2u32..4, t in rational_set(80)) {
        let deg = Degree::new(d).unwrap();
        let h = recurrence_horizon(&t, deg);
        prop_assume!(h <= 5000);
        prop_assert!(detect_wandering(&t, deg, h as usize).is_definite());
    }

    /// Oracle: the least `n` with `d^n ≥ 1/ℓ`, by integer powers.
    #[test]
    fn probe_covers_after_ceil_log_steps(d in 2u32..6, start in 0u64..997, num in 1u64..50, den in 1u64..100_000) {
        prop_assume!(num < den);
        let len = BigRational::new(num.into(), den.into());
        let a = Angle::new(start, 997).unwrap();
        let seed = CircleArc::new(a.clone(), Angle::from_ratio(a.value() + &len));
        let (mut n, mut reach) = (0usize, BigInt::from(num));
        while reach < BigInt::from(den) {
            reach *= d;
            n += 1;
        }
        let r = condensity_probe(Degree::new(d).unwrap(), &seed, &[], 64, None).unwrap();
        prop_assert_eq!(r.image_covers_at, Some(n));
    }

    /// Rotation by `k/(d−1)` commutes with `σ_d`, so tags are unchanged.
    /// Rotation by `k/d` is not a conjugacy but leaves the image alone, so
    /// all events from step one on agree.
    #[test]
    fn classification_under_rotation(d in 2u32..5, t in rational_set(40), k in 1u32..5) {
        let deg = Degree::new(d).unwrap();
        let h = 40;
        let base = classify_class(&t, deg, h);
        let fixed = BigRational::new(BigInt::from(k % (d - 1).max(1)), BigInt::from(d - 1));
        prop_assert_eq!(classify_class(&t.rotate(&fixed), deg, h), base);
        prop_assert_eq!(t.rotate(&fixed).image(deg), t.image(deg).rotate(&fixed));

        let shifted = t.rotate(&BigRational::new(BigInt::from(k % d), BigInt::from(d)));
        let other = classify_class(&shifted, deg, h);
        prop_assert_eq!(other.kind, base.kind);
        prop_assert_eq!(other.critical, base.critical);
        match (base.status, other.status) {
            (ClassStatus::Precritical { step: a }, ClassStatus::Precritical { step: b }) if a > 0 => prop_assert_eq!(a, b),
            (ClassStatus::Preperiodic { i: a, j: x }, ClassStatus::Preperiodic { i: b, j: y }) if a > 0 && b > 0 => {
                prop_assert_eq!((a, x), (b, y))
            }
            (ClassStatus::WanderingCandidate { .. }, s) => {
                let undecided = matches!(s, ClassStatus::WanderingCandidate { .. } | ClassStatus::Preperiodic { i: 0, .. });
                prop_assert!(undecided, "{:?}", s);
            }
            _ => {}
        }
    }
}
