mod common;

use proptest::collection::vec;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rrkit::stats::{self, special};

fn sample() -> impl Strategy<Value = Vec<f64>> {
    vec(-100.0f64..100.0, 2..12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn welch_matches_reference(a in sample(), b in sample()) {
        let ours = stats::welch_t(&a, &b).unwrap();
        let (t, df, p) = common::welch(&a, &b);
        prop_assert!((ours.t - t).abs() <= 1e-6 * t.abs().max(1.0));
        prop_assert!((ours.df - df).abs() <= 1e-6 * df);
        prop_assert!((ours.p - p).abs() <= 1e-6);
        let swapped = stats::welch_t(&b, &a).unwrap();
        prop_assert_eq!(swapped.t, -ours.t);
        prop_assert!((swapped.p - ours.p).abs() <= 1e-12);
        prop_assert!(ours.df > 0.0 && (0.0..=1.0).contains(&ours.p));
    }

    #[test]
    fn t_p_value_matches_reference(t in -40.0f64..40.0, df in 0.5f64..200.0) {
        prop_assert!((special::t_two_sided_p(t, df) - common::t_p_value(t, df)).abs() <= 1e-8);
    }

    #[test]
    fn correlations_match_reference(xy in vec((-50.0f64..50.0, -50.0f64..50.0), 3..15)) {
        let (x, y): (Vec<f64>, Vec<f64>) = xy.into_iter().unzip();
        let r = stats::pearson(&x, &y).unwrap();
        prop_assert!((r - common::pearson(&x, &y)).abs() <= 1e-6);
        prop_assert!((stats::spearman(&x, &y).unwrap() - common::spearman(&x, &y)).abs() <= 1e-6);
        // positive affine maps leave both unchanged
        let x2: Vec<f64> = x.iter().map(|v| 3.0 * v + 7.0).collect();
        prop_assert!((stats::pearson(&x2, &y).unwrap() - r).abs() <= 1e-9);
        let cubed: Vec<f64> = x.iter().map(|v| v.powi(3)).collect();
        prop_assert!((stats::spearman(&cubed, &y).unwrap() - stats::spearman(&x, &y).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn tied_ranks_match_counting(x in vec(0u8..4, 3..15), y in vec(0u8..4, 3..15)) {
        let n = x.len().min(y.len());
        let (x, y): (Vec<f64>, Vec<f64>) = (x[..n].iter().map(|&v| v as f64).collect(), y[..n].iter().map(|&v| v as f64).collect());
        match stats::spearman(&x, &y) {
            Ok(rho) => prop_assert!((rho - common::spearman(&x, &y)).abs() <= 1e-9),
            Err(e) => prop_assert_eq!(e, stats::StatsError::ConstantInput),
        }
    }

    #[test]
    fn qwk_matches_pairwise_formula(pairs in vec((1u32..=6, 1u32..=6), 1..20)) {
        let (a, b): (Vec<u32>, Vec<u32>) = pairs.into_iter().unzip();
        let ours = stats::qwk::<f64>(&a, &b, 6).unwrap();
        prop_assert!((ours - common::qwk_pairwise(&a, &b)).abs() <= 1e-9);
        prop_assert!((ours - stats::qwk::<f64>(&b, &a, 6).unwrap()).abs() <= 1e-12);
        prop_assert_eq!(stats::qwk::<f64>(&a, &a, 6).unwrap(), 1.0);
    }

    #[test]
    fn zscore_columns_are_standard(x in vec(-1e3f64..1e3, 2..30)) {
        let z = stats::zscore(&x);
        let m = common::mean(&z);
        let sd = (z.iter().map(|v| (v - m).powi(2)).sum::<f64>() / z.len() as f64).sqrt();
        prop_assert!(m.abs() <= 1e-9);
        prop_assert!(sd.abs() <= 1e-9 || (sd - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn levenshtein_matches_recursion(a in "[abc]{0,6}", b in "[abc]{0,6}", c in "[abc]{0,6}") {
        let chars = |s: &str| s.chars().collect::<Vec<_>>();
        let d = stats::levenshtein(&a, &b);
        prop_assert_eq!(d, common::edit_distance_recursive(&chars(&a), &chars(&b)));
        prop_assert_eq!(d, stats::levenshtein(&b, &a));
        prop_assert!(stats::levenshtein(&a, &c) <= d + stats::levenshtein(&b, &c));
        prop_assert_eq!(stats::levenshtein_sim(&a, &b) == 1.0, a == b);
    }
}

#[test]
fn qwk_of_shuffled_ratings_averages_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let b: Vec<u32> = (0..50).map(|i| i % 5 + 1).collect();
    let mut total = 0.0;
    let draws = 10_000;
    for _ in 0..draws {
        let mut a = b.clone();
        a.shuffle(&mut rng);
        total += stats::qwk::<f64>(&a, &b, 5).unwrap();
    }
    assert!((total / draws as f64).abs() < 0.05);
}
