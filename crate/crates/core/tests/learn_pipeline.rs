use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rrkit::learn::{cross_validate, fit, stratified_folds, train_regressor, Dataset, ModelKind, SplitSpec, TrainingMeta};
use rrkit::synth;

fn separable(seed: u64) -> Dataset {
    synth::separable_dataset(200, 20, 1.0, &mut ChaCha8Rng::seed_from_u64(seed))
}

#[test]
fn separable_data_is_learned_perfectly() {
    let report = cross_validate(&separable(1), ModelKind::Classifier, TrainingMeta::default(), &SplitSpec::default()).unwrap();
    assert_eq!(report.mean_metric, 1.0);
    assert_eq!(report.mean_uar, Some(1.0));
}

#[test]
fn shuffled_labels_give_chance_accuracy() {
    for seed in 0..5 {
        let mut d = separable(100 + seed);
        d.labels.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let spec = SplitSpec { seed, ..SplitSpec::default() };
        let acc = cross_validate(&d, ModelKind::Classifier, TrainingMeta::default(), &spec).unwrap().mean_metric;
        assert!((0.35..=0.65).contains(&acc), "seed {seed}: {acc}");
    }
}

#[test]
fn leave_one_out_runs() {
    let d = synth::separable_dataset(12, 3, 1.0, &mut ChaCha8Rng::seed_from_u64(5));
    let spec = SplitSpec { folds: 12, ..SplitSpec::default() };
    let r = cross_validate(&d, ModelKind::Classifier, TrainingMeta::default(), &spec).unwrap();
    assert_eq!(r.folds.len(), 12);
}

#[test]
fn duplicated_columns_predict_the_same_classes() {
    let d = synth::separable_dataset(60, 3, 0.5, &mut ChaCha8Rng::seed_from_u64(8));
    let mut dup = d.clone();
    dup.feature_names.push("copy".into());
    dup.x.iter_mut().for_each(|r| r.push(r[0]));
    let (a, b) = (
        fit(&d, ModelKind::Classifier, TrainingMeta::default()).unwrap(),
        fit(&dup, ModelKind::Classifier, TrainingMeta::default()).unwrap(),
    );
    for (r, rd) in d.x.iter().zip(&dup.x) {
        assert_eq!(a.predict_label(r), b.predict_label(rd));
    }
}

#[test]
fn feature_scale_does_not_change_predictions() {
    let d = synth::separable_dataset(80, 4, 0.2, &mut ChaCha8Rng::seed_from_u64(2));
    let mut scaled = d.clone();
    scaled.x.iter_mut().flatten().for_each(|v| *v *= 37.5);
    let (a, b) = (
        fit(&d, ModelKind::Classifier, TrainingMeta::default()).unwrap(),
        fit(&scaled, ModelKind::Classifier, TrainingMeta::default()).unwrap(),
    );
    for (r, rs) in d.x.iter().zip(&scaled.x) {
        assert_eq!(a.predict_label(r), b.predict_label(rs));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn folds_are_a_disjoint_cover(n in 4usize..60, k in 2usize..6, seed in any::<u64>(), classes in 1usize..4) {
        prop_assume!(k <= n);
        let labels: Vec<String> = (0..n).map(|i| format!("c{}", i % classes)).collect();
        let folds = stratified_folds(&labels, k, seed).unwrap();
        let mut all: Vec<usize> = folds.concat();
        all.sort_unstable();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
    }

    #[test]
    fn ridge_residuals_are_orthogonal(rows in proptest::collection::vec(proptest::collection::vec(-5.0f64..5.0, 3), 5..25), c in 0.1f64..10.0) {
        let y: Vec<String> = rows.iter().map(|r| (r[0] - 2.0 * r[1] + 0.5).to_string()).collect();
        let d = Dataset {
            feature_names: vec!["a".into(), "b".into(), "c".into()],
            sample_ids: (0..rows.len()).map(|i| i.to_string()).collect(),
            x: rows.clone(),
            labels: y.clone(),
        };
        let m = train_regressor(&d, TrainingMeta { c, ..TrainingMeta::default() }).unwrap();
        let resid: Vec<f64> = rows.iter().zip(&y).map(|(r, t)| t.parse::<f64>().unwrap() - m.decision(r)).collect();
        // the unpenalized bias makes residuals sum to zero
        prop_assert!(resid.iter().sum::<f64>().abs() < 1e-8);
        for j in 0..3 {
            let g: f64 = rows.iter().zip(&resid).map(|(r, e)| r[j] * e).sum();
            prop_assert!((g - m.weights[j] / c).abs() < 1e-7 * (1.0 + g.abs()));
        }
    }
}
