use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rrkit::clean::{clean_trace, CleanParams, CleanedTrace};
use rrkit::corpus::{AoiLayout, AoiLevel};
use rrkit::features::{build_matrix, classify_saccades, feature_names, Direction};
use rrkit::synth;

fn expected_columns(l: &AoiLayout) -> usize {
    let regions: usize = AoiLevel::REGIONS.iter().map(|&lv| l.spans(lv).len()).sum();
    l.word_count() * 7 + regions * 22
}

#[test]
fn session_geometries_give_published_column_counts() {
    assert_eq!(feature_names(&synth::session_one_layout()).len(), 7490);
    assert_eq!(feature_names(&synth::session_two_layout()).len(), 7120);
    assert_eq!(feature_names(&synth::layout(1, 1, 1, 1, 1, 1)).len(), 117);
}

fn cleaned(layout: &AoiLayout, seed: u64) -> CleanedTrace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trace = synth::reading_trace(layout, &format!("p{seed}"), &mut rng);
    clean_trace(&trace, layout, &CleanParams::default()).unwrap()
}

fn cell(m: &rrkit::features::FeatureMatrix, row: usize, name: &str) -> f64 {
    m.rows[row].values[m.column_index(name).unwrap()].unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn column_formula_holds_for_any_layout(
        words in 1usize..80, sub in 1usize..30, sent in 1usize..20, para in 1usize..8, slides in 1usize..4,
    ) {
        let l = synth::layout(words, sub.min(words), sent.min(words), para.min(words), slides.min(words), 7);
        prop_assert_eq!(feature_names(&l).len(), expected_columns(&l));
    }

    #[test]
    fn cleaning_output_is_consistent_and_idempotent(seed in any::<u64>()) {
        let l = synth::layout(60, 12, 6, 3, 2, 8);
        let once = cleaned(&l, seed);
        for fx in &once.fixations {
            let w = &l.words[fx.word_index];
            prop_assert_eq!((w.line, w.slide), (fx.line, fx.slide));
            prop_assert!(fx.visit_ordinal >= 1);
            prop_assert!((50..=1000).contains(&fx.event.duration_ms()));
        }
        let twice = clean_trace(&once.trace, &l, &CleanParams::default()).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn feature_identities_hold(seed in any::<u64>()) {
        let l = synth::layout(60, 12, 6, 3, 2, 8);
        let c = cleaned(&l, seed);
        let m = build_matrix(std::slice::from_ref(&c), &l).unwrap();
        for level in AoiLevel::ALL {
            for aoi in 0..l.spans(level).len() {
                let f = |name: &str| cell(&m, 0, &format!("{level}:{aoi}:{name}"));
                let direct: i64 = c
                    .fixations
                    .iter()
                    .filter(|fx| l.span_of(level, fx.word_index) == aoi)
                    .map(|fx| fx.event.duration_ms())
                    .sum();
                prop_assert_eq!(f("tFD"), direct as f64);
                prop_assert!((f("aFD") * f("tFC") - f("tFD")).abs() <= 1e-9 * f("tFD").max(1.0));
                prop_assert!(f("FFD") + f("SFD") + f("LFD") <= f("tFD") + 1e-9);
            }
        }
        let saccades = classify_saccades(&c.trace, &c.fixations);
        for level in AoiLevel::REGIONS {
            for aoi in 0..l.spans(level).len() {
                let span_sum: usize = saccades
                    .iter()
                    .filter(|s| s.direction == Direction::Forward && l.span_of(level, s.landing_word) == aoi)
                    .map(|s| s.span())
                    .sum();
                let f = |name: &str| cell(&m, 0, &format!("{level}:{aoi}:{name}"));
                prop_assert_eq!(f("rS") + f("sS"), span_sum as f64);
            }
        }
        for s in &saccades {
            prop_assert_eq!(s.direction == Direction::Regression, s.landing_word < s.launch_word);
        }
    }

    #[test]
    fn extraction_has_no_cross_sample_state(a in any::<u64>(), b in any::<u64>()) {
        let l = synth::layout(30, 6, 3, 2, 1, 10);
        let (ca, cb) = (cleaned(&l, a), cleaned(&l, b));
        let joint = build_matrix(&[ca.clone(), cb.clone()], &l).unwrap();
        let alone = [build_matrix(&[ca], &l).unwrap(), build_matrix(&[cb], &l).unwrap()];
        for (i, single) in alone.iter().enumerate() {
            for (j, name) in joint.feature_names.iter().enumerate() {
                // imputed cells legitimately depend on the other samples
                if !name.ends_with(":rSR") {
                    prop_assert_eq!(joint.rows[i].values[j], single.rows[0].values[j]);
                }
            }
        }
    }
}

#[test]
fn words_outside_the_layout_are_rejected() {
    let big = synth::layout(50, 5, 5, 5, 1, 10);
    let small = synth::layout(10, 2, 2, 2, 1, 10);
    let mut c = cleaned(&big, 7);
    c.fixations.iter_mut().for_each(|f| f.word_index = 40);
    assert!(build_matrix(&[c], &small).is_err());
}

#[test]
fn missing_regression_ratio_takes_column_mean() {
    let l = synth::layout(30, 6, 3, 2, 1, 10);
    let traces: Vec<CleanedTrace> = (0..6).map(|s| cleaned(&l, s)).collect();
    let m = build_matrix(&traces, &l).unwrap();
    for (j, name) in m.feature_names.iter().enumerate() {
        if name.ends_with(":rSR") {
            assert!(m.column(j).iter().all(Option::is_some), "{name}");
        }
    }
}

#[test]
fn csv_round_trip_preserves_the_matrix() {
    let l = synth::layout(20, 4, 2, 2, 1, 10);
    let m = build_matrix(&[cleaned(&l, 1), cleaned(&l, 2)], &l).unwrap();
    let mut buf = Vec::new();
    m.write_csv(&mut buf).unwrap();
    let back = rrkit::features::FeatureMatrix::read_csv(buf.as_slice()).unwrap();
    assert_eq!(back, m);
}
