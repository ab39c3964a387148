use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rrkit::corpus::write_gaze_log;
use rrkit::synth;

fn rrkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rrkit")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/golden").join(name)
}

/// Writes a layout and `n` labelled gaze logs; returns (layout, log dir).
fn gaze_fixture(dir: &Path, n: usize) -> (PathBuf, PathBuf) {
    let layout = synth::layout(40, 8, 4, 2, 1, 10);
    let layout_path = dir.join("layout.json");
    std::fs::write(&layout_path, layout.to_json()).unwrap();
    let logs = dir.join("logs");
    std::fs::create_dir(&logs).unwrap();
    for t in synth::cohort(&layout, n, &mut ChaCha8Rng::seed_from_u64(11)) {
        let f = std::fs::File::create(logs.join(format!("{}.csv", t.participant_id))).unwrap();
        write_gaze_log(&t, f).unwrap();
    }
    (layout_path, logs)
}

fn gaze_to_eval(dir: &Path) -> (String, String) {
    let (layout, logs) = gaze_fixture(dir, 24);
    let m = dir.join("gaze.csv");
    let sel = dir.join("selected.csv");
    let model = dir.join("model.txt");
    let test = dir.join("test.csv");
    let cv = dir.join("cv.json");
    let metrics = dir.join("metrics.json");
    let ok = |o: Output| assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    ok(rrkit(&["gaze", s(&logs), "--layout", s(&layout), "--out", s(&m)]));
    ok(rrkit(&["select", "--matrix", s(&m), "--alpha", "0.01", "--out", s(&sel)]));
    ok(rrkit(&[
        "train", "--matrix", s(&sel), "--model", s(&model), "--seed", "3", "--test-out", s(&test), "--metrics", s(&cv),
    ]));
    ok(rrkit(&["eval", "--model", s(&model), "--matrix", s(&test), "--out", s(&metrics)]));
    (std::fs::read_to_string(&cv).unwrap(), std::fs::read_to_string(&metrics).unwrap())
}

#[test]
fn gaze_select_train_eval_pipeline() {
    let a = tempfile::tempdir().unwrap();
    let (cv, metrics) = gaze_to_eval(a.path());
    let cv: serde_json::Value = serde_json::from_str(&cv).unwrap();
    let metrics: serde_json::Value = serde_json::from_str(&metrics).unwrap();
    assert_eq!(metrics["kind"], "classifier");
    let c_rate = metrics["c_rate"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&c_rate));
    assert!(metrics["uar"].is_number());
    assert!(cv["cv"]["mean_metric"].is_number());

    let matrix = std::fs::read_to_string(a.path().join("gaze.csv")).unwrap();
    assert_eq!(matrix.lines().count(), 25);

    // identical inputs and seed give identical bytes
    let b = tempfile::tempdir().unwrap();
    let (cv2, metrics2) = gaze_to_eval(b.path());
    assert_eq!(serde_json::to_string(&cv).unwrap(), serde_json::to_string(&serde_json::from_str::<serde_json::Value>(&cv2).unwrap()).unwrap());
    assert_eq!(serde_json::to_string(&metrics).unwrap(), serde_json::to_string(&serde_json::from_str::<serde_json::Value>(&metrics2).unwrap()).unwrap());
    for f in ["gaze.csv", "selected.csv", "model.txt", "test.csv", "cv.json", "metrics.json"] {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn missing_layout_is_a_usage_error() {
    let d = tempfile::tempdir().unwrap();
    let (_, logs) = gaze_fixture(d.path(), 2);
    let o = rrkit(&["gaze", s(&logs), "--layout", s(&d.path().join("nope.json")), "--out", s(&d.path().join("m.csv"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("layout not found"));
}

#[test]
fn broken_log_is_skipped_with_exit_one() {
    let d = tempfile::tempdir().unwrap();
    let (layout, logs) = gaze_fixture(d.path(), 3);
    std::fs::write(logs.join("zz_broken.csv"), "kind,eye\nfixation,left\n").unwrap();
    let m = d.path().join("m.csv");
    let o = rrkit(&["gaze", s(&logs), "--layout", s(&layout), "--out", s(&m), "--params", "min-fix-ms=50", "max-fix-ms=1000"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("zz_broken.csv"));
    assert_eq!(std::fs::read_to_string(&m).unwrap().lines().count(), 4);
}

#[test]
fn unlabelled_matrix_is_rejected() {
    let d = tempfile::tempdir().unwrap();
    let m = d.path().join("m.csv");
    std::fs::write(&m, "sample_id,label,f1\na,,1\nb,,2\n").unwrap();
    let o = rrkit(&["select", "--matrix", s(&m), "--out", s(&d.path().join("o.csv"))]);
    assert_eq!(o.status.code(), Some(2));
}

fn golden_args(extra: &[&str]) -> Vec<String> {
    let mut v: Vec<String> = vec![
        "simscore".into(),
        "--reference".into(),
        s(&golden("reference.conllu")).into(),
        s(&golden("summary.conllu")).into(),
        "--source".into(),
        format!("pairs:{}", s(&golden("pairs_contextual.tsv"))),
        "--stopwords".into(),
        s(&golden("stopwords.txt")).into(),
        "--lemma-map".into(),
        s(&golden("lemma_map.tsv")).into(),
        "--phrases".into(),
        s(&golden("phrases.txt")).into(),
        "--substitutions".into(),
        s(&golden("substitutions.tsv")).into(),
    ];
    v.extend(extra.iter().map(|x| x.to_string()));
    v
}

#[test]
fn simscore_on_the_two_line_fixture() {
    let d = tempfile::tempdir().unwrap();
    let batch = d.path().join("batch.csv");
    let args = golden_args(&["--batch", s(&batch)]);
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let o = rrkit(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let overall = report["overall"].as_f64().unwrap();
    assert!((overall - 3.93).abs() <= 0.06, "{overall}");
    assert_eq!(report["alignment_score"], 10.0);
    let csv = std::fs::read_to_string(&batch).unwrap();
    assert!(csv.starts_with("summary,tls,tss,tcs,overall\nsummary,"));
    // rerun is byte-identical
    assert_eq!(rrkit(&args).stdout, o.stdout);
}

#[test]
fn summaries_without_parses_are_listed() {
    let d = tempfile::tempdir().unwrap();
    let txt = d.path().join("plain.txt");
    std::fs::write(&txt, "A horse came.").unwrap();
    let args = golden_args(&[s(&txt)]);
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let o = rrkit(&args);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("lacking parses"));
}

#[test]
fn plain_text_scoring_and_rating_comparison() {
    let d = tempfile::tempdir().unwrap();
    let reference = d.path().join("reference.txt");
    std::fs::write(&reference, "The camel worked all day. The horse rested in the stable.").unwrap();
    let sums = d.path().join("summaries");
    std::fs::create_dir(&sums).unwrap();
    let texts = [
        ("a", "The camel worked. The horse rested.", 3),
        ("b", "A camel worked all day.", 2),
        ("c", "Birds sang.", 1),
        ("d", "The camel worked all day and the horse rested in the stable.", 3),
    ];
    let mut ratings = String::from("summary\tscore\n");
    for (id, t, r) in texts {
        std::fs::write(sums.join(format!("{id}.txt")), t).unwrap();
        ratings.push_str(&format!("{id}\t{r}\n"));
    }
    let rfile = d.path().join("ratings.tsv");
    std::fs::write(&rfile, ratings).unwrap();
    let out = d.path().join("reports");
    let cmp = d.path().join("cmp.json");
    let o = rrkit(&[
        "simscore", "--reference", s(&reference), s(&sums), "--out-dir", s(&out), "--against-ratings", s(&rfile),
        "--ratings-out", s(&cmp),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let names: Vec<_> = std::fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 4);
    let cmp: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cmp).unwrap()).unwrap();
    assert_eq!(cmp["n"], 4);
    assert!(cmp["pearson"].as_f64().unwrap() > 0.5);
}

#[test]
fn lingfeat_rows_follow_file_names() {
    let d = tempfile::tempdir().unwrap();
    let texts = d.path().join("texts");
    std::fs::create_dir(&texts).unwrap();
    for i in (0..20).rev() {
        std::fs::write(texts.join(format!("t{i:02}.txt")), format!("Text number {i} is short. It has two sentences.")).unwrap();
    }
    let out = d.path().join("ling.csv");
    let o = rrkit(&["lingfeat", s(&texts), "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    let ids: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    let want: Vec<String> = (0..20).map(|i| format!("t{i:02}")).collect();
    assert_eq!(ids, want);
    assert!(csv.lines().next().unwrap().contains(",FRE,"));
}

#[test]
fn fluency_rows_carry_fifteen_features() {
    let d = tempfile::tempdir().unwrap();
    let good = d.path().join("a.tsv");
    std::fs::write(&good, "start_s\tend_s\tkind\tsyllables\n0\t60\tspeech\t300\n60\t90\tlp\t\n90\t100\tfp\t\n100\t101\tspeech\t5\n").unwrap();
    let out = d.path().join("f.csv");
    let o = rrkit(&["fluency", s(&good), "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    assert_eq!(header.len(), 2 + 15);

    let bad = d.path().join("b.tsv");
    std::fs::write(&bad, "start_s\tend_s\tkind\tsyllables\n0\tx\tspeech\t3\n").unwrap();
    let o = rrkit(&["fluency", s(&good), s(&bad), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 2);
}

#[test]
fn config_file_supplies_defaults() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("run.cfg");
    std::fs::write(&cfg, "min_pause = 100\n").unwrap();
    let tl = d.path().join("a.tsv");
    std::fs::write(&tl, "start_s\tend_s\tkind\tsyllables\n0\t1\tspeech\t3\n1\t2\tlp\t\n2\t3\tspeech\t3\n").unwrap();
    let out = d.path().join("f.csv");
    let o = rrkit(&["--config", s(&cfg), "fluency", s(&tl), "--out", s(&out)]);
    assert!(o.status.success());
    // a 1 s silence is below the configured 100 s threshold: no pauses
    let row = std::fs::read_to_string(&out).unwrap();
    let values: Vec<&str> = row.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(values[2 + 10], "0");
    let o = rrkit(&["--config", s(&cfg), "fluency", s(&tl), "--out", s(&out), "--min-pause", "0.25"]);
    assert!(o.status.success());
    let row = std::fs::read_to_string(&out).unwrap();
    assert_eq!(row.lines().nth(1).unwrap().split(',').nth(2 + 10).unwrap(), "1");
}
