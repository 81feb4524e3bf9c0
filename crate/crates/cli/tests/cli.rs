mod common;

use std::fs;

use proptest::prelude::*;
use serde_json::Value;
use simplexity::format::{self, BehaviorFile};
use simplexity_core::contextuality::{Behavior, Scenario};
use simplexity_core::gdit::{build_gdit, symmetric_disturbance};
use simplexity_core::{fixtures, rat, Eigenstate, Measurement, PureState, Rational, Theory};

fn stdout(args: &[&str]) -> (i32, String, String) {
    let out = common::run(args);
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn fixture(name: &str) -> String {
    fs::read_to_string(common::root().join("fixtures").join(name)).unwrap()
}

#[test]
fn suite_is_byte_stable_in_both_formats() {
    for args in common::SUITE {
        for format in ["text", "structured"] {
            let mut full = vec!["--format", format];
            full.extend_from_slice(args);
            let a = common::run(&full);
            let b = common::run(&full);
            assert_eq!(a.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
            assert_eq!(a.stdout, b.stdout, "{args:?} {format}");
        }
    }
}

#[test]
fn verified_runs_report_pass() {
    let (code, out, err) = stdout(&["--verify", "check-simplex", "fixtures/diamond.theory"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("result: non-simplex, 1 dependency\n"));
    assert!(out.ends_with("verify: pass\n"));
    assert!(out.contains("input: fixtures/diamond.theory sha256="));
}

#[test]
fn structured_output_is_canonical_json() {
    let (code, out, _) = stdout(&["--format", "structured", "uncertainty", "fixtures/skewed_diamond.theory"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["command"], "uncertainty");
    assert_eq!(v["summary"], "1/8");
    assert_eq!(v["values"]["uncertainty"], "1/8");
    assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert!(v.get("verify").is_none());
    assert_eq!(out, format!("{}\n", serde_json::to_string_pretty(&v).unwrap()));
}

#[test]
fn known_results() {
    let cases: &[(&[&str], &str)] = &[
        (&["check-simplex", "fixtures/classical.theory"], "simplex"),
        (&["comeasurable", "fixtures/gdit22.theory", "--pair", "X", "Z"], "not comeasurable"),
        (&["chernoff", "--epsilon", "1/2", "--delta", "1/10", "--outcomes", "2"], "72"),
        (&["os-eval", "fixtures/os_box_QA.behavior"], "-3, no-signaling: pass"),
        (&["find-coherent", "fixtures/spekkens_modified.theory", "--inverter"], "impossible"),
        (&["jd", "fixtures/xos_box.behavior"], "no joint distribution"),
    ];
    for (args, want) in cases {
        let (code, out, _) = stdout(args);
        assert_eq!(code, 0);
        assert!(out.contains(&format!("\nresult: {want}\n")), "{args:?}:\n{out}");
    }
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.theory");
    fs::write(&bad, "[[measurement]]\nname = \"X\"\noutcomes = \"two\"\n").unwrap();
    let invalid = dir.path().join("invalid.theory");
    fs::write(
        &invalid,
        "[[measurement]]\nname = \"X\"\noutcomes = 2\n\n[[state]]\nname = \"s\"\ndists = [[\"1/2\", \"1/3\"]]\n",
    )
    .unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["check-simplex", "fixtures/does_not_exist.theory"],
        vec!["check-simplex", bad.to_str().unwrap()],
        vec!["check-simplex", invalid.to_str().unwrap()],
        vec!["comeasurable", "fixtures/diamond.theory", "--pair", "X", "Q"],
        vec!["uncertainty", "fixtures/chain.graph"],
        vec!["frobnicate"],
        vec!["chernoff", "--epsilon", "x", "--delta", "1/10", "--outcomes", "2"],
    ];
    for args in cases {
        let (code, out, err) = stdout(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(out.is_empty(), "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn correspond_writes_a_loadable_theory() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("regular.theory");
    let (code, _, err) = stdout(&[
        "correspond", "--inputs", "2", "--outputs", "2", "--disturbance", "asymmetric", "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let t = format::parse_theory(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(simplexity_core::statics::uncertainty(&t).unwrap(), rat(1, 8));
}

#[test]
fn fixture_files_match_built_in_data() {
    let theories = [
        ("classical.theory", fixtures::classical_2bit()),
        ("diamond.theory", fixtures::diamond()),
        ("skewed_diamond.theory", fixtures::skewed_diamond()),
        ("polya.theory", fixtures::polya(rat(1, 3))),
        ("gdit22.theory", fixtures::gdit22()),
        ("spekkens.theory", fixtures::spekkens()),
        ("spekkens_modified.theory", fixtures::spekkens_modified()),
        ("rotated_y.theory", fixtures::rotated_y()),
    ];
    for (name, t) in theories {
        assert_eq!(format::parse_theory(&fixture(name)).unwrap(), t, "{name}");
    }
    let behaviors = [
        ("os_box_QA.behavior", fixtures::os_box_a()),
        ("os_anticorrelated.behavior", fixtures::os_anticorrelated()),
        ("xos_box.behavior", fixtures::xos_box()),
    ];
    for (name, b) in behaviors {
        assert_eq!(format::parse_behavior(&fixture(name)).unwrap(), BehaviorFile::Behavior(b), "{name}");
    }
    assert_eq!(format::parse_simplex(&fixture("spekkens_s_type.simplex")).unwrap(), fixtures::spekkens_s_type());
    let g = build_gdit(2, 2).unwrap();
    assert_eq!(format::parse_rules(&fixture("gdit22_symmetric.rules")).unwrap(), symmetric_disturbance(&g));
    assert_eq!(
        format::parse_rules(&fixture("gdit22_asymmetric.rules")).unwrap(),
        fixtures::asymmetric_rules(&g).unwrap()
    );
}

fn dist(weights: Vec<i64>) -> Vec<Rational> {
    let total: i64 = weights.iter().sum();
    weights.into_iter().map(|w| rat(w, total)).collect()
}

fn theory_strategy() -> impl Strategy<Value = Theory> {
    (1usize..=3, 2usize..=3, 1usize..=5).prop_flat_map(|(m, n, k)| {
        proptest::collection::vec(proptest::collection::vec(proptest::collection::vec(0i64..=9, n), m), k).prop_map(
            move |raw| {
                let ms: Vec<Measurement> = (0..m).map(|i| Measurement::new(format!("M{i}"), n)).collect();
                let states: Vec<PureState> = raw
                    .into_iter()
                    .enumerate()
                    .map(|(s, dists)| {
                        let d = dists
                            .into_iter()
                            .enumerate()
                            .map(|(j, mut w)| {
                                if s == 0 && j == 0 {
                                    w.iter_mut().skip(1).for_each(|x| *x = 0);
                                }
                                w[0] += 1;
                                dist(w)
                            })
                            .collect();
                        PureState::new(format!("s{s}"), d)
                    })
                    .collect();
                let eigen = vec![Eigenstate { measurement: "M0".into(), outcome: 0, state: "s0".into() }];
                Theory::new(ms, states, eigen)
            },
        )
    })
}

fn behavior_strategy() -> impl Strategy<Value = Behavior> {
    (proptest::collection::vec(1i64..=9, 4), proptest::collection::vec(1i64..=9, 4)).prop_map(|(a, b)| {
        let ms = ["A", "B", "C"].iter().map(|n| Measurement::new(*n, 2)).collect();
        let s = Scenario::new(ms, &[&["A", "B"], &["B", "C"]]).unwrap();
        Behavior::new(s, vec![dist(a), dist(b)]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn theories_round_trip(t in theory_strategy()) {
        let text = format::serialize_theory(&t);
        prop_assert_eq!(format::parse_theory(&text).unwrap(), t);
    }

    #[test]
    fn behaviors_round_trip(b in behavior_strategy()) {
        let text = format::serialize_behavior(&b);
        prop_assert_eq!(format::parse_behavior(&text).unwrap(), BehaviorFile::Behavior(b));
    }
}
