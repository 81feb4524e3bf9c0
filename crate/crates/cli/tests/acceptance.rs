//! Acceptance checks, one line per criterion.
//!
//! Criteria listed in `KNOWN_FAILURES` are expected to fail on the reference
//! data; the harness exits nonzero on any other failure and also when a
//! known failure unexpectedly passes.

mod common;

use std::time::{Duration, Instant};

use rand::Rng;
use simplexity_core::comeasure::{build_joint_system, comeasurable, Comeasurability};
use simplexity_core::contextuality::{
    assignment_behavior, conditional_jd_2x2, deterministic_assignments, gleason_nosignaling_check, jd_feasible,
    jd::marginals_match, os_value, product_jd, xos_value, Behavior, CongruenceGraph, JdResult, Scenario,
};
use simplexity_core::gdit::{build_gdit, measurement_names};
use simplexity_core::geometry::{self, theory_conditions, AffineDependency};
use simplexity_core::ontology::{
    compress_g, find_ontic_permutation, verify_permutation, CoherentMap, OnticModel, PermutationSearch,
    PrepContextuality, prep_contextuality_witness,
};
use simplexity_core::statics::{chernoff_trials, simulate_clone_tomography, uncertainty, Delta, TomographyPlan};
use simplexity_core::{fixtures, outcome_tuples, rat, sampling, Eigenstate, Measurement, Mixture, Point, PureState, Rational, Theory};

const KNOWN_FAILURES: &[u32] = &[3];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: Vec<String>, ok: impl Into<String>) -> Outcome {
    if failures.is_empty() {
        Outcome { pass: true, detail: ok.into() }
    } else {
        Outcome { pass: false, detail: failures.join("; ") }
    }
}

fn ratio(xs: &[(i64, i64)]) -> Vec<Rational> {
    xs.iter().map(|&(n, d)| rat(n, d)).collect()
}

/// `1 − max over outcome tuples of the mean probability`, by enumeration.
fn tuple_uncertainty(p: &Point) -> Rational {
    let counts: Vec<usize> = p.dists().iter().map(Vec::len).collect();
    let m = Rational::from(counts.len());
    let best = outcome_tuples(&counts)
        .iter()
        .map(|t| t.iter().enumerate().map(|(j, &a)| p.prob(j, a).clone()).sum::<Rational>() / &m)
        .max()
        .unwrap();
    Rational::one() - best
}

fn enumerated_uncertainty(t: &Theory) -> Rational {
    t.pure_states.iter().map(|s| tuple_uncertainty(&s.point)).max().unwrap()
}

/// Coefficient vector of `left − right` over the theory's states.
fn coeffs(t: &Theory, d: &AffineDependency) -> Vec<Rational> {
    t.state_names().iter().map(|n| d.left.weight(n) - d.right.weight(n)).collect()
}

/// The dependencies span exactly the expected coefficient vectors.
fn same_span(t: &Theory, got: &[AffineDependency], want: &[Vec<Rational>]) -> bool {
    let g: Vec<_> = got.iter().map(|d| coeffs(t, d)).collect();
    let mut both = g.clone();
    both.extend(want.iter().cloned());
    geometry::rank(&g) == want.len() && geometry::rank(want) == want.len() && geometry::rank(&both) == want.len()
}

fn half_pair(t: &Theory, a: &str, b: &str) -> Vec<Rational> {
    t.state_names()
        .iter()
        .map(|n| {
            let l = [format!("{a}+"), format!("{a}-")].contains(n);
            let r = [format!("{b}+"), format!("{b}-")].contains(n);
            rat(i64::from(l) - i64::from(r), 2)
        })
        .collect()
}

fn simpliciality() -> Outcome {
    let mut fails = Vec::new();
    let mut slowest = Duration::ZERO;
    let cases: [(&str, Theory, Option<Vec<(&str, &str)>>); 4] = [
        ("classical", fixtures::classical_2bit(), None),
        ("diamond", fixtures::diamond(), Some(vec![("X", "Z")])),
        ("skewed diamond", fixtures::skewed_diamond(), Some(vec![("X", "Z")])),
        ("spekkens", fixtures::spekkens(), Some(vec![("X", "Y"), ("Y", "Z")])),
    ];
    for (name, t, want) in cases {
        let start = Instant::now();
        let pts = t.points();
        let simplex = geometry::is_simplex(&pts).unwrap();
        let deps = theory_conditions(&t, None).unwrap();
        slowest = slowest.max(start.elapsed());
        match want {
            None => {
                if !simplex || !deps.is_empty() {
                    fails.push(format!("{name} should be a simplex"));
                }
            }
            Some(pairs) => {
                let want: Vec<_> = pairs.iter().map(|(a, b)| half_pair(&t, a, b)).collect();
                let holds = deps.iter().all(|d| d.holds_in(&t).unwrap());
                if simplex || !holds || !same_span(&t, &deps, &want) {
                    fails.push(format!("{name}: got {} dependencies", deps.len()));
                }
            }
        }
    }
    if slowest >= Duration::from_secs(1) {
        fails.push(format!("slowest case took {slowest:?}"));
    }
    outcome(fails, format!("4 theories, slowest {:.1} ms", slowest.as_secs_f64() * 1e3))
}

fn uncertainties() -> Outcome {
    let mut fails = Vec::new();
    let cases = [
        ("classical", fixtures::classical_2bit(), Rational::zero()),
        ("skewed diamond", fixtures::skewed_diamond(), rat(1, 8)),
        ("diamond", fixtures::diamond(), rat(1, 4)),
    ];
    for (name, t, want) in cases {
        let got = uncertainty(&t).unwrap();
        if got != want || enumerated_uncertainty(&t) != want {
            fails.push(format!("{name}: {got}, expected {want}"));
        }
    }
    for m in 2..=3 {
        for n in 2..=3 {
            let g = build_gdit(m, n).unwrap();
            let got = uncertainty(&g.theory).unwrap();
            if !got.is_zero() || !enumerated_uncertainty(&g.theory).is_zero() {
                fails.push(format!("gdit ({m},{n}): {got}"));
            }
        }
    }
    let p = fixtures::os_box_a().marginal_point().unwrap();
    if tuple_uncertainty(&p) != rat(1, 2) {
        fails.push(format!("OS box marginals: {}", tuple_uncertainty(&p)));
    }
    outcome(fails, "0, 1/8, 1/4, gdits 0, OS box 1/2")
}

fn random_dist<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    let w: Vec<i64> = (0..n).map(|_| rng.random_range(1..=1000)).collect();
    let total: i64 = w.iter().sum();
    w.into_iter().map(|x| rat(x, total)).collect()
}

/// Regular theory with one eigenstate per outcome and generic probabilities.
fn random_regular(seed: u64) -> Theory {
    let mut rng = sampling::rng(seed, 42);
    let m = rng.random_range(2..=3);
    let n = rng.random_range(2..=3);
    let ms: Vec<Measurement> = (0..m).map(|i| Measurement::new(format!("M{i}"), n)).collect();
    let mut states = Vec::new();
    let mut eigen = Vec::new();
    for i in 0..m {
        for a in 0..n {
            let name = format!("M{i}={a}");
            let d = (0..m)
                .map(|j| {
                    if j == i {
                        (0..n).map(|k| Rational::from(u32::from(k == a))).collect()
                    } else {
                        random_dist(&mut rng, n)
                    }
                })
                .collect();
            states.push(PureState::new(name.clone(), d));
            eigen.push(Eigenstate { measurement: format!("M{i}"), outcome: a, state: name });
        }
    }
    Theory::new(ms, states, eigen)
}

fn comeasurability() -> Outcome {
    let mut fails = Vec::new();
    if !comeasurable(&fixtures::classical_2bit(), &["X", "Z"]).unwrap().is_yes() {
        fails.push("classical pair not comeasurable".into());
    }

    let t = fixtures::skewed_diamond();
    let js = build_joint_system(&t, &["X", "Z"]).unwrap();
    let forced = js.forced_values().unwrap();
    let pinned = |state: &str| forced.iter().find(|f| f.state == state && f.tuple == [1, 0]).map(|f| f.value.clone());
    if pinned("X+") != Some(Rational::zero()) || pinned("Z+") != Some(rat(3, 4)) {
        fails.push(format!("skewed diamond forced values {:?} {:?}", pinned("X+"), pinned("Z+")));
    }
    match comeasurable(&t, &["X", "Z"]).unwrap() {
        Comeasurability::No(cert) if cert.verify(&js.system) => {}
        Comeasurability::No(_) => fails.push("skewed diamond certificate does not verify".into()),
        Comeasurability::Yes(_) => fails.push("skewed diamond pair is comeasurable (joint LP feasible)".into()),
    }

    for m in 2..=3 {
        for n in 2..=3 {
            let g = build_gdit(m, n).unwrap();
            let names = measurement_names(m);
            for i in 0..m {
                for j in i + 1..m {
                    let pair = [names[i].as_str(), names[j].as_str()];
                    let js = build_joint_system(&g.theory, &pair).unwrap();
                    match comeasurable(&g.theory, &pair).unwrap() {
                        Comeasurability::No(cert) if cert.verify(&js.system) => {}
                        _ => fails.push(format!("gdit ({m},{n}) {pair:?}")),
                    }
                }
            }
        }
    }

    let mut mismatches = 0;
    for seed in 0..200 {
        let t = random_regular(seed);
        let k = t.measurements.len();
        for i in 0..k {
            for j in i + 1..k {
                let assoc = t.associated_states(&[i, j]).unwrap();
                let pts: Vec<_> = assoc.iter().map(|&s| t.pure_states[s].point.flatten()).collect();
                let simplex = geometry::is_simplex(&pts).unwrap();
                let pair = [t.measurements[i].name.as_str(), t.measurements[j].name.as_str()];
                if comeasurable(&t, &pair).unwrap().is_yes() != simplex {
                    mismatches += 1;
                }
            }
        }
    }
    if mismatches > 0 {
        fails.push(format!("{mismatches} random pairs break comeasurable iff simplex"));
    }
    outcome(fails, "classical yes, skewed diamond no, gdits no, 200 random theories agree")
}

fn ontology() -> Outcome {
    let mut fails = Vec::new();
    let q = |xs: &[i64]| xs.iter().map(|&k| rat(k, 4)).collect::<Vec<_>>();
    let h = |xs: &[i64]| xs.iter().map(|&k| rat(k, 2)).collect::<Vec<_>>();

    let d = OnticModel::g_type_product(&fixtures::diamond()).unwrap();
    for (s, want) in [
        ("X+", h(&[1, 1, 0, 0])),
        ("X-", h(&[0, 0, 1, 1])),
        ("Z+", h(&[1, 0, 1, 0])),
        ("Z-", h(&[0, 1, 0, 1])),
    ] {
        if d.distribution(s).unwrap() != want.as_slice() {
            fails.push(format!("diamond g-type {s}"));
        }
    }

    let sp = OnticModel::g_type_product(&fixtures::spekkens()).unwrap();
    for (s, want) in [
        ("X+", q(&[1, 1, 1, 1, 0, 0, 0, 0])),
        ("X-", q(&[0, 0, 0, 0, 1, 1, 1, 1])),
        ("Y+", q(&[1, 1, 0, 0, 1, 1, 0, 0])),
        ("Y-", q(&[0, 0, 1, 1, 0, 0, 1, 1])),
        ("Z+", q(&[1, 0, 1, 0, 1, 0, 1, 0])),
        ("Z-", q(&[0, 1, 0, 1, 0, 1, 0, 1])),
    ] {
        if sp.distribution(s).unwrap() != want.as_slice() {
            fails.push(format!("spekkens g-type {s}"));
        }
    }

    let st = OnticModel::s_type(&fixtures::spekkens(), &fixtures::spekkens_s_type()).unwrap();
    for (s, want) in [
        ("X+", h(&[1, 1, 0, 0])),
        ("X-", h(&[0, 0, 1, 1])),
        ("Y+", h(&[1, 0, 1, 0])),
        ("Y-", h(&[0, 1, 0, 1])),
        ("Z+", h(&[1, 0, 0, 1])),
        ("Z-", h(&[0, 1, 1, 0])),
    ] {
        if st.distribution(s).unwrap() != want.as_slice() {
            fails.push(format!("spekkens s-type {s}"));
        }
    }

    // (a1+a2, a3+a4 | a1+a3, a2+a4)
    let by_hand = |a: &[Rational]| {
        vec![
            vec![&a[0] + &a[1], &a[2] + &a[3]],
            vec![&a[0] + &a[2], &a[1] + &a[3]],
        ]
    };
    let samples = [
        ratio(&[(1, 10), (2, 10), (3, 10), (4, 10)]),
        ratio(&[(1, 2), (0, 1), (0, 1), (1, 2)]),
        ratio(&[(0, 1), (1, 2), (1, 2), (0, 1)]),
        ratio(&[(1, 1), (0, 1), (0, 1), (0, 1)]),
    ];
    for a in &samples {
        if compress_g(&[2, 2], a).unwrap().0 != by_hand(a) {
            fails.push(format!("compression of {a:?}"));
        }
    }
    let collide_a = compress_g(&[2, 2], &samples[1]).unwrap();
    let collide_b = compress_g(&[2, 2], &samples[2]).unwrap();
    if collide_a != collide_b || collide_a.0 != vec![h(&[1, 1]), h(&[1, 1])] {
        fails.push("collision example".into());
    }
    outcome(fails, "g-type, s-type and compression match, collision reproduced")
}

/// Lexicographically first permutation accepted by `f`, and how many were tried.
fn brute_force(k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> (Option<Vec<usize>>, u64) {
    fn go(p: &mut Vec<usize>, used: &mut [bool], f: &mut dyn FnMut(&[usize]) -> bool, n: &mut u64) -> bool {
        if p.len() == used.len() {
            *n += 1;
            return f(p);
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                p.push(v);
                if go(p, used, f, n) {
                    return true;
                }
                p.pop();
                used[v] = false;
            }
        }
        false
    }
    let (mut p, mut used, mut n) = (Vec::new(), vec![false; k], 0);
    let found = go(&mut p, &mut used, f, &mut n);
    (found.then_some(p), n)
}

fn coherent_operations() -> Outcome {
    let mut fails = Vec::new();
    let start = Instant::now();
    let sp = fixtures::spekkens();
    let inv = CoherentMap::inverter(&sp).unwrap();
    let modified = fixtures::spekkens_modified();
    let cases = [
        ("spekkens g-type", OnticModel::g_type_product(&sp).unwrap(), inv.clone(), Some(vec![7, 6, 5, 4, 3, 2, 1, 0])),
        ("spekkens s-type", OnticModel::s_type(&sp, &fixtures::spekkens_s_type()).unwrap(), inv, None),
        (
            "modified",
            OnticModel::g_type_product(&modified).unwrap(),
            CoherentMap::inverter(&modified).unwrap(),
            None,
        ),
    ];
    for (name, model, map, want) in &cases {
        let k = model.ontic_points.len();
        let (oracle, _) = brute_force(k, &mut |s| verify_permutation(model, map, s).unwrap());
        let got = match find_ontic_permutation(model, map).unwrap() {
            PermutationSearch::Found(s) => Some(s),
            PermutationSearch::Impossible { .. } => None,
        };
        if &got != want || &oracle != want {
            fails.push(format!("{name}: search {got:?}, exhaustive {oracle:?}"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(5) {
        fails.push(format!("took {elapsed:?}"));
    }
    outcome(
        fails,
        format!("inverter pairs 1-8 2-7 3-6 4-5, s-type and modified impossible, {:.2} s", elapsed.as_secs_f64()),
    )
}

fn prep_contextuality() -> Outcome {
    let mut fails = Vec::new();
    let d = OnticModel::g_type_product(&fixtures::diamond()).unwrap();
    match prep_contextuality_witness(&d, &Mixture::uniform(["X+", "X-"]), &Mixture::uniform(["Z+", "Z-"])).unwrap() {
        PrepContextuality::NoWitness { distribution } if distribution == vec![rat(1, 4); 4] => {}
        other => fails.push(format!("diamond X/Z: {other:?}")),
    }

    let t = fixtures::rotated_y();
    let m = OnticModel::g_type_product(&t).unwrap();
    let mut xis = Vec::new();
    for ((delta, upsilon), tag) in fixtures::rotated_pairs().into_iter().zip(["a", "b"]) {
        let one = Rational::one();
        // Product measure weight of the 00 ontic state, averaged over the pair.
        let corner = (&delta * &upsilon + (&one - &delta) * (&one - &upsilon)) / Rational::from(2i64);
        let xi = corner * Rational::from(4i64) - &one;
        let quarter = rat(1, 4);
        let want = vec![
            &quarter * (&one + &xi),
            &quarter * (&one - &xi),
            &quarter * (&one - &xi),
            &quarter * (&one + &xi),
        ];
        let y = Mixture::uniform([format!("Y{tag}+"), format!("Y{tag}-")]);
        match prep_contextuality_witness(&m, &y, &Mixture::uniform(["X+", "X-"])).unwrap() {
            PrepContextuality::Witness { left, right } if left == want && right == vec![quarter.clone(); 4] => {}
            other => fails.push(format!("Y{tag}: {other:?}")),
        }
        xis.push(xi);
    }
    if xis[0] == xis[1] {
        fails.push("rotated pairs share a xi".into());
    }
    outcome(fails, format!("diamond no witness, rotated witnesses with xi {} and {}", xis[0], xis[1]))
}

fn deterministic_range(s: &Scenario, f: fn(&Behavior) -> simplexity_core::Result<Rational>) -> (Rational, Rational, usize) {
    let values: Vec<Rational> = deterministic_assignments(s)
        .unwrap()
        .map(|v| f(&assignment_behavior(s, &v).unwrap()).unwrap())
        .collect();
    (values.iter().min().unwrap().clone(), values.iter().max().unwrap().clone(), values.len())
}

fn contextuality_bounds() -> Outcome {
    let mut fails = Vec::new();
    let os = fixtures::os_scenario();
    let (lo, hi, n) = deterministic_range(&os, os_value);
    if (lo.clone(), hi.clone(), n) != (rat(-1, 1), rat(3, 1), 8) {
        fails.push(format!("OS assignments: {n} with range [{lo}, {hi}]"));
    }
    let xs = fixtures::xos_scenario();
    let (_, xhi, xn) = deterministic_range(&xs, xos_value);
    if (xhi.clone(), xn) != (rat(2, 1), 81) {
        fails.push(format!("XOS assignments: {xn} with max {xhi}"));
    }

    let os_box = fixtures::os_box_a();
    if os_value(&os_box).unwrap() != rat(-3, 1) || !gleason_nosignaling_check(&os_box).is_nonsignaling() {
        fails.push("OS box".into());
    }
    for (name, c) in fixtures::os_table() {
        let b = c.to_behavior(&os).unwrap();
        if os_value(&b).unwrap() != rat(-3, 1) || gleason_nosignaling_check(&b).is_nonsignaling() {
            fails.push(format!("OS gdit {name}"));
        }
    }
    let xos_box = fixtures::xos_box();
    if xos_value(&xos_box).unwrap() != rat(4, 1) || !gleason_nosignaling_check(&xos_box).is_nonsignaling() {
        fails.push("XOS box".into());
    }
    for (k, c) in fixtures::xos_table().iter().enumerate() {
        let b = c.to_behavior(&xs).unwrap();
        if xos_value(&b).unwrap() != rat(4, 1) || gleason_nosignaling_check(&b).is_nonsignaling() {
            fails.push(format!("XOS gdit R{}", k + 1));
        }
    }
    outcome(fails, "OS [-1, 3] over 8, XOS max 2 over 81, boxes reach -3 and 4")
}

fn positive_dist<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    let w: Vec<i64> = (0..n).map(|_| rng.random_range(1..=20)).collect();
    let total: i64 = w.iter().sum();
    w.into_iter().map(|x| rat(x, total)).collect()
}

fn exists(b: &Behavior) -> bool {
    matches!(jd_feasible(b).unwrap(), JdResult::Exists(_))
}

fn joint_distributions() -> Outcome {
    let mut fails = Vec::new();
    for (name, b) in [("OS box", fixtures::os_box_a()), ("XOS box", fixtures::xos_box())] {
        if !matches!(jd_feasible(&b).unwrap(), JdResult::NoJd(_)) {
            fails.push(format!("{name} has a joint distribution"));
        }
    }

    let binary = |names: &[&str]| names.iter().map(|n| Measurement::new(*n, 2)).collect::<Vec<_>>();
    let mut rng = sampling::rng(2024, 8);
    let mut bad_product = 0;
    for k in 0..100 {
        let split = 1 + k % 3;
        let names = ["A", "B", "C", "D"];
        let s = Scenario::new(binary(&names), &[&names[..split], &names[split..]]).unwrap();
        let b = Behavior::new(s.clone(), vec![positive_dist(&mut rng, 1 << split), positive_dist(&mut rng, 1 << (4 - split))])
            .unwrap();
        let jd = product_jd(&CongruenceGraph::from_scenario(&s), &b).unwrap();
        if !exists(&b) || !exists(&jd) || !marginals_match(&b, &jd.stats[0]) {
            bad_product += 1;
        }
    }

    let tuples = outcome_tuples(&[2, 2, 2, 2]);
    let mut bad_conditional = 0;
    for _ in 0..100 {
        let global = positive_dist(&mut rng, 16);
        let marg = |keep: &[usize]| {
            let mut out = vec![Rational::zero(); 1 << keep.len()];
            for (t, p) in tuples.iter().zip(&global) {
                out[keep.iter().fold(0, |acc, &k| acc * 2 + t[k])] += p;
            }
            out
        };
        let s = Scenario::new(
            binary(&["A1", "A2", "B1", "B2"]),
            &[&["A1", "B1", "B2"], &["A2", "B1", "B2"], &["B1", "B2"]],
        )
        .unwrap();
        let b = Behavior::new(s, vec![marg(&[0, 2, 3]), marg(&[1, 2, 3]), marg(&[2, 3])]).unwrap();
        let jd = conditional_jd_2x2(&b).unwrap();
        if !exists(&b) || !exists(&jd) || !marginals_match(&b, &jd.stats[0]) {
            bad_conditional += 1;
        }
    }
    if bad_product + bad_conditional > 0 {
        fails.push(format!("{bad_product} product and {bad_conditional} conditional instances failed"));
    }
    outcome(fails, "boxes have none, 100 product and 100 conditional instances round-trip")
}

fn tomography() -> Outcome {
    let mut fails = Vec::new();
    let start = Instant::now();
    let trials = chernoff_trials(&rat(1, 2), &Delta::Exact(rat(1, 10)), 2).unwrap();
    let mut plan = TomographyPlan::chernoff(rat(1, 2), Delta::Exact(rat(1, 10)), 2).unwrap();
    plan.trials = trials;
    let t = fixtures::diamond();
    let runs = 1000u64;
    let failed = (0..runs)
        .filter(|&seed| simulate_clone_tomography(&t, "X+", &plan, seed).unwrap().failed())
        .count();
    let rate = failed as f64 / runs as f64;
    let bound = 0.1 + 3.0 * (0.1f64 * 0.9 / runs as f64).sqrt();
    if rate > bound {
        fails.push(format!("failure rate {rate} above {bound:.4}"));
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(30) {
        fails.push(format!("took {elapsed:?}"));
    }
    outcome(
        fails,
        format!("t = {trials}, failure rate {rate:.3} <= {bound:.4}, {:.1} s", elapsed.as_secs_f64()),
    )
}

fn determinism() -> Outcome {
    let mut fails = Vec::new();
    for args in common::SUITE {
        for format in ["text", "structured"] {
            let mut full = vec!["--verify", "--format", format];
            full.extend_from_slice(args);
            let a = common::run(&full);
            let b = common::run(&full);
            let label = args.join(" ");
            if a.stdout != b.stdout || a.stderr != b.stderr || a.status.code() != b.status.code() {
                fails.push(format!("not reproducible: {label} ({format})"));
            }
            let out = String::from_utf8_lossy(&a.stdout);
            let verified = match format {
                "text" => out.contains("\nverify: pass\n"),
                _ => serde_json::from_str::<serde_json::Value>(&out)
                    .map(|v| v["verify"]["result"] == "pass")
                    .unwrap_or(false),
            };
            if a.status.code() != Some(0) || !verified {
                fails.push(format!("verify failed: {label} ({format})"));
            }
        }
    }
    outcome(fails, format!("{} invocations in both formats, byte-identical and verified", common::SUITE.len()))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (1, "simpliciality", simpliciality),
        (2, "uncertainty", uncertainties),
        (3, "comeasurability", comeasurability),
        (4, "ontology", ontology),
        (5, "coherent operations", coherent_operations),
        (6, "preparation contextuality", prep_contextuality),
        (7, "contextuality bounds", contextuality_bounds),
        (8, "joint distributions", joint_distributions),
        (9, "tomography", tomography),
        (10, "determinism", determinism),
    ];
    let mut unexpected = 0;
    for (n, name, check) in criteria {
        let o = check();
        let known = KNOWN_FAILURES.contains(&n);
        let tag = match (o.pass, known) {
            (true, false) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
            (true, true) => "PASS (unexpected)",
        };
        if o.pass == known {
            unexpected += 1;
        }
        println!("criterion {n} {name}: {tag}: {}", o.detail);
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected result(s)");
        std::process::exit(1);
    }
}
