//! Regenerates the files under `fixtures/` from the built-in examples.
//!
//! Run from the workspace root: `cargo run -p simplexity --example write_fixtures`.

use std::fs;
use std::path::Path;

use simplexity::format;
use simplexity_core::contextuality::{Behavior, CongruenceGraph, Scenario};
use simplexity_core::gdit::{build_gdit, symmetric_disturbance};
use simplexity_core::ontology::CoherentMap;
use simplexity_core::statics::DisturbanceRule;
use simplexity_core::{fixtures, rat, Measurement, Mixture, Rational, Theory};

fn write(dir: &Path, name: &str, text: String) {
    fs::write(dir.join(name), text).expect("write fixture");
}

/// Every outcome of every measurement leaves the state where it was.
pub fn identity_rules(t: &Theory) -> Vec<DisturbanceRule> {
    t.measurements
        .iter()
        .map(|m| {
            let mut r = DisturbanceRule::new(&m.name);
            for s in &t.pure_states {
                for a in 0..m.outcomes {
                    r.set(&s.name, Some(a), Mixture::pure(&s.name));
                }
            }
            r
        })
        .collect()
}

fn binary(names: &[&str]) -> Vec<Measurement> {
    names.iter().map(|n| Measurement::new(*n, 2)).collect()
}

fn r(s: &str) -> Rational {
    s.parse().unwrap()
}

/// Contexts `{A,B}` and `{C}` with correlated `A,B`.
fn product_behavior() -> Behavior {
    let s = Scenario::new(binary(&["A", "B", "C"]), &[&["A", "B"], &["C"]]).unwrap();
    Behavior::new(s, vec![vec![r("1/2"), r("1/8"), r("1/8"), r("1/4")], vec![r("1/3"), r("2/3")]]).unwrap()
}

/// Marginals of a fixed global distribution on `A1,A2,B1,B2` onto
/// `{A1,B1,B2}`, `{A2,B1,B2}` and `{B1,B2}`.
fn conditional_behavior() -> Behavior {
    let global: Vec<Rational> = (1..=16).map(|k| rat(k, 136)).collect();
    let gs = Scenario::new(binary(&["A1", "A2", "B1", "B2"]), &[&["A1", "A2", "B1", "B2"]]).unwrap();
    let g = Behavior::new(gs, vec![global]).unwrap();
    let s = Scenario::new(
        binary(&["A1", "A2", "B1", "B2"]),
        &[&["A1", "B1", "B2"], &["A2", "B1", "B2"], &["B1", "B2"]],
    )
    .unwrap();
    let stats = vec![
        g.marginal(0, &[0, 2, 3]).unwrap(),
        g.marginal(0, &[1, 2, 3]).unwrap(),
        g.marginal(0, &[2, 3]).unwrap(),
    ];
    Behavior::new(s, stats).unwrap()
}

fn main() {
    let dir = Path::new("fixtures");
    fs::create_dir_all(dir).unwrap();
    let theories = [
        ("classical", fixtures::classical_2bit()),
        ("diamond", fixtures::diamond()),
        ("skewed_diamond", fixtures::skewed_diamond()),
        ("polya", fixtures::polya(rat(1, 3))),
        ("gdit22", fixtures::gdit22()),
        ("spekkens", fixtures::spekkens()),
        ("spekkens_modified", fixtures::spekkens_modified()),
        ("rotated_y", fixtures::rotated_y()),
    ];
    for (name, t) in &theories {
        write(dir, &format!("{name}.theory"), format::serialize_theory(t));
    }
    write(dir, "spekkens_s_type.simplex", format::serialize_simplex(&fixtures::spekkens_s_type()));

    let g = build_gdit(2, 2).unwrap();
    write(dir, "gdit22_symmetric.rules", format::serialize_rules(&symmetric_disturbance(&g)));
    write(dir, "gdit22_asymmetric.rules", format::serialize_rules(&fixtures::asymmetric_rules(&g).unwrap()));
    let w = vec![
        vec![vec![rat(1, 4), rat(3, 4)], vec![rat(3, 4), rat(1, 4)]],
        vec![vec![rat(1, 4), rat(3, 4)], vec![rat(3, 4), rat(1, 4)]],
    ];
    write(dir, "gdit22_asymmetric.weights", format::serialize_weights(&w));
    write(dir, "diamond_identity.rules", format::serialize_rules(&identity_rules(&fixtures::diamond())));

    let inv = CoherentMap::inverter(&fixtures::spekkens()).unwrap();
    write(dir, "spekkens_inverter.map", format::serialize_map(&inv));
    let swap = CoherentMap::swaps(&[("X+", "Z+"), ("X-", "Z-"), ("Ya+", "Ya-")]).unwrap();
    write(dir, "rotated_swap.map", format::serialize_map(&swap));

    write(dir, "os_box_QA.behavior", format::serialize_behavior(&fixtures::os_box_a()));
    write(dir, "os_anticorrelated.behavior", format::serialize_behavior(&fixtures::os_anticorrelated()));
    let s = fixtures::os_scenario();
    let q1a = fixtures::os_table()[0].1.to_behavior(&s).unwrap();
    write(dir, "os_Q1A.behavior", format::serialize_behavior(&q1a));
    write(dir, "xos_box.behavior", format::serialize_behavior(&fixtures::xos_box()));
    let xs = fixtures::xos_scenario();
    let r1 = fixtures::xos_table()[0].to_behavior(&xs).unwrap();
    write(dir, "xos_R1.behavior", format::serialize_behavior(&r1));
    write(dir, "product.behavior", format::serialize_behavior(&product_behavior()));
    write(dir, "conditional_2x2.behavior", format::serialize_behavior(&conditional_behavior()));

    let names: Vec<String> = ["A", "B", "C"].iter().map(|s| s.to_string()).collect();
    let chain = CongruenceGraph::new(names.clone(), &[("A", "B"), ("B", "C")]).unwrap();
    write(dir, "chain.graph", format::serialize_graph(&chain));
    let classes = CongruenceGraph::new(names, &[("A", "B")]).unwrap();
    write(dir, "classes.graph", format::serialize_graph(&classes));
}
