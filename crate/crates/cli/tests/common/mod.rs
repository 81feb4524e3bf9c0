//! Invocations covering every fixture, run from the workspace root.

#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub const SUITE: &[&[&str]] = &[
    &["check-simplex", "fixtures/classical.theory"],
    &["check-simplex", "fixtures/diamond.theory", "--query", "1/2,1/2|1/2,1/2"],
    &["check-simplex", "fixtures/skewed_diamond.theory", "--query", "1,0|1,0"],
    &["check-simplex", "fixtures/polya.theory"],
    &["check-simplex", "fixtures/gdit22.theory"],
    &["nonsimpliciality", "fixtures/spekkens.theory"],
    &["nonsimpliciality", "fixtures/rotated_y.theory"],
    &["comeasurable", "fixtures/classical.theory", "--pair", "X", "Z"],
    &["comeasurable", "fixtures/skewed_diamond.theory", "--pair", "X", "Z", "--forced"],
    &["comeasurable", "fixtures/gdit22.theory", "--pair", "X", "Z"],
    &["comeasurable", "fixtures/spekkens.theory", "--pair", "X", "Y", "Z"],
    &["distinguishable", "fixtures/diamond.theory", "--pair", "X", "Z"],
    &["distinguishable", "fixtures/classical.theory", "--pair", "X", "Z"],
    &["disturbance-check", "fixtures/diamond.theory", "--rules", "fixtures/diamond_identity.rules"],
    &["disturbance-check", "fixtures/skewed_diamond.theory", "--collapse"],
    &["disturbance-check", "fixtures/gdit22.theory", "--rules", "fixtures/gdit22_symmetric.rules"],
    &["uncertainty", "fixtures/classical.theory"],
    &["uncertainty", "fixtures/skewed_diamond.theory"],
    &["uncertainty", "fixtures/diamond.theory", "--polytope"],
    &["uncertainty", "fixtures/os_box_QA.behavior"],
    &["chernoff", "--epsilon", "1/2", "--delta", "1/10", "--outcomes", "2"],
    &["chernoff", "--epsilon", "1/2", "--delta", "2/e", "--outcomes", "2"],
    &["tomography-sim", "fixtures/diamond.theory", "--state", "X+", "--seed", "3"],
    &["gdit", "--inputs", "2", "--outputs", "2"],
    &["gdit", "--inputs", "3", "--outputs", "3"],
    &["gdit", "--inputs", "2", "--outputs", "2", "--disturbance", "fixtures/gdit22_asymmetric.rules"],
    &["correspond", "--inputs", "2", "--outputs", "2", "--disturbance", "fixtures/gdit22_asymmetric.weights"],
    &["correspond", "--inputs", "3", "--outputs", "2"],
    &[
        "indistinguishability-sim", "--inputs", "2", "--outputs", "2", "--disturbance", "asymmetric",
        "--prepare", "X=0", "--measure", "Z", "--trials", "20000", "--seed", "5",
    ],
    &["ontology", "fixtures/diamond.theory", "--compress", "1/2,0,0,1/2"],
    &["ontology", "fixtures/spekkens.theory", "--kind", "s", "--simplex", "fixtures/spekkens_s_type.simplex"],
    &["find-coherent", "fixtures/spekkens.theory", "--inverter"],
    &["find-coherent", "fixtures/spekkens.theory", "--map", "fixtures/spekkens_inverter.map"],
    &[
        "find-coherent", "fixtures/spekkens.theory", "--inverter", "--kind", "s", "--simplex",
        "fixtures/spekkens_s_type.simplex",
    ],
    &["find-coherent", "fixtures/spekkens_modified.theory", "--inverter"],
    &["find-coherent", "fixtures/rotated_y.theory", "--map", "fixtures/rotated_swap.map"],
    &["prep-contextuality", "fixtures/diamond.theory", "--mix-a", "X+:1/2,X-:1/2", "--mix-b", "Z+:1/2,Z-:1/2"],
    &["prep-contextuality", "fixtures/rotated_y.theory", "--mix-a", "Ya+:1/2,Ya-:1/2", "--mix-b", "X+:1/2,X-:1/2"],
    &["congruence", "fixtures/chain.graph"],
    &["congruence", "fixtures/classes.graph"],
    &["congruence", "fixtures/diamond.theory"],
    &["congruence", "fixtures/os_box_QA.behavior"],
    &["jd", "fixtures/os_box_QA.behavior"],
    &["jd", "fixtures/os_anticorrelated.behavior"],
    &["jd", "fixtures/xos_box.behavior"],
    &["jd", "fixtures/product.behavior", "--method", "product"],
    &["jd", "fixtures/conditional_2x2.behavior", "--method", "conditional"],
    &["os-eval", "fixtures/os_box_QA.behavior"],
    &["os-eval", "fixtures/os_Q1A.behavior"],
    &["xos-eval", "fixtures/xos_box.behavior"],
    &["xos-eval", "fixtures/xos_R1.behavior"],
    &["contextual-configs", "fixtures/os_box_QA.behavior"],
    &["contextual-configs", "fixtures/xos_box.behavior", "--limit", "4"],
    &["dimension-report", "--outcomes", "2"],
    &["dimension-report", "--outcomes", "3", "--measurements", "2", "--conditions", "1"],
];

pub fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simplexity"))
        .args(args)
        .current_dir(root())
        .output()
        .expect("spawn simplexity")
}
