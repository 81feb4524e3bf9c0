//! Worked examples: small theories, disturbance rules and behaviors used by
//! the tests, the CLI fixture files and the acceptance checks.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::contextuality::{contextual_box, Behavior, ContextualConfiguration, PartnerRule, Scenario};
use crate::error::Result;
use crate::gdit::{asymmetric_disturbance, build_gdit, GditTheory};
use crate::ontology::{gdit_vertex, SimplexSpec};
use crate::rational::{rat, Rational};
use crate::statics::DisturbanceRule;
use crate::theory::{Eigenstate, Measurement, Mixture, PureState, Theory};

fn r(s: &str) -> Rational {
    s.parse().expect("fixture literal")
}

fn dists(rows: &[&[&str]]) -> Vec<Vec<Rational>> {
    rows.iter().map(|d| d.iter().map(|p| r(p)).collect()).collect()
}

fn eig(measurement: &str, outcome: usize, state: &str) -> Eigenstate {
    Eigenstate {
        measurement: measurement.into(),
        outcome,
        state: state.into(),
    }
}

fn binary(names: &[&str]) -> Vec<Measurement> {
    names.iter().map(|n| Measurement::new(*n, 2)).collect()
}

/// Two classical bits read by `X`, `Z` and their parity `P`.
pub fn classical_2bit() -> Theory {
    let states = vec![
        PureState::new("00", dists(&[&["1", "0"], &["1", "0"], &["1", "0"]])),
        PureState::new("01", dists(&[&["1", "0"], &["0", "1"], &["0", "1"]])),
        PureState::new("10", dists(&[&["0", "1"], &["1", "0"], &["0", "1"]])),
        PureState::new("11", dists(&[&["0", "1"], &["0", "1"], &["1", "0"]])),
    ];
    let eigen = vec![
        eig("X", 0, "00"),
        eig("X", 1, "10"),
        eig("Z", 0, "00"),
        eig("Z", 1, "01"),
        eig("P", 0, "00"),
        eig("P", 1, "01"),
    ];
    Theory::new(binary(&["X", "Z", "P"]), states, eigen)
}

fn xz_eigen() -> Vec<Eigenstate> {
    vec![eig("X", 0, "X+"), eig("X", 1, "X-"), eig("Z", 0, "Z+"), eig("Z", 1, "Z-")]
}

/// Square with unbiased eigenstates.
pub fn diamond() -> Theory {
    let h = "1/2";
    let states = vec![
        PureState::new("X+", dists(&[&["1", "0"], &[h, h]])),
        PureState::new("X-", dists(&[&["0", "1"], &[h, h]])),
        PureState::new("Z+", dists(&[&[h, h], &["1", "0"]])),
        PureState::new("Z-", dists(&[&[h, h], &["0", "1"]])),
    ];
    Theory::new(binary(&["X", "Z"]), states, xz_eigen())
}

/// Square with biased eigenstates; uncertainty 1/8.
pub fn skewed_diamond() -> Theory {
    let states = vec![
        PureState::new("X+", dists(&[&["1", "0"], &["1/4", "3/4"]])),
        PureState::new("X-", dists(&[&["0", "1"], &["3/4", "1/4"]])),
        PureState::new("Z+", dists(&[&["1/4", "3/4"], &["1", "0"]])),
        PureState::new("Z-", dists(&[&["3/4", "1/4"], &["0", "1"]])),
    ];
    Theory::new(binary(&["X", "Z"]), states, xz_eigen())
}

fn xyz_eigen() -> Vec<Eigenstate> {
    let mut out = Vec::new();
    for m in ["X", "Y", "Z"] {
        out.push(eig(m, 0, &alloc::format!("{m}+")));
        out.push(eig(m, 1, &alloc::format!("{m}-")));
    }
    out
}

/// Octahedron of three pairwise unbiased binary measurements.
pub fn spekkens() -> Theory {
    let (h, o, z) = ("1/2", "1", "0");
    let states = vec![
        PureState::new("X+", dists(&[&[o, z], &[h, h], &[h, h]])),
        PureState::new("X-", dists(&[&[z, o], &[h, h], &[h, h]])),
        PureState::new("Y+", dists(&[&[h, h], &[o, z], &[h, h]])),
        PureState::new("Y-", dists(&[&[h, h], &[z, o], &[h, h]])),
        PureState::new("Z+", dists(&[&[h, h], &[h, h], &[o, z]])),
        PureState::new("Z-", dists(&[&[h, h], &[h, h], &[z, o]])),
    ];
    Theory::new(binary(&["X", "Y", "Z"]), states, xyz_eigen())
}

/// [`spekkens`] with `Z` eigenstates biased to `(1/3, 2/3)` on `X`.
pub fn spekkens_modified() -> Theory {
    let mut t = spekkens();
    t.pure_states[4] = PureState::new("Z+", dists(&[&["1/3", "2/3"], &["1/2", "1/2"], &["1", "0"]]));
    t.pure_states[5] = PureState::new("Z-", dists(&[&["1/3", "2/3"], &["1/2", "1/2"], &["0", "1"]]));
    t
}

/// Tetrahedron inscribed in the Spekkens cube, with each eigenstate the
/// midpoint of an edge.
pub fn spekkens_s_type() -> SimplexSpec {
    let counts = [2, 2, 2];
    let corners: [[usize; 3]; 4] = [[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]];
    let vertices = corners
        .iter()
        .enumerate()
        .map(|(k, c)| (alloc::format!("s{}", k + 1), gdit_vertex(&counts, c)))
        .collect();
    let halves = [
        ("X+", "s1", "s2"),
        ("X-", "s3", "s4"),
        ("Y+", "s1", "s3"),
        ("Y-", "s2", "s4"),
        ("Z+", "s1", "s4"),
        ("Z-", "s2", "s3"),
    ];
    let decompositions: BTreeMap<String, Mixture> = halves
        .iter()
        .map(|(s, a, b)| (s.to_string(), Mixture::uniform([*a, *b])))
        .collect();
    SimplexSpec {
        vertices,
        decompositions,
    }
}

/// Four affinely independent states with classical-looking uncertainty.
/// Only the `+` outcomes have eigenstates unless `p` is 0 or 1.
pub fn polya(p: Rational) -> Theory {
    let q = Rational::one() - &p;
    let one = vec![Rational::one(), Rational::zero()];
    let pq = vec![p.clone(), q];
    let states = vec![
        PureState::new("psi1", vec![one.clone(), one.clone()]),
        PureState::new("psi2", vec![one.clone(), pq.clone()]),
        PureState::new("psi3", vec![pq.clone(), one]),
        PureState::new("psi4", vec![pq.clone(), pq]),
    ];
    Theory::new(binary(&["X", "Z"]), states, vec![eig("X", 0, "psi1"), eig("Z", 0, "psi1")])
}

/// The two-bit gdit.
pub fn gdit22() -> Theory {
    build_gdit(2, 2).expect("fixed size").theory
}

/// Rule that keeps the measured value and spreads the other in the
/// pattern of [`skewed_diamond`]'s eigenstates.
pub fn asymmetric_rules(g: &GditTheory) -> Result<Vec<DisturbanceRule>> {
    let w = vec![
        vec![vec![rat(1, 4), rat(3, 4)], vec![rat(3, 4), rat(1, 4)]],
        vec![vec![rat(1, 4), rat(3, 4)], vec![rat(3, 4), rat(1, 4)]],
    ];
    asymmetric_disturbance(g, &w)
}

/// `(δ, υ)` pairs for the two rotated `Y` families; `ξ` is 12/25 and 60/169.
pub fn rotated_pairs() -> [(Rational, Rational); 2] {
    [(rat(4, 5), rat(9, 10)), (rat(9, 13), rat(25, 26))]
}

/// [`diamond`] with two rotated `Y` pairs `Ya±` and `Yb±`.
pub fn rotated_y() -> Theory {
    let mut t = diamond();
    for ((d, u), tag) in rotated_pairs().into_iter().zip(["a", "b"]) {
        let one = Rational::one();
        let (d1, u1) = (&one - &d, &one - &u);
        t.pure_states.push(PureState::new(
            alloc::format!("Y{tag}+"),
            vec![vec![d.clone(), d1.clone()], vec![u.clone(), u1.clone()]],
        ));
        t.pure_states.push(PureState::new(alloc::format!("Y{tag}-"), vec![vec![d1, d], vec![u1, u]]));
    }
    t
}

/// Three binary measurements pairwise in context.
pub fn os_scenario() -> Scenario {
    Scenario::new(binary(&["A", "B", "C"]), &[&["A", "B"], &["B", "C"], &["C", "A"]]).expect("fixed scenario")
}

fn config(rows: &[[usize; 2]; 3]) -> ContextualConfiguration {
    ContextualConfiguration::new(rows.iter().map(|r| r.to_vec()).collect())
}

/// The six perfectly anticorrelated contextual configurations, as
/// `(name, configuration)` in the order Q1A, Q2A, Q1B, Q2B, Q1C, Q2C.
pub fn os_table() -> Vec<(&'static str, ContextualConfiguration)> {
    vec![
        ("Q1A", config(&[[0, 1], [1, 0], [0, 1]])),
        ("Q2A", config(&[[1, 0], [0, 1], [1, 0]])),
        ("Q1B", config(&[[0, 1], [0, 1], [1, 0]])),
        ("Q2B", config(&[[1, 0], [1, 0], [1, 0]])),
        ("Q1C", config(&[[0, 1], [1, 0], [1, 0]])),
        ("Q2C", config(&[[1, 0], [0, 1], [0, 1]])),
    ]
}

/// Uniform mixture of Q1A and its bit-flipped partner Q2A.
pub fn os_box_a() -> Behavior {
    let s = os_scenario();
    let t = os_table();
    contextual_box(&s, &[t[0].1.clone(), t[1].1.clone()], PartnerRule::BitFlip).expect("partners")
}

/// Each pair uniformly on `01` and `10`.
pub fn os_anticorrelated() -> Behavior {
    let (z, h) = (Rational::zero(), rat(1, 2));
    let row = vec![z.clone(), h.clone(), h, z];
    Behavior::new(os_scenario(), vec![row; 3]).expect("valid behavior")
}

/// Four ternary measurements, every triple in context.
pub fn xos_scenario() -> Scenario {
    let ms = ["X", "Y", "Z", "W"].iter().map(|n| Measurement::new(*n, 3)).collect();
    Scenario::new(ms, &[&["X", "Y", "Z"], &["Y", "Z", "W"], &["Z", "W", "X"], &["W", "X", "Y"]]).expect("fixed scenario")
}

/// Three cyclically shifted configurations scoring 1 in every context.
pub fn xos_table() -> Vec<ContextualConfiguration> {
    let rows: [[[usize; 3]; 4]; 3] = [
        [[0, 1, 2], [1, 2, 0], [2, 0, 1], [0, 1, 2]],
        [[1, 2, 0], [2, 0, 1], [0, 1, 2], [1, 2, 0]],
        [[2, 0, 1], [0, 1, 2], [1, 2, 0], [2, 0, 1]],
    ];
    rows.iter()
        .map(|c| ContextualConfiguration::new(c.iter().map(|t| t.to_vec()).collect()))
        .collect()
}

/// Uniform mixture of [`xos_table`].
pub fn xos_box() -> Behavior {
    contextual_box(&xos_scenario(), &xos_table(), PartnerRule::Listed).expect("listed partners")
}
