//! Congruence graphs and their equivalence classes.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry;
use crate::theory::Theory;

use super::Scenario;

/// Measurements as vertices, congruent pairs as edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceGraph {
    pub vertices: Vec<String>,
    /// Index pairs with `i < j`.
    pub edges: BTreeSet<(usize, usize)>,
}

impl CongruenceGraph {
    pub fn new<S: AsRef<str>>(vertices: Vec<String>, edges: &[(S, S)]) -> Result<Self> {
        let mut g = CongruenceGraph {
            vertices,
            edges: BTreeSet::new(),
        };
        let mut seen = BTreeSet::new();
        for v in &g.vertices {
            if !seen.insert(v.as_str()) {
                return Err(Error::InvalidBehavior(alloc::format!("duplicate vertex `{v}`")));
            }
        }
        for (a, b) in edges {
            let i = g.index(a.as_ref())?;
            let j = g.index(b.as_ref())?;
            if i == j {
                return Err(Error::InvalidBehavior(alloc::format!("self-loop on `{}`", a.as_ref())));
            }
            g.edges.insert((i.min(j), i.max(j)));
        }
        Ok(g)
    }

    fn index(&self, name: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownMeasurement(name.into()))
    }

    pub fn complete(vertices: Vec<String>) -> Self {
        let n = vertices.len();
        CongruenceGraph {
            vertices,
            edges: (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect(),
        }
    }

    pub fn edgeless(vertices: Vec<String>) -> Self {
        CongruenceGraph {
            vertices,
            edges: BTreeSet::new(),
        }
    }

    /// Edge iff the pair's associated state space is a simplex.
    pub fn from_theory(t: &Theory) -> Result<Self> {
        t.ensure_valid()?;
        let n = t.measurements.len();
        let mut edges = BTreeSet::new();
        for i in 0..n {
            for j in i + 1..n {
                let states = t.associated_states(&[i, j])?;
                let pts: Vec<_> = states.iter().map(|&s| t.pure_states[s].point.flatten()).collect();
                if geometry::is_simplex(&pts)? {
                    edges.insert((i, j));
                }
            }
        }
        Ok(CongruenceGraph {
            vertices: t.measurements.iter().map(|m| m.name.clone()).collect(),
            edges,
        })
    }

    /// Edge iff the two measurements share a context.
    pub fn from_scenario(s: &Scenario) -> Self {
        let mut edges = BTreeSet::new();
        for c in &s.contexts {
            for (k, &i) in c.iter().enumerate() {
                for &j in &c[k + 1..] {
                    edges.insert((i.min(j), i.max(j)));
                }
            }
        }
        CongruenceGraph {
            vertices: s.measurements.iter().map(|m| m.name.clone()).collect(),
            edges,
        }
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i.min(j), i.max(j)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CongruenceClasses {
    /// Equivalence classes in order of their first vertex.
    Classes(Vec<Vec<String>>),
    /// Edges `a–b` and `b–c` without `a–c`.
    Intransitive { a: String, b: String, c: String },
}

/// The classes of a transitive relation, or the first violating chain in
/// vertex order.
pub fn congruence_classes(g: &CongruenceGraph) -> CongruenceClasses {
    let n = g.vertices.len();
    for a in 0..n {
        for b in 0..n {
            if b == a || !g.adjacent(a, b) {
                continue;
            }
            for c in 0..n {
                if c != a && c != b && g.adjacent(b, c) && !g.adjacent(a, c) {
                    return CongruenceClasses::Intransitive {
                        a: g.vertices[a].clone(),
                        b: g.vertices[b].clone(),
                        c: g.vertices[c].clone(),
                    };
                }
            }
        }
    }
    let mut assigned = alloc::vec![false; n];
    let mut classes = Vec::new();
    for v in 0..n {
        if assigned[v] {
            continue;
        }
        let class: Vec<usize> = (v..n).filter(|&u| u == v || g.adjacent(v, u)).collect();
        for &u in &class {
            assigned[u] = true;
        }
        classes.push(class.into_iter().map(|u| g.vertices[u].clone()).collect());
    }
    CongruenceClasses::Classes(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use alloc::string::ToString;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn complete_and_edgeless() {
        let v = names(&["A", "B", "C"]);
        assert_eq!(
            congruence_classes(&CongruenceGraph::complete(v.clone())),
            CongruenceClasses::Classes(alloc::vec![v.clone()])
        );
        assert_eq!(
            congruence_classes(&CongruenceGraph::edgeless(v)),
            CongruenceClasses::Classes(alloc::vec![names(&["A"]), names(&["B"]), names(&["C"])])
        );
    }

    #[test]
    fn one_sided_incongruence_is_intransitive() {
        let g = CongruenceGraph::new(
            names(&["A1", "A2", "B1", "B2"]),
            &[("A1", "B1"), ("A1", "B2"), ("A2", "B1"), ("A2", "B2"), ("B1", "B2")],
        )
        .unwrap();
        assert_eq!(
            congruence_classes(&g),
            CongruenceClasses::Intransitive {
                a: "A1".into(),
                b: "B1".into(),
                c: "A2".into()
            }
        );
    }

    #[test]
    fn os_triangle_is_transitive() {
        let g = CongruenceGraph::from_scenario(&fixtures::os_scenario());
        assert_eq!(g.edges.len(), 3);
        assert!(matches!(congruence_classes(&g), CongruenceClasses::Classes(c) if c.len() == 1));
    }

    #[test]
    fn theory_graphs() {
        let g = CongruenceGraph::from_theory(&fixtures::spekkens()).unwrap();
        assert!(g.edges.is_empty());
        let g = CongruenceGraph::from_theory(&fixtures::classical_2bit()).unwrap();
        assert!(g.adjacent(0, 1));
    }
}
