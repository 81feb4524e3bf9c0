//! Ontological models: ontic points of an underlying simplex, their images in
//! an intermediate space, and a distribution over ontic points for every
//! operational pure state.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::gdit::Correspondence;
use crate::geometry;
use crate::rational::Rational;
use crate::theory::{Mixture, Point, Theory};
use crate::{outcome_tuples, tuple_index};

/// A vertex of the underlying simplex: one value per fiducial measurement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OnticPoint {
    pub name: String,
    pub values: Vec<usize>,
}

/// All value tuples, first measurement most significant. Point `k` is the
/// `(k+1)`-th vertex in the conventional numbering.
pub fn underlying_simplex(t: &Theory) -> Vec<OnticPoint> {
    let counts: Vec<usize> = t.measurements.iter().map(|m| m.outcomes).collect();
    outcome_tuples(&counts)
        .into_iter()
        .map(|v| OnticPoint {
            name: super::contextuality::tuple_string(&v),
            values: v,
        })
        .collect()
}

/// The deterministic operational point with the given values.
pub fn gdit_vertex(counts: &[usize], values: &[usize]) -> Point {
    Point(
        counts
            .iter()
            .zip(values)
            .map(|(&n, &v)| (0..n).map(|k| Rational::from(u32::from(k == v))).collect())
            .collect(),
    )
}

/// Compression of an ontic distribution (barycentric over
/// [`underlying_simplex`] order) to the intermediate gdit: the
/// per-measurement marginals.
pub fn compress_g(counts: &[usize], dist: &[Rational]) -> Result<Point> {
    let tuples = outcome_tuples(counts);
    if dist.len() != tuples.len() {
        return Err(Error::DimensionMismatch {
            expected: tuples.len(),
            found: dist.len(),
        });
    }
    let mut out: Vec<Vec<Rational>> = counts.iter().map(|&n| alloc::vec![Rational::zero(); n]).collect();
    for (tup, w) in tuples.iter().zip(dist) {
        for (j, &v) in tup.iter().enumerate() {
            out[j][v] += w;
        }
    }
    Ok(Point(out))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OnticKind {
    G,
    S,
}

impl fmt::Display for OnticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OnticKind::G => "g",
            OnticKind::S => "s",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OnticModel {
    pub kind: OnticKind,
    pub ontic_points: Vec<String>,
    /// Image of each ontic point in the intermediate space.
    pub intermediate_vertices: Vec<Point>,
    pub state_distributions: BTreeMap<String, Vec<Rational>>,
    /// The operational pure states being modeled.
    pub operational: BTreeMap<String, Point>,
}

/// Intermediate simplex for an s-type model: named vertices and a
/// decomposition of each pure state over them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexSpec {
    pub vertices: Vec<(String, Point)>,
    pub decompositions: BTreeMap<String, Mixture>,
}

impl OnticModel {
    /// g-type model in which each pure state's ontic distribution is the
    /// product of its outcome distributions.
    pub fn g_type_product(t: &Theory) -> Result<Self> {
        t.ensure_valid()?;
        let counts: Vec<usize> = t.measurements.iter().map(|m| m.outcomes).collect();
        let pts = underlying_simplex(t);
        let mut dists = BTreeMap::new();
        for s in &t.pure_states {
            let d = pts
                .iter()
                .map(|p| p.values.iter().enumerate().map(|(j, &v)| s.point.prob(j, v).clone()).product())
                .collect();
            dists.insert(s.name.clone(), d);
        }
        let model = OnticModel {
            kind: OnticKind::G,
            ontic_points: pts.iter().map(|p| p.name.clone()).collect(),
            intermediate_vertices: pts.iter().map(|p| gdit_vertex(&counts, &p.values)).collect(),
            state_distributions: dists,
            operational: operational(t),
        };
        model.verify()?;
        Ok(model)
    }

    /// g-type model that lifts each regular state's gdit decomposition (its
    /// rule image) vertex by vertex.
    pub fn from_correspondence(c: &Correspondence) -> Result<Self> {
        let g = &c.gdit;
        let t = &c.regular;
        let counts: Vec<usize> = t.measurements.iter().map(|m| m.outcomes).collect();
        let pts = underlying_simplex(t);
        let mut dists = BTreeMap::new();
        for e in &t.eigenstates {
            let rule = c
                .rules
                .iter()
                .find(|r| r.measurement == e.measurement)
                .ok_or_else(|| Error::IncompleteRules {
                    measurement: e.measurement.clone(),
                    state: e.state.clone(),
                })?;
            let mi = g.theory.require_measurement(&e.measurement)?;
            let v0 = g.sharing(mi, e.outcome)[0];
            let image = rule.image(g.vertex_name(v0), e.outcome).ok_or_else(|| Error::IncompleteRules {
                measurement: e.measurement.clone(),
                state: g.vertex_name(v0).into(),
            })?;
            let mut d = alloc::vec![Rational::zero(); pts.len()];
            for (name, w) in image.iter() {
                let v = g.theory.state_index(name).ok_or_else(|| Error::UnknownState(name.clone()))?;
                d[tuple_index(&counts, &g.coords(v))] += w;
            }
            dists.insert(e.state.clone(), d);
        }
        let model = OnticModel {
            kind: OnticKind::G,
            ontic_points: pts.iter().map(|p| p.name.clone()).collect(),
            intermediate_vertices: pts.iter().map(|p| gdit_vertex(&counts, &p.values)).collect(),
            state_distributions: dists,
            operational: operational(t),
        };
        model.verify()?;
        Ok(model)
    }

    /// s-type model over a user-supplied intermediate simplex of dimension
    /// `D = dim Σ`.
    pub fn s_type(t: &Theory, spec: &SimplexSpec) -> Result<Self> {
        t.ensure_valid()?;
        let pts: Vec<Vec<Rational>> = spec.vertices.iter().map(|(_, p)| p.flatten()).collect();
        if pts.is_empty() {
            return Err(Error::EmptyInput);
        }
        let d = geometry::affine_dimension(&t.points())?;
        if pts.len() != d + 1 || !geometry::is_simplex(&pts)? {
            return Err(Error::OutOfRange(format!(
                "intermediate vertices must be {} affinely independent points",
                d + 1
            )));
        }
        let names: Vec<String> = spec.vertices.iter().map(|(n, _)| n.clone()).collect();
        let mut dists = BTreeMap::new();
        for s in &t.pure_states {
            let mix = spec
                .decompositions
                .get(&s.name)
                .ok_or_else(|| Error::DecompositionMismatch(s.name.clone()))?;
            mix.check()?;
            let mut dist = alloc::vec![Rational::zero(); names.len()];
            for (v, w) in mix.iter() {
                let k = names.iter().position(|n| n == v).ok_or_else(|| Error::UnknownState(v.clone()))?;
                dist[k] = w.clone();
            }
            dists.insert(s.name.clone(), dist);
        }
        let model = OnticModel {
            kind: OnticKind::S,
            ontic_points: names,
            intermediate_vertices: spec.vertices.iter().map(|(_, p)| p.clone()).collect(),
            state_distributions: dists,
            operational: operational(t),
        };
        model.verify()?;
        Ok(model)
    }

    /// Pushes an ontic distribution through the intermediate vertices.
    pub fn pushforward(&self, dist: &[Rational]) -> Result<Point> {
        if dist.len() != self.intermediate_vertices.len() {
            return Err(Error::DimensionMismatch {
                expected: self.intermediate_vertices.len(),
                found: dist.len(),
            });
        }
        let mut out = self.intermediate_vertices.first().ok_or(Error::EmptyInput)?.zero_like();
        for (w, v) in dist.iter().zip(&self.intermediate_vertices) {
            out.add_scaled(w, v);
        }
        Ok(out)
    }

    /// Every distribution is normalized and reproduces its state.
    pub fn verify(&self) -> Result<()> {
        for (name, d) in &self.state_distributions {
            let s: Rational = d.iter().sum();
            if !s.is_one() || d.iter().any(Rational::is_negative) {
                return Err(Error::DecompositionMismatch(name.clone()));
            }
            let target = self.operational.get(name).ok_or_else(|| Error::UnknownState(name.clone()))?;
            if &self.pushforward(d)? != target {
                return Err(Error::DecompositionMismatch(name.clone()));
            }
        }
        Ok(())
    }

    pub fn distribution(&self, state: &str) -> Result<&[Rational]> {
        self.state_distributions
            .get(state)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UnknownState(state.into()))
    }

    /// Weighted combination of the pure states' ontic distributions.
    pub fn ontic_mixture(&self, m: &Mixture) -> Result<Vec<Rational>> {
        m.check()?;
        let mut out = alloc::vec![Rational::zero(); self.ontic_points.len()];
        for (name, w) in m.iter() {
            for (o, p) in out.iter_mut().zip(self.distribution(name)?) {
                *o += w * p;
            }
        }
        Ok(out)
    }

    /// Operational point of a mixture of modeled states.
    pub fn operational_mixture(&self, m: &Mixture) -> Result<Point> {
        m.check()?;
        let mut acc: Option<Point> = None;
        for (name, w) in m.iter() {
            let p = self.operational.get(name).ok_or_else(|| Error::UnknownState(name.clone()))?;
            match acc.as_mut() {
                None => acc = Some(p.scaled(w)),
                Some(a) => a.add_scaled(w, p),
            }
        }
        acc.ok_or(Error::EmptyInput)
    }

    pub fn intermediate_dimension(&self) -> Result<usize> {
        let pts: Vec<Vec<Rational>> = self.intermediate_vertices.iter().map(Point::flatten).collect();
        geometry::affine_dimension(&pts)
    }

    pub fn operational_dimension(&self) -> Result<usize> {
        let pts: Vec<Vec<Rational>> = self.operational.values().map(Point::flatten).collect();
        geometry::affine_dimension(&pts)
    }

    /// Whether the intermediate images of the given ontic points are affinely
    /// independent, i.e. the compression is one-to-one on their hull.
    pub fn injective_on(&self, support: &[usize]) -> Result<bool> {
        let pts: Vec<Vec<Rational>> = support.iter().map(|&k| self.intermediate_vertices[k].flatten()).collect();
        if pts.is_empty() {
            return Ok(true);
        }
        geometry::is_simplex(&pts)
    }
}

fn operational(t: &Theory) -> BTreeMap<String, Point> {
    t.pure_states.iter().map(|s| (s.name.clone(), s.point.clone())).collect()
}

/// A permutation of operational pure states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherentMap {
    pub map: BTreeMap<String, String>,
}

impl CoherentMap {
    pub fn new<I, S>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, S)>,
        S: Into<String>,
    {
        let map: BTreeMap<String, String> = pairs.into_iter().map(|(a, b)| (a.into(), b.into())).collect();
        let mut images: Vec<&String> = map.values().collect();
        images.sort();
        let keys: Vec<&String> = map.keys().collect();
        if images != keys {
            return Err(Error::OutOfRange("coherent map must permute its own domain".into()));
        }
        Ok(CoherentMap { map })
    }

    /// Swaps each listed pair.
    pub fn swaps<S: AsRef<str>>(pairs: &[(S, S)]) -> Result<Self> {
        let mut all = Vec::new();
        for (a, b) in pairs {
            all.push((a.as_ref().to_string(), b.as_ref().to_string()));
            all.push((b.as_ref().to_string(), a.as_ref().to_string()));
        }
        let map = CoherentMap::new(all.clone())?;
        if map.map.len() != all.len() {
            return Err(Error::OutOfRange("swaps must be disjoint".into()));
        }
        Ok(map)
    }

    /// Exchanges the two eigenstates of every binary measurement.
    pub fn inverter(t: &Theory) -> Result<Self> {
        let mut pairs = Vec::new();
        for m in &t.measurements {
            if m.outcomes != 2 {
                return Err(Error::OutOfRange(format!("inverter needs binary measurements, `{}` is not", m.name)));
            }
            let e = |a: usize| {
                t.eigenstate(&m.name, a).ok_or_else(|| Error::NotRegular {
                    measurement: m.name.clone(),
                    outcome: a,
                })
            };
            pairs.push((e(0)?, e(1)?));
        }
        CoherentMap::swaps(&pairs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PermutationSearch {
    /// `sigma[λ]` is the image of ontic point `λ`; lexicographically smallest.
    Found(Vec<usize>),
    /// Ontic point `lambda` has no candidate image with matching
    /// distribution values.
    Impossible { lambda: usize },
}

/// Values `(μ_i(λ))_i` over the map's domain, and `(μ_{target(i)}(ν))_i`.
fn signatures(model: &OnticModel, map: &CoherentMap) -> Result<(Vec<Vec<Rational>>, Vec<Vec<Rational>>)> {
    let k = model.ontic_points.len();
    let mut src = alloc::vec![Vec::with_capacity(map.map.len()); k];
    let mut tgt = alloc::vec![Vec::with_capacity(map.map.len()); k];
    for (from, to) in &map.map {
        let a = model.distribution(from)?;
        let b = model.distribution(to)?;
        for l in 0..k {
            src[l].push(a[l].clone());
            tgt[l].push(b[l].clone());
        }
    }
    Ok((src, tgt))
}

/// Searches for σ with `μ_{target(i)}(σ(λ)) = μ_i(λ)` for all states `i`
/// and ontic points `λ`.
///
/// Candidates for `λ` are exactly the `ν` whose target signature equals the
/// source signature of `λ`, so σ exists iff the two signature multisets
/// agree, and then greedy smallest-first assignment is lexicographically
/// least.
pub fn find_ontic_permutation(model: &OnticModel, map: &CoherentMap) -> Result<PermutationSearch> {
    let (src, tgt) = signatures(model, map)?;
    let k = src.len();
    let mut used = alloc::vec![false; k];
    let mut sigma = Vec::with_capacity(k);
    for (l, s) in src.iter().enumerate() {
        match (0..k).find(|&v| !used[v] && &tgt[v] == s) {
            Some(v) => {
                used[v] = true;
                sigma.push(v);
            }
            None => return Ok(PermutationSearch::Impossible { lambda: l }),
        }
    }
    Ok(PermutationSearch::Found(sigma))
}

/// Direct recomputation of every permuted distribution.
pub fn verify_permutation(model: &OnticModel, map: &CoherentMap, sigma: &[usize]) -> Result<bool> {
    let k = model.ontic_points.len();
    if sigma.len() != k {
        return Ok(false);
    }
    let mut seen = alloc::vec![false; k];
    for &v in sigma {
        if v >= k || core::mem::replace(&mut seen[v], true) {
            return Ok(false);
        }
    }
    for (from, to) in &map.map {
        let a = model.distribution(from)?;
        let b = model.distribution(to)?;
        let mut pushed = alloc::vec![Rational::zero(); k];
        for (l, &v) in sigma.iter().enumerate() {
            pushed[v] = a[l].clone();
        }
        if pushed != b {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Swap cycles of a permutation as ontic point index pairs, e.g. for
/// printing `γ1↔γ8`.
pub fn transpositions(sigma: &[usize]) -> Option<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for (l, &v) in sigma.iter().enumerate() {
        if sigma.get(v) != Some(&l) {
            return None;
        }
        if l < v {
            out.push((l, v));
        }
    }
    Some(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrepContextuality {
    /// Operationally equal mixtures with different ontic distributions.
    Witness { left: Vec<Rational>, right: Vec<Rational> },
    NoWitness { distribution: Vec<Rational> },
}

pub fn prep_contextuality_witness(model: &OnticModel, a: &Mixture, b: &Mixture) -> Result<PrepContextuality> {
    if model.operational_mixture(a)? != model.operational_mixture(b)? {
        return Err(Error::NotOperationallyEqual);
    }
    let left = model.ontic_mixture(a)?;
    let right = model.ontic_mixture(b)?;
    Ok(if left == right {
        PrepContextuality::NoWitness { distribution: left }
    } else {
        PrepContextuality::Witness { left, right }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::gdit::{build_gdit, correspond, symmetric_disturbance};
    use crate::rational::rat;

    fn v(xs: &[(i64, i64)]) -> Vec<Rational> {
        xs.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    #[test]
    fn underlying_simplex_sizes() {
        assert_eq!(underlying_simplex(&fixtures::diamond()).len(), 4);
        let sp = underlying_simplex(&fixtures::spekkens());
        assert_eq!(sp.len(), 8);
        assert_eq!(sp[4].values, [1, 0, 0]);
        assert_eq!(sp[4].name, "100");
    }

    #[test]
    fn compression_of_barycentric_points() {
        let c = [2, 2];
        let p = compress_g(&c, &v(&[(1, 10), (2, 10), (3, 10), (4, 10)])).unwrap();
        assert_eq!(p.0[0], v(&[(3, 10), (7, 10)]));
        assert_eq!(p.0[1], v(&[(4, 10), (6, 10)]));
        let a = compress_g(&c, &v(&[(1, 2), (0, 1), (0, 1), (1, 2)])).unwrap();
        let b = compress_g(&c, &v(&[(0, 1), (1, 2), (1, 2), (0, 1)])).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.0, [v(&[(1, 2), (1, 2)]), v(&[(1, 2), (1, 2)])]);
        let lam1 = compress_g(&c, &v(&[(1, 1), (0, 1), (0, 1), (0, 1)])).unwrap();
        assert_eq!(lam1, gdit_vertex(&c, &[0, 0]));
    }

    #[test]
    fn diamond_ontic_distributions() {
        let m = OnticModel::g_type_product(&fixtures::diamond()).unwrap();
        assert_eq!(m.distribution("X+").unwrap(), v(&[(1, 2), (1, 2), (0, 1), (0, 1)]));
        assert_eq!(m.distribution("X-").unwrap(), v(&[(0, 1), (0, 1), (1, 2), (1, 2)]));
        assert_eq!(m.distribution("Z+").unwrap(), v(&[(1, 2), (0, 1), (1, 2), (0, 1)]));
        assert_eq!(m.distribution("Z-").unwrap(), v(&[(0, 1), (1, 2), (0, 1), (1, 2)]));
        assert_eq!(m.intermediate_dimension().unwrap(), m.operational_dimension().unwrap());
    }

    #[test]
    fn correspondence_lift_matches_product() {
        let g = build_gdit(3, 2).unwrap();
        let c = correspond(g, {
            let g = build_gdit(3, 2).unwrap();
            symmetric_disturbance(&g)
        })
        .unwrap();
        let lifted = OnticModel::from_correspondence(&c).unwrap();
        let product = OnticModel::g_type_product(&fixtures::spekkens()).unwrap();
        assert_eq!(lifted.state_distributions, product.state_distributions);
        let q = rat(1, 4);
        let z = Rational::zero();
        assert_eq!(
            lifted.distribution("Z+").unwrap(),
            [q.clone(), z.clone(), q.clone(), z.clone(), q.clone(), z.clone(), q, z]
        );
    }

    #[test]
    fn spekkens_inverter() {
        let t = fixtures::spekkens();
        let map = CoherentMap::inverter(&t).unwrap();
        let g = OnticModel::g_type_product(&t).unwrap();
        match find_ontic_permutation(&g, &map).unwrap() {
            PermutationSearch::Found(s) => {
                assert_eq!(s, [7, 6, 5, 4, 3, 2, 1, 0]);
                assert!(verify_permutation(&g, &map, &s).unwrap());
                assert_eq!(transpositions(&s).unwrap(), [(0, 7), (1, 6), (2, 5), (3, 4)]);
            }
            other => panic!("{other:?}"),
        }
        let s = OnticModel::s_type(&t, &fixtures::spekkens_s_type()).unwrap();
        assert!(matches!(
            find_ontic_permutation(&s, &map).unwrap(),
            PermutationSearch::Impossible { .. }
        ));
        assert_eq!(s.intermediate_dimension().unwrap(), 3);
    }

    #[test]
    fn modified_spekkens_has_no_inverter() {
        let t = fixtures::spekkens_modified();
        let m = OnticModel::g_type_product(&t).unwrap();
        let z = m.distribution("Z+").unwrap();
        assert_eq!(z[0], rat(1, 6));
        assert_eq!(z[4], rat(1, 3));
        let map = CoherentMap::inverter(&t).unwrap();
        assert!(matches!(
            find_ontic_permutation(&m, &map).unwrap(),
            PermutationSearch::Impossible { .. }
        ));
    }

    #[test]
    fn s_type_rejects_wrong_decomposition() {
        let t = fixtures::spekkens();
        let mut spec = fixtures::spekkens_s_type();
        spec.decompositions.insert("Z-".into(), Mixture::uniform(["s1", "s2"]));
        assert!(matches!(
            OnticModel::s_type(&t, &spec),
            Err(Error::DecompositionMismatch(_))
        ));
    }

    #[test]
    fn x_and_z_mixtures_are_not_contextual() {
        let m = OnticModel::g_type_product(&fixtures::diamond()).unwrap();
        let r = prep_contextuality_witness(&m, &Mixture::uniform(["X+", "X-"]), &Mixture::uniform(["Z+", "Z-"])).unwrap();
        assert_eq!(
            r,
            PrepContextuality::NoWitness {
                distribution: alloc::vec![rat(1, 4); 4]
            }
        );
        let same = Mixture::pure("X+");
        assert!(matches!(
            prep_contextuality_witness(&m, &same, &same).unwrap(),
            PrepContextuality::NoWitness { .. }
        ));
        assert_eq!(
            prep_contextuality_witness(&m, &Mixture::pure("X+"), &Mixture::pure("Z+")),
            Err(Error::NotOperationallyEqual)
        );
    }

    #[test]
    fn rotated_pairs_are_contextual() {
        let t = fixtures::rotated_y();
        let m = OnticModel::g_type_product(&t).unwrap();
        let a = Mixture::uniform(["Ya+", "Ya-"]);
        let b = Mixture::uniform(["Yb+", "Yb-"]);
        match prep_contextuality_witness(&m, &a, &b).unwrap() {
            PrepContextuality::Witness { left, right } => {
                let xi = rat(12, 25);
                let q = rat(1, 4);
                let one = Rational::one();
                assert_eq!(
                    left,
                    [
                        &q * (&one + &xi),
                        &q * (&one - &xi),
                        &q * (&one - &xi),
                        &q * (&one + &xi)
                    ]
                );
                assert_eq!(right[0], &q * (&one + rat(60, 169)));
                let support: Vec<usize> = (0..4).collect();
                assert!(!m.injective_on(&support).unwrap());
            }
            other => panic!("{other:?}"),
        }
    }
}
