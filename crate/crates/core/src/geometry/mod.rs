//! Exact affine and convex geometry: simplex tests, affine dependencies
//! between pure states, and convex-hull membership with certificates.

pub mod lp;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::theory::{Mixture, Theory};

pub use lp::{ConstraintSystem, FarkasCertificate, Feasibility, LinearConstraint, Optimum};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn row_reduce(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, a) in row.iter_mut().zip(&pivot_row) {
                if !a.is_zero() {
                    *x -= &f * a;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m).len()
}

fn check_points(points: &[Vec<Rational>]) -> Result<usize> {
    let dim = points.first().ok_or(Error::EmptyInput)?.len();
    for p in points {
        if p.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.len(),
            });
        }
    }
    Ok(dim)
}

/// Dimension of the affine hull.
pub fn affine_dimension(points: &[Vec<Rational>]) -> Result<usize> {
    check_points(points)?;
    let base = &points[0];
    let diffs: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    Ok(rank(&diffs))
}

/// True iff the points are affinely independent.
pub fn is_simplex(points: &[Vec<Rational>]) -> Result<bool> {
    Ok(affine_dimension(points)? + 1 == points.len())
}

/// Basis of `{λ : Σ λ_i p_i = 0, Σ λ_i = 0}`, one vector per free column of
/// the reduced system, with the first nonzero entry made positive.
pub fn affine_dependency_basis(points: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
    let dim = check_points(points)?;
    let k = points.len();
    let mut rows: Vec<Vec<Rational>> = (0..dim)
        .map(|d| points.iter().map(|p| p[d].clone()).collect())
        .collect();
    rows.push(vec![Rational::one(); k]);
    let pivots = row_reduce(&mut rows);
    let mut basis = Vec::new();
    for f in (0..k).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); k];
        v[f] = Rational::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -&rows[r][f];
        }
        if v.iter().find(|x| !x.is_zero()).is_some_and(Rational::is_negative) {
            for x in v.iter_mut() {
                *x = -&*x;
            }
        }
        basis.push(v);
    }
    Ok(basis)
}

/// Two distinct convex mixtures with the same operational point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineDependency {
    pub left: Mixture,
    pub right: Mixture,
}

impl AffineDependency {
    fn from_coefficients(names: &[String], coeffs: &[Rational]) -> Self {
        let pos: Rational = coeffs.iter().filter(|c| c.is_positive()).sum();
        let mut left = Mixture::default();
        let mut right = Mixture::default();
        for (name, c) in names.iter().zip(coeffs) {
            if c.is_positive() {
                left.add(name.clone(), c / &pos);
            } else if c.is_negative() {
                right.add(name.clone(), -c / &pos);
            }
        }
        AffineDependency { left, right }
    }

    /// Checks `mix(left) = mix(right)` in `t` and that the sides differ.
    pub fn holds_in(&self, t: &Theory) -> Result<bool> {
        Ok(self.left != self.right && t.mix(&self.left)? == t.mix(&self.right)?)
    }
}

impl fmt::Display for AffineDependency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.left, self.right)
    }
}

/// Basis of affine dependencies among named points, each written as an
/// equality of two convex mixtures. Points are processed in name order.
pub fn nonsimpliciality_conditions(
    names: &[String],
    points: &[Vec<Rational>],
) -> Result<Vec<AffineDependency>> {
    if names.len() != points.len() {
        return Err(Error::DimensionMismatch {
            expected: names.len(),
            found: points.len(),
        });
    }
    if points.is_empty() {
        return Ok(Vec::new());
    }
    let mut order: Vec<usize> = (0..names.len()).collect();
    order.sort_by(|&a, &b| names[a].cmp(&names[b]));
    let sorted_names: Vec<String> = order.iter().map(|&i| names[i].clone()).collect();
    let sorted_points: Vec<Vec<Rational>> = order.iter().map(|&i| points[i].clone()).collect();
    Ok(affine_dependency_basis(&sorted_points)?
        .iter()
        .map(|v| AffineDependency::from_coefficients(&sorted_names, v))
        .collect())
}

/// Conditions among the given pure states of a theory (all states if `None`).
pub fn theory_conditions(t: &Theory, states: Option<&[usize]>) -> Result<Vec<AffineDependency>> {
    let idx: Vec<usize> = match states {
        Some(s) => s.to_vec(),
        None => (0..t.pure_states.len()).collect(),
    };
    let names: Vec<String> = idx.iter().map(|&i| t.pure_states[i].name.clone()).collect();
    let points: Vec<Vec<Rational>> = idx.iter().map(|&i| t.pure_states[i].point.flatten()).collect();
    nonsimpliciality_conditions(&names, &points)
}

/// Affine functional `coeffs · x + offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatingFunctional {
    pub coeffs: Vec<Rational>,
    pub offset: Rational,
}

impl SeparatingFunctional {
    pub fn eval(&self, x: &[Rational]) -> Rational {
        lp::dot(&self.coeffs, x) + &self.offset
    }

    /// Positive on the query, nonpositive on every vertex.
    pub fn separates(&self, points: &[Vec<Rational>], query: &[Rational]) -> bool {
        self.eval(query).is_positive() && points.iter().all(|p| !self.eval(p).is_positive())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HullMembership {
    /// Convex weights, one per point, reproducing the query.
    Inside(Vec<Rational>),
    Outside(SeparatingFunctional),
}

pub fn hull_membership(points: &[Vec<Rational>], query: &[Rational]) -> Result<HullMembership> {
    let dim = check_points(points)?;
    if query.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: query.len(),
        });
    }
    let k = points.len();
    let mut cs = ConstraintSystem::with_variables((0..k).map(|i| alloc::format!("w{i}")));
    for d in 0..dim {
        cs.add_equality(points.iter().map(|p| p[d].clone()).collect(), query[d].clone());
    }
    cs.add_equality(vec![Rational::one(); k], Rational::one());
    for i in 0..k {
        cs.add_nonnegative(i);
    }
    Ok(match cs.feasible()? {
        Feasibility::Feasible(w) => HullMembership::Inside(w),
        Feasibility::Infeasible(cert) => {
            let y = cert.equality_multipliers;
            HullMembership::Outside(SeparatingFunctional {
                coeffs: y[..dim].to_vec(),
                offset: y[dim].clone(),
            })
        }
    })
}

/// Convex weights as a named mixture.
pub fn weights_to_mixture(names: &[String], weights: &[Rational]) -> Mixture {
    Mixture::new(names.iter().cloned().zip(weights.iter().cloned()))
}
