//! Exact linear feasibility and optimization over the rationals.
//!
//! Variables are free unless the system contains the inequality `x_i >= 0`.
//! The solver is a dense two-phase simplex using Bland's rule, so it always
//! terminates. Infeasible systems come back with a Farkas certificate over the
//! original rows that can be checked by plain multiplication.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// `coeffs · x (= or >=) rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl LinearConstraint {
    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        dot(&self.coeffs, x)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstraintSystem {
    pub variables: Vec<String>,
    pub equalities: Vec<LinearConstraint>,
    /// Each row means `coeffs · x >= rhs`.
    pub inequalities: Vec<LinearConstraint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FarkasCertificate {
    /// One free-sign multiplier per equality row.
    pub equality_multipliers: Vec<Rational>,
    /// One nonnegative multiplier per inequality row.
    pub inequality_multipliers: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    Infeasible(FarkasCertificate),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optimum {
    pub value: Rational,
    pub argmax: Vec<Rational>,
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

impl ConstraintSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_variables<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        ConstraintSystem {
            variables: names.into_iter().map(Into::into).collect(),
            ..Default::default()
        }
    }

    pub fn add_variable(&mut self, name: impl Into<String>) -> usize {
        self.variables.push(name.into());
        for row in self.equalities.iter_mut().chain(self.inequalities.iter_mut()) {
            row.coeffs.push(Rational::zero());
        }
        self.variables.len() - 1
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    fn dense(&self, terms: &[(usize, Rational)]) -> Vec<Rational> {
        let mut coeffs = vec![Rational::zero(); self.variables.len()];
        for (i, c) in terms {
            coeffs[*i] += c;
        }
        coeffs
    }

    pub fn add_equality(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.equalities.push(LinearConstraint { coeffs, rhs });
    }

    pub fn add_inequality(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.inequalities.push(LinearConstraint { coeffs, rhs });
    }

    pub fn add_equality_terms(&mut self, terms: &[(usize, Rational)], rhs: Rational) {
        let coeffs = self.dense(terms);
        self.add_equality(coeffs, rhs);
    }

    pub fn add_inequality_terms(&mut self, terms: &[(usize, Rational)], rhs: Rational) {
        let coeffs = self.dense(terms);
        self.add_inequality(coeffs, rhs);
    }

    pub fn add_nonnegative(&mut self, var: usize) {
        self.add_inequality_terms(&[(var, Rational::one())], Rational::zero());
    }

    /// `coeffs · x <= rhs`, stored as `-coeffs · x >= -rhs`.
    pub fn add_upper_bound_terms(&mut self, terms: &[(usize, Rational)], rhs: Rational) {
        let neg: Vec<(usize, Rational)> = terms.iter().map(|(i, c)| (*i, -c)).collect();
        self.add_inequality_terms(&neg, -rhs);
    }

    pub fn check_shape(&self) -> Result<()> {
        let n = self.variables.len();
        for row in self.equalities.iter().chain(&self.inequalities) {
            if row.coeffs.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.coeffs.len(),
                });
            }
        }
        Ok(())
    }

    /// Exact check of every constraint.
    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        x.len() == self.variables.len()
            && self.equalities.iter().all(|r| r.evaluate(x) == r.rhs)
            && self.inequalities.iter().all(|r| r.evaluate(x) >= r.rhs)
    }

    pub fn feasible(&self) -> Result<Feasibility> {
        self.check_shape()?;
        let sf = StandardForm::build(self);
        let mut tab = Tableau::phase_one(&sf);
        tab.run(None)?;
        if !tab.objective_value().is_zero() {
            return Ok(Feasibility::Infeasible(sf.certificate(self, &tab.phase_one_duals())));
        }
        Ok(Feasibility::Feasible(sf.recover(&tab.basic_solution())))
    }

    pub fn maximize(&self, objective: &[Rational]) -> Result<Optimum> {
        self.check_shape()?;
        if objective.len() != self.variables.len() {
            return Err(Error::DimensionMismatch {
                expected: self.variables.len(),
                found: objective.len(),
            });
        }
        let sf = StandardForm::build(self);
        let mut tab = Tableau::phase_one(&sf);
        tab.run(None)?;
        if !tab.objective_value().is_zero() {
            return Err(Error::Infeasible);
        }
        tab.expel_artificials();
        // minimize -objective
        let mut cost = vec![Rational::zero(); sf.columns];
        for (i, c) in objective.iter().enumerate() {
            for (col, sign) in sf.var_columns[i].iter() {
                cost[*col] = if *sign { c.clone() } else { -c };
            }
        }
        tab.set_cost(&cost);
        tab.run(Some(sf.columns))?;
        let argmax = sf.recover(&tab.basic_solution());
        let value = dot(objective, &argmax);
        Ok(Optimum { value, argmax })
    }

    pub fn minimize(&self, objective: &[Rational]) -> Result<Optimum> {
        let neg: Vec<Rational> = objective.iter().map(|c| -c).collect();
        let opt = self.maximize(&neg)?;
        Ok(Optimum {
            value: -opt.value,
            argmax: opt.argmax,
        })
    }
}

impl FarkasCertificate {
    /// Checks `Eᵀy + Gᵀz = 0`, `z >= 0` and `eᵀy + gᵀz > 0` exactly.
    pub fn verify(&self, cs: &ConstraintSystem) -> bool {
        if self.equality_multipliers.len() != cs.equalities.len()
            || self.inequality_multipliers.len() != cs.inequalities.len()
        {
            return false;
        }
        if self.inequality_multipliers.iter().any(Rational::is_negative) {
            return false;
        }
        let n = cs.variables.len();
        let mut combo = vec![Rational::zero(); n];
        let mut rhs = Rational::zero();
        let rows = cs
            .equalities
            .iter()
            .zip(&self.equality_multipliers)
            .chain(cs.inequalities.iter().zip(&self.inequality_multipliers));
        for (row, y) in rows {
            if y.is_zero() {
                continue;
            }
            for (c, a) in combo.iter_mut().zip(&row.coeffs) {
                if !a.is_zero() {
                    *c += y * a;
                }
            }
            rhs += y * &row.rhs;
        }
        combo.iter().all(Rational::is_zero) && rhs.is_positive()
    }
}

/// `A u = b`, `u >= 0`, `b >= 0`, derived from a [`ConstraintSystem`].
struct StandardForm {
    rows: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    columns: usize,
    /// For each original variable: (column, is_negative_part).
    var_columns: Vec<Vec<(usize, bool)>>,
    /// For each standard row: (is_equality, original index, negated).
    origin: Vec<(bool, usize, bool)>,
    /// Inequality rows folded into variable bounds: original index -> variable.
    bound_rows: Vec<(usize, usize)>,
}

impl StandardForm {
    fn build(cs: &ConstraintSystem) -> Self {
        let n = cs.variables.len();
        let mut nonneg = vec![false; n];
        let mut bound_rows = Vec::new();
        let mut general = Vec::new();
        for (k, row) in cs.inequalities.iter().enumerate() {
            let mut nz = row.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero());
            let single = match (nz.next(), nz.next()) {
                (Some((i, c)), None) if c.is_positive() && row.rhs.is_zero() => Some(i),
                _ => None,
            };
            match single {
                Some(i) if !nonneg[i] => {
                    nonneg[i] = true;
                    bound_rows.push((k, i));
                }
                Some(_) => {} // duplicate bound, multiplier stays zero
                None => general.push(k),
            }
        }

        let mut var_columns = Vec::with_capacity(n);
        let mut columns = 0;
        for &nn in &nonneg {
            if nn {
                var_columns.push(vec![(columns, false)]);
                columns += 1;
            } else {
                var_columns.push(vec![(columns, false), (columns + 1, true)]);
                columns += 2;
            }
        }
        let slack_start = columns;
        columns += general.len();

        let mut rows = Vec::new();
        let mut b = Vec::new();
        let mut origin = Vec::new();
        let mut push_row = |coeffs: &[Rational], rhs: &Rational, slack: Option<usize>, eq: bool, idx: usize| {
            let mut r = vec![Rational::zero(); columns];
            for (i, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (col, neg) in &var_columns[i] {
                    r[*col] = if *neg { -c } else { c.clone() };
                }
            }
            if let Some(s) = slack {
                r[s] = -Rational::one();
            }
            let negate = rhs.is_negative();
            if negate {
                for x in r.iter_mut() {
                    *x = -&*x;
                }
            }
            rows.push(r);
            b.push(if negate { -rhs } else { rhs.clone() });
            origin.push((eq, idx, negate));
        };
        for (k, row) in cs.equalities.iter().enumerate() {
            push_row(&row.coeffs, &row.rhs, None, true, k);
        }
        for (j, &k) in general.iter().enumerate() {
            let row = &cs.inequalities[k];
            push_row(&row.coeffs, &row.rhs, Some(slack_start + j), false, k);
        }
        StandardForm {
            rows,
            b,
            columns,
            var_columns,
            origin,
            bound_rows,
        }
    }

    fn recover(&self, u: &[Rational]) -> Vec<Rational> {
        self.var_columns
            .iter()
            .map(|cols| {
                let mut v = Rational::zero();
                for (c, neg) in cols {
                    if *neg {
                        v -= &u[*c];
                    } else {
                        v += &u[*c];
                    }
                }
                v
            })
            .collect()
    }

    /// Maps phase-one duals (one per standard row) back onto the original rows.
    fn certificate(&self, cs: &ConstraintSystem, duals: &[Rational]) -> FarkasCertificate {
        let mut y = vec![Rational::zero(); cs.equalities.len()];
        let mut z = vec![Rational::zero(); cs.inequalities.len()];
        for (pi, (eq, idx, negated)) in duals.iter().zip(&self.origin) {
            let m = if *negated { -pi } else { pi.clone() };
            if *eq {
                y[*idx] = m;
            } else {
                z[*idx] = m;
            }
        }
        // Close the combination on bounded variables with their bound rows.
        let n = cs.variables.len();
        let mut combo = vec![Rational::zero(); n];
        for (row, m) in cs.equalities.iter().zip(&y).chain(cs.inequalities.iter().zip(&z)) {
            if m.is_zero() {
                continue;
            }
            for (c, a) in combo.iter_mut().zip(&row.coeffs) {
                *c += m * a;
            }
        }
        for &(k, var) in &self.bound_rows {
            let coeff = &cs.inequalities[k].coeffs[var];
            z[k] = -&combo[var] / coeff;
        }
        FarkasCertificate {
            equality_multipliers: y,
            inequality_multipliers: z,
        }
    }
}

/// Dense simplex tableau with an explicit reduced-cost row.
struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    cost_row: Vec<Rational>,
    cost_rhs: Rational,
    /// Columns `>= artificial_start` are artificial.
    artificial_start: usize,
}

impl Tableau {
    fn phase_one(sf: &StandardForm) -> Self {
        let m = sf.rows.len();
        let total = sf.columns + m;
        let mut rows = Vec::with_capacity(m);
        for (i, r) in sf.rows.iter().enumerate() {
            let mut row = r.clone();
            row.resize(total, Rational::zero());
            row[sf.columns + i] = Rational::one();
            rows.push(row);
        }
        let mut cost_row = vec![Rational::zero(); total];
        let mut cost_rhs = Rational::zero();
        for (row, b) in rows.iter().zip(&sf.b) {
            for (c, a) in cost_row.iter_mut().zip(row).take(sf.columns) {
                if !a.is_zero() {
                    *c -= a;
                }
            }
            cost_rhs -= b;
        }
        Tableau {
            rows,
            rhs: sf.b.clone(),
            basis: (sf.columns..total).collect(),
            cost_row,
            cost_rhs,
            artificial_start: sf.columns,
        }
    }

    /// Current value of the minimized objective.
    fn objective_value(&self) -> Rational {
        -&self.cost_rhs
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let p = self.rows[r][e].clone();
        if !p.is_one() {
            let inv = p.recip();
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
            self.rhs[r] *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][e].clone();
            if f.is_zero() {
                continue;
            }
            for (x, a) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !a.is_zero() {
                    *x -= &f * a;
                }
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        let f = self.cost_row[e].clone();
        if !f.is_zero() {
            for (x, a) in self.cost_row.iter_mut().zip(&pivot_row) {
                if !a.is_zero() {
                    *x -= &f * a;
                }
            }
            self.cost_rhs -= &f * &pivot_rhs;
        }
        self.basis[r] = e;
    }

    /// Bland's rule iterations until optimal. `limit` excludes columns at or
    /// beyond it from entering.
    fn run(&mut self, limit: Option<usize>) -> Result<()> {
        let ncols = limit.unwrap_or(self.cost_row.len());
        loop {
            let Some(e) = (0..ncols).find(|&j| self.cost_row[j].is_negative()) else {
                return Ok(());
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][e];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return Err(Error::Unbounded),
                Some((r, _)) => self.pivot(r, e),
            }
        }
    }

    fn phase_one_duals(&self) -> Vec<Rational> {
        (0..self.rows.len())
            .map(|i| Rational::one() - &self.cost_row[self.artificial_start + i])
            .collect()
    }

    fn basic_solution(&self) -> Vec<Rational> {
        let mut u = vec![Rational::zero(); self.artificial_start];
        for (i, &col) in self.basis.iter().enumerate() {
            if col < self.artificial_start {
                u[col] = self.rhs[i].clone();
            }
        }
        u
    }

    /// After a zero-cost phase one, pivots artificials out of the basis or
    /// drops the redundant rows they sit on.
    fn expel_artificials(&mut self) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.artificial_start {
                match (0..self.artificial_start).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(j) => self.pivot(i, j),
                    None => {
                        self.rows.remove(i);
                        self.rhs.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    fn set_cost(&mut self, cost: &[Rational]) {
        let total = self.cost_row.len();
        let mut row = vec![Rational::zero(); total];
        row[..cost.len()].clone_from_slice(cost);
        let mut rhs = Rational::zero();
        for (i, &col) in self.basis.iter().enumerate() {
            let cb = row[col].clone();
            if cb.is_zero() {
                continue;
            }
            for (x, a) in row.iter_mut().zip(&self.rows[i]) {
                if !a.is_zero() {
                    *x -= &cb * a;
                }
            }
            rhs -= &cb * &self.rhs[i];
        }
        self.cost_row = row;
        self.cost_rhs = rhs;
    }
}
