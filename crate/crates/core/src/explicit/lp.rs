//! Exact rational linear programming.
//!
//! A dense two-phase tableau simplex over arbitrary-precision rationals,
//! pivoting with Bland's rule so it cannot cycle. On top of it, [`lp_max`]
//! maximizes a sum of concave piecewise-linear terms by introducing one
//! epigraph variable per term.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rational(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn rational_u(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Sparse linear form `sum coeff * var`.
pub type LinearForm = Vec<(usize, Rational)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub form: LinearForm,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `max objective . x + constant` subject to the constraints and per-variable bounds.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub lower: Vec<Option<Rational>>,
    pub upper: Vec<Option<Rational>>,
    pub constraints: Vec<Constraint>,
    pub objective: LinearForm,
    pub constant: Rational,
}

impl LinearProgram {
    /// `num_vars` variables, all nonnegative.
    pub fn new(num_vars: usize) -> Self {
        Self {
            lower: vec![Some(Rational::zero()); num_vars],
            upper: vec![None; num_vars],
            constraints: Vec::new(),
            objective: Vec::new(),
            constant: Rational::zero(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.lower.len()
    }

    pub fn add_var(&mut self, lower: Option<Rational>, upper: Option<Rational>) -> usize {
        self.lower.push(lower);
        self.upper.push(upper);
        self.lower.len() - 1
    }

    pub fn add_constraint(&mut self, form: LinearForm, relation: Relation, rhs: Rational) {
        self.constraints.push(Constraint { form, relation, rhs });
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rational, point: Vec<Rational> },
}

// A structural variable written as offset + sum sign * column.
struct Substitution {
    offset: Rational,
    columns: Vec<(usize, bool)>,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        if !p.is_one() {
            for v in self.rows[row].iter_mut() {
                if !v.is_zero() {
                    *v = &*v / &p;
                }
            }
            self.rhs[row] = &self.rhs[row] / &p;
        }
        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for i in 0..self.rows.len() {
            if i == row || self.rows[i][col].is_zero() {
                continue;
            }
            let factor = self.rows[i][col].clone();
            for (j, pv) in pivot_row.iter().enumerate() {
                if !pv.is_zero() {
                    self.rows[i][j] = &self.rows[i][j] - &factor * pv;
                }
            }
            self.rhs[i] = &self.rhs[i] - &factor * &pivot_rhs;
        }
        self.basis[row] = col;
    }

    // Maximizes cost . x over the current basis; columns with allowed[j] == false never enter.
    fn optimize(&mut self, cost: &[Rational], allowed: &[bool]) -> Phase {
        loop {
            // reduced cost d_j = c_j - sum_i c_{basis(i)} T[i][j]
            let entering = (0..cost.len()).find(|&j| {
                if !allowed[j] || self.basis.contains(&j) {
                    return false;
                }
                let mut d = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.rows[i][j].is_zero() {
                        d -= &cost[b] * &self.rows[i][j];
                    }
                }
                d.is_positive()
            });
            let Some(col) = entering else { return Phase::Optimal };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return Phase::Unbounded,
                Some((row, _)) => self.pivot(row, col),
            }
        }
    }
}

/// Solves `lp` exactly (maximization).
pub fn solve_lp(lp: &LinearProgram) -> LpOutcome {
    let n = lp.num_vars();
    let mut num_cols = 0usize;
    let mut subs = Vec::with_capacity(n);
    let mut bound_rows: Vec<(usize, Rational)> = Vec::new();
    for j in 0..n {
        match (&lp.lower[j], &lp.upper[j]) {
            (Some(l), u) => {
                let col = num_cols;
                num_cols += 1;
                if let Some(u) = u {
                    if u < l {
                        return LpOutcome::Infeasible;
                    }
                    bound_rows.push((col, u - l));
                }
                subs.push(Substitution { offset: l.clone(), columns: vec![(col, true)] });
            }
            (None, Some(u)) => {
                subs.push(Substitution { offset: u.clone(), columns: vec![(num_cols, false)] });
                num_cols += 1;
            }
            (None, None) => {
                subs.push(Substitution {
                    offset: Rational::zero(),
                    columns: vec![(num_cols, true), (num_cols + 1, false)],
                });
                num_cols += 2;
            }
        }
    }

    // rows over structural columns, before slacks
    let mut raw: Vec<(Vec<Rational>, Relation, Rational)> = Vec::new();
    for c in &lp.constraints {
        let mut row = vec![Rational::zero(); num_cols];
        let mut rhs = c.rhs.clone();
        for (var, coeff) in &c.form {
            let sub = &subs[*var];
            rhs -= coeff * &sub.offset;
            for &(col, positive) in &sub.columns {
                if positive {
                    row[col] += coeff;
                } else {
                    row[col] -= coeff;
                }
            }
        }
        raw.push((row, c.relation, rhs));
    }
    for (col, cap) in bound_rows {
        let mut row = vec![Rational::zero(); num_cols];
        row[col] = Rational::one();
        raw.push((row, Relation::Le, cap));
    }

    let num_slacks = raw.iter().filter(|r| r.1 != Relation::Eq).count();
    let m = raw.len();
    let total = num_cols + num_slacks + m;
    let mut tab = Tableau { rows: Vec::with_capacity(m), rhs: Vec::with_capacity(m), basis: Vec::with_capacity(m) };
    let mut slack = num_cols;
    for (i, (mut row, rel, mut rhs)) in raw.into_iter().enumerate() {
        row.resize(total, Rational::zero());
        match rel {
            Relation::Le => {
                row[slack] = Rational::one();
                slack += 1;
            }
            Relation::Ge => {
                row[slack] = -Rational::one();
                slack += 1;
            }
            Relation::Eq => {}
        }
        if rhs.is_negative() {
            for v in row.iter_mut() {
                *v = -&*v;
            }
            rhs = -rhs;
        }
        let art = num_cols + num_slacks + i;
        row[art] = Rational::one();
        tab.rows.push(row);
        tab.rhs.push(rhs);
        tab.basis.push(art);
    }

    // phase 1: maximize -sum(artificials)
    let art_start = num_cols + num_slacks;
    let mut cost1 = vec![Rational::zero(); total];
    for c in cost1.iter_mut().skip(art_start) {
        *c = -Rational::one();
    }
    let allowed_all = vec![true; total];
    tab.optimize(&cost1, &allowed_all);
    if tab.rhs.iter().zip(&tab.basis).any(|(v, &b)| b >= art_start && !v.is_zero()) {
        return LpOutcome::Infeasible;
    }
    // drive zero-valued artificials out of the basis, dropping redundant rows
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] >= art_start {
            match (0..art_start).find(|&j| !tab.rows[i][j].is_zero()) {
                Some(j) => {
                    tab.pivot(i, j);
                    i += 1;
                }
                None => {
                    tab.rows.remove(i);
                    tab.rhs.remove(i);
                    tab.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }

    // phase 2
    let mut cost2 = vec![Rational::zero(); total];
    for (var, coeff) in &lp.objective {
        for &(col, positive) in &subs[*var].columns {
            if positive {
                cost2[col] += coeff;
            } else {
                cost2[col] -= coeff;
            }
        }
    }
    let allowed: Vec<bool> = (0..total).map(|j| j < art_start).collect();
    if let Phase::Unbounded = tab.optimize(&cost2, &allowed) {
        return LpOutcome::Unbounded;
    }

    let mut values = vec![Rational::zero(); total];
    for (i, &b) in tab.basis.iter().enumerate() {
        values[b] = tab.rhs[i].clone();
    }
    let point: Vec<Rational> = subs
        .iter()
        .map(|sub| {
            let mut v = sub.offset.clone();
            for &(col, positive) in &sub.columns {
                if positive {
                    v += &values[col];
                } else {
                    v -= &values[col];
                }
            }
            v
        })
        .collect();
    let mut value = lp.constant.clone();
    for (var, coeff) in &lp.objective {
        value += coeff * &point[*var];
    }
    LpOutcome::Optimal { value, point }
}

/// A concave piecewise-linear function given by its breakpoints.
///
/// Between breakpoints the function interpolates linearly; outside the
/// first and last breakpoint it continues along the nearest piece.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    points: Vec<(Rational, Rational)>,
}

impl PiecewiseLinear {
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::MalformedBreakpoints("no breakpoints".into()));
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::MalformedBreakpoints("abscissae must increase strictly".into()));
        }
        let f = Self { points };
        if f.pieces().windows(2).any(|w| w[1].0 > w[0].0) {
            return Err(Error::MalformedBreakpoints("slopes must be nonincreasing".into()));
        }
        Ok(f)
    }

    pub fn points(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    /// Each piece as `(slope, intercept)`; a single breakpoint gives a constant.
    pub fn pieces(&self) -> Vec<(Rational, Rational)> {
        if self.points.len() == 1 {
            return vec![(Rational::zero(), self.points[0].1.clone())];
        }
        self.points
            .windows(2)
            .map(|w| {
                let slope = (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0);
                let intercept = &w[0].1 - &slope * &w[0].0;
                (slope, intercept)
            })
            .collect()
    }

    /// Minimum over the pieces, which for a concave function is its value.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.pieces()
            .into_iter()
            .map(|(s, b)| s * x + b)
            .min()
            .unwrap()
    }
}

/// `weight * function(argument . x + offset)` with `weight >= 0`.
#[derive(Debug, Clone)]
pub struct ConcaveTerm {
    pub weight: Rational,
    pub argument: LinearForm,
    pub offset: Rational,
    pub function: PiecewiseLinear,
}

/// Maximize `linear . x + constant + sum of concave terms` over bounded
/// variables and linear equalities.
#[derive(Debug, Clone)]
pub struct ConcaveProgram {
    pub lower: Vec<Option<Rational>>,
    pub upper: Vec<Option<Rational>>,
    pub equalities: Vec<(LinearForm, Rational)>,
    pub linear: LinearForm,
    pub constant: Rational,
    pub terms: Vec<ConcaveTerm>,
}

impl ConcaveProgram {
    pub fn new(num_vars: usize) -> Self {
        Self {
            lower: vec![Some(Rational::zero()); num_vars],
            upper: vec![None; num_vars],
            equalities: Vec::new(),
            linear: Vec::new(),
            constant: Rational::zero(),
            terms: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.lower.len()
    }
}

/// Exact continuous optimum of `program`. The returned point covers the
/// program's own variables only.
pub fn lp_max(program: &ConcaveProgram) -> Result<LpOutcome> {
    let n = program.num_vars();
    let mut lp = LinearProgram {
        lower: program.lower.clone(),
        upper: program.upper.clone(),
        constraints: program
            .equalities
            .iter()
            .map(|(form, rhs)| Constraint { form: form.clone(), relation: Relation::Eq, rhs: rhs.clone() })
            .collect(),
        objective: program.linear.clone(),
        constant: program.constant.clone(),
    };
    for term in &program.terms {
        if term.weight.is_negative() {
            return Err(Error::MalformedBreakpoints("term weight must be nonnegative".into()));
        }
        if term.weight.is_zero() {
            continue;
        }
        let z = lp.add_var(None, None);
        // z <= slope * (argument + offset) + intercept for every piece
        for (slope, intercept) in term.function.pieces() {
            let mut form: LinearForm = vec![(z, Rational::one())];
            for (var, coeff) in &term.argument {
                form.push((*var, -(&slope * coeff)));
            }
            lp.add_constraint(form, Relation::Le, &slope * &term.offset + intercept);
        }
        lp.objective.push((z, term.weight.clone()));
    }
    Ok(match solve_lp(&lp) {
        LpOutcome::Optimal { value, mut point } => {
            point.truncate(n);
            LpOutcome::Optimal { value, point }
        }
        other => other,
    })
}
