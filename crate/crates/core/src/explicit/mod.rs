//! Shifted integer programming over an explicitly listed set `S`.
//!
//! Every `x in S^r` is, up to column order, determined by how often each
//! member of `S` is used, so the search space is the set of compositions
//! `(r_1, ..., r_m)` of `r`. [`f_eval`] evaluates a composition directly
//! from partial sums of the cost rows, which keeps it valid when `r` is huge.
//!
//! Solvers:
//! - [`solve_enum`]: exhaustive over compositions, any cost matrix.
//! - [`solve_concave`]: shifted cost; exact branch-and-bound over an LP bound.
//! - [`solve_vertex`]: anti-shifted cost; the optimum sits at a pure composition.
//! - [`solve_linopt_oracle`]: nondecreasing cost over a set behind an oracle.
//! - [`brute_force_tuples`]: independent reference over all `m^r` tuples.

mod concave;
pub mod lp;
mod oracle;

use std::collections::HashSet;

use crate::error::{self, Error, Result};
use crate::shift::{
    rows_nondecreasing, sco_objective, shiftedness, ColumnMatrix, CostMatrix, Shiftedness,
    DEFAULT_MATERIALIZE_CAP,
};

pub use concave::solve_concave;
pub use oracle::{solve_linopt_oracle, ExplicitOracle, LinOptOracle, LinOptResult, OracleAnswer};

/// Caps guarding the exponential routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest `r` for which columns are written out explicitly.
    pub materialize: u64,
    /// Largest `m^r` accepted by [`brute_force_tuples`].
    pub tuples: u128,
    /// Largest number of compositions accepted by [`solve_enum`].
    pub compositions: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            materialize: DEFAULT_MATERIALIZE_CAP,
            tuples: 10_000_000,
            compositions: 10_000_000,
        }
    }
}

/// An explicit set `S = {s^1, ..., s^m}` of distinct integer `n`-vectors
/// together with a cost matrix `c` whose column count is the multiplicity `r`.
#[derive(Debug, Clone)]
pub struct ExplicitInstance {
    vectors: Vec<Vec<i64>>,
    cost: CostMatrix,
    // per row: member indices sorted by that row's value, largest first
    orders: Vec<Vec<usize>>,
    // prefix-sum tables when the cost is explicit
    weights: Option<Vec<Vec<i64>>>,
}

impl ExplicitInstance {
    pub fn new(vectors: Vec<Vec<i64>>, cost: CostMatrix) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::Invalid("the set S must have at least one member".into()));
        }
        let n = cost.n();
        if let Some(bad) = vectors.iter().position(|v| v.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "member {bad} has length {}, cost has {n} rows",
                vectors[bad].len()
            )));
        }
        let mut seen = HashSet::new();
        for (k, v) in vectors.iter().enumerate() {
            if !seen.insert(v) {
                return Err(Error::Invalid(format!("member {k} duplicates an earlier member")));
            }
        }
        let orders = (0..n)
            .map(|i| {
                let mut order: Vec<usize> = (0..vectors.len()).collect();
                order.sort_by(|&a, &b| vectors[b][i].cmp(&vectors[a][i]));
                order
            })
            .collect();
        let weights = if cost.is_explicit() {
            let w = crate::shift::weight_functions(&cost)?;
            Some((0..n).map(|i| w.table(i).unwrap().to_vec()).collect())
        } else {
            None
        };
        Ok(Self { vectors, cost, orders, weights })
    }

    pub fn vectors(&self) -> &[Vec<i64>] {
        &self.vectors
    }

    pub fn cost(&self) -> &CostMatrix {
        &self.cost
    }

    pub fn n(&self) -> usize {
        self.cost.n()
    }

    pub fn m(&self) -> usize {
        self.vectors.len()
    }

    pub fn r(&self) -> u64 {
        self.cost.r()
    }

    pub(crate) fn order(&self, i: usize) -> &[usize] {
        &self.orders[i]
    }

    /// `w_i(k)`.
    pub(crate) fn weight(&self, i: usize, k: u64) -> Result<i64> {
        match &self.weights {
            Some(t) => Ok(t[i][k as usize]),
            None => self.cost.gamma(i, k),
        }
    }

    /// The tuple `x(r_1, ..., r_m)`: `r_1` copies of `s^1`, then `r_2` copies of `s^2`, ...
    pub fn materialize(&self, comp: &Composition, cap: u64) -> Result<ColumnMatrix> {
        self.check(comp)?;
        if self.r() > cap {
            return Err(Error::CapExceeded {
                what: "materializing a tuple",
                needed: self.r() as u128,
                cap: cap as u128,
            });
        }
        let columns = comp
            .parts()
            .iter()
            .zip(&self.vectors)
            .flat_map(|(&count, v)| std::iter::repeat_n(v.clone(), count as usize))
            .collect();
        ColumnMatrix::new(self.n(), columns)
    }

    fn check(&self, comp: &Composition) -> Result<()> {
        if comp.len() != self.m() {
            return Err(Error::DimensionMismatch(format!(
                "composition has {} parts, S has {} members",
                comp.len(),
                self.m()
            )));
        }
        if comp.total() != Some(self.r()) {
            return Err(Error::Invalid(format!("composition does not sum to r = {}", self.r())));
        }
        Ok(())
    }
}

/// Multiplicities `(r_1, ..., r_m)` of the members of `S`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition(Vec<u64>);

impl Composition {
    pub fn new(parts: Vec<u64>) -> Self {
        Self(parts)
    }

    /// `r * e_k` in `m` parts.
    pub fn pure(m: usize, k: usize, r: u64) -> Self {
        let mut parts = vec![0; m];
        parts[k] = r;
        Self(parts)
    }

    pub fn parts(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of the parts, `None` on overflow.
    pub fn total(&self) -> Option<u64> {
        self.0.iter().try_fold(0u64, |acc, &p| acc.checked_add(p))
    }

    pub fn into_parts(self) -> Vec<u64> {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    Optimal { objective: i64, witness: Composition },
    Infeasible,
    Unbounded,
}

impl SolveResult {
    pub fn objective(&self) -> Option<i64> {
        match self {
            SolveResult::Optimal { objective, .. } => Some(*objective),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&Composition> {
        match self {
            SolveResult::Optimal { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

/// `f(r_1, ..., r_m) = c . shift(x(r_1, ..., r_m))` without building `x`.
///
/// For row `i`, order the members so that their `i`-th entries are
/// nonincreasing, let `g_k` be the running total of the multiplicities in
/// that order and `t_k >= 0` the gap between consecutive entries. The row
/// contributes `sum_k t_k w_i(g_k) + (smallest entry) w_i(r)`, so only
/// `O(m)` partial sums are read per row.
pub fn f_eval(inst: &ExplicitInstance, comp: &Composition) -> Result<i64> {
    inst.check(comp)?;
    let parts = comp.parts();
    let m = inst.m();
    let mut total = 0i64;
    for i in 0..inst.n() {
        let order = inst.order(i);
        let mut prefix = 0u64;
        for k in 0..m - 1 {
            prefix += parts[order[k]];
            let gap = error::sub(inst.vectors[order[k]][i], inst.vectors[order[k + 1]][i])?;
            if gap != 0 {
                total = error::add(total, error::mul(gap, inst.weight(i, prefix)?)?)?;
            }
        }
        let lowest = inst.vectors[order[m - 1]][i];
        total = error::add(total, error::mul(lowest, inst.weight(i, inst.r())?)?)?;
    }
    Ok(total)
}

/// Number of compositions of `r` into `m` parts, `C(r+m-1, m-1)`, saturating.
pub fn composition_count(m: usize, r: u64) -> u128 {
    let mut count: u128 = 1;
    for j in 1..m as u128 {
        // C(r+j, j) = C(r+j-1, j-1) * (r+j) / j, exact at every step
        count = match count.checked_mul(r as u128 + j) {
            Some(v) => v / j,
            None => return u128::MAX,
        };
    }
    count
}

/// All compositions of `r` into `m` parts, in lexicographic order.
pub fn compositions(m: usize, r: u64) -> Compositions {
    let mut current = vec![0; m];
    if m > 0 {
        current[m - 1] = r;
    }
    Compositions { current: (m > 0).then_some(current) }
}

pub struct Compositions {
    current: Option<Vec<u64>>,
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().unwrap();
        let m = cur.len();
        let tail = cur[m - 1];
        if m == 1 {
            self.current = None;
        } else if tail > 0 {
            cur[m - 2] += 1;
            cur[m - 1] = tail - 1;
        } else {
            // empty tail: carry into the position left of the last nonzero one
            match (0..m - 1).rev().find(|&k| cur[k] > 0) {
                Some(k) if k > 0 => {
                    let moved = cur[k];
                    cur[k] = 0;
                    cur[k - 1] += 1;
                    cur[m - 1] = moved - 1;
                }
                _ => self.current = None,
            }
        }
        Some(Composition(out))
    }
}

/// Exact optimum by enumerating every composition; ties go to the
/// lexicographically largest composition, i.e. earlier members of `S` are
/// preferred.
pub fn solve_enum(inst: &ExplicitInstance) -> Result<SolveResult> {
    solve_enum_with(inst, &Limits::default())
}

pub fn solve_enum_with(inst: &ExplicitInstance, limits: &Limits) -> Result<SolveResult> {
    let count = composition_count(inst.m(), inst.r());
    if count > limits.compositions {
        return Err(Error::CapExceeded {
            what: "composition enumeration",
            needed: count,
            cap: limits.compositions,
        });
    }
    let mut best: Option<(i64, Composition)> = None;
    for comp in compositions(inst.m(), inst.r()) {
        let value = f_eval(inst, &comp)?;
        if best.as_ref().is_none_or(|(b, _)| value >= *b) {
            best = Some((value, comp));
        }
    }
    let (objective, witness) = best.ok_or_else(|| Error::Internal("no composition".into()))?;
    Ok(SolveResult::Optimal { objective, witness })
}

/// Reference optimum over all `m^r` column tuples, scored by materializing
/// the shift. Independent of [`f_eval`]. Same tie-break as [`solve_enum`].
pub fn brute_force_tuples(inst: &ExplicitInstance) -> Result<SolveResult> {
    brute_force_tuples_with(inst, &Limits::default())
}

pub fn brute_force_tuples_with(inst: &ExplicitInstance, limits: &Limits) -> Result<SolveResult> {
    let (m, r) = (inst.m(), inst.r());
    let needed = (0..r).try_fold(1u128, |acc, _| acc.checked_mul(m as u128)).unwrap_or(u128::MAX);
    if needed > limits.tuples || r > limits.materialize {
        return Err(Error::CapExceeded { what: "tuple enumeration", needed, cap: limits.tuples });
    }
    let r = r as usize;
    let mut tuple = vec![0usize; r];
    let mut best: Option<(i64, Vec<u64>)> = None;
    loop {
        let columns = tuple.iter().map(|&k| inst.vectors[k].clone()).collect();
        let x = ColumnMatrix::new(inst.n(), columns)?;
        let value = sco_objective(&inst.cost, &x)?;
        let mut counts = vec![0u64; m];
        for &k in &tuple {
            counts[k] += 1;
        }
        let better = match &best {
            None => true,
            Some((b, c)) => value > *b || (value == *b && counts > *c),
        };
        if better {
            best = Some((value, counts));
        }
        // odometer
        let mut pos = 0;
        while pos < r && tuple[pos] + 1 == m {
            tuple[pos] = 0;
            pos += 1;
        }
        if pos == r {
            break;
        }
        tuple[pos] += 1;
    }
    let (objective, counts) = best.unwrap();
    Ok(SolveResult::Optimal { objective, witness: Composition(counts) })
}

/// Optimum for a cost matrix with nondecreasing rows: `f` is convex, so the
/// best pure composition `r e_k` wins. Its value is `w . s^k` with `w` the
/// row sums of `c`; ties go to the smallest `k`.
pub fn solve_vertex(inst: &ExplicitInstance) -> Result<SolveResult> {
    if !rows_nondecreasing(inst.cost()) {
        return Err(Error::NotAntiShifted);
    }
    let w = inst.cost().column_sum()?;
    let mut best: Option<(i64, usize)> = None;
    for (k, s) in inst.vectors().iter().enumerate() {
        let value = dot(&w, s)?;
        if best.is_none_or(|(b, _)| value > b) {
            best = Some((value, k));
        }
    }
    let (objective, k) = best.unwrap();
    Ok(SolveResult::Optimal { objective, witness: Composition::pure(inst.m(), k, inst.r()) })
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> Result<i64> {
    a.iter()
        .zip(b)
        .try_fold(0i64, |acc, (&x, &y)| error::add(acc, error::mul(x, y)?))
}

/// Picks the solver from the shape of the cost matrix.
pub fn solve_auto(inst: &ExplicitInstance) -> Result<SolveResult> {
    match shiftedness(inst.cost()) {
        Shiftedness::Shifted => solve_concave(inst),
        Shiftedness::AntiShifted => solve_vertex(inst),
        Shiftedness::Neither if !inst.cost().is_explicit() => Err(Error::Invalid(
            "partial-sums cost matrices must be shifted or anti-shifted".into(),
        )),
        Shiftedness::Neither => solve_enum(inst),
    }
}
