//! Integer equality systems with box bounds, solved through the CSP engine
//! along a tree decomposition of their Gaifman graph.

use std::collections::BTreeMap;

use crate::error::{add, mul, Error, Result};
use crate::treewidth::{
    csp_solve_with, min_fill_decomposition, validate_decomposition, CspInstance, CspSolution, Graph,
    HardConstraint, SoftConstraint, TieBreak, TreeDecomposition,
};

pub const DEFAULT_SUPPORT_CAP: usize = 16;
/// Largest bound range `u - l + 1` turned into an explicit CSP domain.
pub const MAX_DOMAIN: i64 = 1 << 20;

/// `Σ coeff · x[var] = rhs`, terms sorted by variable with nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearRow {
    terms: Vec<(usize, i64)>,
    rhs: i64,
}

impl LinearRow {
    pub fn terms(&self) -> &[(usize, i64)] {
        &self.terms
    }

    pub fn rhs(&self) -> i64 {
        self.rhs
    }

    pub fn support(&self) -> usize {
        self.terms.len()
    }

    fn value(&self, x: &[i64]) -> i128 {
        self.terms.iter().map(|&(v, a)| a as i128 * x[v] as i128).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlpSystem {
    rows: Vec<LinearRow>,
    lower: Vec<i64>,
    upper: Vec<i64>,
}

impl IlpSystem {
    pub fn new(lower: Vec<i64>, upper: Vec<i64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch("lower and upper bounds".into()));
        }
        if let Some(i) = (0..lower.len()).find(|&i| lower[i] > upper[i]) {
            return Err(Error::Invalid(format!("variable {i} has lower bound above upper bound")));
        }
        Ok(Self { rows: Vec::new(), lower, upper })
    }

    /// All variables in `[0, 1]`.
    pub fn binary(d: usize) -> Self {
        Self { rows: Vec::new(), lower: vec![0; d], upper: vec![1; d] }
    }

    /// Repeated variables have their coefficients summed; zero terms are dropped.
    pub fn add_row(&mut self, terms: impl IntoIterator<Item = (usize, i64)>, rhs: i64) -> Result<()> {
        let mut merged: BTreeMap<usize, i64> = BTreeMap::new();
        for (v, a) in terms {
            if v >= self.num_vars() {
                return Err(Error::Invalid(format!("row names variable {v} of {}", self.num_vars())));
            }
            let slot = merged.entry(v).or_insert(0);
            *slot = add(*slot, a)?;
        }
        let terms = merged.into_iter().filter(|&(_, a)| a != 0).collect();
        self.rows.push(LinearRow { terms, rhs });
        Ok(())
    }

    pub fn num_vars(&self) -> usize {
        self.lower.len()
    }

    pub fn rows(&self) -> &[LinearRow] {
        &self.rows
    }

    pub fn lower(&self) -> &[i64] {
        &self.lower
    }

    pub fn upper(&self) -> &[i64] {
        &self.upper
    }

    pub fn is_feasible(&self, x: &[i64]) -> bool {
        x.len() == self.num_vars()
            && (0..x.len()).all(|i| self.lower[i] <= x[i] && x[i] <= self.upper[i])
            && self.rows.iter().all(|r| r.value(x) == r.rhs as i128)
    }
}

/// Variables adjacent iff some row has nonzero coefficients on both.
pub fn gaifman_graph(sys: &IlpSystem) -> Graph {
    let mut g = Graph::empty(sys.num_vars());
    for row in &sys.rows {
        let vars: Vec<usize> = row.terms.iter().map(|&(v, _)| v).collect();
        g.add_clique(&vars);
    }
    g
}

/// `f(x) = Σ f_i(x_i)`; variables without a table contribute zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparableObjective {
    tables: Vec<Option<(i64, Vec<i64>)>>,
}

impl SeparableObjective {
    pub fn zero(d: usize) -> Self {
        Self { tables: vec![None; d] }
    }

    /// `f_i(lower + j) = values[j]`.
    pub fn set(&mut self, i: usize, lower: i64, values: Vec<i64>) {
        self.tables[i] = Some((lower, values));
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn value(&self, i: usize, x: i64) -> Result<i64> {
        match &self.tables[i] {
            None => Ok(0),
            Some((lo, values)) => usize::try_from(x - lo)
                .ok()
                .and_then(|j| values.get(j).copied())
                .ok_or_else(|| Error::Invalid(format!("objective for variable {i} undefined at {x}"))),
        }
    }

    pub fn total(&self, x: &[i64]) -> Result<i64> {
        (0..self.tables.len()).try_fold(0, |acc, i| add(acc, self.value(i, x[i])?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparableOptions {
    pub support_cap: usize,
    pub tie_break: TieBreak,
    /// Decomposition of the Gaifman graph to use instead of min-fill.
    pub decomposition: Option<TreeDecomposition>,
}

impl Default for SeparableOptions {
    fn default() -> Self {
        Self { support_cap: DEFAULT_SUPPORT_CAP, tie_break: TieBreak::LexMin, decomposition: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeparableOutcome {
    Infeasible,
    Optimal { x: Vec<i64>, value: i64 },
}

impl SeparableOutcome {
    pub fn point(&self) -> Option<&[i64]> {
        match self {
            Self::Optimal { x, .. } => Some(x),
            Self::Infeasible => None,
        }
    }
}

/// Minimises `f` over the integer points of `sys`; lexicographically smallest on ties.
pub fn separable_min(sys: &IlpSystem, f: &SeparableObjective) -> Result<SeparableOutcome> {
    separable_min_with(sys, f, &SeparableOptions::default())
}

pub fn separable_min_with(sys: &IlpSystem, f: &SeparableObjective, opts: &SeparableOptions) -> Result<SeparableOutcome> {
    let d = sys.num_vars();
    if f.len() != d {
        return Err(Error::DimensionMismatch(format!("objective over {} variables, system has {d}", f.len())));
    }
    for (row, r) in sys.rows.iter().enumerate() {
        if r.support() > opts.support_cap {
            return Err(Error::SupportTooLarge { row, support: r.support(), cap: opts.support_cap });
        }
    }
    let mut domains = Vec::with_capacity(d);
    let mut soft = Vec::new();
    for i in 0..d {
        let (lo, hi) = (sys.lower[i], sys.upper[i]);
        let size = hi as i128 - lo as i128 + 1;
        if size > MAX_DOMAIN as i128 {
            return Err(Error::CapExceeded { what: "domain values", needed: size as u128, cap: MAX_DOMAIN as u128 });
        }
        domains.push((lo..=hi).collect::<Vec<i64>>());
        if f.tables[i].is_some() {
            let weights: Result<Vec<(i64, i64)>> = (lo..=hi).map(|x| Ok((x, f.value(i, x)?))).collect();
            soft.push(SoftConstraint::unary(i, weights?));
        }
    }
    let hard = sys
        .rows
        .iter()
        .map(|r| {
            let (scope, coeffs) = r.terms.iter().copied().unzip();
            HardConstraint::linear_eq(scope, coeffs, r.rhs)
        })
        .collect();
    let csp = CspInstance::new(domains, hard, soft)?;
    let graph = gaifman_graph(sys);
    let td = match &opts.decomposition {
        Some(td) => {
            if let Some(v) = validate_decomposition(&graph, td).first() {
                return Err(Error::InvalidDecomposition(format!("{v:?}")));
            }
            td.clone()
        }
        None => min_fill_decomposition(&graph),
    };
    Ok(match csp_solve_with(&csp, &td, opts.tie_break)? {
        CspSolution::Infeasible => SeparableOutcome::Infeasible,
        CspSolution::Solved { assignment, weight } => SeparableOutcome::Optimal { x: assignment, value: weight },
    })
}

/// A 0/1 system whose projection onto `projection` is claimed decomposable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecomposableExtension {
    system: IlpSystem,
    projection: Vec<usize>,
    decomposable: bool,
    hint: Option<TreeDecomposition>,
}

impl DecomposableExtension {
    /// `decomposable` records the caller's claim; [`decompose`] refuses to run without it.
    pub fn new(system: IlpSystem, projection: Vec<usize>, decomposable: bool) -> Result<Self> {
        if (0..system.num_vars()).any(|i| system.lower[i] < 0 || system.upper[i] > 1) {
            return Err(Error::Invalid("extension bounds must lie in [0, 1]".into()));
        }
        let mut seen = vec![false; system.num_vars()];
        for &p in &projection {
            if p >= system.num_vars() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Invalid(format!("bad projection index {p}")));
            }
        }
        Ok(Self { system, projection, decomposable, hint: None })
    }

    /// Attaches a tree decomposition of the Gaifman graph used by every solve.
    pub fn with_decomposition(mut self, td: TreeDecomposition) -> Result<Self> {
        if let Some(v) = validate_decomposition(&gaifman_graph(&self.system), &td).first() {
            return Err(Error::InvalidDecomposition(format!("{v:?}")));
        }
        self.hint = Some(td);
        Ok(self)
    }

    pub fn system(&self) -> &IlpSystem {
        &self.system
    }

    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    pub fn is_decomposable(&self) -> bool {
        self.decomposable
    }

    pub fn decomposition(&self) -> Option<&TreeDecomposition> {
        self.hint.as_ref()
    }

    pub fn project(&self, point: &[i64]) -> Vec<i64> {
        self.projection.iter().map(|&i| point[i]).collect()
    }
}

/// Same rows with right-hand sides and bounds multiplied by `k`.
pub fn scale_system(ext: &DecomposableExtension, k: u64) -> Result<IlpSystem> {
    if k == 0 {
        return Err(Error::Invalid("scaling factor must be positive".into()));
    }
    let k = i64::try_from(k).map_err(|_| Error::Overflow("scaling factor"))?;
    let sys = &ext.system;
    let scale = |v: &[i64]| v.iter().map(|&b| mul(b, k)).collect::<Result<Vec<_>>>();
    let rows = sys
        .rows
        .iter()
        .map(|r| Ok(LinearRow { terms: r.terms.clone(), rhs: mul(r.rhs, k)? }))
        .collect::<Result<Vec<_>>>()?;
    Ok(IlpSystem { rows, lower: scale(&sys.lower)?, upper: scale(&sys.upper)? })
}

/// Splits an integer point of the `k`-scaled system into `k` points of the
/// base system by greedy peeling, lexicographically largest summand first.
pub fn decompose(ext: &DecomposableExtension, k: u64, z: &[i64]) -> Result<Vec<Vec<i64>>> {
    decompose_with_cap(ext, k, z, DEFAULT_SUPPORT_CAP)
}

pub fn decompose_with_cap(ext: &DecomposableExtension, k: u64, z: &[i64], support_cap: usize) -> Result<Vec<Vec<i64>>> {
    if !ext.decomposable {
        return Err(Error::Invalid("extension was not asserted decomposable".into()));
    }
    let scaled = scale_system(ext, k)?;
    if !scaled.is_feasible(z) {
        return Err(Error::Invalid("point does not satisfy the scaled system".into()));
    }
    let sys = &ext.system;
    let opts = SeparableOptions { support_cap, tie_break: TieBreak::LexMax, decomposition: ext.hint.clone() };
    let zero = SeparableObjective::zero(sys.num_vars());
    let mut residual = z.to_vec();
    let mut parts = Vec::with_capacity(k as usize);
    for j in (2..=k as i64).rev() {
        let mut peel = sys.clone();
        #[allow(clippy::needless_range_loop)]
        for i in 0..sys.num_vars() {
            peel.lower[i] = sys.lower[i].max(residual[i] - (j - 1) * sys.upper[i]);
            peel.upper[i] = sys.upper[i].min(residual[i] - (j - 1) * sys.lower[i]);
            if peel.lower[i] > peel.upper[i] {
                return Err(Error::DecomposabilityViolated { remaining: j as u64 });
            }
        }
        let s = match separable_min_with(&peel, &zero, &opts)? {
            SeparableOutcome::Optimal { x, .. } => x,
            SeparableOutcome::Infeasible => return Err(Error::DecomposabilityViolated { remaining: j as u64 }),
        };
        for i in 0..residual.len() {
            residual[i] -= s[i];
        }
        parts.push(s);
    }
    if !sys.is_feasible(&residual) {
        return Err(Error::DecomposabilityViolated { remaining: 1 });
    }
    parts.push(residual);

    for i in 0..z.len() {
        if parts.iter().map(|p| p[i]).sum::<i64>() != z[i] {
            return Err(Error::Internal("decomposition does not sum to the input".into()));
        }
    }
    if let Some(bad) = parts.iter().position(|p| !sys.is_feasible(p)) {
        return Err(Error::Internal(format!("summand {bad} violates the base system")));
    }
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pair(rhs: i64) -> IlpSystem {
        let mut sys = IlpSystem::binary(2);
        sys.add_row([(0, 1), (1, 1)], rhs).unwrap();
        sys
    }

    #[test]
    fn gaifman_examples() {
        let mut sys = IlpSystem::binary(3);
        sys.add_row([(0, 1), (1, 1)], 1).unwrap();
        sys.add_row([(1, 1), (2, 1)], 1).unwrap();
        let g = gaifman_graph(&sys);
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
        assert_eq!(min_fill_decomposition(&g).width(), 1);

        let mut full = IlpSystem::binary(4);
        full.add_row((0..4).map(|v| (v, 1)), 2).unwrap();
        assert_eq!(gaifman_graph(&full), Graph::complete(4));
        assert_eq!(gaifman_graph(&IlpSystem::binary(3)).num_edges(), 0);

        let mut cancel = IlpSystem::binary(2);
        cancel.add_row([(0, 1), (1, 2), (1, -2)], 0).unwrap();
        assert_eq!(gaifman_graph(&cancel).num_edges(), 0);
    }

    #[test]
    fn separable_examples() {
        let mut f = SeparableObjective::zero(2);
        f.set(0, 0, vec![0, 1]);
        f.set(1, 0, vec![0, 3]);
        assert_eq!(separable_min(&pair(1), &f).unwrap(), SeparableOutcome::Optimal { x: vec![1, 0], value: 1 });
        assert_eq!(separable_min(&pair(3), &f).unwrap(), SeparableOutcome::Infeasible);
        let out = separable_min(&pair(1), &SeparableObjective::zero(2)).unwrap();
        assert_eq!(out, SeparableOutcome::Optimal { x: vec![0, 1], value: 0 });
    }

    #[test]
    fn support_guard() {
        let mut sys = IlpSystem::binary(20);
        sys.add_row((0..20).map(|v| (v, 1)), 3).unwrap();
        assert_eq!(
            separable_min(&sys, &SeparableObjective::zero(20)),
            Err(Error::SupportTooLarge { row: 0, support: 20, cap: 16 })
        );
    }

    #[test]
    fn scaling() {
        let ext = DecomposableExtension::new(pair(1), vec![0, 1], true).unwrap();
        let s3 = scale_system(&ext, 3).unwrap();
        assert_eq!(s3.rows()[0].rhs(), 3);
        assert_eq!(s3.upper(), &[3, 3]);
        assert_eq!(scale_system(&ext, 1).unwrap(), pair(1));
        assert_eq!(gaifman_graph(&s3), gaifman_graph(ext.system()));
        assert!(scale_system(&ext, 0).is_err());
        let mut big = IlpSystem::binary(1);
        big.add_row([(0, 1)], i64::MAX / 2).unwrap();
        let big = DecomposableExtension::new(big, vec![0], true).unwrap();
        assert_eq!(scale_system(&big, 3), Err(Error::Overflow("multiplication")));
    }

    #[test]
    fn decompose_examples() {
        let ext = DecomposableExtension::new(pair(1), vec![0, 1], true).unwrap();
        assert_eq!(decompose(&ext, 2, &[1, 1]).unwrap(), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(decompose(&ext, 2, &[2, 0]).unwrap(), vec![vec![1, 0], vec![1, 0]]);
        assert_eq!(decompose(&ext, 1, &[0, 1]).unwrap(), vec![vec![0, 1]]);
        assert!(decompose(&ext, 2, &[1, 0]).is_err());
    }

    #[test]
    fn decompose_reports_false_claims() {
        // only (1,1,0) is feasible, yet (1,1,2) satisfies the doubled system
        let mut sys = IlpSystem::binary(3);
        sys.add_row([(0, 1), (1, 1), (2, 1)], 2).unwrap();
        sys.add_row([(0, 1), (1, -1)], 0).unwrap();
        let ext = DecomposableExtension::new(sys, vec![0, 1, 2], true).unwrap();
        let z = [1, 1, 2];
        assert!(scale_system(&ext, 2).unwrap().is_feasible(&z));
        assert!(matches!(decompose(&ext, 2, &z), Err(Error::DecomposabilityViolated { .. })));
        let unclaimed = DecomposableExtension::new(ext.system().clone(), vec![0], false).unwrap();
        assert!(decompose(&unclaimed, 1, &[1, 1, 0]).is_err());
    }

    fn box_min(sys: &IlpSystem, f: &SeparableObjective) -> SeparableOutcome {
        let d = sys.num_vars();
        let mut x = sys.lower().to_vec();
        let mut best: Option<(i64, Vec<i64>)> = None;
        loop {
            if sys.is_feasible(&x) {
                let v = f.total(&x).unwrap();
                if best.as_ref().is_none_or(|(b, _)| v < *b) {
                    best = Some((v, x.clone()));
                }
            }
            let mut i = d;
            loop {
                if i == 0 {
                    return match best {
                        None => SeparableOutcome::Infeasible,
                        Some((value, x)) => SeparableOutcome::Optimal { x, value },
                    };
                }
                i -= 1;
                if x[i] < sys.upper()[i] {
                    x[i] += 1;
                    break;
                }
                x[i] = sys.lower()[i];
            }
        }
    }

    fn arb_system() -> impl Strategy<Value = (IlpSystem, SeparableObjective)> {
        (1usize..=7).prop_flat_map(|d| {
            let bounds = prop::collection::vec((-1i64..2, 0i64..3), d);
            let rows = prop::collection::vec(
                (prop::collection::btree_map(0..d, -2i64..3, 1..=3.min(d)), -2i64..5),
                0..4,
            );
            let f = prop::collection::vec(prop::option::of(prop::collection::vec(-4i64..5, 8)), d);
            (bounds, rows, f)
        })
        .prop_map(|(bounds, rows, f)| {
            let lower: Vec<i64> = bounds.iter().map(|&(l, _)| l).collect();
            let upper: Vec<i64> = bounds.iter().map(|&(l, w)| l + w).collect();
            let mut sys = IlpSystem::new(lower.clone(), upper).unwrap();
            for (terms, rhs) in rows {
                sys.add_row(terms, rhs).unwrap();
            }
            let mut obj = SeparableObjective::zero(lower.len());
            for (i, t) in f.into_iter().enumerate() {
                if let Some(t) = t {
                    obj.set(i, lower[i], t);
                }
            }
            (sys, obj)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn separable_matches_box_search((sys, f) in arb_system()) {
            prop_assert_eq!(separable_min(&sys, &f).unwrap(), box_min(&sys, &f));
        }
    }
}
