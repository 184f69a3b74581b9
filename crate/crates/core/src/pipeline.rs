//! Shifted optimisation over the 0/1 points of a decomposable extension:
//! one separable minimisation over the `r`-scaled system, then a split of
//! the optimum into `r` members. Vertex partitioning problems sit on top.

use crate::catalog::{build_automaton_default, predicate_check, run_polytope, Predicate};
use crate::error::{add, Error, Result};
use crate::ilp::{
    decompose_with_cap, scale_system, separable_min_with, DecomposableExtension, SeparableObjective,
    SeparableOptions, SeparableOutcome,
};
use crate::shift::{sco_objective, ColumnMatrix, CostMatrix};
use crate::treewidth::{Graph, TieBreak};

/// Row supports in catalog systems grow with the bag state space, not with
/// the instance, so the pipeline lifts the default guard.
pub const PIPELINE_SUPPORT_CAP: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PipelineResult {
    Infeasible,
    Optimal {
        objective: i64,
        /// The `r` members, projected onto the `x` coordinates, in peeling order.
        columns: Vec<Vec<i64>>,
    },
}

impl PipelineResult {
    pub fn objective(&self) -> Option<i64> {
        match self {
            Self::Optimal { objective, .. } => Some(*objective),
            Self::Infeasible => None,
        }
    }

    pub fn columns(&self) -> Option<&[Vec<i64>]> {
        match self {
            Self::Optimal { columns, .. } => Some(columns),
            Self::Infeasible => None,
        }
    }
}

/// Maximises `c · x̄` over `r` points of the extension's projection.
pub fn solve_sco_extension(ext: &DecomposableExtension, c: &CostMatrix, r: u64) -> Result<PipelineResult> {
    let n = ext.projection().len();
    if c.n() != n {
        return Err(Error::DimensionMismatch(format!("cost has {} rows, projection has {n} coordinates", c.n())));
    }
    if c.r() != r {
        return Err(Error::DimensionMismatch(format!("cost has {} columns, multiplicity is {r}", c.r())));
    }
    if r == 0 {
        return Err(Error::Invalid("multiplicity must be positive".into()));
    }
    let scaled = scale_system(ext, r)?;
    let mut f = SeparableObjective::zero(scaled.num_vars());
    for (i, &var) in ext.projection().iter().enumerate() {
        let table = (0..=r).map(|k| Ok(-c.gamma(i, k)?)).collect::<Result<Vec<i64>>>()?;
        f.set(var, 0, table);
    }
    let opts = SeparableOptions {
        support_cap: PIPELINE_SUPPORT_CAP,
        tie_break: TieBreak::Any,
        decomposition: ext.decomposition().cloned(),
    };
    let (z, value) = match separable_min_with(&scaled, &f, &opts)? {
        SeparableOutcome::Infeasible => return Ok(PipelineResult::Infeasible),
        SeparableOutcome::Optimal { x, value } => (x, value),
    };
    let parts = decompose_with_cap(ext, r, &z, PIPELINE_SUPPORT_CAP)?;
    let columns: Vec<Vec<i64>> = parts.iter().map(|p| ext.project(p)).collect();
    let objective = -value;

    let counts = ext.project(&z);
    let identity = (0..n).try_fold(0i64, |acc, i| add(acc, c.gamma(i, counts[i] as u64)?))?;
    let recomputed = sco_objective(c, &ColumnMatrix::new(n, columns.clone())?)?;
    if identity != objective || recomputed != objective {
        return Err(Error::Internal(format!(
            "objective {objective} disagrees with weight sum {identity} or recomputation {recomputed}"
        )));
    }
    Ok(PipelineResult::Optimal { objective, columns })
}

/// Rows `(1, -1, …, -1)`: the optimum equals `n` exactly when every element is used once.
pub fn build_partition_objective(n: usize, r: u64) -> Result<CostMatrix> {
    if r == 0 {
        return Err(Error::Invalid("r must be positive".into()));
    }
    CostMatrix::from_segments(vec![vec![(1, 1), (r - 1, -1)]; n])
}

fn vertex_sets(columns: &[Vec<i64>]) -> Vec<Vec<usize>> {
    columns
        .iter()
        .map(|col| col.iter().enumerate().filter(|&(_, &x)| x == 1).map(|(v, _)| v).collect())
        .collect()
}

/// Partition of the vertices into `r` sets satisfying `p`, if one exists.
/// Parts appear in peeling order and may be empty when `p` allows it.
pub fn partition_solve(p: Predicate, g: &Graph, r: u64) -> Result<Option<Vec<Vec<usize>>>> {
    let rp = run_polytope(&build_automaton_default(p, g)?)?;
    let c = build_partition_objective(g.n(), r)?;
    let PipelineResult::Optimal { objective, columns } = solve_sco_extension(rp.extension(), &c, r)? else {
        return Ok(None);
    };
    if objective != g.n() as i64 {
        return Ok(None);
    }
    let parts = vertex_sets(&columns);
    let mut owner = vec![usize::MAX; g.n()];
    for (j, part) in parts.iter().enumerate() {
        if !predicate_check(p, g, part)? {
            return Err(Error::Internal(format!("part {j} violates the predicate")));
        }
        for &v in part {
            if owner[v] != usize::MAX {
                return Err(Error::Internal(format!("vertex {v} lies in two parts")));
            }
            owner[v] = j;
        }
    }
    if owner.contains(&usize::MAX) {
        return Err(Error::Internal("parts do not cover the vertex set".into()));
    }
    Ok(Some(parts))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Min,
    Max,
}

/// Smallest (or largest) `r` admitting a partition; 0 when none does.
pub fn min_parts_search(p: Predicate, g: &Graph, dir: Direction) -> Result<u64> {
    Ok(min_parts_witness(p, g, dir)?.map_or(0, |(r, _)| r))
}

/// Like [`min_parts_search`], with the partition found at that `r`.
///
/// The descending scan for dominating sets starts at `δ + 1`: disjoint
/// dominating sets each meet the closed neighbourhood of a minimum-degree vertex.
pub fn min_parts_witness(p: Predicate, g: &Graph, dir: Direction) -> Result<Option<(u64, Vec<Vec<usize>>)>> {
    let n = g.n() as u64;
    if n == 0 {
        return Ok(None);
    }
    let range: Box<dyn Iterator<Item = u64>> = match dir {
        Direction::Min => Box::new(1..=n),
        Direction::Max => {
            let top = match p {
                Predicate::DominatingSet => (0..g.n()).map(|v| g.neighbors(v).len() as u64 + 1).min().unwrap(),
                _ => n,
            };
            Box::new((1..=top).rev())
        }
    };
    for r in range {
        if let Some(parts) = partition_solve(p, g, r)? {
            return Ok(Some((r, parts)));
        }
    }
    Ok(None)
}

pub fn chromatic_number(g: &Graph) -> Result<u64> {
    min_parts_search(Predicate::IndependentSet, g, Direction::Min)
}

pub fn domatic_number(g: &Graph) -> Result<u64> {
    min_parts_search(Predicate::DominatingSet, g, Direction::Max)
}

/// Sorted colour sets (colours `0..a`) giving each vertex `b` colours with
/// adjacent vertices disjoint, if such a colouring exists.
pub fn ab_coloring(g: &Graph, a: u64, b: u64) -> Result<Option<Vec<Vec<u64>>>> {
    if b == 0 || b > a {
        return Err(Error::Invalid(format!("need 1 <= b <= a, got a={a}, b={b}")));
    }
    let rp = run_polytope(&build_automaton_default(Predicate::IndependentSet, g)?)?;
    let mut segments = vec![(b, 1)];
    if a > b {
        segments.push((a - b, -1));
    }
    let c = CostMatrix::from_segments(vec![segments; g.n()])?;
    let PipelineResult::Optimal { objective, columns } = solve_sco_extension(rp.extension(), &c, a)? else {
        return Ok(None);
    };
    let target = (b as i64).checked_mul(g.n() as i64).ok_or(Error::Overflow("b * n"))?;
    if objective != target {
        return Ok(None);
    }
    let mut colors = vec![Vec::new(); g.n()];
    for (j, class) in vertex_sets(&columns).into_iter().enumerate() {
        for v in class {
            colors[v].push(j as u64);
        }
    }
    for (v, cs) in colors.iter().enumerate() {
        if cs.len() as u64 != b || g.neighbors(v).iter().any(|&u| colors[u].iter().any(|x| cs.contains(x))) {
            return Err(Error::Internal(format!("colour sets fail at vertex {v}")));
        }
    }
    Ok(Some(colors))
}
