//! Instance generators for covering problems and the succinct weighted set
//! multicover solver.

use std::collections::BTreeSet;

use crate::error::{add, mul, Error, Result};
use crate::explicit::{solve_concave, ExplicitInstance, SolveResult};
use crate::shift::CostMatrix;
use crate::treewidth::Graph;

fn segments(parts: &[(u64, i64)]) -> Vec<(u64, i64)> {
    parts.iter().copied().filter(|&(len, _)| len > 0).collect()
}

/// Closed neighbourhoods as members, cost rows `(1, 0, …, 0)`. The optimum
/// equals `n` exactly when `g` has a dominating set of at most `r` vertices.
pub fn domset_to_sco(g: &Graph, r: u64) -> Result<ExplicitInstance> {
    if r == 0 {
        return Err(Error::Invalid("r must be positive".into()));
    }
    let n = g.n();
    if n == 0 {
        return Err(Error::Invalid("graph has no vertices".into()));
    }
    let mut members = BTreeSet::new();
    for v in 0..n {
        let mut x = vec![0i64; n];
        for u in g.closed_neighborhood(v) {
            x[u] = 1;
        }
        members.insert(x);
    }
    let c = CostMatrix::from_segments(vec![segments(&[(1, 1), (r - 1, 0)]); n])?;
    ExplicitInstance::new(members.into_iter().collect(), c)
}

/// Multiset cover with admissible counts: choose `r = p_1 + … + p_k` so the
/// number of chosen sets containing element `i` lies in `demands[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MscInstance {
    n: usize,
    demands: Vec<BTreeSet<u64>>,
    family: Vec<Vec<usize>>,
    r: u64,
}

impl MscInstance {
    pub fn new(n: usize, demands: Vec<BTreeSet<u64>>, family: Vec<Vec<usize>>, r: u64) -> Result<Self> {
        if n == 0 || r == 0 {
            return Err(Error::Invalid("need n >= 1 and r >= 1".into()));
        }
        if demands.len() != n {
            return Err(Error::DimensionMismatch(format!("{} demand sets for {n} elements", demands.len())));
        }
        if let Some(i) = demands.iter().position(|d| d.iter().any(|&v| v > r)) {
            return Err(Error::Invalid(format!("demand set {i} has a value above r = {r}")));
        }
        if family.is_empty() {
            return Err(Error::Invalid("family is empty".into()));
        }
        let mut family_sorted = Vec::with_capacity(family.len());
        for (j, set) in family.into_iter().enumerate() {
            let set: BTreeSet<usize> = set.into_iter().collect();
            if set.is_empty() {
                return Err(Error::Invalid(format!("family member {j} is empty")));
            }
            if set.iter().any(|&u| u >= n) {
                return Err(Error::Invalid(format!("family member {j} leaves the universe")));
            }
            family_sorted.push(set.into_iter().collect());
        }
        Ok(Self { n, demands, family: family_sorted, r })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn demands(&self) -> &[BTreeSet<u64>] {
        &self.demands
    }

    pub fn family(&self) -> &[Vec<usize>] {
        &self.family
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    /// Whether the multiplicities `p` (one per family member) meet every demand.
    pub fn satisfied_by(&self, p: &[u64]) -> bool {
        let mut count = vec![0u64; self.n];
        for (set, &pj) in self.family.iter().zip(p) {
            for &u in set {
                count[u] += pj;
            }
        }
        p.len() == self.family.len()
            && p.iter().sum::<u64>() == self.r
            && count.iter().zip(&self.demands).all(|(c, d)| d.contains(c))
    }
}

/// Cost row whose prefix sums are `[k ∈ d] − [0 ∈ d]`: each element
/// contributes its full share exactly at an admissible count, and the offset
/// keeps the empty prefix at zero when 0 is admissible.
pub fn msc_cost_row(d: &BTreeSet<u64>, r: u64) -> Vec<i64> {
    let base = i64::from(d.contains(&0));
    let mut row = Vec::with_capacity(r as usize);
    let mut prefix = 0i64;
    for j in 1..=r {
        let target = i64::from(d.contains(&j)) - base;
        row.push(target - prefix);
        prefix = target;
    }
    row
}

/// Optimum that certifies a yes-instance: `n` minus the elements whose
/// demand set contains 0.
pub fn msc_target(inst: &MscInstance) -> i64 {
    (inst.n - inst.demands.iter().filter(|d| d.contains(&0)).count()) as i64
}

/// Characteristic vectors of the (deduplicated) family with the cost rows of
/// [`msc_cost_row`].
pub fn msc_to_sco(inst: &MscInstance) -> Result<ExplicitInstance> {
    let members: BTreeSet<Vec<i64>> = inst
        .family
        .iter()
        .map(|set| {
            let mut x = vec![0i64; inst.n];
            for &u in set {
                x[u] = 1;
            }
            x
        })
        .collect();
    let rows = inst.demands.iter().map(|d| msc_cost_row(d, inst.r)).collect();
    ExplicitInstance::new(members.into_iter().collect(), CostMatrix::from_rows(rows)?)
}

/// Rows with `-1` in column `k` and `0` elsewhere: maximising counts the
/// elements used by at least `k` members, negated.
pub fn build_vulnerability_objective(n: usize, r: u64, k: u64) -> Result<CostMatrix> {
    if k == 0 || k > r {
        return Err(Error::Invalid(format!("need 1 <= k <= r, got k={k}, r={r}")));
    }
    if n == 0 {
        return CostMatrix::empty(r);
    }
    CostMatrix::from_segments(vec![segments(&[(k - 1, 0), (1, -1), (r - k, 0)]); n])
}

/// Rows `(-1, -(n+1), -(n+1)^2, …)`: a lexicographic preference for few
/// heavily used elements.
pub fn build_lexicographic_objective(n: usize, r: u64) -> Result<CostMatrix> {
    if r == 0 {
        return Err(Error::Invalid("r must be positive".into()));
    }
    let base = n as i64 + 1;
    let mut row = Vec::with_capacity(r as usize);
    let mut power = 1i64;
    for k in 0..r {
        if k > 0 {
            power = mul(power, base)?;
        }
        row.push(-power);
    }
    mul(power, n as i64)?;
    if n == 0 {
        return CostMatrix::empty(r);
    }
    CostMatrix::from_rows(vec![row; n])
}

/// One distinct set of a weighted multicover family with its copies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WsmSet {
    pub members: Vec<usize>,
    /// `cum_weights[j]` is the total weight of the `j` lightest copies; starts at 0.
    pub cum_weights: Vec<i64>,
}

impl WsmSet {
    pub fn copies(&self) -> u64 {
        self.cum_weights.len() as u64 - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WsmInstance {
    k: usize,
    demands: Vec<u64>,
    sets: Vec<WsmSet>,
}

impl WsmInstance {
    pub fn new(k: usize, demands: Vec<u64>, sets: Vec<WsmSet>) -> Result<Self> {
        if demands.len() != k {
            return Err(Error::DimensionMismatch(format!("{} demands for {k} elements", demands.len())));
        }
        let mut seen = BTreeSet::new();
        let mut clean = Vec::with_capacity(sets.len());
        for (j, s) in sets.into_iter().enumerate() {
            let members: Vec<usize> = s.members.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
            if members.iter().any(|&u| u >= k) {
                return Err(Error::Invalid(format!("set {j} leaves the universe")));
            }
            if !seen.insert(members.clone()) {
                return Err(Error::Invalid(format!("set {j} repeats an earlier set")));
            }
            let w = &s.cum_weights;
            if w.first() != Some(&0) {
                return Err(Error::Invalid(format!("weights of set {j} must start at 0")));
            }
            if w.windows(2).any(|p| p[1] < p[0]) {
                return Err(Error::Invalid(format!("weights of set {j} decrease")));
            }
            // copies are taken lightest first
            let mut inc: Vec<i64> = w.windows(2).map(|p| p[1] - p[0]).collect();
            inc.sort_unstable();
            let mut cum_weights = vec![0i64];
            for v in inc {
                cum_weights.push(add(*cum_weights.last().unwrap(), v)?);
            }
            clean.push(WsmSet { members, cum_weights });
        }
        Ok(Self { k, demands, sets: clean })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn demands(&self) -> &[u64] {
        &self.demands
    }

    pub fn sets(&self) -> &[WsmSet] {
        &self.sets
    }

    /// Total weight of `mult` copies per set, or `None` if some set runs out
    /// of copies or a demand stays unmet.
    pub fn cost_of(&self, mult: &[u64]) -> Option<i64> {
        if mult.len() != self.sets.len() {
            return None;
        }
        let mut cover = vec![0u64; self.k];
        let mut total = 0i64;
        for (s, &m) in self.sets.iter().zip(mult) {
            total = total.checked_add(*s.cum_weights.get(usize::try_from(m).ok()?)?)?;
            for &u in &s.members {
                cover[u] += m;
            }
        }
        cover.iter().zip(&self.demands).all(|(c, d)| c >= d).then_some(total)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WsmSolution {
    Infeasible,
    Optimal { weight: i64, multiplicities: Vec<u64> },
}

/// Minimum-weight multicover. Copies of a set are taken lightest first.
pub fn solve_wsm(inst: &WsmInstance) -> Result<WsmSolution> {
    let big_k = inst.sets.len();
    let d_total = inst.demands.iter().try_fold(0u64, |a, &d| a.checked_add(d)).ok_or(Error::Overflow("D"))?;
    if d_total == 0 {
        return Ok(WsmSolution::Optimal { weight: 0, multiplicities: vec![0; big_k] });
    }
    if big_k == 0 {
        return Ok(WsmSolution::Infeasible);
    }
    let d = i64::try_from(d_total).map_err(|_| Error::Overflow("D"))?;
    // W' = W + 1 keeps the threshold strict when all weights vanish
    let w_all = inst.sets.iter().try_fold(0i64, |a, s| add(a, *s.cum_weights.last().unwrap()))?;
    let w = add(w_all, 1)?;
    let sentinel = mul(d, w)?;
    mul(sentinel, add(d, 1)?)?;

    // maximisation form: negate the nondecreasing minimisation rows
    let mut rows = Vec::with_capacity(inst.k + big_k);
    for &di in &inst.demands {
        let hit = di.min(d_total);
        rows.push(segments(&[(hit, w), (d_total - hit, 0)]));
    }
    for s in &inst.sets {
        let mut inc: Vec<i64> = s.cum_weights.windows(2).map(|p| p[1] - p[0]).collect();
        inc.truncate(d_total as usize);
        let mut row: Vec<(u64, i64)> = Vec::new();
        for v in inc {
            match row.last_mut() {
                Some((len, last)) if *last == -v => *len += 1,
                _ => row.push((1, -v)),
            }
        }
        let used: u64 = row.iter().map(|&(len, _)| len).sum();
        row.extend(segments(&[(d_total - used, -sentinel)]));
        rows.push(row);
    }

    let mut vectors = Vec::with_capacity(big_k + 1);
    for (j, s) in inst.sets.iter().enumerate() {
        let mut x = vec![0i64; inst.k + big_k];
        for &u in &s.members {
            x[u] = 1;
        }
        x[inst.k + j] = 1;
        vectors.push(x);
    }
    vectors.push(vec![0; inst.k + big_k]);
    let sco = ExplicitInstance::new(vectors, CostMatrix::from_segments(rows)?)?;
    let SolveResult::Optimal { objective, witness } = solve_concave(&sco)? else {
        return Err(Error::Internal("multicover instance has no optimum".into()));
    };
    let min = -objective;
    // all demands met iff min < -(D-1)W'
    if min >= -mul(d - 1, w)? {
        return Ok(WsmSolution::Infeasible);
    }
    let multiplicities = witness.parts()[..big_k].to_vec();
    let weight = add(min, sentinel)?;
    if inst.cost_of(&multiplicities) != Some(weight) {
        return Err(Error::Internal("multicover witness disagrees with its weight".into()));
    }
    Ok(WsmSolution::Optimal { weight, multiplicities })
}
