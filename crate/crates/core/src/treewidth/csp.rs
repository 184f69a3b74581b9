use std::collections::{BTreeSet, HashMap};

use indexmap::IndexSet;
use rustc_hash::FxBuildHasher;

use super::{make_nice, Graph, NiceDecomposition, NiceKind, TreeDecomposition};
use crate::error::{Error, Result};

pub const DEFAULT_BRUTE_CAP: u128 = 10_000_000;
/// Largest number of rows a single dynamic-programming table may hold.
pub const TABLE_CAP: usize = 4_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relation {
    /// Allowed tuples, aligned with the scope.
    Table(BTreeSet<Vec<i64>>),
    /// `Σ coeffs[j] · z[scope[j]] = rhs`; equivalent to the table of its
    /// solutions but never materialised.
    LinearEq { coeffs: Vec<i64>, rhs: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardConstraint {
    pub scope: Vec<usize>,
    pub relation: Relation,
}

impl HardConstraint {
    pub fn table(scope: Vec<usize>, tuples: impl IntoIterator<Item = Vec<i64>>) -> Self {
        Self { scope, relation: Relation::Table(tuples.into_iter().collect()) }
    }

    pub fn linear_eq(scope: Vec<usize>, coeffs: Vec<i64>, rhs: i64) -> Self {
        Self { scope, relation: Relation::LinearEq { coeffs, rhs } }
    }

    fn holds(&self, values: &[i64]) -> bool {
        match &self.relation {
            Relation::Table(t) => t.contains(values),
            Relation::LinearEq { coeffs, rhs } => {
                coeffs.iter().zip(values).map(|(&a, &z)| a as i128 * z as i128).sum::<i128>() == *rhs as i128
            }
        }
    }
}

/// Weight table over a scope; tuples not listed weigh zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoftConstraint {
    pub scope: Vec<usize>,
    pub weights: HashMap<Vec<i64>, i64>,
}

impl SoftConstraint {
    pub fn new(scope: Vec<usize>, weights: impl IntoIterator<Item = (Vec<i64>, i64)>) -> Self {
        Self { scope, weights: weights.into_iter().collect() }
    }

    pub fn unary(var: usize, weights: impl IntoIterator<Item = (i64, i64)>) -> Self {
        Self::new(vec![var], weights.into_iter().map(|(z, w)| (vec![z], w)))
    }

    fn weight(&self, values: &[i64]) -> i64 {
        self.weights.get(values).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CspInstance {
    domains: Vec<Vec<i64>>,
    hard: Vec<HardConstraint>,
    soft: Vec<SoftConstraint>,
}

impl CspInstance {
    /// Domains are sorted and deduplicated. Scopes must name distinct
    /// variables in range, and table entries must lie in the scoped domains.
    pub fn new(domains: Vec<Vec<i64>>, hard: Vec<HardConstraint>, soft: Vec<SoftConstraint>) -> Result<Self> {
        let domains: Vec<Vec<i64>> = domains
            .into_iter()
            .map(|d| d.into_iter().collect::<BTreeSet<_>>().into_iter().collect())
            .collect();
        let check_scope = |scope: &[usize]| -> Result<()> {
            let mut seen = BTreeSet::new();
            for &v in scope {
                if v >= domains.len() {
                    return Err(Error::Invalid(format!("scope names variable {v} of {}", domains.len())));
                }
                if !seen.insert(v) {
                    return Err(Error::Invalid(format!("variable {v} repeated in a scope")));
                }
            }
            Ok(())
        };
        let check_tuple = |scope: &[usize], t: &[i64]| -> Result<()> {
            if t.len() != scope.len() {
                return Err(Error::DimensionMismatch(format!(
                    "tuple of arity {} for a scope of size {}",
                    t.len(),
                    scope.len()
                )));
            }
            for (&v, z) in scope.iter().zip(t) {
                if domains[v].binary_search(z).is_err() {
                    return Err(Error::Invalid(format!("value {z} outside the domain of variable {v}")));
                }
            }
            Ok(())
        };
        for h in &hard {
            check_scope(&h.scope)?;
            match &h.relation {
                Relation::Table(t) => {
                    for tuple in t {
                        check_tuple(&h.scope, tuple)?;
                    }
                }
                Relation::LinearEq { coeffs, .. } => {
                    if coeffs.len() != h.scope.len() {
                        return Err(Error::DimensionMismatch("linear constraint coefficients vs scope".into()));
                    }
                }
            }
        }
        for s in &soft {
            check_scope(&s.scope)?;
            for tuple in s.weights.keys() {
                check_tuple(&s.scope, tuple)?;
            }
        }
        Ok(Self { domains, hard, soft })
    }

    pub fn num_vars(&self) -> usize {
        self.domains.len()
    }

    pub fn domain(&self, v: usize) -> &[i64] {
        &self.domains[v]
    }

    pub fn hard(&self) -> &[HardConstraint] {
        &self.hard
    }

    pub fn soft(&self) -> &[SoftConstraint] {
        &self.soft
    }

    /// Primal graph: variables adjacent iff they share a scope.
    pub fn constraint_graph(&self) -> Graph {
        let mut g = Graph::empty(self.num_vars());
        for scope in self.hard.iter().map(|h| &h.scope).chain(self.soft.iter().map(|s| &s.scope)) {
            g.add_clique(scope);
        }
        g
    }

    pub fn satisfies(&self, z: &[i64]) -> bool {
        z.len() == self.num_vars()
            && z.iter().enumerate().all(|(v, x)| self.domains[v].binary_search(x).is_ok())
            && self.hard.iter().all(|h| h.holds(&project(&h.scope, z)))
    }

    pub fn weight(&self, z: &[i64]) -> Result<i64> {
        self.soft
            .iter()
            .try_fold(0i64, |acc, s| crate::error::add(acc, s.weight(&project(&s.scope, z))))
    }
}

fn project(scope: &[usize], z: &[i64]) -> Vec<i64> {
    scope.iter().map(|&v| z[v]).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CspSolution {
    Infeasible,
    Solved { assignment: Vec<i64>, weight: i64 },
}

impl CspSolution {
    pub fn weight(&self) -> Option<i64> {
        match self {
            Self::Solved { weight, .. } => Some(*weight),
            Self::Infeasible => None,
        }
    }

    pub fn assignment(&self) -> Option<&[i64]> {
        match self {
            Self::Solved { assignment, .. } => Some(assignment),
            Self::Infeasible => None,
        }
    }
}

/// Which of several minimum-weight assignments is returned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    LexMin,
    LexMax,
    /// Whatever the dynamic program meets first; skips the refinement runs.
    Any,
}

/// Minimum-weight feasible assignment, lexicographically smallest on ties.
pub fn csp_solve(inst: &CspInstance, td: &TreeDecomposition) -> Result<CspSolution> {
    csp_solve_with(inst, td, TieBreak::LexMin)
}

pub fn csp_solve_with(inst: &CspInstance, td: &TreeDecomposition, tie: TieBreak) -> Result<CspSolution> {
    if let Some(v) = (0..inst.num_vars()).find(|&v| inst.domains[v].is_empty()) {
        return Err(Error::EmptyDomain(v));
    }
    let nice = make_nice(td)?;
    let plan = Plan::new(inst, nice)?;

    let mut constant = 0i64;
    for h in inst.hard.iter().filter(|h| h.scope.is_empty()) {
        if !h.holds(&[]) {
            return Ok(CspSolution::Infeasible);
        }
    }
    for s in inst.soft.iter().filter(|s| s.scope.is_empty()) {
        constant = crate::error::add(constant, s.weight(&[]))?;
    }

    let mut domains = inst.domains.clone();
    let Some((best, mut current)) = plan.run(inst, &domains)? else {
        return Ok(CspSolution::Infeasible);
    };
    if tie != TieBreak::Any {
        // fix variables one at a time to the most preferred value that keeps the optimum
        for v in 0..inst.num_vars() {
            let mut candidates: Vec<i64> = match tie {
                TieBreak::LexMin => domains[v].iter().copied().filter(|&a| a < current[v]).collect(),
                _ => domains[v].iter().rev().copied().filter(|&a| a > current[v]).collect(),
            };
            candidates.push(current[v]);
            for a in candidates {
                if a == current[v] {
                    domains[v] = vec![a];
                    break;
                }
                let mut trial = domains.clone();
                trial[v] = vec![a];
                if let Some((w, z)) = plan.run(inst, &trial)? {
                    if w == best {
                        current = z;
                        domains = trial;
                        break;
                    }
                }
            }
        }
    }
    Ok(CspSolution::Solved { assignment: current, weight: crate::error::add(best, constant)? })
}

/// Exhaustive search with the same tie-break as [`csp_solve`].
pub fn csp_brute(inst: &CspInstance) -> Result<CspSolution> {
    csp_brute_with_cap(inst, DEFAULT_BRUTE_CAP)
}

pub fn csp_brute_with_cap(inst: &CspInstance, cap: u128) -> Result<CspSolution> {
    let mut needed: u128 = 1;
    for (v, d) in inst.domains.iter().enumerate() {
        if d.is_empty() {
            return Err(Error::EmptyDomain(v));
        }
        needed = needed.saturating_mul(d.len() as u128);
    }
    if needed > cap {
        return Err(Error::CapExceeded { what: "assignments", needed, cap });
    }
    let n = inst.num_vars();
    let mut idx = vec![0usize; n];
    let mut best: Option<(i64, Vec<i64>)> = None;
    loop {
        let z: Vec<i64> = (0..n).map(|v| inst.domains[v][idx[v]]).collect();
        if inst.satisfies(&z) {
            let w = inst.weight(&z)?;
            if best.as_ref().is_none_or(|(b, _)| w < *b) {
                best = Some((w, z));
            }
        }
        // odometer, last variable fastest, so assignments arrive in lex order
        let mut v = n;
        loop {
            if v == 0 {
                return Ok(match best {
                    None => CspSolution::Infeasible,
                    Some((weight, assignment)) => CspSolution::Solved { assignment, weight },
                });
            }
            v -= 1;
            idx[v] += 1;
            if idx[v] < inst.domains[v].len() {
                break;
            }
            idx[v] = 0;
        }
    }
}

struct Check {
    constraint: usize,
    /// Position of each scope variable in the node's bag, if present.
    positions: Vec<Option<usize>>,
}

struct Charge {
    constraint: usize,
    positions: Vec<usize>,
}

struct Plan {
    nice: NiceDecomposition,
    checks: Vec<Vec<Check>>,
    charges: Vec<Vec<Charge>>,
}

#[derive(Clone, Copy)]
enum Back {
    Leaf,
    One(usize),
    Two(usize, usize),
}

/// What traceback needs from one table row once its key is gone.
#[derive(Clone, Copy)]
struct Entry {
    weight: i64,
    back: Back,
    /// Value given to the introduced variable (introduce nodes only).
    value: i64,
}

type KeySet = IndexSet<Vec<i64>, FxBuildHasher>;

impl Plan {
    fn new(inst: &CspInstance, nice: NiceDecomposition) -> Result<Self> {
        let n = nice.len();
        let parents = nice.parents();
        let mut depth = vec![0usize; n];
        for t in (0..n).rev() {
            if let Some(p) = parents[t] {
                depth[t] = depth[p] + 1;
            }
        }
        let mut forget_at = vec![usize::MAX; inst.num_vars()];
        for (t, node) in nice.nodes().iter().enumerate() {
            if let NiceKind::Forget { vertex, .. } = node.kind {
                if vertex < forget_at.len() {
                    forget_at[vertex] = t;
                }
            }
        }
        if let Some(v) = forget_at.iter().position(|&t| t == usize::MAX) {
            return Err(Error::ScopeNotCovered(vec![v]));
        }
        let position = |bag: &[usize], v: usize| bag.binary_search(&v).ok();

        let mut checks: Vec<Vec<Check>> = (0..n).map(|_| Vec::new()).collect();
        let mut by_var: Vec<Vec<usize>> = vec![Vec::new(); inst.num_vars()];
        for (i, h) in inst.hard.iter().enumerate() {
            for &v in &h.scope {
                by_var[v].push(i);
            }
        }
        let mut covered = vec![false; inst.hard.len()];
        for (t, node) in nice.nodes().iter().enumerate() {
            let NiceKind::Introduce { vertex, .. } = node.kind else { continue };
            for &i in &by_var[vertex] {
                let h = &inst.hard[i];
                let positions: Vec<Option<usize>> = h.scope.iter().map(|&u| position(&node.bag, u)).collect();
                let complete = positions.iter().all(Option::is_some);
                covered[i] |= complete;
                if complete || matches!(h.relation, Relation::LinearEq { .. }) {
                    checks[t].push(Check { constraint: i, positions });
                }
            }
        }
        if let Some(i) = (0..inst.hard.len()).find(|&i| !covered[i] && !inst.hard[i].scope.is_empty()) {
            return Err(Error::ScopeNotCovered(inst.hard[i].scope.clone()));
        }

        let mut charges: Vec<Vec<Charge>> = (0..n).map(|_| Vec::new()).collect();
        for (i, s) in inst.soft.iter().enumerate() {
            let Some(&first) = s.scope.iter().max_by_key(|&&v| depth[forget_at[v]]) else { continue };
            let t = forget_at[first];
            let NiceKind::Forget { child, .. } = nice.node(t).kind else { unreachable!() };
            let bag = &nice.node(child).bag;
            let positions: Option<Vec<usize>> = s.scope.iter().map(|&u| position(bag, u)).collect();
            let positions = positions.ok_or_else(|| Error::ScopeNotCovered(s.scope.clone()))?;
            charges[t].push(Charge { constraint: i, positions });
        }
        Ok(Self { nice, checks, charges })
    }

    fn passes(&self, inst: &CspInstance, domains: &[Vec<i64>], check: &Check, key: &[i64]) -> bool {
        let h = &inst.hard[check.constraint];
        let Relation::LinearEq { coeffs, rhs } = &h.relation else {
            let values: Vec<i64> = check.positions.iter().map(|p| key[p.unwrap()]).collect();
            return h.holds(&values);
        };
        let (mut lo, mut hi) = (0i128, 0i128);
        for ((&a, p), &v) in coeffs.iter().zip(&check.positions).zip(&h.scope) {
            let a = a as i128;
            match p {
                Some(p) => {
                    lo += a * key[*p] as i128;
                    hi += a * key[*p] as i128;
                }
                None => {
                    let d = &domains[v];
                    let (x, y) = (a * d[0] as i128, a * d[d.len() - 1] as i128);
                    lo += x.min(y);
                    hi += x.max(y);
                }
            }
        }
        lo <= *rhs as i128 && *rhs as i128 <= hi
    }

    /// Minimum weight and one optimal assignment under the given domains.
    fn run(&self, inst: &CspInstance, domains: &[Vec<i64>]) -> Result<Option<(i64, Vec<i64>)>> {
        let nodes = self.nice.nodes();
        let mut entries: Vec<Vec<Entry>> = Vec::with_capacity(nodes.len());
        // keys of tables whose parent has not been built yet
        let mut live: Vec<Option<KeySet>> = Vec::with_capacity(nodes.len());
        for (t, node) in nodes.iter().enumerate() {
            let mut keys = KeySet::default();
            let mut out: Vec<Entry> = Vec::new();
            let mut buf: Vec<i64> = Vec::with_capacity(node.bag.len() + 1);
            match node.kind {
                NiceKind::Leaf => {
                    keys.insert(Vec::new());
                    out.push(Entry { weight: 0, back: Back::Leaf, value: 0 });
                }
                NiceKind::Introduce { vertex, child } => {
                    let p = node.bag.binary_search(&vertex).unwrap();
                    let src = live[child].take().unwrap();
                    for (e, key) in src.iter().enumerate() {
                        for &a in &domains[vertex] {
                            buf.clear();
                            buf.extend_from_slice(&key[..p]);
                            buf.push(a);
                            buf.extend_from_slice(&key[p..]);
                            if self.checks[t].iter().all(|c| self.passes(inst, domains, c, &buf)) {
                                keys.insert(buf.clone());
                                out.push(Entry { weight: entries[child][e].weight, back: Back::One(e), value: a });
                            }
                        }
                    }
                }
                NiceKind::Forget { vertex, child } => {
                    let p = nodes[child].bag.binary_search(&vertex).unwrap();
                    let src = live[child].take().unwrap();
                    let mut values: Vec<i64> = Vec::new();
                    for (e, key) in src.iter().enumerate() {
                        let mut w = entries[child][e].weight;
                        for c in &self.charges[t] {
                            values.clear();
                            values.extend(c.positions.iter().map(|&q| key[q]));
                            w = crate::error::add(w, inst.soft[c.constraint].weight(&values))?;
                        }
                        buf.clear();
                        buf.extend_from_slice(&key[..p]);
                        buf.extend_from_slice(&key[p + 1..]);
                        match keys.get_index_of(&buf) {
                            Some(slot) => {
                                if w < out[slot].weight {
                                    out[slot] = Entry { weight: w, back: Back::One(e), value: 0 };
                                }
                            }
                            None => {
                                keys.insert(buf.clone());
                                out.push(Entry { weight: w, back: Back::One(e), value: 0 });
                            }
                        }
                    }
                }
                NiceKind::Join { left, right } => {
                    let l = live[left].take().unwrap();
                    let r = live[right].take().unwrap();
                    for (e, key) in l.iter().enumerate() {
                        if let Some(f) = r.get_index_of(key) {
                            let w = crate::error::add(entries[left][e].weight, entries[right][f].weight)?;
                            keys.insert(key.clone());
                            out.push(Entry { weight: w, back: Back::Two(e, f), value: 0 });
                        }
                    }
                }
            }
            if out.is_empty() {
                return Ok(None);
            }
            if out.len() > TABLE_CAP {
                return Err(Error::CapExceeded { what: "table entries", needed: out.len() as u128, cap: TABLE_CAP as u128 });
            }
            entries.push(out);
            live.push(Some(keys));
        }

        let root = self.nice.root();
        let weight = entries[root][0].weight;
        let mut z = vec![0i64; inst.num_vars()];
        let mut stack = vec![(root, 0usize)];
        while let Some((t, e)) = stack.pop() {
            let entry = entries[t][e];
            match (nodes[t].kind, entry.back) {
                (NiceKind::Introduce { vertex, child }, Back::One(f)) => {
                    z[vertex] = entry.value;
                    stack.push((child, f));
                }
                (NiceKind::Forget { child, .. }, Back::One(f)) => stack.push((child, f)),
                (NiceKind::Join { left, right }, Back::Two(f, g)) => {
                    stack.push((left, f));
                    stack.push((right, g));
                }
                _ => {}
            }
        }
        Ok(Some((weight, z)))
    }
}
