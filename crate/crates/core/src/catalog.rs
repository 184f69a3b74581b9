//! Vertex-set predicates compiled to bag automata over nice tree
//! decompositions, and the flow-style 0/1 systems whose integer points are
//! the automata's accepting runs.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::ilp::{DecomposableExtension, IlpSystem};
use crate::treewidth::{
    make_nice, min_fill_decomposition, validate_decomposition, Graph, NiceDecomposition, NiceKind, TreeDecomposition,
};

/// Largest vertex count [`enumerate_sets`] will walk by default.
pub const ENUMERATE_CAP_BITS: usize = 24;
const MAX_BAG: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Predicate {
    IndependentSet,
    DominatingSet,
    VertexCover,
}

impl Predicate {
    pub const ALL: [Predicate; 3] = [Self::IndependentSet, Self::DominatingSet, Self::VertexCover];

    pub fn name(self) -> &'static str {
        match self {
            Self::IndependentSet => "indep",
            Self::DominatingSet => "domset",
            Self::VertexCover => "vcover",
        }
    }
}

impl std::str::FromStr for Predicate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "indep" | "independent-set" => Ok(Self::IndependentSet),
            "domset" | "dominating-set" => Ok(Self::DominatingSet),
            "vcover" | "vertex-cover" => Ok(Self::VertexCover),
            _ => Err(Error::Invalid(format!("unknown predicate {s:?}"))),
        }
    }
}

fn membership(g: &Graph, set: &[usize]) -> Result<Vec<bool>> {
    let mut inside = vec![false; g.n()];
    for &v in set {
        if v >= g.n() {
            return Err(Error::Invalid(format!("vertex {v} not in the graph")));
        }
        inside[v] = true;
    }
    Ok(inside)
}

pub fn predicate_check(p: Predicate, g: &Graph, set: &[usize]) -> Result<bool> {
    let inside = membership(g, set)?;
    Ok(holds(p, g, &inside))
}

fn holds(p: Predicate, g: &Graph, inside: &[bool]) -> bool {
    match p {
        Predicate::IndependentSet => g.edges().iter().all(|&(u, v)| !(inside[u] && inside[v])),
        Predicate::VertexCover => g.edges().iter().all(|&(u, v)| inside[u] || inside[v]),
        Predicate::DominatingSet => {
            (0..g.n()).all(|v| inside[v] || g.neighbors(v).iter().any(|&u| inside[u]))
        }
    }
}

/// Every satisfying set as a sorted vertex list, in lexicographic order of those lists.
pub fn enumerate_sets(p: Predicate, g: &Graph) -> Result<Vec<Vec<usize>>> {
    enumerate_sets_with_cap(p, g, ENUMERATE_CAP_BITS)
}

pub fn enumerate_sets_with_cap(p: Predicate, g: &Graph, cap_bits: usize) -> Result<Vec<Vec<usize>>> {
    if g.n() > cap_bits {
        return Err(Error::CapExceeded {
            what: "vertex subsets",
            needed: 1u128 << g.n().min(127),
            cap: 1u128 << cap_bits,
        });
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    let mut inside = vec![false; g.n()];
    fn walk(
        p: Predicate,
        g: &Graph,
        from: usize,
        current: &mut Vec<usize>,
        inside: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        if holds(p, g, inside) {
            out.push(current.clone());
        }
        for v in from..g.n() {
            current.push(v);
            inside[v] = true;
            walk(p, g, v + 1, current, inside, out);
            inside[v] = false;
            current.pop();
        }
    }
    walk(p, g, 0, &mut current, &mut inside, &mut out);
    Ok(out)
}

/// Membership mask of `X ∩ bag` plus, for domination, a mask of bag vertices
/// already dominated by something introduced below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    pub chosen: u64,
    pub dominated: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    /// Consumed state index per child slot (empty for leaves, two for joins).
    pub from: Vec<usize>,
    pub to: usize,
    /// For introduce nodes: whether the introduced vertex joins the set.
    pub choice: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct BagAutomaton {
    predicate: Predicate,
    n: usize,
    nice: NiceDecomposition,
    states: Vec<Vec<State>>,
    transitions: Vec<Vec<Transition>>,
}

fn insert_bit(mask: u64, p: usize, bit: bool) -> u64 {
    let low = mask & ((1u64 << p) - 1);
    let high = (mask >> p) << (p + 1);
    low | high | ((bit as u64) << p)
}

fn remove_bit(mask: u64, p: usize) -> u64 {
    let low = mask & ((1u64 << p) - 1);
    let high = (mask >> (p + 1)) << p;
    low | high
}

fn bit(mask: u64, p: usize) -> bool {
    (mask >> p) & 1 == 1
}

/// Automaton over a min-fill decomposition of `g`.
pub fn build_automaton_default(p: Predicate, g: &Graph) -> Result<BagAutomaton> {
    build_automaton(p, g, &make_nice(&min_fill_decomposition(g))?)
}

/// Builds the automaton bottom-up and trims states that reach no accepting run.
pub fn build_automaton(p: Predicate, g: &Graph, nice: &NiceDecomposition) -> Result<BagAutomaton> {
    let td = nice.to_tree_decomposition();
    if let Some(v) = validate_decomposition(g, &td).first() {
        return Err(Error::InvalidDecomposition(format!("{v:?}")));
    }
    if nice.width() + 1 > MAX_BAG {
        return Err(Error::CapExceeded { what: "bag size", needed: nice.width() as u128 + 1, cap: MAX_BAG as u128 });
    }
    if !nice.node(nice.root()).bag.is_empty() {
        return Err(Error::InvalidDecomposition("root bag must be empty".into()));
    }
    let nodes = nice.nodes();
    let mut states: Vec<Vec<State>> = Vec::with_capacity(nodes.len());
    let mut transitions: Vec<Vec<Transition>> = Vec::with_capacity(nodes.len());

    for node in nodes {
        let mut index: HashMap<State, usize> = HashMap::new();
        let mut list: Vec<State> = Vec::new();
        let mut trans = Vec::new();
        let mut intern = |s: State, list: &mut Vec<State>| -> usize {
            *index.entry(s).or_insert_with(|| {
                list.push(s);
                list.len() - 1
            })
        };
        match node.kind {
            NiceKind::Leaf => {
                let to = intern(State { chosen: 0, dominated: 0 }, &mut list);
                trans.push(Transition { from: vec![], to, choice: None });
            }
            NiceKind::Introduce { vertex, child } => {
                let pos = node.bag.binary_search(&vertex).unwrap();
                let nbr_mask = node
                    .bag
                    .iter()
                    .enumerate()
                    .filter(|&(_, &u)| g.has_edge(u, vertex))
                    .fold(0u64, |m, (j, _)| m | (1 << j));
                for (qi, q) in states[child].iter().enumerate() {
                    for choice in [false, true] {
                        let chosen = insert_bit(q.chosen, pos, choice);
                        let mut dominated = insert_bit(q.dominated, pos, false);
                        let ok = match p {
                            Predicate::IndependentSet => !choice || chosen & nbr_mask == 0,
                            Predicate::VertexCover => choice || chosen & nbr_mask == nbr_mask,
                            Predicate::DominatingSet => {
                                if choice || chosen & nbr_mask != 0 {
                                    dominated |= 1 << pos;
                                }
                                if choice {
                                    dominated |= nbr_mask;
                                }
                                true
                            }
                        };
                        if ok {
                            let to = intern(State { chosen, dominated }, &mut list);
                            trans.push(Transition { from: vec![qi], to, choice: Some(choice) });
                        }
                    }
                }
            }
            NiceKind::Forget { vertex, child } => {
                let pos = nodes[child].bag.binary_search(&vertex).unwrap();
                for (qi, q) in states[child].iter().enumerate() {
                    if p == Predicate::DominatingSet && !bit(q.dominated, pos) {
                        continue;
                    }
                    let s = State { chosen: remove_bit(q.chosen, pos), dominated: remove_bit(q.dominated, pos) };
                    let to = intern(s, &mut list);
                    trans.push(Transition { from: vec![qi], to, choice: None });
                }
            }
            NiceKind::Join { left, right } => {
                let mut by_chosen: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
                for (qi, q) in states[right].iter().enumerate() {
                    by_chosen.entry(q.chosen).or_default().push(qi);
                }
                for (li, l) in states[left].iter().enumerate() {
                    for &ri in by_chosen.get(&l.chosen).map(Vec::as_slice).unwrap_or(&[]) {
                        let r = states[right][ri];
                        let s = State { chosen: l.chosen, dominated: l.dominated | r.dominated };
                        let to = intern(s, &mut list);
                        trans.push(Transition { from: vec![li, ri], to, choice: None });
                    }
                }
            }
        }
        states.push(list);
        transitions.push(trans);
    }

    let mut a = BagAutomaton { predicate: p, n: g.n(), nice: nice.clone(), states, transitions };
    a.trim();
    Ok(a)
}

impl BagAutomaton {
    pub fn predicate(&self) -> Predicate {
        self.predicate
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn nice(&self) -> &NiceDecomposition {
        &self.nice
    }

    pub fn states(&self, t: usize) -> &[State] {
        &self.states[t]
    }

    pub fn transitions(&self, t: usize) -> &[Transition] {
        &self.transitions[t]
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.iter().map(Vec::len).sum()
    }

    /// Child nodes of `t` in slot order.
    fn children(&self, t: usize) -> Vec<usize> {
        match self.nice.node(t).kind {
            NiceKind::Leaf => vec![],
            NiceKind::Introduce { child, .. } | NiceKind::Forget { child, .. } => vec![child],
            NiceKind::Join { left, right } => vec![left, right],
        }
    }

    /// Drops states and transitions that lie on no accepting run.
    fn trim(&mut self) {
        let n = self.nice.len();
        let mut useful: Vec<Vec<bool>> = self.states.iter().map(|s| vec![false; s.len()]).collect();
        let root = self.nice.root();
        useful[root].iter_mut().for_each(|u| *u = true);
        let mut keep: Vec<Vec<bool>> = vec![Vec::new(); n];
        for t in (0..n).rev() {
            let children = self.children(t);
            keep[t] = self.transitions[t].iter().map(|d| useful[t][d.to]).collect();
            for (d, k) in self.transitions[t].iter().zip(&keep[t]) {
                if *k {
                    for (slot, &q) in d.from.iter().enumerate() {
                        useful[children[slot]][q] = true;
                    }
                }
            }
        }
        let mut remap: Vec<Vec<usize>> = Vec::with_capacity(n);
        #[allow(clippy::needless_range_loop)]
        for t in 0..n {
            let mut map = vec![usize::MAX; self.states[t].len()];
            let mut kept = Vec::new();
            for (q, s) in self.states[t].iter().enumerate() {
                if useful[t][q] {
                    map[q] = kept.len();
                    kept.push(*s);
                }
            }
            self.states[t] = kept;
            remap.push(map);
        }
        for t in 0..n {
            let children = self.children(t);
            let old = std::mem::take(&mut self.transitions[t]);
            self.transitions[t] = old
                .into_iter()
                .zip(&keep[t])
                .filter(|(_, k)| **k)
                .map(|(mut d, _)| {
                    d.to = remap[t][d.to];
                    for (slot, q) in d.from.iter_mut().enumerate() {
                        *q = remap[children[slot]][*q];
                    }
                    d
                })
                .collect();
        }
    }

    /// Number of accepting runs, saturating at `u128::MAX`.
    pub fn accepting_runs(&self) -> u128 {
        let mut count: Vec<Vec<u128>> = Vec::with_capacity(self.nice.len());
        for t in 0..self.nice.len() {
            let children = self.children(t);
            let mut c = vec![0u128; self.states[t].len()];
            for d in &self.transitions[t] {
                let ways = d
                    .from
                    .iter()
                    .enumerate()
                    .fold(1u128, |acc, (slot, &q)| acc.saturating_mul(count[children[slot]][q]));
                c[d.to] = c[d.to].saturating_add(ways);
            }
            count.push(c);
        }
        count[self.nice.root()].iter().fold(0u128, |a, &b| a.saturating_add(b))
    }
}

/// The 0/1 system of an automaton's runs, with `x` variables first.
#[derive(Debug, Clone)]
pub struct RunPolytope {
    extension: DecomposableExtension,
    /// Variable index of each transition, per nice node.
    z_index: Vec<Vec<usize>>,
    max_support: usize,
}

impl RunPolytope {
    pub fn extension(&self) -> &DecomposableExtension {
        &self.extension
    }

    pub fn into_extension(self) -> DecomposableExtension {
        self.extension
    }

    pub fn z_index(&self, t: usize) -> &[usize] {
        &self.z_index[t]
    }

    /// Largest number of nonzeros in any row.
    pub fn max_support(&self) -> usize {
        self.max_support
    }
}

/// One variable per transition, flow conservation between each node and its
/// parent, one unit of flow at the root, and `x_v` tied to the transitions of
/// the node forgetting `v` whose consumed state contains `v`.
pub fn run_polytope(a: &BagAutomaton) -> Result<RunPolytope> {
    let nice = &a.nice;
    let n = a.n;
    let mut z_index = Vec::with_capacity(nice.len());
    let mut next = n;
    for t in 0..nice.len() {
        z_index.push((next..next + a.transitions[t].len()).collect::<Vec<_>>());
        next = next.checked_add(a.transitions[t].len()).ok_or(Error::Overflow("variable count"))?;
    }
    let mut sys = IlpSystem::binary(next);
    let parents = nice.parents();
    let root = nice.root();

    sys.add_row(z_index[root].iter().map(|&z| (z, 1)), 1)?;
    for t in 0..nice.len() {
        let Some(p) = parents[t] else { continue };
        let slot = a.children(p).iter().position(|&c| c == t).unwrap();
        let mut rows: Vec<Vec<(usize, i64)>> = vec![Vec::new(); a.states[t].len()];
        for (d, &z) in a.transitions[t].iter().zip(&z_index[t]) {
            rows[d.to].push((z, 1));
        }
        for (d, &z) in a.transitions[p].iter().zip(&z_index[p]) {
            rows[d.from[slot]].push((z, -1));
        }
        for row in rows {
            sys.add_row(row, 0)?;
        }
    }
    let mut linked = vec![false; n];
    for (t, node) in nice.nodes().iter().enumerate() {
        let NiceKind::Forget { vertex, child } = node.kind else { continue };
        let pos = nice.node(child).bag.binary_search(&vertex).unwrap();
        let mut row = vec![(vertex, 1)];
        for (d, &z) in a.transitions[t].iter().zip(&z_index[t]) {
            if bit(a.states[child][d.from[0]].chosen, pos) {
                row.push((z, -1));
            }
        }
        linked[vertex] = true;
        sys.add_row(row, 0)?;
    }
    if let Some(v) = linked.iter().position(|&l| !l) {
        return Err(Error::InvalidDecomposition(format!("vertex {v} is never forgotten")));
    }
    let max_support = sys.rows().iter().map(|r| r.support()).max().unwrap_or(0);

    // For each node t a path of bags: first its own transitions (plus x_v at
    // the node forgetting v), then one bag per state q of t holding the
    // parent transitions consuming q next to the producers of q, so the two
    // layers never sit in one bag in full.
    let mut bags: Vec<Vec<usize>> = Vec::new();
    let mut links: Vec<Option<usize>> = Vec::new();
    let mut head = vec![usize::MAX; nice.len()];
    let mut tail = vec![usize::MAX; nice.len()];
    for (t, node) in nice.nodes().iter().enumerate() {
        let mut bag = z_index[t].clone();
        if let NiceKind::Forget { vertex, .. } = node.kind {
            bag.push(vertex);
        }
        head[t] = bags.len();
        tail[t] = bags.len();
        bags.push(bag);
        links.push(None);
        let Some(p) = parents[t] else { continue };
        let slot = a.children(p).iter().position(|&c| c == t).unwrap();
        let m = a.states[t].len();
        let mut producers: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (d, &z) in a.transitions[t].iter().zip(&z_index[t]) {
            producers[d.to].push(z);
        }
        let mut consumers: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (d, &z) in a.transitions[p].iter().zip(&z_index[p]) {
            consumers[d.from[slot]].push(z);
        }
        for q in 0..m {
            let mut bag: Vec<usize> = producers[q..].concat();
            bag.extend(consumers[..=q].concat());
            links[tail[t]] = Some(bags.len());
            tail[t] = bags.len();
            bags.push(bag);
            links.push(None);
        }
    }
    for t in 0..nice.len() {
        if let Some(p) = parents[t] {
            links[tail[t]] = Some(head[p]);
        }
    }
    let td = TreeDecomposition::new(bags, links)?;
    let extension = DecomposableExtension::new(sys, (0..n).collect(), true)?.with_decomposition(td)?;
    Ok(RunPolytope { extension, z_index, max_support })
}
