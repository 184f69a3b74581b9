use std::collections::{BTreeSet, HashSet};

use super::Graph;
use crate::error::{Error, Result};

/// A rooted tree whose nodes carry bags of vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
}

impl TreeDecomposition {
    /// Bags are sorted and deduplicated; the structure is not validated here,
    /// see [`validate_decomposition`].
    pub fn new(bags: Vec<Vec<usize>>, parent: Vec<Option<usize>>) -> Result<Self> {
        if bags.len() != parent.len() {
            return Err(Error::InvalidDecomposition("bags and parent links differ in length".into()));
        }
        if bags.is_empty() {
            return Err(Error::InvalidDecomposition("a decomposition needs at least one node".into()));
        }
        let bags = bags
            .into_iter()
            .map(|b| b.into_iter().collect::<BTreeSet<_>>().into_iter().collect())
            .collect();
        Ok(Self { bags, parent })
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn bag(&self, t: usize) -> &[usize] {
        &self.bags[t]
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn parent(&self, t: usize) -> Option<usize> {
        self.parent[t]
    }

    /// Largest bag size minus one (zero for empty bags).
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub(crate) fn children(&self) -> Vec<Vec<usize>> {
        let mut children = vec![Vec::new(); self.len()];
        for (t, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                if p < self.len() {
                    children[p].push(t);
                }
            }
        }
        children
    }

    /// The unique root, if the parent links form a single tree.
    pub(crate) fn tree_root(&self) -> std::result::Result<usize, String> {
        let roots: Vec<usize> = (0..self.len()).filter(|&t| self.parent[t].is_none()).collect();
        if roots.len() != 1 {
            return Err(format!("expected one root, found {}", roots.len()));
        }
        if let Some(t) = self.parent.iter().flatten().find(|&&p| p >= self.len()) {
            return Err(format!("parent link to missing node {t}"));
        }
        // every node must reach the root without repeating
        let mut state = vec![0u8; self.len()]; // 0 unseen, 1 on path, 2 done
        for start in 0..self.len() {
            let mut path = Vec::new();
            let mut t = start;
            loop {
                match state[t] {
                    2 => break,
                    1 => return Err(format!("parent links contain a cycle through node {t}")),
                    _ => {}
                }
                state[t] = 1;
                path.push(t);
                match self.parent[t] {
                    Some(p) => t = p,
                    None => break,
                }
            }
            for t in path {
                state[t] = 2;
            }
        }
        Ok(roots[0])
    }

    /// Vertices whose bags do not form a connected subtree.
    pub(crate) fn disconnected_vertices(&self) -> Vec<usize> {
        let mut tops: std::collections::BTreeMap<usize, usize> = Default::default();
        for t in 0..self.len() {
            for &v in &self.bags[t] {
                let parent_has = self.parent[t].is_some_and(|p| self.bags[p].binary_search(&v).is_ok());
                if !parent_has {
                    *tops.entry(v).or_default() += 1;
                }
            }
        }
        tops.into_iter().filter(|&(_, c)| c > 1).map(|(v, _)| v).collect()
    }
}

/// One failed condition of a tree decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotATree(String),
    VertexOutOfRange { node: usize, vertex: usize },
    VertexUncovered(usize),
    EdgeUncovered(usize, usize),
    Disconnected(usize),
}

/// Checks that `td` is a tree decomposition of `g`; empty means valid.
pub fn validate_decomposition(g: &Graph, td: &TreeDecomposition) -> Vec<Violation> {
    let mut out = Vec::new();
    let tree_ok = match td.tree_root() {
        Ok(_) => true,
        Err(msg) => {
            out.push(Violation::NotATree(msg));
            false
        }
    };
    let mut covered = vec![false; g.n()];
    for (t, bag) in td.bags().iter().enumerate() {
        for &v in bag {
            if v >= g.n() {
                out.push(Violation::VertexOutOfRange { node: t, vertex: v });
            } else {
                covered[v] = true;
            }
        }
    }
    out.extend((0..g.n()).filter(|&v| !covered[v]).map(Violation::VertexUncovered));
    let mut pairs: HashSet<(usize, usize)> = HashSet::new();
    for bag in td.bags() {
        for (a, &u) in bag.iter().enumerate() {
            for &v in &bag[a + 1..] {
                pairs.insert((u, v));
            }
        }
    }
    for (u, v) in g.edges() {
        if !pairs.contains(&(u, v)) {
            out.push(Violation::EdgeUncovered(u, v));
        }
    }
    if tree_ok {
        out.extend(td.disconnected_vertices().into_iter().map(Violation::Disconnected));
    }
    out
}

/// Tree decomposition from a min-fill elimination ordering.
///
/// Repeatedly eliminates the vertex whose neighbourhood needs the fewest
/// fill edges to become a clique (smallest id on ties). The bag of an
/// eliminated vertex is itself plus its neighbours at that moment; its
/// parent is the bag of the first of those neighbours to be eliminated.
pub fn min_fill_decomposition(g: &Graph) -> TreeDecomposition {
    let n = g.n();
    if n == 0 {
        return TreeDecomposition { bags: vec![Vec::new()], parent: vec![None] };
    }
    let mut adj: Vec<HashSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let fill = |adj: &[HashSet<usize>], v: usize| -> usize {
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        let mut missing = 0;
        for (a, &x) in nb.iter().enumerate() {
            for &y in &nb[a + 1..] {
                if !adj[x].contains(&y) {
                    missing += 1;
                }
            }
        }
        missing
    };
    let mut score: Vec<usize> = (0..n).map(|v| fill(&adj, v)).collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (score[v], v)).collect();
    let mut eliminated = vec![false; n];
    let mut position = vec![0usize; n];
    let mut bags: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut higher: Vec<Vec<usize>> = Vec::with_capacity(n);

    for step in 0..n {
        let (_, v) = queue.pop_first().unwrap();
        eliminated[v] = true;
        position[v] = step;
        let mut nb: Vec<usize> = adj[v].iter().copied().collect();
        nb.sort_unstable();
        for (a, &x) in nb.iter().enumerate() {
            adj[x].remove(&v);
            for &y in &nb[a + 1..] {
                adj[x].insert(y);
                adj[y].insert(x);
            }
        }
        let mut touched: BTreeSet<usize> = nb.iter().copied().collect();
        for &x in &nb {
            touched.extend(adj[x].iter().copied());
        }
        for x in touched {
            if eliminated[x] {
                continue;
            }
            let s = fill(&adj, x);
            if s != score[x] {
                queue.remove(&(score[x], x));
                score[x] = s;
                queue.insert((s, x));
            }
        }
        let mut bag = nb.clone();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        higher.push(nb);
    }

    // bag index equals elimination step
    let mut parent: Vec<Option<usize>> = higher
        .iter()
        .map(|nb| nb.iter().map(|&u| position[u]).min())
        .collect();
    let roots: Vec<usize> = (0..n).filter(|&t| parent[t].is_none()).collect();
    let last = *roots.last().unwrap();
    for &t in &roots[..roots.len() - 1] {
        parent[t] = Some(last);
    }
    TreeDecomposition { bags, parent }
}
