use super::TreeDecomposition;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NiceKind {
    Leaf,
    Introduce { vertex: usize, child: usize },
    Forget { vertex: usize, child: usize },
    Join { left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceNode {
    /// Sorted.
    pub bag: Vec<usize>,
    pub kind: NiceKind,
}

/// Nodes are stored children-first; the root is the last node and has an empty bag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceDecomposition {
    nodes: Vec<NiceNode>,
}

impl NiceDecomposition {
    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    pub fn node(&self, t: usize) -> &NiceNode {
        &self.nodes[t]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn width(&self) -> usize {
        self.nodes.iter().map(|t| t.bag.len()).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.nodes.len()];
        for (t, node) in self.nodes.iter().enumerate() {
            match node.kind {
                NiceKind::Leaf => {}
                NiceKind::Introduce { child, .. } | NiceKind::Forget { child, .. } => parent[child] = Some(t),
                NiceKind::Join { left, right } => {
                    parent[left] = Some(t);
                    parent[right] = Some(t);
                }
            }
        }
        parent
    }

    pub fn to_tree_decomposition(&self) -> TreeDecomposition {
        TreeDecomposition::new(self.nodes.iter().map(|t| t.bag.clone()).collect(), self.parents())
            .expect("nice decompositions are never empty")
    }

    fn push(&mut self, bag: Vec<usize>, kind: NiceKind) -> usize {
        self.nodes.push(NiceNode { bag, kind });
        self.nodes.len() - 1
    }

    /// Forgets then introduces until the bag of `top` equals `target`.
    fn morph(&mut self, mut top: usize, target: &[usize]) -> usize {
        let current = self.nodes[top].bag.clone();
        let mut bag = current.clone();
        for &v in current.iter().rev() {
            if target.binary_search(&v).is_err() {
                bag.retain(|&x| x != v);
                top = self.push(bag.clone(), NiceKind::Forget { vertex: v, child: top });
            }
        }
        for &v in target {
            if let Err(p) = bag.binary_search(&v) {
                bag.insert(p, v);
                top = self.push(bag.clone(), NiceKind::Introduce { vertex: v, child: top });
            }
        }
        top
    }
}

/// Converts a tree decomposition into a nice one of the same width.
pub fn make_nice(td: &TreeDecomposition) -> Result<NiceDecomposition> {
    let root = td.tree_root().map_err(Error::InvalidDecomposition)?;
    let broken = td.disconnected_vertices();
    if !broken.is_empty() {
        return Err(Error::InvalidDecomposition(format!(
            "bags containing vertex {} are not connected",
            broken[0]
        )));
    }
    let children = td.children();
    // iterative post-order
    let mut order = Vec::with_capacity(td.len());
    let mut stack = vec![root];
    while let Some(t) = stack.pop() {
        order.push(t);
        stack.extend(children[t].iter().copied());
    }
    order.reverse();

    let mut out = NiceDecomposition { nodes: Vec::new() };
    let mut top = vec![usize::MAX; td.len()];
    for &t in &order {
        let bag = td.bag(t);
        let mut acc: Option<usize> = None;
        for &c in &children[t] {
            let lifted = out.morph(top[c], bag);
            acc = Some(match acc {
                None => lifted,
                Some(prev) => out.push(bag.to_vec(), NiceKind::Join { left: prev, right: lifted }),
            });
        }
        top[t] = match acc {
            Some(a) => a,
            None => {
                let leaf = out.push(Vec::new(), NiceKind::Leaf);
                out.morph(leaf, bag)
            }
        };
    }
    let last = out.morph(top[root], &[]);
    debug_assert_eq!(last, out.len() - 1);
    Ok(out)
}
