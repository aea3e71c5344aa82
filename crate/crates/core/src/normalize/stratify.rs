use std::collections::{BTreeMap, VecDeque};

use indexmap::IndexMap;
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use super::{NormalPredicate, NormalizeError};
use crate::term::PredKey;

/// Stratum assignment: numbers start at 1; a call from G2 goes strictly
/// down, any other call goes down or stays level.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Strata {
    of: BTreeMap<PredKey, usize>,
    /// Predicates of each stratum in program order, lowest stratum first.
    pub layers: Vec<Vec<PredKey>>,
}

impl Strata {
    pub fn stratum_of(&self, key: &PredKey) -> usize {
        self.of.get(key).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }
}

/// Builds the call graph and assigns strata, or returns a cycle through a
/// G2 call as the witness. The witness starts and ends at the predicate
/// whose G2 makes the call.
pub fn stratify(preds: &IndexMap<PredKey, NormalPredicate>) -> Result<Strata, NormalizeError> {
    let mut g: DiGraph<PredKey, bool> = DiGraph::new();
    let nodes: BTreeMap<&PredKey, NodeIndex> = preds.keys().map(|k| (k, g.add_node(k.clone()))).collect();
    for (k, p) in preds {
        for (callee, strict) in p.calls() {
            if let Some(&to) = nodes.get(callee) {
                g.add_edge(nodes[k], to, strict);
            }
        }
    }
    // callees come before callers
    let sccs = tarjan_scc(&g);
    let mut comp = vec![0usize; g.node_count()];
    for (i, scc) in sccs.iter().enumerate() {
        for &n in scc {
            comp[n.index()] = i;
        }
    }
    for (k, p) in preds {
        let from = nodes[k];
        for (callee, strict) in p.calls() {
            let Some(&to) = nodes.get(callee) else { continue };
            if strict && comp[from.index()] == comp[to.index()] {
                let mut witness = vec![k.clone()];
                witness.extend(path_within(&g, &comp, to, from).into_iter().map(|n| g[n].clone()));
                return Err(NormalizeError::NonStratified { witness });
            }
        }
    }
    let mut level = vec![1usize; sccs.len()];
    for (i, scc) in sccs.iter().enumerate() {
        let mut best = 1;
        for &n in scc {
            for e in g.edges(n) {
                use petgraph::visit::EdgeRef;
                let j = comp[e.target().index()];
                if j != i {
                    best = best.max(level[j] + usize::from(*e.weight()));
                }
            }
        }
        level[i] = best;
    }
    let mut of = BTreeMap::new();
    let depth = level.iter().copied().max().unwrap_or(0);
    let mut layers = vec![Vec::new(); depth];
    for k in preds.keys() {
        let s = level[comp[nodes[k].index()]];
        of.insert(k.clone(), s);
        layers[s - 1].push(k.clone());
    }
    Ok(Strata { of, layers })
}

/// Shortest path from `from` to `to` inside one component, inclusive.
fn path_within(g: &DiGraph<PredKey, bool>, comp: &[usize], from: NodeIndex, to: NodeIndex) -> Vec<NodeIndex> {
    let mut prev: BTreeMap<NodeIndex, NodeIndex> = BTreeMap::new();
    let mut queue = VecDeque::from([from]);
    let mut seen = vec![false; g.node_count()];
    seen[from.index()] = true;
    while let Some(n) = queue.pop_front() {
        if n == to {
            break;
        }
        for m in g.neighbors(n) {
            if !seen[m.index()] && comp[m.index()] == comp[from.index()] {
                seen[m.index()] = true;
                prev.insert(m, n);
                queue.push_back(m);
            }
        }
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = prev[&cur];
        path.push(cur);
    }
    path.reverse();
    path
}
