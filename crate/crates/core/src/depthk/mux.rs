use std::collections::BTreeSet;
use std::sync::Arc;

use super::{conj_cc, DepthKSet};
use crate::pos::{PosFormula, VarId, VarSpace};
use crate::term::{FreshVars, Var};

/// Calls `visit` on every k-subset of `0..n` in lexicographic order.
fn for_each_subset(n: usize, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn separates(s1: &DepthKSet, s2: &DepthKSet, ys: &BTreeSet<Var>, fresh: &FreshVars) -> bool {
    let right: Vec<_> = s2.iter().map(|t| t.project_exists(ys, fresh)).collect();
    s1.iter().all(|t1| {
        let p1 = t1.project_exists(ys, fresh);
        right
            .iter()
            .all(|p2| conj_cc(&p1, p2, s1.k(), fresh).is_none())
    })
}

/// Minimal index sets `Y ⊆ scope` (|Y| ≤ `max_subset`) whose projections
/// separate every pair of elements. `None` when either set is `{false}`,
/// which means the two are exclusive outright. A top operand yields no
/// subsets, since nothing is known about its elements.
pub fn mux_subsets(
    s1: &DepthKSet,
    s2: &DepthKSet,
    scope: &[Var],
    max_subset: usize,
    fresh: &FreshVars,
) -> Option<Vec<Vec<usize>>> {
    if s1.is_empty() || s2.is_empty() {
        return None;
    }
    let mut found: Vec<Vec<usize>> = Vec::new();
    if s1.is_top() || s2.is_top() {
        return Some(found);
    }
    for size in 0..=max_subset.min(scope.len()) {
        for_each_subset(scope.len(), size, &mut |y| {
            // a superset of a separating set adds nothing to the disjunction
            if found.iter().any(|f| f.iter().all(|i| y.contains(i))) {
                return;
            }
            let ys: BTreeSet<Var> = y.iter().map(|&i| scope[i].clone()).collect();
            if separates(s1, s2, &ys, fresh) {
                found.push(y.to_vec());
            }
        });
    }
    Some(found)
}

/// `⋁{⋀Y | Y separates s1 from s2}`, with `scope[i]` read as `VarId(i)` of
/// `space`. True when either set is `{false}`; false when no `Y` qualifies.
pub fn abstract_mux(
    s1: &DepthKSet,
    s2: &DepthKSet,
    scope: &[Var],
    space: &Arc<VarSpace>,
    max_subset: usize,
    fresh: &FreshVars,
) -> PosFormula {
    match mux_subsets(s1, s2, scope, max_subset, fresh) {
        None => PosFormula::top(space),
        Some(ys) => ys.iter().fold(PosFormula::bottom(space), |acc, y| {
            let cube = PosFormula::all(space, y.iter().map(|&i| VarId(i as u32)));
            acc.disj(&cube).expect("one space")
        }),
    }
}
