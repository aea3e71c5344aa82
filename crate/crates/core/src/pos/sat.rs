//! A small complete DPLL solver with deterministic branching.

use std::collections::BTreeMap;

use super::{Lit, VarId};

/// Outcome of a satisfiability check; `model` is present iff satisfiable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatResult {
    pub satisfiable: bool,
    pub model: Option<BTreeMap<VarId, bool>>,
}

const UNSET: i8 = -1;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Value {
    True,
    False,
    Unset,
}

fn value(assign: &[i8], l: Lit) -> Value {
    match assign[l.var().index()] {
        UNSET => Value::Unset,
        v => {
            if (v == 1) != l.is_neg() {
                Value::True
            } else {
                Value::False
            }
        }
    }
}

fn set(assign: &mut [i8], l: Lit) {
    assign[l.var().index()] = if l.is_neg() { 0 } else { 1 };
}

/// Clause database that can be grown between calls; each call to
/// [`Solver::solve`] starts a fresh search over the current clauses.
#[derive(Debug, Clone, Default)]
pub(crate) struct Solver {
    num_vars: usize,
    clauses: Vec<Vec<Lit>>,
}

impl Solver {
    pub fn new(num_vars: usize) -> Solver {
        Solver {
            num_vars,
            clauses: Vec::new(),
        }
    }

    pub fn add_clause(&mut self, clause: Vec<Lit>) {
        for l in &clause {
            self.num_vars = self.num_vars.max(l.var().index() + 1);
        }
        self.clauses.push(clause);
    }

    pub fn add_clauses<'a>(&mut self, clauses: impl IntoIterator<Item = &'a Vec<Lit>>) {
        for c in clauses {
            self.add_clause(c.clone());
        }
    }

    /// Partial model (unassigned variables are `None`) satisfying every
    /// clause and every assumption, or `None` when unsatisfiable.
    pub fn solve(&self, assumptions: &[Lit]) -> Option<Vec<Option<bool>>> {
        let mut num_vars = self.num_vars;
        for l in assumptions {
            num_vars = num_vars.max(l.var().index() + 1);
        }
        let mut assign = vec![UNSET; num_vars];
        for &l in assumptions {
            match value(&assign, l) {
                Value::False => return None,
                _ => set(&mut assign, l),
            }
        }
        if dpll(&self.clauses, &mut assign) {
            Some(
                assign
                    .into_iter()
                    .map(|v| if v == UNSET { None } else { Some(v == 1) })
                    .collect(),
            )
        } else {
            None
        }
    }
}

fn dpll(clauses: &[Vec<Lit>], assign: &mut Vec<i8>) -> bool {
    // unit propagation to a fixpoint
    loop {
        let mut changed = false;
        for c in clauses {
            let mut unassigned = None;
            let mut open = 0;
            let mut satisfied = false;
            for &l in c {
                match value(assign, l) {
                    Value::True => {
                        satisfied = true;
                        break;
                    }
                    Value::Unset => {
                        open += 1;
                        unassigned = Some(l);
                    }
                    Value::False => {}
                }
            }
            if satisfied {
                continue;
            }
            match open {
                0 => return false,
                1 => {
                    set(assign, unassigned.unwrap());
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    // lowest unassigned variable of an open clause, true branch first
    let mut branch: Option<VarId> = None;
    for c in clauses {
        if c.iter().any(|&l| value(assign, l) == Value::True) {
            continue;
        }
        for &l in c {
            if value(assign, l) == Value::Unset && branch.map_or(true, |b| l.var() < b) {
                branch = Some(l.var());
            }
        }
    }
    let Some(v) = branch else { return true };
    let saved = assign.clone();
    set(assign, Lit::pos(v));
    if dpll(clauses, assign) {
        return true;
    }
    *assign = saved;
    set(assign, Lit::neg(v));
    dpll(clauses, assign)
}

/// Decides a raw clause set.
pub fn sat(num_vars: usize, clauses: &[Vec<Lit>]) -> SatResult {
    let mut s = Solver::new(num_vars);
    s.add_clauses(clauses);
    match s.solve(&[]) {
        Some(model) => SatResult {
            satisfiable: true,
            model: Some(
                model
                    .into_iter()
                    .enumerate()
                    .filter_map(|(i, v)| v.map(|b| (VarId(i as u32), b)))
                    .collect(),
            ),
        },
        None => SatResult {
            satisfiable: false,
            model: None,
        },
    }
}
