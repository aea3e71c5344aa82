//! Prime implicants of the complement of a disjunction of CNF items.
//!
//! Every disjunction-shaped operation of the domain (join, implication,
//! existential elimination, DNF rendering) reduces to this one engine: the
//! negated implicants of the complement are the clauses of the result.

use super::sat::Solver;
use super::{Lit, VarId};

/// One disjunct: either a CNF or the negation of a CNF.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Item<'a> {
    Pos(&'a [Vec<Lit>]),
    Neg(&'a [Vec<Lit>]),
}

fn syntactically_satisfies(cube: &[Lit], cnf: &[Vec<Lit>]) -> bool {
    cnf.iter().all(|c| c.iter().any(|l| cube.contains(l)))
}

fn is_implicant(cube: &[Lit], items: &[Item]) -> bool {
    items.iter().all(|item| match item {
        Item::Pos(cnf) => {
            let mut s = Solver::new(0);
            s.add_clauses(cnf.iter());
            s.solve(cube).is_none()
        }
        Item::Neg(cnf) => syntactically_satisfies(cube, cnf),
    })
}

/// Prime implicants of `¬(item_1 ∨ ... ∨ item_n)` over variables
/// `0..num_vars`, each as a sorted cube.
pub(crate) fn complement_implicants(num_vars: usize, items: &[Item]) -> Vec<Vec<Lit>> {
    let mut solver = Solver::new(num_vars);
    let mut next_selector = num_vars as u32;
    for item in items {
        match item {
            Item::Pos(cnf) => {
                if cnf.is_empty() {
                    // the disjunction is valid; its complement has no implicant
                    return Vec::new();
                }
                let mut any = Vec::with_capacity(cnf.len());
                for clause in cnf.iter() {
                    let s = VarId(next_selector);
                    next_selector += 1;
                    any.push(Lit::pos(s));
                    for &l in clause {
                        solver.add_clause(vec![Lit::neg(s), l.negate()]);
                    }
                }
                solver.add_clause(any);
            }
            Item::Neg(cnf) => solver.add_clauses(cnf.iter()),
        }
    }
    let mut out = Vec::new();
    while let Some(model) = solver.solve(&[]) {
        let mut cube: Vec<Lit> = model
            .iter()
            .take(num_vars)
            .enumerate()
            .filter_map(|(i, v)| {
                v.map(|b| {
                    if b {
                        Lit::pos(VarId(i as u32))
                    } else {
                        Lit::neg(VarId(i as u32))
                    }
                })
            })
            .collect();
        let mut i = 0;
        while i < cube.len() {
            let lit = cube.remove(i);
            if !is_implicant(&cube, items) {
                cube.insert(i, lit);
                i += 1;
            }
        }
        solver.add_clause(cube.iter().map(|l| l.negate()).collect());
        let done = cube.is_empty();
        out.push(cube);
        if done {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VarId {
        VarId(i)
    }

    #[test]
    fn complement_of_single_clause() {
        // ¬(a ∨ b) = ¬a ∧ ¬b
        let cnf = vec![vec![Lit::pos(v(0)), Lit::pos(v(1))]];
        let imps = complement_implicants(2, &[Item::Pos(&cnf)]);
        assert_eq!(imps, vec![vec![Lit::neg(v(0)), Lit::neg(v(1))]]);
    }

    #[test]
    fn implicants_of_cnf_via_neg_item() {
        // implicants of (a ∨ b) are a and b
        let cnf = vec![vec![Lit::pos(v(0)), Lit::pos(v(1))]];
        let mut imps = complement_implicants(2, &[Item::Neg(&cnf)]);
        imps.sort();
        assert_eq!(imps, vec![vec![Lit::pos(v(0))], vec![Lit::pos(v(1))]]);
    }

    #[test]
    fn valid_disjunction_has_empty_complement() {
        let a = vec![vec![Lit::pos(v(0))]];
        let not_a = vec![vec![Lit::neg(v(0))]];
        assert!(complement_implicants(1, &[Item::Pos(&a), Item::Pos(&not_a)]).is_empty());
    }

    #[test]
    fn unsat_disjunction_gives_empty_cube() {
        let bottom = vec![vec![]];
        assert_eq!(complement_implicants(1, &[Item::Pos(&bottom)]), vec![Vec::<Lit>::new()]);
    }
}
