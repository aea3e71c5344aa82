//! Replaces in-body disjunctions with calls to auxiliary predicates.

use std::collections::BTreeSet;

use super::{FrontendError, Program};
use crate::term::{Clause, Goal, PredKey, Term, Var, AUX_PREFIX};

/// Next free auxiliary index, continuing any numbering already in `p`.
pub(crate) fn next_aux_index(p: &Program) -> usize {
    p.predicates()
        .filter_map(|k| k.name.strip_prefix(AUX_PREFIX)?.parse::<usize>().ok())
        .max()
        .map_or(1, |n| n + 1)
}

struct Expander {
    next: usize,
    minted: Vec<Clause>,
}

impl Expander {
    fn clause(&mut self, c: &Clause) -> Result<Clause, FrontendError> {
        let mut outside = BTreeSet::new();
        c.args.iter().for_each(|a| outside.extend(a.var_set()));
        let body = self.goal(&c.key, &c.body, &outside)?;
        Ok(Clause {
            key: c.key.clone(),
            args: c.args.clone(),
            body,
        })
    }

    fn goal(
        &mut self,
        owner: &PredKey,
        g: &Goal,
        outside: &BTreeSet<Var>,
    ) -> Result<Goal, FrontendError> {
        match g {
            Goal::Conj(l, r) => {
                let mut left_out = outside.clone();
                left_out.extend(r.vars());
                let mut right_out = outside.clone();
                right_out.extend(l.vars());
                Ok(Goal::conj(
                    self.goal(owner, l, &left_out)?,
                    self.goal(owner, r, &right_out)?,
                ))
            }
            Goal::Disj(l, r) => {
                if g.contains_cut() {
                    return Err(FrontendError::CutInDisjunction {
                        pred: owner.clone(),
                    });
                }
                let shared: Vec<Var> = g.vars().into_iter().filter(|v| outside.contains(v)).collect();
                let key = PredKey::new(&format!("{AUX_PREFIX}{}", self.next), shared.len());
                self.next += 1;
                let args: Vec<Term> = shared.iter().cloned().map(Term::Var).collect();
                // reserve the slot so this predicate's clauses precede nested ones
                let slot = self.minted.len();
                self.minted.push(Clause {
                    key: key.clone(),
                    args: args.clone(),
                    body: Goal::True,
                });
                self.minted.push(Clause {
                    key: key.clone(),
                    args: args.clone(),
                    body: Goal::True,
                });
                let inner: BTreeSet<Var> = shared.iter().cloned().collect();
                let left = self.goal(&key, l, &inner)?;
                let right = self.goal(&key, r, &inner)?;
                self.minted[slot].body = left;
                self.minted[slot + 1].body = right;
                Ok(Goal::Call(key, args))
            }
            other => Ok(other.clone()),
        }
    }
}

/// Replaces every disjunction by a call to a fresh `$aux_N` predicate with
/// one clause per disjunct, closed over the variables the disjunction shares
/// with the rest of its clause. Cuts inside a disjunct are rejected.
pub fn expand_disjunctions(p: &Program) -> Result<Program, FrontendError> {
    let mut ex = Expander {
        next: next_aux_index(p),
        minted: Vec::new(),
    };
    let mut clauses = Vec::with_capacity(p.clauses.len());
    for c in &p.clauses {
        clauses.push(ex.clause(c)?);
    }
    clauses.extend(ex.minted);
    Ok(Program::from_clauses(clauses))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse;

    #[test]
    fn single_disjunction_becomes_aux() {
        let p = parse("p :- (a ; b). a. b.").unwrap();
        let e = expand_disjunctions(&p).unwrap();
        let aux = PredKey::new("$aux_1", 0);
        assert_eq!(e.clauses[0].body, Goal::Call(aux.clone(), vec![]));
        let bodies: Vec<_> = e.clauses_of(&aux).map(|c| c.body.clone()).collect();
        assert_eq!(
            bodies,
            vec![
                Goal::Call(PredKey::new("a", 0), vec![]),
                Goal::Call(PredKey::new("b", 0), vec![])
            ]
        );
    }

    #[test]
    fn disjunction_free_is_identity() {
        let p = parse("member(X,[X|_]). member(X,[_|L]) :- member(X,L).").unwrap();
        assert_eq!(expand_disjunctions(&p).unwrap(), p);
    }

    #[test]
    fn nested_disjunction_mints_two_predicates() {
        let p = parse("p :- (a ; (b ; c)). a. b. c.").unwrap();
        let e = expand_disjunctions(&p).unwrap();
        let aux: Vec<_> = e.predicates().filter(|k| k.is_aux()).cloned().collect();
        assert_eq!(aux.len(), 2);
        let aux_clauses: usize = aux.iter().map(|k| e.clauses_of(k).count()).sum();
        assert_eq!(aux_clauses, 4);
    }

    #[test]
    fn closes_over_shared_variables_only() {
        let p = parse("p(X, Y) :- q(Z), (X = Z ; W = 1, X = W), Y = X. q(1).").unwrap();
        let e = expand_disjunctions(&p).unwrap();
        let aux = e.predicates().find(|k| k.is_aux()).unwrap().clone();
        assert_eq!(aux.arity, 2); // X and Z; W is local to one disjunct
        assert!(!e.clauses.iter().any(|c| c.body.contains_disj()));
    }

    #[test]
    fn cut_in_disjunct_is_rejected() {
        let p = parse("p :- (a, ! ; b). a. b.").unwrap();
        assert!(matches!(
            expand_disjunctions(&p),
            Err(FrontendError::CutInDisjunction { .. })
        ));
    }

    #[test]
    fn idempotent() {
        let p = parse("p(X) :- (X = 1 ; X = 2 ; X = 3).").unwrap();
        let once = expand_disjunctions(&p).unwrap();
        assert_eq!(expand_disjunctions(&once).unwrap(), once);
    }
}
