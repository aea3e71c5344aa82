//! Cut-normal form: every predicate becomes `p(ȳ) :- G1 ; G2, !, G3 ; G4`
//! with cut-free, disjunction-free goals and distinct head variables.

mod stratify;

pub use stratify::{stratify, Strata};

use std::collections::{BTreeMap, BTreeSet};

use indexmap::IndexMap;
use thiserror::Error;

use crate::frontend::print::render_rule;
use crate::frontend::Program;
use crate::term::{Clause, FreshVars, Goal, PredKey, Term, Var, AUX_PREFIX};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalPredicate {
    pub key: PredKey,
    /// Distinct head variables ȳ.
    pub head: Vec<Var>,
    pub g1: Goal,
    pub g2: Goal,
    pub g3: Goal,
    pub g4: Goal,
    /// Auxiliary predicates minted while normalising this one, transitively.
    pub aux_count: usize,
}

impl NormalPredicate {
    pub fn head_term(&self) -> Term {
        if self.head.is_empty() {
            Term::Atom(self.key.name.clone())
        } else {
            Term::Compound(
                self.key.name.clone(),
                self.head.iter().cloned().map(Term::Var).collect(),
            )
        }
    }

    /// The normal form as one clause with body `G1 ; G2, !, G3 ; G4`.
    pub fn to_clause(&self) -> Clause {
        Clause {
            key: self.key.clone(),
            args: self.head.iter().cloned().map(Term::Var).collect(),
            body: Goal::disj(
                self.g1.clone(),
                Goal::disj(
                    Goal::conj(self.g2.clone(), Goal::conj(Goal::Cut, self.g3.clone())),
                    self.g4.clone(),
                ),
            ),
        }
    }

    /// Re-parseable Prolog text.
    pub fn render(&self) -> String {
        render_rule(&self.head_term(), &self.to_clause().body)
    }

    /// Every user predicate called from G1..G4 in order, tagged with
    /// whether the call sits in G2.
    pub fn calls(&self) -> Vec<(&PredKey, bool)> {
        let mut out = Vec::new();
        for (g, strict) in [(&self.g1, false), (&self.g2, true), (&self.g3, false), (&self.g4, false)] {
            out.extend(g.calls().into_iter().map(|k| (k, strict)));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("program is not cut-stratified: {} (a call guarding a cut reaches back to its own predicate)", render_cycle(.witness))]
    NonStratified { witness: Vec<PredKey> },
}

fn render_cycle(witness: &[PredKey]) -> String {
    witness
        .iter()
        .map(|k| k.to_string())
        .collect::<Vec<_>>()
        .join(" -> ")
}

#[derive(Debug, Clone, Default)]
pub struct NormalProgram {
    pub predicates: IndexMap<PredKey, NormalPredicate>,
    pub strata: Strata,
    /// Non-auxiliary predicates of the input.
    pub original_count: usize,
    /// Auxiliary predicates in the output, from disjunction expansion or
    /// from normalisation.
    pub new_count: usize,
    pub warnings: Vec<String>,
}

impl NormalProgram {
    pub fn get(&self, key: &PredKey) -> Option<&NormalPredicate> {
        self.predicates.get(key)
    }

    pub fn stratum_of(&self, key: &PredKey) -> usize {
        self.strata.stratum_of(key)
    }

    /// The whole program in normal form, one clause per predicate.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for p in self.predicates.values() {
            s.push_str(&p.render());
            s.push('\n');
        }
        s
    }

    pub fn to_program(&self) -> Program {
        Program::from_clauses(self.predicates.values().map(|p| p.to_clause()).collect())
    }
}

struct Normalizer<'a> {
    fresh: &'a FreshVars,
    next_aux: usize,
}

impl Normalizer<'_> {
    fn mint(&mut self, arity: usize) -> PredKey {
        let key = PredKey::new(&format!("{AUX_PREFIX}{}", self.next_aux), arity);
        self.next_aux += 1;
        key
    }

    /// Renames the clause apart, binds its head to `head`, and flattens
    /// call arguments. Returns the resulting body.
    fn prepare(&self, c: &Clause, head: &[Var]) -> Goal {
        let mut rename: BTreeMap<Var, Term> = BTreeMap::new();
        for v in c.vars() {
            rename.insert(v.clone(), Term::Var(self.fresh.var(v.name())));
        }
        let args: Vec<Term> = c.args.iter().map(|a| a.substitute(&rename)).collect();
        let mut body = c.body.substitute(&rename);
        let mut alias: BTreeMap<Var, Term> = BTreeMap::new();
        let mut pending: Vec<(usize, Term)> = Vec::new();
        let mut seen: BTreeSet<Var> = BTreeSet::new();
        for (i, a) in args.iter().enumerate() {
            match a {
                Term::Var(v) if !seen.contains(v) => {
                    alias.insert(v.clone(), Term::Var(head[i].clone()));
                }
                _ => pending.push((i, a.clone())),
            }
            seen.extend(a.vars());
        }
        body = body.substitute(&alias);
        let mut goals: Vec<Goal> = pending
            .into_iter()
            .map(|(i, a)| Goal::Post(Term::Var(head[i].clone()), a.substitute(&alias)))
            .collect();
        goals.push(self.flatten_calls(&body));
        Goal::conj_all(
            goals
                .into_iter()
                .flat_map(|g| g.conjuncts().into_iter().cloned().collect::<Vec<_>>())
                .filter(|g| !matches!(g, Goal::True))
                .collect(),
        )
    }

    /// Gives every user call distinct variable arguments, moving anything
    /// else into a preceding equation.
    fn flatten_calls(&self, g: &Goal) -> Goal {
        match g {
            Goal::Call(k, args) => {
                let mut seen: BTreeSet<Var> = BTreeSet::new();
                let mut posts = Vec::new();
                let mut flat = Vec::with_capacity(args.len());
                for a in args {
                    match a {
                        Term::Var(v) if seen.insert(v.clone()) => flat.push(a.clone()),
                        _ => {
                            let v = self.fresh.var("V");
                            seen.insert(v.clone());
                            posts.push(Goal::Post(Term::Var(v.clone()), a.clone()));
                            flat.push(Term::Var(v));
                        }
                    }
                }
                posts.push(Goal::Call(k.clone(), flat));
                Goal::conj_all(posts)
            }
            Goal::Conj(l, r) => Goal::conj(self.flatten_calls(l), self.flatten_calls(r)),
            Goal::Disj(l, r) => Goal::disj(self.flatten_calls(l), self.flatten_calls(r)),
            other => other.clone(),
        }
    }

    fn fresh_head(&self, clauses: &[Clause], arity: usize) -> Vec<Var> {
        (0..arity)
            .map(|i| {
                let name = clauses
                    .iter()
                    .find_map(|c| c.args[i].as_var().filter(|v| v.name() != "_").map(|v| v.name().to_string()))
                    .unwrap_or_else(|| format!("A{}", i + 1));
                self.fresh.var(&name)
            })
            .collect()
    }

    /// Wraps already-prepared bodies over `head` into a fresh predicate.
    fn wrap(
        &mut self,
        head: &[Var],
        bodies: Vec<Goal>,
        out: &mut Vec<NormalPredicate>,
    ) -> (Goal, usize) {
        let key = self.mint(head.len());
        let args: Vec<Term> = head.iter().cloned().map(Term::Var).collect();
        let clauses: Vec<Clause> = bodies
            .into_iter()
            .map(|body| Clause {
                key: key.clone(),
                args: args.clone(),
                body,
            })
            .collect();
        let minted = self.predicate(&key, &clauses, out);
        (Goal::Call(key, args), 1 + minted)
    }

    /// Normalises one predicate, appending it and then its auxiliaries to
    /// `out`. Returns the number of auxiliaries minted.
    fn predicate(&mut self, key: &PredKey, clauses: &[Clause], out: &mut Vec<NormalPredicate>) -> usize {
        let head = self.fresh_head(clauses, key.arity);
        let bodies: Vec<Goal> = clauses.iter().map(|c| self.prepare(c, &head)).collect();
        let slot = out.len();
        out.push(NormalPredicate {
            key: key.clone(),
            head: head.clone(),
            g1: Goal::Fail,
            g2: Goal::Fail,
            g3: Goal::True,
            g4: Goal::Fail,
            aux_count: 0,
        });
        let mut minted = 0;
        let first_cut = bodies.iter().position(Goal::contains_cut);
        let (g1, g2, g3, g4) = match first_cut {
            None => {
                // no cut: the first clause is G1 and the rest form G4
                let mut rest = bodies.clone();
                let first = rest.remove(0);
                let (g4, n) = self.alternatives(&head, rest, false, out);
                minted += n;
                (first, Goal::Fail, Goal::True, g4)
            }
            Some(c) => {
                let (g1, n1) = self.alternatives(&head, bodies[..c].to_vec(), true, out);
                let conjuncts: Vec<Goal> = bodies[c].conjuncts().into_iter().cloned().collect();
                let cut_at = conjuncts.iter().position(|g| matches!(g, Goal::Cut)).unwrap();
                let before = Goal::conj_all(conjuncts[..cut_at].to_vec());
                let after_goals = conjuncts[cut_at + 1..].to_vec();
                let (g3, n3) = if after_goals.iter().any(|g| matches!(g, Goal::Cut)) {
                    let after = Goal::conj_all(after_goals);
                    let mut outside: BTreeSet<Var> = head.iter().cloned().collect();
                    outside.extend(before.vars());
                    let shared: Vec<Var> = after.vars().into_iter().filter(|v| outside.contains(v)).collect();
                    let key = self.mint(shared.len());
                    let args: Vec<Term> = shared.iter().cloned().map(Term::Var).collect();
                    let clause = Clause {
                        key: key.clone(),
                        args: args.clone(),
                        body: after,
                    };
                    let n = self.predicate(&key, &[clause], out);
                    (Goal::Call(key, args), 1 + n)
                } else {
                    (Goal::conj_all(after_goals), 0)
                };
                let (g4, n4) = self.alternatives(&head, bodies[c + 1..].to_vec(), false, out);
                minted += n1 + n3 + n4;
                (g1, before, g3, g4)
            }
        };
        out[slot] = NormalPredicate {
            key: key.clone(),
            head,
            g1,
            g2,
            g3,
            g4,
            aux_count: minted,
        };
        minted
    }

    /// The G1/G4 rule: none is `fail`, a single (cut-free, for G4) clause
    /// is its body, anything else is wrapped.
    fn alternatives(
        &mut self,
        head: &[Var],
        bodies: Vec<Goal>,
        single_may_cut: bool,
        out: &mut Vec<NormalPredicate>,
    ) -> (Goal, usize) {
        match bodies.len() {
            0 => (Goal::Fail, 0),
            1 if single_may_cut || !bodies[0].contains_cut() => (bodies[0].clone(), 0),
            _ => self.wrap(head, bodies, out),
        }
    }
}

/// Puts every predicate of a disjunction-free program into cut-normal form
/// and checks cut-stratification. With `relax_cut`, each cut that breaks
/// stratification is dropped and a warning recorded instead of failing.
pub fn normalize_program(
    p: &Program,
    fresh: &FreshVars,
    relax_cut: bool,
) -> Result<NormalProgram, NormalizeError> {
    let mut n = Normalizer {
        fresh,
        next_aux: crate::frontend::next_aux_index(p),
    };
    let mut preds: Vec<NormalPredicate> = Vec::new();
    for key in p.predicates() {
        let clauses: Vec<Clause> = p.clauses_of(key).cloned().collect();
        n.predicate(key, &clauses, &mut preds);
    }
    let mut np = NormalProgram {
        original_count: p.predicates().filter(|k| !k.is_aux()).count(),
        predicates: preds.into_iter().map(|q| (q.key.clone(), q)).collect(),
        ..NormalProgram::default()
    };
    loop {
        match stratify(&np.predicates) {
            Ok(strata) => {
                np.strata = strata;
                break;
            }
            Err(NormalizeError::NonStratified { witness }) if relax_cut => {
                let culprit = witness[0].clone();
                n.relax(&mut np, &culprit);
                np.warnings.push(format!(
                    "dropped the cut in {culprit} to restore stratification (cycle {})",
                    render_cycle(&witness)
                ));
            }
            Err(e) => return Err(e),
        }
    }
    np.new_count = np.predicates.keys().filter(|k| k.is_aux()).count();
    Ok(np)
}

impl Normalizer<'_> {
    /// `G1 ; G2, !, G3 ; G4` becomes `G1 ; fail, !, true ; aux` with
    /// `aux :- G2, G3.  aux :- G4.`
    fn relax(&mut self, np: &mut NormalProgram, key: &PredKey) {
        let p = np.predicates[key].clone();
        let mut out = Vec::new();
        let bodies = vec![Goal::conj(p.g2.clone(), p.g3.clone()), p.g4.clone()];
        let (g4, minted) = self.wrap(&p.head, bodies, &mut out);
        let q = np.predicates.get_mut(key).unwrap();
        q.g2 = Goal::Fail;
        q.g3 = Goal::True;
        q.g4 = g4;
        q.aux_count += minted;
        for aux in out {
            np.predicates.insert(aux.key.clone(), aux);
        }
    }
}

/// Structural equality of two clauses up to a bijective variable renaming,
/// reading conjunction as associative.
pub fn alpha_equivalent(a: &Clause, b: &Clause) -> bool {
    struct Bij {
        fw: BTreeMap<Var, Var>,
        bw: BTreeMap<Var, Var>,
    }
    impl Bij {
        fn term(&mut self, x: &Term, y: &Term) -> bool {
            match (x, y) {
                (Term::Var(u), Term::Var(v)) => {
                    self.fw.entry(u.clone()).or_insert_with(|| v.clone()) == v
                        && self.bw.entry(v.clone()).or_insert_with(|| u.clone()) == u
                }
                (Term::Compound(f, xs), Term::Compound(g, ys)) => {
                    f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(s, t)| self.term(s, t))
                }
                _ => x == y,
            }
        }
        fn terms(&mut self, xs: &[Term], ys: &[Term]) -> bool {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(s, t)| self.term(s, t))
        }
        fn goal(&mut self, x: &Goal, y: &Goal) -> bool {
            match (x, y) {
                (Goal::Post(a, b), Goal::Post(c, d)) => self.term(a, c) && self.term(b, d),
                (Goal::Call(k, xs), Goal::Call(l, ys)) | (Goal::Builtin(k, xs), Goal::Builtin(l, ys)) => {
                    k == l && self.terms(xs, ys)
                }
                (Goal::Conj(..), Goal::Conj(..)) => {
                    let (xs, ys) = (x.conjuncts(), y.conjuncts());
                    xs.len() == ys.len() && xs.iter().zip(&ys).all(|(s, t)| self.goal(s, t))
                }
                (Goal::Disj(a, b), Goal::Disj(c, d)) => self.goal(a, c) && self.goal(b, d),
                _ => x == y,
            }
        }
    }
    let mut bij = Bij {
        fw: BTreeMap::new(),
        bw: BTreeMap::new(),
    };
    a.key == b.key && bij.terms(&a.args, &b.args) && bij.goal(&a.body, &b.body)
}

#[cfg(test)]
mod tests;
