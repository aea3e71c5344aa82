//! Randomised checking of an inferred determinacy condition against the
//! interpreter.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Budget, Oracle};
use crate::frontend::print::goal_to_string;
use crate::frontend::Program;
use crate::pos::PosFormula;
use crate::term::{Goal, PredKey, Term, Var, CONS, NIL};

/// Constants and function symbols that occur in a program.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub atoms: BTreeSet<String>,
    pub ints: BTreeSet<i64>,
    /// Function symbols other than list cells.
    pub functors: BTreeSet<(String, usize)>,
    pub lists: bool,
}

impl Signature {
    pub fn of(program: &Program) -> Signature {
        let mut sig = Signature::default();
        for c in &program.clauses {
            c.args.iter().for_each(|a| sig.add(a));
            sig.add_goal(&c.body);
        }
        sig.ints.extend(0..=5);
        sig
    }

    fn add_goal(&mut self, g: &Goal) {
        match g {
            Goal::Post(a, b) => {
                self.add(a);
                self.add(b);
            }
            Goal::Call(_, args) => args.iter().for_each(|a| self.add(a)),
            Goal::Conj(l, r) | Goal::Disj(l, r) => {
                self.add_goal(l);
                self.add_goal(r);
            }
            // arithmetic operators are not data
            _ => {}
        }
    }

    fn add(&mut self, t: &Term) {
        match t {
            Term::Var(_) => {}
            Term::Int(n) => {
                self.ints.insert(*n);
            }
            Term::Atom(a) if &**a == NIL => self.lists = true,
            Term::Atom(a) => {
                self.atoms.insert(a.to_string());
            }
            Term::Compound(f, args) => {
                if &**f == CONS && args.len() == 2 {
                    self.lists = true;
                } else {
                    self.functors.insert((f.to_string(), args.len()));
                }
                args.iter().for_each(|a| self.add(a));
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialConfig {
    pub trials: usize,
    pub seed: u64,
    /// Depth of generated terms, list cells aside.
    pub max_depth: usize,
    pub max_list: usize,
    pub budget: Budget,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            trials: 200,
            seed: 0,
            max_depth: 4,
            max_list: 5,
            budget: Budget::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub goal: String,
    pub answers: usize,
}

/// Outcome of the trials for one predicate. A trial passes when the search
/// completes with at most one answer; a search that stops early with fewer
/// than two answers is inconclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub key: PredKey,
    pub trials: usize,
    pub passes: usize,
    pub inconclusive: usize,
    pub counterexamples: usize,
    /// The first trial that produced two answers or more.
    pub witness: Option<Counterexample>,
    /// The condition was `false`, so there was nothing to try.
    pub vacuous: bool,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.counterexamples == 0
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vacuous {
            return write!(f, "{}: condition is false, nothing to check", self.key);
        }
        write!(
            f,
            "{}: {} trials, {} passed, {} inconclusive",
            self.key, self.trials, self.passes, self.inconclusive
        )?;
        if let Some(w) = &self.witness {
            write!(f, ", {} counterexamples (first: {} with {} answers)", self.counterexamples, w.goal, w.answers)?;
        }
        Ok(())
    }
}

struct Generator<'a> {
    sig: &'a Signature,
    leaves: Vec<Term>,
    rng: ChaCha8Rng,
    config: TrialConfig,
    next_var: usize,
}

impl Generator<'_> {
    fn ground(&mut self, depth: usize) -> Term {
        let compound = !self.sig.functors.is_empty() || self.sig.lists;
        if depth <= 1 || !compound || self.rng.gen_bool(0.35) {
            return self.leaves[self.rng.gen_range(0..self.leaves.len())].clone();
        }
        let n_functors = self.sig.functors.len();
        let choice = self.rng.gen_range(0..n_functors + usize::from(self.sig.lists) * 2);
        if choice >= n_functors {
            let len = self.rng.gen_range(0..=self.config.max_list);
            let items = (0..len).map(|_| self.ground(depth - 1)).collect();
            return Term::list(items, Term::nil());
        }
        let (name, arity) = self.sig.functors.iter().nth(choice).cloned().expect("in range");
        let args = (0..arity).map(|_| self.ground(depth - 1)).collect();
        Term::compound(&name, args)
    }

    fn fresh(&mut self) -> Term {
        self.next_var += 1;
        Term::Var(Var::new(&format!("V{}", self.next_var)))
    }

    /// A term with at least one variable.
    fn nonground(&mut self) -> Term {
        if self.rng.gen_bool(0.5) {
            return self.fresh();
        }
        let t = self.ground(self.config.max_depth);
        let t = self.punch(&t);
        if t.is_ground() {
            self.fresh()
        } else {
            t
        }
    }

    fn punch(&mut self, t: &Term) -> Term {
        match t {
            Term::Compound(f, args) => Term::Compound(f.clone(), args.iter().map(|a| self.punch(a)).collect()),
            leaf => {
                if self.rng.gen_bool(0.3) {
                    self.fresh()
                } else {
                    leaf.clone()
                }
            }
        }
    }
}

fn fnv(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3))
}

/// Runs `config.trials` random calls of `key` whose groundness pattern
/// satisfies `condition` and counts their answers. The same seed gives the
/// same calls.
pub fn check_determinacy(
    oracle: &Oracle,
    sig: &Signature,
    key: &PredKey,
    condition: &PosFormula,
    config: TrialConfig,
) -> Verdict {
    let mut verdict = Verdict {
        key: key.clone(),
        trials: 0,
        passes: 0,
        inconclusive: 0,
        counterexamples: 0,
        witness: None,
        vacuous: false,
    };
    let n = key.arity;
    let models: Vec<Vec<bool>> = (0..1u64 << n)
        .map(|bits| (0..n).map(|i| bits >> i & 1 == 1).collect::<Vec<bool>>())
        .filter(|a| condition.eval(a))
        .collect();
    if models.is_empty() {
        verdict.vacuous = true;
        return verdict;
    }
    let mut leaves: Vec<Term> = sig.atoms.iter().map(|a| Term::atom(a)).collect();
    leaves.extend(sig.ints.iter().map(|&i| Term::Int(i)));
    if sig.lists {
        leaves.push(Term::nil());
    }
    let mut gen = Generator {
        sig,
        leaves,
        rng: ChaCha8Rng::seed_from_u64(config.seed ^ fnv(&key.to_string())),
        config,
        next_var: 0,
    };
    for _ in 0..config.trials {
        let pattern = &models[gen.rng.gen_range(0..models.len())];
        gen.next_var = 0;
        let args: Vec<Term> = pattern
            .iter()
            .map(|&g| if g { gen.ground(config.max_depth) } else { gen.nonground() })
            .collect();
        let goal = Goal::Call(key.clone(), args);
        let seq = oracle.solve(&goal);
        verdict.trials += 1;
        if seq.answers.len() >= 2 {
            verdict.counterexamples += 1;
            verdict.witness.get_or_insert_with(|| Counterexample {
                goal: goal_to_string(&goal),
                answers: seq.answers.len(),
            });
        } else if seq.exhausted {
            verdict.passes += 1;
        } else {
            verdict.inconclusive += 1;
        }
    }
    verdict
}
