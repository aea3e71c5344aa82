//! A small depth-first Prolog interpreter with cut. It enumerates answer
//! substitutions in standard order and stands in for the concrete semantics
//! when validating the analysis.

mod builtins;
mod trials;

pub use trials::{check_determinacy, Counterexample, Signature, TrialConfig, Verdict};

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::frontend::print::write_term;
use crate::frontend::Program;
use crate::term::{Clause, Goal, PredKey, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instantiation error in {0}")]
    Instantiation(String),
    #[error("type error in {0}")]
    Type(String),
    #[error("evaluation error in {0}")]
    Evaluation(String),
    #[error("unknown procedure {0}")]
    UnknownPredicate(PredKey),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_answers: usize,
    /// Nesting depth of predicate calls.
    pub max_depth: usize,
    /// Goals executed, counting every unification, builtin and call.
    pub max_steps: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_answers: 16,
            max_depth: 500,
            max_steps: 10_000,
        }
    }
}

/// One answer: the query's variables with their fully dereferenced values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Answer(pub Vec<(Var, Term)>);

impl Answer {
    /// The values in query-variable order, with unbound variables numbered
    /// `'$VAR'(0)`, `'$VAR'(1)`, … by first occurrence. Two answers are the
    /// same up to renaming iff their numbered forms are equal.
    pub fn numbered(&self) -> Vec<Term> {
        let mut seen: Vec<Var> = Vec::new();
        self.0
            .iter()
            .map(|(_, t)| {
                t.map_vars(&mut |v| {
                    let i = seen.iter().position(|w| w == v).unwrap_or_else(|| {
                        seen.push(v.clone());
                        seen.len() - 1
                    });
                    Term::compound("$VAR", vec![Term::Int(i as i64)])
                })
            })
            .collect()
    }
}

impl fmt::Display for Answer {
    /// `X = t, Y = u`, with unbound variables written `_A`, `_B`, … and
    /// `true` for an answer that binds nothing.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let numbered = self.numbered();
        let mut first = true;
        for ((v, _), t) in self.0.iter().zip(&numbered) {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{v} = ")?;
            write_term(f, &replace_numbered(t), &|w| w.name().to_string())?;
        }
        if first {
            f.write_str("true")?;
        }
        Ok(())
    }
}

/// `'$VAR'(i)` back to a variable named `_A`, `_B`, …
fn replace_numbered(t: &Term) -> Term {
    match t {
        Term::Compound(fun, args) if &**fun == "$VAR" && args.len() == 1 => match args[0] {
            Term::Int(i) => Term::Var(Var::new(&numbered_name(i as usize))),
            _ => t.clone(),
        },
        Term::Compound(fun, args) => Term::Compound(fun.clone(), args.iter().map(replace_numbered).collect()),
        _ => t.clone(),
    }
}

fn numbered_name(i: usize) -> String {
    let letter = (b'A' + (i % 26) as u8) as char;
    if i < 26 {
        format!("_{letter}")
    } else {
        format!("_{letter}{}", i / 26)
    }
}

/// Answers in discovery order. `exhausted` is true only when the search
/// space was fully explored without error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnswerSeq {
    pub answers: Vec<Answer>,
    pub exhausted: bool,
    pub error: Option<OracleError>,
    pub steps: usize,
}

enum Cont {
    Done,
    Goal {
        goal: Goal,
        /// Choicepoint height a cut in this goal returns to.
        cut: usize,
        depth: usize,
        next: Rc<Cont>,
    },
}

enum Alternative {
    Clauses {
        key: PredKey,
        args: Vec<Term>,
        next: usize,
        depth: usize,
        cont: Rc<Cont>,
    },
    Goal {
        goal: Goal,
        cut: usize,
        depth: usize,
        cont: Rc<Cont>,
    },
}

struct ChoicePoint {
    trail_len: usize,
    alt: Alternative,
}

enum Stop {
    Exhausted,
    Budget,
    Error(OracleError),
}

/// An indexed program ready to answer queries.
pub struct Oracle {
    clauses: HashMap<PredKey, Vec<Clause>>,
    base_id: u32,
    budget: Budget,
}

impl Oracle {
    pub fn new(program: &Program, budget: Budget) -> Oracle {
        let mut clauses: HashMap<PredKey, Vec<Clause>> = HashMap::new();
        let mut base_id = 0;
        for c in &program.clauses {
            for v in c.vars() {
                base_id = base_id.max(v.id());
            }
            clauses.entry(c.key.clone()).or_default().push(c.clone());
        }
        Oracle {
            clauses,
            base_id: base_id + 1,
            budget,
        }
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn solve(&self, query: &Goal) -> AnswerSeq {
        let qvars = query.vars();
        let base = qvars.iter().map(|v| v.id() + 1).max().unwrap_or(0).max(self.base_id);
        let mut m = Machine {
            oracle: self,
            bindings: HashMap::new(),
            trail: Vec::new(),
            stack: Vec::new(),
            next_id: base,
            steps: 0,
        };
        let mut answers = Vec::new();
        let mut cont = Rc::new(Cont::Goal {
            goal: query.clone(),
            cut: 0,
            depth: 0,
            next: Rc::new(Cont::Done),
        });
        let stop = loop {
            match m.run(cont) {
                Ok(()) => {
                    answers.push(Answer(
                        qvars.iter().map(|v| (v.clone(), m.resolve(&Term::Var(v.clone())))).collect(),
                    ));
                    if answers.len() >= self.budget.max_answers {
                        break Stop::Budget;
                    }
                    match m.backtrack() {
                        Some(c) => cont = c,
                        None => break Stop::Exhausted,
                    }
                }
                Err(stop) => break stop,
            }
        };
        let (exhausted, error) = match stop {
            Stop::Exhausted => (true, None),
            Stop::Budget => (false, None),
            Stop::Error(e) => (false, Some(e)),
        };
        AnswerSeq {
            answers,
            exhausted,
            error,
            steps: m.steps,
        }
    }
}

/// All answers of `query` under `program`, up to the budget.
pub fn solve(program: &Program, query: &Goal, budget: Budget) -> AnswerSeq {
    Oracle::new(program, budget).solve(query)
}

/// Number of answers found and whether the search completed.
pub fn count_answers(program: &Program, query: &Goal, budget: Budget) -> (usize, bool) {
    let seq = solve(program, query, budget);
    (seq.answers.len(), seq.exhausted)
}

struct Machine<'o> {
    oracle: &'o Oracle,
    bindings: HashMap<Var, Term>,
    trail: Vec<Var>,
    stack: Vec<ChoicePoint>,
    next_id: u32,
    steps: usize,
}

impl Machine<'_> {
    fn deref(&self, t: &Term) -> Term {
        let mut cur = t.clone();
        while let Term::Var(v) = &cur {
            match self.bindings.get(v) {
                Some(next) => cur = next.clone(),
                None => break,
            }
        }
        cur
    }

    /// Fully dereferenced copy.
    fn resolve(&self, t: &Term) -> Term {
        match self.deref(t) {
            Term::Compound(f, args) => Term::Compound(f, args.iter().map(|a| self.resolve(a)).collect()),
            other => other,
        }
    }

    fn bind(&mut self, v: Var, t: Term) {
        self.bindings.insert(v.clone(), t);
        self.trail.push(v);
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let v = self.trail.pop().expect("trail entry");
            self.bindings.remove(&v);
        }
    }

    fn occurs(&self, v: &Var, t: &Term) -> bool {
        match self.deref(t) {
            Term::Var(w) => &w == v,
            Term::Compound(_, args) => args.iter().any(|a| self.occurs(v, a)),
            _ => false,
        }
    }

    /// Unification with occurs check. On failure the caller undoes the trail.
    fn unify(&mut self, a: &Term, b: &Term) -> bool {
        let mut todo = vec![(a.clone(), b.clone())];
        while let Some((x, y)) = todo.pop() {
            let (x, y) = (self.deref(&x), self.deref(&y));
            match (x, y) {
                (Term::Var(u), Term::Var(w)) if u == w => {}
                (Term::Var(u), t) | (t, Term::Var(u)) => {
                    if self.occurs(&u, &t) {
                        return false;
                    }
                    self.bind(u, t);
                }
                (Term::Compound(f, xs), Term::Compound(g, ys)) => {
                    if f != g || xs.len() != ys.len() {
                        return false;
                    }
                    todo.extend(xs.into_iter().zip(ys));
                }
                (x, y) => {
                    if x != y {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn rename(&mut self, c: &Clause) -> (Vec<Term>, Goal) {
        let mut map: HashMap<Var, Term> = HashMap::new();
        let next_id = &mut self.next_id;
        let mut fresh = |v: &Var| {
            map.entry(v.clone())
                .or_insert_with(|| {
                    *next_id += 1;
                    Term::Var(Var::with_id(v.name(), *next_id))
                })
                .clone()
        };
        let args = c.args.iter().map(|a| a.map_vars(&mut fresh)).collect();
        let body = c.body.map_terms(&mut |t| t.map_vars(&mut fresh));
        (args, body)
    }

    /// Tries clauses of `key` from index `start`, leaving a choicepoint for
    /// the rest. Returns the continuation of the first matching clause.
    fn try_clauses(
        &mut self,
        key: PredKey,
        args: Vec<Term>,
        start: usize,
        depth: usize,
        cont: Rc<Cont>,
    ) -> Option<Rc<Cont>> {
        let oracle = self.oracle;
        let clauses = &oracle.clauses[&key];
        let barrier = self.stack.len();
        for i in start..clauses.len() {
            let trail_len = self.trail.len();
            let (head, body) = self.rename(&clauses[i]);
            if head.iter().zip(&args).all(|(h, a)| self.unify(h, a)) {
                if i + 1 < clauses.len() {
                    self.stack.push(ChoicePoint {
                        trail_len,
                        alt: Alternative::Clauses {
                            key,
                            args,
                            next: i + 1,
                            depth,
                            cont: cont.clone(),
                        },
                    });
                }
                return Some(Rc::new(Cont::Goal {
                    goal: body,
                    cut: barrier,
                    depth,
                    next: cont,
                }));
            }
            self.undo_to(trail_len);
        }
        None
    }

    /// Resumes the most recent choicepoint; `None` when there is none.
    fn backtrack(&mut self) -> Option<Rc<Cont>> {
        loop {
            let cp = self.stack.pop()?;
            self.undo_to(cp.trail_len);
            match cp.alt {
                Alternative::Goal { goal, cut, depth, cont } => {
                    return Some(Rc::new(Cont::Goal {
                        goal,
                        cut,
                        depth,
                        next: cont,
                    }))
                }
                Alternative::Clauses {
                    key,
                    args,
                    next,
                    depth,
                    cont,
                } => {
                    if let Some(c) = self.try_clauses(key, args, next, depth, cont) {
                        return Some(c);
                    }
                }
            }
        }
    }

    /// Runs until the continuation is empty (an answer) or the search stops.
    fn run(&mut self, mut cont: Rc<Cont>) -> Result<(), Stop> {
        let budget = self.oracle.budget;
        loop {
            let (goal, cut, depth, next) = match &*cont {
                Cont::Done => return Ok(()),
                Cont::Goal { goal, cut, depth, next } => (goal.clone(), *cut, *depth, next.clone()),
            };
            self.steps += 1;
            if self.steps > budget.max_steps {
                return Err(Stop::Budget);
            }
            let ok = match goal {
                Goal::True => true,
                Goal::Fail => false,
                Goal::Cut => {
                    self.stack.truncate(cut);
                    true
                }
                Goal::Conj(l, r) => {
                    let rest = Rc::new(Cont::Goal {
                        goal: *r,
                        cut,
                        depth,
                        next,
                    });
                    cont = Rc::new(Cont::Goal {
                        goal: *l,
                        cut,
                        depth,
                        next: rest,
                    });
                    continue;
                }
                Goal::Disj(l, r) => {
                    self.stack.push(ChoicePoint {
                        trail_len: self.trail.len(),
                        alt: Alternative::Goal {
                            goal: *r,
                            cut,
                            depth,
                            cont: next.clone(),
                        },
                    });
                    cont = Rc::new(Cont::Goal {
                        goal: *l,
                        cut,
                        depth,
                        next,
                    });
                    continue;
                }
                Goal::Post(a, b) => {
                    let len = self.trail.len();
                    let ok = self.unify(&a, &b);
                    if !ok {
                        self.undo_to(len);
                    }
                    ok
                }
                Goal::Builtin(key, args) => self.builtin(&key, &args).map_err(Stop::Error)?,
                Goal::Call(key, args) => {
                    if depth >= budget.max_depth {
                        return Err(Stop::Budget);
                    }
                    if !self.oracle.clauses.contains_key(&key) {
                        return Err(Stop::Error(OracleError::UnknownPredicate(key)));
                    }
                    match self.try_clauses(key, args, 0, depth + 1, next.clone()) {
                        Some(c) => {
                            cont = c;
                            continue;
                        }
                        None => false,
                    }
                }
            };
            if ok {
                cont = next;
            } else {
                match self.backtrack() {
                    Some(c) => cont = c,
                    None => return Err(Stop::Exhausted),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests;
