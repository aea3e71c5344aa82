//! Terms, goals and clauses shared by every stage of the pipeline.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::Arc;

/// A logic variable. Source variables carry `id == 0`; variables minted
/// during analysis carry a nonzero id so they can never collide with a
/// variable written by the user.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    name: Arc<str>,
    id: u32,
}

/// Name used for variables produced by truncation, projection and renaming.
pub(crate) const GENERATED: &str = "_G";
/// Name used for canonicalised generated variables inside stored sets.
pub(crate) const CANONICAL: &str = "_C";

impl Var {
    pub fn new(name: &str) -> Var {
        Var {
            name: Arc::from(name),
            id: 0,
        }
    }

    pub fn with_id(name: &str, id: u32) -> Var {
        Var {
            name: Arc::from(name),
            id,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    /// True for variables produced by the depth-k machinery. These are
    /// existential by construction and are dropped on canonicalisation.
    pub fn is_generated(&self) -> bool {
        self.id != 0 && (&*self.name == GENERATED || &*self.name == CANONICAL)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.id == 0 {
            write!(f, "{}", self.name)
        } else {
            write!(f, "{}_{}", self.name, self.id)
        }
    }
}

/// Monotone source of fresh variable ids, scoped to one analysis run.
#[derive(Debug)]
pub struct FreshVars {
    next: AtomicU32,
}

impl Default for FreshVars {
    fn default() -> Self {
        FreshVars::new()
    }
}

impl FreshVars {
    pub fn new() -> FreshVars {
        FreshVars {
            next: AtomicU32::new(1),
        }
    }

    pub fn var(&self, name: &str) -> Var {
        let id = self.next.fetch_add(1, Ordering::Relaxed);
        Var::with_id(name, id)
    }

    pub fn generated(&self) -> Var {
        self.var(GENERATED)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    Atom(Arc<str>),
    Int(i64),
    Compound(Arc<str>, Vec<Term>),
}

pub const NIL: &str = "[]";
pub const CONS: &str = ".";

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Var::new(name))
    }

    pub fn atom(name: &str) -> Term {
        Term::Atom(Arc::from(name))
    }

    pub fn compound(functor: &str, args: Vec<Term>) -> Term {
        debug_assert!(!args.is_empty());
        Term::Compound(Arc::from(functor), args)
    }

    pub fn nil() -> Term {
        Term::atom(NIL)
    }

    pub fn cons(head: Term, tail: Term) -> Term {
        Term::compound(CONS, vec![head, tail])
    }

    /// Builds `[a, b, c | tail]`.
    pub fn list(items: Vec<Term>, tail: Term) -> Term {
        items
            .into_iter()
            .rev()
            .fold(tail, |acc, item| Term::cons(item, acc))
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Atom(_) | Term::Int(_) => true,
            Term::Compound(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Depth with leaves counting as 1.
    pub fn depth(&self) -> usize {
        match self {
            Term::Compound(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
            _ => 1,
        }
    }

    pub fn vars_into(&self, out: &mut Vec<Var>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Compound(_, args) => args.iter().for_each(|a| a.vars_into(out)),
            _ => {}
        }
    }

    /// Variables in order of first occurrence.
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.vars_into(&mut out);
        out
    }

    pub fn var_set(&self) -> BTreeSet<Var> {
        self.vars().into_iter().collect()
    }

    pub fn occurs(&self, v: &Var) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::Compound(_, args) => args.iter().any(|a| a.occurs(v)),
            _ => false,
        }
    }

    pub fn map_vars(&self, f: &mut impl FnMut(&Var) -> Term) -> Term {
        match self {
            Term::Var(v) => f(v),
            Term::Compound(name, args) => {
                Term::Compound(name.clone(), args.iter().map(|a| a.map_vars(f)).collect())
            }
            other => other.clone(),
        }
    }

    pub fn substitute(&self, subst: &BTreeMap<Var, Term>) -> Term {
        self.map_vars(&mut |v| subst.get(v).cloned().unwrap_or_else(|| Term::Var(v.clone())))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::frontend::print::write_term(f, self, &|v| v.to_string())
    }
}

/// Predicate identity: name plus arity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredKey {
    pub name: Arc<str>,
    pub arity: usize,
}

impl PredKey {
    pub fn new(name: &str, arity: usize) -> PredKey {
        PredKey {
            name: Arc::from(name),
            arity,
        }
    }

    pub fn is_aux(&self) -> bool {
        self.name.starts_with(AUX_PREFIX)
    }
}

impl fmt::Debug for PredKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for PredKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// Reserved prefix for predicates minted by the transformations.
pub const AUX_PREFIX: &str = "$aux_";

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Goal {
    /// Adds the equation `lhs = rhs` to the constraint store.
    Post(Term, Term),
    Call(PredKey, Vec<Term>),
    Builtin(PredKey, Vec<Term>),
    Cut,
    Conj(Box<Goal>, Box<Goal>),
    Disj(Box<Goal>, Box<Goal>),
    True,
    Fail,
}

impl Goal {
    pub fn conj(left: Goal, right: Goal) -> Goal {
        Goal::Conj(Box::new(left), Box::new(right))
    }

    pub fn disj(left: Goal, right: Goal) -> Goal {
        Goal::Disj(Box::new(left), Box::new(right))
    }

    /// Right-nested conjunction; `True` for an empty list.
    pub fn conj_all(goals: Vec<Goal>) -> Goal {
        let mut iter = goals.into_iter().rev();
        match iter.next() {
            None => Goal::True,
            Some(last) => iter.fold(last, |acc, g| Goal::conj(g, acc)),
        }
    }

    /// Flattens nested conjunctions into a left-to-right list.
    pub fn conjuncts(&self) -> Vec<&Goal> {
        let mut out = Vec::new();
        fn walk<'a>(g: &'a Goal, out: &mut Vec<&'a Goal>) {
            match g {
                Goal::Conj(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
                other => out.push(other),
            }
        }
        walk(self, &mut out);
        out
    }

    pub fn contains_cut(&self) -> bool {
        match self {
            Goal::Cut => true,
            Goal::Conj(l, r) | Goal::Disj(l, r) => l.contains_cut() || r.contains_cut(),
            _ => false,
        }
    }

    pub fn contains_disj(&self) -> bool {
        match self {
            Goal::Disj(..) => true,
            Goal::Conj(l, r) => l.contains_disj() || r.contains_disj(),
            _ => false,
        }
    }

    pub fn vars_into(&self, out: &mut Vec<Var>) {
        match self {
            Goal::Post(l, r) => {
                l.vars_into(out);
                r.vars_into(out);
            }
            Goal::Call(_, args) | Goal::Builtin(_, args) => {
                args.iter().for_each(|a| a.vars_into(out))
            }
            Goal::Conj(l, r) | Goal::Disj(l, r) => {
                l.vars_into(out);
                r.vars_into(out);
            }
            Goal::Cut | Goal::True | Goal::Fail => {}
        }
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.vars_into(&mut out);
        out
    }

    pub fn map_terms(&self, f: &mut impl FnMut(&Term) -> Term) -> Goal {
        match self {
            Goal::Post(l, r) => Goal::Post(f(l), f(r)),
            Goal::Call(k, args) => Goal::Call(k.clone(), args.iter().map(|a| f(a)).collect()),
            Goal::Builtin(k, args) => {
                Goal::Builtin(k.clone(), args.iter().map(|a| f(a)).collect())
            }
            Goal::Conj(l, r) => Goal::conj(l.map_terms(f), r.map_terms(f)),
            Goal::Disj(l, r) => Goal::disj(l.map_terms(f), r.map_terms(f)),
            other => other.clone(),
        }
    }

    pub fn substitute(&self, subst: &BTreeMap<Var, Term>) -> Goal {
        self.map_terms(&mut |t| t.substitute(subst))
    }

    /// Every user predicate called, in order of occurrence.
    pub fn calls(&self) -> Vec<&PredKey> {
        let mut out = Vec::new();
        fn walk<'a>(g: &'a Goal, out: &mut Vec<&'a PredKey>) {
            match g {
                Goal::Call(k, _) => out.push(k),
                Goal::Conj(l, r) | Goal::Disj(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
                _ => {}
            }
        }
        walk(self, &mut out);
        out
    }
}

impl fmt::Debug for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::frontend::print::write_goal(f, self, 1200, &|v| v.to_string())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    /// Head arguments; the head functor is `key`.
    pub key: PredKey,
    pub args: Vec<Term>,
    pub body: Goal,
}

impl Clause {
    pub fn head_term(&self) -> Term {
        if self.args.is_empty() {
            Term::Atom(self.key.name.clone())
        } else {
            Term::Compound(self.key.name.clone(), self.args.clone())
        }
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.args.iter().for_each(|a| a.vars_into(&mut out));
        self.body.vars_into(&mut out);
        out
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::frontend::print::clause_to_string(self))
    }
}
