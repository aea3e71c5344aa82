//! Depth-k constraint sets: finite sets of equation conjunctions whose
//! right-hand sides never exceed depth k.

mod mux;

pub use mux::{abstract_mux, mux_subsets};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::frontend::print::write_term;
use crate::term::{FreshVars, Term, Var, CANONICAL};

/// Replaces every compound subterm at level `k` or below (the root is level
/// 1) by a fresh variable. Leaves are kept, so the result has depth ≤ k.
pub fn truncate(t: &Term, k: usize, fresh: &FreshVars) -> Term {
    fn go(t: &Term, level: usize, k: usize, fresh: &FreshVars) -> Term {
        match t {
            Term::Compound(f, args) => {
                if level >= k {
                    Term::Var(fresh.generated())
                } else {
                    Term::Compound(
                        f.clone(),
                        args.iter().map(|a| go(a, level + 1, k, fresh)).collect(),
                    )
                }
            }
            other => other.clone(),
        }
    }
    assert!(k >= 1, "depth bound must be positive");
    go(t, 1, k, fresh)
}

/// A satisfiable conjunction of equations in idempotent solved form: no
/// bound variable occurs in any right-hand side. The unsatisfiable
/// conjunction is represented by `None` wherever it can arise.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConstraintConj {
    bindings: BTreeMap<Var, Term>,
}

impl ConstraintConj {
    /// The empty conjunction, `true`.
    pub fn truth() -> ConstraintConj {
        ConstraintConj::default()
    }

    pub fn bindings(&self) -> &BTreeMap<Var, Term> {
        &self.bindings
    }

    pub fn is_true(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn apply(&self, t: &Term) -> Term {
        t.substitute(&self.bindings)
    }

    /// Adds `a = b`, keeping the solved form. Returns false on a clash or an
    /// occurs-check failure; `self` is then unspecified.
    fn unify_in_place(&mut self, a: &Term, b: &Term) -> bool {
        let a = self.apply(a);
        let b = self.apply(b);
        match (&a, &b) {
            (Term::Var(x), Term::Var(y)) if x == y => true,
            (Term::Var(x), t) | (t, Term::Var(x)) => {
                if t.occurs(x) {
                    return false;
                }
                let single = BTreeMap::from([(x.clone(), t.clone())]);
                for rhs in self.bindings.values_mut() {
                    if rhs.occurs(x) {
                        *rhs = rhs.substitute(&single);
                    }
                }
                self.bindings.insert(x.clone(), t.clone());
                true
            }
            (Term::Compound(f, xs), Term::Compound(g, ys)) => {
                f == g
                    && xs.len() == ys.len()
                    && xs.iter().zip(ys).all(|(x, y)| self.unify_in_place(x, y))
            }
            (x, y) => x == y,
        }
    }

    fn truncated(mut self, k: usize, fresh: &FreshVars) -> ConstraintConj {
        for rhs in self.bindings.values_mut() {
            if rhs.depth() > k {
                *rhs = truncate(rhs, k, fresh);
            }
        }
        self
    }

    /// `self ∧ a = b`, re-truncated to depth k; `None` when unsatisfiable.
    pub fn with_eq(&self, a: &Term, b: &Term, k: usize, fresh: &FreshVars) -> Option<ConstraintConj> {
        let mut c = self.clone();
        if c.unify_in_place(a, b) {
            Some(c.truncated(k, fresh))
        } else {
            None
        }
    }

    /// Copy with every generated variable replaced by a fresh one.
    pub fn renamed_apart(&self, fresh: &FreshVars) -> ConstraintConj {
        let mut map: BTreeMap<Var, Term> = BTreeMap::new();
        let mut rename = |t: &Term| {
            t.map_vars(&mut |v| {
                if v.is_generated() {
                    map.entry(v.clone())
                        .or_insert_with(|| Term::Var(fresh.generated()))
                        .clone()
                } else {
                    Term::Var(v.clone())
                }
            })
        };
        let bindings = self
            .bindings
            .iter()
            .map(|(v, t)| {
                let lhs = match rename(&Term::Var(v.clone())) {
                    Term::Var(w) => w,
                    _ => unreachable!("variables rename to variables"),
                };
                (lhs, rename(t))
            })
            .collect();
        ConstraintConj { bindings }
    }

    /// Every variable bound to a ground term.
    pub fn fix_of(&self) -> BTreeSet<Var> {
        self.bindings
            .iter()
            .filter(|(_, t)| t.is_ground())
            .map(|(v, _)| v.clone())
            .collect()
    }

    /// The bindings of `ys`, with every other variable renamed to a fresh
    /// one. Exact on solved forms: bound non-`ys` variables never occur in
    /// the kept right-hand sides.
    pub fn project_exists(&self, ys: &BTreeSet<Var>, fresh: &FreshVars) -> ConstraintConj {
        let mut map: BTreeMap<Var, Term> = BTreeMap::new();
        let bindings = self
            .bindings
            .iter()
            .filter(|(v, _)| ys.contains(*v))
            .map(|(v, t)| {
                let rhs = t.map_vars(&mut |w| {
                    if ys.contains(w) {
                        Term::Var(w.clone())
                    } else {
                        map.entry(w.clone())
                            .or_insert_with(|| Term::Var(fresh.generated()))
                            .clone()
                    }
                });
                (v.clone(), rhs)
            })
            .collect();
        ConstraintConj { bindings }
    }

    /// Drops bindings of generated variables and renumbers the remaining
    /// generated variables by first occurrence, so that conjunctions equal
    /// up to existential renaming compare equal.
    pub fn canonical(&self) -> ConstraintConj {
        let mut map: BTreeMap<Var, Term> = BTreeMap::new();
        let mut next = 1u32;
        let bindings = self
            .bindings
            .iter()
            .filter(|(v, _)| !v.is_generated())
            .map(|(v, t)| {
                let rhs = t.map_vars(&mut |w| {
                    if w.is_generated() {
                        map.entry(w.clone())
                            .or_insert_with(|| {
                                let c = Var::with_id(CANONICAL, next);
                                next += 1;
                                Term::Var(c)
                            })
                            .clone()
                    } else {
                        Term::Var(w.clone())
                    }
                });
                (v.clone(), rhs)
            })
            .collect();
        ConstraintConj { bindings }
    }

    /// Consistent renaming of plain variables; generated ones are renamed
    /// apart. Any non-variable image is unified in.
    pub fn rename(
        &self,
        map: &BTreeMap<Var, Term>,
        k: usize,
        fresh: &FreshVars,
    ) -> Option<ConstraintConj> {
        let apart = self.renamed_apart(fresh);
        let mut out = ConstraintConj::truth();
        for (v, t) in &apart.bindings {
            let lhs = map.get(v).cloned().unwrap_or_else(|| Term::Var(v.clone()));
            let rhs = t.substitute(map);
            if !out.unify_in_place(&lhs, &rhs) {
                return None;
            }
        }
        Some(out.truncated(k, fresh))
    }
}

/// Most general unifier of two conjunctions, re-truncated to depth k. The
/// generated variables of `c2` are renamed apart first; `None` is false.
pub fn conj_cc(
    c1: &ConstraintConj,
    c2: &ConstraintConj,
    k: usize,
    fresh: &FreshVars,
) -> Option<ConstraintConj> {
    let mut out = c1.clone();
    for (v, t) in &c2.renamed_apart(fresh).bindings {
        if !out.unify_in_place(&Term::Var(v.clone()), t) {
            return None;
        }
    }
    Some(out.truncated(k, fresh))
}

fn display_namer(v: &Var) -> String {
    if v.is_generated() {
        format!("{}{}", v.name(), v.id())
    } else {
        v.to_string()
    }
}

impl fmt::Display for ConstraintConj {
    /// Prolog-readable: `true` or `X = t, Y = u`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bindings.is_empty() {
            return f.write_str("true");
        }
        for (i, (v, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{} = ", display_namer(v))?;
            write_term(f, t, &display_namer)?;
        }
        Ok(())
    }
}

impl fmt::Debug for ConstraintConj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite set of satisfiable conjunctions, or top (no information) once
/// the set would exceed its cap. The empty set denotes `{false}`. Top means
/// the same as `{true}` and is kept apart only so that it absorbs unions
/// and shows up in reports.
#[derive(Clone, PartialEq, Eq)]
pub struct DepthKSet {
    elems: BTreeSet<ConstraintConj>,
    k: usize,
    cap: usize,
    top: bool,
}

impl DepthKSet {
    pub fn empty(k: usize, cap: usize) -> DepthKSet {
        DepthKSet {
            elems: BTreeSet::new(),
            k,
            cap,
            top: false,
        }
    }

    pub fn top(k: usize, cap: usize) -> DepthKSet {
        DepthKSet {
            top: true,
            ..DepthKSet::empty(k, cap)
        }
    }

    /// `{true}`.
    pub fn unit(k: usize, cap: usize) -> DepthKSet {
        DepthKSet::from_elems(k, cap, [ConstraintConj::truth()])
    }

    pub fn from_elems(
        k: usize,
        cap: usize,
        elems: impl IntoIterator<Item = ConstraintConj>,
    ) -> DepthKSet {
        let mut s = DepthKSet::empty(k, cap);
        for e in elems {
            s.insert(e);
        }
        s
    }

    fn insert(&mut self, e: ConstraintConj) {
        if self.top {
            return;
        }
        self.elems.insert(e.canonical());
        if self.elems.len() > self.cap {
            self.elems.clear();
            self.top = true;
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn is_top(&self) -> bool {
        self.top
    }

    /// True for `{false}`: no element and not top.
    pub fn is_empty(&self) -> bool {
        !self.top && self.elems.is_empty()
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ConstraintConj> {
        self.elems.iter()
    }

    pub fn union(&self, other: &DepthKSet) -> DepthKSet {
        if self.top || other.top {
            return DepthKSet::top(self.k, self.cap);
        }
        let mut out = self.clone();
        for e in &other.elems {
            out.insert(e.clone());
        }
        out
    }

    /// Pairwise `conj_cc`, dropping false results.
    pub fn conj(&self, other: &DepthKSet, fresh: &FreshVars) -> DepthKSet {
        if self.is_empty() || other.is_empty() {
            return DepthKSet::empty(self.k, self.cap);
        }
        match (self.top, other.top) {
            (true, true) => return self.clone(),
            (true, false) => return other.clone(),
            (false, true) => return self.clone(),
            (false, false) => {}
        }
        let mut out = DepthKSet::empty(self.k, self.cap);
        for a in &self.elems {
            for b in &other.elems {
                if let Some(c) = conj_cc(a, b, self.k, fresh) {
                    out.insert(c);
                    if out.top {
                        return out;
                    }
                }
            }
        }
        out
    }

    /// Adds `a = b` to every element.
    pub fn with_eq(&self, a: &Term, b: &Term, fresh: &FreshVars) -> DepthKSet {
        if self.top {
            return DepthKSet::unit(self.k, self.cap).with_eq(a, b, fresh);
        }
        let mut out = DepthKSet::empty(self.k, self.cap);
        for e in &self.elems {
            if let Some(c) = e.with_eq(a, b, self.k, fresh) {
                out.insert(c);
            }
        }
        out
    }

    pub fn project_exists(&self, ys: &BTreeSet<Var>, fresh: &FreshVars) -> DepthKSet {
        if self.top {
            return self.clone();
        }
        DepthKSet::from_elems(
            self.k,
            self.cap,
            self.elems.iter().map(|e| e.project_exists(ys, fresh)),
        )
    }

    pub fn rename(&self, map: &BTreeMap<Var, Term>, fresh: &FreshVars) -> DepthKSet {
        if self.top {
            return self.clone();
        }
        DepthKSet::from_elems(
            self.k,
            self.cap,
            self.elems.iter().filter_map(|e| e.rename(map, self.k, fresh)),
        )
    }
}

impl fmt::Display for DepthKSet {
    /// `top`, or a Prolog list of conjunctions.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.top {
            return f.write_str("top");
        }
        f.write_str("[")?;
        for (i, e) in self.elems.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if e.bindings.len() > 1 {
                write!(f, "({e})")?;
            } else {
                write!(f, "{e}")?;
            }
        }
        f.write_str("]")
    }
}

impl fmt::Debug for DepthKSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
