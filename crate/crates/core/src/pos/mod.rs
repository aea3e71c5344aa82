//! Positive Boolean functions extended with an explicit false, kept in CNF.

mod implicants;
mod sat;
pub mod text;

pub use sat::{sat, SatResult};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use implicants::{complement_implicants, Item};
use sat::Solver;

/// Index of a variable inside a [`VarSpace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A signed variable, ordered by variable first, positive before negative.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn pos(v: VarId) -> Lit {
        Lit(v.0 << 1)
    }

    pub fn neg(v: VarId) -> Lit {
        Lit(v.0 << 1 | 1)
    }

    pub fn var(self) -> VarId {
        VarId(self.0 >> 1)
    }

    pub fn is_neg(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn negate(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.is_neg() { "~" } else { "" }, self.var().0)
    }
}

/// The finite, named variable vector a formula ranges over.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarSpace {
    names: Vec<String>,
}

impl VarSpace {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Arc<VarSpace> {
        Arc::new(VarSpace {
            names: names.into_iter().map(Into::into).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.names[v.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| VarId(i as u32))
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> {
        (0..self.names.len() as u32).map(VarId)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosError {
    #[error("formulas range over different variable spaces")]
    SpaceMismatch,
    #[error("renaming maps two support variables onto {0}")]
    NonInjective(String),
    #[error("renaming leaves support variable {0} unmapped")]
    Unmapped(String),
}

/// A CNF formula. Invariants: clauses sorted and duplicate-free, literals
/// sorted, no tautologies, no subsumed clauses, and any unsatisfiable clause
/// set is replaced by the explicit bottom.
#[derive(Clone)]
pub struct PosFormula {
    space: Arc<VarSpace>,
    clauses: Vec<Vec<Lit>>,
    bottom: bool,
}

impl PartialEq for PosFormula {
    /// Syntactic equality; use [`PosFormula::equiv`] for logical equality.
    fn eq(&self, other: &Self) -> bool {
        self.bottom == other.bottom && self.clauses == other.clauses && *self.space == *other.space
    }
}

impl Eq for PosFormula {}

fn same_space(a: &Arc<VarSpace>, b: &Arc<VarSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PosFormula {
    pub fn top(space: &Arc<VarSpace>) -> PosFormula {
        PosFormula {
            space: space.clone(),
            clauses: Vec::new(),
            bottom: false,
        }
    }

    pub fn bottom(space: &Arc<VarSpace>) -> PosFormula {
        PosFormula {
            space: space.clone(),
            clauses: Vec::new(),
            bottom: true,
        }
    }

    pub fn var(space: &Arc<VarSpace>, v: VarId) -> PosFormula {
        PosFormula::from_clauses(space, vec![vec![Lit::pos(v)]])
    }

    /// Conjunction of the given variables.
    pub fn all(space: &Arc<VarSpace>, vars: impl IntoIterator<Item = VarId>) -> PosFormula {
        PosFormula::from_clauses(space, vars.into_iter().map(|v| vec![Lit::pos(v)]).collect())
    }

    /// `v ↔ ⋀ws`; with no `ws` this is just `v`.
    pub fn iff_all(space: &Arc<VarSpace>, v: VarId, ws: &[VarId]) -> PosFormula {
        let mut clauses: Vec<Vec<Lit>> = ws.iter().map(|&w| vec![Lit::neg(v), Lit::pos(w)]).collect();
        let mut back = vec![Lit::pos(v)];
        back.extend(ws.iter().map(|&w| Lit::neg(w)));
        clauses.push(back);
        PosFormula::from_clauses(space, clauses)
    }

    /// Normalises an arbitrary clause list.
    pub fn from_clauses(space: &Arc<VarSpace>, clauses: Vec<Vec<Lit>>) -> PosFormula {
        let mut out: Vec<Vec<Lit>> = Vec::with_capacity(clauses.len());
        for mut c in clauses {
            c.sort();
            c.dedup();
            if c.windows(2).any(|w| w[0].var() == w[1].var()) {
                continue;
            }
            if c.is_empty() {
                return PosFormula::bottom(space);
            }
            out.push(c);
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out.dedup();
        let mut kept: Vec<Vec<Lit>> = Vec::with_capacity(out.len());
        for c in out {
            // shorter clauses come first, so only earlier ones can subsume
            if !kept.iter().any(|k| k.iter().all(|l| c.binary_search(l).is_ok())) {
                kept.push(c);
            }
        }
        kept.sort();
        let needs_check = kept.iter().any(|c| c.iter().all(|l| l.is_neg()));
        if needs_check && !sat(space.len(), &kept).satisfiable {
            return PosFormula::bottom(space);
        }
        PosFormula {
            space: space.clone(),
            clauses: kept,
            bottom: false,
        }
    }

    pub fn space(&self) -> &Arc<VarSpace> {
        &self.space
    }

    /// Clause list; empty for both true and bottom, so check [`Self::is_bottom`].
    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn is_bottom(&self) -> bool {
        self.bottom
    }

    pub fn is_top(&self) -> bool {
        !self.bottom && self.clauses.is_empty()
    }

    /// Clauses with bottom spelled as the empty clause.
    fn raw(&self) -> Vec<Vec<Lit>> {
        if self.bottom {
            vec![Vec::new()]
        } else {
            self.clauses.clone()
        }
    }

    fn check(&self, other: &PosFormula) -> Result<(), PosError> {
        if same_space(&self.space, &other.space) {
            Ok(())
        } else {
            Err(PosError::SpaceMismatch)
        }
    }

    /// Variables that occur in some clause.
    pub fn support(&self) -> Vec<VarId> {
        let mut vs: Vec<VarId> = self.clauses.iter().flatten().map(|l| l.var()).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// Evaluates under a total assignment indexed by `VarId`.
    pub fn eval(&self, assignment: &[bool]) -> bool {
        !self.bottom
            && self
                .clauses
                .iter()
                .all(|c| c.iter().any(|l| assignment[l.var().index()] != l.is_neg()))
    }

    /// True iff the formula holds when every variable is true.
    pub fn is_positive(&self) -> bool {
        !self.bottom && self.clauses.iter().all(|c| c.iter().any(|l| !l.is_neg()))
    }

    /// Maps anything outside the positive fragment to bottom. The two are
    /// equivalent as groundness descriptions: no instantiation can make a
    /// non-positive function's models all ground.
    pub fn to_pos_bottom(&self) -> PosFormula {
        if self.bottom || self.is_positive() {
            self.clone()
        } else {
            PosFormula::bottom(&self.space)
        }
    }

    pub fn sat(&self) -> SatResult {
        sat(self.space.len(), &self.raw())
    }

    pub fn conj(&self, other: &PosFormula) -> Result<PosFormula, PosError> {
        self.check(other)?;
        if self.bottom || other.bottom {
            return Ok(PosFormula::bottom(&self.space));
        }
        let mut cs = self.clauses.clone();
        cs.extend(other.clauses.iter().cloned());
        Ok(PosFormula::from_clauses(&self.space, cs))
    }

    fn from_complement(space: &Arc<VarSpace>, items: &[Item]) -> PosFormula {
        let cubes = complement_implicants(space.len(), items);
        PosFormula::from_clauses(
            space,
            cubes
                .into_iter()
                .map(|cube| cube.into_iter().map(Lit::negate).collect())
                .collect(),
        )
    }

    pub fn disj(&self, other: &PosFormula) -> Result<PosFormula, PosError> {
        self.check(other)?;
        if self.bottom || other.is_top() {
            return Ok(other.clone());
        }
        if other.bottom || self.is_top() {
            return Ok(self.clone());
        }
        Ok(PosFormula::from_complement(
            &self.space,
            &[Item::Pos(&self.clauses), Item::Pos(&other.clauses)],
        ))
    }

    /// Material implication. The result may fall outside the positive fragment.
    pub fn implies(&self, other: &PosFormula) -> Result<PosFormula, PosError> {
        self.check(other)?;
        if self.bottom || other.is_top() {
            return Ok(PosFormula::top(&self.space));
        }
        if self.is_top() {
            return Ok(other.clone());
        }
        let neg = self.raw();
        let pos = other.raw();
        Ok(PosFormula::from_complement(
            &self.space,
            &[Item::Neg(&neg), Item::Pos(&pos)],
        ))
    }

    /// Shannon cofactor `f[x := value]`, still over the same space.
    pub fn cofactor(&self, x: VarId, value: bool) -> PosFormula {
        if self.bottom {
            return self.clone();
        }
        let sat_lit = if value { Lit::pos(x) } else { Lit::neg(x) };
        let clauses = self
            .clauses
            .iter()
            .filter(|c| !c.contains(&sat_lit))
            .map(|c| c.iter().copied().filter(|l| l.var() != x).collect())
            .collect();
        PosFormula::from_clauses(&self.space, clauses)
    }

    pub fn exists_elim(&self, x: VarId) -> PosFormula {
        if !self.clauses.iter().flatten().any(|l| l.var() == x) {
            return self.clone();
        }
        self.cofactor(x, true)
            .disj(&self.cofactor(x, false))
            .expect("cofactors share a space")
    }

    pub fn forall_elim(&self, x: VarId) -> PosFormula {
        if !self.clauses.iter().flatten().any(|l| l.var() == x) {
            return self.clone();
        }
        self.cofactor(x, true)
            .conj(&self.cofactor(x, false))
            .expect("cofactors share a space")
    }

    pub fn exists_elim_all(&self, xs: impl IntoIterator<Item = VarId>) -> PosFormula {
        xs.into_iter().fold(self.clone(), |f, x| f.exists_elim(x))
    }

    pub fn forall_elim_all(&self, xs: impl IntoIterator<Item = VarId>) -> PosFormula {
        xs.into_iter().fold(self.clone(), |f, x| f.forall_elim(x))
    }

    /// Moves the formula into `target`, mapping each support variable with
    /// `map`. The map must be injective on the support.
    pub fn rename(
        &self,
        target: &Arc<VarSpace>,
        map: impl Fn(VarId) -> Option<VarId>,
    ) -> Result<PosFormula, PosError> {
        let support = self.support();
        let mut image: Vec<(VarId, VarId)> = Vec::with_capacity(support.len());
        for v in support {
            let w = map(v).ok_or_else(|| PosError::Unmapped(self.space.name(v).to_string()))?;
            if image.iter().any(|&(_, u)| u == w) {
                return Err(PosError::NonInjective(target.name(w).to_string()));
            }
            image.push((v, w));
        }
        if self.bottom {
            return Ok(PosFormula::bottom(target));
        }
        let lookup = |v: VarId| image.iter().find(|&&(s, _)| s == v).unwrap().1;
        let clauses = self
            .clauses
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&l| {
                        let w = lookup(l.var());
                        if l.is_neg() {
                            Lit::neg(w)
                        } else {
                            Lit::pos(w)
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(PosFormula::from_clauses(target, clauses))
    }

    /// Substitutes for every support variable `v` the conjunction of
    /// `map(v)` (true when empty), producing a formula over `target`.
    /// Unlike [`Self::rename`] the map may merge variables.
    pub fn compose(&self, target: &Arc<VarSpace>, map: impl Fn(VarId) -> Vec<VarId>) -> PosFormula {
        if self.bottom {
            return PosFormula::bottom(target);
        }
        let images: BTreeMap<VarId, Vec<VarId>> = self.support().into_iter().map(|v| (v, map(v))).collect();
        let mut out: Vec<Vec<Lit>> = Vec::new();
        'clause: for c in &self.clauses {
            let mut base: Vec<Lit> = Vec::new();
            let mut choices: Vec<&[VarId]> = Vec::new();
            for l in c {
                let vs = &images[&l.var()];
                if l.is_neg() {
                    base.extend(vs.iter().map(|&v| Lit::neg(v)));
                } else if vs.is_empty() {
                    continue 'clause;
                } else {
                    choices.push(vs);
                }
            }
            // a positive literal standing for a conjunction distributes
            let mut acc = vec![base];
            for vs in choices {
                acc = acc
                    .iter()
                    .flat_map(|b| {
                        vs.iter().map(move |&v| {
                            let mut b = b.clone();
                            b.push(Lit::pos(v));
                            b
                        })
                    })
                    .collect();
            }
            out.extend(acc);
        }
        PosFormula::from_clauses(target, out)
    }

    pub fn entails(&self, other: &PosFormula) -> Result<bool, PosError> {
        self.check(other)?;
        if self.bottom || other.is_top() {
            return Ok(true);
        }
        if other.bottom {
            return Ok(!self.sat().satisfiable);
        }
        let mut s = Solver::new(self.space.len());
        s.add_clauses(self.clauses.iter());
        for c in &other.clauses {
            let assume: Vec<Lit> = c.iter().map(|l| l.negate()).collect();
            if s.solve(&assume).is_some() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equiv(&self, other: &PosFormula) -> Result<bool, PosError> {
        if self == other {
            return Ok(true);
        }
        Ok(self.entails(other)? && other.entails(self)?)
    }

    /// Prime implicants, sorted; `[[]]` for true and `[]` for bottom.
    pub fn prime_implicants(&self) -> Vec<Vec<Lit>> {
        if self.bottom {
            return Vec::new();
        }
        let mut cubes = complement_implicants(self.space.len(), &[Item::Neg(&self.clauses)]);
        cubes.sort();
        cubes
    }

    /// Prime implicates, sorted; a canonical CNF for the function.
    pub fn prime_implicates(&self) -> Vec<Vec<Lit>> {
        if self.bottom {
            return vec![Vec::new()];
        }
        let mut cs: Vec<Vec<Lit>> = complement_implicants(self.space.len(), &[Item::Pos(&self.clauses)])
            .into_iter()
            .map(|cube| cube.into_iter().map(Lit::negate).collect())
            .collect();
        cs.iter_mut().for_each(|c| c.sort());
        cs.sort();
        cs
    }

    /// The same function with its clause list replaced by the prime implicates.
    pub fn simplified(&self) -> PosFormula {
        if self.bottom {
            return self.clone();
        }
        PosFormula::from_clauses(&self.space, self.prime_implicates())
    }

    /// Disjunction of cubes.
    pub fn from_cubes(space: &Arc<VarSpace>, cubes: &[Vec<Lit>]) -> PosFormula {
        if cubes.is_empty() {
            return PosFormula::bottom(space);
        }
        let cnfs: Vec<Vec<Vec<Lit>>> = cubes
            .iter()
            .map(|cube| cube.iter().map(|&l| vec![l]).collect())
            .collect();
        let items: Vec<Item> = cnfs.iter().map(|c| Item::Pos(c)).collect();
        PosFormula::from_complement(space, &items)
    }
}

/// Abstraction of one atomic constraint that grounds exactly `fixed` within
/// `scope`: `(⋀fixed ∧ ¬⋁(scope∖fixed)) ∨ ⋀scope`.
pub fn alpha_atomic(space: &Arc<VarSpace>, scope: &[VarId], fixed: &[VarId]) -> PosFormula {
    let all = PosFormula::all(space, scope.iter().copied());
    let mut exact: Vec<Vec<Lit>> = Vec::with_capacity(scope.len());
    for &v in scope {
        exact.push(vec![if fixed.contains(&v) {
            Lit::pos(v)
        } else {
            Lit::neg(v)
        }]);
    }
    PosFormula::from_clauses(space, exact)
        .disj(&all)
        .expect("same space")
}

impl fmt::Display for PosFormula {
    /// Byte-stable debug form: `[[A,~B],[C]]`; bottom prints as `[[]]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.raw().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for (j, l) in c.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                if l.is_neg() {
                    f.write_str("~")?;
                }
                f.write_str(self.space.name(l.var()))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for PosFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
