//! Backwards determinacy inference: the greatest fixpoint of the abstract
//! determinacy transformer, giving each predicate a groundness condition on
//! its arguments under which it succeeds at most once.

use std::collections::BTreeSet;
use std::sync::Arc;

use indexmap::IndexMap;
use thiserror::Error;

use crate::depthk::abstract_mux;
use crate::normalize::{NormalPredicate, NormalProgram};
use crate::pos::{PosFormula, VarSpace};
use crate::success::{head_space, sg_dk, sg_pos, Scope, SuccessEnv, SuccessError};
use crate::term::{FreshVars, Goal, PredKey};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetError {
    #[error(transparent)]
    Success(#[from] SuccessError),
    #[error("call to unknown predicate {0}")]
    UnknownPredicate(PredKey),
    #[error("cannot infer a condition for a goal containing a disjunction")]
    Disjunction,
    #[error("determinacy fixpoint still changing after {limit} passes (last change: {predicate})")]
    IterationLimit { predicate: PredKey, limit: usize },
    #[error("determinacy iteration rose at {0}; the transformer is not monotone")]
    NotDescending(PredKey),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetConfig {
    /// Largest separating variable set tried by the mux synthesis.
    pub max_subset: usize,
    pub iteration_limit: usize,
    /// Evaluate each sweep against the previous sweep's environment instead
    /// of updating in place.
    pub jacobi: bool,
}

impl Default for DetConfig {
    fn default() -> Self {
        DetConfig {
            max_subset: 4,
            iteration_limit: 1000,
            jacobi: false,
        }
    }
}

/// The two mutual-exclusion requirements of a predicate, over its head.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuxPair {
    /// First alternative against the last.
    pub f1: PosFormula,
    /// First alternative against the guarded one.
    pub f2: PosFormula,
}

/// `f1` and `f2` for one predicate. They depend only on the success sets,
/// so they are computed once, before the fixpoint.
pub fn mux_pair(p: &NormalPredicate, senv: &SuccessEnv, max_subset: usize, fresh: &FreshVars) -> Result<MuxPair, DetError> {
    let space = head_space(p.key.arity);
    let s1 = sg_dk(&p.g1, senv, fresh)?;
    let s4 = sg_dk(&p.g4, senv, fresh)?;
    let s23 = sg_dk(&Goal::conj(p.g2.clone(), p.g3.clone()), senv, fresh)?;
    Ok(MuxPair {
        f1: abstract_mux(&s1, &s4, &p.head, &space, max_subset, fresh),
        f2: abstract_mux(&s1, &s23, &p.head, &space, max_subset, fresh),
    })
}

pub fn mux_table(
    np: &NormalProgram,
    senv: &SuccessEnv,
    max_subset: usize,
    fresh: &FreshVars,
) -> Result<IndexMap<PredKey, MuxPair>, DetError> {
    np.predicates
        .iter()
        .map(|(k, p)| Ok((k.clone(), mux_pair(p, senv, max_subset, fresh)?)))
        .collect()
}

/// Determinacy conditions over each predicate's head variables.
#[derive(Debug, Clone)]
pub struct DetEnv {
    pub conds: IndexMap<PredKey, PosFormula>,
    /// Entries consulted by each predicate's transformer in its last
    /// evaluation.
    pub reads: IndexMap<PredKey, BTreeSet<PredKey>>,
    /// Sweeps that changed some entry.
    pub passes: usize,
}

impl DetEnv {
    /// `true` for every predicate.
    pub fn top(np: &NormalProgram) -> DetEnv {
        DetEnv {
            conds: np
                .predicates
                .keys()
                .map(|k| (k.clone(), PosFormula::top(&head_space(k.arity))))
                .collect(),
            reads: IndexMap::new(),
            passes: 0,
        }
    }
}

fn dg_traced(
    g: &Goal,
    scope: &Scope,
    conds: &IndexMap<PredKey, PosFormula>,
    senv: &SuccessEnv,
    trace: &mut BTreeSet<PredKey>,
) -> Result<PosFormula, DetError> {
    let space = scope.space();
    Ok(match g {
        Goal::True | Goal::Fail | Goal::Post(..) | Goal::Builtin(..) => PosFormula::top(space),
        Goal::Call(k, args) => {
            let cond = conds.get(k).ok_or_else(|| DetError::UnknownPredicate(k.clone()))?;
            trace.insert(k.clone());
            // conditions range over ȳ alone, so the projection is the identity
            cond.compose(space, |y| {
                args[y.index()]
                    .vars()
                    .iter()
                    .map(|v| scope.id(v).expect("argument variables are in scope"))
                    .collect()
            })
        }
        Goal::Conj(l, r) => {
            let (sl, sr) = (sg_pos(l, scope, senv)?, sg_pos(r, scope, senv)?);
            let dl = dg_traced(l, scope, conds, senv, trace)?;
            let dr = dg_traced(r, scope, conds, senv, trace)?;
            let a = sr.implies(&dl).expect("one space");
            let b = sl.implies(&dr).expect("one space");
            a.conj(&b).expect("one space")
        }
        Goal::Disj(..) => return Err(DetError::Disjunction),
        Goal::Cut => return Err(SuccessError::Cut.into()),
    })
}

/// Determinacy condition of a cut-free, disjunction-free goal over `scope`,
/// before normalisation to the positive fragment.
pub fn dg(g: &Goal, scope: &Scope, env: &DetEnv, senv: &SuccessEnv) -> Result<PosFormula, DetError> {
    dg_traced(g, scope, &env.conds, senv, &mut BTreeSet::new())
}

fn dh_traced(
    p: &NormalPredicate,
    mux: &MuxPair,
    conds: &IndexMap<PredKey, PosFormula>,
    senv: &SuccessEnv,
    trace: &mut BTreeSet<PredKey>,
) -> Result<PosFormula, DetError> {
    let scope = Scope::for_predicate(p);
    let space = scope.space();
    let lift = |f: &PosFormula| f.rename(space, Some).expect("head variables come first");
    let d1 = dg_traced(&p.g1, &scope, conds, senv, trace)?;
    let s2 = sg_pos(&p.g2, &scope, senv)?;
    let d3 = dg_traced(&p.g3, &scope, conds, senv, trace)?;
    let d4 = dg_traced(&p.g4, &scope, conds, senv, trace)?;
    let body = [s2.implies(&d3).expect("one space"), d4, lift(&mux.f1), lift(&mux.f2)]
        .iter()
        .try_fold(d1, |acc, f| acc.conj(f))
        .expect("one space");
    let projected = body.forall_elim_all(scope.locals()).to_pos_bottom();
    let head: Arc<VarSpace> = head_space(p.key.arity);
    Ok(projected
        .rename(&head, |v| (v.index() < scope.arity()).then_some(v))
        .expect("support within the head"))
}

/// One application of the predicate transformer under `env`.
pub fn dh(p: &NormalPredicate, mux: &MuxPair, env: &DetEnv, senv: &SuccessEnv) -> Result<PosFormula, DetError> {
    dh_traced(p, mux, &env.conds, senv, &mut BTreeSet::new())
}

/// Greatest fixpoint from `true` everywhere, stratum by stratum. Each new
/// entry must entail the one it replaces.
pub fn gfp_det(
    np: &NormalProgram,
    senv: &SuccessEnv,
    mux: &IndexMap<PredKey, MuxPair>,
    config: DetConfig,
) -> Result<DetEnv, DetError> {
    let mut env = DetEnv::top(np);
    for layer in &np.strata.layers {
        let mut sweeps = 0;
        loop {
            sweeps += 1;
            let snapshot = config.jacobi.then(|| env.conds.clone());
            let mut changed = None;
            for key in layer {
                let mut trace = BTreeSet::new();
                let conds = snapshot.as_ref().unwrap_or(&env.conds);
                let new = dh_traced(&np.predicates[key], &mux[key], conds, senv, &mut trace)?;
                env.reads.insert(key.clone(), trace);
                let old = &env.conds[key];
                if new == *old || new.equiv(old).expect("one space") {
                    continue;
                }
                if !new.entails(old).expect("one space") {
                    return Err(DetError::NotDescending(key.clone()));
                }
                env.conds.insert(key.clone(), new);
                changed = Some(key.clone());
            }
            match changed {
                None => break,
                Some(predicate) if sweeps >= config.iteration_limit => {
                    return Err(DetError::IterationLimit {
                        predicate,
                        limit: config.iteration_limit,
                    });
                }
                Some(_) => env.passes += 1,
            }
        }
    }
    Ok(env)
}

/// Condition under which a query succeeds at most once, over the query's
/// own variables.
pub fn goal_condition(goal: &Goal, env: &DetEnv, senv: &SuccessEnv) -> Result<(Scope, PosFormula), DetError> {
    let scope = Scope::for_goal(goal);
    let f = dg(goal, &scope, env, senv)?.to_pos_bottom();
    Ok((scope, f))
}

#[cfg(test)]
mod tests;
