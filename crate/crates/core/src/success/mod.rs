//! Abstract success semantics: for every predicate a groundness formula and
//! a depth-k constraint set over its head variables, computed bottom-up as
//! least fixpoints.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::Arc;

use indexmap::IndexMap;
use thiserror::Error;

use crate::depthk::{ConstraintConj, DepthKSet};
use crate::frontend::{builtin_table, BuiltinSuccess};
use crate::normalize::{NormalPredicate, NormalProgram};
use crate::pos::text::{positional_names, render_cnf};
use crate::pos::{Lit, PosFormula, VarId, VarSpace};
use crate::term::{FreshVars, Goal, PredKey, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuccessError {
    #[error("call to unknown predicate {0}")]
    UnknownPredicate(PredKey),
    #[error("cannot analyse a goal containing a cut")]
    Cut,
    #[error("{phase} fixpoint still changing after {limit} passes (last change: {predicate})")]
    IterationLimit {
        phase: &'static str,
        predicate: PredKey,
        limit: usize,
    },
}

/// The variables a formula ranges over while analysing one predicate body or
/// query: head variables first (named by position), then locals.
#[derive(Debug, Clone)]
pub struct Scope {
    space: Arc<VarSpace>,
    vars: Vec<Var>,
    index: BTreeMap<Var, VarId>,
    arity: usize,
}

impl Scope {
    fn build(head: &[Var], rest: impl IntoIterator<Item = Var>) -> Scope {
        let mut vars: Vec<Var> = head.to_vec();
        let mut names = positional_names(head.len());
        let mut index: BTreeMap<Var, VarId> =
            head.iter().enumerate().map(|(i, v)| (v.clone(), VarId(i as u32))).collect();
        for v in rest {
            if !index.contains_key(&v) {
                index.insert(v.clone(), VarId(vars.len() as u32));
                names.push(v.to_string());
                vars.push(v);
            }
        }
        Scope {
            space: VarSpace::new(names),
            vars,
            index,
            arity: head.len(),
        }
    }

    pub fn for_predicate(p: &NormalPredicate) -> Scope {
        let mut locals = Vec::new();
        for g in [&p.g1, &p.g2, &p.g3, &p.g4] {
            g.vars_into(&mut locals);
        }
        Scope::build(&p.head, locals)
    }

    /// Scope of a query: its variables in order of first occurrence, under
    /// their own names.
    pub fn for_goal(g: &Goal) -> Scope {
        let mut vars = Vec::new();
        g.vars_into(&mut vars);
        let mut s = Scope::build(&[], vars);
        s.space = VarSpace::new(s.vars.iter().map(|v| v.to_string()));
        s
    }

    pub fn space(&self) -> &Arc<VarSpace> {
        &self.space
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn id(&self, v: &Var) -> Option<VarId> {
        self.index.get(v).copied()
    }

    fn ids_of(&self, t: &Term) -> Vec<VarId> {
        t.vars().iter().map(|v| self.index[v]).collect()
    }

    /// Variables past the head.
    pub fn locals(&self) -> impl Iterator<Item = VarId> {
        (self.arity as u32..self.vars.len() as u32).map(VarId)
    }

    /// Moves a formula whose support lies within the head into a space of
    /// the head variables alone.
    fn restrict_to_head(&self, f: &PosFormula, head: &Arc<VarSpace>) -> PosFormula {
        f.rename(head, |v| (v.index() < self.arity).then_some(v))
            .expect("support within the head")
    }
}

/// The space over which a predicate's summaries are expressed.
pub fn head_space(arity: usize) -> Arc<VarSpace> {
    VarSpace::new(positional_names(arity))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuccessConfig {
    pub depth_k: usize,
    pub dk_cap: usize,
    pub iteration_limit: usize,
}

impl Default for SuccessConfig {
    fn default() -> Self {
        SuccessConfig {
            depth_k: 3,
            dk_cap: 64,
            iteration_limit: 1000,
        }
    }
}

/// Per-predicate success summaries over the head variables ȳ.
#[derive(Debug, Clone)]
pub struct SuccessEnv {
    pub pos: IndexMap<PredKey, PosFormula>,
    pub dk: IndexMap<PredKey, DepthKSet>,
    heads: IndexMap<PredKey, Vec<Var>>,
    pub config: SuccessConfig,
    /// Sweeps that changed some entry, per fixpoint; the confirming sweep
    /// of each stratum is not counted.
    pub pos_passes: usize,
    pub dk_passes: usize,
}

impl SuccessEnv {
    /// The bottom environment: false and the empty set everywhere.
    pub fn bottom(np: &NormalProgram, config: SuccessConfig) -> SuccessEnv {
        let mut env = SuccessEnv {
            pos: IndexMap::new(),
            dk: IndexMap::new(),
            heads: IndexMap::new(),
            config,
            pos_passes: 0,
            dk_passes: 0,
        };
        for (k, p) in &np.predicates {
            env.pos.insert(k.clone(), PosFormula::bottom(&head_space(k.arity)));
            env.dk.insert(k.clone(), DepthKSet::empty(config.depth_k, config.dk_cap));
            env.heads.insert(k.clone(), p.head.clone());
        }
        env
    }

    fn empty_dk(&self) -> DepthKSet {
        DepthKSet::empty(self.config.depth_k, self.config.dk_cap)
    }

    fn unit_dk(&self) -> DepthKSet {
        DepthKSet::unit(self.config.depth_k, self.config.dk_cap)
    }

    /// One line per predicate with its groundness formula and depth-k set.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for (k, f) in &self.pos {
            let names = positional_names(k.arity).join(",");
            let _ = writeln!(s, "{k}({names}) : {}", render_cnf(f));
            let _ = writeln!(s, "    {}", self.render_dk(k));
        }
        s
    }

    /// The depth-k set of `key` with head variables shown by position.
    pub fn render_dk(&self, key: &PredKey) -> String {
        let set = &self.dk[key];
        let names = positional_names(key.arity);
        let map: BTreeMap<Var, Term> = self.heads[key]
            .iter()
            .zip(&names)
            .map(|(v, n)| (v.clone(), Term::var(&n.to_uppercase())))
            .collect();
        let shown = set.rename(&map, &FreshVars::new());
        shown.to_string()
    }
}

/// Groundness abstraction of `a = b` over its variables: for the most
/// general unifier σ, every bound `v` is ground exactly when all variables
/// of `σ(v)` are. False when the equation has no unifier.
pub fn alpha_equation(a: &Term, b: &Term, scope: &Scope) -> PosFormula {
    let Some(mgu) = ConstraintConj::truth().with_eq(a, b, usize::MAX, &FreshVars::new()) else {
        return PosFormula::bottom(scope.space());
    };
    let mut acc = PosFormula::top(scope.space());
    for (v, t) in mgu.bindings() {
        let link = PosFormula::iff_all(scope.space(), scope.index[v], &scope.ids_of(t));
        acc = acc.conj(&link).expect("one space");
    }
    acc
}

fn builtin_pos(key: &PredKey, args: &[Term], scope: &Scope) -> PosFormula {
    let space = scope.space();
    let Some(info) = builtin_table().get(key) else {
        return PosFormula::top(space);
    };
    match &info.success {
        BuiltinSuccess::AllGround => PosFormula::all(space, args.iter().flat_map(|a| scope.ids_of(a))),
        BuiltinSuccess::ArgsGround(positions) => {
            PosFormula::all(space, positions.iter().flat_map(|&i| scope.ids_of(&args[i])))
        }
        BuiltinSuccess::SameGroundness => {
            let (l, r) = (scope.ids_of(&args[0]), scope.ids_of(&args[1]));
            let mut clauses = Vec::new();
            for (from, to) in [(&l, &r), (&r, &l)] {
                for &t in to {
                    let mut c: Vec<Lit> = from.iter().map(|&v| Lit::neg(v)).collect();
                    c.push(Lit::pos(t));
                    clauses.push(c);
                }
            }
            PosFormula::from_clauses(space, clauses)
        }
        BuiltinSuccess::Unconstrained => PosFormula::top(space),
    }
}

/// Abstract success of a cut-free goal over `scope`.
pub fn sg_pos(g: &Goal, scope: &Scope, env: &SuccessEnv) -> Result<PosFormula, SuccessError> {
    let space = scope.space();
    Ok(match g {
        Goal::True => PosFormula::top(space),
        Goal::Fail => PosFormula::bottom(space),
        Goal::Post(a, b) => alpha_equation(a, b, scope),
        Goal::Builtin(k, args) => builtin_pos(k, args, scope),
        Goal::Call(k, args) => {
            let callee = env.pos.get(k).ok_or_else(|| SuccessError::UnknownPredicate(k.clone()))?;
            // summaries already range over ȳ only, so this is the renaming
            callee.compose(space, |y| scope.ids_of(&args[y.index()]))
        }
        Goal::Conj(l, r) => sg_pos(l, scope, env)?
            .conj(&sg_pos(r, scope, env)?)
            .expect("one space"),
        Goal::Disj(l, r) => sg_pos(l, scope, env)?
            .disj(&sg_pos(r, scope, env)?)
            .expect("one space"),
        Goal::Cut => return Err(SuccessError::Cut),
    })
}

/// Success of the three alternatives of `p` over the body scope, before
/// projection.
fn branches_pos(p: &NormalPredicate, scope: &Scope, env: &SuccessEnv) -> Result<PosFormula, SuccessError> {
    let g1 = sg_pos(&p.g1, scope, env)?;
    let g23 = sg_pos(&Goal::conj(p.g2.clone(), p.g3.clone()), scope, env)?;
    let g4 = sg_pos(&p.g4, scope, env)?;
    Ok(g1.disj(&g23).and_then(|f| f.disj(&g4)).expect("one space"))
}

/// One application of the predicate transformer: the success formula of
/// `p` over its head variables under `env`.
pub fn sh_pos(p: &NormalPredicate, env: &SuccessEnv) -> Result<PosFormula, SuccessError> {
    let scope = Scope::for_predicate(p);
    let body = branches_pos(p, &scope, env)?;
    let projected = body.exists_elim_all(scope.locals()).to_pos_bottom();
    Ok(scope.restrict_to_head(&projected, &head_space(p.key.arity)))
}

/// Depth-k success set of a cut-free goal.
pub fn sg_dk(g: &Goal, env: &SuccessEnv, fresh: &FreshVars) -> Result<DepthKSet, SuccessError> {
    Ok(match g {
        Goal::True | Goal::Builtin(..) => env.unit_dk(),
        Goal::Fail => env.empty_dk(),
        Goal::Post(a, b) => env.unit_dk().with_eq(a, b, fresh),
        Goal::Call(k, args) => {
            let callee = env.dk.get(k).ok_or_else(|| SuccessError::UnknownPredicate(k.clone()))?;
            let map: BTreeMap<Var, Term> = env.heads[k].iter().cloned().zip(args.iter().cloned()).collect();
            callee.rename(&map, fresh)
        }
        Goal::Conj(l, r) => sg_dk(l, env, fresh)?.conj(&sg_dk(r, env, fresh)?, fresh),
        Goal::Disj(l, r) => sg_dk(l, env, fresh)?.union(&sg_dk(r, env, fresh)?),
        Goal::Cut => return Err(SuccessError::Cut),
    })
}

/// Depth-k analogue of [`sh_pos`]: the union of the alternatives projected
/// onto the head variables.
pub fn sh_dk(p: &NormalPredicate, env: &SuccessEnv, fresh: &FreshVars) -> Result<DepthKSet, SuccessError> {
    let g1 = sg_dk(&p.g1, env, fresh)?;
    let g23 = sg_dk(&Goal::conj(p.g2.clone(), p.g3.clone()), env, fresh)?;
    let g4 = sg_dk(&p.g4, env, fresh)?;
    let ys: BTreeSet<Var> = p.head.iter().cloned().collect();
    // projecting each branch first keeps the unions small enough to stay
    // under the cap
    let [g1, g23, g4] = [g1, g23, g4].map(|s| s.project_exists(&ys, fresh));
    Ok(g1.union(&g23).union(&g4))
}

/// Runs `step` stratum by stratum, sweeping each stratum's predicates in
/// program order and updating in place until a sweep changes nothing.
/// `limit` bounds the sweeps per stratum.
fn iterate<T: Clone>(
    np: &NormalProgram,
    limit: usize,
    phase: &'static str,
    env: &mut SuccessEnv,
    get: impl Fn(&SuccessEnv, &PredKey) -> T,
    set: impl Fn(&mut SuccessEnv, &PredKey, T),
    mut step: impl FnMut(&NormalPredicate, &SuccessEnv) -> Result<T, SuccessError>,
    join: impl Fn(&T, &T) -> T,
    same: impl Fn(&T, &T) -> bool,
) -> Result<usize, SuccessError> {
    let mut passes = 0;
    for layer in &np.strata.layers {
        let mut sweeps = 0;
        loop {
            sweeps += 1;
            let mut changed = None;
            for key in layer {
                let old = get(env, key);
                // joining keeps the sequence ascending even where a
                // transformer is only monotone up to equivalence
                let new = join(&old, &step(&np.predicates[key], env)?);
                if !same(&old, &new) {
                    set(env, key, new);
                    changed = Some(key.clone());
                }
            }
            match changed {
                None => break,
                Some(predicate) if sweeps >= limit => {
                    return Err(SuccessError::IterationLimit { phase, predicate, limit });
                }
                Some(_) => passes += 1,
            }
        }
    }
    Ok(passes)
}

/// Least fixpoint of the groundness transformer from the bottom
/// environment; convergence is tested by logical equivalence.
pub fn lfp_pos(np: &NormalProgram, env: &mut SuccessEnv) -> Result<(), SuccessError> {
    let limit = env.config.iteration_limit;
    env.pos_passes = iterate(
        np,
        limit,
        "groundness",
        env,
        |e, k| e.pos[k].clone(),
        |e, k, f| {
            e.pos.insert(k.clone(), f);
        },
        |p, e| sh_pos(p, e),
        |a, b| a.disj(b).expect("one space"),
        |a, b| a == b || a.equiv(b).expect("one space"),
    )?;
    Ok(())
}

/// Least fixpoint of the depth-k transformer; sets are capped, so this
/// terminates.
pub fn lfp_dk(np: &NormalProgram, env: &mut SuccessEnv, fresh: &FreshVars) -> Result<(), SuccessError> {
    let limit = env.config.iteration_limit;
    env.dk_passes = iterate(
        np,
        limit,
        "depth-k",
        env,
        |e, k| e.dk[k].clone(),
        |e, k, s| {
            e.dk.insert(k.clone(), s);
        },
        |p, e| sh_dk(p, e, fresh),
        |a, b| a.union(b),
        |a, b| a == b,
    )?;
    Ok(())
}

/// Both success fixpoints.
pub fn lfp_success(np: &NormalProgram, config: SuccessConfig, fresh: &FreshVars) -> Result<SuccessEnv, SuccessError> {
    let mut env = SuccessEnv::bottom(np, config);
    lfp_pos(np, &mut env)?;
    lfp_dk(np, &mut env, fresh)?;
    Ok(env)
}

#[cfg(test)]
mod tests;
