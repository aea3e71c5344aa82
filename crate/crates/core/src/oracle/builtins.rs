//! Arithmetic, comparison and type-test builtins.

use super::{Machine, OracleError};
use crate::term::{PredKey, Term, Var};

impl Machine<'_> {
    fn eval(&self, t: &Term, ctx: &PredKey) -> Result<i64, OracleError> {
        let overflow = || OracleError::Evaluation(format!("{ctx}: integer overflow"));
        match self.deref(t) {
            Term::Int(n) => Ok(n),
            Term::Var(_) => Err(OracleError::Instantiation(ctx.to_string())),
            Term::Compound(f, args) if args.len() == 1 => {
                let x = self.eval(&args[0], ctx)?;
                match &*f {
                    "-" => x.checked_neg().ok_or_else(overflow),
                    "+" => Ok(x),
                    "abs" => x.checked_abs().ok_or_else(overflow),
                    _ => Err(OracleError::Type(format!("{ctx}: {f}/1 is not evaluable"))),
                }
            }
            Term::Compound(f, args) if args.len() == 2 => {
                let x = self.eval(&args[0], ctx)?;
                let y = self.eval(&args[1], ctx)?;
                let zero = || OracleError::Evaluation(format!("{ctx}: division by zero"));
                match &*f {
                    "+" => x.checked_add(y).ok_or_else(overflow),
                    "-" => x.checked_sub(y).ok_or_else(overflow),
                    "*" => x.checked_mul(y).ok_or_else(overflow),
                    "//" => {
                        if y == 0 {
                            Err(zero())
                        } else {
                            x.checked_div(y).ok_or_else(overflow)
                        }
                    }
                    "/" => {
                        if y == 0 {
                            Err(zero())
                        } else if x % y != 0 {
                            Err(OracleError::Type(format!("{ctx}: {x}/{y} is not an integer")))
                        } else {
                            x.checked_div(y).ok_or_else(overflow)
                        }
                    }
                    "mod" => {
                        if y == 0 {
                            Err(zero())
                        } else {
                            Ok(x.rem_euclid(y) + if y < 0 && x.rem_euclid(y) != 0 { y } else { 0 })
                        }
                    }
                    "rem" => {
                        if y == 0 {
                            Err(zero())
                        } else {
                            x.checked_rem(y).ok_or_else(overflow)
                        }
                    }
                    "min" => Ok(x.min(y)),
                    "max" => Ok(x.max(y)),
                    _ => Err(OracleError::Type(format!("{ctx}: {f}/2 is not evaluable"))),
                }
            }
            other => Err(OracleError::Type(format!("{ctx}: {other} is not evaluable"))),
        }
    }

    /// Unifies and undoes the bindings on failure.
    fn unify_or_undo(&mut self, a: &Term, b: &Term) -> bool {
        let len = self.trail.len();
        let ok = self.unify(a, b);
        if !ok {
            self.undo_to(len);
        }
        ok
    }

    pub(super) fn builtin(&mut self, key: &PredKey, args: &[Term]) -> Result<bool, OracleError> {
        let compare = |m: &Self, f: fn(i64, i64) -> bool| -> Result<bool, OracleError> {
            Ok(f(m.eval(&args[0], key)?, m.eval(&args[1], key)?))
        };
        match (&*key.name, args.len()) {
            ("is", 2) => {
                let v = self.eval(&args[1], key)?;
                Ok(self.unify_or_undo(&args[0], &Term::Int(v)))
            }
            ("=<", 2) => compare(self, |x, y| x <= y),
            ("<", 2) => compare(self, |x, y| x < y),
            (">=", 2) => compare(self, |x, y| x >= y),
            (">", 2) => compare(self, |x, y| x > y),
            ("=:=", 2) => compare(self, |x, y| x == y),
            ("=\\=", 2) => compare(self, |x, y| x != y),
            ("==", 2) => Ok(self.resolve(&args[0]) == self.resolve(&args[1])),
            ("\\==", 2) => Ok(self.resolve(&args[0]) != self.resolve(&args[1])),
            ("\\=", 2) => {
                let len = self.trail.len();
                let unifiable = self.unify(&args[0], &args[1]);
                self.undo_to(len);
                Ok(!unifiable)
            }
            ("var", 1) => Ok(matches!(self.deref(&args[0]), Term::Var(_))),
            ("nonvar", 1) => Ok(!matches!(self.deref(&args[0]), Term::Var(_))),
            ("atom", 1) => Ok(matches!(self.deref(&args[0]), Term::Atom(_))),
            ("atomic", 1) => Ok(matches!(self.deref(&args[0]), Term::Atom(_) | Term::Int(_))),
            ("integer" | "number", 1) => Ok(matches!(self.deref(&args[0]), Term::Int(_))),
            ("functor", 3) => self.functor(key, args),
            _ => Err(OracleError::UnknownPredicate(key.clone())),
        }
    }

    fn functor(&mut self, key: &PredKey, args: &[Term]) -> Result<bool, OracleError> {
        match self.deref(&args[0]) {
            Term::Var(_) => {
                let (name, arity) = (self.deref(&args[1]), self.deref(&args[2]));
                let n = match arity {
                    Term::Int(n) if n >= 0 => n as usize,
                    Term::Var(_) => return Err(OracleError::Instantiation(key.to_string())),
                    other => return Err(OracleError::Type(format!("{key}: arity {other}"))),
                };
                let built = match (name, n) {
                    (Term::Var(_), _) => return Err(OracleError::Instantiation(key.to_string())),
                    (atomic @ (Term::Atom(_) | Term::Int(_)), 0) => atomic,
                    (Term::Atom(a), n) => Term::Compound(
                        a,
                        (0..n)
                            .map(|_| {
                                self.next_id += 1;
                                Term::Var(Var::with_id("_F", self.next_id))
                            })
                            .collect(),
                    ),
                    (other, _) => return Err(OracleError::Type(format!("{key}: name {other}"))),
                };
                Ok(self.unify_or_undo(&args[0], &built))
            }
            t => {
                let (name, arity) = match t {
                    Term::Compound(f, xs) => (Term::Atom(f), xs.len() as i64),
                    atomic => (atomic, 0),
                };
                let len = self.trail.len();
                let ok = self.unify(&args[1], &name) && self.unify(&args[2], &Term::Int(arity));
                if !ok {
                    self.undo_to(len);
                }
                Ok(ok)
            }
        }
    }
}
