//! Prolog front end: parsing, printing, disjunction expansion and the
//! builtin table.

mod builtins;
mod expand;
mod lexer;
mod parser;
pub mod print;

pub use builtins::{builtin_table, is_builtin, BuiltinInfo, BuiltinSuccess};
pub use expand::expand_disjunctions;
pub(crate) use expand::next_aux_index;

use std::collections::HashSet;
use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use crate::term::{Clause, Goal, PredKey, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unsupported construct `{construct}` at {line}:{col}")]
    Unsupported {
        construct: String,
        line: usize,
        col: usize,
    },
    #[error("call to undefined predicate {pred} in clause for {caller}")]
    Undefined { pred: PredKey, caller: PredKey },
    #[error("cannot redefine builtin {pred} at {line}:{col}")]
    BuiltinRedefinition { pred: PredKey, line: usize, col: usize },
    #[error("cut inside a disjunction in a clause for {pred}")]
    CutInDisjunction { pred: PredKey },
}

/// A parsed program: clauses in source order plus a predicate index.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Program {
    pub clauses: Vec<Clause>,
    index: IndexMap<PredKey, Vec<usize>>,
}

impl Program {
    pub fn from_clauses(clauses: Vec<Clause>) -> Program {
        let mut index: IndexMap<PredKey, Vec<usize>> = IndexMap::new();
        for (i, c) in clauses.iter().enumerate() {
            index.entry(c.key.clone()).or_default().push(i);
        }
        Program { clauses, index }
    }

    /// Predicates in order of first definition.
    pub fn predicates(&self) -> impl Iterator<Item = &PredKey> {
        self.index.keys()
    }

    pub fn clauses_of(&self, key: &PredKey) -> impl Iterator<Item = &Clause> {
        self.index
            .get(key)
            .into_iter()
            .flatten()
            .map(move |&i| &self.clauses[i])
    }

    pub fn defines(&self, key: &PredKey) -> bool {
        self.index.contains_key(key)
    }

    pub fn predicate_count(&self) -> usize {
        self.index.len()
    }

    /// Every call must target a defined predicate.
    pub fn check_calls(&self) -> Result<(), FrontendError> {
        for c in &self.clauses {
            for k in c.body.calls() {
                if !self.defines(k) {
                    return Err(FrontendError::Undefined {
                        pred: k.clone(),
                        caller: c.key.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Source text that parses back to this program.
    pub fn to_source(&self) -> String {
        let mut s = String::new();
        let mut last: Option<&PredKey> = None;
        for c in &self.clauses {
            if last.is_some() && last != Some(&c.key) {
                s.push('\n');
            }
            s.push_str(&print::clause_to_string(c));
            s.push('\n');
            last = Some(&c.key);
        }
        s
    }
}

impl fmt::Debug for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_source())
    }
}

const UNSUPPORTED_GOALS: &[&str] = &[
    "assert", "asserta", "assertz", "retract", "call", "findall", "bagof", "setof", "not",
    "catch", "throw",
];

fn term_to_goal(t: &Term, line: usize, col: usize) -> Result<Goal, FrontendError> {
    let unsupported = |construct: &str| FrontendError::Unsupported {
        construct: construct.to_string(),
        line,
        col,
    };
    let (name, args): (&str, &[Term]) = match t {
        Term::Var(_) => return Err(unsupported("variable goal")),
        Term::Int(_) => {
            return Err(FrontendError::Syntax {
                line,
                col,
                msg: "an integer is not a goal".into(),
            })
        }
        Term::Atom(a) => (a, &[]),
        Term::Compound(f, args) => (f, args),
    };
    Ok(match (name, args.len()) {
        (",", 2) => Goal::conj(
            term_to_goal(&args[0], line, col)?,
            term_to_goal(&args[1], line, col)?,
        ),
        (";", 2) => {
            if matches!(&args[0], Term::Compound(f, a) if &**f == "->" && a.len() == 2) {
                return Err(unsupported("->"));
            }
            Goal::disj(
                term_to_goal(&args[0], line, col)?,
                term_to_goal(&args[1], line, col)?,
            )
        }
        ("->", 2) => return Err(unsupported("->")),
        ("\\+", 1) => return Err(unsupported("\\+")),
        (":-", _) => return Err(unsupported(":-")),
        ("!", 0) => Goal::Cut,
        ("true", 0) => Goal::True,
        ("fail", 0) | ("false", 0) => Goal::Fail,
        ("=", 2) => Goal::Post(args[0].clone(), args[1].clone()),
        ("{}", 1) => term_to_goal(&args[0], line, col)?,
        (n, arity) if UNSUPPORTED_GOALS.contains(&n) => {
            return Err(unsupported(&format!("{n}/{arity}")))
        }
        (n, arity) => {
            let key = PredKey::new(n, arity);
            if is_builtin(&key) {
                Goal::Builtin(key, args.to_vec())
            } else {
                Goal::Call(key, args.to_vec())
            }
        }
    })
}

fn head_of(t: &Term, line: usize, col: usize) -> Result<(PredKey, Vec<Term>), FrontendError> {
    let (key, args) = match t {
        Term::Atom(a) => (PredKey::new(a, 0), Vec::new()),
        Term::Compound(f, args) => (PredKey::new(f, args.len()), args.clone()),
        _ => {
            return Err(FrontendError::Syntax {
                line,
                col,
                msg: "clause head must be an atom or compound term".into(),
            })
        }
    };
    let reserved: HashSet<&str> = [",", ";", "->", "!", "=", "true", "fail", "false", "{}"]
        .into_iter()
        .collect();
    if is_builtin(&key) || reserved.contains(&*key.name) {
        return Err(FrontendError::BuiltinRedefinition {
            pred: key,
            line,
            col,
        });
    }
    Ok((key, args))
}

/// Parses a program without checking that every called predicate exists.
pub fn parse_clauses(source: &str) -> Result<Vec<Clause>, FrontendError> {
    let raw = parser::Parser::new(source)?.clauses()?;
    let mut clauses = Vec::with_capacity(raw.len());
    for rc in raw {
        let (line, col) = (rc.line, rc.col);
        let clause = match &rc.term {
            Term::Compound(f, args) if &**f == ":-" && args.len() == 2 => {
                let (key, head_args) = head_of(&args[0], line, col)?;
                Clause {
                    key,
                    args: head_args,
                    body: term_to_goal(&args[1], line, col)?,
                }
            }
            Term::Compound(f, args) if &**f == ":-" && args.len() == 1 => {
                return Err(FrontendError::Unsupported {
                    construct: "directive".into(),
                    line,
                    col,
                })
            }
            head => {
                let (key, head_args) = head_of(head, line, col)?;
                Clause {
                    key,
                    args: head_args,
                    body: Goal::True,
                }
            }
        };
        clauses.push(clause);
    }
    Ok(clauses)
}

/// Parses a program and checks that every call has a definition.
pub fn parse(source: &str) -> Result<Program, FrontendError> {
    let program = Program::from_clauses(parse_clauses(source)?);
    program.check_calls()?;
    Ok(program)
}

/// Parses a single goal such as a query.
pub fn parse_goal(source: &str) -> Result<Goal, FrontendError> {
    let text = format!("{} .", source.trim().trim_end_matches('.'));
    let raw = parser::Parser::new(&text)?.clauses()?;
    match raw.as_slice() {
        [rc] => term_to_goal(&rc.term, rc.line, rc.col),
        _ => Err(FrontendError::Syntax {
            line: 1,
            col: 1,
            msg: "expected exactly one goal".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_cut_clause() {
        let p = parse("p(X) :- q(X), !.\nq(a).").unwrap();
        let c = &p.clauses[0];
        assert_eq!(c.key, PredKey::new("p", 1));
        assert_eq!(
            c.body,
            Goal::conj(
                Goal::Call(PredKey::new("q", 1), vec![Term::var("X")]),
                Goal::Cut
            )
        );
    }

    #[test]
    fn parses_member() {
        let p = parse("member(X,[X|_]). member(X,[_|L]) :- member(X,L).").unwrap();
        assert_eq!(p.clauses.len(), 2);
        assert_eq!(p.predicate_count(), 1);
        assert_eq!(p.clauses_of(&PredKey::new("member", 2)).count(), 2);
        match &p.clauses[0].args[1] {
            Term::Compound(f, args) => {
                assert_eq!(&**f, ".");
                assert_eq!(args[0], Term::var("X"));
                assert!(args[1].as_var().is_some_and(|v| v.name() == "_"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reports_truncated_input() {
        let err = parse("p(X").unwrap_err();
        match err {
            FrontendError::Syntax { msg, .. } => assert!(msg.contains("end of input"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_negation_and_if_then_else() {
        assert!(matches!(
            parse("p(X) :- \\+ q(X). q(a)."),
            Err(FrontendError::Unsupported { construct, .. }) if construct == "\\+"
        ));
        assert!(matches!(
            parse("p(X) :- (X = a -> true ; fail)."),
            Err(FrontendError::Unsupported { construct, .. }) if construct == "->"
        ));
        assert!(matches!(
            parse("p(X) :- assert(q(X))."),
            Err(FrontendError::Unsupported { construct, .. }) if construct == "assert/1"
        ));
    }

    #[test]
    fn syntax_error_has_position() {
        match parse("p(a).\nq(b) :- ).") {
            Err(FrontendError::Syntax { line, col, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(col, 9);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn comments_and_operators() {
        let src = "% line comment\n/* block\n comment */ len([], N, N).\nlen([_|T], A, N) :- A1 is A + 1, len(T, A1, N).";
        let p = parse(src).unwrap();
        let body = &p.clauses[1].body;
        let first = body.conjuncts()[0].clone();
        assert_eq!(
            first,
            Goal::Builtin(
                PredKey::new("is", 2),
                vec![
                    Term::var("A1"),
                    Term::compound("+", vec![Term::var("A"), Term::Int(1)])
                ]
            )
        );
    }

    #[test]
    fn curly_constraint_is_post() {
        let p = parse("v(X, Y) :- {Y = -X}.").unwrap();
        assert_eq!(
            p.clauses[0].body,
            Goal::Post(
                Term::var("Y"),
                Term::compound("-", vec![Term::var("X")])
            )
        );
    }

    #[test]
    fn undefined_call_is_reported() {
        assert!(matches!(
            parse("p :- q."),
            Err(FrontendError::Undefined { .. })
        ));
    }

    #[test]
    fn negative_literals_and_tuples() {
        let p = parse("f((A,B), -1, - 1, a-b).").unwrap();
        let args = &p.clauses[0].args;
        assert_eq!(args[0], Term::compound(",", vec![Term::var("A"), Term::var("B")]));
        assert_eq!(args[1], Term::Int(-1));
        assert_eq!(args[2], Term::compound("-", vec![Term::Int(1)]));
        assert_eq!(args[3], Term::compound("-", vec![Term::atom("a"), Term::atom("b")]));
    }

    #[test]
    fn printing_reparses() {
        let src = "p([X,Y|T], '$aux_1', (A,B), -(C), f(-1), 'hello world') :- X =< Y, !, (q(T) ; A = B), C is 1 - -2.\nq(_).";
        let p = parse(src).unwrap();
        let again = parse(&p.to_source()).unwrap();
        assert_eq!(p.to_source(), again.to_source());
    }
}
