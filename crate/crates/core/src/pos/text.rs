//! Human-readable rendering and parsing of formulas over named variables.
//!
//! Syntax: `true`, `false`, names, `~f`, `f /\ g`, `f \/ g` and parentheses.

use std::sync::Arc;

use thiserror::Error;

use super::{Lit, PosFormula, VarSpace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaParseError {
    #[error("unknown variable `{0}`")]
    UnknownVar(String),
    #[error("unexpected `{0}` in formula")]
    Unexpected(String),
    #[error("formula ends early")]
    Truncated,
}

fn lit_text(space: &VarSpace, l: Lit) -> String {
    let name = space.name(l.var());
    if l.is_neg() {
        format!("~{name}")
    } else {
        name.to_string()
    }
}

/// Names for a predicate's argument positions: `w, x, y, z, a, b, c, d`
/// up to arity 8, `a1 .. an` beyond.
pub fn positional_names(arity: usize) -> Vec<String> {
    const SHORT: [&str; 8] = ["w", "x", "y", "z", "a", "b", "c", "d"];
    if arity <= SHORT.len() {
        SHORT[..arity].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=arity).map(|i| format!("a{i}")).collect()
    }
}

/// Prime-implicate CNF such as `w /\ (y \/ z)`.
pub fn render_cnf(f: &PosFormula) -> String {
    if f.is_bottom() {
        return "false".into();
    }
    let clauses = f.prime_implicates();
    if clauses.is_empty() {
        return "true".into();
    }
    let many = clauses.len() > 1;
    clauses
        .iter()
        .map(|c| {
            let body = c
                .iter()
                .map(|&l| lit_text(f.space(), l))
                .collect::<Vec<_>>()
                .join(" \\/ ");
            if many && c.len() > 1 {
                format!("({body})")
            } else {
                body
            }
        })
        .collect::<Vec<_>>()
        .join(" /\\ ")
}

/// Prime-implicant DNF as literal lists: `[]` is false, `[[]]` is true.
pub fn render_dnf(f: &PosFormula) -> Vec<Vec<String>> {
    f.prime_implicants()
        .iter()
        .map(|cube| cube.iter().map(|&l| lit_text(f.space(), l)).collect())
        .collect()
}

/// Inverse of [`render_dnf`].
pub fn parse_dnf(space: &Arc<VarSpace>, cubes: &[Vec<String>]) -> Result<PosFormula, FormulaParseError> {
    let mut parsed = Vec::with_capacity(cubes.len());
    for cube in cubes {
        let mut lits = Vec::with_capacity(cube.len());
        for text in cube {
            let (neg, name) = match text.strip_prefix('~') {
                Some(rest) => (true, rest),
                None => (false, text.as_str()),
            };
            let v = space
                .lookup(name)
                .ok_or_else(|| FormulaParseError::UnknownVar(name.to_string()))?;
            lits.push(if neg { Lit::neg(v) } else { Lit::pos(v) });
        }
        parsed.push(lits);
    }
    Ok(PosFormula::from_cubes(space, &parsed))
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    And,
    Or,
    Not,
    Open,
    Close,
}

fn lex(src: &str) -> Result<Vec<Tok>, FormulaParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' => {
                chars.next();
                out.push(Tok::Open);
            }
            ')' => {
                chars.next();
                out.push(Tok::Close);
            }
            '~' => {
                chars.next();
                out.push(Tok::Not);
            }
            '/' | '\\' => {
                chars.next();
                match (c, chars.next()) {
                    ('/', Some('\\')) => out.push(Tok::And),
                    ('\\', Some('/')) => out.push(Tok::Or),
                    (a, b) => {
                        return Err(FormulaParseError::Unexpected(format!(
                            "{a}{}",
                            b.map(String::from).unwrap_or_default()
                        )))
                    }
                }
            }
            c if c.is_alphanumeric() || c == '_' => {
                let mut name = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_alphanumeric() || d == '_' {
                        name.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Name(name));
            }
            other => return Err(FormulaParseError::Unexpected(other.to_string())),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    space: &'a Arc<VarSpace>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn or(&mut self) -> Result<PosFormula, FormulaParseError> {
        let mut f = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            f = f.disj(&self.and()?).expect("one space");
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<PosFormula, FormulaParseError> {
        let mut f = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            f = f.conj(&self.unary()?).expect("one space");
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<PosFormula, FormulaParseError> {
        let tok = self.peek().cloned().ok_or(FormulaParseError::Truncated)?;
        self.pos += 1;
        match tok {
            Tok::Not => {
                let inner = self.unary()?;
                Ok(inner
                    .implies(&PosFormula::bottom(self.space))
                    .expect("one space"))
            }
            Tok::Open => {
                let f = self.or()?;
                match self.peek() {
                    Some(Tok::Close) => {
                        self.pos += 1;
                        Ok(f)
                    }
                    Some(t) => Err(FormulaParseError::Unexpected(format!("{t:?}"))),
                    None => Err(FormulaParseError::Truncated),
                }
            }
            Tok::Name(n) if n == "true" => Ok(PosFormula::top(self.space)),
            Tok::Name(n) if n == "false" => Ok(PosFormula::bottom(self.space)),
            Tok::Name(n) => {
                let v = self
                    .space
                    .lookup(&n)
                    .ok_or(FormulaParseError::UnknownVar(n))?;
                Ok(PosFormula::var(self.space, v))
            }
            other => Err(FormulaParseError::Unexpected(format!("{other:?}"))),
        }
    }
}

pub fn parse_formula(space: &Arc<VarSpace>, src: &str) -> Result<PosFormula, FormulaParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        space,
    };
    let f = p.or()?;
    match p.peek() {
        None => Ok(f),
        Some(t) => Err(FormulaParseError::Unexpected(format!("{t:?}"))),
    }
}
