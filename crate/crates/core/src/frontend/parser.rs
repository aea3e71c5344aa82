//! Operator-precedence parser for the supported Prolog subset.

use super::lexer::{tokenize, Tok, Token};
use super::FrontendError;
use crate::term::{Term, Var};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Assoc {
    Xfx,
    Xfy,
    Yfx,
}

pub(crate) fn infix_op(name: &str) -> Option<(u32, Assoc)> {
    Some(match name {
        ":-" => (1200, Assoc::Xfx),
        ";" => (1100, Assoc::Xfy),
        "->" => (1050, Assoc::Xfy),
        "," => (1000, Assoc::Xfy),
        "=" | "\\=" | "==" | "\\==" | "=<" | "<" | ">=" | ">" | "=:=" | "=\\=" | "is" | "=.." => {
            (700, Assoc::Xfx)
        }
        "+" | "-" => (500, Assoc::Yfx),
        "*" | "/" | "//" | "mod" | "rem" => (400, Assoc::Yfx),
        _ => return None,
    })
}

pub(crate) fn prefix_op(name: &str) -> Option<u32> {
    match name {
        "-" => Some(200),
        "\\+" => Some(900),
        ":-" => Some(1200),
        _ => None,
    }
}

/// A raw clause term plus the position of its first token.
pub(crate) struct RawClause {
    pub term: Term,
    pub line: usize,
    pub col: usize,
}

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
    anon: u32,
    eof_line: usize,
    eof_col: usize,
}

impl Parser {
    pub fn new(src: &str) -> Result<Parser, FrontendError> {
        let toks = tokenize(src)?;
        let (eof_line, eof_col) = src.lines().enumerate().last().map_or((1, 1), |(i, l)| {
            (i + 1, l.chars().count() + 1)
        });
        Ok(Parser {
            toks,
            pos: 0,
            anon: 0,
            eof_line,
            eof_col,
        })
    }

    pub fn clauses(mut self) -> Result<Vec<RawClause>, FrontendError> {
        let mut out = Vec::new();
        while self.pos < self.toks.len() {
            let (line, col) = (self.toks[self.pos].line, self.toks[self.pos].col);
            let (term, _) = self.parse(1200)?;
            match self.next() {
                Some(Token { tok: Tok::End, .. }) => {}
                Some(t) => {
                    return Err(FrontendError::Syntax {
                        line: t.line,
                        col: t.col,
                        msg: "operator expected".into(),
                    })
                }
                None => return Err(self.eof("missing `.` at end of clause")),
            }
            out.push(RawClause { term, line, col });
        }
        Ok(out)
    }

    fn eof(&self, msg: &str) -> FrontendError {
        FrontendError::Syntax {
            line: self.eof_line,
            col: self.eof_col,
            msg: format!("{msg} (end of input)"),
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), FrontendError> {
        match self.next() {
            Some(t) if t.tok == want => Ok(()),
            Some(t) => Err(FrontendError::Syntax {
                line: t.line,
                col: t.col,
                msg: format!("expected {what}"),
            }),
            None => Err(self.eof(&format!("expected {what}"))),
        }
    }

    fn starts_term(tok: &Tok) -> bool {
        !matches!(
            tok,
            Tok::Close | Tok::CloseList | Tok::CloseCurly | Tok::Comma | Tok::Bar | Tok::End
        )
    }

    fn parse(&mut self, max: u32) -> Result<(Term, u32), FrontendError> {
        let (mut left, mut left_prec) = self.primary(max)?;
        loop {
            let Some(tok) = self.peek() else { break };
            let name = match &tok.tok {
                Tok::Atom(a) => a.clone(),
                Tok::Comma => ",".to_string(),
                _ => break,
            };
            let Some((prec, assoc)) = infix_op(&name) else { break };
            if prec > max {
                break;
            }
            let (left_max, right_max) = match assoc {
                Assoc::Xfx => (prec - 1, prec - 1),
                Assoc::Xfy => (prec - 1, prec),
                Assoc::Yfx => (prec, prec - 1),
            };
            if left_prec > left_max {
                break;
            }
            self.pos += 1;
            let (right, _) = self.parse(right_max)?;
            left = Term::compound(&name, vec![left, right]);
            left_prec = prec;
        }
        Ok((left, left_prec))
    }

    fn primary(&mut self, max: u32) -> Result<(Term, u32), FrontendError> {
        let Some(tok) = self.next() else {
            return Err(self.eof("unexpected end of input"));
        };
        let err = |msg: &str| FrontendError::Syntax {
            line: tok.line,
            col: tok.col,
            msg: msg.to_string(),
        };
        match tok.tok.clone() {
            Tok::Int(n) => Ok((Term::Int(n), 0)),
            Tok::Var(name) => {
                if name == "_" {
                    self.anon += 1;
                    Ok((Term::Var(Var::with_id("_", self.anon)), 0))
                } else {
                    Ok((Term::var(&name), 0))
                }
            }
            Tok::Open => {
                let (t, _) = self.parse(1200)?;
                self.expect(Tok::Close, "`)`")?;
                Ok((t, 0))
            }
            Tok::OpenCall => Err(err("unexpected `(`")),
            Tok::OpenList => {
                if matches!(self.peek(), Some(Token { tok: Tok::CloseList, .. })) {
                    self.pos += 1;
                    return self.after_name("[]".into(), false, max);
                }
                let mut items = vec![self.parse(999)?.0];
                while matches!(self.peek(), Some(Token { tok: Tok::Comma, .. })) {
                    self.pos += 1;
                    items.push(self.parse(999)?.0);
                }
                let tail = if matches!(self.peek(), Some(Token { tok: Tok::Bar, .. })) {
                    self.pos += 1;
                    self.parse(999)?.0
                } else {
                    Term::nil()
                };
                self.expect(Tok::CloseList, "`]`")?;
                Ok((Term::list(items, tail), 0))
            }
            Tok::OpenCurly => {
                if matches!(self.peek(), Some(Token { tok: Tok::CloseCurly, .. })) {
                    self.pos += 1;
                    return self.after_name("{}".into(), false, max);
                }
                let (t, _) = self.parse(1200)?;
                self.expect(Tok::CloseCurly, "`}`")?;
                Ok((Term::compound("{}", vec![t]), 0))
            }
            Tok::Atom(name) => self.after_name(name, true, max),
            Tok::QAtom(name) => self.after_name(name, false, max),
            Tok::Close | Tok::CloseList | Tok::CloseCurly | Tok::Comma | Tok::Bar | Tok::End => {
                Err(err("unexpected token"))
            }
        }
    }

    fn after_name(
        &mut self,
        name: String,
        may_be_op: bool,
        max: u32,
    ) -> Result<(Term, u32), FrontendError> {
        if matches!(self.peek(), Some(Token { tok: Tok::OpenCall, .. })) {
            self.pos += 1;
            let mut args = vec![self.parse(999)?.0];
            while matches!(self.peek(), Some(Token { tok: Tok::Comma, .. })) {
                self.pos += 1;
                args.push(self.parse(999)?.0);
            }
            self.expect(Tok::Close, "`)` or `,`")?;
            return Ok((Term::compound(&name, args), 0));
        }
        if may_be_op {
            if let Some(prec) = prefix_op(&name) {
                let next = self.peek().cloned();
                if let Some(next) = next.filter(|t| Self::starts_term(&t.tok)) {
                    // a following infix operator means the name is an operand
                    let next_is_infix = matches!(&next.tok, Tok::Atom(a) if infix_op(a).is_some() && prefix_op(a).is_none());
                    if !next_is_infix {
                        if name == "-" && !next.layout_before {
                            if let Tok::Int(n) = next.tok {
                                self.pos += 1;
                                return Ok((Term::Int(-n), 0));
                            }
                        }
                        let prec = prec.min(max);
                        let (arg, _) = self.parse(prec)?;
                        return Ok((Term::compound(&name, vec![arg]), prec));
                    }
                }
            }
        }
        let prec = if may_be_op && (infix_op(&name).is_some() || prefix_op(&name).is_some()) {
            // a bare operator atom binds as an operand of maximal priority
            infix_op(&name)
                .map(|(p, _)| p)
                .or(prefix_op(&name))
                .unwrap_or(0)
                .min(max)
        } else {
            0
        };
        Ok((Term::atom(&name), prec))
    }
}
