//! Re-parseable rendering of terms, goals and clauses.

use std::collections::HashMap;
use std::fmt::{self, Write};

use super::lexer::is_symbol_char;
use super::parser::{infix_op, prefix_op, Assoc};
use crate::term::{Clause, Goal, Term, Var, CONS, NIL};

fn atom_needs_quotes(name: &str) -> bool {
    if matches!(name, "[]" | "!" | ";" | "{}" | ",") {
        return name == ",";
    }
    let mut chars = name.chars();
    match chars.next() {
        None => true,
        Some(c) if c.is_lowercase() => !name.chars().all(|c| c.is_alphanumeric() || c == '_'),
        Some(_) => !name.chars().all(is_symbol_char),
    }
}

pub(crate) fn write_atom(out: &mut impl Write, name: &str) -> fmt::Result {
    if atom_needs_quotes(name) {
        out.write_char('\'')?;
        for c in name.chars() {
            match c {
                '\'' => out.write_str("\\'")?,
                '\\' => out.write_str("\\\\")?,
                '\n' => out.write_str("\\n")?,
                c => out.write_char(c)?,
            }
        }
        out.write_char('\'')
    } else {
        out.write_str(name)
    }
}

pub(crate) fn write_term(
    out: &mut impl Write,
    t: &Term,
    namer: &dyn Fn(&Var) -> String,
) -> fmt::Result {
    write_prec(out, t, 999, namer)
}

fn write_prec(
    out: &mut impl Write,
    t: &Term,
    max: u32,
    namer: &dyn Fn(&Var) -> String,
) -> fmt::Result {
    match t {
        Term::Var(v) => out.write_str(&namer(v)),
        Term::Int(n) => {
            if *n < 0 && max < 200 {
                write!(out, "({n})")
            } else {
                write!(out, "{n}")
            }
        }
        Term::Atom(a) => {
            let is_op = infix_op(a).is_some() || prefix_op(a).is_some();
            if is_op && max < 1200 {
                out.write_char('(')?;
                write_atom(out, a)?;
                out.write_char(')')
            } else {
                write_atom(out, a)
            }
        }
        Term::Compound(f, args) if &**f == CONS && args.len() == 2 => {
            out.write_char('[')?;
            write_prec(out, &args[0], 999, namer)?;
            let mut tail = &args[1];
            loop {
                match tail {
                    Term::Compound(g, rest) if &**g == CONS && rest.len() == 2 => {
                        out.write_char(',')?;
                        write_prec(out, &rest[0], 999, namer)?;
                        tail = &rest[1];
                    }
                    Term::Atom(a) if &**a == NIL => break,
                    other => {
                        out.write_char('|')?;
                        write_prec(out, other, 999, namer)?;
                        break;
                    }
                }
            }
            out.write_char(']')
        }
        Term::Compound(f, args) if &**f == "{}" && args.len() == 1 => {
            out.write_char('{')?;
            write_prec(out, &args[0], 1200, namer)?;
            out.write_char('}')
        }
        Term::Compound(f, args) if args.len() == 2 && infix_op(f).is_some() => {
            let (prec, assoc) = infix_op(f).unwrap();
            let (lmax, rmax) = match assoc {
                Assoc::Xfx => (prec - 1, prec - 1),
                Assoc::Xfy => (prec - 1, prec),
                Assoc::Yfx => (prec, prec - 1),
            };
            let paren = prec > max;
            if paren {
                out.write_char('(')?;
            }
            write_prec(out, &args[0], lmax, namer)?;
            match &**f {
                "," => out.write_str(", ")?,
                op => {
                    out.write_char(' ')?;
                    write_atom(out, op)?;
                    out.write_char(' ')?;
                }
            }
            write_prec(out, &args[1], rmax, namer)?;
            if paren {
                out.write_char(')')?;
            }
            Ok(())
        }
        Term::Compound(f, args) => {
            write_atom(out, f)?;
            out.write_char('(')?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.write_char(',')?;
                }
                write_prec(out, a, 999, namer)?;
            }
            out.write_char(')')
        }
    }
}

/// The term a goal denotes in surface syntax.
pub fn goal_to_term(g: &Goal) -> Term {
    match g {
        Goal::Post(l, r) => Term::compound("=", vec![l.clone(), r.clone()]),
        Goal::Call(k, args) | Goal::Builtin(k, args) => {
            if args.is_empty() {
                Term::Atom(k.name.clone())
            } else {
                Term::Compound(k.name.clone(), args.clone())
            }
        }
        Goal::Cut => Term::atom("!"),
        Goal::Conj(l, r) => Term::compound(",", vec![goal_to_term(l), goal_to_term(r)]),
        Goal::Disj(l, r) => Term::compound(";", vec![goal_to_term(l), goal_to_term(r)]),
        Goal::True => Term::atom("true"),
        Goal::Fail => Term::atom("fail"),
    }
}

pub(crate) fn write_goal(
    out: &mut impl Write,
    g: &Goal,
    max: u32,
    namer: &dyn Fn(&Var) -> String,
) -> fmt::Result {
    write_prec(out, &goal_to_term(g), max, namer)
}

/// Display names for every variable of a clause, unique within the clause.
/// Singleton anonymous variables print as `_`.
pub(crate) fn clause_namer(vars_in_order: &[Var], occurrences: &HashMap<Var, usize>) -> HashMap<Var, String> {
    let mut names: HashMap<Var, String> = HashMap::new();
    let mut taken: std::collections::HashSet<String> = std::collections::HashSet::new();
    // plain source names first so they keep their spelling
    for v in vars_in_order.iter().filter(|v| v.id() == 0) {
        taken.insert(v.name().to_string());
        names.insert(v.clone(), v.name().to_string());
    }
    for v in vars_in_order.iter().filter(|v| v.id() != 0) {
        if v.name() == "_" && occurrences.get(v).copied().unwrap_or(0) <= 1 {
            names.insert(v.clone(), "_".to_string());
            continue;
        }
        let base = match v.name() {
            "_" => "_A".to_string(),
            n if n.starts_with('_') || n.starts_with(|c: char| c.is_uppercase()) => n.to_string(),
            n => format!("_{n}"),
        };
        let mut candidate = base.clone();
        let mut k = 1;
        while taken.contains(&candidate) {
            candidate = format!("{base}{k}");
            k += 1;
        }
        taken.insert(candidate.clone());
        names.insert(v.clone(), candidate);
    }
    names
}

fn count_occurrences(t: &Term, counts: &mut HashMap<Var, usize>) {
    match t {
        Term::Var(v) => *counts.entry(v.clone()).or_default() += 1,
        Term::Compound(_, args) => args.iter().for_each(|a| count_occurrences(a, counts)),
        _ => {}
    }
}

/// Renders `head :- body.` with clause-unique variable names.
pub fn clause_to_string(c: &Clause) -> String {
    render_rule(&c.head_term(), &c.body)
}

pub fn render_rule(head: &Term, body: &Goal) -> String {
    let body_term = goal_to_term(body);
    let mut counts = HashMap::new();
    count_occurrences(head, &mut counts);
    count_occurrences(&body_term, &mut counts);
    let mut order = head.vars();
    body_term.vars_into(&mut order);
    let names = clause_namer(&order, &counts);
    let namer = |v: &Var| names.get(v).cloned().unwrap_or_else(|| v.to_string());
    let mut s = String::new();
    write_prec(&mut s, head, 999, &namer).unwrap();
    if !matches!(body, Goal::True) {
        s.push_str(" :-\n    ");
        write_prec(&mut s, &body_term, 1199, &namer).unwrap();
    }
    s.push('.');
    s
}

/// Renders a standalone goal, e.g. a query.
pub fn goal_to_string(g: &Goal) -> String {
    let t = goal_to_term(g);
    let mut counts = HashMap::new();
    count_occurrences(&t, &mut counts);
    let names = clause_namer(&t.vars(), &counts);
    let namer = |v: &Var| names.get(v).cloned().unwrap_or_else(|| v.to_string());
    let mut s = String::new();
    write_prec(&mut s, &t, 1200, &namer).unwrap();
    s
}
