//! Depth-k abstraction of success constraints and the mutual-exclusion
//! condition between two clause alternatives.

use redalert::depthk::{abstract_mux, truncate, ConstraintConj, DepthKSet};
use redalert::frontend::parse_goal;
use redalert::pos::text::render_cnf;
use redalert::pos::VarSpace;
use redalert::{FreshVars, Goal, Term, Var};

fn term(src: &str) -> Term {
    match parse_goal(&format!("t({src})")).unwrap() {
        Goal::Call(_, mut args) => args.remove(0),
        _ => unreachable!(),
    }
}

fn main() {
    let fresh = FreshVars::new();
    let list = term("[a, b, c, d]");
    println!("{list} at depth 3 is {}", truncate(&list, 3, &fresh));

    let (x, l) = (Var::new("X"), Var::new("L"));
    let eq = |lhs: &Var, rhs: &str| {
        ConstraintConj::truth()
            .with_eq(&Term::Var(lhs.clone()), &term(rhs), 3, &fresh)
            .unwrap()
    };
    // member's clauses: an empty list can never match either of them, the
    // two non-empty shapes can only be told apart by the element
    let nil = DepthKSet::from_elems(3, 64, vec![eq(&l, "[]")]);
    let cons = DepthKSet::from_elems(3, 64, vec![eq(&l, "[_|_]")]);
    let first = DepthKSet::from_elems(3, 64, vec![eq(&l, "[X|_]")]);
    println!("nil      = {nil}");
    println!("cons     = {cons}");
    let space = VarSpace::new(["X", "L"]);
    let scope = [x, l];
    println!("mux(nil, cons)   = {}", render_cnf(&abstract_mux(&nil, &cons, &scope, &space, 4, &fresh)));
    println!("mux(first, cons) = {}", render_cnf(&abstract_mux(&first, &cons, &scope, &space, 4, &fresh)));
    println!("union            = {}", nil.union(&cons));
}
