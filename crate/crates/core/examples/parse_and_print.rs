//! Parse a program, expand in-body disjunctions into auxiliary predicates,
//! and print the result back as Prolog.

use redalert::frontend::{expand_disjunctions, parse};

fn main() {
    let src = "
sign(X, S) :- ( X < 0, S = neg ; X =:= 0, S = zero ; X > 0, S = pos ).
signs([], []).
signs([X|Xs], [S|Ss]) :- sign(X, S), signs(Xs, Ss).
";
    let program = parse(src).expect("valid program");
    for key in program.predicates() {
        println!("defined: {key}");
    }
    let expanded = expand_disjunctions(&program).expect("no cut under a disjunction");
    print!("{}", expanded.to_source());

    match parse("p(X) :- \\+ q(X).") {
        Ok(_) => unreachable!(),
        Err(e) => println!("rejected: {e}"),
    }
}
