//! Cut-normal form `G1 ; G2, !, G3 ; G4`, the stratification it induces, and
//! what happens to a program whose cut depends on itself.

use redalert::frontend::{expand_disjunctions, parse};
use redalert::normalize::normalize_program;
use redalert::FreshVars;

fn main() {
    let src = "
memberchk(X, L) :- member(X, L), !.
member(X, [X|_]).
member(X, [_|L]) :- member(X, L).
";
    let p = expand_disjunctions(&parse(src).unwrap()).unwrap();
    let np = normalize_program(&p, &FreshVars::new(), false).unwrap();
    print!("{}", np.render());
    for key in np.predicates.keys() {
        println!("% {key} is in stratum {}", np.stratum_of(key));
    }

    let looping = parse("p :- p, !, fail.\np.").unwrap();
    match normalize_program(&looping, &FreshVars::new(), false) {
        Err(e) => println!("% {e}"),
        Ok(_) => unreachable!(),
    }
    let relaxed = normalize_program(&looping, &FreshVars::new(), true).unwrap();
    print!("{}", relaxed.render());
    for w in &relaxed.warnings {
        println!("% warning: {w}");
    }
}
