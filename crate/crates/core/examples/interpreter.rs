//! The reference interpreter: answers of a query, and randomised checking of
//! an inferred condition against it.

use redalert::frontend::parse_goal;
use redalert::oracle::{check_determinacy, solve, Budget, Oracle, Signature, TrialConfig};
use redalert::pipeline::{analyze_source, AnalysisConfig};
use redalert::parse;

const PROGRAM: &str = "
memberchk(X, L) :- member(X, L), !.
member(X, [X|_]).
member(X, [_|L]) :- member(X, L).
";

fn main() {
    let p = parse(PROGRAM).unwrap();
    for q in ["member(A, [3, 2, 3])", "memberchk(A, [3, 2, 3])", "member(A, L)"] {
        let seq = solve(&p, &parse_goal(q).unwrap(), Budget { max_answers: 4, ..Budget::default() });
        let shown: Vec<String> = seq.answers.iter().map(|a| a.to_string()).collect();
        let end = if seq.exhausted { "no more" } else { "stopped early" };
        println!("?- {q}\n   {} ({end})", shown.join(" ; "));
    }

    let a = analyze_source("member.pl", PROGRAM, &AnalysisConfig::default()).unwrap();
    let oracle = Oracle::new(&p, Budget::default());
    let sig = Signature::of(&p);
    for (key, cond) in &a.det.conds {
        let v = check_determinacy(&oracle, &sig, key, cond, TrialConfig::default());
        println!("{v}");
    }
    // deliberately wrong: claim member/2 is always deterministic
    let top = redalert::pos::PosFormula::top(&redalert::success::head_space(2));
    let member = redalert::PredKey::new("member", 2);
    println!("{}", check_determinacy(&oracle, &sig, &member, &top, TrialConfig::default()));
}
