//! Determinacy conditions for whole predicates and for individual queries.

use redalert::detinfer::goal_condition;
use redalert::frontend::parse_goal;
use redalert::pipeline::{analyze_source, AnalysisConfig};
use redalert::pos::text::render_cnf;

const PROGRAM: &str = "
pt([], _, [], []).
pt([X|Xs], M, [X|L], G) :- X =< M, !, pt(Xs, M, L, G).
pt([X|Xs], M, L, [X|G]) :- pt(Xs, M, L, G).

diag([], [], _).
diag([(X,Y)|Xs], [(Y,X)|Ys], [_|Ds]) :- diag(Xs, Ys, Ds).
vert([], [], _).
vert([(X,Y)|Xs], [(X1,Y)|Ys], [_|Ds]) :- {X1 = -X}, vert(Xs, Ys, Ds).
rot(Xs, Ys) :- diag(Xs, Zs, Ys), vert(Zs, Ys, Xs).
";

fn main() {
    let a = analyze_source("example.pl", PROGRAM, &AnalysisConfig::default()).unwrap();
    for (key, cond) in &a.det.conds {
        if !key.is_aux() {
            println!("{key} : {}", render_cnf(cond));
        }
    }
    for (key, m) in &a.mux {
        println!("{key} clause separation: {} and {}", render_cnf(&m.f1), render_cnf(&m.f2));
    }

    for q in ["pt(L, 3, S, B)", "pt([4, 1], P, S, B)", "rot(Xs, Ys), pt(Xs, 0, S, B)"] {
        let goal = parse_goal(q).unwrap();
        let (_, cond) = goal_condition(&goal, &a.det, &a.success).unwrap();
        println!("?- {q}   deterministic when {}", render_cnf(&cond));
    }
}
