use super::*;
use crate::frontend::{expand_disjunctions, parse, parse_goal};
use crate::normalize::normalize_program;
use crate::pos::text::parse_formula;
use crate::pos::PosFormula;
use crate::success::head_space;
use crate::term::FreshVars;

const MEMBER: &str = "memberchk(X,L) :- member(X,L), !.
member(X,[X|_]).
member(X,[_|L]) :- member(X,L).";

fn answers(src: &str, query: &str) -> AnswerSeq {
    solve(&parse(src).unwrap(), &parse_goal(query).unwrap(), Budget::default())
}

fn shown(seq: &AnswerSeq) -> Vec<String> {
    seq.answers.iter().map(|a| a.to_string()).collect()
}

#[test]
fn member_enumerates_in_order() {
    let seq = answers(MEMBER, "member(A, [3, 2, 3])");
    assert_eq!(shown(&seq), ["A = 3", "A = 2", "A = 3"]);
    assert!(seq.exhausted && seq.error.is_none());
}

#[test]
fn member_with_repeated_element_answers_twice() {
    assert_eq!(count_answers(&parse(MEMBER).unwrap(), &parse_goal("member(3, [3, 3])").unwrap(), Budget::default()), (2, true));
    assert_eq!(shown(&answers(MEMBER, "member(3, [3, 3])")), ["true", "true"]);
}

#[test]
fn cut_commits_to_first_answer() {
    let seq = answers(MEMBER, "memberchk(A, [3, 2, 3])");
    assert_eq!(shown(&seq), ["A = 3"]);
    assert!(seq.exhausted);
}

#[test]
fn cut_is_local_to_its_clause() {
    let src = "a(X) :- b(X).\na(9).\nb(X) :- c(X), !.\nb(0).\nc(1).\nc(2).";
    assert_eq!(shown(&answers(src, "a(X)")), ["X = 1", "X = 9"]);
    // a cut inside a disjunction cuts the whole clause
    let src = "d(X) :- (X = 1, ! ; X = 2).\nd(3).";
    assert_eq!(shown(&answers(src, "d(X)")), ["X = 1"]);
    // in a query it cuts the query's own alternatives
    assert_eq!(shown(&answers(MEMBER, "member(X, [1, 2]), !")), ["X = 1"]);
}

#[test]
fn unbound_parts_are_named_canonically() {
    let seq = answers(MEMBER, "member(A, L)");
    assert!(!seq.exhausted);
    assert_eq!(seq.answers.len(), Budget::default().max_answers);
    assert_eq!(seq.answers[0].to_string(), "A = _A, L = [_A|_B]");
    assert_eq!(seq.answers[1].to_string(), "A = _A, L = [_B,_A|_C]");
}

#[test]
fn failure_has_no_answers() {
    let seq = answers("", "fail");
    assert_eq!((seq.answers.len(), seq.exhausted), (0, true));
    let seq = answers("", "a = b");
    assert_eq!((seq.answers.len(), seq.exhausted), (0, true));
}

#[test]
fn occurs_check_is_on() {
    assert!(answers("", "X = f(X)").answers.is_empty());
}

#[test]
fn arithmetic_and_tests() {
    assert_eq!(shown(&answers("", "X is 7 // 2 + 7 mod 3 * -1")), ["X = 2"]);
    assert_eq!(shown(&answers("", "X is -7 mod 3, Y is -7 rem 3")), ["X = 2, Y = -1"]);
    assert_eq!(shown(&answers("", "X is 6 / 3, 2 =< X, X =:= 2")), ["X = 2"]);
    assert_eq!(shown(&answers("", "functor(f(a, b), N, A)")), ["N = f, A = 2"]);
    assert_eq!(shown(&answers("", "functor(T, g, 2)")), ["T = g(_A,_B)"]);
    assert_eq!(shown(&answers("", "atom(a), atomic(1), integer(3), var(X), nonvar(f(X))")), ["X = _A"]);
    assert_eq!(shown(&answers("", "f(X) \\= g(Y), X \\== Y")), ["X = _A, Y = _B"]);
    assert!(answers("", "atom(f(a))").answers.is_empty());
}

#[test]
fn errors_stop_the_search() {
    let seq = answers("", "X =< 3");
    assert!(matches!(seq.error, Some(OracleError::Instantiation(_))));
    assert!(!seq.exhausted);
    let seq = answers("", "X is 1 // 0");
    assert!(matches!(seq.error, Some(OracleError::Evaluation(_))));
    let seq = answers("", "X is 3 / 2");
    assert!(matches!(seq.error, Some(OracleError::Type(_))));
    let seq = answers("", "a < 1");
    assert!(matches!(seq.error, Some(OracleError::Type(_))));
}

#[test]
fn budget_limits_are_respected() {
    let src = "loop :- loop.\nnat(0).\nnat(s(X)) :- nat(X).";
    let p = parse(src).unwrap();
    let tight = Budget {
        max_answers: 3,
        ..Budget::default()
    };
    let seq = solve(&p, &parse_goal("nat(X)").unwrap(), tight);
    assert_eq!(seq.answers.len(), 3);
    assert!(!seq.exhausted);
    let seq = solve(&p, &parse_goal("loop").unwrap(), Budget::default());
    assert!(seq.answers.is_empty() && !seq.exhausted && seq.error.is_none());
    let short = Budget {
        max_steps: 50,
        ..Budget::default()
    };
    let seq = solve(&p, &parse_goal("nat(X), X = s(s(s(s(s(s(s(s(s(s(s(s(s(s(s(s(s(s(s(s(s(s(s(s(s(s(0))))))))))))))))))))))))))").unwrap(), short);
    assert!(!seq.exhausted && seq.steps >= 50);
}

#[test]
fn braces_post_a_constraint() {
    let src = "neg(X, Y) :- {Y = -X}.";
    assert_eq!(shown(&answers(src, "neg(3, Y)")), ["Y = -(3)"]);
}

#[test]
fn normalisation_preserves_answers() {
    let programs = [
        (MEMBER, vec!["memberchk(A, [1, 2, 1])", "member(A, [1, 2, 1])", "member(1, [1, 2, 1])"]),
        (
            "pt([], _, [], []).
pt([X | Xs], M, [X | L], G) :- X =< M, !, pt(Xs, M, L, G).
pt([X | Xs], M, L, [X | G]) :- pt(Xs, M, L, G).",
            vec!["pt([3, 1, 4, 1, 5], 2, L, G)", "pt([1, 2], 1, [1], G)"],
        ),
        (
            "q(1).\nq(2).\nq(X) :- X > 2, !.\nq(0).\nr(X, Y) :- q(X), !, q(Y), !, X = Y.",
            vec!["q(1)", "q(7)", "q(0)", "r(X, Y)", "r(2, Y)"],
        ),
        ("s(X) :- (X = 1 ; X = 2 ; X = 3).\nt(X) :- s(X), (X > 1, X < 3 ; X = 1).", vec!["s(X)", "t(X)"]),
    ];
    for (src, queries) in programs {
        let p = parse(src).unwrap();
        let expanded = expand_disjunctions(&p).unwrap();
        let np = normalize_program(&expanded, &FreshVars::new(), false).unwrap();
        // through the printed form, as a user would see it
        let normal = parse(&np.render()).unwrap();
        for q in queries {
            let goal = parse_goal(q).unwrap();
            let want = solve(&p, &goal, Budget::default());
            assert!(want.exhausted, "{q}");
            for other in [&expanded, &normal] {
                let got = solve(other, &goal, Budget::default());
                assert_eq!(shown(&got), shown(&want), "{q} on\n{}", np.render());
                assert!(got.exhausted);
            }
        }
    }
}

#[test]
fn same_seed_same_trials() {
    let p = parse(MEMBER).unwrap();
    let oracle = Oracle::new(&p, Budget::default());
    let sig = Signature::of(&p);
    let space = head_space(2);
    let cond = PosFormula::top(&space);
    let k = PredKey::new("member", 2);
    let a = check_determinacy(&oracle, &sig, &k, &cond, TrialConfig { seed: 7, ..TrialConfig::default() });
    let b = check_determinacy(&oracle, &sig, &k, &cond, TrialConfig { seed: 7, ..TrialConfig::default() });
    assert_eq!(a, b);
    assert_eq!(a.trials, 200);
}

#[test]
fn member_is_caught_memberchk_is_not() {
    let p = parse(MEMBER).unwrap();
    let oracle = Oracle::new(&p, Budget::default());
    let sig = Signature::of(&p);
    let space = head_space(2);
    let top = PosFormula::top(&space);
    let v = check_determinacy(&oracle, &sig, &PredKey::new("member", 2), &top, TrialConfig::default());
    assert!(!v.holds());
    let w = v.witness.unwrap();
    assert!(w.goal.starts_with("member(") && w.answers >= 2);
    let v = check_determinacy(&oracle, &sig, &PredKey::new("memberchk", 2), &top, TrialConfig::default());
    assert!(v.holds(), "{v}");
    assert_eq!(v.passes + v.inconclusive, 200);
}

#[test]
fn false_condition_is_vacuous() {
    let p = parse(MEMBER).unwrap();
    let oracle = Oracle::new(&p, Budget::default());
    let space = head_space(2);
    let v = check_determinacy(
        &oracle,
        &Signature::of(&p),
        &PredKey::new("member", 2),
        &PosFormula::bottom(&space),
        TrialConfig::default(),
    );
    assert!(v.vacuous && v.holds() && v.trials == 0);
}

#[test]
fn trials_respect_the_pattern() {
    // with `w` required, member's list may be open but its element is ground
    let p = parse(MEMBER).unwrap();
    let oracle = Oracle::new(&p, Budget::default());
    let space = head_space(2);
    let w = parse_formula(&space, "w /\\ ~x").unwrap();
    // ~x is not positive; the models are the assignments with w set and x clear
    let v = check_determinacy(&oracle, &Signature::of(&p), &PredKey::new("member", 2), &w, TrialConfig::default());
    assert_eq!(v.trials, 200);
}

#[test]
fn signature_collects_data_symbols() {
    let p = parse("f(t(L, K, R), [a]) :- K < 7, g(b, 40).\ng(_, _).").unwrap();
    let s = Signature::of(&p);
    assert!(s.lists);
    assert!(s.atoms.contains("a") && s.atoms.contains("b"));
    assert!(s.functors.contains(&("t".to_string(), 3)));
    assert!(s.ints.contains(&40) && !s.ints.contains(&7));
}
