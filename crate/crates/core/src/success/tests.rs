use super::*;
use crate::frontend::{expand_disjunctions, parse, parse_goal};
use crate::normalize::normalize_program;
use crate::pos::text::parse_formula;

fn program(src: &str) -> NormalProgram {
    let p = expand_disjunctions(&parse(src).unwrap()).unwrap();
    normalize_program(&p, &FreshVars::new(), false).unwrap()
}

fn analyse_with(src: &str, config: SuccessConfig) -> (NormalProgram, SuccessEnv) {
    let np = program(src);
    let env = lfp_success(&np, config, &FreshVars::new()).unwrap();
    (np, env)
}

fn analyse(src: &str) -> (NormalProgram, SuccessEnv) {
    analyse_with(src, SuccessConfig::default())
}

fn key(name: &str, arity: usize) -> PredKey {
    PredKey::new(name, arity)
}

fn assert_pos(env: &SuccessEnv, k: &PredKey, want: &str) {
    let f = &env.pos[k];
    let w = parse_formula(f.space(), want).unwrap();
    assert!(f.equiv(&w).unwrap(), "{k}: got {}, want {want}", render_cnf(f));
}

const MEMBER: &str = "memberchk(X,L) :- member(X,L), !.
member(X,[X|_]).
member(X,[_|L]) :- member(X,L).";

const PT: &str = "pt([], _, [], []).
pt([X | Xs], M, [X | L], G) :- X =< M, !, pt(Xs, M, L, G).
pt([X | Xs], M, L, [X | G]) :- pt(Xs, M, L, G).";

#[test]
fn alpha_of_equations() {
    let g = parse_goal("X = f(Y, Z), U = a, V = W").unwrap();
    let scope = Scope::for_goal(&g);
    let c = g.conjuncts();
    let Goal::Post(a, b) = c[0] else { panic!() };
    let f = alpha_equation(a, b, &scope);
    let want = parse_formula(scope.space(), "(~X \\/ Y) /\\ (~X \\/ Z) /\\ (X \\/ ~Y \\/ ~Z)").unwrap();
    assert!(f.equiv(&want).unwrap());
    let Goal::Post(a, b) = c[1] else { panic!() };
    assert_eq!(render_cnf(&alpha_equation(a, b, &scope)), "U");
    let Goal::Post(a, b) = c[2] else { panic!() };
    let want = parse_formula(scope.space(), "(~V \\/ W) /\\ (V \\/ ~W)").unwrap();
    assert!(alpha_equation(a, b, &scope).equiv(&want).unwrap());
}

#[test]
fn clashing_and_cyclic_equations_are_false() {
    for src in ["a = b", "X = f(X)", "f(X, a) = f(b, X)"] {
        let g = parse_goal(src).unwrap();
        let scope = Scope::for_goal(&g);
        let Goal::Post(a, b) = &g else { panic!() };
        assert!(alpha_equation(a, b, &scope).is_bottom(), "{src}");
    }
}

#[test]
fn trivial_posts() {
    let env = SuccessEnv::bottom(&program(""), SuccessConfig::default());
    let scope = Scope::for_goal(&Goal::True);
    assert!(sg_pos(&Goal::True, &scope, &env).unwrap().is_top());
    assert!(sg_pos(&Goal::Fail, &scope, &env).unwrap().is_bottom());
}

#[test]
fn builtin_abstractions() {
    let env = SuccessEnv::bottom(&program(""), SuccessConfig::default());
    for (src, want) in [
        ("X =< M", "X /\\ M"),
        ("Z is X + Y * 2", "Z /\\ X /\\ Y"),
        ("atom(A)", "A"),
        ("var(A)", "true"),
        ("functor(T, N, A)", "N /\\ A"),
        ("f(X) == g(Y, Z)", "(~X \\/ Y) /\\ (~X \\/ Z) /\\ (X \\/ ~Y \\/ ~Z)"),
        ("X == a", "X"),
    ] {
        let g = parse_goal(src).unwrap();
        let scope = Scope::for_goal(&g);
        let f = sg_pos(&g, &scope, &env).unwrap();
        let w = parse_formula(scope.space(), want).unwrap();
        assert!(f.equiv(&w).unwrap(), "{src}: {}", render_cnf(&f));
    }
}

#[test]
fn member_groundness_summary() {
    let (_, env) = analyse(MEMBER);
    // a ground list grounds the element; nothing else is forced
    assert_pos(&env, &key("member", 2), "~x \\/ w");
    assert_pos(&env, &key("memberchk", 2), "~x \\/ w");
}

#[test]
fn memberchk_succeeds_like_member() {
    let (_, env) = analyse(MEMBER);
    assert!(env.pos[&key("memberchk", 2)]
        .equiv(&env.pos[&key("member", 2)])
        .unwrap());
    assert_eq!(env.render_dk(&key("memberchk", 2)), env.render_dk(&key("member", 2)));
}

#[test]
fn member_depth_three_set() {
    let (_, env) = analyse(MEMBER);
    // L = [X|_], L = [_,X|_] and L = [_,_|_] with X free
    assert_eq!(env.render_dk(&key("member", 2)), "[X = [W|_C1], X = [_C1,W|_C2], X = [_C1,_C2|_C3]]");
    assert_eq!(env.dk[&key("member", 2)].len(), 3);
}

#[test]
fn member_call_in_context() {
    let (_, env) = analyse(MEMBER);
    let g = parse_goal("member(A, S)").unwrap();
    let scope = Scope::for_goal(&g);
    let f = sg_pos(&g, &scope, &env).unwrap();
    assert!(f.equiv(&parse_formula(scope.space(), "~S \\/ A").unwrap()).unwrap());
    // repeated and non-variable arguments
    let g = parse_goal("member(A, [A, b])").unwrap();
    let scope = Scope::for_goal(&g);
    let f = sg_pos(&g, &scope, &env).unwrap();
    assert!(f.is_top(), "{}", render_cnf(&f));
    let g = parse_goal("member(A, [b])").unwrap();
    let scope = Scope::for_goal(&g);
    assert_eq!(render_cnf(&sg_pos(&g, &scope, &env).unwrap()), "A");
    let s = sg_dk(&g, &env, &FreshVars::new()).unwrap();
    assert_eq!(s.to_string(), "[A = b]");
}

#[test]
fn single_fact_grounds_its_argument() {
    let (_, env) = analyse("q(a).");
    assert_pos(&env, &key("q", 1), "w");
    assert_eq!(env.pos_passes, 1);
    assert_eq!(env.dk_passes, 1);
}

#[test]
fn failing_predicate_is_bottom() {
    let (_, env) = analyse("f(X) :- fail.\ng(X) :- X = a, X = b.");
    assert!(env.pos[&key("f", 1)].is_bottom());
    // groundness cannot see the clash, the depth-k set can
    assert_pos(&env, &key("g", 1), "w");
    assert!(env.dk[&key("g", 1)].is_empty());
}

#[test]
fn empty_program_has_empty_env() {
    let (_, env) = analyse("");
    assert!(env.pos.is_empty() && env.dk.is_empty());
}

#[test]
fn append_groundness() {
    let (_, env) = analyse("app([], Y, Y).\napp([H|T], Y, [H|Z]) :- app(T, Y, Z).");
    let f = &env.pos[&key("app", 3)];
    let w = parse_formula(f.space(), "(~w \\/ ~x \\/ y) /\\ (~y \\/ w) /\\ (~y \\/ x)").unwrap();
    assert!(f.equiv(&w).unwrap());
}

#[test]
fn pt_groundness_summary() {
    let (_, env) = analyse(PT);
    // on success the input list and pivot determine both outputs and back
    let f = &env.pos[&key("pt", 4)];
    let w = parse_formula(f.space(), "(~w \\/ y) /\\ (~w \\/ z) /\\ (~y \\/ ~z \\/ w)").unwrap();
    assert!(f.entails(&w).unwrap(), "{}", render_cnf(f));
}

#[test]
fn fixpoint_is_stable() {
    for src in [MEMBER, PT, "app([], Y, Y).\napp([H|T], Y, [H|Z]) :- app(T, Y, Z)."] {
        let (np, env) = analyse(src);
        let fresh = FreshVars::new();
        for p in np.predicates.values() {
            let again = sh_pos(p, &env).unwrap();
            assert!(again.entails(&env.pos[&p.key]).unwrap());
            let s = sh_dk(p, &env, &fresh).unwrap();
            assert!(env.dk[&p.key].is_top() || s.iter().all(|e| env.dk[&p.key].iter().any(|f| f == e)));
        }
    }
}

#[test]
fn cap_overflow_widens_to_top() {
    let config = SuccessConfig {
        depth_k: 6,
        dk_cap: 2,
        iteration_limit: 100,
    };
    let (_, env) = analyse_with("nat(0).\nnat(s(X)) :- nat(X).", config);
    assert!(env.dk[&key("nat", 1)].is_top());
    assert_pos(&env, &key("nat", 1), "w");
}

#[test]
fn iteration_limit_is_reported() {
    let np = program("nat(0).\nnat(s(X)) :- nat(X).");
    let config = SuccessConfig {
        depth_k: 8,
        dk_cap: 64,
        iteration_limit: 2,
    };
    let err = lfp_success(&np, config, &FreshVars::new()).unwrap_err();
    assert_eq!(
        err,
        SuccessError::IterationLimit {
            phase: "depth-k",
            predicate: key("nat", 1),
            limit: 2
        }
    );
}

#[test]
fn cut_in_query_is_rejected() {
    let (_, env) = analyse(MEMBER);
    let g = parse_goal("member(X, L), !").unwrap();
    let scope = Scope::for_goal(&g);
    assert_eq!(sg_pos(&g, &scope, &env), Err(SuccessError::Cut));
}

#[test]
fn unknown_callee_is_an_error() {
    let env = SuccessEnv::bottom(&program(""), SuccessConfig::default());
    let g = parse_goal("nope(X)").unwrap();
    let scope = Scope::for_goal(&g);
    assert_eq!(
        sg_pos(&g, &scope, &env),
        Err(SuccessError::UnknownPredicate(key("nope", 1)))
    );
}
