use super::*;
use crate::frontend::{expand_disjunctions, parse, parse_clauses};

fn normalize(src: &str) -> Result<NormalProgram, NormalizeError> {
    let p = expand_disjunctions(&parse(src).unwrap()).unwrap();
    normalize_program(&p, &FreshVars::new(), false)
}

fn key(name: &str, arity: usize) -> PredKey {
    PredKey::new(name, arity)
}

fn expect_form(np: &NormalProgram, k: &PredKey, text: &str) {
    let want = parse_clauses(text).unwrap().remove(0);
    let got = np.get(k).unwrap().to_clause();
    assert!(alpha_equivalent(&got, &want), "got\n{}\nwant\n{}", np.get(k).unwrap().render(), text);
}

const MEMBER: &str = "memberchk(X,L) :- member(X,L), !.
member(X,[X|_]).
member(X,[_|L]) :- member(X,L).";

#[test]
fn memberchk_and_member_match_published_forms() {
    let np = normalize(MEMBER).unwrap();
    expect_form(&np, &key("memberchk", 2), "memberchk(X, L) :- false; (member(X, L), !, true); false.");
    expect_form(
        &np,
        &key("member", 2),
        "member(X, L) :- L = [X| _]; (false, !, true); (L = [_| L_1], member(X, L_1)).",
    );
    assert_eq!(np.predicates.len(), 2);
    assert_eq!(np.new_count, 0);
    assert_eq!(np.original_count, 2);
}

#[test]
fn member_below_memberchk() {
    let np = normalize(MEMBER).unwrap();
    assert_eq!(np.stratum_of(&key("member", 2)), 1);
    assert_eq!(np.stratum_of(&key("memberchk", 2)), 2);
    assert_eq!(np.strata.layers, vec![vec![key("member", 2)], vec![key("memberchk", 2)]]);
}

#[test]
fn pt_splits_at_its_cut() {
    let np = normalize(
        "pt([], _, [], []).
pt([X | Xs], M, [X | L], G) :- X =< M, !, pt(Xs, M, L, G).
pt([X | Xs], M, L, [X | G]) :- pt(Xs, M, L, G).",
    )
    .unwrap();
    expect_form(
        &np,
        &key("pt", 4),
        "pt(W, M, Y, Z) :-
            (W = [], Y = [], Z = [])
          ; (W = [X|Xs], Y = [X|L], X =< M, !, pt(Xs, M, L, Z))
          ; (W = [X1|Xs1], Z = [X1|G1], pt(Xs1, M, Y, G1)).",
    );
    assert_eq!(np.new_count, 0);
}

#[test]
fn self_guarded_cut_is_not_stratified() {
    let err = normalize("p :- p, !, fail.\np.").unwrap_err();
    let NormalizeError::NonStratified { witness } = &err;
    assert_eq!(witness, &vec![key("p", 0), key("p", 0)]);
    assert!(err.to_string().contains("p/0 -> p/0"));
}

#[test]
fn nonstratified_p_has_published_shape() {
    let p = parse("p :- p, !, fail.\np.").unwrap();
    let np = normalize_program(&p, &FreshVars::new(), true).unwrap();
    assert_eq!(np.warnings.len(), 1);
    // after relaxing, no G2 call remains and the program stratifies
    let q = np.get(&key("p", 0)).unwrap();
    assert_eq!(q.g2, Goal::Fail);
    assert_eq!(np.new_count, 1);
}

#[test]
fn published_nonstratified_form() {
    let p = parse("p :- p, !, fail.\np.").unwrap();
    let n = &mut Normalizer {
        fresh: &FreshVars::new(),
        next_aux: 1,
    };
    let mut out = Vec::new();
    let clauses: Vec<Clause> = p.clauses_of(&key("p", 0)).cloned().collect();
    n.predicate(&key("p", 0), &clauses, &mut out);
    let want = parse_clauses("p :- false ; p, !, false ; true.").unwrap().remove(0);
    assert!(alpha_equivalent(&out[0].to_clause(), &want), "{}", out[0].render());
}

#[test]
fn cut_free_program_is_one_stratum() {
    let np = normalize("app([], Y, Y).\napp([H|T], Y, [H|Z]) :- app(T, Y, Z).").unwrap();
    assert_eq!(np.strata.len(), 1);
}

#[test]
fn three_cut_free_clauses_need_one_auxiliary() {
    let np = normalize("c(a).\nc(b).\nc(c).").unwrap();
    assert_eq!(np.new_count, 1);
    let c = np.get(&key("c", 1)).unwrap();
    assert_eq!(c.aux_count, 1);
    assert!(matches!(&c.g4, Goal::Call(k, _) if k.is_aux()));
}

#[test]
fn clauses_before_first_cut_are_wrapped() {
    let np = normalize("q(1).\nq(2).\nq(X) :- X > 2, !.\nq(0).").unwrap();
    let q = np.get(&key("q", 1)).unwrap();
    assert!(matches!(&q.g1, Goal::Call(k, _) if k.is_aux()));
    // G4 is the single cut-free trailing clause
    assert!(matches!(&q.g4, Goal::Post(..)));
}

#[test]
fn second_cut_goes_into_auxiliary() {
    let np = normalize("r(X, Y) :- s(X), !, s(Y), !, X = Y.\ns(1).\ns(2).").unwrap();
    let r = np.get(&key("r", 2)).unwrap();
    let Goal::Call(aux, args) = &r.g3 else {
        panic!("expected an auxiliary call, got {}", r.g3)
    };
    assert_eq!(args.len(), 2);
    let a = np.get(aux).unwrap();
    assert!(!matches!(a.g2, Goal::Fail));
    assert_eq!(r.aux_count, 1);
}

#[test]
fn cut_clause_followed_by_cut_clauses_wraps_g4() {
    let np = normalize("t(1) :- !.\nt(2) :- !.\nt(3).").unwrap();
    let t = np.get(&key("t", 1)).unwrap();
    assert!(matches!(&t.g4, Goal::Call(k, _) if k.is_aux()));
    assert_eq!(t.g2, Goal::Post(Term::Var(t.head[0].clone()), Term::Int(1)));
    assert_eq!(t.g3, Goal::True);
}

#[test]
fn repeated_head_variables_become_equations() {
    let np = normalize("eq(X, X).").unwrap();
    let e = np.get(&key("eq", 2)).unwrap();
    assert_eq!(e.g1, Goal::Post(Term::Var(e.head[1].clone()), Term::Var(e.head[0].clone())));
}

#[test]
fn call_arguments_are_flattened() {
    let np = normalize("f(X) :- g(X, X, a).\ng(_, _, _).").unwrap();
    let f = np.get(&key("f", 1)).unwrap();
    let conj = f.g1.conjuncts();
    assert_eq!(conj.len(), 3);
    let Goal::Call(_, args) = conj[2] else { panic!() };
    assert!(args.iter().all(|a| a.as_var().is_some()));
    let mut vs: Vec<_> = args.iter().collect();
    vs.dedup();
    assert_eq!(vs.len(), 3);
}

#[test]
fn normal_goals_are_cut_and_disjunction_free() {
    for src in [
        MEMBER,
        "q(1).\nq(2).\nq(X) :- X > 2, !.\nq(0).",
        "r(X, Y) :- s(X), !, s(Y), !, X = Y.\ns(1).\ns(2).",
        "sign(X, S) :- ( X < 0, S = neg ; X >= 0, S = pos ).",
    ] {
        let np = normalize(src).unwrap();
        for p in np.predicates.values() {
            for g in [&p.g1, &p.g2, &p.g3, &p.g4] {
                assert!(!g.contains_cut() && !g.contains_disj(), "{}", p.render());
            }
            let mut hs = p.head.clone();
            hs.sort();
            hs.dedup();
            assert_eq!(hs.len(), p.head.len());
        }
        // recomputing the layering from scratch agrees
        assert_eq!(stratify(&np.predicates).unwrap(), np.strata);
        for p in np.predicates.values() {
            let s = np.stratum_of(&p.key);
            for (callee, strict) in p.calls() {
                let t = np.stratum_of(callee);
                assert!(if strict { t < s } else { t <= s });
            }
        }
    }
}

#[test]
fn rendered_form_reparses() {
    let np = normalize(MEMBER).unwrap();
    let text = np.render();
    let again = parse(&text).unwrap();
    assert_eq!(again.predicate_count(), 2);
    for c in &again.clauses {
        let orig = np.get(&c.key).unwrap().to_clause();
        assert!(alpha_equivalent(c, &orig), "{text}");
    }
}

#[test]
fn aux_numbering_continues_after_expansion() {
    let np = normalize("s(X) :- (X = 1 ; X = 2).\nc(a).\nc(b).\nc(c).").unwrap();
    let names: Vec<String> = np.predicates.keys().filter(|k| k.is_aux()).map(|k| k.to_string()).collect();
    assert_eq!(names.len(), 2);
    assert!(names.contains(&"$aux_1/1".to_string()));
    assert!(names.contains(&"$aux_2/1".to_string()));
}

#[test]
fn empty_program_normalises_to_nothing() {
    let np = normalize("").unwrap();
    assert!(np.predicates.is_empty());
    assert!(np.strata.is_empty());
}
