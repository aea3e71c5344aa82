use super::*;
use crate::frontend::{expand_disjunctions, parse, parse_goal};
use crate::normalize::normalize_program;
use crate::pos::text::{parse_formula, render_cnf};
use crate::success::{lfp_success, SuccessConfig};

struct Run {
    np: NormalProgram,
    senv: SuccessEnv,
    mux: IndexMap<PredKey, MuxPair>,
    env: DetEnv,
}

fn run_with(src: &str, sc: SuccessConfig, dc: DetConfig) -> Run {
    let p = expand_disjunctions(&parse(src).unwrap()).unwrap();
    let np = normalize_program(&p, &FreshVars::new(), false).unwrap();
    let fresh = FreshVars::new();
    let senv = lfp_success(&np, sc, &fresh).unwrap();
    let mux = mux_table(&np, &senv, dc.max_subset, &fresh).unwrap();
    let env = gfp_det(&np, &senv, &mux, dc).unwrap();
    Run { np, senv, mux, env }
}

fn run(src: &str) -> Run {
    run_with(src, SuccessConfig::default(), DetConfig::default())
}

fn corpus(name: &str) -> String {
    std::fs::read_to_string(format!("{}/corpus/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

const CORPUS: [&str; 11] = [
    "member.pl",
    "pt.pl",
    "rot.pl",
    "qsort.pl",
    "nrev.pl",
    "max.pl",
    "len.pl",
    "select.pl",
    "lookup.pl",
    "tree.pl",
    "classify.pl",
];

fn key(name: &str, arity: usize) -> PredKey {
    PredKey::new(name, arity)
}

fn cond_is(r: &Run, k: &PredKey, want: &str) {
    let f = &r.env.conds[k];
    let w = parse_formula(f.space(), want).unwrap();
    assert!(f.equiv(&w).unwrap(), "{k}: got {}, want {want}", render_cnf(f));
}

#[test]
fn member_is_nondeterministic_memberchk_is_not() {
    let r = run(&corpus("member.pl"));
    assert!(r.env.conds[&key("member", 2)].is_bottom());
    assert!(r.env.conds[&key("memberchk", 2)].is_top());
    assert!(r.mux[&key("member", 2)].f1.is_bottom());
    assert!(r.mux[&key("memberchk", 2)].f1.is_top());
    assert!(r.mux[&key("memberchk", 2)].f2.is_top());
}

#[test]
fn memberchk_does_not_consult_member() {
    let r = run(&corpus("member.pl"));
    assert!(r.env.reads[&key("memberchk", 2)].is_empty());
    assert!(r.env.reads[&key("member", 2)].contains(&key("member", 2)));
}

#[test]
fn pt_condition() {
    let r = run(&corpus("pt.pl"));
    let k = key("pt", 4);
    // one step from true reaches f1 ∧ f2, which the recursive call keeps
    cond_is(&r, &k, "w \\/ (y /\\ z)");
    let space = r.env.conds[&k].space();
    assert!(r.mux[&k].f1.equiv(&parse_formula(space, "w \\/ z").unwrap()).unwrap());
    assert!(r.mux[&k].f2.equiv(&parse_formula(space, "w \\/ y").unwrap()).unwrap());
    // strictly weaker than requiring the list together with an output
    let stronger = parse_formula(space, "w /\\ (y \\/ z)").unwrap();
    assert!(stronger.entails(&r.env.conds[&k]).unwrap());
    assert!(!r.env.conds[&k].entails(&stronger).unwrap());
    // and no worse than treating the cut as a monotone guard
    let guarded = parse_formula(space, "(w /\\ x) \\/ (x /\\ y /\\ z)").unwrap();
    assert!(guarded.entails(&r.env.conds[&k]).unwrap());
}

#[test]
fn rot_needs_either_argument() {
    let r = run(&corpus("rot.pl"));
    let f = &r.env.conds[&key("rot", 2)];
    for v in ["w", "x"] {
        let g = parse_formula(f.space(), v).unwrap();
        assert!(g.entails(f).unwrap(), "{v} does not entail {}", render_cnf(f));
    }
}

#[test]
fn corpus_conditions() {
    let expect = [
        ("rot.pl", "diag", 3, "w \\/ x"),
        ("nrev.pl", "append", 3, "w"),
        ("nrev.pl", "nrev", 2, "w"),
        ("qsort.pl", "qsort", 2, "w"),
        ("max.pl", "max", 3, "true"),
        ("max.pl", "min_list", 2, "w"),
        ("len.pl", "len", 2, "w"),
        ("select.pl", "select", 3, "false"),
        ("lookup.pl", "lookup", 3, "true"),
        ("lookup.pl", "update", 4, "y"),
        ("tree.pl", "insert", 3, "x /\\ y"),
        ("tree.pl", "in_tree", 2, "true"),
        ("classify.pl", "sign", 2, "x"),
    ];
    for (file, name, arity, want) in expect {
        let r = run(&corpus(file));
        cond_is(&r, &key(name, arity), want);
    }
}

#[test]
fn two_facts_are_separated_by_their_argument() {
    let r = run("c(a).\nc(b).");
    cond_is(&r, &key("c", 1), "w");
    let r = run("c(a).\nc(X).");
    cond_is(&r, &key("c", 1), "false");
}

#[test]
fn jacobi_reaches_the_same_fixpoint() {
    for file in CORPUS {
        let src = corpus(file);
        let chaotic = run(&src);
        let jacobi = run_with(
            &src,
            SuccessConfig::default(),
            DetConfig {
                jacobi: true,
                ..DetConfig::default()
            },
        );
        for (k, f) in &chaotic.env.conds {
            assert!(f.equiv(&jacobi.env.conds[k]).unwrap(), "{file} {k}");
        }
        assert!(jacobi.env.passes >= chaotic.env.passes);
    }
}

#[test]
fn fixpoint_is_stable() {
    for file in CORPUS {
        let r = run(&corpus(file));
        for p in r.np.predicates.values() {
            let again = dh(p, &r.mux[&p.key], &r.env, &r.senv).unwrap();
            assert!(again.equiv(&r.env.conds[&p.key]).unwrap(), "{file} {}", p.key);
        }
    }
}

#[test]
fn weaker_success_information_never_weakens_conditions() {
    for file in CORPUS {
        let src = corpus(file);
        let precise = run(&src);
        // a cap of one sends nearly every depth-k set to top
        let coarse = run_with(
            &src,
            SuccessConfig {
                dk_cap: 1,
                ..SuccessConfig::default()
            },
            DetConfig::default(),
        );
        for (k, f) in &coarse.env.conds {
            assert!(f.entails(&precise.env.conds[k]).unwrap(), "{file} {k}");
        }
    }
}

#[test]
fn query_conditions() {
    let r = run(&corpus("member.pl"));
    let (_, f) = goal_condition(&parse_goal("member(A, S)").unwrap(), &r.env, &r.senv).unwrap();
    assert!(f.is_bottom());
    let (_, f) = goal_condition(&Goal::True, &r.env, &r.senv).unwrap();
    assert!(f.is_top());
    let (_, f) = goal_condition(&parse_goal("memberchk(A, [1, 2])").unwrap(), &r.env, &r.senv).unwrap();
    assert!(f.is_top());

    let r = run(&corpus("pt.pl"));
    let (scope, f) = goal_condition(&parse_goal("pt(W, X, Y, Z)").unwrap(), &r.env, &r.senv).unwrap();
    assert!(f.equiv(&parse_formula(scope.space(), "W \\/ (Y /\\ Z)").unwrap()).unwrap());
    // a ground list argument discharges the condition
    let (_, f) = goal_condition(&parse_goal("pt([3, 1], X, Y, Z)").unwrap(), &r.env, &r.senv).unwrap();
    assert!(f.is_top());
}

#[test]
fn conjunctive_queries_use_both_directions() {
    let r = run(&corpus("nrev.pl"));
    // append(A, B, C) needs A; nrev(C, D) grounds C only when D is ground
    let g = parse_goal("nrev(D, C), append(A, B, C)").unwrap();
    let (scope, f) = goal_condition(&g, &r.env, &r.senv).unwrap();
    assert!(parse_formula(scope.space(), "D /\\ A").unwrap().entails(&f).unwrap());
}

#[test]
fn disjunctive_query_is_rejected() {
    let r = run(&corpus("member.pl"));
    let g = parse_goal("(member(A, S) ; A = 1)").unwrap();
    assert_eq!(goal_condition(&g, &r.env, &r.senv).unwrap_err(), DetError::Disjunction);
}

#[test]
fn iteration_limit_is_reported() {
    let src = corpus("pt.pl");
    let p = parse(&src).unwrap();
    let np = normalize_program(&p, &FreshVars::new(), false).unwrap();
    let fresh = FreshVars::new();
    let senv = lfp_success(&np, SuccessConfig::default(), &fresh).unwrap();
    let mux = mux_table(&np, &senv, 4, &fresh).unwrap();
    let config = DetConfig {
        iteration_limit: 1,
        ..DetConfig::default()
    };
    assert!(matches!(
        gfp_det(&np, &senv, &mux, config),
        Err(DetError::IterationLimit { limit: 1, .. })
    ));
}
