//! Answer sequences of the interpreter against answers recorded with an
//! independent Prolog system (see `goldens/record.sh`).

use redalert::frontend::{parse_goal, Program};
use redalert::oracle::{solve, Budget};
use redalert::{parse, Goal, Term};

struct Case {
    file: String,
    query: String,
    answers: Vec<Term>,
}

fn corpus(name: &str) -> Program {
    parse(&std::fs::read_to_string(format!("{}/corpus/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()).unwrap()
}

fn golden_term(line: &str) -> Term {
    match parse_goal(&format!("Golden = {line}")).unwrap() {
        Goal::Post(_, t) => t,
        g => panic!("unexpected golden line {g}"),
    }
}

fn cases() -> Vec<Case> {
    let text = include_str!("goldens/answers.txt");
    let mut out: Vec<Case> = Vec::new();
    for line in text.lines() {
        if let Some(header) = line.strip_prefix("% ") {
            let (file, query) = header.split_once('\t').unwrap();
            out.push(Case {
                file: file.to_string(),
                query: query.to_string(),
                answers: Vec::new(),
            });
        } else if line != "%end" {
            out.last_mut().unwrap().answers.push(golden_term(line));
        }
    }
    out
}

#[test]
fn every_case_is_recorded() {
    let listed = include_str!("goldens/cases.txt").lines().count();
    assert_eq!(cases().len(), listed);
}

#[test]
fn answers_match_reference_system() {
    for case in cases() {
        let program = corpus(&case.file);
        let goal = parse_goal(&case.query).unwrap();
        let seq = solve(&program, &goal, Budget::default());
        assert!(seq.exhausted, "{}: {:?}", case.query, seq.error);
        let got: Vec<Term> = seq
            .answers
            .iter()
            .map(|a| Term::list(a.numbered(), Term::nil()))
            .collect();
        assert_eq!(got, case.answers, "{} on {}", case.query, case.file);
    }
}
