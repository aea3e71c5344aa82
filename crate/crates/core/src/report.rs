//! Text and JSON rendering of analysis results.

use serde::Serialize;

use crate::oracle::Verdict;
use crate::pipeline::{Analysis, AnalysisConfig, TimingProfile};
use crate::pos::text::{render_cnf, render_dnf};
use crate::pos::PosFormula;
use crate::term::PredKey;

#[derive(Debug, Clone)]
pub struct PredicateReport {
    pub key: PredKey,
    /// Over the positional argument names.
    pub condition: PosFormula,
    pub stratum: usize,
    pub f1: PosFormula,
    pub f2: PosFormula,
}

#[derive(Debug, Clone)]
pub struct DetReport {
    pub file: String,
    /// Source predicates in order of first definition.
    pub predicates: Vec<PredicateReport>,
    pub aux_predicates: usize,
    pub warnings: Vec<String>,
    pub timings: Option<TimingProfile>,
    pub verdicts: Vec<Verdict>,
    pub oracle_requested: bool,
    pub normal_form: Option<String>,
    pub success: Option<String>,
}

impl DetReport {
    pub fn new(a: &Analysis, config: &AnalysisConfig) -> DetReport {
        let predicates = a
            .program
            .predicates()
            .filter(|k| !k.is_aux())
            .map(|k| PredicateReport {
                key: k.clone(),
                condition: a.det.conds[k].clone(),
                stratum: a.normal.stratum_of(k),
                f1: a.mux[k].f1.clone(),
                f2: a.mux[k].f2.clone(),
            })
            .collect();
        let mut warnings = a.normal.warnings.clone();
        for (k, s) in &a.success.dk {
            if s.is_top() {
                warnings.push(format!(
                    "depth-k success set of {k} exceeded {} elements and was widened to top",
                    config.dk_cap
                ));
            }
        }
        DetReport {
            file: a.file.clone(),
            predicates,
            aux_predicates: a.normal.new_count,
            warnings,
            timings: config.timings.then_some(a.timings),
            verdicts: a.verdicts.clone(),
            oracle_requested: config.oracle.is_some(),
            normal_form: config.dump_normal_form.then(|| a.normal.render()),
            success: config.dump_success.then(|| a.success.render()),
        }
    }

    /// Totals over all trials: `(trials, passes, inconclusive)`.
    pub fn oracle_totals(&self) -> (usize, usize, usize) {
        self.verdicts.iter().fold((0, 0, 0), |(t, p, i), v| {
            (t + v.trials, p + v.passes, i + v.inconclusive)
        })
    }

    /// One `name/arity : condition` line per predicate, with dumps,
    /// warnings, oracle results and timings as `%` comments around them.
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        if let Some(nf) = &self.normal_form {
            s.push_str("% normal form\n");
            s.push_str(nf);
        }
        if let Some(success) = &self.success {
            s.push_str("% success summaries\n");
            for line in success.lines() {
                s.push_str("% ");
                s.push_str(line);
                s.push('\n');
            }
        }
        for p in &self.predicates {
            s.push_str(&format!("{} : {}\n", p.key, render_cnf(&p.condition)));
        }
        for w in &self.warnings {
            s.push_str(&format!("% warning: {w}\n"));
        }
        if self.oracle_requested {
            let (t, p, i) = self.oracle_totals();
            s.push_str(&format!("% oracle: {t} trials, {p} passed, {i} inconclusive\n"));
            for v in &self.verdicts {
                s.push_str(&format!("%   {v}\n"));
            }
        }
        if let Some(t) = &self.timings {
            let parts: Vec<String> = t
                .phases()
                .iter()
                .map(|(name, d)| format!("{name} {:.3} ms", d.as_secs_f64() * 1e3))
                .collect();
            s.push_str(&format!("% timings: {}\n", parts.join(", ")));
        }
        s
    }
}

#[derive(Serialize)]
struct JsonPredicate {
    name: String,
    arity: usize,
    condition: String,
    condition_dnf: Vec<Vec<String>>,
    bottom: bool,
    stratum: usize,
    mux_f1: Vec<Vec<String>>,
    mux_f2: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct JsonTimings {
    parse_ms: f64,
    normalize_ms: f64,
    groundness_ms: f64,
    depth_k_ms: f64,
    mux_ms: f64,
    determinacy_ms: f64,
    oracle_ms: f64,
}

#[derive(Serialize)]
struct JsonCounterexample {
    predicate: String,
    goal: String,
    answers: usize,
}

#[derive(Serialize)]
struct JsonOracle {
    trials: usize,
    passes: usize,
    inconclusive: usize,
    counterexamples: Vec<JsonCounterexample>,
}

#[derive(Serialize)]
struct JsonReport {
    file: String,
    predicates: Vec<JsonPredicate>,
    aux_predicates: usize,
    timings: Option<JsonTimings>,
    warnings: Vec<String>,
    oracle: Option<JsonOracle>,
    #[serde(skip_serializing_if = "Option::is_none")]
    normal_form: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    success: Option<String>,
}

fn ms(d: std::time::Duration) -> f64 {
    (d.as_secs_f64() * 1e6).round() / 1e3
}

fn json_report(r: &DetReport) -> JsonReport {
    JsonReport {
        file: r.file.clone(),
        predicates: r
            .predicates
            .iter()
            .map(|p| JsonPredicate {
                name: p.key.name.to_string(),
                arity: p.key.arity,
                condition: render_cnf(&p.condition),
                condition_dnf: render_dnf(&p.condition),
                bottom: p.condition.is_bottom(),
                stratum: p.stratum,
                mux_f1: render_dnf(&p.f1),
                mux_f2: render_dnf(&p.f2),
            })
            .collect(),
        aux_predicates: r.aux_predicates,
        timings: r.timings.map(|t| JsonTimings {
            parse_ms: ms(t.parse),
            normalize_ms: ms(t.normalize),
            groundness_ms: ms(t.groundness),
            depth_k_ms: ms(t.depth_k),
            mux_ms: ms(t.mux),
            determinacy_ms: ms(t.determinacy),
            oracle_ms: ms(t.oracle),
        }),
        warnings: r.warnings.clone(),
        oracle: r.oracle_requested.then(|| {
            let (trials, passes, inconclusive) = r.oracle_totals();
            JsonOracle {
                trials,
                passes,
                inconclusive,
                counterexamples: r
                    .verdicts
                    .iter()
                    .filter_map(|v| {
                        v.witness.as_ref().map(|w| JsonCounterexample {
                            predicate: v.key.to_string(),
                            goal: w.goal.clone(),
                            answers: w.answers,
                        })
                    })
                    .collect(),
            }
        }),
        normal_form: r.normal_form.clone(),
        success: r.success.clone(),
    }
}

/// A single report as a JSON object, several as an array, in input order.
pub fn emit_json(reports: &[DetReport]) -> String {
    let text = if reports.len() == 1 {
        serde_json::to_string_pretty(&json_report(&reports[0]))
    } else {
        serde_json::to_string_pretty(&reports.iter().map(json_report).collect::<Vec<_>>())
    };
    let mut text = text.expect("report serialises");
    text.push('\n');
    text
}
