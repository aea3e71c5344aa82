//! The whole analysis for one source file, and the driver that runs it over
//! several files and writes the report.

use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use indexmap::IndexMap;
use thiserror::Error;

use crate::detinfer::{gfp_det, mux_table, DetConfig, DetEnv, DetError, MuxPair};
use crate::frontend::{expand_disjunctions, parse, FrontendError, Program};
use crate::normalize::{normalize_program, NormalProgram, NormalizeError};
use crate::oracle::{check_determinacy, Budget, Oracle, Signature, TrialConfig, Verdict};
use crate::report::{emit_json, DetReport};
use crate::success::{lfp_dk, lfp_pos, SuccessConfig, SuccessEnv, SuccessError};
use crate::term::{FreshVars, PredKey};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub trials: usize,
    pub seed: u64,
    pub budget: Budget,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            trials: 200,
            seed: 0,
            budget: Budget::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisConfig {
    pub inputs: Vec<PathBuf>,
    pub depth_k: usize,
    /// Largest separating variable set tried by the mux synthesis.
    pub max_subset: usize,
    pub dk_cap: usize,
    pub iteration_limit: usize,
    pub relax_cut: bool,
    pub jacobi: bool,
    /// Validate each inferred condition with random trials.
    pub oracle: Option<OracleConfig>,
    pub format: Format,
    pub dump_normal_form: bool,
    pub dump_success: bool,
    /// Include phase timings in the report. Off by default so that reports
    /// are byte-for-byte reproducible.
    pub timings: bool,
    pub out: Option<PathBuf>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            inputs: Vec::new(),
            depth_k: 3,
            max_subset: 4,
            dk_cap: 64,
            iteration_limit: 1000,
            relax_cut: false,
            jacobi: false,
            oracle: None,
            format: Format::Text,
            dump_normal_form: false,
            dump_success: false,
            timings: false,
            out: None,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<(), PipelineError> {
        let numbers = [
            ("depth-k", self.depth_k),
            ("max-mux-arity", self.max_subset),
            ("dk-cap", self.dk_cap),
            ("iteration limit", self.iteration_limit),
        ];
        for (name, value) in numbers {
            if value == 0 {
                return Err(PipelineError::Config(format!("{name} must be positive")));
            }
        }
        if let Some(o) = &self.oracle {
            if o.trials == 0 {
                return Err(PipelineError::Config("oracle trials must be positive".into()));
            }
        }
        Ok(())
    }

    fn success_config(&self) -> SuccessConfig {
        SuccessConfig {
            depth_k: self.depth_k,
            dk_cap: self.dk_cap,
            iteration_limit: self.iteration_limit,
        }
    }

    fn det_config(&self) -> DetConfig {
        DetConfig {
            max_subset: self.max_subset,
            iteration_limit: self.iteration_limit,
            jacobi: self.jacobi,
        }
    }
}

/// Wall time of each phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TimingProfile {
    pub parse: Duration,
    pub normalize: Duration,
    pub groundness: Duration,
    pub depth_k: Duration,
    pub mux: Duration,
    pub determinacy: Duration,
    pub oracle: Duration,
}

impl TimingProfile {
    pub fn phases(&self) -> [(&'static str, Duration); 7] {
        [
            ("parse", self.parse),
            ("normalize", self.normalize),
            ("groundness", self.groundness),
            ("depth_k", self.depth_k),
            ("mux", self.mux),
            ("determinacy", self.determinacy),
            ("oracle", self.oracle),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{file}: cannot read: {message}")]
    Io { file: String, message: String },
    #[error("{file}: parse: {source}")]
    Parse { file: String, source: FrontendError },
    #[error("{file}: normalize: {source}")]
    Normalize { file: String, source: NormalizeError },
    #[error("{file}: success analysis: {source}")]
    Success { file: String, source: SuccessError },
    #[error("{file}: determinacy: {source}")]
    Determinacy { file: String, source: DetError },
}

/// Everything computed for one file.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub file: String,
    pub program: Program,
    pub normal: NormalProgram,
    pub success: SuccessEnv,
    pub mux: IndexMap<PredKey, MuxPair>,
    pub det: DetEnv,
    /// Empty unless the oracle was requested.
    pub verdicts: Vec<Verdict>,
    pub timings: TimingProfile,
}

fn timed<T>(slot: &mut Duration, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    *slot = start.elapsed();
    out
}

/// Runs every phase on one program text.
pub fn analyze_source(file: &str, source: &str, config: &AnalysisConfig) -> Result<Analysis, PipelineError> {
    let mut t = TimingProfile::default();
    let file_s = || file.to_string();
    let (program, expanded) = timed(&mut t.parse, || {
        let p = parse(source)?;
        let e = expand_disjunctions(&p)?;
        Ok((p, e))
    })
    .map_err(|source| PipelineError::Parse { file: file_s(), source })?;
    let fresh = FreshVars::new();
    let normal = timed(&mut t.normalize, || normalize_program(&expanded, &fresh, config.relax_cut))
        .map_err(|source| PipelineError::Normalize { file: file_s(), source })?;
    let success_err = |source| PipelineError::Success { file: file_s(), source };
    let mut success = SuccessEnv::bottom(&normal, config.success_config());
    timed(&mut t.groundness, || lfp_pos(&normal, &mut success)).map_err(success_err)?;
    timed(&mut t.depth_k, || lfp_dk(&normal, &mut success, &fresh)).map_err(success_err)?;
    let det_err = |source| PipelineError::Determinacy { file: file_s(), source };
    let mux = timed(&mut t.mux, || mux_table(&normal, &success, config.max_subset, &fresh)).map_err(det_err)?;
    let det = timed(&mut t.determinacy, || gfp_det(&normal, &success, &mux, config.det_config())).map_err(det_err)?;
    let verdicts = match &config.oracle {
        None => Vec::new(),
        Some(o) => timed(&mut t.oracle, || {
            let oracle = Oracle::new(&program, o.budget);
            let sig = Signature::of(&program);
            let trials = TrialConfig {
                trials: o.trials,
                seed: o.seed,
                max_depth: config.depth_k + 1,
                budget: o.budget,
                ..TrialConfig::default()
            };
            program
                .predicates()
                .filter(|k| !k.is_aux())
                .map(|k| check_determinacy(&oracle, &sig, k, &det.conds[k], trials))
                .collect()
        }),
    };
    Ok(Analysis {
        file: file.to_string(),
        program,
        normal,
        success,
        mux,
        det,
        verdicts,
        timings: t,
    })
}

/// Reads and analyses one file.
pub fn analyze_file(path: &std::path::Path, config: &AnalysisConfig) -> Result<Analysis, PipelineError> {
    let file = path.display().to_string();
    let source = std::fs::read_to_string(path).map_err(|e| PipelineError::Io {
        file: file.clone(),
        message: e.to_string(),
    })?;
    analyze_source(&file, &source, config)
}

/// Analyses every input (one thread each) and writes the report. Returns
/// the process exit status: 0 on success, 1 when some file could not be
/// analysed, 2 when the oracle found a counterexample.
pub fn run_with(config: &AnalysisConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if let Err(e) = config.validate() {
        let _ = writeln!(err, "error: {e}");
        return 1;
    }
    let results: Vec<Result<Analysis, PipelineError>> = std::thread::scope(|s| {
        let handles: Vec<_> = config
            .inputs
            .iter()
            .map(|path| s.spawn(move || analyze_file(path, config)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("analysis thread panicked"))
            .collect()
    });
    let mut status = 0;
    let mut reports = Vec::new();
    for r in results {
        match r {
            Ok(a) => reports.push(DetReport::new(&a, config)),
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                status = 1;
            }
        }
    }
    let text = match config.format {
        Format::Json => emit_json(&reports),
        Format::Text => {
            let many = config.inputs.len() > 1;
            reports
                .iter()
                .map(|r| if many { format!("% file {}\n{}", r.file, r.render_text()) } else { r.render_text() })
                .collect::<Vec<_>>()
                .join("\n")
        }
    };
    let written = match &config.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| e.to_string()),
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write report: {e}");
        return 1;
    }
    status.max(oracle_status(&reports, err))
}

/// 2 if any trial produced more than one answer, after reporting each.
fn oracle_status(reports: &[DetReport], err: &mut dyn Write) -> i32 {
    let mut status = 0;
    for r in reports {
        for v in r.verdicts.iter().filter(|v| !v.holds()) {
            let _ = writeln!(err, "error: {}: oracle counterexample: {v}", r.file);
            status = 2;
        }
    }
    status
}

pub fn run(config: &AnalysisConfig) -> i32 {
    run_with(config, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MEMBER: &str = "memberchk(X,L) :- member(X,L), !.
member(X,[X|_]).
member(X,[_|L]) :- member(X,L).";

    #[test]
    fn phases_are_all_timed() {
        let a = analyze_source("m.pl", MEMBER, &AnalysisConfig::default()).unwrap();
        assert_eq!(a.timings.oracle, Duration::ZERO);
        assert_eq!(a.timings.phases().len(), 7);
        assert!(a.verdicts.is_empty());
    }

    #[test]
    fn errors_name_file_and_phase() {
        let e = analyze_source("bad.pl", "p(X :- q.", &AnalysisConfig::default()).unwrap_err();
        assert!(e.to_string().starts_with("bad.pl: parse: syntax error at 1:"), "{e}");
        let e = analyze_source("p.pl", "p :- p, !, fail.\np.", &AnalysisConfig::default()).unwrap_err();
        assert!(e.to_string().contains("p.pl: normalize:"), "{e}");
        assert!(e.to_string().contains("p/0 -> p/0"), "{e}");
    }

    #[test]
    fn zero_settings_are_rejected() {
        let c = AnalysisConfig {
            dk_cap: 0,
            ..AnalysisConfig::default()
        };
        assert!(matches!(c.validate(), Err(PipelineError::Config(_))));
        let c = AnalysisConfig {
            oracle: Some(OracleConfig {
                trials: 0,
                ..OracleConfig::default()
            }),
            ..AnalysisConfig::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn counterexamples_give_status_two() {
        let c = AnalysisConfig {
            oracle: Some(OracleConfig {
                trials: 20,
                ..OracleConfig::default()
            }),
            ..AnalysisConfig::default()
        };
        let a = analyze_source("m.pl", MEMBER, &c).unwrap();
        let mut r = DetReport::new(&a, &c);
        let mut err = Vec::new();
        assert_eq!(oracle_status(&[r.clone()], &mut err), 0);
        // as if member/2 had been given `true`
        let oracle = Oracle::new(&a.program, Budget::default());
        let k = PredKey::new("member", 2);
        let top = crate::pos::PosFormula::top(&crate::success::head_space(2));
        r.verdicts = vec![check_determinacy(&oracle, &Signature::of(&a.program), &k, &top, TrialConfig::default())];
        assert_eq!(oracle_status(&[r], &mut err), 2);
        let msg = String::from_utf8(err).unwrap();
        assert!(msg.starts_with("error: m.pl: oracle counterexample: member/2: 200 trials"), "{msg}");
    }

    #[test]
    fn oracle_checks_source_predicates_only() {
        let c = AnalysisConfig {
            oracle: Some(OracleConfig {
                trials: 20,
                ..OracleConfig::default()
            }),
            ..AnalysisConfig::default()
        };
        let a = analyze_source("c.pl", "c(a).\nc(b).\nc(c).", &c).unwrap();
        assert!(a.normal.new_count > 0);
        assert_eq!(a.verdicts.len(), 1);
        assert!(a.verdicts[0].holds());
    }
}
