//! The full pipeline with an oracle pass, emitted as JSON.

use redalert::pipeline::{analyze_source, AnalysisConfig, OracleConfig};
use redalert::report::{emit_json, DetReport};

fn main() {
    let src = "
lookup(K, [K-V|_], V) :- !.
lookup(K, [_|Ps], V) :- lookup(K, Ps, V).
update(K, V, [], [K-V]).
update(K, V, [K-_|Ps], [K-V|Ps]) :- !.
update(K, V, [P|Ps], [P|Qs]) :- update(K, V, Ps, Qs).
";
    let config = AnalysisConfig {
        oracle: Some(OracleConfig {
            trials: 50,
            seed: 1,
            ..OracleConfig::default()
        }),
        ..AnalysisConfig::default()
    };
    let analysis = analyze_source("lookup.pl", src, &config).unwrap();
    let report = DetReport::new(&analysis, &config);
    print!("{}", report.render_text());
    print!("{}", emit_json(&[report]));
}
