//! Bottom-up success patterns: the groundness formula and depth-k set each
//! predicate is known to satisfy whenever it succeeds.

use redalert::frontend::{expand_disjunctions, parse};
use redalert::normalize::normalize_program;
use redalert::success::{lfp_success, SuccessConfig};
use redalert::{FreshVars, PredKey};

fn main() {
    let src = "
app([], Ys, Ys).
app([X|Xs], Ys, [X|Zs]) :- app(Xs, Ys, Zs).
nrev([], []).
nrev([X|Xs], Ys) :- nrev(Xs, Rs), app(Rs, [X], Ys).
";
    let p = expand_disjunctions(&parse(src).unwrap()).unwrap();
    let fresh = FreshVars::new();
    let np = normalize_program(&p, &fresh, false).unwrap();
    let env = lfp_success(&np, SuccessConfig::default(), &fresh).unwrap();
    print!("{}", env.render());
    println!(
        "converged after {} groundness and {} depth-k passes",
        env.pos_passes, env.dk_passes
    );

    // a tighter cap makes the depth-k set give up
    let coarse = SuccessConfig {
        dk_cap: 2,
        ..SuccessConfig::default()
    };
    let env = lfp_success(&np, coarse, &fresh).unwrap();
    println!("with a cap of 2: app/3 depth-k set is {}", env.render_dk(&PredKey::new("app", 3)));
}
