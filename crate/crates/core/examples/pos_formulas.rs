//! Boolean groundness formulas: construction, the lattice operations, and
//! the abstraction of a single constraint.

use redalert::pos::text::{parse_formula, render_cnf, render_dnf};
use redalert::pos::{alpha_atomic, PosFormula, VarId, VarSpace};

fn main() {
    let space = VarSpace::new(["X", "Y", "Z"]);
    let f = parse_formula(&space, "X /\\ (Y \\/ Z)").unwrap();
    let g = parse_formula(&space, "X \\/ (Y /\\ Z)").unwrap();
    println!("f          = {}", render_cnf(&f));
    println!("g          = {}", render_cnf(&g));
    println!("f or g     = {}", render_cnf(&f.disj(&g).unwrap()));
    println!("f -> g     = {}", render_cnf(&f.implies(&g).unwrap()));
    println!("exists X f = {}", render_cnf(&f.exists_elim(VarId(0))));
    println!("forall Y g = {}", render_cnf(&g.forall_elim(VarId(1))));
    println!("f |= g     : {}", f.entails(&g).unwrap());
    println!("g as DNF   : {:?}", render_dnf(&g));

    // X = c fixes X and says nothing about Y and Z, so either both are free
    // or all three are ground
    let a = alpha_atomic(&space, &[VarId(0), VarId(1), VarId(2)], &[VarId(0)]);
    println!("alpha(X = c) over X, Y, Z = {:?}", render_dnf(&a));
    println!("to Pos with bottom: {}", render_cnf(&PosFormula::var(&space, VarId(2)).to_pos_bottom()));
}
