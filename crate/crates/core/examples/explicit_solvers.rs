//! Solve one small explicit instance with every applicable solver.
//!
//! `cargo run --example explicit_solvers`

use sco::explicit::{brute_force_tuples, f_eval, solve_auto, solve_concave, solve_enum, ExplicitInstance};
use sco::shift::{shiftedness, CostMatrix};

fn main() -> sco::Result<()> {
    // three candidate vectors over two elements, pick r = 3 of them
    let s = vec![vec![2, 0], vec![1, 1], vec![0, 2]];
    // nonincreasing rows: the first use of an element is worth most
    let c = CostMatrix::from_rows(vec![vec![3, 1, 0], vec![2, 2, -1]])?;
    println!("cost shape: {:?}", shiftedness(&c));
    let inst = ExplicitInstance::new(s, c)?;

    for (name, res) in [
        ("enum", solve_enum(&inst)?),
        ("concave", solve_concave(&inst)?),
        ("brute", brute_force_tuples(&inst)?),
        ("auto", solve_auto(&inst)?),
    ] {
        let w = res.witness().expect("nonempty S always has an optimum");
        println!("{name:>8}: objective {:?}, multiplicities {:?}", res.objective(), w.parts());
        assert_eq!(f_eval(&inst, w)?, res.objective().unwrap());
    }

    let best = solve_enum(&inst)?;
    let x = inst.materialize(best.witness().unwrap(), 16)?;
    println!("chosen columns: {:?}", x.columns());
    Ok(())
}
