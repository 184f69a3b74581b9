//! Bag automata for graph predicates and the 0/1 flow polytope of their runs.
//!
//! `cargo run --example run_polytope`

use sco::catalog::{build_automaton_default, enumerate_sets, run_polytope, Predicate};
use sco::ilp::{separable_min, SeparableObjective, SeparableOutcome};
use sco::treewidth::Graph;

fn main() -> sco::Result<()> {
    let g = Graph::cycle(5);
    for p in Predicate::ALL {
        let a = build_automaton_default(p, &g)?;
        let rp = run_polytope(&a)?;
        let ext = rp.extension();
        println!(
            "{:>7}: {} sets, {} accepting runs, {} transitions, {} variables, {} rows, widest row {}",
            p.name(),
            enumerate_sets(p, &g)?.len(),
            a.accepting_runs(),
            a.num_transitions(),
            ext.system().num_vars(),
            ext.system().rows().len(),
            rp.max_support()
        );
    }

    // heaviest independent set of C5 under vertex weights, as a separable problem
    let weights = [3, 1, 4, 1, 5];
    let rp = run_polytope(&build_automaton_default(Predicate::IndependentSet, &g)?)?;
    let ext = rp.extension();
    let mut f = SeparableObjective::zero(ext.system().num_vars());
    for (v, &w) in weights.iter().enumerate() {
        f.set(ext.projection()[v], 0, vec![0, -w]);
    }
    if let SeparableOutcome::Optimal { x, value } = separable_min(ext.system(), &f)? {
        println!("max-weight independent set {:?} of weight {}", ext.project(&x), -value);
    }
    Ok(())
}
