//! Running time of the partition pipeline as the multiplicity `r` doubles.
//! Fits the log-log slope between consecutive points.
//!
//! `cargo run --release --example xp_scaling`

use std::time::Instant;

use sco::catalog::{build_automaton_default, run_polytope, Predicate};
use sco::pipeline::{build_partition_objective, solve_sco_extension};
use sco::treewidth::Graph;

fn main() -> sco::Result<()> {
    for (name, g) in [("P3", Graph::path(3)), ("C5", Graph::cycle(5))] {
        let rp = run_polytope(&build_automaton_default(Predicate::IndependentSet, &g)?)?;
        let mut prev: Option<(f64, f64)> = None;
        for r in [2u64, 4, 8, 16] {
            let c = build_partition_objective(g.n(), r)?;
            let start = Instant::now();
            let res = solve_sco_extension(rp.extension(), &c, r)?;
            let secs = start.elapsed().as_secs_f64();
            let slope = prev.map(|(pr, pt)| (secs / pt).ln() / ((r as f64) / pr).ln());
            println!(
                "{name} r={r:>2}: objective {:?}, {:>9.3} ms, slope {}",
                res.objective(),
                secs * 1e3,
                slope.map_or("-".into(), |s| format!("{s:.2}"))
            );
            prev = Some((r as f64, secs));
        }
    }
    Ok(())
}
