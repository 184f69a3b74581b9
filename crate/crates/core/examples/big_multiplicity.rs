//! A cost matrix given by partial sums lets `r` be astronomically large.
//!
//! `cargo run --release --example big_multiplicity`

use std::time::Instant;

use sco::explicit::{solve_concave, ExplicitInstance};
use sco::shift::CostMatrix;

fn main() -> sco::Result<()> {
    for r in [10u64, 1_000_000, 1_000_000_000_000] {
        // row (1,1,1,1,1,0,0,...): only the first five uses of the element pay
        let c = CostMatrix::from_segments(vec![vec![(5, 1), (r - 5, 0)]])?;
        let inst = ExplicitInstance::new(vec![vec![1], vec![0]], c)?;
        let start = Instant::now();
        let res = solve_concave(&inst)?;
        println!(
            "r = {r:>14}: objective {:?}, multiplicities {:?} ({:.2?})",
            res.objective(),
            res.witness().unwrap().parts(),
            start.elapsed()
        );
    }

    // three members, two elements, rows with a few breakpoints
    let r = 1u64 << 40;
    let c = CostMatrix::from_segments(vec![
        vec![(1000, 7), (r - 1000, -1)],
        vec![(3, 9), (17, 2), (r - 20, -3)],
    ])?;
    let inst = ExplicitInstance::new(vec![vec![1, 0], vec![0, 1], vec![1, 1]], c)?;
    let res = solve_concave(&inst)?;
    println!("r = 2^40 with breakpoints: objective {:?}, multiplicities {:?}", res.objective(), res.witness().unwrap().parts());
    Ok(())
}
