//! (a:b)-colourings: `b` colours per vertex out of `a`, neighbours disjoint.
//!
//! `cargo run --release --example ab_coloring`

use sco::pipeline::ab_coloring;
use sco::treewidth::Graph;

fn main() -> sco::Result<()> {
    let c5 = Graph::cycle(5);
    for (a, b) in [(3, 1), (5, 2), (4, 2), (2, 1)] {
        match ab_coloring(&c5, a, b)? {
            Some(colors) => println!("C5 ({a}:{b}): {colors:?}"),
            None => println!("C5 ({a}:{b}): impossible"),
        }
    }
    Ok(())
}
