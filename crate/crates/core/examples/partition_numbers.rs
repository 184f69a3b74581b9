//! Chromatic and domatic numbers through shifted optimization over run polytopes.
//!
//! `cargo run --release --example partition_numbers`

use std::time::Instant;

use sco::catalog::Predicate;
use sco::pipeline::{chromatic_number, domatic_number, partition_solve};
use sco::treewidth::Graph;

fn main() -> sco::Result<()> {
    let graphs = [
        ("K3", Graph::complete(3)),
        ("C5", Graph::cycle(5)),
        ("K4", Graph::complete(4)),
        ("C4", Graph::cycle(4)),
        ("P6", Graph::path(6)),
    ];
    for (name, g) in &graphs {
        let start = Instant::now();
        let chi = chromatic_number(g)?;
        let dom = domatic_number(g)?;
        println!("{name}: chromatic {chi}, domatic {dom} ({:.2?})", start.elapsed());
    }

    let start = Instant::now();
    let pet = Graph::petersen();
    println!("Petersen chromatic {} ({:.2?})", chromatic_number(&pet)?, start.elapsed());

    let parts = partition_solve(Predicate::VertexCover, &Graph::cycle(4), 2)?;
    println!("C4 split into two vertex covers: {parts:?}");
    Ok(())
}
