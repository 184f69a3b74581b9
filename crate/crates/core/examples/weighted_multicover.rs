//! Weighted set multicover with many copies per set, described by the
//! cumulative weight of the lightest copies.
//!
//! `cargo run --example weighted_multicover`

use sco::apps::{solve_wsm, WsmInstance, WsmSet};

fn main() -> sco::Result<()> {
    let sets = vec![
        WsmSet { members: vec![0, 1], cum_weights: vec![0, 2, 5, 9] },
        WsmSet { members: vec![1, 2], cum_weights: vec![0, 1, 2, 3, 4] },
        WsmSet { members: vec![0, 2], cum_weights: vec![0, 4] },
    ];
    let inst = WsmInstance::new(3, vec![2, 3, 2], sets.clone())?;
    println!("demands (2,3,2): {:?}", solve_wsm(&inst)?);

    let inst = WsmInstance::new(3, vec![5, 0, 0], sets)?;
    println!("demands (5,0,0): {:?}", solve_wsm(&inst)?);

    // large demands stay cheap: the multiplicity is handled in binary
    let big = vec![WsmSet { members: vec![0], cum_weights: (0..=400).map(|j| j * j).collect() }];
    println!("demand 300 on one set: {:?}", solve_wsm(&WsmInstance::new(1, vec![300], big)?)?);
    Ok(())
}
