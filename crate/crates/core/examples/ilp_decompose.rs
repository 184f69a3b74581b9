//! Separable minimisation over a bounded-treewidth equality system, and the
//! split of a point of the `k`-scaled system into `k` points.
//!
//! `cargo run --example ilp_decompose`

use sco::ilp::{decompose, gaifman_graph, scale_system, separable_min, DecomposableExtension, IlpSystem, SeparableObjective};

fn main() -> sco::Result<()> {
    // a path of 0/1 variables where neighbours sum to 1: alternating patterns
    let d = 6;
    let mut sys = IlpSystem::binary(d);
    for i in 0..d - 1 {
        sys.add_row([(i, 1), (i + 1, 1)], 1)?;
    }
    println!("gaifman edges: {:?}", gaifman_graph(&sys).edges());

    let mut f = SeparableObjective::zero(d);
    f.set(0, 0, vec![0, 5]); // x_0 = 1 costs 5
    let res = separable_min(&sys, &f)?;
    println!("separable optimum: {:?}", res);

    let ext = DecomposableExtension::new(sys, (0..d).collect(), true)?;
    let k = 4;
    let scaled = scale_system(&ext, k)?;
    // three copies of (1,0,1,0,1,0) plus one of (0,1,0,1,0,1)
    let z = vec![3, 1, 3, 1, 3, 1];
    assert!(scaled.is_feasible(&z));
    let parts = decompose(&ext, k, &z)?;
    println!("{z:?} splits into {parts:?}");
    Ok(())
}
