//! Tree decompositions and the weighted CSP dynamic program.
//!
//! `cargo run --example treewidth_csp`

use sco::treewidth::{
    csp_brute, csp_solve, make_nice, min_fill_decomposition, validate_decomposition, CspInstance, Graph,
    HardConstraint, SoftConstraint,
};

fn main() -> sco::Result<()> {
    for (name, g) in [("path(6)", Graph::path(6)), ("cycle(7)", Graph::cycle(7)), ("petersen", Graph::petersen())] {
        let td = min_fill_decomposition(&g);
        let nice = make_nice(&td)?;
        println!(
            "{name:>9}: {} bags, width {}, nice nodes {}, valid {}",
            td.len(),
            td.width(),
            nice.len(),
            validate_decomposition(&g, &td).is_empty()
        );
    }

    // choose a colour 0..3 per cycle vertex, neighbours differ, colour 0 costs 1,
    // colours must sum to 9
    let n = 7;
    let mut hard = Vec::new();
    let mut soft = Vec::new();
    for v in 0..n {
        let u = (v + 1) % n;
        let pairs = (0..3).flat_map(|a| (0..3).filter(move |&b| b != a).map(move |b| vec![a, b]));
        hard.push(HardConstraint::table(vec![v, u], pairs));
        soft.push(SoftConstraint::unary(v, [(0, 1)]));
    }
    hard.push(HardConstraint::linear_eq((0..n).collect(), vec![1; n], 9));
    let inst = CspInstance::new(vec![vec![0, 1, 2]; n], hard, soft)?;
    let td = min_fill_decomposition(&inst.constraint_graph());
    let sol = csp_solve(&inst, &td)?;
    println!("dp    : weight {:?}, assignment {:?}", sol.weight(), sol.assignment());
    println!("brute : weight {:?}", csp_brute(&inst)?.weight());
    Ok(())
}
