//! Covering problems written as shifted optimization instances, and the
//! vulnerability and lexicographic objectives.
//!
//! `cargo run --example reductions`

use std::collections::BTreeSet;

use sco::apps::{
    build_lexicographic_objective, build_vulnerability_objective, domset_to_sco, msc_cost_row, msc_target, msc_to_sco,
    MscInstance,
};
use sco::explicit::{solve_auto, solve_enum, ExplicitInstance};
use sco::shift::shiftedness;
use sco::treewidth::Graph;

fn main() -> sco::Result<()> {
    // dominating sets: optimum n iff r vertices dominate
    let g = Graph::cycle(6);
    for r in 1..=3 {
        let opt = solve_auto(&domset_to_sco(&g, r)?)?.objective().unwrap();
        println!("C6, r = {r}: optimum {opt} of {}, dominated by {r}: {}", g.n(), opt == g.n() as i64);
    }

    // multiset cover with admissible counts
    let demands: Vec<BTreeSet<u64>> = vec![[2].into(), [1, 3].into(), [0, 2].into()];
    println!("cost row for {{1,3}}, r=3: {:?}", msc_cost_row(&demands[1], 3));
    let inst = MscInstance::new(3, demands, vec![vec![0, 1], vec![0, 2], vec![1]], 3)?;
    let opt = solve_enum(&msc_to_sco(&inst)?)?;
    let yes = opt.objective() == Some(msc_target(&inst));
    println!("msc optimum {:?}, target {}, yes-instance {yes}", opt.objective(), msc_target(&inst));

    // how many elements do at least two of three chosen sets hit?
    let s = vec![vec![1, 1, 0, 0], vec![0, 1, 1, 0], vec![0, 0, 1, 1]];
    let vuln = build_vulnerability_objective(4, 3, 2)?;
    let res = solve_enum(&ExplicitInstance::new(s.clone(), vuln)?)?;
    println!("fewest 2-vulnerable elements: {} via {:?}", -res.objective().unwrap(), res.witness().unwrap().parts());

    let lex = build_lexicographic_objective(4, 3)?;
    println!("lexicographic rows {:?}, shape {:?}", lex.explicit_rows(8)?[0], shiftedness(&lex));
    let res = solve_auto(&ExplicitInstance::new(s, lex)?)?;
    println!("lexicographic optimum {:?} via {:?}", res.objective(), res.witness().unwrap().parts());
    Ok(())
}
