//! Nondecreasing costs need one linear optimization query, so `S` may be
//! implicit. Here `S` is every 0/1 vector with exactly `t` ones.
//!
//! `cargo run --example linopt_oracle`

use sco::explicit::{solve_linopt_oracle, solve_vertex, ExplicitInstance, ExplicitOracle, LinOptOracle, OracleAnswer};
use sco::shift::CostMatrix;

struct ExactlyT {
    n: usize,
    t: usize,
}

impl LinOptOracle for ExactlyT {
    fn maximize(&self, w: &[i64]) -> OracleAnswer {
        if self.t > self.n {
            return OracleAnswer::Infeasible;
        }
        let mut idx: Vec<usize> = (0..self.n).collect();
        idx.sort_by_key(|&i| (std::cmp::Reverse(w[i]), i));
        let mut s = vec![0; self.n];
        for &i in &idx[..self.t] {
            s[i] = 1;
        }
        OracleAnswer::Optimal(s)
    }

    fn contains(&self, s: &[i64]) -> Option<bool> {
        Some(s.len() == self.n && s.iter().all(|&x| x == 0 || x == 1) && s.iter().sum::<i64>() == self.t as i64)
    }
}

fn main() -> sco::Result<()> {
    let c = CostMatrix::from_rows(vec![vec![-2, 1, 4], vec![0, 0, 0], vec![1, 1, 1], vec![-5, 3, 3]])?;
    let oracle = ExactlyT { n: 4, t: 2 };
    println!("implicit set: {:?}", solve_linopt_oracle(&oracle, &c)?);

    // the same set written out, checked against the vertex solver
    let mut members = Vec::new();
    for a in 0..4 {
        for b in a + 1..4 {
            let mut s = vec![0; 4];
            s[a] = 1;
            s[b] = 1;
            members.push(s);
        }
    }
    let inst = ExplicitInstance::new(members.clone(), c.clone())?;
    println!("vertex solver objective: {:?}", solve_vertex(&inst)?.objective());
    println!("explicit oracle: {:?}", solve_linopt_oracle(&ExplicitOracle::new(members), &c)?);
    println!("empty set: {:?}", solve_linopt_oracle(&ExactlyT { n: 4, t: 5 }, &c)?);
    Ok(())
}
