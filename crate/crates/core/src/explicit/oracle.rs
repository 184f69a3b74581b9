use crate::error::{Error, Result};
use crate::shift::{rows_nondecreasing, ColumnMatrix, CostMatrix};

use super::dot;

/// Answer of a linear optimization oracle to `max { w . s : s in S }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleAnswer {
    Infeasible,
    Unbounded,
    Optimal(Vec<i64>),
}

/// A set `S` known only through linear optimization over it.
pub trait LinOptOracle {
    fn maximize(&self, w: &[i64]) -> OracleAnswer;

    /// Optional membership test used to validate answers. `None` means
    /// the oracle offers no check.
    fn contains(&self, _s: &[i64]) -> Option<bool> {
        None
    }
}

/// Oracle over an explicit list of vectors; ties go to the earliest member.
#[derive(Debug, Clone)]
pub struct ExplicitOracle {
    vectors: Vec<Vec<i64>>,
}

impl ExplicitOracle {
    pub fn new(vectors: Vec<Vec<i64>>) -> Self {
        Self { vectors }
    }
}

impl LinOptOracle for ExplicitOracle {
    fn maximize(&self, w: &[i64]) -> OracleAnswer {
        let mut best: Option<(i128, &Vec<i64>)> = None;
        for s in &self.vectors {
            let value: i128 = w.iter().zip(s).map(|(&a, &b)| a as i128 * b as i128).sum();
            if best.is_none_or(|(b, _)| value > b) {
                best = Some((value, s));
            }
        }
        match best {
            Some((_, s)) => OracleAnswer::Optimal(s.clone()),
            None => OracleAnswer::Infeasible,
        }
    }

    fn contains(&self, s: &[i64]) -> Option<bool> {
        Some(self.vectors.iter().any(|v| v == s))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinOptResult {
    Infeasible,
    Unbounded,
    /// The optimum repeats `solution` in all `r` columns.
    Optimal { objective: i64, solution: Vec<i64>, r: u64 },
}

impl LinOptResult {
    /// The optimal tuple `[s, ..., s]`, refusing when `r` exceeds `cap`.
    pub fn columns(&self, cap: u64) -> Result<Option<ColumnMatrix>> {
        match self {
            LinOptResult::Optimal { solution, r, .. } => {
                if *r > cap {
                    return Err(Error::CapExceeded {
                        what: "materializing the oracle solution",
                        needed: *r as u128,
                        cap: cap as u128,
                    });
                }
                Ok(Some(ColumnMatrix::new(solution.len(), vec![solution.clone(); *r as usize])?))
            }
            _ => Ok(None),
        }
    }
}

/// Shifted optimization with a nondecreasing cost over a set given by a
/// linear optimization oracle: one query on the row sums `w` of `c`
/// suffices, and the answer repeated `r` times is optimal.
pub fn solve_linopt_oracle(oracle: &dyn LinOptOracle, c: &CostMatrix) -> Result<LinOptResult> {
    if !rows_nondecreasing(c) {
        return Err(Error::NotAntiShifted);
    }
    let w = c.column_sum()?;
    match oracle.maximize(&w) {
        OracleAnswer::Infeasible => Ok(LinOptResult::Infeasible),
        OracleAnswer::Unbounded => Ok(LinOptResult::Unbounded),
        OracleAnswer::Optimal(s) => {
            if s.len() != c.n() || oracle.contains(&s) == Some(false) {
                return Err(Error::OracleViolation(s));
            }
            Ok(LinOptResult::Optimal { objective: dot(&w, &s)?, solution: s, r: c.r() })
        }
    }
}
