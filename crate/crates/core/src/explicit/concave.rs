use num_traits::{ToPrimitive, Zero};

use super::lp::{lp_max, rational, rational_u, ConcaveProgram, ConcaveTerm, LpOutcome, PiecewiseLinear, Rational};
use super::{f_eval, Composition, ExplicitInstance, SolveResult};
use crate::error::{Error, Result};
use crate::shift::{shiftedness, Shiftedness};

/// Exact optimum for a shifted cost matrix, in explicit or partial-sums form.
///
/// `f` is concave in the multiplicities, so the continuous relaxation (each
/// row term is a nonnegative multiple of the concave piecewise-linear `w_i`
/// applied to a running total of multiplicities) is a tight LP bound at
/// integral points. Branch-and-bound on that bound finds the optimal value;
/// a second pass fixes the multiplicities one at a time to the largest
/// value that still attains it, which yields the lexicographically largest
/// optimal composition (the tie-break shared by all explicit solvers). One and two members are solved in closed form and
/// by binary search on the discrete derivative.
pub fn solve_concave(inst: &ExplicitInstance) -> Result<SolveResult> {
    if shiftedness(inst.cost()) != Shiftedness::Shifted {
        return Err(Error::NotShifted);
    }
    let (m, r) = (inst.m(), inst.r());
    if m == 1 {
        let witness = Composition::new(vec![r]);
        return Ok(SolveResult::Optimal { objective: f_eval(inst, &witness)?, witness });
    }
    if m == 2 {
        return solve_pair(inst);
    }

    let relaxation = Relaxation::new(inst)?;
    let mut lower = vec![0u64; m];
    let mut upper = vec![r; m];
    let (best, _) = relaxation
        .search(&lower, &upper, None)?
        .ok_or_else(|| Error::Internal("relaxation of a nonempty simplex is infeasible".into()))?;

    for k in 0..m - 1 {
        let attains = |v: u64, lower: &[u64], upper: &[u64]| -> Result<bool> {
            let mut lo = lower.to_vec();
            lo[k] = v;
            Ok(relaxation.search(&lo, upper, Some(best))?.is_some())
        };
        let (mut lo, mut hi) = (lower[k], upper[k]);
        if !attains(hi, &lower, &upper)? {
            // largest v in [lo, hi) that attains the optimum; lo always does
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if attains(mid, &lower, &upper)? {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            hi = lo;
        }
        lower[k] = hi;
        upper[k] = hi;
    }
    let fixed: u64 = lower[..m - 1].iter().sum();
    lower[m - 1] = r - fixed;
    let witness = Composition::new(lower);
    let objective = f_eval(inst, &witness)?;
    if objective != best {
        return Err(Error::Internal(format!("lexicographic pass found {objective}, expected {best}")));
    }
    Ok(SolveResult::Optimal { objective, witness })
}

// f(a, r - a) is concave in a; return the largest maximizer.
fn solve_pair(inst: &ExplicitInstance) -> Result<SolveResult> {
    let r = inst.r();
    let f = |a: u64| f_eval(inst, &Composition::new(vec![a, r - a]));
    // smallest a in [0, r) with f(a+1) < f(a), else r
    let (mut lo, mut hi) = (0u64, r);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if f(mid + 1)? < f(mid)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let witness = Composition::new(vec![lo, r - lo]);
    Ok(SolveResult::Optimal { objective: f(lo)?, witness })
}

struct Relaxation<'a> {
    inst: &'a ExplicitInstance,
    template: ConcaveProgram,
}

impl<'a> Relaxation<'a> {
    fn new(inst: &'a ExplicitInstance) -> Result<Self> {
        let (m, r) = (inst.m(), inst.r());
        let mut p = ConcaveProgram::new(m);
        p.equalities.push(((0..m).map(|k| (k, rational(1))).collect(), rational_u(r)));
        let mut constant = Rational::zero();
        for i in 0..inst.n() {
            // w_i as a concave function on [0, r], kinks where the cost row changes value
            let mut xs = vec![0u64];
            xs.extend(inst.cost().breakpoints(i));
            xs.push(r);
            let points = xs
                .iter()
                .map(|&x| Ok((rational_u(x), rational(inst.weight(i, x)?))))
                .collect::<Result<Vec<_>>>()?;
            let function = PiecewiseLinear::new(points)?;
            let order = inst.order(i);
            let vectors = inst.vectors();
            for k in 0..m - 1 {
                let gap = crate::error::sub(vectors[order[k]][i], vectors[order[k + 1]][i])?;
                if gap == 0 {
                    continue;
                }
                p.terms.push(ConcaveTerm {
                    weight: rational(gap),
                    argument: order[..=k].iter().map(|&j| (j, rational(1))).collect(),
                    offset: Rational::zero(),
                    function: function.clone(),
                });
            }
            constant += rational(vectors[order[m - 1]][i]) * rational(inst.weight(i, r)?);
        }
        p.constant = constant;
        Ok(Self { inst, template: p })
    }

    fn bound(&self, lower: &[u64], upper: &[u64]) -> Result<Option<(Rational, Vec<Rational>)>> {
        let mut p = self.template.clone();
        p.lower = lower.iter().map(|&v| Some(rational_u(v))).collect();
        p.upper = upper.iter().map(|&v| Some(rational_u(v))).collect();
        match lp_max(&p)? {
            LpOutcome::Optimal { value, point } => Ok(Some((value, point))),
            LpOutcome::Infeasible => Ok(None),
            LpOutcome::Unbounded => Err(Error::Internal("bounded relaxation reported unbounded".into())),
        }
    }

    /// Best composition within the box, or with `target`, any composition
    /// reaching at least `target`.
    fn search(&self, lower: &[u64], upper: &[u64], target: Option<i64>) -> Result<Option<(i64, Vec<u64>)>> {
        let r = self.inst.r();
        let mut incumbent: Option<(i64, Vec<u64>)> = None;
        let mut stack = vec![(lower.to_vec(), upper.to_vec())];
        while let Some((lo, hi)) = stack.pop() {
            if let (Some(t), Some((v, _))) = (target, &incumbent) {
                if *v >= t {
                    break;
                }
            }
            let Some((value, point)) = self.bound(&lo, &hi)? else { continue };
            let ub = value.floor().to_integer().to_i64().unwrap_or(i64::MAX);
            let pruned = match (target, &incumbent) {
                (Some(t), _) => ub < t,
                (None, Some((v, _))) => ub <= *v,
                (None, None) => false,
            };
            if pruned {
                continue;
            }
            if point.iter().all(|v| v.is_integer()) {
                let comp: Vec<u64> = point.iter().map(|v| v.to_integer().to_u64().unwrap()).collect();
                self.offer(&mut incumbent, comp)?;
                continue;
            }
            self.offer(&mut incumbent, round_into_box(&point, &lo, &hi, r))?;
            let k = point.iter().position(|v| !v.is_integer()).unwrap();
            let floor = point[k].floor().to_integer().to_u64().unwrap();
            let mut down = hi.clone();
            down[k] = floor;
            let mut up = lo.clone();
            up[k] = floor + 1;
            stack.push((lo.clone(), down));
            stack.push((up, hi));
        }
        Ok(match (target, incumbent) {
            (Some(t), Some((v, c))) if v >= t => Some((v, c)),
            (Some(_), _) => None,
            (None, inc) => inc,
        })
    }

    fn offer(&self, incumbent: &mut Option<(i64, Vec<u64>)>, comp: Vec<u64>) -> Result<()> {
        let comp = Composition::new(comp);
        let value = f_eval(self.inst, &comp)?;
        let better = match incumbent {
            None => true,
            Some((v, c)) => value > *v || (value == *v && comp.parts() > c.as_slice()),
        };
        if better {
            *incumbent = Some((value, comp.into_parts()));
        }
        Ok(())
    }
}

// Floors the point inside the box, then hands out the missing units by
// largest fractional part first.
fn round_into_box(point: &[Rational], lo: &[u64], hi: &[u64], r: u64) -> Vec<u64> {
    let mut comp: Vec<u64> = point
        .iter()
        .zip(lo.iter().zip(hi))
        .map(|(v, (&l, &h))| v.floor().to_integer().to_u64().unwrap_or(l).clamp(l, h))
        .collect();
    let mut missing = r.saturating_sub(comp.iter().sum());
    let mut by_fraction: Vec<usize> = (0..point.len()).collect();
    by_fraction.sort_by(|&a, &b| {
        let fa = &point[a] - point[a].floor();
        let fb = &point[b] - point[b].floor();
        fb.cmp(&fa).then(a.cmp(&b))
    });
    for k in by_fraction {
        if missing == 0 {
            break;
        }
        let room = hi[k] - comp[k];
        let take = room.min(missing);
        comp[k] += take;
        missing -= take;
    }
    comp
}
