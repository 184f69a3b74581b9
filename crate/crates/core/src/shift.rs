//! Shift algebra: the shift operator, the shifted objective and the
//! partial-sum weight functions every solver builds on.
//!
//! A tuple `x = (x^1, ..., x^r)` of integer `n`-vectors is stored as a
//! [`ColumnMatrix`]. Its shift sorts every row nonincreasingly, so entry
//! `(i, k)` of the shift is the `k`-th largest value element `i` takes across
//! the tuple. A [`CostMatrix`] scores a shift entrywise.

use crate::error::{self, Error, Result};

/// Cap on the number of columns any operation will materialize explicitly.
pub const DEFAULT_MATERIALIZE_CAP: u64 = 1_000_000;

/// `r` integer column vectors of common length `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColumnMatrix {
    n: usize,
    columns: Vec<Vec<i64>>,
}

impl ColumnMatrix {
    pub fn new(n: usize, columns: Vec<Vec<i64>>) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::Invalid("a column matrix needs at least one column".into()));
        }
        if let Some(bad) = columns.iter().position(|c| c.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "column {bad} has length {}, expected {n}",
                columns[bad].len()
            )));
        }
        Ok(Self { n, columns })
    }

    /// Builds the matrix from its rows (`rows[i][k]` is entry `i` of column `k`).
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != r) {
            return Err(Error::DimensionMismatch("rows of unequal length".into()));
        }
        let columns = (0..r).map(|k| rows.iter().map(|row| row[k]).collect()).collect();
        Self::new(rows.len(), columns)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<i64>] {
        &self.columns
    }

    pub fn column(&self, k: usize) -> &[i64] {
        &self.columns[k]
    }

    pub fn row(&self, i: usize) -> Vec<i64> {
        self.columns.iter().map(|c| c[i]).collect()
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.n).map(|i| self.row(i)).collect()
    }
}

/// Returns the shift of `x`: every row sorted nonincreasingly.
pub fn shift(x: &ColumnMatrix) -> ColumnMatrix {
    let mut rows = x.rows();
    for row in &mut rows {
        // stable, though equal keys are equal values
        row.sort_by(|a, b| b.cmp(a));
    }
    let columns = (0..x.r())
        .map(|k| rows.iter().map(|row| row[k]).collect())
        .collect();
    ColumnMatrix { n: x.n, columns }
}

/// A maximal run of equal entries in a cost row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub len: u64,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct SegmentRow {
    segments: Vec<Segment>,
    // starts[s] = number of entries before segment s
    starts: Vec<u64>,
    // prefix[s] = partial sum of all entries before segment s
    prefix: Vec<i64>,
}

impl SegmentRow {
    fn new(raw: &[(u64, i64)]) -> Result<Self> {
        let mut segments: Vec<Segment> = Vec::new();
        for &(len, value) in raw {
            if len == 0 {
                continue;
            }
            match segments.last_mut() {
                Some(last) if last.value == value => {
                    last.len = last.len.checked_add(len).ok_or(Error::Overflow("segment length"))?
                }
                _ => segments.push(Segment { len, value }),
            }
        }
        let mut starts = Vec::with_capacity(segments.len());
        let mut prefix = Vec::with_capacity(segments.len());
        let (mut pos, mut sum) = (0u64, 0i64);
        for seg in &segments {
            starts.push(pos);
            prefix.push(sum);
            pos = pos.checked_add(seg.len).ok_or(Error::Overflow("segment length"))?;
            sum = error::add(sum, error::mul(error::to_i64(seg.len)?, seg.value)?)?;
        }
        Ok(Self { segments, starts, prefix })
    }

    fn total_len(&self) -> u64 {
        self.starts.last().map_or(0, |s| s + self.segments.last().unwrap().len)
    }

    // index of the segment containing 0-based column k
    fn locate(&self, k: u64) -> usize {
        self.starts.partition_point(|&s| s <= k) - 1
    }

    fn entry(&self, k: u64) -> i64 {
        self.segments[self.locate(k)].value
    }

    fn gamma(&self, j: u64) -> Result<i64> {
        if j == 0 {
            return Ok(0);
        }
        let s = self.locate(j - 1);
        let inside = error::to_i64(j - self.starts[s])?;
        error::add(self.prefix[s], error::mul(inside, self.segments[s].value)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    Explicit(Vec<Vec<i64>>),
    PartialSums(Vec<SegmentRow>),
}

/// Cost matrix `c` with `n` rows and `r` columns.
///
/// Either stored explicitly, or in partial-sums form where every row is a
/// list of constant runs. The partial-sums form keeps `r` as a plain number,
/// so the multiplicity can be astronomically large while every partial sum
/// `gamma(i, j)` stays an `O(log)` lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostMatrix {
    n: usize,
    r: u64,
    repr: Repr,
}

impl CostMatrix {
    /// Explicit matrix from its rows; every row must have the same length `r >= 1`.
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let r = rows.first().map_or(0, Vec::len);
        if r == 0 {
            return Err(Error::Invalid("cost matrix needs r >= 1 columns".into()));
        }
        if rows.iter().any(|row| row.len() != r) {
            return Err(Error::DimensionMismatch("cost rows of unequal length".into()));
        }
        Ok(Self { n: rows.len(), r: r as u64, repr: Repr::Explicit(rows) })
    }

    /// Explicit `n x r` matrix with `n = 0` allowed (used for degenerate ground sets).
    pub fn empty(r: u64) -> Result<Self> {
        if r == 0 {
            return Err(Error::Invalid("cost matrix needs r >= 1 columns".into()));
        }
        Ok(Self { n: 0, r, repr: Repr::Explicit(Vec::new()) })
    }

    /// Partial-sums form: row `i` is the concatenation of `len` copies of
    /// `value` for each `(len, value)` in `rows[i]`. All rows must have total
    /// length `r >= 1`.
    pub fn from_segments(rows: Vec<Vec<(u64, i64)>>) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|raw| SegmentRow::new(raw))
            .collect::<Result<Vec<_>>>()?;
        let r = rows.first().map_or(0, SegmentRow::total_len);
        if r == 0 {
            return Err(Error::Invalid("cost matrix needs r >= 1 columns".into()));
        }
        if rows.iter().any(|row| row.total_len() != r) {
            return Err(Error::DimensionMismatch("segment rows of unequal total length".into()));
        }
        Ok(Self { n: rows.len(), r, repr: Repr::PartialSums(rows) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self.repr, Repr::Explicit(_))
    }

    /// Entry `c_i^{k+1}` (0-based column `k`).
    pub fn entry(&self, i: usize, k: u64) -> i64 {
        match &self.repr {
            Repr::Explicit(rows) => rows[i][k as usize],
            Repr::PartialSums(rows) => rows[i].entry(k),
        }
    }

    /// Partial sum `gamma(i, j) = c_i^1 + ... + c_i^j` for `0 <= j <= r`.
    pub fn gamma(&self, i: usize, j: u64) -> Result<i64> {
        debug_assert!(j <= self.r);
        match &self.repr {
            Repr::Explicit(rows) => rows[i][..j as usize]
                .iter()
                .try_fold(0i64, |acc, &v| error::add(acc, v)),
            Repr::PartialSums(rows) => rows[i].gamma(j),
        }
    }

    /// The constant runs of row `i`, merged.
    pub fn segments(&self, i: usize) -> Vec<Segment> {
        match &self.repr {
            Repr::Explicit(rows) => {
                let mut out: Vec<Segment> = Vec::new();
                for &value in &rows[i] {
                    match out.last_mut() {
                        Some(last) if last.value == value => last.len += 1,
                        _ => out.push(Segment { len: 1, value }),
                    }
                }
                out
            }
            Repr::PartialSums(rows) => rows[i].segments.clone(),
        }
    }

    /// Positions `j` in `(0, r)` where `c_i^j != c_i^{j+1}`: the kinks of `w_i`.
    pub fn breakpoints(&self, i: usize) -> Vec<u64> {
        let mut pos = 0;
        let segs = self.segments(i);
        let mut out = Vec::with_capacity(segs.len().saturating_sub(1));
        for seg in &segs[..segs.len().saturating_sub(1)] {
            pos += seg.len;
            out.push(pos);
        }
        out
    }

    /// All rows as explicit vectors, refusing when `r` exceeds `cap`.
    pub fn explicit_rows(&self, cap: u64) -> Result<Vec<Vec<i64>>> {
        match &self.repr {
            Repr::Explicit(rows) => Ok(rows.clone()),
            Repr::PartialSums(_) => {
                if self.r > cap {
                    return Err(Error::CapExceeded {
                        what: "materializing cost columns",
                        needed: self.r as u128,
                        cap: cap as u128,
                    });
                }
                Ok((0..self.n)
                    .map(|i| (0..self.r).map(|k| self.entry(i, k)).collect())
                    .collect())
            }
        }
    }

    /// Row-wise column sums `gamma(i, r)`.
    pub fn column_sum(&self) -> Result<Vec<i64>> {
        (0..self.n).map(|i| self.gamma(i, self.r)).collect()
    }

    /// `-c`, preserving the representation.
    pub fn negated(&self) -> Result<Self> {
        let neg = |v: i64| v.checked_neg().ok_or(Error::Overflow("negation"));
        let repr = match &self.repr {
            Repr::Explicit(rows) => Repr::Explicit(
                rows.iter()
                    .map(|row| row.iter().map(|&v| neg(v)).collect())
                    .collect::<Result<_>>()?,
            ),
            Repr::PartialSums(rows) => Repr::PartialSums(
                rows.iter()
                    .map(|row| {
                        let raw = row
                            .segments
                            .iter()
                            .map(|s| Ok((s.len, neg(s.value)?)))
                            .collect::<Result<Vec<_>>>()?;
                        SegmentRow::new(&raw)
                    })
                    .collect::<Result<_>>()?,
            ),
        };
        Ok(Self { n: self.n, r: self.r, repr })
    }
}

/// Evaluates `c . shift(x)`.
pub fn sco_objective(c: &CostMatrix, x: &ColumnMatrix) -> Result<i64> {
    if c.n() != x.n() || c.r() != x.r() as u64 {
        return Err(Error::DimensionMismatch(format!(
            "cost is {}x{}, tuple is {}x{}",
            c.n(),
            c.r(),
            x.n(),
            x.r()
        )));
    }
    let shifted = shift(x);
    let mut total = 0i64;
    for (k, column) in shifted.columns().iter().enumerate() {
        for (i, &v) in column.iter().enumerate() {
            total = error::add(total, error::mul(c.entry(i, k as u64), v)?)?;
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shiftedness {
    /// Every row nonincreasing (`c` equals its own shift).
    Shifted,
    /// Every row nondecreasing and at least one row not constant.
    AntiShifted,
    Neither,
}

pub fn shiftedness(c: &CostMatrix) -> Shiftedness {
    let (mut nonincreasing, mut nondecreasing) = (true, true);
    for i in 0..c.n() {
        for pair in c.segments(i).windows(2) {
            if pair[1].value > pair[0].value {
                nonincreasing = false;
            }
            if pair[1].value < pair[0].value {
                nondecreasing = false;
            }
        }
    }
    match (nonincreasing, nondecreasing) {
        (true, _) => Shiftedness::Shifted,
        (false, true) => Shiftedness::AntiShifted,
        _ => Shiftedness::Neither,
    }
}

/// True iff every row of `c` is nondecreasing (constant rows included).
pub fn rows_nondecreasing(c: &CostMatrix) -> bool {
    (0..c.n()).all(|i| c.segments(i).windows(2).all(|p| p[0].value <= p[1].value))
}

/// The per-row partial-sum functions `w_i(k) = c_i^1 + ... + c_i^k`.
///
/// Explicit cost matrices get full tables; partial-sums matrices are read
/// through on demand.
#[derive(Debug, Clone)]
pub struct WeightFunctions<'a> {
    cost: &'a CostMatrix,
    tables: Option<Vec<Vec<i64>>>,
}

impl<'a> WeightFunctions<'a> {
    pub fn n(&self) -> usize {
        self.cost.n()
    }

    pub fn r(&self) -> u64 {
        self.cost.r()
    }

    /// `w_i(k)` for `0 <= k <= r`.
    pub fn value(&self, i: usize, k: u64) -> Result<i64> {
        if k > self.cost.r() {
            return Err(Error::DimensionMismatch(format!("w_{i}({k}) with r = {}", self.cost.r())));
        }
        match &self.tables {
            Some(t) => Ok(t[i][k as usize]),
            None => self.cost.gamma(i, k),
        }
    }

    /// The full table of row `i`, when the cost matrix was explicit.
    pub fn table(&self, i: usize) -> Option<&[i64]> {
        self.tables.as_ref().map(|t| t[i].as_slice())
    }
}

pub fn weight_functions(c: &CostMatrix) -> Result<WeightFunctions<'_>> {
    let tables = match &c.repr {
        Repr::Explicit(rows) => Some(
            rows.iter()
                .map(|row| {
                    let mut table = Vec::with_capacity(row.len() + 1);
                    table.push(0);
                    for &v in row {
                        table.push(error::add(*table.last().unwrap(), v)?);
                    }
                    Ok(table)
                })
                .collect::<Result<Vec<_>>>()?,
        ),
        Repr::PartialSums(_) => None,
    };
    Ok(WeightFunctions { cost: c, tables })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cols(columns: &[&[i64]]) -> ColumnMatrix {
        ColumnMatrix::new(columns[0].len(), columns.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    #[test]
    fn shift_sorts_rows() {
        let x = ColumnMatrix::from_rows(&[vec![3, 1, 2]]).unwrap();
        assert_eq!(shift(&x).rows(), vec![vec![3, 2, 1]]);

        let x = cols(&[&[1, 0], &[1, 1]]);
        assert_eq!(x.rows(), vec![vec![1, 1], vec![0, 1]]);
        assert_eq!(shift(&x).rows(), vec![vec![1, 1], vec![1, 0]]);

        let sorted = ColumnMatrix::from_rows(&[vec![5, 5, 2], vec![0, -1, -4]]).unwrap();
        assert_eq!(shift(&sorted), sorted);
    }

    #[test]
    fn objective_examples() {
        let c = CostMatrix::from_rows(vec![vec![2, 1], vec![1, 0]]).unwrap();
        // shift rows [1,1],[1,0]: 2 + 1 + 1 + 0
        assert_eq!(sco_objective(&c, &cols(&[&[1, 0], &[1, 1]])).unwrap(), 4);

        let zero = CostMatrix::from_rows(vec![vec![0, 0], vec![0, 0]]).unwrap();
        assert_eq!(sco_objective(&zero, &cols(&[&[3, -2], &[7, 1]])).unwrap(), 0);

        let partition = CostMatrix::from_rows(vec![vec![1, -1], vec![1, -1]]).unwrap();
        assert_eq!(sco_objective(&partition, &cols(&[&[1, 0], &[0, 1]])).unwrap(), 2);
    }

    #[test]
    fn objective_rejects_mismatch_and_overflow() {
        let c = CostMatrix::from_rows(vec![vec![1, 1]]).unwrap();
        assert!(matches!(
            sco_objective(&c, &cols(&[&[1]])),
            Err(Error::DimensionMismatch(_))
        ));
        let big = CostMatrix::from_rows(vec![vec![i64::MAX, i64::MAX]]).unwrap();
        assert_eq!(
            sco_objective(&big, &cols(&[&[1], &[1]])),
            Err(Error::Overflow("addition"))
        );
    }

    #[test]
    fn shiftedness_examples() {
        let c = |rows: Vec<Vec<i64>>| CostMatrix::from_rows(rows).unwrap();
        assert_eq!(shiftedness(&c(vec![vec![2, 1], vec![1, 0]])), Shiftedness::Shifted);
        assert_eq!(shiftedness(&c(vec![vec![0, 1]])), Shiftedness::AntiShifted);
        assert_eq!(shiftedness(&c(vec![vec![1, 0], vec![0, 1]])), Shiftedness::Neither);
        assert_eq!(shiftedness(&c(vec![vec![4, 4]])), Shiftedness::Shifted);
    }

    #[test]
    fn weight_function_examples() {
        let c = CostMatrix::from_rows(vec![vec![3, 1, 0], vec![0, 0, 0]]).unwrap();
        let w = weight_functions(&c).unwrap();
        assert_eq!(w.table(0).unwrap(), &[0, 3, 4, 4]);
        assert_eq!(w.table(1).unwrap(), &[0, 0, 0, 0]);

        let c = CostMatrix::from_rows(vec![vec![1, -1]]).unwrap();
        assert_eq!(weight_functions(&c).unwrap().table(0).unwrap(), &[0, 1, 0]);
    }

    #[test]
    fn partial_sums_form_agrees_with_explicit() {
        let seg = CostMatrix::from_segments(vec![vec![(2, 3), (0, 9), (1, 3), (2, -1)]]).unwrap();
        let exp = CostMatrix::from_rows(vec![vec![3, 3, 3, -1, -1]]).unwrap();
        assert_eq!(seg.r(), 5);
        assert_eq!(seg.segments(0), exp.segments(0));
        assert_eq!(seg.breakpoints(0), vec![3]);
        for j in 0..=5 {
            assert_eq!(seg.gamma(0, j).unwrap(), exp.gamma(0, j).unwrap());
        }
        assert_eq!(seg.explicit_rows(10).unwrap(), exp.explicit_rows(10).unwrap());
        assert!(matches!(seg.explicit_rows(4), Err(Error::CapExceeded { .. })));
        let w = weight_functions(&seg).unwrap();
        assert!(w.table(0).is_none());
        assert_eq!(w.value(0, 4).unwrap(), 8);
    }

    #[test]
    fn huge_r_in_partial_sums_form() {
        let r = 1u64 << 40;
        let c = CostMatrix::from_segments(vec![vec![(5, 1), (r - 5, -1)]]).unwrap();
        assert_eq!(c.gamma(0, 5).unwrap(), 5);
        assert_eq!(c.gamma(0, r).unwrap(), 5 - (r as i64 - 5));
        assert_eq!(shiftedness(&c), Shiftedness::Shifted);
    }
}
