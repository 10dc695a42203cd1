//! Dense square matrices, the validated stochastic and intensity types, and
//! the maximum-absolute-row-sum norm.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Tolerance on a stochastic row sum before it is rejected.
pub const ROW_SUM_TOLERANCE: f64 = 1e-6;
/// Entries in `[-NEGATIVE_SLACK, 0)` are clamped to zero.
pub const NEGATIVE_SLACK: f64 = 1e-9;
/// Off-diagonal intensities in `[-RATE_SLACK, 0)` are clamped to zero.
pub const RATE_SLACK: f64 = 1e-12;
/// Tolerance on an intensity row sum.
pub const GENERATOR_ROW_TOLERANCE: f64 = 1e-9;

/// Row-major dense `n x n` matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from row-major storage of length `n * n`.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        if data.len() != n * n {
            return Err(Error::NotSquare {
                row: data.len() / n,
                expected: n,
                found: data.len() % n,
            });
        }
        Ok(Self { n, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::NotSquare {
                    row: i,
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [f64] {
        let n = self.n;
        &mut self.data[i * n..(i + 1) * n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.n)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    pub fn check_finite(&self) -> Result<()> {
        for (k, &v) in self.data.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    row: k / self.n,
                    col: k % self.n,
                    value: v,
                });
            }
        }
        Ok(())
    }

    pub fn matmul(&self, other: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.n, other.n, "matmul dimension mismatch");
        let n = self.n;
        let mut out = SquareMatrix::zeros(n);
        for i in 0..n {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(&other.data[k * n..(k + 1) * n]) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn scaled(&self, s: f64) -> SquareMatrix {
        SquareMatrix {
            n: self.n,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn sub(&self, other: &SquareMatrix) -> Result<SquareMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &SquareMatrix) -> Result<SquareMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    fn zip_with(&self, other: &SquareMatrix, f: impl Fn(f64, f64) -> f64) -> Result<SquareMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(SquareMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &SquareMatrix) -> Result<f64> {
        Ok(self
            .sub(other)?
            .data
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs())))
    }

    /// Maximum absolute row sum, `max_i sum_j |m_ij|`.
    pub fn max_row_sum_norm(&self) -> Result<f64> {
        self.check_finite()?;
        Ok(self
            .rows()
            .map(|r| compensated_sum(r.iter().map(|v| v.abs())))
            .fold(0.0, f64::max))
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Display for SquareMatrix {
    /// Four-decimal display, one row per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|v| format!("{:>8.4}", clean_zero(*v))).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

// Avoids printing "-0.0000" for tiny negatives.
fn clean_zero(v: f64) -> f64 {
    if v.abs() < 5e-5 {
        0.0
    } else {
        v
    }
}

/// Neumaier-compensated sum.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `max_i sum_j |m_ij|` of an arbitrary square matrix.
pub fn max_row_sum_norm(m: &SquareMatrix) -> Result<f64> {
    m.max_row_sum_norm()
}

/// A validated row-stochastic matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    inner: SquareMatrix,
    max_renormalization: f64,
}

impl StochasticMatrix {
    pub fn n(&self) -> usize {
        self.inner.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner[(i, j)]
    }

    pub fn diag(&self, i: usize) -> f64 {
        self.inner[(i, i)]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.inner.row(i)
    }

    pub fn as_matrix(&self) -> &SquareMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> SquareMatrix {
        self.inner
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.inner.to_rows()
    }

    /// Largest `|row sum - 1|` corrected during validation.
    pub fn max_renormalization(&self) -> f64 {
        self.max_renormalization
    }

    /// True when every diagonal entry equals the first one.
    pub fn has_equal_diagonal(&self) -> Option<f64> {
        let p = self.diag(0);
        (1..self.n()).all(|i| self.diag(i) == p).then_some(p)
    }

    // Rows produced by exact normalization; skips re-validation.
    pub(crate) fn from_normalized(inner: SquareMatrix) -> Self {
        Self {
            inner,
            max_renormalization: 0.0,
        }
    }
}

impl TryFrom<SquareMatrix> for StochasticMatrix {
    type Error = Error;

    fn try_from(m: SquareMatrix) -> Result<Self> {
        validate_matrix(m)
    }
}

impl fmt::Display for StochasticMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.inner.fmt(f)
    }
}

/// Validates a raw row array as a stochastic matrix, clamping tiny negatives
/// and renormalizing rows whose sum is off by at most `ROW_SUM_TOLERANCE`.
pub fn validate_stochastic<R: AsRef<[f64]>>(rows: &[R]) -> Result<StochasticMatrix> {
    validate_matrix(SquareMatrix::from_rows(rows)?)
}

fn validate_matrix(mut m: SquareMatrix) -> Result<StochasticMatrix> {
    m.check_finite()?;
    let n = m.n;
    let mut max_renormalization = 0.0_f64;
    for i in 0..n {
        let row = m.row_mut(i);
        for (j, v) in row.iter_mut().enumerate() {
            if *v < -NEGATIVE_SLACK || *v > 1.0 + NEGATIVE_SLACK {
                return Err(Error::EntryOutOfRange { row: i, col: j, value: *v });
            }
            *v = v.clamp(0.0, 1.0);
        }
        let sum = compensated_sum(row.iter().copied());
        let gap = (sum - 1.0).abs();
        if gap > ROW_SUM_TOLERANCE {
            return Err(Error::RowSum {
                row: i,
                sum,
                target: 1.0,
                tolerance: ROW_SUM_TOLERANCE,
            });
        }
        // Rows already stochastic up to rounding are left untouched, which
        // keeps validation idempotent.
        if gap > n as f64 * f64::EPSILON {
            row.iter_mut().for_each(|v| *v /= sum);
            max_renormalization = max_renormalization.max(gap);
        }
    }
    Ok(StochasticMatrix {
        inner: m,
        max_renormalization,
    })
}

/// A validated intensity (rate) matrix: off-diagonals nonnegative, rows summing to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityMatrix {
    inner: SquareMatrix,
}

impl IntensityMatrix {
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        SquareMatrix::from_rows(rows)?.try_into()
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            inner: SquareMatrix::zeros(n),
        }
    }

    /// Builds a generator from off-diagonal rates; each diagonal entry is set
    /// to the negated compensated sum of its row's off-diagonals.
    pub fn from_off_diagonal(mut m: SquareMatrix) -> Result<Self> {
        m.check_finite()?;
        let n = m.n;
        for i in 0..n {
            let row = m.row_mut(i);
            for (j, v) in row.iter_mut().enumerate() {
                if j == i {
                    continue;
                }
                if *v < -RATE_SLACK {
                    return Err(Error::InvalidRate { row: i, col: j, value: *v });
                }
                *v = v.max(0.0);
            }
            let off = compensated_sum(row.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| *v));
            row[i] = -off;
        }
        Ok(Self { inner: m })
    }

    pub fn n(&self) -> usize {
        self.inner.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner[(i, j)]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.inner.row(i)
    }

    pub fn as_matrix(&self) -> &SquareMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> SquareMatrix {
        self.inner
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.inner.to_rows()
    }
}

impl TryFrom<SquareMatrix> for IntensityMatrix {
    type Error = Error;

    fn try_from(mut m: SquareMatrix) -> Result<Self> {
        m.check_finite()?;
        let n = m.n;
        for i in 0..n {
            let row = m.row_mut(i);
            for (j, v) in row.iter_mut().enumerate() {
                if j == i {
                    if *v > 0.0 {
                        return Err(Error::InvalidRate { row: i, col: j, value: *v });
                    }
                } else if *v < -RATE_SLACK {
                    return Err(Error::InvalidRate { row: i, col: j, value: *v });
                } else if *v < 0.0 {
                    *v = 0.0;
                }
            }
            let sum = compensated_sum(row.iter().copied());
            if sum.abs() > GENERATOR_ROW_TOLERANCE {
                return Err(Error::RowSum {
                    row: i,
                    sum,
                    target: 0.0,
                    tolerance: GENERATOR_ROW_TOLERANCE,
                });
            }
        }
        Ok(Self { inner: m })
    }
}

impl fmt::Display for IntensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.inner.fmt(f)
    }
}

/// Smallest and largest diagonal entries of a stochastic matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalExtremes {
    /// `min_i p_ii`
    pub min: f64,
    /// `max_i p_ii`
    pub max: f64,
}

/// Returns `(min_i p_ii, max_i p_ii)`; a zero diagonal entry means the matrix
/// has no J1-generator.
pub fn diagonal_extremes(p: &StochasticMatrix) -> Result<DiagonalExtremes> {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for i in 0..p.n() {
        let d = p.diag(i);
        if d <= 0.0 {
            return Err(Error::NotJ1Embeddable { state: i });
        }
        min = min.min(d);
        max = max.max(d);
    }
    Ok(DiagonalExtremes { min, max })
}
