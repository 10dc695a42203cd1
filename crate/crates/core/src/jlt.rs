//! Closed-form Jarrow–Lando–Turnbull generator: `q_ii = ln p_ii` and
//! `q_ij = p_ij ln p_ii / (p_ii - 1)` off the diagonal.

use crate::error::Result;
use crate::matrix::{diagonal_extremes, IntensityMatrix, SquareMatrix, StochasticMatrix};

/// Rows with `p_ii = 1` map to zero rows.
pub fn jlt(p: &StochasticMatrix) -> Result<IntensityMatrix> {
    diagonal_extremes(p)?;
    let n = p.n();
    let mut m = SquareMatrix::zeros(n);
    for i in 0..n {
        let pii = p.diag(i);
        if pii >= 1.0 {
            continue;
        }
        let factor = pii.ln() / (pii - 1.0);
        for j in 0..n {
            if j != i {
                m[(i, j)] = p.get(i, j) * factor;
            }
        }
    }
    // Off-diagonal row mass is 1 - p_ii, so the analytic diagonal ln p_ii and
    // the negated off-diagonal sum agree up to rounding.
    IntensityMatrix::from_off_diagonal(m)
}
