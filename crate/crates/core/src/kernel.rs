//! One-step transition probabilities of a continuous-time chain conditioned on
//! at most one jump in the unit interval.
//!
//! For a generator `Q`, the joint probability of ending in `j` with at most
//! one jump, starting from `i`, is
//!
//! ```text
//! p*_ij = q_ij tau(q_ii, q_jj)   (i != j)
//! p*_ii = exp(q_ii)
//! ```
//!
//! and the conditional matrix is the row-normalized joint kernel.

use crate::matrix::{compensated_sum, IntensityMatrix, SquareMatrix, StochasticMatrix};
use crate::scalar::tau_fast;

/// Joint probabilities `P(X_1 = j, N <= 1 | X_0 = i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointKernel {
    p_star: SquareMatrix,
}

impl JointKernel {
    pub fn as_matrix(&self) -> &SquareMatrix {
        &self.p_star
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p_star[(i, j)]
    }

    /// `P(N <= 1 | X_0 = i)`, the share of paths from `i` with at most one jump.
    pub fn row_mass(&self, i: usize) -> f64 {
        compensated_sum(self.p_star.row(i).iter().copied())
    }
}

pub fn joint_kernel(q: &IntensityMatrix) -> JointKernel {
    let n = q.n();
    let mut p_star = SquareMatrix::zeros(n);
    for i in 0..n {
        let qii = q.get(i, i);
        for j in 0..n {
            p_star[(i, j)] = if i == j {
                qii.exp()
            } else {
                let qij = q.get(i, j);
                if qij == 0.0 {
                    0.0
                } else {
                    qij * tau_fast(qii, q.get(j, j))
                }
            };
        }
    }
    JointKernel { p_star }
}

/// Row-normalized joint kernel; always stochastic with a positive diagonal.
pub fn conditional_transition_matrix(q: &IntensityMatrix) -> StochasticMatrix {
    let kernel = joint_kernel(q);
    let n = q.n();
    let mut out = kernel.p_star;
    for i in 0..n {
        let mass = compensated_sum(out.row(i).iter().copied());
        for j in 0..n {
            out[(i, j)] /= mass;
        }
    }
    StochasticMatrix::from_normalized(out)
}
