//! Reference matrices: a published credit-rating migration matrix and the
//! equal-diagonal two- and three-state families.

use crate::error::Result;
use crate::matrix::{validate_stochastic, StochasticMatrix};

/// One-year rating migration matrix (AAA … CCC, default), diagonal entries
/// adjusted so that every row sums to one. The default state is absorbing.
pub const CREDIT_RATING: [[f64; 8]; 8] = [
    [0.8910, 0.0963, 0.0078, 0.0019, 0.0030, 0.0000, 0.0000, 0.0000],
    [0.0086, 0.9010, 0.0747, 0.0099, 0.0029, 0.0029, 0.0000, 0.0000],
    [0.0009, 0.0291, 0.8896, 0.0649, 0.0101, 0.0045, 0.0000, 0.0009],
    [0.0006, 0.0043, 0.0656, 0.8428, 0.0644, 0.0160, 0.0018, 0.0045],
    [0.0004, 0.0022, 0.0079, 0.0719, 0.7765, 0.1043, 0.0127, 0.0241],
    [0.0000, 0.0019, 0.0031, 0.0066, 0.0517, 0.8247, 0.0435, 0.0685],
    [0.0000, 0.0000, 0.0116, 0.0116, 0.0203, 0.0754, 0.6492, 0.2319],
    [0.0000, 0.0000, 0.0000, 0.0000, 0.0000, 0.0000, 0.0000, 1.0000],
];

pub fn credit_rating_matrix() -> StochasticMatrix {
    validate_stochastic(&CREDIT_RATING).expect("bundled matrix is stochastic")
}

/// `[[p, 1-p], [1-p, p]]`
pub fn symmetric_two_state(p: f64) -> Result<StochasticMatrix> {
    validate_stochastic(&[[p, 1.0 - p], [1.0 - p, p]])
}

/// `[[p, 1-p, 0], [(1-p)/2, p, (1-p)/2], [0, 1-p, p]]`
pub fn tridiagonal_three_state(p: f64) -> Result<StochasticMatrix> {
    let h = (1.0 - p) / 2.0;
    validate_stochastic(&[[p, 1.0 - p, 0.0], [h, p, h], [0.0, 1.0 - p, p]])
}
