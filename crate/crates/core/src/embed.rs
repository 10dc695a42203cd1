//! Necessary-condition screens for classical and J1-embeddability.

use crate::error::{Error, Result};
use crate::lu::determinant;
use crate::matrix::{IntensityMatrix, StochasticMatrix};

/// Slack on each side of the Goodman inequality.
pub const GOODMAN_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoodmanReport {
    pub passes: bool,
    pub det: f64,
    pub diag_product: f64,
}

/// `prod_i p_ii >= det P > 0`, necessary for `P = exp(Q)`.
pub fn goodman_check(p: &StochasticMatrix) -> GoodmanReport {
    let det = determinant(p.as_matrix());
    let diag_product = (0..p.n()).map(|i| p.diag(i)).product::<f64>();
    let passes = det > -GOODMAN_SLACK && diag_product >= det - GOODMAN_SLACK;
    GoodmanReport {
        passes,
        det,
        diag_product,
    }
}

/// A J1-generator exists, and is unique, exactly when every diagonal entry is positive.
pub fn j1_embeddable(p: &StochasticMatrix) -> bool {
    (0..p.n()).all(|i| p.diag(i) > 0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoStateEmbedding {
    pub embeddable: bool,
    pub generator: Option<IntensityMatrix>,
}

fn check_open_unit(p: f64, function: &'static str) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain { function, value: p })
    }
}

/// Symmetric `[[p, 1-p], [1-p, p]]` is embeddable iff `p > 1/2`, with generator
/// `ln(2p - 1) / (2(p - 1)) (P - I)`.
pub fn two_state_embeddable(p: f64) -> Result<TwoStateEmbedding> {
    check_open_unit(p, "two_state_embeddable")?;
    if p <= 0.5 {
        return Ok(TwoStateEmbedding {
            embeddable: false,
            generator: None,
        });
    }
    let rate = (2.0 * p - 1.0).ln() / (2.0 * (p - 1.0)) * (1.0 - p);
    let q = IntensityMatrix::from_rows(&[[-rate, rate], [rate, -rate]])?;
    Ok(TwoStateEmbedding {
        embeddable: true,
        generator: Some(q),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScalarInequalities {
    /// `1 + e^{2 - 2/p} - 2p > 0`
    pub first: bool,
    /// `1 - e^{1 - 1/p} < 4/3 (1 - p)`
    pub second: bool,
}

pub fn scalar_inequalities_check(p: f64) -> Result<ScalarInequalities> {
    check_open_unit(p, "scalar_inequalities_check")?;
    let first = 1.0 + (2.0 - 2.0 / p).exp() - 2.0 * p > 0.0;
    let second = -(1.0 - 1.0 / p).exp_m1() < 4.0 / 3.0 * (1.0 - p);
    Ok(ScalarInequalities { first, second })
}
