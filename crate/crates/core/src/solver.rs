//! The J1-generator of a stochastic matrix with positive diagonal.
//!
//! The generator's diagonal is encoded as `theta_i = exp(1 - q_ii)`, the
//! unique fixed point of
//!
//! ```text
//! T_i(theta) = exp(W0( (1 / p_ii) * sum_j p_ij rho(theta_i, theta_j) ))
//! ```
//!
//! on the box `[e^{1/max p_ii}, e^{1/min p_ii}]^n`. Off-diagonal rates follow
//! from `q_ij = rho(theta_i, theta_j) p_ij / (theta_i p_ii)`.
//!
//! Convergence is measured in relative terms, `max_i |dtheta_i| / theta_i`,
//! which is the same as the update of `ln theta_i = 1 - q_ii` to first order.

use std::f64::consts::E;

use crate::error::{Error, Result};
use crate::matrix::{diagonal_extremes, DiagonalExtremes, IntensityMatrix, SquareMatrix, StochasticMatrix};
use crate::scalar::{rho_fast, w0_unchecked};

/// Candidate fixed point, one entry per state.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaVector(Vec<f64>);

impl ThetaVector {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        for &t in &theta {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Domain {
                    function: "ThetaVector::new",
                    value: t,
                });
            }
        }
        Ok(Self(theta))
    }

    /// `theta_i = e^{1 / p_ii}`, the corner of the feasible box used to start iteration.
    pub fn initial(p: &StochasticMatrix) -> Result<Self> {
        diagonal_extremes(p)?;
        Ok(Self((0..p.n()).map(|i| (1.0 / p.diag(i)).exp()).collect()))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Whether every component lies in `[e^{1/max}, e^{1/min}]`, widened by `slack`.
    pub fn in_feasible_box(&self, ext: &DiagonalExtremes, slack: f64) -> bool {
        let (lo, hi) = feasible_box(ext);
        self.0.iter().all(|&t| t >= lo - slack && t <= hi + slack)
    }

    /// Relative sup-distance `max_i |a_i - b_i| / a_i`.
    pub fn relative_distance(&self, other: &ThetaVector) -> f64 {
        relative_sup(&self.0, &other.0)
    }
}

/// `([e^{1/max p_ii}], [e^{1/min p_ii}])`
pub fn feasible_box(ext: &DiagonalExtremes) -> (f64, f64) {
    ((1.0 / ext.max).exp(), (1.0 / ext.min).exp())
}

/// Lipschitz diagnostics of `T` on the feasible box under the max norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionEstimate {
    /// `e^{1/min - 1/max}`
    pub alpha: f64,
    /// `-1 + (alpha + 1) ln(alpha) / (alpha - 1)`, equal to 1 at `alpha = 1`
    pub c_alpha: f64,
    /// Lipschitz bound `(1 + (1/min - 1) C(alpha)) / (1 + 1/max)`
    pub lipschitz: f64,
}

impl ContractionEstimate {
    pub fn is_contraction(&self) -> bool {
        self.lipschitz < 1.0
    }
}

pub fn contraction_estimate(p: &StochasticMatrix) -> Result<ContractionEstimate> {
    let ext = diagonal_extremes(p)?;
    let gap = 1.0 / ext.min - 1.0 / ext.max;
    let alpha = gap.exp();
    // (alpha + 1) / (alpha - 1) * ln(alpha) = gap / tanh(gap / 2), which is
    // 2 + gap^2 / 6 + O(gap^4) near zero.
    let c_alpha = if gap < 1e-6 {
        1.0 + gap * gap / 6.0
    } else {
        -1.0 + gap / (gap / 2.0).tanh()
    };
    let lipschitz = (1.0 + (1.0 / ext.min - 1.0) * c_alpha) / (1.0 + 1.0 / ext.max);
    Ok(ContractionEstimate {
        alpha,
        c_alpha,
        lipschitz,
    })
}

/// `(1 - 1/min p_ii, 1 - 1/max p_ii)`: every J1-generator diagonal lies in this range.
pub fn qii_bounds(p: &StochasticMatrix) -> Result<(f64, f64)> {
    let ext = diagonal_extremes(p)?;
    Ok((1.0 - 1.0 / ext.min, 1.0 - 1.0 / ext.max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MethodPreference {
    /// Closed form when all diagonal entries agree, iteration otherwise.
    #[default]
    Auto,
    /// Always iterate.
    FixedPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    ClosedForm,
    FixedPoint,
}

impl SolveMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveMethod::ClosedForm => "closed_form",
            SolveMethod::FixedPoint => "fixed_point",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Stop when the relative sup-norm update of theta drops below this.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Update `theta <- (1 - d) theta + d T(theta)`.
    pub damping: f64,
    pub method: MethodPreference,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-13,
            max_iterations: 10_000,
            damping: 1.0,
            method: MethodPreference::Auto,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance >= 1e-15 && self.tolerance.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "tolerance must be at least 1e-15, got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be positive".into()));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "damping must lie in (0, 1], got {}",
                self.damping
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub generator: IntensityMatrix,
    pub theta: ThetaVector,
    pub iterations: usize,
    /// Relative sup-norm of `theta - T(theta)` at the returned theta.
    pub residual: f64,
    pub contraction: ContractionEstimate,
    pub method: SolveMethod,
    /// Damping factor of the run that converged.
    pub damping: f64,
    /// Relative sup-norm update at each iteration.
    pub update_history: Vec<f64>,
    /// `max_i |(1 - ln theta_i) - q_ii|` between the two diagonal formulas.
    pub diagonal_mismatch: f64,
}

/// Applies `T` to `theta`.
pub fn apply_t(p: &StochasticMatrix, theta: &ThetaVector) -> Result<ThetaVector> {
    if theta.len() != p.n() {
        return Err(Error::DimensionMismatch {
            expected: p.n(),
            found: theta.len(),
        });
    }
    diagonal_extremes(p)?;
    let mut out = vec![0.0; p.n()];
    apply_t_into(p, theta.as_slice(), &mut out);
    Ok(ThetaVector(out))
}

fn apply_t_into(p: &StochasticMatrix, theta: &[f64], out: &mut [f64]) {
    for (i, o) in out.iter_mut().enumerate() {
        let ti = theta[i];
        let acc: f64 = p
            .row(i)
            .iter()
            .zip(theta)
            .filter(|(&pij, _)| pij != 0.0)
            .map(|(&pij, &tj)| pij * rho_fast(ti, tj))
            .sum();
        *o = w0_unchecked(acc / p.diag(i)).exp();
    }
}

fn relative_sup(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / x.abs())
        .fold(0.0, f64::max)
}

/// Result of one fixed-point run.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointRun {
    pub theta: ThetaVector,
    pub iterations: usize,
    pub update_history: Vec<f64>,
}

/// Iterates `T` from `start` with the given damping until the relative
/// update drops below `cfg.tolerance`.
pub fn iterate_fixed_point(p: &StochasticMatrix, start: &ThetaVector, cfg: &SolverConfig) -> Result<FixedPointRun> {
    cfg.validate()?;
    if start.len() != p.n() {
        return Err(Error::DimensionMismatch {
            expected: p.n(),
            found: start.len(),
        });
    }
    diagonal_extremes(p)?;
    let n = p.n();
    let d = cfg.damping;
    let mut theta = start.as_slice().to_vec();
    let mut mapped = vec![0.0; n];
    let mut history = Vec::new();
    for k in 1..=cfg.max_iterations {
        apply_t_into(p, &theta, &mut mapped);
        if d < 1.0 {
            for (m, &t) in mapped.iter_mut().zip(&theta) {
                *m = (1.0 - d) * t + d * *m;
            }
        }
        let update = relative_sup(&theta, &mapped);
        std::mem::swap(&mut theta, &mut mapped);
        history.push(update);
        if update < cfg.tolerance {
            return Ok(FixedPointRun {
                theta: ThetaVector(theta),
                iterations: k,
                update_history: history,
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: cfg.max_iterations,
        residual: history.last().copied().unwrap_or(f64::INFINITY),
    })
}

/// Builds the generator from a fixed point: `q_ij = rho(theta_i, theta_j) p_ij / (theta_i p_ii)`
/// off the diagonal, and a diagonal that makes every row sum exactly zero.
///
/// Returns the generator together with the largest gap between that diagonal
/// and `1 - ln theta_i`.
pub fn generator_from_theta(p: &StochasticMatrix, theta: &ThetaVector) -> Result<(IntensityMatrix, f64)> {
    if theta.len() != p.n() {
        return Err(Error::DimensionMismatch {
            expected: p.n(),
            found: theta.len(),
        });
    }
    diagonal_extremes(p)?;
    let n = p.n();
    let th = theta.as_slice();
    let mut m = SquareMatrix::zeros(n);
    for i in 0..n {
        let scale = th[i] * p.diag(i);
        for j in 0..n {
            let pij = p.get(i, j);
            if i != j && pij != 0.0 {
                m[(i, j)] = rho_fast(th[i], th[j]) * pij / scale;
            }
        }
    }
    let q = IntensityMatrix::from_off_diagonal(m)?;
    let mismatch = (0..n)
        .map(|i| ((1.0 - th[i].ln()) - q.get(i, i)).abs())
        .fold(0.0, f64::max);
    Ok((q, mismatch))
}

/// `(1/p)(P - I)`, the generator when every diagonal entry equals `p`.
fn closed_form(p: &StochasticMatrix, pii: f64) -> Result<IntensityMatrix> {
    let mut m = p.as_matrix().scaled(1.0 / pii);
    for i in 0..p.n() {
        m[(i, i)] = 0.0;
    }
    IntensityMatrix::from_off_diagonal(m)
}

/// Computes the unique J1-generator of `p`.
///
/// Fails with [`Error::NotJ1Embeddable`] if some `p_ii = 0`. When an undamped
/// run does not converge, one retry with damping 0.5 is made before
/// reporting [`Error::NonConvergence`].
pub fn j1_generator(p: &StochasticMatrix, cfg: &SolverConfig) -> Result<SolveReport> {
    cfg.validate()?;
    diagonal_extremes(p)?;
    let contraction = contraction_estimate(p)?;

    if let (MethodPreference::Auto, Some(pii)) = (cfg.method, p.has_equal_diagonal()) {
        let generator = closed_form(p, pii)?;
        let theta = ThetaVector(vec![(1.0 / pii).exp(); p.n()]);
        let residual = theta.relative_distance(&apply_t(p, &theta)?);
        return Ok(SolveReport {
            generator,
            theta,
            iterations: 0,
            residual,
            contraction,
            method: SolveMethod::ClosedForm,
            damping: cfg.damping,
            update_history: Vec::new(),
            diagonal_mismatch: 0.0,
        });
    }

    let start = ThetaVector::initial(p)?;
    let (run, damping) = match iterate_fixed_point(p, &start, cfg) {
        Ok(run) => (run, cfg.damping),
        Err(Error::NonConvergence { .. }) if cfg.damping > 0.5 => {
            let retry = SolverConfig { damping: 0.5, ..*cfg };
            (iterate_fixed_point(p, &start, &retry)?, 0.5)
        }
        Err(e) => return Err(e),
    };
    let residual = run.theta.relative_distance(&apply_t(p, &run.theta)?);
    let (generator, diagonal_mismatch) = generator_from_theta(p, &run.theta)?;
    Ok(SolveReport {
        generator,
        theta: run.theta,
        iterations: run.iterations,
        residual,
        contraction,
        method: SolveMethod::FixedPoint,
        damping,
        update_history: run.update_history,
        diagonal_mismatch,
    })
}

/// `e`, the value `theta_i` takes for an absorbing state.
pub const ABSORBING_THETA: f64 = E;
