use condembed_core as core;
use condembed_core::{Error, IntensityMatrix, MethodPreference, SolverConfig, SquareMatrix, StochasticMatrix};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(condembed, NotJ1EmbeddableError, PyException, "Some diagonal entry of P is zero.");
create_exception!(condembed, NonConvergenceError, PyException, "The fixed-point iteration did not converge.");

fn to_py(e: Error) -> PyErr {
    match e {
        Error::NotJ1Embeddable { .. } => NotJ1EmbeddableError::new_err(e.to_string()),
        Error::NonConvergence { .. } => NonConvergenceError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn stochastic(rows: Vec<Vec<f64>>) -> PyResult<StochasticMatrix> {
    core::validate_stochastic(&rows).map_err(to_py)
}

fn intensity(rows: Vec<Vec<f64>>) -> PyResult<IntensityMatrix> {
    IntensityMatrix::from_rows(&rows).map_err(to_py)
}

fn square(rows: Vec<Vec<f64>>) -> PyResult<SquareMatrix> {
    SquareMatrix::from_rows(&rows).map_err(to_py)
}

/// Result of a J1-generator solve.
#[pyclass(module = "condembed", get_all, frozen)]
struct SolveReport {
    generator: Vec<Vec<f64>>,
    theta: Vec<f64>,
    iterations: usize,
    residual: f64,
    method: &'static str,
    damping: f64,
    alpha: f64,
    c_alpha: f64,
    lipschitz: f64,
    update_history: Vec<f64>,
    diagonal_mismatch: f64,
    json: String,
}

#[pymethods]
impl SolveReport {
    /// The report in the CLI's JSON layout.
    fn to_json(&self) -> String {
        self.json.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "SolveReport(method={:?}, iterations={}, residual={:e}, K={:.6})",
            self.method, self.iterations, self.residual, self.lipschitz
        )
    }
}

impl From<core::SolveReport> for SolveReport {
    fn from(r: core::SolveReport) -> Self {
        Self {
            json: core::cli::report_to_json(&r),
            generator: r.generator.to_rows(),
            theta: r.theta.as_slice().to_vec(),
            iterations: r.iterations,
            residual: r.residual,
            method: r.method.as_str(),
            damping: r.damping,
            alpha: r.contraction.alpha,
            c_alpha: r.contraction.c_alpha,
            lipschitz: r.contraction.lipschitz,
            update_history: r.update_history,
            diagonal_mismatch: r.diagonal_mismatch,
        }
    }
}

/// Determinant screen for embeddability.
#[pyclass(module = "condembed", get_all, frozen)]
struct GoodmanReport {
    passes: bool,
    det: f64,
    diag_product: f64,
}

#[pymethods]
impl GoodmanReport {
    fn __repr__(&self) -> String {
        format!(
            "GoodmanReport(passes={}, det={}, diag_product={})",
            self.passes, self.det, self.diag_product
        )
    }
}

/// Monte-Carlo estimate of the conditional transition matrix.
#[pyclass(module = "condembed", get_all, frozen)]
struct SimulationEstimate {
    conditional_freq: Vec<Vec<f64>>,
    std_err: Vec<Vec<f64>>,
    retained_fraction: Vec<f64>,
    retained: Vec<u64>,
    total_paths: u64,
}

#[pyfunction]
#[pyo3(signature = (p, tol = 1e-13, max_iter = 10_000, damping = 1.0, method = "auto"))]
fn j1_generator(
    py: Python<'_>,
    p: Vec<Vec<f64>>,
    tol: f64,
    max_iter: usize,
    damping: f64,
    method: &str,
) -> PyResult<SolveReport> {
    let method = match method {
        "auto" => MethodPreference::Auto,
        "fixed_point" => MethodPreference::FixedPoint,
        other => return Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    };
    let p = stochastic(p)?;
    let cfg = SolverConfig {
        tolerance: tol,
        max_iterations: max_iter,
        damping,
        method,
    };
    let report = py.detach(|| core::j1_generator(&p, &cfg)).map_err(to_py)?;
    Ok(report.into())
}

#[pyfunction]
fn jlt(p: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
    Ok(core::jlt(&stochastic(p)?).map_err(to_py)?.to_rows())
}

#[pyfunction]
fn conditional_transition_matrix(q: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
    Ok(core::conditional_transition_matrix(&intensity(q)?).to_rows())
}

#[pyfunction]
fn joint_kernel(q: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
    Ok(core::joint_kernel(&intensity(q)?).as_matrix().to_rows())
}

#[pyfunction]
fn expm(m: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
    Ok(core::expm(&square(m)?).map_err(to_py)?.to_rows())
}

#[pyfunction]
fn norm_gap(p: Vec<Vec<f64>>, q: Vec<Vec<f64>>) -> PyResult<f64> {
    core::norm_gap(&stochastic(p)?, &intensity(q)?).map_err(to_py)
}

#[pyfunction]
fn goodman_check(p: Vec<Vec<f64>>) -> PyResult<GoodmanReport> {
    let g = core::goodman_check(&stochastic(p)?);
    Ok(GoodmanReport {
        passes: g.passes,
        det: g.det,
        diag_product: g.diag_product,
    })
}

#[pyfunction]
fn j1_embeddable(p: Vec<Vec<f64>>) -> PyResult<bool> {
    Ok(core::j1_embeddable(&stochastic(p)?))
}

/// `(embeddable, generator or None)` for `[[p, 1-p], [1-p, p]]`.
#[pyfunction]
fn two_state_embeddable(p: f64) -> PyResult<(bool, Option<Vec<Vec<f64>>>)> {
    let e = core::two_state_embeddable(p).map_err(to_py)?;
    Ok((e.embeddable, e.generator.map(|q| q.to_rows())))
}

#[pyfunction]
#[pyo3(signature = (q, paths_per_state = 1_000_000, seed = 0))]
fn simulate_conditional(
    py: Python<'_>,
    q: Vec<Vec<f64>>,
    paths_per_state: u64,
    seed: u64,
) -> PyResult<SimulationEstimate> {
    let q = intensity(q)?;
    let cfg = core::SimulationConfig::new(paths_per_state, seed).map_err(to_py)?;
    let est = py.detach(|| core::simulate_conditional(&q, &cfg)).map_err(to_py)?;
    Ok(SimulationEstimate {
        conditional_freq: est.conditional_freq.to_rows(),
        std_err: est.std_err.to_rows(),
        retained_fraction: est.retained_fraction,
        retained: est.retained,
        total_paths: est.total_paths,
    })
}

#[pyfunction]
fn tau(x: f64, y: f64) -> PyResult<f64> {
    core::tau(x, y).map_err(to_py)
}

#[pyfunction]
fn rho(x: f64, y: f64) -> PyResult<f64> {
    core::rho(x, y).map_err(to_py)
}

#[pyfunction]
fn lambert_w0(t: f64) -> PyResult<f64> {
    core::lambert_w0(t).map_err(to_py)
}

/// `(alpha, C(alpha), K)` for `p`.
#[pyfunction]
fn contraction_estimate(p: Vec<Vec<f64>>) -> PyResult<(f64, f64, f64)> {
    let c = core::contraction_estimate(&stochastic(p)?).map_err(to_py)?;
    Ok((c.alpha, c.c_alpha, c.lipschitz))
}

#[pyfunction]
fn qii_bounds(p: Vec<Vec<f64>>) -> PyResult<(f64, f64)> {
    core::qii_bounds(&stochastic(p)?).map_err(to_py)
}

#[pyfunction]
fn credit_rating_matrix() -> Vec<Vec<f64>> {
    core::fixtures::credit_rating_matrix().to_rows()
}

#[pymodule]
fn condembed(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("NotJ1EmbeddableError", m.py().get_type::<NotJ1EmbeddableError>())?;
    m.add("NonConvergenceError", m.py().get_type::<NonConvergenceError>())?;
    m.add_class::<SolveReport>()?;
    m.add_class::<GoodmanReport>()?;
    m.add_class::<SimulationEstimate>()?;
    m.add_function(wrap_pyfunction!(j1_generator, m)?)?;
    m.add_function(wrap_pyfunction!(jlt, m)?)?;
    m.add_function(wrap_pyfunction!(conditional_transition_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(joint_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(expm, m)?)?;
    m.add_function(wrap_pyfunction!(norm_gap, m)?)?;
    m.add_function(wrap_pyfunction!(goodman_check, m)?)?;
    m.add_function(wrap_pyfunction!(j1_embeddable, m)?)?;
    m.add_function(wrap_pyfunction!(two_state_embeddable, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_conditional, m)?)?;
    m.add_function(wrap_pyfunction!(tau, m)?)?;
    m.add_function(wrap_pyfunction!(rho, m)?)?;
    m.add_function(wrap_pyfunction!(lambert_w0, m)?)?;
    m.add_function(wrap_pyfunction!(contraction_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(qii_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(credit_rating_matrix, m)?)?;
    Ok(())
}
