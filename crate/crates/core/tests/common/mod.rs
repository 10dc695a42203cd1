#![allow(dead_code)]

use condembed_core::{validate_stochastic, IntensityMatrix, SquareMatrix, StochasticMatrix};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Published J1-generator of the credit matrix, truncated to 4 decimals.
pub const CREDIT_Q_J1: [[f64; 8]; 8] = [
    [-0.1221, 0.1075, 0.0088, 0.0022, 0.0036, 0.0000, 0.0000, 0.0000],
    [0.0096, -0.1114, 0.0836, 0.0114, 0.0035, 0.0034, 0.0000, 0.0000],
    [0.0010, 0.0325, -0.1271, 0.0752, 0.0122, 0.0053, 0.0000, 0.0009],
    [0.0007, 0.0049, 0.0755, -0.1874, 0.0798, 0.0192, 0.0024, 0.0049],
    [0.0005, 0.0026, 0.0094, 0.0886, -0.2759, 0.1301, 0.0178, 0.0270],
    [0.0000, 0.0022, 0.0036, 0.0079, 0.0647, -0.2121, 0.0592, 0.0746],
    [0.0000, 0.0000, 0.0152, 0.0157, 0.0287, 0.1031, -0.4460, 0.2834],
    [0.0000, 0.0000, 0.0000, 0.0000, 0.0000, 0.0000, 0.0000, 0.0000],
];

/// Published JLT generator of the credit matrix.
pub const CREDIT_Q_JLT: [[f64; 8]; 8] = [
    [-0.1154, 0.1020, 0.0083, 0.0020, 0.0032, 0.0000, 0.0000, 0.0000],
    [0.0091, -0.1043, 0.0787, 0.0104, 0.0031, 0.0031, 0.0000, 0.0000],
    [0.0010, 0.0308, -0.1170, 0.0688, 0.0107, 0.0048, 0.0000, 0.0010],
    [0.0007, 0.0047, 0.0714, -0.1710, 0.0701, 0.0174, 0.0020, 0.0049],
    [0.0005, 0.0025, 0.0089, 0.0814, -0.2530, 0.1180, 0.0144, 0.0273],
    [0.0000, 0.0021, 0.0034, 0.0073, 0.0568, -0.1927, 0.0478, 0.0753],
    [0.0000, 0.0000, 0.0143, 0.0143, 0.0250, 0.0929, -0.4320, 0.2856],
    [0.0000, 0.0000, 0.0000, 0.0000, 0.0000, 0.0000, 0.0000, 0.0000],
];

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Random stochastic matrix with diagonal uniform in `[min_diag, 1)` and the
/// remaining row mass spread over off-diagonal entries, some of which are zero.
pub fn random_stochastic(rng: &mut StdRng, n: usize, min_diag: f64) -> StochasticMatrix {
    let mut rows = vec![vec![0.0; n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        let d = rng.random_range(min_diag..1.0);
        let mut w: Vec<f64> = (0..n)
            .map(|j| if j == i || rng.random_bool(0.2) { 0.0 } else { rng.random::<f64>() })
            .collect();
        let mut s: f64 = w.iter().sum();
        if s == 0.0 && n > 1 {
            let j = (i + 1) % n;
            w[j] = 1.0;
            s = 1.0;
        }
        for j in 0..n {
            row[j] = if j == i {
                if n == 1 { 1.0 } else { d }
            } else {
                (1.0 - d) * w[j] / s
            };
        }
    }
    validate_stochastic(&rows).unwrap()
}

/// Random generator with off-diagonal rates uniform in `[0, max_rate)`.
pub fn random_intensity(rng: &mut StdRng, n: usize, max_rate: f64) -> IntensityMatrix {
    let mut m = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                m[(i, j)] = rng.random_range(0.0..max_rate);
            }
        }
    }
    IntensityMatrix::from_off_diagonal(m).unwrap()
}

/// Adaptive Simpson quadrature of `f` on `[a, b]`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, left, lm, flm, tol / 2.0, depth - 1)
            + recurse(f, m, fm, b, fb, right, rm, frm, tol / 2.0, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, 50)
}

/// `tau(x, y)` as the integral of `exp(u x + (1 - u) y)` over `[0, 1]`.
pub fn tau_by_quadrature(x: f64, y: f64) -> f64 {
    adaptive_simpson(&|u| (u * x + (1.0 - u) * y).exp(), 0.0, 1.0, 1e-12)
}

/// `rho(x, y) = e / tau(1 - ln x, 1 - ln y)` with `tau` by quadrature.
pub fn rho_by_quadrature(x: f64, y: f64) -> f64 {
    std::f64::consts::E / tau_by_quadrature(1.0 - x.ln(), 1.0 - y.ln())
}

fn inf_norm(m: &SquareMatrix) -> f64 {
    m.rows().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Matrix exponential by plain truncated Taylor series on a scaled input,
/// followed by repeated squaring.
pub fn expm_by_taylor(m: &SquareMatrix) -> SquareMatrix {
    let n = m.n();
    let norm = inf_norm(m);
    let mut squarings = 0;
    while norm / 2f64.powi(squarings) > 0.5 {
        squarings += 1;
    }
    let a = m.scaled(2f64.powi(-squarings));
    let mut sum = SquareMatrix::identity(n);
    let mut term = SquareMatrix::identity(n);
    for k in 1..100 {
        term = term.matmul(&a).scaled(1.0 / k as f64);
        sum = sum.add(&term).unwrap();
        if inf_norm(&term) < 1e-14 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum);
    }
    sum
}

pub fn relative_inf_error(a: &SquareMatrix, reference: &SquareMatrix) -> f64 {
    inf_norm(&a.sub(reference).unwrap()) / inf_norm(reference)
}
