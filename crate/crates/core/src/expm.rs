//! Dense matrix exponential by scaling and squaring with the degree-13
//! diagonal Padé approximant (Higham 2005).

use crate::error::{Error, Result};
use crate::lu::Lu;
use crate::matrix::{IntensityMatrix, SquareMatrix, StochasticMatrix};

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

// Largest 1-norm for which the [13/13] approximant is accurate to unit roundoff.
const THETA13: f64 = 5.371920351148152;

fn one_norm(a: &SquareMatrix) -> f64 {
    let n = a.n();
    (0..n)
        .map(|j| (0..n).map(|i| a[(i, j)].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn lin_comb(terms: &[(f64, &SquareMatrix)], identity_coeff: f64, n: usize) -> SquareMatrix {
    let mut out = SquareMatrix::identity(n).scaled(identity_coeff);
    for (c, m) in terms {
        out = out.add(&m.scaled(*c)).expect("same dimension");
    }
    out
}

/// `exp(m)` for a square matrix with finite entries.
pub fn expm(m: &SquareMatrix) -> Result<SquareMatrix> {
    m.check_finite()?;
    let n = m.n();
    let norm = one_norm(m);
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = m.scaled(2f64.powi(-squarings));
    let b = &PADE13;
    let a2 = a.matmul(&a);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);

    let u_inner = a6.matmul(&lin_comb(&[(b[13], &a6), (b[11], &a4), (b[9], &a2)], 0.0, n));
    let u_inner = u_inner.add(&lin_comb(&[(b[7], &a6), (b[5], &a4), (b[3], &a2)], b[1], n))?;
    let u = a.matmul(&u_inner);

    let v = a6.matmul(&lin_comb(&[(b[12], &a6), (b[10], &a4), (b[8], &a2)], 0.0, n));
    let v = v.add(&lin_comb(&[(b[6], &a6), (b[4], &a4), (b[2], &a2)], b[0], n))?;

    let numer = v.add(&u)?;
    let denom = v.sub(&u)?;
    let mut r = Lu::factor(&denom)
        .solve(&numer)
        .ok_or_else(|| Error::InvalidConfig("singular Padé denominator".into()))?;
    for _ in 0..squarings {
        r = r.matmul(&r);
    }
    Ok(r)
}

/// `|| P - exp(Q) ||_inf` in the maximum-absolute-row-sum norm.
pub fn norm_gap(p: &StochasticMatrix, q: &IntensityMatrix) -> Result<f64> {
    if p.n() != q.n() {
        return Err(Error::DimensionMismatch {
            expected: p.n(),
            found: q.n(),
        });
    }
    p.as_matrix().sub(&expm(q.as_matrix())?)?.max_row_sum_norm()
}
