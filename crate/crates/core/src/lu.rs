//! LU factorization with partial pivoting for small dense matrices.

use crate::matrix::SquareMatrix;

/// `P A = L U` packed into one matrix, with the row permutation.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: SquareMatrix,
    perm: Vec<usize>,
    sign: f64,
    singular: bool,
}

impl Lu {
    pub fn factor(a: &SquareMatrix) -> Self {
        let n = a.n();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut singular = false;
        for k in 0..n {
            let (piv, max) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if max == 0.0 {
                singular = true;
                continue;
            }
            if piv != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(piv, j)];
                    lu[(piv, j)] = t;
                }
                perm.swap(k, piv);
                sign = -sign;
            }
            let d = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / d;
                lu[(i, k)] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        lu[(i, j)] -= f * lu[(k, j)];
                    }
                }
            }
        }
        Lu { lu, perm, sign, singular }
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn determinant(&self) -> f64 {
        if self.singular {
            return 0.0;
        }
        (0..self.lu.n()).fold(self.sign, |acc, i| acc * self.lu[(i, i)])
    }

    /// Solves `A X = B` column by column. Returns `None` for a singular `A`.
    pub fn solve(&self, b: &SquareMatrix) -> Option<SquareMatrix> {
        if self.singular {
            return None;
        }
        let n = self.lu.n();
        let mut x = SquareMatrix::zeros(n);
        let mut col = vec![0.0; n];
        for c in 0..n {
            for i in 0..n {
                col[i] = b[(self.perm[i], c)];
            }
            for i in 0..n {
                let s: f64 = (0..i).map(|k| self.lu[(i, k)] * col[k]).sum();
                col[i] -= s;
            }
            for i in (0..n).rev() {
                let s: f64 = (i + 1..n).map(|k| self.lu[(i, k)] * col[k]).sum();
                col[i] = (col[i] - s) / self.lu[(i, i)];
            }
            for i in 0..n {
                x[(i, c)] = col[i];
            }
        }
        Some(x)
    }
}

pub fn determinant(a: &SquareMatrix) -> f64 {
    Lu::factor(a).determinant()
}
