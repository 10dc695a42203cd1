mod common;

use common::{expm_by_taylor, random_intensity, relative_inf_error, rng};
use condembed_core::fixtures::{symmetric_two_state, tridiagonal_three_state};
use condembed_core::{expm, goodman_check, scalar_inequalities_check, two_state_embeddable, SquareMatrix};
use rand::Rng;

fn random_bounded(r: &mut impl Rng, n: usize, max_norm: f64) -> SquareMatrix {
    let mut m = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = r.random_range(-1.0..1.0);
        }
    }
    let norm = m.max_row_sum_norm().unwrap();
    m.scaled(r.random_range(0.0..max_norm) / norm)
}

#[test]
fn pade_matches_taylor_oracle() {
    let mut r = rng(21);
    for _ in 0..100 {
        let n = r.random_range(1..=8);
        let m = random_bounded(&mut r, n, 2.0);
        let err = relative_inf_error(&expm(&m).unwrap(), &expm_by_taylor(&m));
        assert!(err < 1e-12, "relative error {err}");
    }
}

#[test]
fn inverse_of_exponential_is_exponential_of_negation() {
    let mut r = rng(22);
    for _ in 0..100 {
        let n = r.random_range(2..=8);
        let q = random_intensity(&mut r, n, 5.0 / n as f64);
        let a = expm(q.as_matrix()).unwrap();
        let b = expm(&q.as_matrix().scaled(-1.0)).unwrap();
        let gap = a.matmul(&b).max_abs_diff(&SquareMatrix::identity(n)).unwrap();
        assert!(gap < 1e-10, "{gap}");
    }
}

#[test]
fn exponential_of_generator_is_stochastic_and_passes_goodman() {
    let mut r = rng(23);
    for _ in 0..100 {
        let n = r.random_range(2..=8);
        let q = random_intensity(&mut r, n, 2.0);
        let e = expm(q.as_matrix()).unwrap();
        for row in e.rows() {
            let s: f64 = row.iter().sum();
            assert!((s - 1.0).abs() < 1e-11, "row sum {s}");
            assert!(row.iter().all(|&v| v > -1e-12));
        }
        let p = condembed_core::validate_stochastic(&e.to_rows()).unwrap();
        assert!(goodman_check(&p).passes, "{:?}", goodman_check(&p));
    }
}

#[test]
fn large_norms_stay_stochastic() {
    let mut r = rng(24);
    for _ in 0..20 {
        let q = random_intensity(&mut r, 5, 200.0);
        let e = expm(q.as_matrix()).unwrap();
        for row in e.rows() {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn two_state_generator_round_trips() {
    for p in [0.55, 0.7, 0.9, 0.99] {
        let emb = two_state_embeddable(p).unwrap();
        assert!(emb.embeddable);
        let q = emb.generator.unwrap();
        let gap = expm(q.as_matrix())
            .unwrap()
            .max_abs_diff(symmetric_two_state(p).unwrap().as_matrix())
            .unwrap();
        assert!(gap < 1e-12, "p={p}: {gap}");
    }
    for p in [0.1, 0.5] {
        assert!(!two_state_embeddable(p).unwrap().embeddable);
    }
}

#[test]
fn scalar_inequalities_hold_on_grid() {
    for k in 1..=999 {
        let p = k as f64 / 1000.0;
        let s = scalar_inequalities_check(p).unwrap();
        assert!(s.first && s.second, "p={p}: {s:?}");
    }
}

#[test]
fn tridiagonal_family_fails_zero_pattern_test() {
    // An embeddable P with p_13 = 0 must also have zero (P^2)_13.
    for k in 1..=19 {
        let p = k as f64 * 0.05;
        let m = tridiagonal_three_state(p).unwrap();
        assert_eq!(m.get(0, 2), 0.0);
        let sq = m.as_matrix().matmul(m.as_matrix());
        assert!(sq[(0, 2)] > 0.0, "p={p}");
    }
}
