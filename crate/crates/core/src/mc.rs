//! Monte-Carlo simulation of chain paths over the unit interval, keeping
//! only paths with at most one jump.
//!
//! Each path draws a holding time `H ~ Exp(-q_ii)`; if it ends before the
//! horizon, the target is drawn from the jump chain `q_ij / (-q_ii)` and a
//! second holding time decides whether a further jump happens before `t = 1`.
//! Paths with two or more jumps are discarded without being simulated further.

use rand::{Rng, SeedableRng};
use rand_distr::Exp1;
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{IntensityMatrix, SquareMatrix};

pub const HORIZON: f64 = 1.0;
const CHUNK: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimulationConfig {
    pub paths_per_state: u64,
    pub seed: u64,
}

impl SimulationConfig {
    pub const MIN_PATHS: u64 = 1000;

    pub fn new(paths_per_state: u64, seed: u64) -> Result<Self> {
        let cfg = Self { paths_per_state, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.paths_per_state < Self::MIN_PATHS {
            return Err(Error::InvalidConfig(format!(
                "paths_per_state must be at least {}, got {}",
                Self::MIN_PATHS,
                self.paths_per_state
            )));
        }
        Ok(())
    }
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            paths_per_state: 1_000_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationEstimate {
    /// Empirical `P(X_1 = j | X_0 = i, N <= 1)`.
    pub conditional_freq: SquareMatrix,
    /// `sqrt(f (1 - f) / m)` with `m` the retained count of the row.
    pub std_err: SquareMatrix,
    /// Share of paths from each state with at most one jump.
    pub retained_fraction: Vec<f64>,
    pub retained: Vec<u64>,
    pub total_paths: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent generator for path `path` started in `state`.
fn path_rng(seed: u64, state: usize, path: u64) -> Xoshiro256PlusPlus {
    let key = splitmix64(seed ^ splitmix64(((state as u64) << 40) ^ path));
    Xoshiro256PlusPlus::seed_from_u64(key)
}

struct JumpTable {
    rate: f64,
    targets: Vec<usize>,
    cumulative: Vec<f64>,
}

impl JumpTable {
    fn new(q: &IntensityMatrix, i: usize) -> Self {
        let rate = -q.get(i, i);
        let mut targets = Vec::new();
        let mut cumulative = Vec::new();
        let mut acc = 0.0;
        for j in 0..q.n() {
            let qij = q.get(i, j);
            if j != i && qij > 0.0 {
                acc += qij;
                targets.push(j);
                cumulative.push(acc);
            }
        }
        let total = acc;
        cumulative.iter_mut().for_each(|c| *c /= total);
        Self { rate, targets, cumulative }
    }

    fn draw(&self, u: f64) -> usize {
        let k = self.cumulative.partition_point(|&c| c <= u);
        self.targets[k.min(self.targets.len() - 1)]
    }
}

/// End state of one path, or `None` when it jumped at least twice.
fn simulate_path<R: Rng>(rng: &mut R, start: usize, tables: &[JumpTable]) -> Option<usize> {
    let first = &tables[start];
    if first.rate <= 0.0 || first.targets.is_empty() {
        return Some(start);
    }
    let h1: f64 = rng.sample::<f64, _>(Exp1) / first.rate;
    if h1 >= HORIZON {
        return Some(start);
    }
    let next = first.draw(rng.random::<f64>());
    let second = &tables[next];
    if second.rate <= 0.0 || second.targets.is_empty() {
        return Some(next);
    }
    let h2: f64 = rng.sample::<f64, _>(Exp1) / second.rate;
    if h1 + h2 >= HORIZON {
        Some(next)
    } else {
        None
    }
}

/// Simulates `cfg.paths_per_state` paths from every state. Output is
/// bit-identical for a given seed irrespective of the thread count.
pub fn simulate_conditional(q: &IntensityMatrix, cfg: &SimulationConfig) -> Result<SimulationEstimate> {
    cfg.validate()?;
    let n = q.n();
    let tables: Vec<JumpTable> = (0..n).map(|i| JumpTable::new(q, i)).collect();
    let paths = cfg.paths_per_state;
    let chunks = paths.div_ceil(CHUNK);

    let mut freq = SquareMatrix::zeros(n);
    let mut std_err = SquareMatrix::zeros(n);
    let mut retained_fraction = Vec::with_capacity(n);
    let mut retained = Vec::with_capacity(n);

    for start in 0..n {
        let counts = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut local = vec![0u64; n];
                for k in c * CHUNK..((c + 1) * CHUNK).min(paths) {
                    let mut rng = path_rng(cfg.seed, start, k);
                    if let Some(end) = simulate_path(&mut rng, start, &tables) {
                        local[end] += 1;
                    }
                }
                local
            })
            .reduce(
                || vec![0u64; n],
                |mut a, b| {
                    a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                    a
                },
            );
        let m: u64 = counts.iter().sum();
        if m == 0 {
            return Err(Error::NoRetainedPaths { state: start });
        }
        for (j, &c) in counts.iter().enumerate() {
            let f = c as f64 / m as f64;
            freq[(start, j)] = f;
            std_err[(start, j)] = (f * (1.0 - f) / m as f64).sqrt();
        }
        retained_fraction.push(m as f64 / paths as f64);
        retained.push(m);
    }

    Ok(SimulationEstimate {
        conditional_freq: freq,
        std_err,
        retained_fraction,
        retained,
        total_paths: paths * n as u64,
    })
}
