//! Multi-restart search for unit equilateral sets.
//!
//! Each restart minimises `Σ_{i<j} (d_ij − 1)²` over the coordinates with a
//! damped Gauss–Newton (Levenberg–Marquardt) iteration. For `p < 2` the block
//! norms inside the optimiser are softened to `√(‖Δ‖² + ε²)`; the reported
//! residual always uses the true distance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::linalg;
use crate::scalar::Scalar;
use crate::space::{Exponent, PointSet, Space};

#[derive(Debug, Clone, Serialize)]
pub struct SearchConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
    /// Initial damping of the Levenberg–Marquardt step.
    pub step_init: f64,
    pub residual_target: f64,
    pub smoothing_eps: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            restarts: 32,
            max_iters: 500,
            seed: 0,
            step_init: 1e-3,
            residual_target: 1e-10,
            smoothing_eps: 1e-9,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult<T = f64> {
    pub points: PointSet<T>,
    /// `max_{i<j} |d_ij − 1|` under the true norm.
    pub residual: T,
    pub converged: bool,
    pub restart_index: usize,
}

const MAX_DAMPING: f64 = 1e14;

struct Problem<'a> {
    space: &'a Space,
    m: usize,
    dim: usize,
    eps: f64,
}

impl Problem<'_> {
    /// Smoothed distance and its gradient with respect to `Δ = x_i − x_j`.
    fn smoothed<T: Scalar>(&self, delta: &[T], grad: &mut [T]) -> T {
        let eps = T::lit(self.eps);
        let radii: Vec<T> = self
            .space
            .block_ranges()
            .map(|r| (delta[r].iter().fold(eps * eps, |acc, &v| acc + v * v)).sqrt())
            .collect();
        let big = radii.iter().fold(T::zero(), |a, &b| a.max(b));
        if big == T::zero() {
            grad.iter_mut().for_each(|g| *g = T::zero());
            return T::zero();
        }
        match self.space.p() {
            Exponent::Infinity => {
                let k = radii.iter().position(|&r| r == big).unwrap_or(0);
                grad.iter_mut().for_each(|g| *g = T::zero());
                for (idx, r) in self.space.block_ranges().enumerate() {
                    if idx == k {
                        for t in r {
                            grad[t] = delta[t] / radii[k];
                        }
                    }
                }
                big
            }
            Exponent::Finite(p) => {
                let pt = T::lit(p);
                let s = radii.iter().fold(T::zero(), |acc, &r| acc + (r / big).powf(pt));
                let d = big * s.powf(T::one() / pt);
                for (idx, r) in self.space.block_ranges().enumerate() {
                    let w = if radii[idx] == T::zero() {
                        T::zero()
                    } else {
                        (radii[idx] / d).powf(pt - T::one()) / radii[idx]
                    };
                    for t in r {
                        grad[t] = w * delta[t];
                    }
                }
                d
            }
        }
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.m).flat_map(move |i| (i + 1..self.m).map(move |j| (i, j)))
    }

    fn objective<T: Scalar>(&self, x: &[T]) -> T {
        let mut grad = vec![T::zero(); self.dim];
        self.pairs().fold(T::zero(), |acc, (i, j)| {
            let delta: Vec<T> = (0..self.dim).map(|t| x[i * self.dim + t] - x[j * self.dim + t]).collect();
            let r = self.smoothed(&delta, &mut grad) - T::one();
            acc + r * r
        })
    }

    fn true_residual<T: Scalar>(&self, x: &[T]) -> T {
        self.pairs().fold(T::zero(), |acc, (i, j)| {
            let d = self
                .space
                .distance(&x[i * self.dim..(i + 1) * self.dim], &x[j * self.dim..(j + 1) * self.dim])
                .expect("dimensions fixed");
            acc.max((d - T::one()).abs())
        })
    }

    /// Normal equations `JᵀJ` and `Jᵀr` of the residual vector.
    fn normal_equations<T: Scalar>(&self, x: &[T]) -> (Vec<Vec<T>>, Vec<T>) {
        let n = self.m * self.dim;
        let mut jtj = vec![vec![T::zero(); n]; n];
        let mut jtr = vec![T::zero(); n];
        let mut grad = vec![T::zero(); self.dim];
        for (i, j) in self.pairs() {
            let delta: Vec<T> = (0..self.dim).map(|t| x[i * self.dim + t] - x[j * self.dim + t]).collect();
            let r = self.smoothed(&delta, &mut grad) - T::one();
            // The row is `grad` at point i and `−grad` at point j.
            for s in 0..self.dim {
                jtr[i * self.dim + s] += grad[s] * r;
                jtr[j * self.dim + s] -= grad[s] * r;
                for t in 0..self.dim {
                    let v = grad[s] * grad[t];
                    jtj[i * self.dim + s][i * self.dim + t] += v;
                    jtj[j * self.dim + s][j * self.dim + t] += v;
                    jtj[i * self.dim + s][j * self.dim + t] -= v;
                    jtj[j * self.dim + s][i * self.dim + t] -= v;
                }
            }
        }
        (jtj, jtr)
    }

    /// One Levenberg–Marquardt descent from `x`; stops when the true residual
    /// reaches the target, no damping yields descent, or the budget runs out.
    fn descend<T: Scalar>(&self, x: &mut Vec<T>, cfg: &SearchConfig, budget: &mut usize) {
        let target = T::lit(cfg.residual_target);
        let mut mu = cfg.step_init;
        let mut obj = self.objective(x);
        while *budget > 0 && self.true_residual(x) > target {
            *budget -= 1;
            let (jtj, jtr) = self.normal_equations(x);
            let mut improved = false;
            while mu <= MAX_DAMPING {
                let mut a = jtj.clone();
                for (k, row) in a.iter_mut().enumerate() {
                    row[k] += T::lit(mu);
                }
                if let Some(step) = linalg::solve(a, jtr.iter().map(|&v| -v).collect()) {
                    let trial: Vec<T> = x.iter().zip(&step).map(|(&a, &b)| a + b).collect();
                    let trial_obj = self.objective(&trial);
                    if trial_obj < obj {
                        *x = trial;
                        obj = trial_obj;
                        mu = (mu / 3.0).max(1e-15);
                        improved = true;
                        break;
                    }
                }
                mu *= 4.0;
            }
            if !improved {
                break;
            }
        }
    }
}

/// Smoothing levels tried in turn: each stage starts from the previous
/// stage's point with a thousand times smaller `ε`.
const SMOOTHING_STAGES: i32 = 3;

fn run<T: Scalar>(space: &Space, m: usize, cfg: &SearchConfig, smoothing: f64, restart: usize) -> (Vec<T>, T) {
    let dim = space.ambient_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart as u64);
    let mut x: Vec<T> = (0..m * dim).map(|_| T::lit(rng.random_range(-1.0..=1.0))).collect();
    let mut budget = cfg.max_iters;
    let stages = if smoothing > 0.0 { SMOOTHING_STAGES } else { 1 };
    let mut problem = Problem { space, m, dim, eps: smoothing };
    for stage in 0..stages {
        problem.eps = smoothing * 1e-3f64.powi(stage);
        problem.descend(&mut x, cfg, &mut budget);
        if problem.true_residual(&x) <= T::lit(cfg.residual_target) {
            break;
        }
    }
    let res = problem.true_residual(&x);
    (x, res)
}

/// Searches for `m` points of `space` at pairwise distance 1.
///
/// Restarts run in parallel, each seeded from `(seed, restart)`, so the
/// outcome depends only on the arguments. The restart with the smallest
/// residual wins, ties going to the lowest index.
pub fn search_equilateral<T: Scalar>(space: &Space, m: usize, cfg: &SearchConfig) -> Result<SearchResult<T>> {
    if m < 2 {
        return Err(invalid("search needs m >= 2"));
    }
    if cfg.restarts == 0 {
        return Err(invalid("restarts must be at least 1"));
    }
    if !(cfg.residual_target > 0.0) {
        return Err(invalid("residual target must be positive"));
    }
    let dim = space.ambient_dim();
    let smoothing = match space.p() {
        Exponent::Finite(p) if p < 2.0 => cfg.smoothing_eps,
        _ => 0.0,
    };
    let runs: Vec<(Vec<T>, T)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run::<T>(space, m, cfg, smoothing, r))
        .collect();
    let (best, (x, residual)) = runs
        .into_iter()
        .enumerate()
        .reduce(|a, b| if b.1 .1 < a.1 .1 { b } else { a })
        .expect("at least one restart");
    let points = x.chunks(dim).map(|c| c.to_vec()).collect();
    Ok(SearchResult {
        points: PointSet::new(space.clone(), points)?,
        residual,
        converged: residual <= T::lit(cfg.residual_target),
        restart_index: best,
    })
}
