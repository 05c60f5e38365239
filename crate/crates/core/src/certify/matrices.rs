//! Certificate matrices `a_ij = f_i(p_j)`.

use super::SymMatrix;
use crate::approx::{self, EvenPolynomial};
use crate::error::{invalid, Result};
use crate::scalar::Scalar;
use crate::space::PointSet;

/// Side measurements of [`matrix_thm2`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thm2Diagnostics {
    /// `max_{i≠j} |X_ij − Y_ij|` with `X_ij = Σ_t |Δ_t|^p`, `Y_ij = Σ_t P(Δ_t)`.
    pub max_xy_gap: f64,
    /// `n·B(p)/d^p`, with `d` the degree bound of `P`.
    pub xy_bound: f64,
    /// Whether every off-diagonal `Y_ij` is positive.
    pub y_positive: bool,
}

/// Side measurements of [`matrix_thm5`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thm5Diagnostics {
    /// `max_{i≠j} |Σ_k ‖Δ_k‖^p − Σ_k P(‖Δ_k‖)|`.
    pub max_gap: f64,
    /// `n·B(p)/d^p` with `n` the number of blocks.
    pub bound: f64,
}

fn exponent_of<T: Scalar>(points: &PointSet<T>) -> Result<f64> {
    points
        .space()
        .p()
        .finite()
        .ok_or_else(|| invalid("a finite exponent p is required"))
}

fn coordinate_only<T: Scalar>(points: &PointSet<T>) -> Result<()> {
    if points.space().is_coordinate() {
        Ok(())
    } else {
        Err(invalid("points must lie in an lp^n space (all blocks of dimension 1)"))
    }
}

fn two_blocks<T: Scalar>(points: &PointSet<T>) -> Result<usize> {
    match points.space().blocks() {
        &[a, _] => Ok(a),
        b => Err(invalid(format!("a two-block space is required, got {} blocks", b.len()))),
    }
}

/// `a_ij = 1 − ‖p_i − p_j‖_k^k` for even `k`.
pub fn matrix_thm1<T: Scalar>(points: &PointSet<T>, k: u32) -> Result<SymMatrix<T>> {
    if k < 2 || k % 2 == 1 {
        return Err(invalid(format!("k must be an even integer >= 2, got {k}")));
    }
    coordinate_only(points)?;
    let pts = points.points();
    Ok(SymMatrix::from_fn(pts.len(), |i, j| {
        let s = pts[i].iter().zip(&pts[j]).fold(T::zero(), |acc, (&a, &b)| acc + (a - b).powi(k as i32));
        T::one() - s
    }))
}

/// `a_ij = π^{-1} ∏_u (a_u^p − Σ_t P(p_jt − p_it))` with `π = ∏_u a_u^p`.
pub fn matrix_thm2<T: Scalar>(
    points: &PointSet<T>,
    dists: &[T],
    poly: &EvenPolynomial<T>,
) -> Result<(SymMatrix<T>, Thm2Diagnostics)> {
    coordinate_only(points)?;
    let p = exponent_of(points)?;
    if dists.is_empty() || dists[0] != T::one() {
        return Err(invalid("distances must start with a_1 = 1"));
    }
    if dists.windows(2).any(|w| !(w[0] > w[1])) || !(dists[dists.len() - 1] > T::zero()) {
        return Err(invalid("distances must be strictly decreasing and positive"));
    }
    let pt = T::lit(p);
    let powers: Vec<T> = dists.iter().map(|&a| a.powf(pt)).collect();
    let pi = powers.iter().fold(T::one(), |acc, &v| acc * v);
    let pts = points.points();
    let y = |i: usize, j: usize| pts[i].iter().zip(&pts[j]).fold(T::zero(), |acc, (&a, &b)| acc + poly.eval(b - a));
    let matrix = SymMatrix::from_fn(pts.len(), |i, j| {
        if i == j {
            return T::one();
        }
        let yij = y(i, j);
        powers.iter().fold(T::one(), |acc, &ap| acc * (ap - yij)) / pi
    });

    let mut max_xy_gap = 0.0f64;
    let mut y_positive = true;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let x = pts[i].iter().zip(&pts[j]).fold(T::zero(), |acc, (&a, &b)| acc + (b - a).abs().powf(pt));
            let yij = y(i, j);
            y_positive &= yij > T::zero();
            max_xy_gap = max_xy_gap.max((x - yij).abs().as_f64());
        }
    }
    let n = points.space().ambient_dim() as f64;
    let xy_bound = n * approx::jackson_bound(p, poly.degree())?;
    Ok((matrix, Thm2Diagnostics { max_xy_gap, xy_bound, y_positive }))
}

fn block_sq_distances<T: Scalar>(points: &PointSet<T>, i: usize, j: usize) -> Vec<T> {
    let (u, v) = (&points.points()[i], &points.points()[j]);
    points
        .space()
        .block_ranges()
        .map(|r| u[r.clone()].iter().zip(&v[r]).fold(T::zero(), |acc, (&a, &b)| acc + (a - b) * (a - b)))
        .collect()
}

/// `m_ij = 1 − Σ_k P(‖p̃_ik − p̃_jk‖)` over the Euclidean blocks.
pub fn matrix_thm5<T: Scalar>(points: &PointSet<T>, poly: &EvenPolynomial<T>) -> Result<(SymMatrix<T>, Thm5Diagnostics)> {
    let p = exponent_of(points)?;
    let matrix = SymMatrix::from_fn(points.len(), |i, j| {
        if i == j {
            return T::one();
        }
        let s = block_sq_distances(points, i, j)
            .into_iter()
            .fold(T::zero(), |acc, sq| acc + poly.eval_square(sq));
        T::one() - s
    });
    let pt = T::lit(p);
    let mut max_gap = 0.0f64;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let gap = block_sq_distances(points, i, j).into_iter().fold(T::zero(), |acc, sq| {
                acc + sq.sqrt().powf(pt) - poly.eval_square(sq)
            });
            max_gap = max_gap.max(gap.abs().as_f64());
        }
    }
    let n = points.space().num_blocks() as f64;
    let bound = n * approx::jackson_bound(p, poly.degree())?;
    Ok((matrix, Thm5Diagnostics { max_gap, bound }))
}

/// `(1 − ‖ũ_1 − ṽ_1‖²)(1 − ‖ũ_2 − ṽ_2‖²)` for a two-block space.
pub fn gram_thm3<T: Scalar>(points: &PointSet<T>) -> Result<SymMatrix<T>> {
    two_blocks(points)?;
    Ok(SymMatrix::from_fn(points.len(), |i, j| {
        if i == j {
            return T::one();
        }
        let sq = block_sq_distances(points, i, j);
        (T::one() - sq[0]) * (T::one() - sq[1])
    }))
}

/// `1 − ‖ũ_1 − ṽ_1‖^p − ‖ũ_2 − ṽ_2‖^p` for a two-block space and even `p`.
pub fn gram_thm4<T: Scalar>(points: &PointSet<T>, p: u32) -> Result<SymMatrix<T>> {
    if p == 0 || p % 2 == 1 {
        return Err(invalid(format!("p must be a positive even integer, got {p}")));
    }
    two_blocks(points)?;
    let h = (p / 2) as i32;
    Ok(SymMatrix::from_fn(points.len(), |i, j| {
        if i == j {
            return T::one();
        }
        let sq = block_sq_distances(points, i, j);
        T::one() - sq[0].powi(h) - sq[1].powi(h)
    }))
}
