//! Small dense linear algebra helpers.

use nalgebra::DMatrix;

use crate::scalar::Scalar;

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
/// `a` is row-major `n × n`. Returns `None` for a numerically singular system.
pub fn solve<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[pivot][col] == T::zero() || !a[pivot][col].is_finite() {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == T::zero() {
                continue;
            }
            for k in col..n {
                let v = a[col][k];
                a[row][k] -= factor * v;
            }
            let v = b[col];
            b[row] -= factor * v;
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Singular values of a dense row-major matrix, largest first.
pub fn singular_values(rows: usize, cols: usize, data: impl Fn(usize, usize) -> f64) -> Vec<f64> {
    if rows == 0 || cols == 0 {
        return Vec::new();
    }
    // SVD cost is driven by the smaller side; work with the short-and-wide orientation.
    let m = if rows <= cols {
        DMatrix::from_fn(cols, rows, |i, j| data(j, i))
    } else {
        DMatrix::from_fn(rows, cols, data)
    };
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    sv
}

/// Number of singular values above `tol · σ_max`; zero for the zero matrix.
pub fn rank_from_singular_values(sv: &[f64], tol: f64) -> usize {
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 || !smax.is_finite() {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * smax).count()
}

/// Numerical rank of the matrix whose rows are given, ignoring columns that
/// are identically zero.
pub fn row_rank(rows: &[Vec<f64>], tol: f64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let width = rows[0].len();
    let live: Vec<usize> = (0..width).filter(|&c| rows.iter().any(|r| r[c] != 0.0)).collect();
    let sv = singular_values(rows.len(), live.len(), |i, j| rows[i][live[j]]);
    rank_from_singular_values(&sv, tol)
}

/// The Mersenne prime `2^61 − 1`.
const MODULUS: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODULUS as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

fn to_field(v: i128) -> u64 {
    v.rem_euclid(MODULUS as i128) as u64
}

/// Exact rank of an integer matrix over `GF(2^61 − 1)`.
///
/// This equals the rational rank unless the prime divides every maximal
/// nonzero minor, which cannot happen for the small-coefficient matrices
/// produced by the monomial expansions here.
pub fn rank_mod_prime(rows: &[Vec<i128>]) -> usize {
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| to_field(v)).collect())
        .collect();
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..nrows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = pow_mod(m[rank][col], MODULUS - 2);
        for k in col..ncols {
            m[rank][k] = mul_mod(m[rank][k], inv);
        }
        for r in 0..nrows {
            if r != rank && m[r][col] != 0 {
                let f = m[r][col];
                for k in col..ncols {
                    let sub = mul_mod(f, m[rank][k]);
                    m[r][k] = (m[r][k] + MODULUS - sub) % MODULUS;
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}
