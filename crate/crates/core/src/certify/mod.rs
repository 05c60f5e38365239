//! Rank certificates.
//!
//! Each pipeline builds an `m × m` symmetric matrix from a point set whose
//! diagonal is `1`, bounds its rank from below with the trace inequality
//! `rank A ≥ (Σ a_ii)² / Σ a_ij²`, and from above by the dimension of a
//! polynomial family spanning the row functions. The report records every
//! measured quantity; nothing is assumed about the input.

mod matrices;
mod monomial;
mod span;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::approx::{self, EvenPolynomial};
use crate::construct::distance_profile;
use crate::error::{invalid, Error, Result};
use crate::linalg;
use crate::scalar::Scalar;
use crate::space::{norm_sandwich_check, Exponent, PointSet};

pub use matrices::{gram_thm3, gram_thm4, matrix_thm1, matrix_thm2, matrix_thm5, Thm2Diagnostics, Thm5Diagnostics};
pub use monomial::{
    enumerated_monomial_span, independence_rank_thm3, independence_rank_thm4, thm3_expected_rank,
    thm4_expected_rank, MultiPoly,
};
pub use span::{binomial, block_monomial_count, span_dim, telescoped_monomial_count, SpanParams};

/// Default relative singular-value cutoff for [`numerical_rank`].
pub const DEFAULT_RANK_TOL: f64 = 1e-9;
/// Tolerance for `a_ii = 1`.
pub const DIAGONAL_TOL: f64 = 1e-10;
/// Band around `1/√m` reported when an off-diagonal entry sits on the threshold.
pub const THRESHOLD_SLACK: f64 = 1e-12;
/// Default `c` gating the large-`p` theorem; only known to exceed 2.
pub const DEFAULT_C_ABSOLUTE: f64 = 2.01;

/// Dense symmetric matrix storing the upper triangle once.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T = f64> {
    dim: usize,
    upper: Vec<T>,
}

impl<T: Scalar> SymMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        SymMatrix { dim, upper: vec![T::zero(); dim * (dim + 1) / 2] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { T::one() } else { T::zero() })
    }

    /// Builds the matrix from `f(i, j)`, evaluated for `i ≤ j` only, in parallel.
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> T + Sync) -> Self {
        let pairs: Vec<(usize, usize)> = (0..dim).flat_map(|i| (i..dim).map(move |j| (i, j))).collect();
        let upper = pairs.par_iter().map(|&(i, j)| f(i, j)).collect();
        SymMatrix { dim, upper }
    }

    /// From a dense square matrix, which must be exactly symmetric.
    pub fn from_dense(rows: &[Vec<T>]) -> Result<Self> {
        let dim = rows.len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: r.len() });
            }
            for j in 0..i {
                if r[j] != rows[j][i] {
                    return Err(invalid(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self::from_fn(dim, |i, j| rows[i][j]))
    }

    fn index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * (2 * self.dim - i + 1) / 2 + (j - i)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.upper[self.index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        let k = self.index(i, j);
        self.upper[k] = v;
    }

    pub fn trace(&self) -> T {
        (0..self.dim).fold(T::zero(), |acc, i| acc + self.get(i, i))
    }

    /// `Σ_{i,j} a_ij²`.
    pub fn frobenius_sq(&self) -> T {
        let mut s = T::zero();
        for i in 0..self.dim {
            for j in i..self.dim {
                let v = self.get(i, j);
                s += if i == j { v * v } else { T::lit(2.0) * v * v };
            }
        }
        s
    }

    /// `max_{i≠j} |a_ij|`, zero for a `1 × 1` matrix.
    pub fn max_offdiag(&self) -> T {
        let mut m = T::zero();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                m = m.max(self.get(i, j).abs());
            }
        }
        m
    }

    /// `max_i |a_ii − 1|`.
    pub fn max_diag_deviation(&self) -> T {
        (0..self.dim).fold(T::zero(), |m, i| m.max((self.get(i, i) - T::one()).abs()))
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.get(i, j)).collect()).collect()
    }
}

/// `(Σ a_ii)² / Σ a_ij²`, a lower bound on `rank A`.
pub fn rank_lower_bound<T: Scalar>(a: &SymMatrix<T>) -> Result<f64> {
    let fro = a.frobenius_sq().as_f64();
    if fro == 0.0 {
        return Err(invalid("rank lower bound is undefined for the zero matrix"));
    }
    let tr = a.trace().as_f64();
    Ok(tr * tr / fro)
}

/// `m / (1 + (m−1)ε²)`: the trace bound for unit diagonal and off-diagonal
/// entries of magnitude at most `ε`.
pub fn epsilon_rank_bound(m: usize, eps: f64) -> f64 {
    let m = m as f64;
    m / (1.0 + (m - 1.0) * eps * eps)
}

/// Singular values above `tol · σ_max`; `0` for the zero matrix.
///
/// The decomposition runs in `f64` whatever the scalar type of `a`.
pub fn numerical_rank<T: Scalar>(a: &SymMatrix<T>, tol: f64) -> usize {
    let sv = linalg::singular_values(a.dim(), a.dim(), |i, j| a.get(i, j).as_f64());
    linalg::rank_from_singular_values(&sv, tol)
}

/// `[σ(0), …, σ(k)]`, the elementary symmetric polynomials of `vals`, by the
/// one-pass recurrence `σ_j ← σ_j + v·σ_{j−1}`.
pub fn elementary_symmetric<T: Scalar>(vals: &[T]) -> Vec<T> {
    let mut e = vec![T::zero(); vals.len() + 1];
    e[0] = T::one();
    for (k, &v) in vals.iter().enumerate() {
        for j in (1..=k + 1).rev() {
            let prev = e[j - 1];
            e[j] += v * prev;
        }
    }
    e
}

/// Certificate pipelines, named by the CLI tags `thm1` … `thm5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    /// Large `p`: `1 − ‖p_i − x‖_k^k` with `k` the nearby even integer.
    Thm1,
    /// s-distance sets: products of approximated distance polynomials.
    Thm2,
    /// Two Euclidean blocks, `ℓ_∞` sum.
    Thm3,
    /// Two Euclidean blocks, even `p`.
    Thm4,
    /// `ℓ_p` sum of Euclidean blocks, any `p`.
    Thm5,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Theorem::Thm1 => "thm1",
            Theorem::Thm2 => "thm2",
            Theorem::Thm3 => "thm3",
            Theorem::Thm4 => "thm4",
            Theorem::Thm5 => "thm5",
        };
        f.write_str(s)
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thm1" => Ok(Theorem::Thm1),
            "thm2" => Ok(Theorem::Thm2),
            "thm3" => Ok(Theorem::Thm3),
            "thm4" => Ok(Theorem::Thm4),
            "thm5" => Ok(Theorem::Thm5),
            _ => Err(Error::Parse(format!("unknown theorem tag '{s}'"))),
        }
    }
}

/// Knobs for [`certify`]. `None` fields are derived from the point set.
#[derive(Debug, Clone)]
pub struct CertifyConfig {
    /// Even embedding exponent for `thm1`.
    pub k: Option<u32>,
    /// Overrides the exponent of the point set's space.
    pub p: Option<Exponent>,
    /// Constant used for degree selection (`thm2`, `thm5`) and for the
    /// large-`p` gate reported by `thm1`.
    pub c: Option<f64>,
    /// Fixes the approximation degree instead of selecting it.
    pub d: Option<usize>,
    pub rank_tol: f64,
    /// Clustering tolerance used to read off the distances for `thm2`.
    pub profile_tol: f64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig { k: None, p: None, c: None, d: None, rank_tol: DEFAULT_RANK_TOL, profile_tol: 1e-7 }
    }
}

/// Outcome of a certificate pipeline.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub theorem: Theorem,
    pub m: usize,
    pub diag_ok: bool,
    pub max_offdiag: f64,
    pub offdiag_threshold: f64,
    /// Whether `max_offdiag < offdiag_threshold` is part of `passes`.
    pub threshold_checked: bool,
    pub rank_lemma_lower: f64,
    pub numerical_rank: usize,
    pub span_upper: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub independence_rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub independence_expected: Option<usize>,
    pub parameters: BTreeMap<String, f64>,
    pub passes: bool,
    pub notes: Vec<String>,
}

/// `k` for the large-`p` pipeline: the smallest even integer above `p` when
/// `⌊p⌋` is odd, otherwise `⌊p⌋` itself.
pub fn select_embedding_exponent(p: f64) -> u32 {
    let f = p.floor() as u32;
    if f % 2 == 1 {
        f + 1
    } else {
        f.max(2)
    }
}

/// `c` making the `s`-distance pipeline's off-diagonal estimate work:
/// `max(B(p)·k·2^{pk²−pk+2k}, (2^{1/p}−1)^{−p})`.
pub fn s_distance_constant(p: f64, k: usize) -> Result<f64> {
    let kf = k as f64;
    let b = approx::jackson_constant(p)?;
    Ok((b * kf * 2f64.powf(p * kf * kf - p * kf + 2.0 * kf)).max(approx::degree_threshold(p)))
}

/// `c = max(B(p), (2^{1/p}−1)^{−p})` for the `ℓ_p`-sum pipeline.
pub fn lp_sum_constant(p: f64) -> Result<f64> {
    Ok(approx::jackson_constant(p)?.max(approx::degree_threshold(p)))
}

struct Assembled<T> {
    matrix: SymMatrix<T>,
    threshold_checked: bool,
    span_upper: u64,
    independence: Option<(usize, usize)>,
    parameters: BTreeMap<String, f64>,
    notes: Vec<String>,
    force_fail: bool,
}

/// Runs the pipeline for `theorem` on `points` and reports every check.
pub fn certify<T: Scalar>(points: &PointSet<T>, theorem: Theorem, cfg: &CertifyConfig) -> Result<CertificateReport> {
    let space = points.space().with_exponent(cfg.p.unwrap_or(points.space().p()));
    let points = points.with_space(space)?;
    let asm = match theorem {
        Theorem::Thm1 => assemble_thm1(&points, cfg)?,
        Theorem::Thm2 => assemble_thm2(&points, cfg)?,
        Theorem::Thm3 => assemble_thm3(&points)?,
        Theorem::Thm4 => assemble_thm4(&points)?,
        Theorem::Thm5 => assemble_thm5(&points, cfg)?,
    };
    Ok(finish(theorem, asm, cfg.rank_tol))
}

fn finish<T: Scalar>(theorem: Theorem, asm: Assembled<T>, rank_tol: f64) -> CertificateReport {
    let a = &asm.matrix;
    let m = a.dim();
    let diag_ok = a.max_diag_deviation().as_f64() <= DIAGONAL_TOL;
    let max_offdiag = a.max_offdiag().as_f64();
    let threshold = 1.0 / (m as f64).sqrt();
    let mut notes = asm.notes;
    if (max_offdiag - threshold).abs() <= THRESHOLD_SLACK {
        notes.push(format!(
            "max off-diagonal {max_offdiag:e} lies within {THRESHOLD_SLACK:e} of the threshold 1/sqrt(m)"
        ));
    }
    let rank_lemma_lower = rank_lower_bound(a).unwrap_or(0.0);
    let numerical_rank = numerical_rank(a, rank_tol);
    let below_threshold = max_offdiag < threshold;
    if !asm.threshold_checked {
        notes.push(format!(
            "off-diagonal threshold not gated for this pipeline (max {max_offdiag:e} vs 1/sqrt(m) = {threshold:e})"
        ));
    }
    let rank_chain = rank_lemma_lower <= numerical_rank as f64 + 1e-9 && numerical_rank as u64 <= asm.span_upper;
    let independent = asm.independence.is_none_or(|(r, e)| r == e);
    if let Some((r, e)) = asm.independence {
        notes.push(format!("augmented family rank {r}, expected {e} for linear independence"));
    }
    let passes = !asm.force_fail
        && diag_ok
        && (!asm.threshold_checked || below_threshold)
        && rank_chain
        && independent;
    CertificateReport {
        theorem,
        m,
        diag_ok,
        max_offdiag,
        offdiag_threshold: threshold,
        threshold_checked: asm.threshold_checked,
        rank_lemma_lower,
        numerical_rank,
        span_upper: asm.span_upper,
        independence_rank: asm.independence.map(|x| x.0),
        independence_expected: asm.independence.map(|x| x.1),
        parameters: asm.parameters,
        passes,
        notes,
    }
}

fn finite_p(points: &PointSet<impl Scalar>, what: &str) -> Result<f64> {
    points
        .space()
        .p()
        .finite()
        .ok_or_else(|| invalid(format!("{what} needs a finite exponent p")))
}

fn require_coordinate(points: &PointSet<impl Scalar>, what: &str) -> Result<()> {
    if !points.space().is_coordinate() {
        return Err(invalid(format!("{what} needs an lp^n space (all blocks of dimension 1)")));
    }
    Ok(())
}

fn require_two_blocks(points: &PointSet<impl Scalar>, what: &str) -> Result<(usize, usize)> {
    match points.space().blocks() {
        &[a, b] => Ok((a, b)),
        _ => Err(invalid(format!("{what} needs a space with exactly two blocks"))),
    }
}

fn assemble_thm1<T: Scalar>(points: &PointSet<T>, cfg: &CertifyConfig) -> Result<Assembled<T>> {
    require_coordinate(points, "thm1")?;
    let p = finite_p(points, "thm1")?;
    let k = cfg.k.unwrap_or_else(|| select_embedding_exponent(p));
    let matrix = matrix_thm1(points, k)?;
    let n = points.space().ambient_dim();
    let span_upper = span_dim(&SpanParams::Thm1 { n, k: k as usize })?;

    let mut notes = vec![format!("distances re-measured in l_{k} after embedding the l_{p} set")];
    let (lo, hi) = (Exponent::Finite(p.min(k as f64)), Exponent::Finite(p.max(k as f64)));
    let mut sandwich_ok = true;
    let (mut kmin, mut kmax) = (f64::INFINITY, 0.0f64);
    for (i, j, _) in points.pairwise_distances() {
        let diff: Vec<T> = points.points()[i].iter().zip(&points.points()[j]).map(|(&a, &b)| a - b).collect();
        let s = norm_sandwich_check(&diff, lo, hi)?;
        sandwich_ok &= s.holds;
        let nk = crate::space::lp_norm(&diff, Exponent::Finite(k as f64)).as_f64();
        kmin = kmin.min(nk);
        kmax = kmax.max(nk);
    }
    if points.len() > 1 {
        let factor = (n as f64).powf(1.0 / k as f64 - 1.0 / p);
        let (plo, phi) = if p < k as f64 { (factor, 1.0) } else { (1.0, factor) };
        notes.push(format!(
            "power-mean sandwich {} on all pairs; l_{k} distances span [{kmin:.6e}, {kmax:.6e}], unit l_{p} distances predict [{plo:.6e}, {phi:.6e}]",
            if sandwich_ok { "holds" } else { "FAILS" }
        ));
    }
    let c = cfg.c.unwrap_or(DEFAULT_C_ABSOLUTE);
    let gate = c * (n as f64 * (n as f64).ln()).powi(2);
    notes.push(format!(
        "large-p regime p >= c(n ln n)^2 = {gate:.6e} (c = {c}) {}",
        if n > 1 && p >= gate { "holds" } else { "does not hold" }
    ));
    let force_fail = p < 2.0;
    if force_fail {
        notes.push(format!("inapplicable: the large-p pipeline needs p >= 2, got p = {p} (k = {k})"));
    }
    let parameters = BTreeMap::from([("p".to_string(), p), ("k".to_string(), k as f64)]);
    Ok(Assembled {
        matrix,
        threshold_checked: true,
        span_upper,
        independence: None,
        parameters,
        notes,
        force_fail,
    })
}

fn approximant<T: Scalar>(
    p: f64,
    c: f64,
    n: usize,
    m: usize,
    fixed: Option<usize>,
    notes: &mut Vec<String>,
) -> Result<(EvenPolynomial<T>, usize)> {
    let d = match fixed {
        Some(d) => d,
        None => approx::choose_degree(p, c, n, m)? as usize,
    };
    let d = d.max(p.ceil() as usize);
    let (poly, cert) = approx::approximate_abs_power::<T>(p, d)?;
    notes.push(format!(
        "approximant of |x|^{p}: degree bound d = {d}, measured error {:.6e} <= B(p)/d^p = {:.6e}",
        cert.measured_error, cert.jackson_bound
    ));
    if poly.actual_degree() < d && d > approx::MAX_CONSTRUCTED_DEGREE {
        notes.push(format!(
            "constructed approximant has degree {} (stable construction limit)",
            poly.actual_degree()
        ));
    }
    Ok((poly, d))
}

fn assemble_thm2<T: Scalar>(points: &PointSet<T>, cfg: &CertifyConfig) -> Result<Assembled<T>> {
    require_coordinate(points, "thm2")?;
    let p = finite_p(points, "thm2")?;
    let m = points.len();
    let n = points.space().ambient_dim();
    let mut dists: Vec<T> = if m == 1 {
        vec![T::one()]
    } else {
        distance_profile(points, cfg.profile_tol)?
    };
    if (dists[0].as_f64() - 1.0).abs() > cfg.profile_tol {
        return Err(invalid(format!("the largest distance must be 1, got {}", dists[0])));
    }
    dists[0] = T::one();
    let k = dists.len();
    let mut notes = vec![format!("{k} distinct distances")];
    let smallest = dists[k - 1].as_f64();
    if smallest < 2f64.powi(1 - k as i32) {
        notes.push(format!(
            "smallest distance {smallest:e} is below 2^(1-k); the clustering recursion applies instead"
        ));
    }
    let c = match cfg.c {
        Some(c) => c,
        None => s_distance_constant(p, k)?,
    };
    let (poly, d) = approximant::<T>(p, c, n, m, cfg.d, &mut notes)?;
    let (matrix, diag) = matrix_thm2(points, &dists, &poly)?;
    notes.push(format!(
        "max |X_ij - Y_ij| = {:.6e} vs n B(p)/d^p = {:.6e}; Y_ij {}",
        diag.max_xy_gap,
        diag.xy_bound,
        if diag.y_positive { "all positive" } else { "NOT all positive" }
    ));
    let span_upper = span_dim(&SpanParams::Thm2 { n, d, k })?;
    let parameters = BTreeMap::from([
        ("p".to_string(), p),
        ("c".to_string(), c),
        ("d".to_string(), d as f64),
        ("k".to_string(), k as f64),
    ]);
    Ok(Assembled {
        matrix,
        threshold_checked: k == 1,
        span_upper,
        independence: None,
        parameters,
        notes,
        force_fail: false,
    })
}

fn assemble_thm3<T: Scalar>(points: &PointSet<T>) -> Result<Assembled<T>> {
    let (a, b) = require_two_blocks(points, "thm3")?;
    let mut notes = Vec::new();
    if !points.space().p().is_infinite() {
        notes.push(format!("space exponent is {}, the pipeline targets p = inf", points.space().p()));
    }
    let matrix = gram_thm3(points)?;
    let independence = if a + b <= monomial::THM3_MAX_VARS {
        let r = independence_rank_thm3(points.space(), points.points(), DEFAULT_RANK_TOL)?;
        Some((r, thm3_expected_rank(points.len(), a, b)))
    } else {
        notes.push("independence check skipped: too many variables".into());
        None
    };
    Ok(Assembled {
        matrix,
        threshold_checked: true,
        span_upper: span_dim(&SpanParams::Thm3 { a, b })?,
        independence,
        parameters: BTreeMap::from([("a".to_string(), a as f64), ("b".to_string(), b as f64)]),
        notes,
        force_fail: false,
    })
}

fn assemble_thm4<T: Scalar>(points: &PointSet<T>) -> Result<Assembled<T>> {
    let (a, b) = require_two_blocks(points, "thm4")?;
    let p = points
        .space()
        .p()
        .as_even_integer()
        .ok_or_else(|| invalid("thm4 needs an even integer exponent p"))? as u32;
    let matrix = gram_thm4(points, p)?;
    let mut notes = Vec::new();
    let independence = if a + b <= monomial::THM4_MAX_VARS && p <= monomial::THM4_MAX_P {
        let r = independence_rank_thm4(points.space(), points.points(), p, DEFAULT_RANK_TOL)?;
        Some((r, thm4_expected_rank(points.len(), a, b, p)))
    } else {
        notes.push("independence check skipped: expansion beyond the tractability cap".into());
        None
    };
    let parameters = BTreeMap::from([
        ("a".to_string(), a as f64),
        ("b".to_string(), b as f64),
        ("p".to_string(), p as f64),
    ]);
    Ok(Assembled {
        matrix,
        threshold_checked: true,
        span_upper: span_dim(&SpanParams::Thm4 { a, b, p })?,
        independence,
        parameters,
        notes,
        force_fail: false,
    })
}

fn assemble_thm5<T: Scalar>(points: &PointSet<T>, cfg: &CertifyConfig) -> Result<Assembled<T>> {
    let p = finite_p(points, "thm5")?;
    let blocks = points.space().blocks().to_vec();
    let n = blocks.len();
    let mut notes = Vec::new();
    if 2.0 * p <= points.space().max_block() as f64 {
        notes.push(format!("2p > max block dimension fails (p = {p})"));
    }
    let c = match cfg.c {
        Some(c) => c,
        None => lp_sum_constant(p)?,
    };
    let (poly, d) = approximant::<T>(p, c, n, points.len(), cfg.d, &mut notes)?;
    let (matrix, diag) = matrix_thm5(points, &poly)?;
    notes.push(format!(
        "max |sum_k ||.||^p - sum_k P(||.||)| = {:.6e} vs n B(p)/d^p = {:.6e}",
        diag.max_gap, diag.bound
    ));
    let parameters = BTreeMap::from([
        ("p".to_string(), p),
        ("c".to_string(), c),
        ("d".to_string(), d as f64),
    ]);
    Ok(Assembled {
        matrix,
        threshold_checked: true,
        span_upper: span_dim(&SpanParams::Thm5 { blocks, d })?,
        independence: None,
        parameters,
        notes,
        force_fail: false,
    })
}
