//! `ℓ_p^n` spaces, `ℓ_p` sums of Euclidean blocks, norms and distances.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// The outer exponent of a space. `∞` is its own variant, never a large
/// finite surrogate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_infinite() && p > 0.0 {
            return Ok(Exponent::Infinity);
        }
        if !p.is_finite() || p < 1.0 {
            return Err(invalid(format!("exponent must satisfy p >= 1, got {p}")));
        }
        Ok(Exponent::Finite(p))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    /// Finite value of `p`, or `None` for `∞`.
    pub fn finite(self) -> Option<f64> {
        match self {
            Exponent::Finite(p) => Some(p),
            Exponent::Infinity => None,
        }
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinity => 0.0,
        }
    }

    /// `Some(k)` when `p` is a finite integer.
    pub fn as_integer(self) -> Option<u64> {
        match self {
            Exponent::Finite(p) if p.fract() == 0.0 && p < 1e15 => Some(p as u64),
            _ => None,
        }
    }

    /// `Some(k)` when `p` is a finite even integer.
    pub fn as_even_integer(self) -> Option<u64> {
        self.as_integer().filter(|k| k % 2 == 0)
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        use Exponent::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.partial_cmp(b),
            (Finite(_), Infinity) => Some(std::cmp::Ordering::Less),
            (Infinity, Finite(_)) => Some(std::cmp::Ordering::Greater),
            (Infinity, Infinity) => Some(std::cmp::Ordering::Equal),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            _ => {
                let p: f64 = s
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent '{s}'")))?;
                Exponent::new(p)
            }
        }
    }
}

/// `E^{a_1} ⊕_p ⋯ ⊕_p E^{a_n}`. Plain `ℓ_p^n` is the case of `n` blocks of
/// dimension one.
#[derive(Debug, Clone, PartialEq)]
pub struct Space {
    p: Exponent,
    blocks: Vec<usize>,
}

impl Space {
    pub fn new(p: Exponent, blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(invalid("a space needs at least one block"));
        }
        if blocks.contains(&0) {
            return Err(invalid("block dimensions must be positive"));
        }
        if let Exponent::Finite(p) = p {
            Exponent::new(p)?;
        }
        Ok(Space { p, blocks })
    }

    /// `ℓ_p^n`.
    pub fn lp(n: usize, p: Exponent) -> Result<Self> {
        Self::new(p, vec![1; n])
    }

    /// `E^n`, i.e. a single Euclidean block.
    pub fn euclidean(n: usize) -> Result<Self> {
        Self::new(Exponent::Finite(2.0), vec![n])
    }

    pub fn p(&self) -> Exponent {
        self.p
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// Number of blocks.
    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// `Σ a_i`.
    pub fn ambient_dim(&self) -> usize {
        self.blocks.iter().sum()
    }

    /// True when every block has dimension one.
    pub fn is_coordinate(&self) -> bool {
        self.blocks.iter().all(|&a| a == 1)
    }

    /// True when the norm is Euclidean on the whole ambient space.
    pub fn is_euclidean(&self) -> bool {
        self.blocks.len() == 1 || self.p == Exponent::Finite(2.0)
    }

    /// Largest block dimension.
    pub fn max_block(&self) -> usize {
        self.blocks.iter().copied().max().unwrap_or(0)
    }

    /// Same blocks, different exponent.
    pub fn with_exponent(&self, p: Exponent) -> Space {
        Space { p, blocks: self.blocks.clone() }
    }

    /// Half-open coordinate ranges of the blocks.
    pub fn block_ranges(&self) -> impl Iterator<Item = std::ops::Range<usize>> + '_ {
        self.blocks.iter().scan(0usize, |start, &a| {
            let r = *start..*start + a;
            *start += a;
            Some(r)
        })
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim(), got: len });
        }
        Ok(())
    }

    /// Euclidean norms of the block components of `x`.
    pub fn block_norms<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_dim(x.len())?;
        Ok(self.block_ranges().map(|r| euclidean_norm(&x[r])).collect())
    }

    /// Outer `ℓ_p` norm of the block norms, or their maximum when `p = ∞`.
    pub fn norm<T: Scalar>(&self, x: &[T]) -> Result<T> {
        let radii = self.block_norms(x)?;
        Ok(outer_norm(&radii, self.p))
    }

    pub fn distance<T: Scalar>(&self, x: &[T], y: &[T]) -> Result<T> {
        self.check_dim(x.len())?;
        self.check_dim(y.len())?;
        let diff: Vec<T> = x.iter().zip(y).map(|(&a, &b)| a - b).collect();
        self.norm(&diff)
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_coordinate() {
            write!(f, "lp:n={},p={}", self.blocks.len(), self.p)
        } else {
            let blocks: Vec<String> = self.blocks.iter().map(|a| a.to_string()).collect();
            write!(f, "lpsum:blocks={},p={}", blocks.join(","), self.p)
        }
    }
}

impl FromStr for Space {
    type Err = Error;

    /// Parses `lp:n=<n>,p=<p|inf>` or `lpsum:blocks=<a1,a2,...>,p=<p|inf>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("malformed space string '{s}'"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let (head, p) = rest.rsplit_once(",p=").ok_or_else(bad)?;
        let p: Exponent = p.parse()?;
        match kind {
            "lp" => {
                let n = head.strip_prefix("n=").ok_or_else(bad)?;
                let n: usize = n.trim().parse().map_err(|_| bad())?;
                Space::lp(n, p)
            }
            "lpsum" => {
                let list = head.strip_prefix("blocks=").ok_or_else(bad)?;
                let blocks = list
                    .split(',')
                    .map(|a| a.trim().parse::<usize>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?;
                Space::new(p, blocks)
            }
            _ => Err(bad()),
        }
    }
}

impl Serialize for Space {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Space {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A point of a space: its coordinates, blocks laid out consecutively.
pub type Point<T = f64> = Vec<T>;

/// An ordered, nonempty list of points of one space.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet<T = f64> {
    space: Space,
    points: Vec<Point<T>>,
}

impl<T: Scalar> PointSet<T> {
    pub fn new(space: Space, points: Vec<Point<T>>) -> Result<Self> {
        if points.is_empty() {
            return Err(invalid("a point set needs at least one point"));
        }
        for x in &points {
            space.check_dim(x.len())?;
        }
        Ok(PointSet { space, points })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn points(&self) -> &[Point<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn into_points(self) -> Vec<Point<T>> {
        self.points
    }

    /// The same coordinates viewed in another space of equal ambient dimension.
    pub fn with_space(&self, space: Space) -> Result<Self> {
        PointSet::new(space, self.points.clone())
    }

    /// Multiplies every coordinate by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        let points = self
            .points
            .iter()
            .map(|x| x.iter().map(|&c| c * factor).collect())
            .collect();
        PointSet { space: self.space.clone(), points }
    }

    pub fn distance(&self, i: usize, j: usize) -> T {
        self.space
            .distance(&self.points[i], &self.points[j])
            .expect("points validated on construction")
    }

    /// Dense symmetric matrix of pairwise distances with a zero diagonal.
    pub fn distance_matrix(&self) -> Vec<Vec<T>> {
        let m = self.len();
        let mut d = vec![vec![T::zero(); m]; m];
        for i in 0..m {
            for j in i + 1..m {
                let v = self.distance(i, j);
                d[i][j] = v;
                d[j][i] = v;
            }
        }
        d
    }

    /// Pairwise distances `d(p_i, p_j)` for `i < j`, in row-major order.
    pub fn pairwise_distances(&self) -> Vec<(usize, usize, T)> {
        let m = self.len();
        let mut out = Vec::with_capacity(m * (m - 1) / 2);
        for i in 0..m {
            for j in i + 1..m {
                out.push((i, j, self.distance(i, j)));
            }
        }
        out
    }

    /// Converts coordinates to another scalar type.
    pub fn cast<U: Scalar>(&self) -> PointSet<U> {
        let points = self
            .points
            .iter()
            .map(|x| x.iter().map(|&c| U::lit(c.as_f64())).collect())
            .collect();
        PointSet { space: self.space.clone(), points }
    }
}

pub fn euclidean_norm<T: Scalar>(x: &[T]) -> T {
    let scale = x.iter().fold(T::zero(), |m, &c| m.max(c.abs()));
    if scale == T::zero() {
        return T::zero();
    }
    let s = x.iter().fold(T::zero(), |acc, &c| {
        let r = c / scale;
        acc + r * r
    });
    scale * s.sqrt()
}

/// `(Σ r_i^p)^{1/p}`, or `max r_i` for `p = ∞`, for nonnegative `r_i`.
///
/// Computed as `m·(Σ (r_i/m)^p)^{1/p}` with `m = max r_i` so that large `p`
/// neither overflows nor underflows.
pub fn outer_norm<T: Scalar>(radii: &[T], p: Exponent) -> T {
    let m = radii.iter().fold(T::zero(), |m, &r| m.max(r.abs()));
    match p {
        Exponent::Infinity => m,
        _ if m == T::zero() => T::zero(),
        Exponent::Finite(p) => {
            let pt = T::lit(p);
            let s = radii.iter().fold(T::zero(), |acc, &r| acc + (r.abs() / m).powf(pt));
            m * s.powf(T::lit(1.0 / p))
        }
    }
}

/// Plain `ℓ_p` norm of a coordinate vector.
pub fn lp_norm<T: Scalar>(x: &[T], p: Exponent) -> T {
    outer_norm(x, p)
}

/// The three quantities of the power-mean sandwich
/// `‖x‖_q ≤ ‖x‖_p ≤ n^{1/p−1/q}‖x‖_q` and whether both sides hold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sandwich {
    pub norm_q: f64,
    pub norm_p: f64,
    pub scaled_norm_q: f64,
    pub holds: bool,
}

const SANDWICH_RTOL: f64 = 1e-12;

pub fn norm_sandwich_check<T: Scalar>(x: &[T], p: Exponent, q: Exponent) -> Result<Sandwich> {
    if p > q {
        return Err(invalid(format!("sandwich needs p <= q, got p={p}, q={q}")));
    }
    if let Exponent::Finite(v) = p {
        Exponent::new(v)?;
    }
    let n = x.len().max(1) as f64;
    let norm_q = lp_norm(x, q).as_f64();
    let norm_p = lp_norm(x, p).as_f64();
    let scaled_norm_q = n.powf(p.reciprocal() - q.reciprocal()) * norm_q;
    let le = |a: f64, b: f64| a <= b + SANDWICH_RTOL * a.abs().max(b.abs());
    Ok(Sandwich {
        norm_q,
        norm_p,
        scaled_norm_q,
        holds: le(norm_q, norm_p) && le(norm_p, scaled_norm_q),
    })
}
