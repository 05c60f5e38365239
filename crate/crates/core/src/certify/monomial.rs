//! Multivariate polynomial expansion and coefficient-matrix ranks.
//!
//! A family of polynomials is linearly independent exactly when the matrix of
//! their coefficient vectors (over a common monomial index) has full row rank.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use super::span::binomial;
use crate::error::{invalid, Error, Result};
use crate::linalg;
use crate::scalar::Scalar;
use crate::space::Space;

/// Column cap for the dense monomial index.
pub const MAX_MONOMIALS: usize = 100_000;
/// Largest `a + b` accepted by the even-`p` independence check.
pub const THM4_MAX_VARS: usize = 6;
/// Largest `p` accepted by the even-`p` independence check.
pub const THM4_MAX_P: u32 = 8;
/// Largest `a + b` accepted by the `ℓ_∞` independence check.
pub const THM3_MAX_VARS: usize = 12;

/// Sparse polynomial in a fixed number of variables, keyed by exponent vector.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly<C> {
    vars: usize,
    terms: BTreeMap<Vec<u32>, C>,
}

impl<C> MultiPoly<C>
where
    C: Copy + Zero + One + PartialEq + Add<Output = C> + Sub<Output = C> + Mul<Output = C>,
{
    pub fn zero(vars: usize) -> Self {
        MultiPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: usize, c: C) -> Self {
        Self::monomial(vars, vec![0; vars], c)
    }

    /// `c · x^e`.
    pub fn monomial(vars: usize, e: Vec<u32>, c: C) -> Self {
        assert_eq!(e.len(), vars, "exponent vector length");
        let mut p = Self::zero(vars);
        p.add_term(e, c);
        p
    }

    /// `x_i`.
    pub fn variable(vars: usize, i: usize) -> Self {
        let mut e = vec![0; vars];
        e[i] = 1;
        Self::monomial(vars, e, C::one())
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, C> {
        &self.terms
    }

    fn add_term(&mut self, e: Vec<u32>, c: C) {
        if c == C::zero() {
            return;
        }
        let v = self.terms.get(&e).copied().unwrap_or(C::zero()) + c;
        if v == C::zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), C::zero() - c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.vars);
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(self.vars, C::one()), |acc, _| acc.mul(self))
    }

    /// `Σ_{i ∈ range} (x_i − c_i)²` with `c` indexed from `range.start`.
    pub fn shifted_square_norm(vars: usize, range: std::ops::Range<usize>, center: &[C]) -> Self {
        let mut out = Self::zero(vars);
        for (k, i) in range.enumerate() {
            let lin = Self::variable(vars, i).sub(&Self::constant(vars, center[k]));
            out = out.add(&lin.mul(&lin));
        }
        out
    }
}

/// Graded-lex ordering of every monomial occurring in a family.
struct MonomialIndex {
    columns: BTreeMap<Vec<u32>, usize>,
}

impl MonomialIndex {
    fn build<C>(family: &[MultiPoly<C>]) -> Result<Self> {
        let mut all: BTreeSet<(u32, Vec<u32>)> = BTreeSet::new();
        for f in family {
            for e in f.terms.keys() {
                all.insert((e.iter().sum(), e.clone()));
                if all.len() > MAX_MONOMIALS {
                    return Err(Error::ResourceLimit(format!("more than {MAX_MONOMIALS} monomials")));
                }
            }
        }
        let columns = all.into_iter().enumerate().map(|(i, (_, e))| (e, i)).collect();
        Ok(MonomialIndex { columns })
    }

    fn rows<C: Copy + Zero>(&self, family: &[MultiPoly<C>]) -> Vec<Vec<C>> {
        family
            .iter()
            .map(|f| {
                let mut row = vec![C::zero(); self.columns.len()];
                for (e, &c) in &f.terms {
                    row[self.columns[e]] = c;
                }
                row
            })
            .collect()
    }
}

fn numerical_family_rank<T: Scalar>(family: &[MultiPoly<T>], tol: f64) -> Result<usize> {
    let index = MonomialIndex::build(family)?;
    let rows: Vec<Vec<f64>> = index
        .rows(family)
        .into_iter()
        .map(|r| r.into_iter().map(|c| c.as_f64()).collect())
        .collect();
    Ok(linalg::row_rank(&rows, tol))
}

/// Exponent vectors in `vars` variables with total degree exactly `deg`.
fn compositions(vars: usize, deg: u32) -> Vec<Vec<u32>> {
    if vars == 0 {
        return if deg == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=deg).rev() {
        for mut rest in compositions(vars - 1, deg - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Monomials `x̃^g` placed at `offset` in `vars` variables, `0 < |g| < h`.
fn block_monomials<C>(vars: usize, offset: usize, dim: usize, h: u32) -> Vec<MultiPoly<C>>
where
    C: Copy + Zero + One + PartialEq + Add<Output = C> + Sub<Output = C> + Mul<Output = C>,
{
    (1..h)
        .flat_map(|deg| compositions(dim, deg))
        .map(|g| {
            let mut e = vec![0; vars];
            e[offset..offset + dim].copy_from_slice(&g);
            MultiPoly::monomial(vars, e, C::one())
        })
        .collect()
}

/// Dimension of the span of `{x^g ‖x‖^{2ε} : ε + |g| ≤ p/2}` in `a` variables,
/// computed as an exact rank of the integer coefficient matrix.
pub fn enumerated_monomial_span(a: usize, p: u32) -> Result<u64> {
    if a == 0 || p == 0 || p % 2 == 1 {
        return Err(invalid("need a >= 1 and a positive even p"));
    }
    let h = p / 2;
    let norm_sq = (0..a).fold(MultiPoly::<i128>::zero(a), |acc, i| {
        let x = MultiPoly::variable(a, i);
        acc.add(&x.mul(&x))
    });
    let mut family = Vec::new();
    for eps in 0..=h {
        let radial = norm_sq.pow(eps);
        for deg in 0..=h - eps {
            for g in compositions(a, deg) {
                family.push(MultiPoly::monomial(a, g, 1i128).mul(&radial));
            }
        }
    }
    let index = MonomialIndex::build(&family)?;
    Ok(linalg::rank_mod_prime(&index.rows(&family)) as u64)
}

fn two_block_dims(space: &Space) -> Result<(usize, usize)> {
    match space.blocks() {
        &[a, b] => Ok((a, b)),
        _ => Err(invalid("a two-block space is required")),
    }
}

fn check_points<T: Scalar>(space: &Space, points: &[Vec<T>]) -> Result<()> {
    for p in points {
        if p.len() != space.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: space.ambient_dim(), got: p.len() });
        }
    }
    Ok(())
}

/// `m + (C(a+p/2−1, a) − 1) + (C(b+p/2−1, b) − 1) + 1`: the size of the
/// augmented even-`p` family.
pub fn thm4_expected_rank(m: usize, a: usize, b: usize, p: u32) -> usize {
    let h = (p / 2) as u64;
    let aug = |d: usize| binomial(d as u64 + h - 1, d as u64).unwrap_or(u64::MAX) as usize - 1;
    m + aug(a) + aug(b) + 1
}

/// `m + a + b + 2`: the size of the augmented `ℓ_∞` family.
pub fn thm3_expected_rank(m: usize, a: usize, b: usize) -> usize {
    m + a + b + 2
}

/// Rank of the coefficient matrix of
/// `{f_u} ∪ {x̃_1^g : 0 < |g| < p/2} ∪ {x̃_2^g : 0 < |g| < p/2} ∪ {1}` with
/// `f_u(x) = 1 − ‖x̃_1 − ũ_1‖^p − ‖x̃_2 − ũ_2‖^p`.
pub fn independence_rank_thm4<T: Scalar>(space: &Space, points: &[Vec<T>], p: u32, tol: f64) -> Result<usize> {
    let (a, b) = two_block_dims(space)?;
    if p == 0 || p % 2 == 1 {
        return Err(invalid(format!("p must be a positive even integer, got {p}")));
    }
    if a + b > THM4_MAX_VARS || p > THM4_MAX_P {
        return Err(Error::ResourceLimit(format!(
            "expansion needs a + b <= {THM4_MAX_VARS} and p <= {THM4_MAX_P}"
        )));
    }
    check_points(space, points)?;
    let vars = a + b;
    let h = p / 2;
    let mut family: Vec<MultiPoly<T>> = points
        .iter()
        .map(|u| {
            let q1 = MultiPoly::shifted_square_norm(vars, 0..a, &u[..a]).pow(h);
            let q2 = MultiPoly::shifted_square_norm(vars, a..vars, &u[a..]).pow(h);
            MultiPoly::constant(vars, T::one()).sub(&q1).sub(&q2)
        })
        .collect();
    family.extend(block_monomials(vars, 0, a, h));
    family.extend(block_monomials(vars, a, b, h));
    family.push(MultiPoly::constant(vars, T::one()));
    numerical_family_rank(&family, tol)
}

/// Rank of the coefficient matrix of `{f_u} ∪ {1} ∪ {x_k} ∪ {‖x̃_1‖²}` with
/// `f_u(x) = (1 − ‖x̃_1 − ũ_1‖²)(1 − ‖x̃_2 − ũ_2‖²)`.
pub fn independence_rank_thm3<T: Scalar>(space: &Space, points: &[Vec<T>], tol: f64) -> Result<usize> {
    let (a, b) = two_block_dims(space)?;
    if a + b > THM3_MAX_VARS {
        return Err(Error::ResourceLimit(format!("expansion needs a + b <= {THM3_MAX_VARS}")));
    }
    check_points(space, points)?;
    let vars = a + b;
    let one = MultiPoly::constant(vars, T::one());
    let mut family: Vec<MultiPoly<T>> = points
        .iter()
        .map(|u| {
            let f1 = one.sub(&MultiPoly::shifted_square_norm(vars, 0..a, &u[..a]));
            let f2 = one.sub(&MultiPoly::shifted_square_norm(vars, a..vars, &u[a..]));
            f1.mul(&f2)
        })
        .collect();
    family.push(one.clone());
    family.extend((0..vars).map(|k| MultiPoly::variable(vars, k)));
    family.push(MultiPoly::shifted_square_norm(vars, 0..a, &vec![T::zero(); a]));
    numerical_family_rank(&family, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::span::block_monomial_count;
    use crate::space::Exponent;

    #[test]
    fn poly_arithmetic() {
        let x = MultiPoly::<i128>::variable(2, 0);
        let y = MultiPoly::<i128>::variable(2, 1);
        let s = x.add(&y).pow(2);
        assert_eq!(s.terms().len(), 3);
        assert_eq!(s.terms()[&vec![1, 1]], 2);
        assert!(s.sub(&s).terms().is_empty());
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(3, 2).len(), 6);
        assert_eq!(compositions(1, 4), vec![vec![4]]);
    }

    #[test]
    fn enumerated_span_matches_count() {
        for a in 1..=5 {
            for p in [2, 4, 6, 8] {
                assert_eq!(enumerated_monomial_span(a, p).unwrap(), block_monomial_count(a, p).unwrap(), "a={a} p={p}");
            }
        }
    }

    #[test]
    fn thm4_independence_examples() {
        let space = Space::new(Exponent::Finite(4.0), vec![1, 1]).unwrap();
        let none: Vec<Vec<f64>> = vec![];
        assert_eq!(independence_rank_thm4(&space, &none, 4, 1e-9).unwrap(), 3);
        assert_eq!(thm4_expected_rank(0, 1, 1, 4), 3);

        let t = 0.5f64.powf(0.25);
        let two = vec![vec![0.0, 0.0], vec![t, t]];
        assert_eq!(independence_rank_thm4(&space, &two, 4, 1e-9).unwrap(), 5);

        let dup = vec![vec![0.0, 0.0], vec![t, t], vec![t, t]];
        assert!(independence_rank_thm4(&space, &dup, 4, 1e-9).unwrap() < thm4_expected_rank(3, 1, 1, 4));

        let big = Space::new(Exponent::Finite(4.0), vec![4, 3]).unwrap();
        assert!(matches!(independence_rank_thm4(&big, &none, 4, 1e-9), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn thm3_independence_counts_family() {
        let space = Space::new(Exponent::Infinity, vec![1, 1]).unwrap();
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        assert_eq!(independence_rank_thm3(&space, &pts, 1e-9).unwrap(), thm3_expected_rank(4, 1, 1));
    }
}
