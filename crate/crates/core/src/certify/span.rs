//! Span-dimension upper bounds on certificate-matrix ranks.

use crate::error::{invalid, Error, Result};

/// Parameters of a span count, one variant per pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpanParams {
    /// `(k−1)n + 2`.
    Thm1 { n: usize, k: usize },
    /// `(dn)^k`, or `((d−1)n+2)^k` when that is larger (only at `n = 1`).
    Thm2 { n: usize, d: usize, k: usize },
    /// `(a+2)(b+2)`.
    Thm3 { a: usize, b: usize },
    /// Monomials of both block expansions, the shared constant counted once.
    Thm4 { a: usize, b: usize, p: u32 },
    /// Monomials of one block expansion: `C(a+p/2, a) + C(a+p/2−1, a)`.
    Thm4Monomials { a: usize, p: u32 },
    /// `2 + Σ C(a_k+d−1, a_k) − n`.
    Thm5 { blocks: Vec<usize>, d: usize },
}

fn overflow() -> Error {
    Error::ResourceLimit("span dimension exceeds u64".into())
}

/// `C(n, k)` in `u64`, erroring on overflow.
pub fn binomial(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return Err(overflow());
        }
    }
    Ok(acc as u64)
}

fn even_half(p: u32) -> Result<u64> {
    if p == 0 || p % 2 == 1 {
        return Err(invalid(format!("p must be a positive even integer, got {p}")));
    }
    Ok(p as u64 / 2)
}

/// `C(a+p/2, a) + C(a+p/2−1, a)`.
pub fn block_monomial_count(a: usize, p: u32) -> Result<u64> {
    let h = even_half(p)?;
    let a = a as u64;
    binomial(a + h, a)?
        .checked_add(binomial(a + h - 1, a)?)
        .ok_or_else(overflow)
}

/// `C(a+p/2, a) + Σ_{c=1}^{p/2} C(a+p/2−c−1, a−1)`: monomials of degree at
/// most `p/2`, plus for each higher degree `p/2+c` the products
/// `x^g ‖x‖^{2c}` with `|g| = p/2−c`.
pub fn telescoped_monomial_count(a: usize, p: u32) -> Result<u64> {
    if a == 0 {
        return Err(invalid("block dimension must be positive"));
    }
    let h = even_half(p)?;
    let a = a as u64;
    let mut total = binomial(a + h, a)?;
    for c in 1..=h {
        total = total.checked_add(binomial(a + h - c - 1, a - 1)?).ok_or_else(overflow)?;
    }
    Ok(total)
}

/// Upper bound on the rank of the corresponding certificate matrix.
pub fn span_dim(params: &SpanParams) -> Result<u64> {
    let v = |x: usize| x as u64;
    match params {
        SpanParams::Thm1 { n, k } => {
            if *k < 2 || k % 2 == 1 {
                return Err(invalid(format!("k must be an even integer >= 2, got {k}")));
            }
            Ok(v(k - 1) * v(*n) + 2)
        }
        SpanParams::Thm2 { n, d, k } => {
            if *d == 0 || *k == 0 || *n == 0 {
                return Err(invalid("n, d and k must be positive"));
            }
            let per_factor = (v(*d) * v(*n)).max(v(d - 1) * v(*n) + 2);
            per_factor.checked_pow(*k as u32).ok_or_else(overflow)
        }
        SpanParams::Thm3 { a, b } => Ok(v(a + 2) * v(b + 2)),
        SpanParams::Thm4 { a, b, p } => Ok(block_monomial_count(*a, *p)? + block_monomial_count(*b, *p)? - 1),
        SpanParams::Thm4Monomials { a, p } => block_monomial_count(*a, *p),
        SpanParams::Thm5 { blocks, d } => {
            if *d == 0 || blocks.is_empty() {
                return Err(invalid("d and the block list must be nonempty"));
            }
            let mut total: u64 = 2;
            for &a in blocks {
                total = total.checked_add(binomial(v(a + d - 1), v(a))? - 1).ok_or_else(overflow)?;
            }
            Ok(total)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn span_examples() {
        assert_eq!(span_dim(&SpanParams::Thm1 { n: 3, k: 4 }).unwrap(), 11);
        assert_eq!(span_dim(&SpanParams::Thm2 { n: 2, d: 3, k: 2 }).unwrap(), 36);
        assert_eq!(span_dim(&SpanParams::Thm5 { blocks: vec![2, 2], d: 4 }).unwrap(), 20);
        assert_eq!(span_dim(&SpanParams::Thm4Monomials { a: 1, p: 4 }).unwrap(), 5);
        assert_eq!(span_dim(&SpanParams::Thm3 { a: 2, b: 1 }).unwrap(), 12);
        assert!(span_dim(&SpanParams::Thm1 { n: 3, k: 3 }).is_err());
    }

    #[test]
    fn thm2_one_dimensional_count() {
        // One coordinate: {1, x, …, x^{d−1}, x^d} has d+1 members.
        assert_eq!(span_dim(&SpanParams::Thm2 { n: 1, d: 2, k: 1 }).unwrap(), 3);
        for n in 2..6 {
            for d in 1..6 {
                let want = ((d * n) as u64).pow(2);
                assert_eq!(span_dim(&SpanParams::Thm2 { n, d, k: 2 }).unwrap(), want);
            }
        }
    }

    #[test]
    fn telescoped_count_matches_closed_form() {
        for a in 1..=5 {
            for p in [2, 4, 6, 8] {
                assert_eq!(telescoped_monomial_count(a, p).unwrap(), block_monomial_count(a, p).unwrap());
            }
        }
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2).unwrap(), 10);
        assert_eq!(binomial(2, 5).unwrap(), 0);
        assert_eq!(binomial(60, 30).unwrap(), 118264581564861424);
        assert!(binomial(200, 100).is_err());
    }
}
