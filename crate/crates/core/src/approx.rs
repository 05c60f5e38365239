//! Even polynomial approximation of `|x|^p` on `[-1, 1]`.
//!
//! The approximant is built in the variable `t = x²`: the best uniform
//! approximation of `t^{p/2}` on `[0, 1]` by a polynomial of degree `⌊d/2⌋` is
//! computed with the Remez exchange algorithm (in the shifted Chebyshev basis),
//! converted to monomials and mapped back to an even polynomial in `x`. The
//! constant term is then dropped so that `P(0) = 0`.
//!
//! Every approximant comes with an [`ApproxCertificate`] comparing the measured
//! sup-error against the Jackson-type bound `B(p)/d^p`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::linalg;
use crate::scalar::Scalar;

/// Points in the Chebyshev-spaced grid used for error measurement.
pub const ERROR_GRID: usize = 4096;

const REMEZ_MAX_ITERS: usize = 50;
const REMEZ_LEVEL_RTOL: f64 = 1e-10;
const REFINED_PEAKS: usize = 8;

/// Largest degree actually constructed. Beyond it the monomial coefficients of
/// the approximant outgrow double precision; requests for a larger `d` reuse
/// this degree, which still satisfies `deg P ≤ d`.
pub const MAX_CONSTRUCTED_DEGREE: usize = 40;

/// `P(x) = Σ_{j≥1} c_j x^{2j}`: even, with no constant term.
#[derive(Debug, Clone, PartialEq)]
pub struct EvenPolynomial<T = f64> {
    degree: usize,
    even_coeffs: Vec<T>,
}

impl<T: Scalar> EvenPolynomial<T> {
    /// `even_coeffs[j-1]` is the coefficient of `x^{2j}`; at most `⌊degree/2⌋` of them.
    pub fn new(degree: usize, even_coeffs: Vec<T>) -> Result<Self> {
        if even_coeffs.len() > degree / 2 {
            return Err(invalid(format!(
                "{} even coefficients exceed degree {degree}",
                even_coeffs.len()
            )));
        }
        Ok(EvenPolynomial { degree, even_coeffs })
    }

    /// `x^{2j}`.
    pub fn even_power(j: usize) -> Self {
        let mut c = vec![T::zero(); j];
        if j > 0 {
            c[j - 1] = T::one();
        }
        EvenPolynomial { degree: 2 * j, even_coeffs: c }
    }

    /// Degree bound `d` (the actual degree may be lower).
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Degree of the highest nonzero term.
    pub fn actual_degree(&self) -> usize {
        self.even_coeffs.iter().rposition(|c| *c != T::zero()).map_or(0, |j| 2 * (j + 1))
    }

    pub fn even_coeffs(&self) -> &[T] {
        &self.even_coeffs
    }

    /// `P(x)`.
    pub fn eval(&self, x: T) -> T {
        self.eval_square(x * x)
    }

    /// `P(√s)`, i.e. `Σ c_j s^j`; lets callers evaluate `P(‖v‖)` from `‖v‖²`.
    pub fn eval_square(&self, s: T) -> T {
        let inner = self.even_coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * s + c);
        inner * s
    }
}

/// Outcome of an approximation: measured sup-error versus `B(p)/d^p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApproxCertificate {
    pub p: f64,
    pub d: usize,
    pub measured_error: f64,
    pub jackson_bound: f64,
    pub grid_size: usize,
}

impl ApproxCertificate {
    pub fn passes(&self) -> bool {
        self.measured_error <= self.jackson_bound
    }
}

/// `x(x−1)⋯(x−k+1)`; the empty product `1` when `k = 0`.
pub fn falling_factorial<T: Scalar>(x: T, k: usize) -> T {
    (0..k).fold(T::one(), |acc, i| acc * (x - T::from_usize_lossy(i)))
}

/// `B(p) = ⌈p⌉^p (1+π²/2)^{⌈p⌉} (p)_{⌈p⌉−1} / ⌈p⌉!`.
pub fn jackson_constant(p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(invalid(format!("B(p) needs a finite p >= 1, got {p}")));
    }
    let q = p.ceil();
    let k = q as usize;
    let factorial: f64 = (1..=k).map(|i| i as f64).product();
    Ok(q.powf(p) * (1.0 + PI * PI / 2.0).powi(k as i32) * falling_factorial(p, k - 1) / factorial)
}

/// `B(p)/d^p`.
pub fn jackson_bound(p: f64, d: usize) -> Result<f64> {
    Ok(jackson_constant(p)? / (d as f64).powf(p))
}

/// Builds an even `P` with `P(0) = 0` and degree at most `d` approximating
/// `|x|^p`, and certifies its measured sup-error against `B(p)/d^p`.
///
/// For even integer `p` the exact monomial `x^p` is returned.
pub fn approximate_abs_power<T: Scalar>(p: f64, d: usize) -> Result<(EvenPolynomial<T>, ApproxCertificate)> {
    let bound = jackson_bound(p, d)?;
    if (d as f64) < p.ceil() {
        return Err(invalid(format!("degree {d} is below ceil(p) = {}", p.ceil())));
    }
    let poly = if p.fract() == 0.0 && (p as usize).is_multiple_of(2) {
        let mut c = vec![T::zero(); d / 2];
        c[p as usize / 2 - 1] = T::one();
        EvenPolynomial { degree: d, even_coeffs: c }
    } else {
        let cheb = remez_power::<T>(p / 2.0, d.min(MAX_CONSTRUCTED_DEGREE) / 2);
        let mono = shifted_chebyshev_to_monomial(&cheb);
        EvenPolynomial { degree: d, even_coeffs: mono[1..].to_vec() }
    };
    let measured = approximation_error(&poly, p).as_f64();
    let cert = ApproxCertificate { p, d, measured_error: measured, jackson_bound: bound, grid_size: ERROR_GRID };
    if !cert.passes() {
        return Err(Error::CertificationFailure { measured, bound });
    }
    Ok((poly, cert))
}

/// `max_{x∈[0,1]} |P(x) − x^p|`, measured on a Chebyshev-spaced grid and
/// refined by golden-section search around the largest grid peaks. By
/// evenness this is also the sup over `[-1, 1]`.
pub fn approximation_error<T: Scalar>(poly: &EvenPolynomial<T>, p: f64) -> T {
    let err = |x: T| (poly.eval(x) - abs_power(x, p)).abs();
    let grid = chebyshev_grid::<T>(ERROR_GRID);
    let vals: Vec<T> = grid.iter().map(|&x| err(x)).collect();
    let mut peaks: Vec<usize> = (0..vals.len())
        .filter(|&j| {
            let left = j == 0 || vals[j] >= vals[j - 1];
            let right = j + 1 == vals.len() || vals[j] >= vals[j + 1];
            left && right
        })
        .collect();
    peaks.sort_by(|&a, &b| vals[b].partial_cmp(&vals[a]).unwrap_or(std::cmp::Ordering::Equal));
    peaks.truncate(REFINED_PEAKS);
    let mut best = vals.iter().fold(T::zero(), |m, &v| m.max(v));
    for j in peaks {
        let lo = grid[j.saturating_sub(1)];
        let hi = grid[(j + 1).min(grid.len() - 1)];
        let (_, v) = golden_max(&err, lo, hi);
        best = best.max(v);
    }
    best
}

/// `|x|^p`, by repeated multiplication of `x²` for even integer `p` so that
/// exact monomial approximants measure zero error.
fn abs_power<T: Scalar>(x: T, p: f64) -> T {
    if p.fract() == 0.0 && p <= 64.0 && (p as i32) % 2 == 0 {
        (x * x).powi(p as i32 / 2)
    } else {
        x.abs().powf(T::lit(p))
    }
}

/// Smallest integer `d` with `d^p > c·n·√m`, checked against `d^p < 2c·n·√m`.
pub fn choose_degree(p: f64, c: f64, n: usize, m: usize) -> Result<u64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(invalid(format!("degree selection needs a finite p >= 1, got {p}")));
    }
    if n == 0 || m == 0 || !(c > 0.0) {
        return Err(invalid("degree selection needs n, m >= 1 and c > 0"));
    }
    let target = c * n as f64 * (m as f64).sqrt();
    let pow = |d: u64| (d as f64).powf(p);
    let mut d = (target.powf(1.0 / p).floor() as u64).max(1);
    while d > 1 && pow(d - 1) > target {
        d -= 1;
    }
    while pow(d) <= target {
        d += 1;
    }
    if pow(d) < 2.0 * target {
        Ok(d)
    } else {
        Err(Error::InfeasibleDegree { lower: target, upper: 2.0 * target })
    }
}

/// `(2^{1/p} − 1)^{−p}`: the least `c` for which [`choose_degree`] always succeeds.
pub fn degree_threshold(p: f64) -> f64 {
    (2f64.powf(1.0 / p) - 1.0).powf(-p)
}

/// `N + 1` Chebyshev-spaced points on `[0, 1]`, endpoints included.
fn chebyshev_grid<T: Scalar>(n: usize) -> Vec<T> {
    (0..=n)
        .map(|j| T::lit((1.0 - (PI * j as f64 / n as f64).cos()) / 2.0))
        .collect()
}

/// Maximizes `g` on `[lo, hi]`, endpoints included.
fn golden_max<T: Scalar>(g: &impl Fn(T) -> T, mut lo: T, mut hi: T) -> (T, T) {
    let (glo, ghi) = (g(lo), g(hi));
    let mut best = if glo >= ghi { (lo, glo) } else { (hi, ghi) };
    let r = T::lit((5f64.sqrt() - 1.0) / 2.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (g(x1), g(x2));
    for _ in 0..80 {
        if hi - lo <= T::epsilon() * (T::one() + hi.abs()) {
            break;
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = g(x2);
        }
    }
    for (x, v) in [(x1, f1), (x2, f2)] {
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// `T_k(2t − 1)` for `k = 0..=n`.
fn shifted_chebyshev<T: Scalar>(t: T, n: usize) -> Vec<T> {
    let u = T::lit(2.0) * t - T::one();
    let mut out = Vec::with_capacity(n + 1);
    out.push(T::one());
    if n >= 1 {
        out.push(u);
    }
    for k in 2..=n {
        let next = T::lit(2.0) * u * out[k - 1] - out[k - 2];
        out.push(next);
    }
    out
}

fn eval_shifted_chebyshev<T: Scalar>(coeffs: &[T], t: T) -> T {
    // Clenshaw recurrence.
    let u = T::lit(2.0) * t - T::one();
    let (mut b1, mut b2) = (T::zero(), T::zero());
    for &c in coeffs.iter().skip(1).rev() {
        let b0 = T::lit(2.0) * u * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    coeffs.first().copied().unwrap_or(T::zero()) + u * b1 - b2
}

/// Monomial coefficients (in `t`, ascending) of `Σ c_k T_k(2t − 1)`.
fn shifted_chebyshev_to_monomial<T: Scalar>(coeffs: &[T]) -> Vec<T> {
    let n = coeffs.len();
    let mut out = vec![T::zero(); n.max(1)];
    let mut prev: Vec<T> = vec![T::one()];
    let mut cur: Vec<T> = vec![-T::one(), T::lit(2.0)];
    for (k, &c) in coeffs.iter().enumerate() {
        let basis = if k == 0 { &prev } else { &cur };
        for (o, &b) in out.iter_mut().zip(basis.iter()) {
            *o += c * b;
        }
        if k >= 1 {
            // T_{k+1} = 2(2t − 1) T_k − T_{k−1}
            let mut next = vec![T::zero(); cur.len() + 1];
            for (i, &v) in cur.iter().enumerate() {
                next[i] -= T::lit(2.0) * v;
                next[i + 1] += T::lit(4.0) * v;
            }
            for (i, &v) in prev.iter().enumerate() {
                next[i] -= v;
            }
            prev = std::mem::replace(&mut cur, next);
        }
    }
    out
}

/// Best uniform approximation of `t^α` on `[0, 1]` by a degree-`n` polynomial,
/// returned as shifted Chebyshev coefficients.
///
/// Reference points and extrema are tracked in the variable `x = √t`, where the
/// error curve is well resolved near `t = 0`.
fn remez_power<T: Scalar>(alpha: f64, n: usize) -> Vec<T> {
    let a = T::lit(2.0 * alpha);
    let target = |x: T| x.powf(a);
    let mut reference: Vec<T> = (0..n + 2)
        .map(|i| T::lit(((1.0 - (PI * i as f64 / (n + 1) as f64).cos()) / 2.0).sqrt()))
        .collect();
    let grid = chebyshev_grid::<T>(ERROR_GRID * 2);

    let mut best: Option<(Vec<T>, T)> = None;
    for _ in 0..REMEZ_MAX_ITERS {
        let rows: Vec<Vec<T>> = reference
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let mut row = shifted_chebyshev(x * x, n);
                row.push(if i % 2 == 0 { T::one() } else { -T::one() });
                row
            })
            .collect();
        let rhs: Vec<T> = reference.iter().map(|&x| target(x)).collect();
        let Some(mut sol) = linalg::solve(rows, rhs) else { break };
        sol.pop();
        let coeffs = sol;
        let err = |x: T| target(x) - eval_shifted_chebyshev(&coeffs, x * x);

        let extrema = alternating_extrema(&err, &grid);
        let max_err = extrema.iter().fold(T::zero(), |m, &(_, e)| m.max(e.abs()));
        if best.as_ref().is_none_or(|(_, e)| max_err < *e) {
            best = Some((coeffs.clone(), max_err));
        }
        let Some(next) = select_reference(&extrema, n + 2) else { break };
        let lo = next.iter().fold(T::infinity(), |m, &(_, e)| m.min(e.abs()));
        let hi = next.iter().fold(T::zero(), |m, &(_, e)| m.max(e.abs()));
        reference = next.into_iter().map(|(x, _)| x).collect();
        if hi - lo <= T::lit(REMEZ_LEVEL_RTOL) * hi {
            break;
        }
    }
    best.map(|(c, _)| c).unwrap_or_else(|| vec![T::zero(); n + 1])
}

/// One extremum of `err` per maximal run of constant sign on `grid`,
/// refined by golden-section search.
fn alternating_extrema<T: Scalar>(err: &impl Fn(T) -> T, grid: &[T]) -> Vec<(T, T)> {
    let vals: Vec<T> = grid.iter().map(|&x| err(x)).collect();
    let mut runs: Vec<usize> = Vec::new();
    let mut sign = vals[0] >= T::zero();
    let mut arg = 0usize;
    for j in 1..vals.len() {
        let s = if vals[j] == T::zero() { sign } else { vals[j] > T::zero() };
        if s != sign {
            runs.push(arg);
            sign = s;
            arg = j;
        } else if vals[j].abs() > vals[arg].abs() {
            arg = j;
        }
    }
    runs.push(arg);

    runs.into_iter()
        .map(|j| {
            let lo = grid[j.saturating_sub(1)];
            let hi = grid[(j + 1).min(grid.len() - 1)];
            let s = if vals[j] >= T::zero() { T::one() } else { -T::one() };
            let (x, _) = golden_max(&|x| s * err(x), lo, hi);
            let e = err(x);
            if e.abs() >= vals[j].abs() {
                (x, e)
            } else {
                (grid[j], vals[j])
            }
        })
        .collect()
}

/// Chooses `count` consecutive alternating extrema containing the global
/// maximum, maximizing the smallest level among them.
fn select_reference<T: Scalar>(extrema: &[(T, T)], count: usize) -> Option<Vec<(T, T)>> {
    if extrema.len() < count {
        return None;
    }
    let global = (0..extrema.len())
        .max_by(|&a, &b| {
            extrema[a].1.abs().partial_cmp(&extrema[b].1.abs()).unwrap_or(std::cmp::Ordering::Equal)
        })
        .expect("nonempty");
    let first = global.saturating_sub(count - 1);
    let last = global.min(extrema.len() - count);
    let start = (first..=last)
        .max_by(|&a, &b| {
            let min_level = |s: usize| {
                extrema[s..s + count].iter().fold(T::infinity(), |m, &(_, e)| m.min(e.abs()))
            };
            min_level(a).partial_cmp(&min_level(b)).unwrap_or(std::cmp::Ordering::Equal)
        })
        .expect("window exists");
    Some(extrema[start..start + count].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn jackson_constant_values() {
        let k = 1.0 + PI * PI / 2.0;
        assert!((jackson_constant(1.0).unwrap() - k).abs() < 1e-12);
        assert!((jackson_constant(1.0).unwrap() - 5.93480).abs() < 1e-5);
        let b2 = jackson_constant(2.0).unwrap();
        assert!((b2 - 4.0 * k * k * 2.0 / 2.0).abs() < 1e-10);
        assert!((b2 - 140.889).abs() < 5e-3);
        let b15 = jackson_constant(1.5).unwrap();
        assert!((b15 - 2f64.powf(1.5) * k * k * 1.5 / 2.0).abs() < 1e-10);
        assert!(jackson_constant(0.5).is_err());
    }

    #[test]
    fn falling_factorial_values() {
        assert_eq!(falling_factorial(5.0, 3), 60.0);
        assert_eq!(falling_factorial(7.3, 0), 1.0);
        assert!((falling_factorial(2.5f64, 2) - 3.75).abs() < 1e-15);
    }

    #[test]
    fn even_integer_powers_are_exact() {
        let (p2, c2) = approximate_abs_power::<f64>(2.0, 2).unwrap();
        assert_eq!(p2.even_coeffs(), &[1.0]);
        assert_eq!(c2.measured_error, 0.0);
        let (p4, c4) = approximate_abs_power::<f64>(4.0, 4).unwrap();
        assert_eq!(p4.even_coeffs(), &[0.0, 1.0]);
        assert_eq!(c4.measured_error, 0.0);
        let (_, c6) = approximate_abs_power::<f64>(6.0, 9).unwrap();
        assert_eq!(c6.measured_error, 0.0);
    }

    #[test]
    fn abs_value_degree_ten() {
        let (poly, cert) = approximate_abs_power::<f64>(1.0, 10).unwrap();
        assert!(cert.measured_error <= 0.5935);
        assert!(cert.measured_error <= cert.jackson_bound);
        assert_eq!(poly.eval(0.0), 0.0);
        // Twice the best-approximation error of |x| at degree 10 is about 0.05.
        assert!(cert.measured_error < 0.06, "{}", cert.measured_error);
        let again = approximation_error(&poly, 1.0);
        assert_eq!(again, cert.measured_error);
    }

    #[test]
    fn approximation_error_examples() {
        let sq = EvenPolynomial::<f64>::even_power(1);
        assert_eq!(approximation_error(&sq, 2.0), 0.0);
        let zero = EvenPolynomial::<f64>::new(2, vec![]).unwrap();
        assert_eq!(approximation_error(&zero, 1.0), 1.0);
    }

    #[test]
    fn rejects_low_degree() {
        assert!(matches!(approximate_abs_power::<f64>(2.5, 2), Err(Error::InvalidInput(_))));
        assert!(approximate_abs_power::<f64>(0.5, 4).is_err());
    }

    #[test]
    fn remez_equioscillates_for_sqrt() {
        // Best linear approximation of √t on [0,1] is t + 1/8, error 1/8.
        let c = remez_power::<f64>(0.5, 1);
        let m = shifted_chebyshev_to_monomial(&c);
        assert!((m[0] - 0.125).abs() < 1e-9, "{m:?}");
        assert!((m[1] - 1.0).abs() < 1e-9, "{m:?}");
    }

    #[test]
    fn chebyshev_conversion_matches_evaluation() {
        let c = [0.3, -1.2, 0.7, 0.05, 2.0];
        let m = shifted_chebyshev_to_monomial(&c);
        for t in [0.0f64, 0.1, 0.5, 0.77, 1.0] {
            let direct = eval_shifted_chebyshev(&c, t);
            let mono: f64 = m.iter().enumerate().map(|(k, v)| v * t.powi(k as i32)).sum();
            assert!((direct - mono).abs() < 1e-12);
        }
    }

    #[test]
    fn choose_degree_examples() {
        assert_eq!(choose_degree(1.0, 6.0, 2, 9).unwrap(), 37);
        assert_eq!(choose_degree(2.0, 6.0, 3, 100).unwrap(), 14);
        assert_eq!(choose_degree(2.0, 6.0, 1, 1).unwrap(), 3);
    }

    #[test]
    fn choose_degree_infeasible() {
        // c far below the threshold for p = 10: the window (c, 2c) holds no d^10.
        assert!(matches!(choose_degree(10.0, 1.5, 1, 1), Err(Error::InfeasibleDegree { .. })));
    }

    #[test]
    fn large_degree_reuses_stable_degree() {
        let (poly, cert) = approximate_abs_power::<f64>(1.0, 120).unwrap();
        assert_eq!(poly.degree(), 120);
        assert!(poly.actual_degree() <= MAX_CONSTRUCTED_DEGREE);
        assert!(cert.passes());
    }

    #[test]
    fn approximation_in_f32() {
        let (poly, cert) = approximate_abs_power::<f32>(1.5, 8).unwrap();
        assert!(cert.passes());
        assert_eq!(poly.eval(0.0f32), 0.0);
    }

    #[test]
    fn error_decreases_with_degree() {
        for p in [1.0f64, 1.3, 2.5, 4.7] {
            let mut prev = f64::INFINITY;
            for d in (p.ceil() as usize..=30).step_by(2) {
                let (_, c) = approximate_abs_power::<f64>(p, d).unwrap();
                assert!(c.measured_error <= prev * (1.0 + 1e-9) + 1e-13, "p={p} d={d}: {} > {prev}", c.measured_error);
                prev = c.measured_error;
            }
        }
    }

    proptest! {
        #[test]
        fn chosen_degree_in_window(p in 1.0f64..8.0, n in 1usize..500, m in 1usize..100_000, extra in 0.0f64..50.0) {
            let c = degree_threshold(p) + 1e-6 + extra;
            let d = choose_degree(p, c, n, m).unwrap() as f64;
            let target = c * n as f64 * (m as f64).sqrt();
            prop_assert!(d.powf(p) > target && d.powf(p) < 2.0 * target);
        }
    }
}
