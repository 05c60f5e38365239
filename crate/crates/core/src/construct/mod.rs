//! Explicit unit equilateral configurations, distance profiles and a
//! numerical witness search.

mod search;

pub use search::{search_equilateral, SearchConfig, SearchResult};

use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;
use crate::space::{Exponent, PointSet, Space};

/// Default clustering tolerance for [`distance_profile`].
pub const PROFILE_TOL: f64 = 1e-7;
/// Tolerance used to accept inputs of [`product_construction`] as unit equilateral.
pub const PRODUCT_INPUT_TOL: f64 = 1e-9;

/// `{±e_i/2}` in `ℓ_1^n`: `2n` points at pairwise distance 1.
pub fn cross_polytope<T: Scalar>(n: usize) -> Result<PointSet<T>> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    let half = T::lit(0.5);
    let mut points = Vec::with_capacity(2 * n);
    for i in 0..n {
        for s in [half, -half] {
            let mut x = vec![T::zero(); n];
            x[i] = s;
            points.push(x);
        }
    }
    PointSet::new(Space::lp(n, Exponent::Finite(1.0))?, points)
}

/// `λ > 0` with `|1−λ|^p + (n−1)λ^p = 2`, so that `λ·(1,…,1)` is at
/// `ℓ_p` distance `2^{1/p}` from every `e_i`.
///
/// The root is bracketed in `(0, 1]` when possible and in `(1, 2]` otherwise,
/// then bisected until the bracket cannot shrink further.
pub fn simplex_lambda(n: usize, p: f64) -> Result<f64> {
    if n < 2 {
        return Err(invalid("n must be at least 2"));
    }
    if !(p > 1.0 && p.is_finite()) {
        return Err(invalid(format!("need 1 < p < inf, got {p}")));
    }
    let g = |l: f64| (1.0 - l).abs().powf(p) + (n as f64 - 1.0) * l.powf(p) - 2.0;
    let (mut lo, mut hi) = if g(1.0) >= 0.0 { (0.0, 1.0) } else { (1.0, 2.0) };
    if g(hi) == 0.0 {
        return Ok(hi);
    }
    if !(g(lo) < 0.0 && g(hi) > 0.0) {
        return Err(Error::Numerical(format!("no sign change bracketing lambda for n={n}, p={p}")));
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = g(mid);
        if v == 0.0 {
            return Ok(mid);
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if g(lo).abs() <= g(hi).abs() { lo } else { hi })
}

/// `{e_1, …, e_n, λ(1,…,1)}` scaled by `2^{−1/p}`: `n+1` points in `ℓ_p^n` at
/// pairwise distance 1.
pub fn lp_simplex<T: Scalar>(n: usize, p: f64) -> Result<PointSet<T>> {
    let lambda = simplex_lambda(n, p)?;
    let scale = 2f64.powf(-1.0 / p);
    let mut points: Vec<Vec<T>> = (0..n)
        .map(|i| {
            let mut x = vec![T::zero(); n];
            x[i] = T::lit(scale);
            x
        })
        .collect();
    points.push(vec![T::lit(lambda * scale); n]);
    PointSet::new(Space::lp(n, Exponent::Finite(p))?, points)
}

/// Regular unit simplex in `E^n`: each new vertex sits above the centroid of
/// the previous ones at the height that makes its edges 1.
pub fn euclidean_simplex<T: Scalar>(n: usize) -> Result<PointSet<T>> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    let mut points = vec![vec![0.0f64; n]];
    let mut centroid = vec![0.0f64; n];
    let mut radius_sq = 0.0f64;
    for k in 0..n {
        let mut v = centroid.clone();
        v[k] = (1.0 - radius_sq).sqrt();
        points.push(v);
        let cnt = points.len() as f64;
        for (c, x) in centroid.iter_mut().zip(&points[k + 1]) {
            *c += (x - *c) / cnt;
        }
        radius_sq = points[0].iter().zip(&centroid).map(|(a, b)| (a - b) * (a - b)).sum();
    }
    let points = points.into_iter().map(|x| x.into_iter().map(T::lit).collect()).collect();
    PointSet::new(Space::euclidean(n)?, points)
}

fn check_unit_equilateral<T: Scalar>(s: &PointSet<T>) -> Result<()> {
    if !s.space().is_euclidean() {
        return Err(invalid(format!("factor must lie in a Euclidean space, got {}", s.space())));
    }
    if s.len() == 1 {
        return Ok(());
    }
    for (i, j, d) in s.pairwise_distances() {
        if (d.as_f64() - 1.0).abs() > PRODUCT_INPUT_TOL {
            return Err(invalid(format!("factor is not unit equilateral: d({i}, {j}) = {d}")));
        }
    }
    Ok(())
}

/// Cartesian product of unit equilateral Euclidean sets, placed in the
/// `ℓ_∞` sum of their spaces.
pub fn product_many<T: Scalar>(factors: &[PointSet<T>]) -> Result<PointSet<T>> {
    if factors.is_empty() {
        return Err(invalid("at least one factor is required"));
    }
    for f in factors {
        check_unit_equilateral(f)?;
    }
    let blocks = factors.iter().map(|f| f.space().ambient_dim()).collect();
    let mut points: Vec<Vec<T>> = vec![Vec::new()];
    for f in factors {
        points = points
            .iter()
            .flat_map(|prefix| {
                f.points().iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.extend_from_slice(x);
                    v
                })
            })
            .collect();
    }
    PointSet::new(Space::new(Exponent::Infinity, blocks)?, points)
}

/// `S × T` in `E^a ⊕_∞ E^b`.
pub fn product_construction<T: Scalar>(s: &PointSet<T>, t: &PointSet<T>) -> Result<PointSet<T>> {
    product_many(&[s.clone(), t.clone()])
}

/// Distinct pairwise distances, largest first.
///
/// Sorted distances are split wherever consecutive values differ by more than
/// `tol` (single linkage); each cluster is reported by its mean. A distance
/// below `tol` is a duplicate point and an error.
pub fn distance_profile<T: Scalar>(points: &PointSet<T>, tol: f64) -> Result<Vec<T>> {
    if points.len() < 2 {
        return Err(invalid("a distance profile needs at least two points"));
    }
    if !(tol > 0.0) {
        return Err(invalid("tolerance must be positive"));
    }
    let mut d = points.pairwise_distances();
    if let Some(&(i, j, _)) = d.iter().find(|(_, _, v)| v.as_f64() < tol) {
        return Err(Error::ZeroDistance(i, j));
    }
    d.sort_by(|a, b| b.2.partial_cmp(&a.2).unwrap_or(std::cmp::Ordering::Equal));
    let mut out = Vec::new();
    let (mut sum, mut count, mut prev) = (T::zero(), 0usize, d[0].2);
    for &(_, _, v) in &d {
        if (prev - v).as_f64() > tol {
            out.push(sum / T::from_usize_lossy(count));
            sum = T::zero();
            count = 0;
        }
        sum += v;
        count += 1;
        prev = v;
    }
    out.push(sum / T::from_usize_lossy(count));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assert_unit(s: &PointSet<f64>, tol: f64) {
        let prof = distance_profile(s, 1e-7).unwrap();
        assert_eq!(prof.len(), 1, "{prof:?}");
        for (_, _, d) in s.pairwise_distances() {
            assert!((d - 1.0).abs() <= tol, "{d}");
        }
    }

    #[test]
    fn cross_polytope_examples() {
        let c1 = cross_polytope::<f64>(1).unwrap();
        assert_eq!(c1.points(), &[vec![0.5], vec![-0.5]]);
        for n in [2, 3, 7, 20] {
            let c = cross_polytope::<f64>(n).unwrap();
            assert_eq!(c.len(), 2 * n);
            assert_unit(&c, 1e-12);
        }
        assert!(cross_polytope::<f64>(0).is_err());
    }

    #[test]
    fn lambda_analytic_roots() {
        assert!((simplex_lambda(2, 2.0).unwrap() - (1.0 + 3f64.sqrt()) / 2.0).abs() < 1e-12);
        assert_eq!(simplex_lambda(3, 2.0).unwrap(), 1.0);
        assert!((simplex_lambda(4, 2.0).unwrap() - (1.0 + 5f64.sqrt()) / 4.0).abs() < 1e-12);
        assert!(simplex_lambda(1, 2.0).is_err());
        assert!(simplex_lambda(3, 1.0).is_err());
    }

    #[test]
    fn lp_simplex_examples() {
        let s = lp_simplex::<f64>(3, 2.0).unwrap();
        assert_eq!(s.len(), 4);
        assert_unit(&s, 1e-12);
        assert_unit(&lp_simplex(2, 3.0).unwrap(), 1e-10);
        assert_unit(&lp_simplex(5, 1.5).unwrap(), 1e-10);
    }

    #[test]
    fn euclidean_simplex_examples() {
        assert_eq!(euclidean_simplex::<f64>(1).unwrap().points(), &[vec![0.0], vec![1.0]]);
        for n in 2..=8 {
            let s = euclidean_simplex::<f64>(n).unwrap();
            assert_eq!(s.len(), n + 1);
            assert_unit(&s, 1e-12);
        }
    }

    #[test]
    fn product_examples() {
        let tri = euclidean_simplex::<f64>(2).unwrap();
        let seg = euclidean_simplex::<f64>(1).unwrap();
        let p = product_construction(&tri, &seg).unwrap();
        assert_eq!(p.len(), 6);
        assert_eq!(p.space().to_string(), "lpsum:blocks=2,1,p=inf");
        assert_unit(&p, 1e-12);

        let single = PointSet::new(Space::euclidean(2).unwrap(), vec![vec![0.2, 0.1]]).unwrap();
        let q = product_construction(&single, &tri).unwrap();
        assert_eq!(q.len(), 3);
        for (a, b) in q.points().iter().zip(tri.points()) {
            assert_eq!(&a[2..], &b[..]);
        }

        let bad = PointSet::new(Space::euclidean(1).unwrap(), vec![vec![0.0], vec![2.0]]).unwrap();
        assert!(product_construction(&bad, &seg).is_err());
        assert!(product_construction(&cross_polytope(2).unwrap(), &seg).is_err());
    }

    #[test]
    fn profile_examples() {
        assert_eq!(distance_profile(&cross_polytope::<f64>(3).unwrap(), 1e-7).unwrap(), vec![1.0]);
        let sq = PointSet::new(
            Space::lp(2, Exponent::Finite(2.0)).unwrap(),
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]],
        )
        .unwrap();
        let prof = distance_profile(&sq, 1e-7).unwrap();
        assert_eq!(prof.len(), 2);
        assert!((prof[0] - 2f64.sqrt()).abs() < 1e-15 && prof[1] == 1.0);
        let dup = PointSet::new(Space::euclidean(1).unwrap(), vec![vec![0.5], vec![0.5]]).unwrap();
        let err = distance_profile(&dup, 1e-7).unwrap_err();
        assert!(err.to_string().contains("zero distance present"));
    }

    #[test]
    fn f32_constructions() {
        let s = lp_simplex::<f32>(4, 3.0).unwrap();
        assert_eq!(distance_profile(&s, 1e-5).unwrap().len(), 1);
    }

    proptest! {
        #[test]
        fn lambda_residual_small(n in 2usize..40, p in 1.05f64..12.0) {
            let l = simplex_lambda(n, p).unwrap();
            let r = (1.0 - l).abs().powf(p) + (n as f64 - 1.0) * l.powf(p) - 2.0;
            prop_assert!(r.abs() <= 1e-12);
            prop_assert!(l > 0.0);
        }
    }
}
