//! Acceptance criteria 1 to 10. Each test prints one PASS/FAIL line and then
//! asserts, so `cargo test -- --nocapture` shows the full scorecard.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use eqd::approx::{approximate_abs_power, choose_degree, degree_threshold, EvenPolynomial};
use eqd::bounds::{enumerate_bounds, BoundConfig, BoundValue};
use eqd::certify::{
    block_monomial_count, enumerated_monomial_span, gram_thm3, gram_thm4, matrix_thm1, matrix_thm2, matrix_thm5,
    numerical_rank, rank_lower_bound, telescoped_monomial_count, SymMatrix,
};
use eqd::construct::{
    cross_polytope, distance_profile, euclidean_simplex, lp_simplex, product_construction, search_equilateral,
    simplex_lambda, SearchConfig,
};
use eqd::space::{norm_sandwich_check, PointSet};
use eqd::{Exponent, Space};

fn report(id: u32, title: &str, ok: bool, detail: &str, elapsed: Duration, limit_s: f64) -> bool {
    let in_time = elapsed.as_secs_f64() < limit_s;
    let pass = ok && in_time;
    println!(
        "criterion {id:2} {}: {title}: {detail} [{:.2}s, limit {limit_s}s]",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    pass
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_points(space: Space, m: usize, r: &mut ChaCha8Rng) -> PointSet<f64> {
    let dim = space.ambient_dim();
    let pts = (0..m).map(|_| (0..dim).map(|_| r.random_range(-1.0..1.0)).collect()).collect();
    PointSet::new(space, pts).unwrap()
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(k: u64) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

// ---------------------------------------------------------------------------

fn bound_by_source(space: &Space, source: &str) -> Option<BigUint> {
    enumerate_bounds(space, 1, &BoundConfig::default())
        .unwrap()
        .into_iter()
        .find(|r| r.source == source)
        .and_then(|r| match r.value {
            BoundValue::Integer(v) => Some(v),
            _ => None,
        })
}

#[test]
fn criterion_01_bound_catalog() {
    let t = Instant::now();
    let mut fails = Vec::new();
    for (a, b) in [(2usize, 3usize), (3, 3), (4, 5)] {
        let space = Space::new(Exponent::Infinity, vec![a, b]).unwrap();
        let want = BigUint::from(((a + 1) * (b + 1) + 1) as u64);
        if bound_by_source(&space, "linf-sum-two-blocks") != Some(want.clone()) {
            fails.push(format!("linf ({a},{b})"));
        }
    }
    // (p/2 − 1)n + 1 at (5, 4) and (p/2)n + 1 at (10, 6).
    for (n, p, want) in [(5usize, 4usize, 5 + 1), (10, 6, 3 * 10 + 1)] {
        let p = p as f64;
        let space = Space::lp(n, Exponent::Finite(p)).unwrap();
        if bound_by_source(&space, "swanepoel-even-p") != Some(BigUint::from(want as u64)) {
            fails.push(format!("even-p l_{p}^{n}"));
        }
    }
    let space = Space::new(Exponent::Finite(4.0), vec![2, 2]).unwrap();
    if bound_by_source(&space, "even-p-sum-two-blocks") != Some(BigUint::from(12u32)) {
        fails.push("two blocks (2,2,4)".into());
    }
    let pass = report(1, "bound catalog", fails.is_empty(), &format!("mismatches {fails:?}"), t.elapsed(), 1.0);
    assert!(pass);
}

// ---------------------------------------------------------------------------

/// Falling factorial and `B(p)` written out independently of the library.
fn oracle_jackson(p: f64) -> f64 {
    let k = p.ceil();
    let falling: f64 = (0..k as u64 - 1).map(|i| p - i as f64).product();
    k.powf(p) * (1.0 + PI * PI / 2.0).powf(k) * falling / factorial(k as u64)
}

/// Sup-error on a dense uniform grid plus local refinement, independent of
/// the library's Chebyshev grid.
fn oracle_error(poly: &EvenPolynomial<f64>, p: f64) -> f64 {
    let f = |x: f64| (poly.eval(x) - x.abs().powf(p)).abs();
    const N: usize = 20_000;
    let vals: Vec<f64> = (0..=N).map(|j| f(j as f64 / N as f64)).collect();
    let mut best = vals.iter().cloned().fold(0.0, f64::max);
    for j in 1..N {
        if vals[j] >= vals[j - 1] && vals[j] >= vals[j + 1] && vals[j] > 0.5 * best {
            let (lo, hi) = ((j - 1) as f64 / N as f64, (j + 1) as f64 / N as f64);
            for s in 0..=200 {
                best = best.max(f(lo + (hi - lo) * s as f64 / 200.0));
            }
        }
    }
    best
}

#[test]
fn criterion_02_jackson() {
    let t = Instant::now();
    let mut fails = Vec::new();
    let mut checked = 0;
    for p in [1.0, 1.3, 1.5, 2.5, 3.0, 4.7] {
        let b = oracle_jackson(p);
        for d in (p.ceil() as usize)..=40 {
            checked += 1;
            let bound = b / (d as f64).powf(p);
            match approximate_abs_power::<f64>(p, d) {
                Ok((poly, cert)) => {
                    let measured = oracle_error(&poly, p).max(cert.measured_error);
                    if poly.degree() > d || measured > bound || (cert.jackson_bound - bound).abs() > 1e-12 * bound {
                        fails.push((p, d));
                    }
                }
                Err(_) => fails.push((p, d)),
            }
        }
    }
    for p in [2.0, 4.0, 6.0] {
        for d in (p as usize)..=40 {
            checked += 1;
            let (poly, cert) = approximate_abs_power::<f64>(p, d).unwrap();
            let mut monomial = vec![0.0; d / 2];
            monomial[p as usize / 2 - 1] = 1.0;
            if cert.measured_error != 0.0 || poly.even_coeffs() != monomial.as_slice() {
                fails.push((p, d));
            }
        }
    }
    let pass = report(2, "Jackson bound", fails.is_empty(), &format!("{checked} (p, d) pairs, failures {fails:?}"), t.elapsed(), 30.0);
    assert!(pass);
}

// ---------------------------------------------------------------------------

#[test]
fn criterion_03_rank_lemma() {
    let t = Instant::now();
    let mut r = rng(3);
    let mut violations = 0;
    let mut rank_mismatch = 0;
    for trial in 0..1000 {
        let m = r.random_range(1..=30);
        let a = if trial % 2 == 0 {
            let vals: Vec<Vec<f64>> = (0..m).map(|_| (0..m).map(|_| r.random_range(-1.0..1.0)).collect()).collect();
            SymMatrix::from_fn(m, |i, j| vals[i.min(j)][i.max(j)])
        } else {
            // B Bᵀ with B of size m × k has rank exactly k almost surely.
            let k = r.random_range(1..=m);
            let b: Vec<Vec<f64>> = (0..m).map(|_| (0..k).map(|_| r.random_range(-1.0..1.0)).collect()).collect();
            let a = SymMatrix::from_fn(m, |i, j| (0..k).map(|t| b[i][t] * b[j][t]).sum());
            if numerical_rank(&a, 1e-9) != k {
                rank_mismatch += 1;
            }
            a
        };
        let tr: f64 = (0..m).map(|i| a.get(i, i)).sum();
        let fro: f64 = (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).map(|(i, j)| a.get(i, j).powi(2)).sum();
        let lower = rank_lower_bound(&a).unwrap();
        if (lower - tr * tr / fro).abs() > 1e-9 * lower.max(1.0) || lower > numerical_rank(&a, 1e-9) as f64 + 1e-9 {
            violations += 1;
        }
    }
    // m²/(2m−1) ≥ m/2  ⇔  2m² ≥ m(2m−1), checked in integers.
    let corollary_bad = (1u64..=1_000_000).filter(|&m| 2 * m * m < m * (2 * m - 1)).count();
    let ok = violations == 0 && rank_mismatch == 0 && corollary_bad == 0;
    let detail = format!(
        "1000 matrices, {violations} violations, {rank_mismatch} low-rank mismatches; corollary failures for m <= 1e6: {corollary_bad}"
    );
    let pass = report(3, "rank lemma soundness", ok, &detail, t.elapsed(), 10.0);
    assert!(pass);
}

// ---------------------------------------------------------------------------

#[test]
fn criterion_04_span_dimensions() {
    let t = Instant::now();
    let mut r = rng(4);
    let mut violations = Vec::new();

    for _ in 0..200 {
        let n = r.random_range(1..=6);
        let k = [2u32, 4, 6][r.random_range(0..3)];
        let bound = (k as usize - 1) * n + 2;
        let m = r.random_range(1..=bound + 8);
        let pts = random_points(Space::lp(n, Exponent::Finite(k as f64)).unwrap(), m, &mut r);
        if numerical_rank(&matrix_thm1(&pts, k).unwrap(), 1e-9) > bound {
            violations.push(format!("thm1 n={n} k={k}"));
        }
    }

    for _ in 0..200 {
        let nb = r.random_range(1..=4);
        let mut blocks: Vec<usize> = (0..nb).map(|_| r.random_range(1..=4)).collect();
        while blocks.iter().sum::<usize>() > 8 {
            blocks.pop();
        }
        let d = r.random_range(1..=6);
        let bound = 2 + blocks.iter().map(|&a| binom((a + d - 1) as u64, a as u64) as usize).sum::<usize>() - blocks.len();
        let m = r.random_range(1..=(bound + 8).min(90));
        let p = r.random_range(1.0..4.0);
        let pts = random_points(Space::new(Exponent::Finite(p), blocks.clone()).unwrap(), m, &mut r);
        let coeffs = (0..d / 2).map(|_| r.random_range(-1.0..1.0)).collect();
        let poly = EvenPolynomial::new(d, coeffs).unwrap();
        if numerical_rank(&matrix_thm5(&pts, &poly).unwrap().0, 1e-9) > bound {
            violations.push(format!("thm5 blocks={blocks:?} d={d}"));
        }
    }

    // (dn)^k fails at n = 1: P(x − y) of degree d spans up to d + 1
    // functions there, so n = 1 is held to ((d−1)n+2)^k = (d+1)^k.
    for _ in 0..200 {
        let n: usize = r.random_range(1..=3);
        let k: usize = r.random_range(1..=2);
        let d: usize = r.random_range(2..=3);
        let bound = (d * n).max((d - 1) * n + 2).pow(k as u32);
        let m = r.random_range(1..=bound + 8);
        let pts = random_points(Space::lp(n, Exponent::Finite(r.random_range(1.0..4.0))).unwrap(), m, &mut r);
        let dists: Vec<f64> = (0..k).map(|u| 1.0 - 0.3 * u as f64).collect();
        let coeffs = (0..d / 2).map(|_| r.random_range(-1.0..1.0)).collect();
        let poly = EvenPolynomial::new(d, coeffs).unwrap();
        if numerical_rank(&matrix_thm2(&pts, &dists, &poly).unwrap().0, 1e-9) > bound {
            violations.push(format!("thm2 n={n} k={k} d={d}"));
        }
    }
    let detail = format!("600 point sets, violations {violations:?} (thm2 at n = 1 uses (d+1)^k)");
    let pass = report(4, "span-dimension soundness", violations.is_empty(), &detail, t.elapsed(), 60.0);
    assert!(pass);
}

// ---------------------------------------------------------------------------

fn identity_gap(a: &SymMatrix<f64>) -> f64 {
    let dense = a.to_dense();
    let mut gap = 0.0f64;
    for (i, row) in dense.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            gap = gap.max((v - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    gap
}

#[test]
fn criterion_05_gram_identities() {
    let t = Instant::now();
    let mut worst = 0.0f64;
    for a in 1..=3 {
        for b in 1..=3 {
            let s = product_construction(&euclidean_simplex::<f64>(a).unwrap(), &euclidean_simplex(b).unwrap()).unwrap();
            worst = worst.max(identity_gap(&gram_thm3(&s).unwrap()));
        }
    }
    for p in [2u32, 4, 6] {
        for (a, b) in [(1usize, 1usize), (2, 1), (2, 3), (3, 3)] {
            // Two points differing by t in one coordinate of each block, t^p + t^p = 1.
            let t = 0.5f64.powf(1.0 / p as f64);
            let mut y = vec![0.0; a + b];
            y[0] = t;
            y[a] = t;
            let space = Space::new(Exponent::Finite(p as f64), vec![a, b]).unwrap();
            let s = PointSet::new(space, vec![vec![0.0; a + b], y]).unwrap();
            assert!((s.distance(0, 1) - 1.0).abs() < 1e-14);
            worst = worst.max(identity_gap(&gram_thm4(&s, p).unwrap()));
        }
    }
    let pass = report(5, "Gram identities", worst <= 1e-10, &format!("max |G - I| = {worst:.3e}"), t.elapsed(), 5.0);
    assert!(pass);
}

// ---------------------------------------------------------------------------

/// Distinct monomials of `(‖x‖² − 2⟨x,y⟩ + ‖y‖²)^{p/2}` in `x` after
/// expanding `‖x‖^{2c}` into pure monomials: every monomial `x^g` of degree
/// at most `p/2`, plus `x^g‖x‖^{2c}` for `|g| = p/2 − c`, `c ≥ 1`, which are
/// counted by their leading exponent and so by `C(a + p/2 − c − 1, a − 1)`.
fn oracle_monomials(a: u64, p: u64) -> u64 {
    let h = p / 2;
    let low: u64 = (0..=h).map(|deg| binom(deg + a - 1, a - 1)).sum();
    let high: u64 = (1..=h).map(|c| binom(h - c + a - 1, a - 1)).sum();
    low + high
}

#[test]
fn criterion_06_monomial_count() {
    let t = Instant::now();
    let mut fails = Vec::new();
    for a in 1..=5usize {
        for p in [2u32, 4, 6, 8] {
            let closed = binom(a as u64 + p as u64 / 2, a as u64) + binom(a as u64 + p as u64 / 2 - 1, a as u64);
            let tele = telescoped_monomial_count(a, p).unwrap();
            let lib_closed = block_monomial_count(a, p).unwrap();
            let enumerated = enumerated_monomial_span(a, p).unwrap();
            let oracle = oracle_monomials(a as u64, p as u64);
            if !(tele == closed && lib_closed == closed && enumerated == closed && oracle == closed) {
                fails.push((a, p, closed, tele, enumerated));
            }
        }
    }
    let pass = report(6, "monomial-count identity", fails.is_empty(), &format!("20 (a, p) pairs, mismatches {fails:?}"), t.elapsed(), 5.0);
    assert!(pass);
}

// ---------------------------------------------------------------------------

fn unit_profile_gap(s: &PointSet<f64>) -> f64 {
    let prof = distance_profile(s, 1e-7).unwrap();
    let direct = s.pairwise_distances().iter().fold(0.0f64, |m, &(_, _, d)| m.max((d - 1.0).abs()));
    if prof.len() != 1 {
        return f64::INFINITY;
    }
    direct.max((prof[0] - 1.0).abs())
}

#[test]
fn criterion_07_constructions() {
    let t = Instant::now();
    let mut worst = 0.0f64;
    for n in 1..=20 {
        worst = worst.max(unit_profile_gap(&cross_polytope(n).unwrap()));
    }
    for p in [1.2, 1.5, 2.0, 3.0, 7.5] {
        for n in 2..=30 {
            worst = worst.max(unit_profile_gap(&lp_simplex(n, p).unwrap()));
        }
    }
    for a in 1..=4 {
        for b in 1..=4 {
            let s = product_construction(&euclidean_simplex::<f64>(a).unwrap(), &euclidean_simplex(b).unwrap()).unwrap();
            assert_eq!(s.len(), (a + 1) * (b + 1));
            worst = worst.max(unit_profile_gap(&s));
        }
    }
    let roots = [(2, (1.0 + 3f64.sqrt()) / 2.0), (3, 1.0), (4, (1.0 + 5f64.sqrt()) / 4.0)];
    let lambda_gap = roots.iter().map(|&(n, want)| (simplex_lambda(n, 2.0).unwrap() - want).abs()).fold(0.0, f64::max);
    let ok = worst <= 1e-10 && lambda_gap <= 1e-12;
    let detail = format!("max |d - 1| = {worst:.3e}, max lambda error = {lambda_gap:.3e}");
    let pass = report(7, "constructions", ok, &detail, t.elapsed(), 10.0);
    assert!(pass);
}

// ---------------------------------------------------------------------------

#[test]
fn criterion_08_witness_search() {
    let t = Instant::now();
    let cfg = SearchConfig { restarts: 32, ..Default::default() };
    let mut lines = Vec::new();
    let mut ok = true;
    for (n, p, m) in [(2usize, 3.0f64, 3usize), (3, 1.5, 4), (2, 1.0, 4), (3, 1.0, 6)] {
        let r = search_equilateral::<f64>(&Space::lp(n, Exponent::Finite(p)).unwrap(), m, &cfg).unwrap();
        let direct = r.points.pairwise_distances().iter().fold(0.0f64, |acc, &(_, _, d)| acc.max((d - 1.0).abs()));
        ok &= r.residual < 1e-8 && direct < 1e-8;
        lines.push(format!("l_{p}^{n} m={m}: {:.1e}", r.residual));
    }
    let r = search_equilateral::<f64>(&Space::lp(2, Exponent::Finite(2.0)).unwrap(), 4, &cfg).unwrap();
    ok &= !r.converged && r.residual > 1e-3;
    lines.push(format!("E^2 m=4: {:.3e} (must exceed 1e-3)", r.residual));
    let pass = report(8, "witness search", ok, &lines.join(", "), t.elapsed(), 120.0);
    assert!(pass);
}

// ---------------------------------------------------------------------------

fn naive_norm(x: &[f64], p: Option<f64>) -> f64 {
    match p {
        None => x.iter().fold(0.0, |m, v| m.max(v.abs())),
        Some(p) => x.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p),
    }
}

#[test]
fn criterion_09_sandwich() {
    let t = Instant::now();
    let mut r = rng(9);
    let (mut lib_bad, mut oracle_bad) = (0, 0);
    for trial in 0..100_000 {
        let n = r.random_range(1..=64);
        let x: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
        let p = r.random_range(1.0..=10.0);
        let q = if trial % 10 == 0 { None } else { Some(r.random_range(p..=10.0)) };
        let qe = q.map_or(Exponent::Infinity, Exponent::Finite);
        if !norm_sandwich_check(&x, Exponent::Finite(p), qe).unwrap().holds {
            lib_bad += 1;
        }
        let (np, nq) = (naive_norm(&x, Some(p)), naive_norm(&x, q));
        let scale = (n as f64).powf(1.0 / p - q.map_or(0.0, |q| 1.0 / q));
        let tol = 1e-12 * np.max(nq * scale);
        if nq > np + tol || np > scale * nq + tol {
            oracle_bad += 1;
        }
    }
    let detail = format!("1e5 vectors, {lib_bad} library violations, {oracle_bad} oracle violations");
    let pass = report(9, "norm sandwich", lib_bad == 0 && oracle_bad == 0, &detail, t.elapsed(), 5.0);
    assert!(pass);
}

// ---------------------------------------------------------------------------

#[test]
fn criterion_10_degree_selection() {
    let t = Instant::now();
    let mut r = rng(10);
    let mut bad = Vec::new();
    for _ in 0..10_000 {
        let p = r.random_range(1.0..=12.0);
        let n = r.random_range(1..=1000);
        let m = r.random_range(1..=1_000_000);
        let c = (2f64.powf(1.0 / p) - 1.0).powf(-p) + 1e-6;
        assert!((c - 1e-6 - degree_threshold(p)).abs() <= 1e-12 * c);
        let target = c * n as f64 * (m as f64).sqrt();
        match choose_degree(p, c, n, m) {
            Ok(d) if (d as f64).powf(p) > target && (d as f64).powf(p) < 2.0 * target => {}
            other => bad.push((p, n, m, other.ok())),
        }
    }
    let pass = report(10, "degree selection", bad.is_empty(), &format!("1e4 triples, violations {bad:?}"), t.elapsed(), 2.0);
    assert!(pass);
}
