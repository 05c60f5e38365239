//! Catalogue of upper and lower bounds on `e_s(X)`, the largest `s`-distance
//! set in `X`, for `ℓ_p^n` and `ℓ_p` sums of Euclidean spaces.
//!
//! Every bound is reported with its side, its kind and the conditions under
//! which it applies. Bounds whose constants are not known are carried as
//! formulas; they get a numeric value only when the constants are configured.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::space::{Exponent, Space};

/// Environment variable naming the constants file.
pub const CONFIG_ENV: &str = "EQD_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// A proven bound with a concrete value.
    Explicit,
    /// A proven bound up to an unspecified constant.
    Asymptotic,
    /// An open conjecture.
    Conjecture,
    /// The true value.
    Exact,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::Explicit => "explicit",
            Kind::Asymptotic => "asymptotic",
            Kind::Conjecture => "conjecture",
            Kind::Exact => "exact",
        };
        f.write_str(s)
    }
}

/// Value of a bound.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundValue {
    Integer(BigUint),
    /// A symbolic expression, with its value when every constant is known.
    Formula { expr: String, numeric: Option<f64> },
    /// No explicit bound is available.
    Unbounded,
}

impl BoundValue {
    pub fn int(v: u64) -> Self {
        BoundValue::Integer(BigUint::from(v))
    }

    pub fn as_integer(&self) -> Option<&BigUint> {
        match self {
            BoundValue::Integer(v) => Some(v),
            _ => None,
        }
    }

    /// Numeric value if there is one.
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            BoundValue::Integer(v) => v.to_f64(),
            BoundValue::Formula { numeric, .. } => *numeric,
            BoundValue::Unbounded => None,
        }
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Integer(v) => write!(f, "{v}"),
            BoundValue::Formula { expr, numeric: Some(x) } => write!(f, "{expr} = {x:e}"),
            BoundValue::Formula { expr, numeric: None } => f.write_str(expr),
            BoundValue::Unbounded => f.write_str("unbounded"),
        }
    }
}

impl Serialize for BoundValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Formula<'a> {
            expr: &'a str,
            numeric: Option<f64>,
        }
        match self {
            BoundValue::Integer(v) => match v.to_u64() {
                Some(x) => s.serialize_u64(x),
                None => s.serialize_str(&v.to_string()),
            },
            BoundValue::Formula { expr, numeric } => Formula { expr, numeric: *numeric }.serialize(s),
            BoundValue::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

/// A configured constant, or a marker that it is unknown.
#[derive(Debug, Clone, PartialEq)]
pub enum Constant {
    Value(f64),
    Unspecified,
}

impl Serialize for Constant {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Constant::Value(v) => s.serialize_f64(*v),
            Constant::Unspecified => s.serialize_str("unspecified"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub side: Side,
    pub kind: Kind,
    pub value: BoundValue,
    pub conditions: Vec<String>,
    pub source: String,
    pub constants_used: BTreeMap<String, Constant>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub construction: Option<String>,
}

impl BoundReport {
    fn new(side: Side, kind: Kind, value: BoundValue, source: &str) -> Self {
        BoundReport {
            side,
            kind,
            value,
            conditions: Vec::new(),
            source: source.to_string(),
            constants_used: BTreeMap::new(),
            construction: None,
        }
    }

    fn when(mut self, cond: impl Into<String>) -> Self {
        self.conditions.push(cond.into());
        self
    }

    fn constant(mut self, name: &str, c: Constant) -> Self {
        self.constants_used.insert(name.to_string(), c);
        self
    }
}

/// Constants for the catalogue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundConfig {
    /// The absolute constant `c` with `c_p = c·p` in the `ℓ_p^n` bound; also
    /// gates the large-`p` bound.
    pub c_absolute: f64,
    /// Lets numeric asymptotic bounds compete in [`best_explicit_upper`].
    pub treat_asymptotic_as_explicit: bool,
    /// `c_p` of the odd-`p` bound `c_p n log n`.
    pub c_p: Option<f64>,
    /// `c_{p,s}` of the `s`-distance bound.
    pub c_ps: Option<f64>,
    /// `c_{p,a}` of the `ℓ_p`-sum bound.
    pub c_pa: Option<f64>,
}

impl Default for BoundConfig {
    fn default() -> Self {
        BoundConfig {
            c_absolute: 2.01,
            treat_asymptotic_as_explicit: false,
            c_p: None,
            c_ps: None,
            c_pa: None,
        }
    }
}

impl BoundConfig {
    /// Parses `key = value` lines; absent keys keep their defaults.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: BoundConfig = toml::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
        if !(cfg.c_absolute > 0.0) {
            return Err(invalid("c_absolute must be positive"));
        }
        Ok(cfg)
    }

    /// Reads the file named by `EQD_CONFIG`, or the defaults when it is unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CONFIG_ENV) {
            None => Ok(Self::default()),
            Some(path) => {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| invalid(format!("cannot read {}: {e}", path.to_string_lossy())))?;
                Self::from_toml_str(&text)
            }
        }
    }
}

/// `C(n, k)` exactly.
pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `(2ps + 2s)/(2p − s)`, the exponent of `n` in the `s`-distance bound.
pub fn s_distance_exponent(p: f64, s: f64) -> f64 {
    (2.0 * p * s + 2.0 * s) / (2.0 * p - s)
}

/// `C(a+p/2, a) + C(b+p/2, b)` for even `p`.
pub fn even_p_two_block_bound(a: u64, b: u64, p: u64) -> BigUint {
    binomial_big(a + p / 2, a) + binomial_big(b + p / 2, b)
}

/// `Σ_k C(a_k+p/2, a_k)` for even `p`.
pub fn even_p_blocks_bound(blocks: &[u64], p: u64) -> BigUint {
    blocks.iter().map(|&a| binomial_big(a + p / 2, a)).sum()
}

/// `(a+1)(b+1) + 1`.
pub fn linf_two_block_bound(a: u64, b: u64) -> BigUint {
    BigUint::from(a + 1) * BigUint::from(b + 1) + 1u32
}

/// Swanepoel's even-`p` bound: `(p/2−1)n+1` if `4 | p`, else `(p/2)n+1`.
pub fn even_p_lp_bound(n: u64, p: u64) -> BigUint {
    let half = p / 2;
    let mult = if p.is_multiple_of(4) { half - 1 } else { half };
    BigUint::from(mult) * BigUint::from(n) + 1u32
}

/// `min_{1≤i<k} e_i · max_{0≤j≤k−i} e_j` with `e_0 = 1`; `e[j−1]` holds `e_j`.
pub fn cluster_combine(e: &[u128], k: usize) -> Result<u128> {
    if k < 2 {
        return Err(invalid("k must be at least 2"));
    }
    if e.len() < k - 1 {
        return Err(invalid(format!("need bounds e_1..e_{}, got {}", k - 1, e.len())));
    }
    let at = |j: usize| if j == 0 { 1 } else { e[j - 1] };
    let mut best: Option<u128> = None;
    for i in 1..k {
        let worst = (0..=k - i).map(at).max().unwrap_or(1);
        let v = at(i)
            .checked_mul(worst)
            .ok_or_else(|| Error::ResourceLimit("clustering bound exceeds u128".into()))?;
        best = Some(best.map_or(v, |b| b.min(v)));
    }
    Ok(best.expect("k >= 2"))
}

/// Every bound on `e_s(space)` whose hypotheses hold.
pub fn enumerate_bounds(space: &Space, s: u32, cfg: &BoundConfig) -> Result<Vec<BoundReport>> {
    if s == 0 {
        return Err(invalid("s must be at least 1"));
    }
    let dim = space.ambient_dim() as u64;
    let n = space.num_blocks() as u64;
    let p = space.p();
    let s64 = s as u64;
    let mut out = Vec::new();

    if s == 1 {
        out.push(
            BoundReport::new(Side::Upper, Kind::Explicit, BoundValue::Integer(BigUint::from(2u32).pow(dim as u32)), "petty")
                .when("any normed space of dimension n"),
        );
    } else {
        let kind = if dim == 2 { Kind::Explicit } else { Kind::Conjecture };
        out.push(
            BoundReport::new(Side::Upper, kind, BoundValue::Integer(BigUint::from(s64 + 1).pow(dim as u32)), "swanepoel-conjecture")
                .when("any normed space of dimension n; proven for n = 2"),
        );
    }

    if space.is_euclidean() {
        if s == 1 {
            out.push(
                BoundReport::new(Side::Upper, Kind::Exact, BoundValue::int(dim + 1), "euclidean-exact")
                    .when("Euclidean space"),
            );
        }
        out.push(
            BoundReport::new(Side::Upper, Kind::Explicit, BoundValue::Integer(binomial_big(dim + s64, s64)), "bannai-bannai-stanton")
                .when("Euclidean space"),
        );
    }

    if space.is_coordinate() {
        lp_bounds(space, s, cfg, &mut out);
    } else if let Exponent::Finite(pf) = p {
        let a = space.max_block() as f64;
        if s == 1 && 2.0 * pf > a && !space.is_euclidean() {
            let e = s_distance_exponent(pf, a);
            let numeric = cfg.c_pa.map(|c| c * (n as f64).powf(e));
            out.push(
                BoundReport::new(
                    Side::Upper,
                    Kind::Asymptotic,
                    BoundValue::Formula { expr: format!("c_pa * n^{e}"), numeric },
                    "lp-sum-blocks",
                )
                .when("2p > max block dimension a")
                .constant("c_pa", cfg.c_pa.map_or(Constant::Unspecified, Constant::Value)),
            );
        }
    }

    if s == 1 && space.num_blocks() == 2 {
        let (a, b) = (space.blocks()[0] as u64, space.blocks()[1] as u64);
        match p {
            Exponent::Infinity => out.push(
                BoundReport::new(Side::Upper, Kind::Explicit, BoundValue::Integer(linf_two_block_bound(a, b)), "linf-sum-two-blocks")
                    .when("l_inf sum of two Euclidean spaces"),
            ),
            _ => {
                if let Some(pe) = p.as_even_integer() {
                    out.push(
                        BoundReport::new(
                            Side::Upper,
                            Kind::Explicit,
                            BoundValue::Integer(even_p_two_block_bound(a, b, pe)),
                            "even-p-sum-two-blocks",
                        )
                        .when("l_p sum of two Euclidean spaces, p even"),
                    );
                }
            }
        }
    }
    if s == 1 && space.num_blocks() >= 3 {
        if let Some(pe) = p.as_even_integer() {
            let blocks: Vec<u64> = space.blocks().iter().map(|&a| a as u64).collect();
            out.push(
                BoundReport::new(
                    Side::Upper,
                    Kind::Explicit,
                    BoundValue::Integer(even_p_blocks_bound(&blocks, pe)),
                    "even-p-sum-many-blocks",
                )
                .when("l_p sum of Euclidean spaces, p even"),
            );
        }
    }
    Ok(out)
}

fn lp_bounds(space: &Space, s: u32, cfg: &BoundConfig, out: &mut Vec<BoundReport>) {
    let n = space.ambient_dim() as u64;
    let nf = n as f64;
    let Exponent::Finite(p) = space.p() else {
        return;
    };
    if s == 1 {
        let e = s_distance_exponent(p, 1.0);
        out.push(
            BoundReport::new(
                Side::Upper,
                Kind::Asymptotic,
                BoundValue::Formula {
                    expr: format!("c * p * n^{e}"),
                    numeric: Some(cfg.c_absolute * p * nf.powf(e)),
                },
                "alon-pudlak",
            )
            .when("p >= 1")
            .constant("c", Constant::Value(cfg.c_absolute)),
        );

        let gate = cfg.c_absolute * (nf * nf.ln()).powi(2);
        if n > 1 && p >= gate {
            let v = (2.0 * (p + 1.0) * nf).floor() as u64;
            out.push(
                BoundReport::new(Side::Upper, Kind::Explicit, BoundValue::int(v), "large-p")
                    .when("n > 1")
                    .when(format!("p >= c(n ln n)^2 = {gate}"))
                    .constant("c", Constant::Value(cfg.c_absolute)),
            );
        }

        if let Some(pe) = space.p().as_even_integer() {
            let cond = if pe % 4 == 0 { "p = 0 mod 4" } else { "p = 2 mod 4" };
            out.push(
                BoundReport::new(Side::Upper, Kind::Explicit, BoundValue::Integer(even_p_lp_bound(n, pe)), "swanepoel-even-p")
                    .when(cond),
            );
        }
        if let Some(pi) = space.p().as_integer() {
            if pi % 2 == 1 {
                let numeric = cfg.c_p.map(|c| c * nf * nf.ln());
                out.push(
                    BoundReport::new(
                        Side::Upper,
                        Kind::Asymptotic,
                        BoundValue::Formula { expr: "c_p * n * log(n)".into(), numeric },
                        "odd-p",
                    )
                    .when("p odd integer")
                    .constant("c_p", cfg.c_p.map_or(Constant::Unspecified, Constant::Value)),
                );
            }
        }

        if p == 1.0 {
            out.push(
                BoundReport::new(Side::Upper, Kind::Conjecture, BoundValue::int(2 * n), "kusner-l1").when("p = 1"),
            );
            if n == 3 || n == 4 {
                out.push(
                    BoundReport::new(Side::Upper, Kind::Exact, BoundValue::int(2 * n), "l1-small-n-exact")
                        .when("p = 1, n in {3, 4}"),
                );
            }
        } else if p > 2.0 {
            out.push(
                BoundReport::new(Side::Upper, Kind::Conjecture, BoundValue::int(n + 1), "kusner-lp").when("2 < p < inf"),
            );
        }
    } else if 2.0 * p > s as f64 {
        let e = s_distance_exponent(p, s as f64);
        let numeric = cfg.c_ps.map(|c| c * nf.powf(e));
        out.push(
            BoundReport::new(
                Side::Upper,
                Kind::Asymptotic,
                BoundValue::Formula { expr: format!("c_ps * n^{e}"), numeric },
                "s-distance-lp",
            )
            .when("2p > s")
            .constant("c_ps", cfg.c_ps.map_or(Constant::Unspecified, Constant::Value)),
        );
    }
}

/// The smallest explicit (or exact) upper bound; ties go to the
/// lexicographically smallest source tag. Returns an `Unbounded` report when
/// no explicit bound applies.
pub fn best_explicit_upper(space: &Space, s: u32, cfg: &BoundConfig) -> Result<BoundReport> {
    let all = enumerate_bounds(space, s, cfg)?;
    let eligible = |r: &BoundReport| {
        r.side == Side::Upper
            && match r.kind {
                Kind::Explicit | Kind::Exact => true,
                Kind::Asymptotic => cfg.treat_asymptotic_as_explicit && r.value.as_f64().is_some(),
                Kind::Conjecture => false,
            }
    };
    let best = all.into_iter().filter(eligible).min_by(|a, b| {
        let key = |r: &BoundReport| match &r.value {
            BoundValue::Integer(v) => v.to_f64().unwrap_or(f64::INFINITY),
            other => other.as_f64().map_or(f64::INFINITY, f64::floor),
        };
        let ord = match (&a.value, &b.value) {
            (BoundValue::Integer(x), BoundValue::Integer(y)) => x.cmp(y),
            _ => key(a).total_cmp(&key(b)),
        };
        ord.then_with(|| a.source.cmp(&b.source))
    });
    Ok(best.unwrap_or_else(|| {
        BoundReport::new(Side::Upper, Kind::Explicit, BoundValue::Unbounded, "none")
            .when("no explicit bound applies")
    }))
}

/// The best constructive lower bound on `e(space)`, with its construction.
pub fn lower_bound(space: &Space, s: u32) -> Result<BoundReport> {
    if s != 1 {
        return Err(Error::Unsupported(format!("lower bounds are only available for s = 1, got s = {s}")));
    }
    let dim = space.ambient_dim() as u64;
    let n = space.num_blocks() as u64;
    let max_block = space.max_block() as u64;
    let mut candidates: Vec<(BigUint, &str, &str)> = Vec::new();
    if space.is_euclidean() {
        candidates.push((BigUint::from(dim + 1), "euclidean-simplex", "regular simplex"));
    }
    match space.p() {
        Exponent::Infinity => {
            let prod: BigUint = space.blocks().iter().map(|&a| BigUint::from(a as u64 + 1)).product();
            candidates.push((prod, "product", "product of regular simplices"));
        }
        Exponent::Finite(1.0) => {
            candidates.push((BigUint::from(2 * n), "cross-polytope", "cross-polytope on one coordinate per block"));
        }
        Exponent::Finite(_) => {
            candidates.push((BigUint::from(n + 1), "lp-simplex", "simplex with lambda point on one coordinate per block"));
        }
    }
    candidates.push((BigUint::from(max_block + 1), "euclidean-simplex", "regular simplex in the largest block"));
    let (v, construction, desc) = candidates
        .into_iter()
        .max_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(a.1)))
        .expect("nonempty");
    let mut r = BoundReport::new(Side::Lower, Kind::Explicit, BoundValue::Integer(v), construction).when(desc);
    r.construction = Some(construction.to_string());
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lp(n: usize, p: f64) -> Space {
        Space::lp(n, Exponent::Finite(p)).unwrap()
    }

    fn sum(blocks: Vec<usize>, p: Exponent) -> Space {
        Space::new(p, blocks).unwrap()
    }

    fn find<'a>(v: &'a [BoundReport], source: &str) -> &'a BoundReport {
        v.iter().find(|r| r.source == source).unwrap_or_else(|| panic!("no {source} in {v:?}"))
    }

    #[test]
    fn enumerate_examples() {
        let cfg = BoundConfig::default();
        let b = enumerate_bounds(&sum(vec![2, 3], Exponent::Infinity), 1, &cfg).unwrap();
        let r = find(&b, "linf-sum-two-blocks");
        assert_eq!((r.value.clone(), r.kind), (BoundValue::int(13), Kind::Explicit));

        let b = enumerate_bounds(&lp(5, 4.0), 1, &cfg).unwrap();
        assert_eq!(find(&b, "swanepoel-even-p").value, BoundValue::int(6));

        let b = enumerate_bounds(&sum(vec![2, 2], Exponent::Finite(4.0)), 1, &cfg).unwrap();
        assert_eq!(find(&b, "even-p-sum-two-blocks").value, BoundValue::int(12));
    }

    #[test]
    fn best_examples() {
        let cfg = BoundConfig::default();
        assert_eq!(best_explicit_upper(&lp(3, 2.0), 1, &cfg).unwrap().value, BoundValue::int(4));
        assert_eq!(best_explicit_upper(&lp(10, 6.0), 1, &cfg).unwrap().value, BoundValue::int(31));
        assert_eq!(
            best_explicit_upper(&sum(vec![2, 3], Exponent::Infinity), 1, &cfg).unwrap().value,
            BoundValue::int(13)
        );
        assert_eq!(best_explicit_upper(&lp(4, 3.0), 2, &cfg).unwrap().value, BoundValue::Unbounded);
        assert_eq!(best_explicit_upper(&lp(2, 3.0), 2, &cfg).unwrap().value, BoundValue::int(9));
        assert_eq!(best_explicit_upper(&lp(3, 1.0), 1, &cfg).unwrap().value, BoundValue::int(6));
    }

    #[test]
    fn lower_examples() {
        let r = lower_bound(&lp(7, 1.0), 1).unwrap();
        assert_eq!((r.value, r.construction.as_deref()), (BoundValue::int(14), Some("cross-polytope")));
        let r = lower_bound(&lp(4, 3.0), 1).unwrap();
        assert_eq!((r.value, r.construction.as_deref()), (BoundValue::int(5), Some("lp-simplex")));
        let r = lower_bound(&sum(vec![2, 3], Exponent::Infinity), 1).unwrap();
        assert_eq!((r.value, r.construction.as_deref()), (BoundValue::int(12), Some("product")));
        assert!(matches!(lower_bound(&lp(3, 2.0), 2), Err(Error::Unsupported(_))));
    }

    #[test]
    fn cluster_examples() {
        assert_eq!(cluster_combine(&[7], 2).unwrap(), 49);
        assert_eq!(cluster_combine(&[4, 10], 3).unwrap(), 40);
        assert_eq!(cluster_combine(&[3, 20], 3).unwrap(), 60);
        assert!(cluster_combine(&[3], 3).is_err());
    }

    #[test]
    fn large_p_gate() {
        let cfg = BoundConfig::default();
        let b = enumerate_bounds(&lp(2, 100.0), 1, &cfg).unwrap();
        assert_eq!(find(&b, "large-p").value, BoundValue::int(404));
        let b = enumerate_bounds(&lp(3, 10.0), 1, &cfg).unwrap();
        assert!(b.iter().all(|r| r.source != "large-p"));
    }

    #[test]
    fn two_block_formulas_agree_with_many_block_sum() {
        for a in 1..6u64 {
            for b in 1..6u64 {
                for p in [2u64, 4, 6, 8] {
                    assert_eq!(even_p_two_block_bound(a, b, p), even_p_blocks_bound(&[a, b], p));
                }
            }
        }
    }

    #[test]
    fn exponent_increasing() {
        for p in [1.0, 1.5, 2.0, 3.0, 7.0] {
            let grid: Vec<f64> = (0..1000).map(|i| 2.0 * p * i as f64 / 1000.0).collect();
            for w in grid.windows(2) {
                assert!(s_distance_exponent(p, w[1]) > s_distance_exponent(p, w[0]));
            }
        }
    }

    #[test]
    fn config_parsing() {
        let cfg = BoundConfig::from_toml_str("c_absolute = 3.5\nc_p = 1.0\n").unwrap();
        assert_eq!(cfg.c_absolute, 3.5);
        assert_eq!(cfg.c_p, Some(1.0));
        assert!(!cfg.treat_asymptotic_as_explicit);
        assert!(BoundConfig::from_toml_str("bogus = 1").is_err());
        assert!(BoundConfig::from_toml_str("c_absolute = -1").is_err());
    }

    #[test]
    fn asymptotic_competes_when_enabled() {
        let cfg = BoundConfig { treat_asymptotic_as_explicit: true, c_p: Some(0.1), ..Default::default() };
        let r = best_explicit_upper(&lp(50, 3.0), 1, &cfg).unwrap();
        assert_eq!(r.source, "odd-p");
    }

    #[test]
    fn value_serialization() {
        let big = BoundValue::Integer(BigUint::from(2u32).pow(80));
        assert_eq!(serde_json::to_string(&big).unwrap(), "\"1208925819614629174706176\"");
        assert_eq!(serde_json::to_string(&BoundValue::int(13)).unwrap(), "13");
        assert_eq!(serde_json::to_string(&BoundValue::Unbounded).unwrap(), "\"unbounded\"");
    }

    fn arb_space() -> impl Strategy<Value = Space> {
        let p = prop::sample::select(vec![
            Exponent::Finite(1.0),
            Exponent::Finite(1.5),
            Exponent::Finite(2.0),
            Exponent::Finite(3.0),
            Exponent::Finite(4.0),
            Exponent::Finite(6.0),
            Exponent::Infinity,
        ]);
        (p, prop::collection::vec(1usize..4, 1..6))
            .prop_filter("dim <= 10", |(_, b)| b.iter().sum::<usize>() <= 10)
            .prop_map(|(p, b)| Space::new(p, b).unwrap())
    }

    proptest! {
        #[test]
        fn explicit_uppers_dominate_lower(space in arb_space()) {
            let lower = lower_bound(&space, 1).unwrap();
            let lo = lower.value.as_integer().unwrap().clone();
            for r in enumerate_bounds(&space, 1, &BoundConfig::default()).unwrap() {
                if matches!(r.kind, Kind::Explicit | Kind::Exact) {
                    prop_assert!(r.value.as_integer().unwrap() >= &lo, "{} < {} for {}", r.value, lo, space);
                }
            }
        }

        #[test]
        fn euclidean_exact_is_minimal(n in 1usize..12) {
            let space = lp(n, 2.0);
            let best = best_explicit_upper(&space, 1, &BoundConfig::default()).unwrap();
            prop_assert_eq!(best.value, BoundValue::int(n as u64 + 1));
        }
    }
}
