#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use eqd::approx::approximate_abs_power;
use eqd::bounds::{best_explicit_upper, enumerate_bounds, lower_bound, BoundConfig, BoundReport};
use eqd::certify::{certify, CertificateReport, CertifyConfig, Theorem};
use eqd::construct::{
    cross_polytope, distance_profile, euclidean_simplex, lp_simplex, product_construction, search_equilateral,
    SearchConfig,
};
use eqd::io::{read_point_set, to_json_string, PointSetFile};
use eqd::{Error, Exponent, PointSet64, Space};

#[derive(Parser)]
#[command(name = "eqd", version, about = "Bounds, constructions and rank certificates for equilateral sets")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructKind {
    CrossPolytope,
    LpSimplex,
    EuclideanSimplex,
    Product,
}

#[derive(Subcommand)]
enum Command {
    /// List the known bounds for a space.
    Bound {
        /// `lp:n=N,p=P` or `lpsum:blocks=A,B,...,p=P` (P may be `inf`).
        #[arg(long)]
        space: Space,
        /// Number of distinct distances.
        #[arg(long, default_value_t = 1)]
        s: u32,
        /// Report only the best explicit upper bound.
        #[arg(long)]
        best: bool,
        /// Overrides the absolute constant `c`.
        #[arg(long)]
        c: Option<f64>,
    },
    /// Build an explicit unit equilateral set.
    Construct {
        #[arg(value_enum)]
        kind: ConstructKind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
    },
    /// Check that a point set is unit equilateral.
    Verify {
        #[arg(long)]
        points: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Run a rank certificate pipeline on a point set.
    Certify {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        theorem: Theorem,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        p: Option<Exponent>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        d: Option<usize>,
    },
    /// Approximate |x|^p by an even polynomial of degree at most d.
    Approx {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        d: usize,
    },
    /// Search numerically for m unit equilateral points.
    Search {
        #[arg(long)]
        space: Space,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        target: f64,
        #[arg(long, default_value_t = 500)]
        max_iters: usize,
    },
}

/// A command's result in every output format, plus whether it was positive.
struct Output {
    json: Value,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    text: String,
    ok: bool,
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn point_rows(ps: &PointSet64) -> (Vec<String>, Vec<Vec<String>>) {
    let header = (0..ps.space().ambient_dim()).map(|t| format!("x{t}")).collect();
    let rows = ps.points().iter().map(|x| x.iter().map(|&c| num(c)).collect()).collect();
    (header, rows)
}

fn point_text(ps: &PointSet64) -> String {
    let mut s = format!("{} points in {}\n", ps.len(), ps.space());
    for x in ps.points() {
        s += &x.iter().map(|&c| num(c)).collect::<Vec<_>>().join(" ");
        s.push('\n');
    }
    s
}

fn point_output(ps: &PointSet64) -> Result<Output, Error> {
    let (header, rows) = point_rows(ps);
    Ok(Output {
        json: serde_json::to_value(PointSetFile::from(ps)).map_err(|e| Error::Parse(e.to_string()))?,
        header,
        rows,
        text: point_text(ps),
        ok: true,
    })
}

fn bound_rows(reports: &[BoundReport]) -> (Vec<String>, Vec<Vec<String>>, String) {
    let header = ["side", "kind", "value", "source", "conditions"].map(String::from).to_vec();
    let mut text = String::new();
    let rows = reports
        .iter()
        .map(|r| {
            let side = serde_json::to_value(r.side).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
            text += &format!("{side:5} {:10} {:>12}  {} ({})\n", r.kind.to_string(), r.value.to_string(), r.source, r.conditions.join("; "));
            vec![side, r.kind.to_string(), r.value.to_string(), r.source.clone(), r.conditions.join("; ")]
        })
        .collect();
    (header, rows, text)
}

fn to_value<S: serde::Serialize>(v: &S) -> Result<Value, Error> {
    serde_json::to_value(v).map_err(|e| Error::Parse(e.to_string()))
}

fn run_bound(space: Space, s: u32, best: bool, c: Option<f64>) -> Result<Output, Error> {
    let mut cfg = BoundConfig::from_env()?;
    if let Some(c) = c {
        if !(c > 0.0) {
            return Err(Error::InvalidInput("c must be positive".into()));
        }
        cfg.c_absolute = c;
    }
    let reports = if best {
        vec![best_explicit_upper(&space, s, &cfg)?]
    } else {
        let mut all = enumerate_bounds(&space, s, &cfg)?;
        if s == 1 {
            all.push(lower_bound(&space, s)?);
        }
        all
    };
    let (header, rows, text) = bound_rows(&reports);
    let json = if best { to_value(&reports[0])? } else { to_value(&reports)? };
    Ok(Output { json, header, rows, text, ok: true })
}

fn required<T>(v: Option<T>, flag: &str) -> Result<T, Error> {
    v.ok_or_else(|| Error::InvalidInput(format!("--{flag} is required for this construction")))
}

fn run_construct(kind: ConstructKind, n: Option<usize>, p: Option<f64>, a: Option<usize>, b: Option<usize>) -> Result<Output, Error> {
    let ps: PointSet64 = match kind {
        ConstructKind::CrossPolytope => cross_polytope(required(n, "n")?)?,
        ConstructKind::LpSimplex => lp_simplex(required(n, "n")?, required(p, "p")?)?,
        ConstructKind::EuclideanSimplex => euclidean_simplex(required(n, "n")?)?,
        ConstructKind::Product => {
            product_construction(&euclidean_simplex(required(a, "a")?)?, &euclidean_simplex(required(b, "b")?)?)?
        }
    };
    point_output(&ps)
}

fn run_verify(path: &Path, tol: f64) -> Result<Output, Error> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tol must be positive".into()));
    }
    let ps: PointSet64 = read_point_set(path)?;
    let (profile, max_dev) = if ps.len() == 1 {
        (Vec::new(), 0.0)
    } else {
        let profile = distance_profile(&ps, tol)?;
        let dev = ps.pairwise_distances().iter().fold(0.0f64, |m, &(_, _, d)| m.max((d - 1.0).abs()));
        (profile, dev)
    };
    let ok = max_dev <= tol;
    let json = json!({
        "space": ps.space().to_string(),
        "m": ps.len(),
        "profile": profile,
        "max_deviation": max_dev,
        "tol": tol,
        "equilateral": ok,
    });
    let text = format!(
        "{} points in {}: {} distinct distance(s), max |d - 1| = {}, {}\n",
        ps.len(),
        ps.space(),
        profile.len(),
        num(max_dev),
        if ok { "unit equilateral" } else { "NOT unit equilateral" }
    );
    let rows = vec![vec![ps.len().to_string(), profile.len().to_string(), num(max_dev), ok.to_string()]];
    let header = ["m", "distinct_distances", "max_deviation", "equilateral"].map(String::from).to_vec();
    Ok(Output { json, header, rows, text, ok })
}

fn report_text(r: &CertificateReport) -> String {
    let mut s = format!(
        "{} on {} points: {}\n  diagonal ok: {}\n  max off-diagonal: {} (threshold {}{})\n  rank >= {} (trace bound), numerical rank {}, span bound {}\n",
        r.theorem,
        r.m,
        if r.passes { "PASS" } else { "FAIL" },
        r.diag_ok,
        num(r.max_offdiag),
        num(r.offdiag_threshold),
        if r.threshold_checked { "" } else { ", not gated" },
        num(r.rank_lemma_lower),
        r.numerical_rank,
        r.span_upper
    );
    for n in &r.notes {
        s += &format!("  note: {n}\n");
    }
    s
}

fn run_certify(
    path: &Path,
    theorem: Theorem,
    k: Option<u32>,
    p: Option<Exponent>,
    c: Option<f64>,
    d: Option<usize>,
) -> Result<Output, Error> {
    let ps: PointSet64 = read_point_set(path)?;
    let cfg = CertifyConfig { k, p, c, d, ..Default::default() };
    let r = certify(&ps, theorem, &cfg)?;
    let json = to_value(&r)?;
    let header = vec!["field".to_string(), "value".to_string()];
    let rows = match &json {
        Value::Object(map) => map
            .iter()
            .filter(|(_, v)| !v.is_array() && !v.is_object())
            .map(|(k, v)| vec![k.clone(), v.as_f64().filter(|_| v.is_f64()).map_or_else(|| v.to_string().trim_matches('"').to_string(), num)])
            .collect(),
        _ => Vec::new(),
    };
    Ok(Output { text: report_text(&r), json, header, rows, ok: r.passes })
}

fn run_approx(p: f64, d: usize) -> Result<Output, Error> {
    let (poly, cert) = approximate_abs_power::<f64>(p, d)?;
    let json = json!({
        "p": p,
        "d": d,
        "even_coefficients": poly.even_coeffs(),
        "certificate": to_value(&cert)?,
        "passes": cert.passes(),
    });
    let header = vec!["power".to_string(), "coefficient".to_string()];
    let rows = poly
        .even_coeffs()
        .iter()
        .enumerate()
        .map(|(j, &c)| vec![(2 * (j + 1)).to_string(), num(c)])
        .collect();
    let text = format!(
        "|x|^{p} with degree <= {d}: measured error {} <= bound {}: {}\n",
        num(cert.measured_error),
        num(cert.jackson_bound),
        cert.passes()
    );
    Ok(Output { json, header, rows, text, ok: cert.passes() })
}

fn run_search(space: Space, m: usize, cfg: SearchConfig) -> Result<Output, Error> {
    let r = search_equilateral::<f64>(&space, m, &cfg)?;
    let (header, rows) = point_rows(&r.points);
    let json = json!({
        "space": space.to_string(),
        "points": r.points.points(),
        "residual": r.residual,
        "converged": r.converged,
        "restart_index": r.restart_index,
    });
    let text = format!(
        "residual {} after restart {} ({})\n{}",
        num(r.residual),
        r.restart_index,
        if r.converged { "converged" } else { "not converged" },
        point_text(&r.points)
    );
    Ok(Output { json, header, rows, text, ok: r.converged })
}

fn dispatch(cmd: Command) -> Result<Output, Error> {
    match cmd {
        Command::Bound { space, s, best, c } => run_bound(space, s, best, c),
        Command::Construct { kind, n, p, a, b } => run_construct(kind, n, p, a, b),
        Command::Verify { points, tol } => run_verify(&points, tol),
        Command::Certify { points, theorem, k, p, c, d } => run_certify(&points, theorem, k, p, c, d),
        Command::Approx { p, d } => run_approx(p, d),
        Command::Search { space, m, restarts, seed, target, max_iters } => {
            let cfg = SearchConfig { restarts, seed, residual_target: target, max_iters, ..Default::default() };
            run_search(space, m, cfg)
        }
    }
}

fn render(out: &Output, format: Format) -> String {
    match format {
        Format::Json => to_json_string(&out.json) + "\n",
        Format::Text => out.text.clone(),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let _ = w.write_record(&out.header);
            for r in &out.rows {
                let _ = w.write_record(r);
            }
            String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
        }
    }
}

/// Negative mathematical outcomes exit with 2, input problems with 1.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CertificationFailure { .. } | Error::ZeroDistance(..) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli.command) {
        Ok(out) => {
            print!("{}", render(&out, cli.format));
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
