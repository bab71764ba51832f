//! Command implementations behind the `tropref` binary. Each command returns
//! an [`Outcome`] (exit code and captured output) so it can be driven from
//! tests without a subprocess.
//!
//! Exit codes: 0 success, 1 verification failure or computation error,
//! 2 usage error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::appendix::{self, Filter, Fixtures, Surface};
use crate::floordiag;
use crate::invariants::{self, max_pairs, InvariantTable};
use crate::laurent::LaurentPoly;
use crate::polygon::{HPolygon, Shape};
use crate::surgery::{self, Check, ClassLattice, MissingKeys, NumberTable, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Emit {
    Text,
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Identity {
    UInversion,
    MainProof,
    ConjQuadric,
    Symmetry,
    MonotoneS,
    CutIndependence,
    WelRecursion,
    P2Coefficient,
    Increase,
}

impl Identity {
    /// Everything except `Increase`, whose theorem hypotheses the quadric
    /// table does not meet.
    pub const ALL: [Identity; 8] = [
        Identity::UInversion,
        Identity::MainProof,
        Identity::ConjQuadric,
        Identity::Symmetry,
        Identity::MonotoneS,
        Identity::CutIndependence,
        Identity::WelRecursion,
        Identity::P2Coefficient,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::UInversion => "u-inversion",
            Identity::MainProof => "main-proof",
            Identity::ConjQuadric => "conj-quadric",
            Identity::Symmetry => "symmetry",
            Identity::MonotoneS => "monotone-s",
            Identity::CutIndependence => "cut-independence",
            Identity::WelRecursion => "wel-recursion",
            Identity::P2Coefficient => "p2-coefficient",
            Identity::Increase => "increase",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheAction {
    Stats,
    Verify,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Compute {
        polygon: String,
        genus: (u32, u32),
        pairs: (u32, u32),
        list_diagrams: bool,
        trace: bool,
    },
    Verify {
        identities: Vec<Identity>,
        max: i64,
        appendix: bool,
    },
    Appendix {
        min_genus: Option<u32>,
        surface: Option<Surface>,
        fixtures: Option<PathBuf>,
    },
    Cache {
        action: CacheAction,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub emit: Emit,
    pub cache: Option<PathBuf>,
    pub workers: Option<usize>,
    /// Transforms fail on classes missing from a table instead of
    /// reporting them.
    pub strict: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl std::fmt::Display) -> Self {
        Self { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }

    fn failure(msg: impl std::fmt::Display) -> Self {
        Self { code: EXIT_FAIL, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

/// Parses `n` or `a:b` (inclusive).
pub fn parse_range(text: &str) -> Result<(u32, u32), String> {
    let num = |s: &str| s.trim().parse::<u32>().map_err(|e| format!("bad number {s:?}: {e}"));
    let (lo, hi) = match text.split_once(':') {
        Some((a, b)) => (num(a)?, num(b)?),
        None => {
            let n = num(text)?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(format!("empty range {text:?}"));
    }
    Ok((lo, hi))
}

/// A named polygon (`rect:a,b`, `sigma2:a,b`, `p2:d`) or a JSON file
/// `{"vertices": [[x, y], ...]}`.
pub fn parse_polygon(spec: &str) -> Result<HPolygon, String> {
    if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec).map_err(|e| format!("{spec}: {e}"))?;
        return serde_json::from_str(&text).map_err(|e| format!("{spec}: {e}"));
    }
    HPolygon::from_spec(spec).map_err(|e| e.to_string())
}

fn open_table(path: &Option<PathBuf>) -> Result<InvariantTable, String> {
    match path {
        Some(p) => InvariantTable::with_cache(p),
        None => InvariantTable::from_env(),
    }
    .map_err(|e| e.to_string())
}

pub fn run(cfg: &RunConfig) -> Outcome {
    if let Some(n) = cfg.workers {
        // a pool that is already set up stays as it is
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match &cfg.command {
        Command::Compute { polygon, genus, pairs, list_diagrams, trace } => {
            run_compute(cfg, polygon, *genus, *pairs, *list_diagrams, *trace)
        }
        Command::Verify { identities, max, appendix } => run_verify(cfg, identities, *max, *appendix),
        Command::Appendix { min_genus, surface, fixtures } => run_appendix(cfg, *min_genus, *surface, fixtures.as_deref()),
        Command::Cache { action } => run_cache(cfg, *action),
    }
}

#[derive(Serialize)]
struct ComputeRecord {
    polygon: String,
    vertices: Vec<(i64, i64)>,
    genus: u32,
    pairs: u32,
    invariant: LaurentPoly,
    extrapolated: bool,
    #[serde(serialize_with = "crate::laurent::serialize_bigint")]
    gw: num_bigint::BigInt,
    #[serde(skip_serializing_if = "Option::is_none")]
    welschinger: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagrams: Option<Vec<floordiag::DiagramReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<invariants::TraceStep>>,
}

fn run_compute(cfg: &RunConfig, spec: &str, genus: (u32, u32), pairs: (u32, u32), list: bool, trace: bool) -> Outcome {
    let poly = match parse_polygon(spec) {
        Ok(p) => p,
        Err(e) => return Outcome::usage(e),
    };
    if pairs.1 > 0 && genus.1 > 0 {
        return Outcome::usage("pairs of conjugate points (--pairs > 0) require --genus 0");
    }
    let max = max_pairs(&poly);
    if pairs.1 > max {
        return Outcome::usage(format!("--pairs {} exceeds the maximum {max} for {spec}", pairs.1));
    }
    let table = match open_table(&cfg.cache) {
        Ok(t) => t,
        Err(e) => return Outcome::failure(e),
    };
    let shape = Shape::Polygon(poly.clone());
    let mut records = Vec::new();
    for g in genus.0..=genus.1 {
        for s in pairs.0..=pairs.1 {
            let entry = if s == 0 {
                table.refined_invariant(&shape, g).map(|value| invariants::Entry { value, extrapolated: false })
            } else {
                table.refined_descendant(&shape, s)
            };
            let entry = match entry {
                Ok(e) => e,
                Err(e) => return Outcome::failure(e),
            };
            let gw = entry.value.evaluate(1).expect("integer evaluation at 1");
            let welschinger = (g == 0).then(|| match entry.value.evaluate(-1) {
                Ok(w) => w.to_string(),
                Err(e) => e.to_string(),
            });
            let diagrams = (list && s == 0).then(|| floordiag::diagram_reports(&poly, g));
            let trace = if trace && s > 0 {
                match table.recursion_trace(&shape, s) {
                    Ok(t) => Some(t),
                    Err(e) => return Outcome::failure(e),
                }
            } else {
                None
            };
            records.push(ComputeRecord {
                polygon: spec.to_string(),
                vertices: poly.vertices().to_vec(),
                genus: g,
                pairs: s,
                invariant: entry.value,
                extrapolated: entry.extrapolated,
                gw,
                welschinger,
                diagrams,
                trace,
            });
        }
    }
    let stdout = match cfg.emit {
        Emit::Json => serde_json::to_string_pretty(&records).expect("records serialize") + "\n",
        Emit::Csv => compute_csv(&records),
        Emit::Text => compute_text(&records),
    };
    Outcome { code: EXIT_OK, stdout, stderr: String::new() }
}

fn compute_csv(records: &[ComputeRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["polygon", "genus", "s", "exponent", "coefficient"]).unwrap();
    for r in records {
        for (e2, c) in r.invariant.half_terms() {
            let exponent = if e2 % 2 == 0 { (e2 / 2).to_string() } else { format!("{e2}/2") };
            w.write_record([r.polygon.clone(), r.genus.to_string(), r.pairs.to_string(), exponent, c.to_string()])
                .unwrap();
        }
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

fn compute_text(records: &[ComputeRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let flag = if r.extrapolated { "  [extrapolated]" } else { "" };
        writeln!(out, "{} g={} s={}: {}{flag}", r.polygon, r.genus, r.pairs, r.invariant).unwrap();
        match &r.welschinger {
            Some(w) => writeln!(out, "  q=1: {}  q=-1: {w}", r.gw).unwrap(),
            None => writeln!(out, "  q=1: {}", r.gw).unwrap(),
        }
        for d in r.diagrams.iter().flatten() {
            let elev: Vec<String> =
                d.diagram.elevators.iter().map(|e| format!("{}->{}:{}", e.from, e.to, e.weight)).collect();
            writeln!(
                out,
                "  diagram div={:?} elevators=[{}] ends={:?}/{:?}  mult={}  markings={}",
                d.diagram.divergences(),
                elev.join(" "),
                d.diagram.bottom_ends,
                d.diagram.top_ends,
                d.multiplicity,
                d.markings
            )
            .unwrap();
        }
        for t in r.trace.iter().flatten() {
            let range = if t.within_range { "" } else { "  [outside proven range]" };
            writeln!(out, "  {}{} s={}: {}  <- {}{range}", "  ".repeat(t.depth), t.node, t.pairs, t.value, t.rule)
                .unwrap();
        }
    }
    out
}

fn corpus_squares() -> Vec<(i64, i64)> {
    vec![(2, 2), (2, 4), (4, 2), (3, 3)]
}

/// Polygons for which recursion checks run, with the largest `s` the
/// engine reaches: the appendix rectangles, plane triangles of degree 3 and
/// 4, and the Σ₂ trapezoids. Σ₂(3,0) has no admissible corner past `s = 2`.
fn recursion_corpus() -> Vec<(String, Shape, u32)> {
    let mut v: Vec<(String, Shape, u32)> = corpus_squares()
        .into_iter()
        .map(|(a, b)| {
            let shape = surgery::quadric_shape(a, b);
            let top = max_pairs(shape.polygon().unwrap());
            (format!("rect:{a},{b}"), shape, top)
        })
        .collect();
    for d in [3, 4] {
        let p = HPolygon::p2(d).unwrap();
        let top = max_pairs(&p);
        v.push((format!("p2:{d}"), p.into(), top));
    }
    for (a, b, top) in [(2, 0, 3), (2, 2, 5), (3, 0, 2)] {
        v.push((format!("sigma2:{a},{b}"), surgery::sigma2_shape(a, b), top));
    }
    v
}

/// Runs one identity suite and returns its report.
pub fn identity_report(id: Identity, max: i64, strict: bool, table: &InvariantTable) -> Report {
    let mut r = Report::new(id.name());
    match id {
        Identity::UInversion => {
            for m in 0..=max {
                r.checks.extend(surgery::check_u_inversion(m, max).checks);
            }
        }
        Identity::MainProof => {
            for l in 0..=max {
                for b in 0..=l {
                    r.push(surgery::check_mainproof_coeffs(l, b));
                }
            }
        }
        Identity::ConjQuadric => {
            for c in appendix::conjecture_instances(&Fixtures::builtin(), table) {
                match c {
                    Ok(c) => {
                        let s = c.pairs.map(|s| format!(" s={s}")).unwrap_or_default();
                        let src = match c.lhs_source {
                            surgery::LhsSource::Computed => "computed",
                            surgery::LhsSource::Fixture => "fixture",
                        };
                        r.push(Check::new(format!("({},{}) g={}{s} lhs={src}", c.a, c.b, c.genus), &c.lhs, &c.rhs));
                    }
                    Err(e) => r.push(Check::new(e, "value", "error")),
                }
            }
        }
        Identity::Symmetry => {
            for (a, b) in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4)] {
                let (p, q) = (surgery::quadric_shape(a, b), surgery::quadric_shape(b, a));
                let top = (a - 1) * (b - 1);
                for g in 0..=top as u32 {
                    let x = table.refined_invariant(&p, g).unwrap();
                    let y = table.refined_invariant(&q, g).unwrap();
                    r.push(Check::new(format!("□({a},{b}) vs □({b},{a}) g={g}"), x, y));
                }
                for s in 1..=max_pairs(p.polygon().unwrap()) {
                    let x = table.refined_descendant(&p, s).unwrap().value;
                    let y = table.refined_descendant(&q, s).unwrap().value;
                    r.push(Check::new(format!("□({a},{b}) vs □({b},{a}) s={s}"), x, y));
                }
            }
        }
        Identity::MonotoneS => {
            let shapes = [
                ("rect:2,4", surgery::quadric_shape(2, 4)),
                ("rect:3,3", surgery::quadric_shape(3, 3)),
                ("p2:3", HPolygon::p2(3).unwrap().into()),
                ("p2:4", HPolygon::p2(4).unwrap().into()),
            ];
            for (name, shape) in shapes {
                let top = max_pairs(shape.polygon().unwrap());
                let vals: Vec<LaurentPoly> =
                    (0..=top).map(|s| table.refined_descendant(&shape, s).unwrap().value).collect();
                let lo = vals[0].min_half_exponent().unwrap_or(0);
                let hi = vals[0].max_half_exponent().unwrap_or(0);
                for e2 in (lo..=hi).step_by(2) {
                    let coeffs: Vec<_> = vals.iter().map(|v| v.half_coeff(e2)).collect();
                    let ok = coeffs.windows(2).all(|w| w[0] >= w[1]) && coeffs.last().is_some_and(|c| c.sign() == num_bigint::Sign::Plus);
                    let shown: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
                    let mut c = Check::new(format!("{name} degree {}", e2 / 2), "nonincreasing and positive", shown.join(" >= "));
                    c.pass = ok;
                    r.push(c);
                }
            }
        }
        Identity::CutIndependence => {
            for (name, shape, top) in recursion_corpus() {
                for s in 1..=top {
                    let sweep = match table.corner_sweep(&shape, s) {
                        Ok(v) => v,
                        Err(e) => {
                            r.push(Check::new(format!("{name} s={s}"), "sweep", e));
                            continue;
                        }
                    };
                    if sweep.len() < 2 {
                        continue;
                    }
                    let first = &sweep[0].1.value;
                    for (corner, e) in &sweep[1..] {
                        r.push(Check::new(format!("{name} s={s} corner {:?} vs {corner:?}", sweep[0].0), first, &e.value));
                    }
                }
            }
        }
        Identity::WelRecursion => {
            for (name, shape, top) in recursion_corpus() {
                for s in 1..=top {
                    let step = table.refined_descendant(&shape, s).and_then(|now| {
                        let prev = table.refined_descendant(&shape, s - 1)?;
                        let term = table.blow_up_term(&shape, s)?;
                        Ok((now, prev, term))
                    });
                    let (now, prev, term) = match step {
                        Ok(x) => x,
                        Err(e) => {
                            r.push(Check::new(format!("{name} s={s}"), "value", e));
                            continue;
                        }
                    };
                    let w = |p: &LaurentPoly| p.evaluate(-1).unwrap();
                    let expected = w(&prev.value) - w(&term.value) * 2;
                    r.push(Check::new(format!("{name} W(s={s}) = W(s={}) - 2 W(blow-up)", s - 1), expected, w(&now.value)));
                }
            }
        }
        Identity::P2Coefficient => {
            for d in [3i64, 4] {
                let shape: Shape = HPolygon::p2(d).unwrap().into();
                let degree = (d - 1) * (d - 2) / 2 - 1;
                for s in 0..=max_pairs(shape.polygon().unwrap()) {
                    let v = table.refined_descendant(&shape, s).unwrap().value;
                    r.push(Check::new(format!("P2 d={d} s={s} degree {degree}"), 3 * d + 1 - 2 * s as i64, v.coeff(degree)));
                }
            }
        }
        Identity::Increase => {
            let lattice = ClassLattice::quadric();
            let sphere = lattice.get("S").unwrap().clone();
            let mut t = NumberTable::new();
            for p in 0..=5i64 {
                for q in 0..=5 - p {
                    let w = table.welschinger_value(&surgery::quadric_shape(p, q), 0).unwrap();
                    t.insert(vec![p, q], w);
                }
            }
            let mode = if strict { MissingKeys::Strict } else { MissingKeys::Lenient };
            match surgery::check_increase(&t, &lattice, &sphere, mode) {
                Ok(rows) => {
                    for row in rows {
                        let mut c = Check::new(format!("d={:?}", row.class), format!("|{}| or more", row.before), &row.after);
                        c.pass = row.holds;
                        r.push(c);
                    }
                }
                Err(e) => r.push(Check::new("transform", "complete table", e)),
            }
        }
    }
    r
}

#[derive(Serialize)]
struct VerifyOutput {
    passed: bool,
    reports: Vec<Report>,
    #[serde(skip_serializing_if = "Option::is_none")]
    appendix: Option<appendix::ReplayReport>,
}

fn run_verify(cfg: &RunConfig, identities: &[Identity], max: i64, with_appendix: bool) -> Outcome {
    if max < 0 {
        return Outcome::usage("--max must be nonnegative");
    }
    let table = match open_table(&cfg.cache) {
        Ok(t) => t,
        Err(e) => return Outcome::failure(e),
    };
    let reports: Vec<Report> = identities.iter().map(|&id| identity_report(id, max, cfg.strict, &table)).collect();
    let replay = with_appendix.then(|| appendix::replay(&Fixtures::builtin(), &table, &Filter::default()));
    let passed = reports.iter().all(Report::passed) && replay.as_ref().is_none_or(|r| r.passed());
    let stdout = match cfg.emit {
        Emit::Json | Emit::Csv => {
            let out = VerifyOutput { passed, reports, appendix: replay };
            serde_json::to_string_pretty(&out).expect("report serializes") + "\n"
        }
        Emit::Text => {
            let mut out = String::new();
            for r in &reports {
                let fails: Vec<&Check> = r.failures().collect();
                let status = if fails.is_empty() { "PASS" } else { "FAIL" };
                writeln!(out, "{status} {} ({} checks, {} failed)", r.name, r.checks.len(), fails.len()).unwrap();
                for c in fails {
                    writeln!(out, "  {}: expected {}, got {}", c.instance, c.expected, c.actual).unwrap();
                }
            }
            if let Some(rep) = &replay {
                out.push_str(&replay_text(rep));
            }
            out
        }
    };
    Outcome { code: if passed { EXIT_OK } else { EXIT_FAIL }, stdout, stderr: String::new() }
}

fn replay_text(rep: &appendix::ReplayReport) -> String {
    let mut out = String::new();
    let failed = rep.failures().count();
    let status = if failed == 0 { "PASS" } else { "FAIL" };
    writeln!(out, "{status} appendix ({} rows, {failed} failed)", rep.rows.len()).unwrap();
    for row in &rep.rows {
        let mark = if row.pass { "ok  " } else { "FAIL" };
        let flag = if row.extrapolated { " [extrapolated]" } else { "" };
        writeln!(out, "  {mark} {}{flag}", row.fixture).unwrap();
        if let Some(e) = &row.error {
            writeln!(out, "       error: {e}").unwrap();
        }
        for d in &row.diffs {
            writeln!(out, "       q^{}: expected {}, computed {}", d.exponent, d.expected, d.computed).unwrap();
        }
    }
    out
}

fn run_appendix(cfg: &RunConfig, min_genus: Option<u32>, surface: Option<Surface>, fixtures: Option<&Path>) -> Outcome {
    let fx = match fixtures {
        Some(p) => match Fixtures::load(p) {
            Ok(f) => f,
            Err(e) => return Outcome::usage(e),
        },
        None => Fixtures::builtin(),
    };
    let table = match open_table(&cfg.cache) {
        Ok(t) => t,
        Err(e) => return Outcome::failure(e),
    };
    let rep = appendix::replay(&fx, &table, &Filter { min_genus, surface });
    let stdout = match cfg.emit {
        Emit::Json | Emit::Csv => serde_json::to_string_pretty(&rep).expect("report serializes") + "\n",
        Emit::Text => replay_text(&rep),
    };
    Outcome { code: if rep.passed() { EXIT_OK } else { EXIT_FAIL }, stdout, stderr: String::new() }
}

#[derive(Serialize)]
struct CacheStats {
    path: String,
    records: usize,
    stale: usize,
}

fn run_cache(cfg: &RunConfig, action: CacheAction) -> Outcome {
    let path = match cfg.cache.clone().or_else(|| std::env::var_os(invariants::CACHE_ENV).map(PathBuf::from)) {
        Some(p) => p,
        None => return Outcome::usage(format!("no cache file: pass --cache or set {}", invariants::CACHE_ENV)),
    };
    match action {
        CacheAction::Stats => match invariants::read_records(&path) {
            Ok((records, stale)) => {
                let stats = CacheStats { path: path.display().to_string(), records: records.len(), stale };
                let stdout = match cfg.emit {
                    Emit::Text => format!("{}: {} records, {} from other engine versions\n", stats.path, stats.records, stats.stale),
                    _ => serde_json::to_string_pretty(&stats).unwrap() + "\n",
                };
                Outcome { code: EXIT_OK, stdout, stderr: String::new() }
            }
            Err(e) => Outcome::failure(e),
        },
        CacheAction::Verify => match invariants::verify_file(&path) {
            Ok(rep) => {
                let mut stdout = format!(
                    "{}: {} checked, {} stale, {} mismatches\n",
                    path.display(),
                    rep.checked,
                    rep.stale,
                    rep.mismatches.len()
                );
                for m in &rep.mismatches {
                    writeln!(stdout, "  {m}").unwrap();
                }
                Outcome { code: if rep.is_clean() { EXIT_OK } else { EXIT_FAIL }, stdout, stderr: String::new() }
            }
            Err(e) => Outcome::failure(e),
        },
    }
}
