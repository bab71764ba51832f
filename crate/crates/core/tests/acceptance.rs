//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Rows listed in `KNOWN` are reference values the engine does not
//! reproduce. They are printed as failures; the process exits nonzero if
//! any other row fails or if a known row starts passing.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use tropref::appendix::{self, Fixtures, Surface};
use tropref::floordiag;
use tropref::invariants::{max_pairs, InvariantTable};
use tropref::laurent::LaurentPoly;
use tropref::polygon::{HPolygon, Shape};
use tropref::surgery::{self, LhsSource};

const KNOWN: &[(u32, &str)] = &[(2, "QH (2,4) g=0 s=5"), (3, "(2,2) g=0 s=5")];

type Criterion<'a> = (u32, &'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    failures: Vec<String>,
    summary: String,
}

impl Outcome {
    fn new() -> Self {
        Self { failures: Vec::new(), summary: String::new() }
    }

    fn check(&mut self, label: impl Into<String>, ok: bool, detail: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(format!("{}: {}", label.into(), detail()));
        }
    }

    fn time_limit(&mut self, what: &str, took: Duration, limit: Duration) {
        self.check(format!("time {what}"), took <= limit, || format!("{took:?} > {limit:?}"));
    }
}

fn replay_rows(table: &InvariantTable, keep: impl Fn(&appendix::AppendixFixture) -> bool) -> (Outcome, usize) {
    let fx = Fixtures::builtin();
    let mut out = Outcome::new();
    let mut n = 0;
    for f in fx.entries().iter().filter(|f| keep(f)) {
        n += 1;
        let start = Instant::now();
        let computed = match f.pairs {
            Some(s) if s > 0 => table.refined_descendant(&f.shape(), s).map(|e| e.value),
            _ => table.refined_invariant(&f.shape(), f.genus),
        };
        let took = start.elapsed();
        match computed {
            Ok(v) => {
                let diffs = appendix::coefficient_diff(&f.value, &v);
                out.check(f.label(), diffs.is_empty(), || {
                    diffs.iter().map(|d| format!("q^{} expected {} computed {}", d.exponent, d.expected, d.computed)).collect::<Vec<_>>().join(", ")
                });
            }
            Err(e) => out.check(f.label(), false, || e.to_string()),
        }
        if f.pairs.is_none() {
            out.time_limit(&f.label(), took, Duration::from_secs(10));
        }
    }
    (out, n)
}

fn appendix_genus_tables(table: &InvariantTable) -> Outcome {
    let (mut out, n) = replay_rows(table, |f| f.pairs.is_none());
    out.summary = format!("{n} genus rows, floor diagrams only");
    out
}

fn appendix_pair_tables(table: &InvariantTable) -> Outcome {
    let start = Instant::now();
    let (mut out, n) = replay_rows(table, |f| f.surface == Surface::QH && f.pairs.is_some());
    out.time_limit("all s-rows", start.elapsed(), Duration::from_secs(60));
    let extrapolated = Fixtures::builtin()
        .entries()
        .iter()
        .filter(|f| f.surface == Surface::QH && f.pairs.is_some_and(|s| s > 0))
        .filter(|f| table.refined_descendant(&f.shape(), f.pairs.unwrap()).is_ok_and(|e| e.extrapolated))
        .count();
    out.summary = format!("{n} rows, {extrapolated} extrapolated");
    out
}

fn conjecture_instances(table: &InvariantTable) -> Outcome {
    let mut out = Outcome::new();
    let reports = appendix::conjecture_instances(&Fixtures::builtin(), table);
    let mut fixture_lhs = 0;
    for r in &reports {
        match r {
            Ok(c) => {
                let label = match c.pairs {
                    Some(s) => format!("({},{}) g={} s={s}", c.a, c.b, c.genus),
                    None => format!("({},{}) g={}", c.a, c.b, c.genus),
                };
                if c.lhs_source == LhsSource::Fixture {
                    fixture_lhs += 1;
                }
                out.check(label, c.pass, || format!("lhs {} rhs {}", c.lhs, c.rhs));
            }
            Err(e) => out.check("instance", false, || e.clone()),
        }
    }
    out.summary = format!("{} instances, {fixture_lhs} with tabulated left side", reports.len());
    out
}

fn hand_check() -> Outcome {
    let mut out = Outcome::new();
    let poly = HPolygon::rectangle(2, 2).unwrap();
    let mut got: Vec<(String, u128)> =
        floordiag::diagram_reports(&poly, 0).into_iter().map(|r| (r.multiplicity.to_string(), r.markings)).collect();
    got.sort();
    let want = vec![("1".to_string(), 4), ("1".to_string(), 4), ("q^-1 + 2 + q".to_string(), 1)];
    out.check("square (2,2) diagrams", got == want, || format!("{got:?}"));
    let total = floordiag::refined_invariant(&poly.into(), 0);
    out.check("square (2,2) total", total.to_string() == "q^-1 + 10 + q", || total.to_string());
    out.summary = "3 diagrams: (q^-1 + 2 + q) x 1, 1 x 4, 1 x 4".into();
    out
}

fn identity_suites() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    for m in 0..=12 {
        for c in surgery::check_u_inversion(m, 12).checks {
            out.check(format!("u-inversion {}", c.instance), c.pass, || format!("expected {} got {}", c.expected, c.actual));
        }
    }
    let mut n = 0;
    for l in 0..=12 {
        for b in 0..=l {
            n += 1;
            let c = surgery::check_mainproof_coeffs(l, b);
            out.check(format!("main-proof {}", c.instance), c.pass, || format!("expected {} got {}", c.expected, c.actual));
            let want = if l == b { BigInt::from(-2).pow(l as u32) } else { BigInt::from(0) };
            let got = surgery::mainproof_sum(l, b);
            out.check(format!("main-proof closed form l={l} b={b}"), got == want, || got.to_string());
        }
    }
    out.time_limit("identities", start.elapsed(), Duration::from_secs(1));
    out.summary = format!("u-inversion m,N <= 12; {n} main-proof sums");
    out
}

fn evaluations(table: &InvariantTable) -> Outcome {
    let mut out = Outcome::new();
    let n = |shape: &Shape| table.gw_value(shape, 0).unwrap();
    for (name, shape, want) in [
        ("P2 d=3", Shape::from(HPolygon::p2(3).unwrap()), 12),
        ("square (2,2)", surgery::quadric_shape(2, 2), 12),
        ("square (3,3)", surgery::quadric_shape(3, 3), 3510),
    ] {
        let got = n(&shape);
        out.check(format!("{name} at q=1"), got == BigInt::from(want), || got.to_string());
    }
    // Welschinger numbers of the plane with s conjugate pairs
    for (d, want) in [(3, vec![8, 6, 4, 2, 0]), (4, vec![240, 144, 80, 40, 16, 0])] {
        let shape: Shape = HPolygon::p2(d).unwrap().into();
        for (s, w) in want.into_iter().enumerate() {
            let got = table.welschinger_value(&shape, s as u32).unwrap();
            out.check(format!("W(P2 d={d}; s={s})"), got == BigInt::from(w), || got.to_string());
        }
    }
    let mut steps = 0;
    let shapes: Vec<Shape> = vec![
        surgery::quadric_shape(2, 2),
        surgery::quadric_shape(2, 4),
        surgery::quadric_shape(3, 3),
        HPolygon::p2(3).unwrap().into(),
        HPolygon::p2(4).unwrap().into(),
    ];
    for shape in &shapes {
        let poly = shape.polygon().unwrap();
        for s in 1..=max_pairs(poly) {
            steps += 1;
            let w = |v: &LaurentPoly| v.evaluate(-1).unwrap();
            let now = w(&table.refined_descendant(shape, s).unwrap().value);
            let prev = w(&table.refined_descendant(shape, s - 1).unwrap().value);
            let blown = w(&table.blow_up_term(shape, s).unwrap().value);
            out.check(format!("W recursion {:?} s={s}", poly.vertices()), now == &prev - &blown * 2, || {
                format!("{now} vs {prev} - 2*{blown}")
            });
        }
    }
    out.summary = format!("3 values at q=1, 11 plane Welschinger numbers, {steps} recursion steps at q=-1");
    out
}

fn properties(table: &InvariantTable) -> Outcome {
    let mut out = Outcome::new();
    for (a, b) in [(1, 3), (2, 3), (2, 4), (1, 5)] {
        let (p, q) = (surgery::quadric_shape(a, b), surgery::quadric_shape(b, a));
        for g in 0..=((a - 1) * (b - 1)) as u32 {
            let x = table.refined_invariant(&p, g).unwrap();
            let y = table.refined_invariant(&q, g).unwrap();
            out.check(format!("transpose ({a},{b}) g={g}"), x == y, || format!("{x} vs {y}"));
        }
    }
    let mut sweeps = 0;
    let corpus: Vec<(Shape, u32)> = vec![
        (surgery::quadric_shape(2, 2), 3),
        (surgery::quadric_shape(2, 4), 5),
        (surgery::quadric_shape(3, 3), 5),
        (surgery::sigma2_shape(2, 0), 3),
        (surgery::sigma2_shape(2, 2), 5),
        (surgery::sigma2_shape(3, 0), 2),
    ];
    for (shape, top) in &corpus {
        for s in 1..=*top {
            let sweep = table.corner_sweep(shape, s).unwrap();
            if sweep.len() >= 2 {
                sweeps += 1;
                let first = &sweep[0].1.value;
                for (corner, e) in &sweep[1..] {
                    out.check(format!("corner {corner:?} of {shape:?} s={s}"), &e.value == first, || format!("{} vs {first}", e.value));
                }
            }
        }
    }
    for (a, b) in [(2, 4), (3, 3)] {
        let shape = surgery::quadric_shape(a, b);
        let vals: Vec<LaurentPoly> = (0..=5).map(|s| table.refined_descendant(&shape, s).unwrap().value).collect();
        for e in -4..=4 {
            let c: Vec<BigInt> = vals.iter().map(|v| v.coeff(e)).collect();
            out.check(format!("monotone ({a},{b}) q^{e}"), c.windows(2).all(|w| w[0] >= w[1]), || format!("{c:?}"));
        }
    }
    for d in [3i64, 4] {
        let shape: Shape = HPolygon::p2(d).unwrap().into();
        let e = (d - 1) * (d - 2) / 2 - 1;
        for s in 0..=max_pairs(shape.polygon().unwrap()) {
            let got = table.refined_descendant(&shape, s).unwrap().value.coeff(e);
            out.check(format!("P2 d={d} s={s} q^{e}"), got == BigInt::from(3 * d + 1 - 2 * s as i64), || got.to_string());
        }
    }
    let snapshot = table.snapshot();
    for (key, entry) in &snapshot {
        let v = &entry.value;
        out.check(format!("{key}"), v.is_palindromic() && v.has_nonnegative_coefficients(), || v.to_string());
    }
    out.summary = format!("{} computed invariants, {sweeps} corner sweeps", snapshot.len());
    out
}

fn substitution(table: &InvariantTable) -> Outcome {
    let mut out = Outcome::new();
    // the geometric theorems are exercised through their combinatorial
    // consequences: the transfer identities and the genus rows of the
    // quadric conjecture, where both sides come from floor diagrams
    let mut n = 0;
    for (a, b, g) in [(1, 0, 0), (1, 4, 0), (2, 0, 0), (2, 0, 1), (2, 1, 0), (2, 2, 0), (2, 2, 1), (2, 2, 3), (3, 0, 0), (3, 0, 2), (3, 0, 4)] {
        n += 1;
        let r = surgery::check_conjecture_quadric(table, a, b, g, None, None).unwrap();
        out.check(format!("quadric relation ({a},{b}) g={g}"), r.pass, || format!("{} vs {}", r.lhs, r.rhs));
    }
    out.summary = format!("{n} computed-vs-computed instances; theorems replaced by identity and property suites");
    out
}

fn main() {
    let table = InvariantTable::new();
    let criteria: Vec<Criterion> = vec![
        (1, "appendix genus tables", Box::new(|| appendix_genus_tables(&table))),
        (2, "appendix tables with conjugate pairs", Box::new(|| appendix_pair_tables(&table))),
        (3, "quadric conjecture instances", Box::new(|| conjecture_instances(&table))),
        (4, "worked diagram decomposition", Box::new(hand_check)),
        (5, "identity suites", Box::new(identity_suites)),
        (6, "evaluations at q = 1 and q = -1", Box::new(|| evaluations(&table))),
        (7, "property suites", Box::new(|| properties(&table))),
        (8, "desk-scale substitution", Box::new(|| substitution(&table))),
    ];
    let mut unexpected = Vec::new();
    for (id, title, run) in &criteria {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let status = if out.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("{status} criterion {id}: {title} ({}; {:.2?})", out.summary, took);
        let known: BTreeSet<&str> = KNOWN.iter().filter(|(k, _)| k == id).map(|(_, l)| *l).collect();
        for f in &out.failures {
            let is_known = known.iter().any(|k| f.starts_with(&format!("{k}:")));
            println!("    {f}{}", if is_known { "  [known discrepancy]" } else { "" });
            if !is_known {
                unexpected.push(format!("criterion {id}: {f}"));
            }
        }
        for k in known {
            if !out.failures.iter().any(|f| f.starts_with(&format!("{k}:"))) {
                unexpected.push(format!("criterion {id}: known discrepancy {k} no longer fails; update KNOWN"));
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected results:");
        for u in &unexpected {
            eprintln!("  {u}");
        }
        std::process::exit(1);
    }
}
