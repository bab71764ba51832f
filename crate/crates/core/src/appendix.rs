//! Golden tables of refined invariants, stored as data, and their replay
//! against the engine.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::invariants::InvariantTable;
use crate::laurent::{serialize_bigint, LaurentPoly};
use crate::polygon::Shape;
use crate::surgery::{self, ConjectureReport};

const BUILTIN: &str = include_str!("../data/reference_tables.toml");

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("fixture file: {0}")]
    Io(#[from] std::io::Error),
    #[error("fixture file: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("entry {index}: bad value {value:?}: {message}")]
    Value { index: usize, value: String, message: String },
    #[error("entry {index}: pairs given with genus {genus}")]
    PairsWithGenus { index: usize, genus: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Surface {
    QH,
    Sigma2,
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Surface::QH => "QH",
            Surface::Sigma2 => "Sigma2",
        })
    }
}

#[derive(Deserialize)]
struct RawFile {
    entry: Vec<RawEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    surface: Surface,
    a: i64,
    b: i64,
    genus: u32,
    pairs: Option<u32>,
    value: String,
    source: String,
    note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AppendixFixture {
    pub surface: Surface,
    pub a: i64,
    pub b: i64,
    pub genus: u32,
    pub pairs: Option<u32>,
    pub value: LaurentPoly,
    pub source: String,
    pub note: Option<String>,
}

impl AppendixFixture {
    pub fn shape(&self) -> Shape {
        match self.surface {
            Surface::QH => surgery::quadric_shape(self.a, self.b),
            Surface::Sigma2 => surgery::sigma2_shape(self.a, self.b),
        }
    }

    pub fn label(&self) -> String {
        let mut s = format!("{} ({},{}) g={}", self.surface, self.a, self.b, self.genus);
        if let Some(p) = self.pairs {
            s.push_str(&format!(" s={p}"));
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixtures {
    entries: Vec<AppendixFixture>,
}

impl Fixtures {
    /// The tables shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN).expect("bundled fixtures parse")
    }

    pub fn load(path: &Path) -> Result<Self, FixtureError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self, FixtureError> {
        let raw: RawFile = toml::from_str(text)?;
        let entries = raw
            .entry
            .into_iter()
            .enumerate()
            .map(|(index, e)| {
                if e.pairs.is_some() && e.genus != 0 {
                    return Err(FixtureError::PairsWithGenus { index, genus: e.genus });
                }
                let value = e.value.parse().map_err(|err: crate::laurent::LaurentError| FixtureError::Value {
                    index,
                    value: e.value.clone(),
                    message: err.to_string(),
                })?;
                Ok(AppendixFixture {
                    surface: e.surface,
                    a: e.a,
                    b: e.b,
                    genus: e.genus,
                    pairs: e.pairs,
                    value,
                    source: e.source,
                    note: e.note,
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[AppendixFixture] {
        &self.entries
    }

    pub fn find(&self, surface: Surface, a: i64, b: i64, genus: u32, pairs: Option<u32>) -> Option<&AppendixFixture> {
        self.entries.iter().find(|f| {
            f.surface == surface && f.a == a && f.b == b && f.genus == genus && f.pairs.unwrap_or(0) == pairs.unwrap_or(0)
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct Filter {
    pub min_genus: Option<u32>,
    pub surface: Option<Surface>,
}

impl Filter {
    fn keeps(&self, f: &AppendixFixture) -> bool {
        self.min_genus.is_none_or(|g| f.genus >= g) && self.surface.is_none_or(|s| f.surface == s)
    }
}

/// A coefficient where expected and computed disagree; `exponent` is
/// printed as in the polynomial syntax (`-1`, `0`, `1/2`, ...).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoeffDiff {
    pub exponent: String,
    #[serde(serialize_with = "serialize_bigint")]
    pub expected: BigInt,
    #[serde(serialize_with = "serialize_bigint")]
    pub computed: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayRow {
    pub fixture: String,
    pub expected: LaurentPoly,
    pub computed: Option<LaurentPoly>,
    pub error: Option<String>,
    pub extrapolated: bool,
    pub diffs: Vec<CoeffDiff>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    pub rows: Vec<ReplayRow>,
}

impl ReplayReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReplayRow> {
        self.rows.iter().filter(|r| !r.pass)
    }
}

fn half_exponent(e2: i64) -> String {
    if e2 % 2 == 0 {
        (e2 / 2).to_string()
    } else {
        format!("{e2}/2")
    }
}

pub fn coefficient_diff(expected: &LaurentPoly, computed: &LaurentPoly) -> Vec<CoeffDiff> {
    let exps: BTreeSet<i64> = expected.half_terms().chain(computed.half_terms()).map(|(e, _)| e).collect();
    exps.into_iter()
        .filter_map(|e2| {
            let (x, y) = (expected.half_coeff(e2), computed.half_coeff(e2));
            (x != y).then(|| CoeffDiff { exponent: half_exponent(e2), expected: x, computed: y })
        })
        .collect()
}

/// Recomputes every selected fixture and diffs it.
pub fn replay(fixtures: &Fixtures, table: &InvariantTable, filter: &Filter) -> ReplayReport {
    let rows = fixtures
        .entries()
        .par_iter()
        .filter(|f| filter.keeps(f))
        .map(|f| {
            let shape = f.shape();
            let computed = match f.pairs {
                Some(s) if s > 0 => table.refined_descendant(&shape, s).map(|e| (e.value, e.extrapolated)),
                _ => table.refined_invariant(&shape, f.genus).map(|v| (v, false)),
            };
            match computed {
                Ok((value, extrapolated)) => {
                    let diffs = coefficient_diff(&f.value, &value);
                    ReplayRow {
                        fixture: f.label(),
                        expected: f.value.clone(),
                        pass: diffs.is_empty(),
                        computed: Some(value),
                        error: None,
                        extrapolated,
                        diffs,
                    }
                }
                Err(e) => ReplayRow {
                    fixture: f.label(),
                    expected: f.value.clone(),
                    computed: None,
                    error: Some(e.to_string()),
                    extrapolated: false,
                    diffs: Vec::new(),
                    pass: false,
                },
            }
        })
        .collect();
    ReplayReport { rows }
}

/// Quadric-conjecture instances for every Σ₂ fixture: genus rows and
/// `s = 0` take the left side from floor diagrams, `s > 0` rows from the
/// fixture itself.
pub fn conjecture_instances(fixtures: &Fixtures, table: &InvariantTable) -> Vec<Result<ConjectureReport, String>> {
    fixtures
        .entries()
        .par_iter()
        .filter(|f| f.surface == Surface::Sigma2)
        .map(|f| {
            let lhs = f.pairs.filter(|&s| s > 0).map(|_| &f.value);
            surgery::check_conjecture_quadric(table, f.a, f.b, f.genus, f.pairs, lhs)
                .map_err(|e| format!("{}: {e}", f.label()))
        })
        .collect()
}
