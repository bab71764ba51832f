//! Invariant tables keyed by `(polygon, genus, pairs)`.
//!
//! Genus-`g` values come straight from floor diagrams. Genus-0 values with
//! `s > 0` pairs of conjugate points are obtained from the blow-up recursion
//!
//! ```text
//! G(Δ, 0; s) = G(Δ, 0; s-1) - 2 G(Δ', 0; s-1)
//! ```
//!
//! where `Δ'` is `Δ` with a depth-2 corner removed, i.e. the class `d - 2E`
//! on the toric blow-up at the corresponding fixed point. A corner stands in
//! for a generic blow-up point only if the corner is smooth and neither
//! adjacent boundary curve has negative self-intersection; other corners are
//! never used. When an adjacent edge is too short to fit the cut, the class
//! `d - 2E` pairs negatively with the strict transform of that edge and its
//! invariant vanishes.
//!
//! Toric del Pezzo polygons without such a corner (the hexagon) are blown up
//! generically in the Picard lattice instead; see [`lattice`]. Those values
//! are always flagged as extrapolated.

mod cache;
pub mod lattice;

use std::collections::HashMap;
use std::path::Path;
use std::sync::RwLock;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::floordiag;
use crate::laurent::{LaurentError, LaurentPoly};
use crate::polygon::{HPolygon, Point, PolygonError, Shape};
use lattice::{BlowupClass, Normal};

pub use cache::{read_records, verify_file, CacheFile, CacheRecord, CacheReport, CACHE_ENV, ENGINE_VERSION};

#[derive(Debug, Error)]
pub enum InvariantError {
    #[error("pairs of conjugate points (s = {pairs}) are only supported in genus 0, got genus {genus}")]
    PairsNeedGenusZero { genus: u32, pairs: u32 },
    #[error("s = {pairs} exceeds the maximum {max} for {shape}")]
    TooManyPairs { shape: Shape, pairs: u32, max: u32 },
    #[error("no admissible corner to blow up on {0}")]
    NoAdmissibleCorner(HPolygon),
    #[error("corner {corner:?} of {polygon} is not admissible: {reason}")]
    InadmissibleCorner { polygon: HPolygon, corner: Point, reason: String },
    #[error("s = {pairs} exceeds the maximum {max} for the class {class}")]
    ClassPairs { class: String, pairs: u32, max: u32 },
    #[error("class {0} has no toric model")]
    NonToric(String),
    #[error(transparent)]
    Polygon(#[from] PolygonError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error("cache I/O: {0}")]
    CacheIo(#[from] std::io::Error),
    #[error("cache line {line}: {message}")]
    CacheFormat { line: usize, message: String },
    #[error("cached value for {key} differs from recomputation: cached {cached}, computed {computed}")]
    CacheMismatch { key: InvariantKey, cached: LaurentPoly, computed: LaurentPoly },
}

/// Canonical polygon (or degenerate tag), genus and number of conjugate pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InvariantKey {
    pub shape: Shape,
    pub genus: u32,
    pub pairs: u32,
}

impl InvariantKey {
    /// Validates the key and canonicalizes the polygon.
    pub fn new(shape: &Shape, genus: u32, pairs: u32) -> Result<Self, InvariantError> {
        if pairs > 0 && genus > 0 {
            return Err(InvariantError::PairsNeedGenusZero { genus, pairs });
        }
        if let Shape::Polygon(p) = shape {
            let max = max_pairs(p);
            if pairs > max {
                return Err(InvariantError::TooManyPairs { shape: shape.clone(), pairs, max });
            }
        }
        Ok(Self { shape: shape.canonical(), genus, pairs })
    }
}

impl std::fmt::Display for InvariantKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} g={} s={}", self.shape, self.genus, self.pairs)
    }
}

/// Largest `s` with `2s <= point_count(Δ, 0)`.
pub fn max_pairs(poly: &HPolygon) -> u32 {
    (poly.point_count(0).max(0) / 2) as u32
}

/// A table value and whether its derivation left the range where the
/// blow-up recursion is known to hold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub value: LaurentPoly,
    pub extrapolated: bool,
}

/// What blowing up a corner does to the class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlowUp {
    /// The cut polygon (possibly degenerate).
    Cut(Shape),
    /// An adjacent edge is too short: `d - 2E` has no curves.
    Vanishing,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerOption {
    pub corner: Point,
    pub outcome: Result<BlowUp, String>,
}

impl CornerOption {
    pub fn is_admissible(&self) -> bool {
        self.outcome.is_ok()
    }
}

fn nonnegative(frac: (i64, i64)) -> bool {
    frac.0 >= 0
}

/// Classifies every corner of `poly`, in lexicographic corner order.
pub fn corner_options(poly: &HPolygon) -> Vec<CornerOption> {
    let mut corners = poly.vertices().to_vec();
    corners.sort_unstable();
    corners
        .into_iter()
        .map(|corner| CornerOption { corner, outcome: classify_corner(poly, corner) })
        .collect()
}

fn classify_corner(poly: &HPolygon, corner: Point) -> Result<BlowUp, String> {
    if !poly.is_smooth_corner(corner).map_err(|e| e.to_string())? {
        return Err("singular corner".into());
    }
    let (incoming, i_in, outgoing, i_out) = poly.corner_edges(corner).map_err(|e| e.to_string())?;
    for (edge, idx) in [(incoming, i_in), (outgoing, i_out)] {
        if !nonnegative(poly.edge_self_intersection(idx)) {
            return Err(format!(
                "edge {:?}->{:?} has negative self-intersection",
                edge.from, edge.to
            ));
        }
    }
    if incoming.length < 2 || outgoing.length < 2 {
        return Ok(BlowUp::Vanishing);
    }
    poly.corner_cut(corner).map(BlowUp::Cut).map_err(|e| e.to_string())
}

/// Whether a recursion step on `poly` lies in the proven range: the surface
/// is the quadric, or the plane blown up in at most two points, i.e. a smooth
/// polygon with at most five edges and no edge of self-intersection below -1.
pub fn within_proven_range(poly: &HPolygon) -> bool {
    let n = poly.vertices().len();
    poly.is_smooth() && n <= 5 && (0..n).all(|i| poly.edge_self_intersection(i).0 >= -1)
}

/// One node of a recursion trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub depth: usize,
    /// Polygon or lattice class.
    pub node: String,
    pub pairs: u32,
    pub rule: String,
    pub within_range: bool,
    pub value: LaurentPoly,
}

/// Memoized invariants, optionally persisted to an append-only cache file.
#[derive(Default)]
pub struct InvariantTable {
    entries: RwLock<HashMap<InvariantKey, Entry>>,
    classes: RwLock<HashMap<(BlowupClass, u32), Entry>>,
    cache: Option<CacheFile>,
    verify_hits: bool,
}

impl InvariantTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Table backed by the cache at `path`; existing records are loaded.
    pub fn with_cache(path: impl AsRef<Path>) -> Result<Self, InvariantError> {
        let (cache, records) = CacheFile::open(path.as_ref())?;
        let table = Self { cache: Some(cache), ..Self::default() };
        {
            let mut map = table.entries.write().unwrap();
            for r in records {
                map.insert(r.key(), Entry { value: r.invariant, extrapolated: r.extrapolated });
            }
        }
        Ok(table)
    }

    /// Table backed by the cache named in `TROPREF_CACHE`, if set.
    pub fn from_env() -> Result<Self, InvariantError> {
        match std::env::var_os(CACHE_ENV) {
            Some(p) if !p.is_empty() => Self::with_cache(p),
            _ => Ok(Self::new()),
        }
    }

    /// Recompute every value served from memory and compare.
    pub fn set_verify(&mut self, on: bool) {
        self.verify_hits = on;
    }

    pub fn len(&self) -> usize {
        self.entries.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn snapshot(&self) -> Vec<(InvariantKey, Entry)> {
        let mut v: Vec<_> = self
            .entries
            .read()
            .unwrap()
            .iter()
            .map(|(k, e)| (k.clone(), e.clone()))
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    fn lookup(&self, key: &InvariantKey) -> Option<Entry> {
        self.entries.read().unwrap().get(key).cloned()
    }

    fn insert(&self, key: InvariantKey, entry: Entry) -> Result<Entry, InvariantError> {
        let mut map = self.entries.write().unwrap();
        if let Some(old) = map.get(&key) {
            if old.value != entry.value {
                return Err(InvariantError::CacheMismatch {
                    key,
                    cached: old.value.clone(),
                    computed: entry.value,
                });
            }
            return Ok(old.clone());
        }
        if let Some(cache) = &self.cache {
            cache.append(&CacheRecord::new(&key, &entry))?;
        }
        map.insert(key, entry.clone());
        Ok(entry)
    }

    /// `G(Δ, g)` by floor diagrams.
    pub fn refined_invariant(&self, shape: &Shape, genus: u32) -> Result<LaurentPoly, InvariantError> {
        let key = InvariantKey::new(shape, genus, 0)?;
        if let Some(hit) = self.lookup(&key) {
            if self.verify_hits {
                let fresh = floordiag::refined_invariant(&key.shape, genus);
                if fresh != hit.value {
                    return Err(InvariantError::CacheMismatch { key, cached: hit.value, computed: fresh });
                }
            }
            return Ok(hit.value);
        }
        let value = floordiag::refined_invariant(&key.shape, genus);
        Ok(self.insert(key, Entry { value, extrapolated: false })?.value)
    }

    /// `G(Δ, 0; s)` through the blow-up recursion, default corner choice.
    pub fn refined_descendant(&self, shape: &Shape, pairs: u32) -> Result<Entry, InvariantError> {
        let key = InvariantKey::new(shape, 0, pairs)?;
        if pairs == 0 {
            let value = self.refined_invariant(&key.shape, 0)?;
            return Ok(Entry { value, extrapolated: false });
        }
        if let Some(hit) = self.lookup(&key) {
            if !self.verify_hits {
                return Ok(hit);
            }
        }
        let entry = match key.shape.polygon() {
            None => Entry { value: LaurentPoly::zero(), extrapolated: false },
            Some(poly) => {
                let prev = self.refined_descendant(&key.shape, pairs - 1)?;
                let term = self.blow_up_term(&key.shape, pairs)?;
                Entry {
                    value: &prev.value - &term.value.scale(&BigInt::from(2)),
                    extrapolated: prev.extrapolated || term.extrapolated || !within_proven_range(poly),
                }
            }
        };
        self.insert(key, entry)
    }

    /// The subtracted term `G(X~, d - 2E; s - 1)` of the step that computes
    /// `G(Δ, 0; s)`, through the default corner or the lattice fallback.
    pub fn blow_up_term(&self, shape: &Shape, pairs: u32) -> Result<Entry, InvariantError> {
        let key = InvariantKey::new(shape, 0, pairs)?;
        let poly = match (key.shape.polygon(), pairs) {
            (Some(p), s) if s > 0 => p,
            _ => return Ok(Entry { value: LaurentPoly::zero(), extrapolated: false }),
        };
        match corner_options(poly).into_iter().find(|c| c.is_admissible()) {
            Some(c) => match c.outcome.expect("admissible corner") {
                BlowUp::Vanishing => Ok(Entry { value: LaurentPoly::zero(), extrapolated: false }),
                BlowUp::Cut(cut) => self.refined_descendant(&cut, pairs - 1),
            },
            None => {
                let class = BlowupClass::from_polygon(poly).ok_or_else(|| InvariantError::NoAdmissibleCorner(poly.clone()))?;
                self.class_descendant(&class.blow_up(2), pairs - 1)
            }
        }
    }

    /// `G(X_n, d; s)` for a class on the plane blown up at `n` generic
    /// points, through its toric model when one exists.
    pub fn class_descendant(&self, class: &BlowupClass, pairs: u32) -> Result<Entry, InvariantError> {
        let max = (class.point_count().max(0) / 2) as u32;
        if pairs > max {
            return Err(InvariantError::ClassPairs { class: class.to_string(), pairs, max });
        }
        let normal = match class.normalize() {
            Normal::Zero => return Ok(Entry { value: LaurentPoly::zero(), extrapolated: true }),
            Normal::ExceptionalCurve => return Ok(Entry { value: LaurentPoly::one(), extrapolated: true }),
            Normal::Toric(shape) => {
                let e = self.refined_descendant(&shape, pairs)?;
                return Ok(Entry { value: e.value, extrapolated: true });
            }
            Normal::Generic(c) => c,
        };
        if pairs == 0 {
            return Err(InvariantError::NonToric(normal.to_string()));
        }
        let memo = (normal.clone(), pairs);
        if let Some(hit) = self.classes.read().unwrap().get(&memo) {
            return Ok(hit.clone());
        }
        let prev = self.class_descendant(&normal, pairs - 1)?;
        let blown = self.class_descendant(&normal.blow_up(2), pairs - 1)?;
        let entry = Entry { value: &prev.value - &blown.value.scale(&BigInt::from(2)), extrapolated: true };
        self.classes.write().unwrap().entry(memo).or_insert(entry.clone());
        Ok(entry)
    }

    /// One recursion step at `corner` (given in canonical coordinates of
    /// `shape`); lower levels use the default corner choice.
    pub fn refined_descendant_via(&self, shape: &Shape, pairs: u32, corner: Point) -> Result<Entry, InvariantError> {
        let key = InvariantKey::new(shape, 0, pairs)?;
        let poly = match key.shape.polygon() {
            Some(p) => p.clone(),
            None => return Ok(Entry { value: LaurentPoly::zero(), extrapolated: false }),
        };
        if pairs == 0 {
            return self.refined_descendant(&key.shape, 0);
        }
        let option = corner_options(&poly)
            .into_iter()
            .find(|c| c.corner == corner)
            .ok_or(PolygonError::NotAVertex(corner))?;
        if let Err(reason) = &option.outcome {
            return Err(InvariantError::InadmissibleCorner { polygon: poly, corner, reason: reason.clone() });
        }
        self.step(&poly, pairs, &option)
    }

    fn step(&self, poly: &HPolygon, pairs: u32, corner: &CornerOption) -> Result<Entry, InvariantError> {
        let prev = self.refined_descendant(&Shape::Polygon(poly.clone()), pairs - 1)?;
        let mut extrapolated = prev.extrapolated || !within_proven_range(poly);
        let blown = match corner.outcome.as_ref().expect("admissible corner") {
            BlowUp::Vanishing => LaurentPoly::zero(),
            BlowUp::Cut(cut) => {
                let e = self.refined_descendant(cut, pairs - 1)?;
                extrapolated |= e.extrapolated;
                e.value
            }
        };
        let value = &prev.value - &blown.scale(&BigInt::from(2));
        Ok(Entry { value, extrapolated })
    }

    /// Every admissible corner of `shape` with the value obtained by
    /// blowing it up first.
    pub fn corner_sweep(&self, shape: &Shape, pairs: u32) -> Result<Vec<(Point, Entry)>, InvariantError> {
        let key = InvariantKey::new(shape, 0, pairs)?;
        let poly = match key.shape.polygon() {
            Some(p) => p.clone(),
            None => return Ok(Vec::new()),
        };
        corner_options(&poly)
            .into_iter()
            .filter(|c| c.is_admissible())
            .map(|c| Ok((c.corner, self.refined_descendant_via(&key.shape, pairs, c.corner)?)))
            .collect()
    }

    /// The recursion tree behind `refined_descendant(shape, pairs)`, depth
    /// first.
    pub fn recursion_trace(&self, shape: &Shape, pairs: u32) -> Result<Vec<TraceStep>, InvariantError> {
        let mut out = Vec::new();
        self.trace_into(shape, pairs, 0, &mut out)?;
        Ok(out)
    }

    fn trace_into(&self, shape: &Shape, pairs: u32, depth: usize, out: &mut Vec<TraceStep>) -> Result<(), InvariantError> {
        let key = InvariantKey::new(shape, 0, pairs)?;
        let entry = self.refined_descendant(&key.shape, pairs)?;
        let mut step = TraceStep {
            depth,
            node: key.shape.to_string(),
            pairs,
            rule: String::new(),
            within_range: true,
            value: entry.value,
        };
        let poly = match (&key.shape, pairs) {
            (Shape::Degenerate, _) => {
                step.rule = "degenerate".into();
                out.push(step);
                return Ok(());
            }
            (Shape::Polygon(_), 0) => {
                step.rule = "floor diagrams".into();
                out.push(step);
                return Ok(());
            }
            (Shape::Polygon(p), _) => p.clone(),
        };
        step.within_range = within_proven_range(&poly);
        match corner_options(&poly).into_iter().find(|c| c.is_admissible()) {
            Some(chosen) => {
                let cut = match chosen.outcome {
                    Ok(BlowUp::Cut(c)) => Some(c.canonical()),
                    _ => None,
                };
                step.rule = match &cut {
                    Some(c) => format!("cut corner {:?} -> {c}", chosen.corner),
                    None => format!("corner {:?}: blow-up term vanishes", chosen.corner),
                };
                out.push(step);
                self.trace_into(&key.shape, pairs - 1, depth + 1, out)?;
                if let Some(c) = cut {
                    self.trace_into(&c, pairs - 1, depth + 1, out)?;
                }
            }
            None => {
                let class = BlowupClass::from_polygon(&poly)
                    .ok_or_else(|| InvariantError::NoAdmissibleCorner(poly.clone()))?;
                let blown = class.blow_up(2);
                step.rule = format!("generic blow-up {class} -> {blown}");
                out.push(step);
                self.trace_into(&key.shape, pairs - 1, depth + 1, out)?;
                self.trace_class(&blown, pairs - 1, depth + 1, out)?;
            }
        }
        Ok(())
    }

    fn trace_class(&self, class: &BlowupClass, pairs: u32, depth: usize, out: &mut Vec<TraceStep>) -> Result<(), InvariantError> {
        let value = self.class_descendant(class, pairs)?.value;
        let mut step = TraceStep { depth, node: class.to_string(), pairs, rule: String::new(), within_range: false, value };
        match class.normalize() {
            Normal::Zero => step.rule = "no curves in class".into(),
            Normal::ExceptionalCurve => step.rule = "(-1)-curve".into(),
            Normal::Toric(shape) => {
                step.rule = format!("toric model {shape}");
                out.push(step);
                return self.trace_into(&shape, pairs, depth + 1, out);
            }
            Normal::Generic(c) => {
                let blown = c.blow_up(2);
                step.rule = format!("generic blow-up {c} -> {blown}");
                out.push(step);
                self.trace_class(&c, pairs - 1, depth + 1, out)?;
                return self.trace_class(&blown, pairs - 1, depth + 1, out);
            }
        }
        out.push(step);
        Ok(())
    }

    /// Complex count `G(Δ, g)(1)`.
    pub fn gw_value(&self, shape: &Shape, genus: u32) -> Result<BigInt, InvariantError> {
        Ok(self.refined_invariant(shape, genus)?.evaluate(1)?)
    }

    /// Real count `G(Δ, 0; s)(-1)`.
    pub fn welschinger_value(&self, shape: &Shape, pairs: u32) -> Result<BigInt, InvariantError> {
        Ok(self.refined_descendant(shape, pairs)?.value.evaluate(-1)?)
    }

    /// Recompute every stored value and report mismatches.
    pub fn verify_all(&self) -> Result<CacheReport, InvariantError> {
        let fresh = InvariantTable::new();
        let mut report = CacheReport::default();
        for (key, entry) in self.snapshot() {
            report.checked += 1;
            let value = if key.pairs == 0 {
                fresh.refined_invariant(&key.shape, key.genus)?
            } else {
                fresh.refined_descendant(&key.shape, key.pairs)?.value
            };
            if value != entry.value {
                report.mismatches.push(key.to_string());
            }
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    fn rect(a: i64, b: i64) -> Shape {
        HPolygon::rectangle(a, b).unwrap().into()
    }

    #[test]
    fn keys_are_validated() {
        assert!(matches!(
            InvariantKey::new(&rect(2, 2), 1, 1),
            Err(InvariantError::PairsNeedGenusZero { .. })
        ));
        assert!(matches!(
            InvariantKey::new(&rect(2, 2), 0, 4),
            Err(InvariantError::TooManyPairs { max: 3, .. })
        ));
        assert!(InvariantKey::new(&rect(2, 2), 0, 3).is_ok());
        let a = InvariantKey::new(&HPolygon::new(vec![(3, 3), (5, 3), (5, 5), (3, 5)]).unwrap().into(), 0, 0).unwrap();
        assert_eq!(a, InvariantKey::new(&rect(2, 2), 0, 0).unwrap());
    }

    #[test]
    fn square_descendants() {
        let t = InvariantTable::new();
        for s in 0..=3 {
            let e = t.refined_descendant(&rect(2, 2), s).unwrap();
            let mid = 10 - 2 * s as i64;
            assert_eq!(e.value, LaurentPoly::from_int_terms([(-1, 1), (0, mid), (1, 1)]));
            assert!(!e.extrapolated);
        }
    }

    #[test]
    fn base_case_matches_floor_diagrams() {
        let t = InvariantTable::new();
        let s = rect(3, 2);
        assert_eq!(
            t.refined_descendant(&s, 0).unwrap().value,
            floordiag::refined_invariant(&s, 0)
        );
    }

    #[test]
    fn degenerate_is_zero() {
        let t = InvariantTable::new();
        assert!(t.refined_descendant(&Shape::Degenerate, 2).unwrap().value.is_zero());
        assert!(t.refined_invariant(&Shape::Degenerate, 0).unwrap().is_zero());
    }

    #[test]
    fn thin_rectangles_stay_one() {
        let t = InvariantTable::new();
        let s = rect(3, 1);
        for pairs in 0..=max_pairs(s.polygon().unwrap()) {
            assert_eq!(t.refined_descendant(&s, pairs).unwrap().value, LaurentPoly::one());
        }
    }

    #[test]
    fn corner_classification() {
        let sq = HPolygon::rectangle(2, 4).unwrap();
        let opts = corner_options(&sq);
        assert_eq!(opts.len(), 4);
        assert!(opts.iter().all(|o| o.is_admissible()));

        // the (-1)-edge of the first blow-up blocks both of its corners
        let once = HPolygon::new(vec![(0, 0), (2, 0), (2, 2), (0, 4)]).unwrap();
        let ok: Vec<Point> = corner_options(&once).into_iter().filter(|o| o.is_admissible()).map(|o| o.corner).collect();
        assert_eq!(ok, vec![(0, 0), (0, 4)]);

        // singular apex and the (-2)-section of Sigma_2 are never used
        let s20 = HPolygon::sigma2(2, 0).unwrap();
        let apex = corner_options(&s20).into_iter().find(|o| o.corner == (0, 2)).unwrap();
        assert!(!apex.is_admissible());
        let thin = HPolygon::rectangle(3, 1).unwrap();
        assert!(corner_options(&thin).iter().all(|o| o.outcome == Ok(BlowUp::Vanishing)));
    }

    #[test]
    fn via_rejects_inadmissible_corner() {
        let t = InvariantTable::new();
        let once: Shape = HPolygon::new(vec![(0, 0), (2, 0), (2, 2), (0, 4)]).unwrap().into();
        let canon = once.canonical();
        let bad = corner_options(canon.polygon().unwrap())
            .into_iter()
            .find(|o| !o.is_admissible())
            .unwrap();
        assert!(matches!(
            t.refined_descendant_via(&canon, 1, bad.corner),
            Err(InvariantError::InadmissibleCorner { .. })
        ));
    }

    #[test]
    fn welschinger_and_gw() {
        let t = InvariantTable::new();
        assert_eq!(t.gw_value(&HPolygon::p2(3).unwrap().into(), 0).unwrap(), BigInt::from(12));
        assert_eq!(t.welschinger_value(&rect(2, 2), 0).unwrap(), BigInt::from(8));
        assert_eq!(t.welschinger_value(&HPolygon::sigma2(2, 0).unwrap().into(), 0).unwrap(), BigInt::from(6));
        for b in 1..5 {
            assert_eq!(t.gw_value(&rect(1, b), 0).unwrap(), BigInt::from(1));
        }
    }

    #[test]
    fn sigma2_values_are_flagged() {
        let t = InvariantTable::new();
        let e = t.refined_descendant(&HPolygon::sigma2(2, 0).unwrap().into(), 1).unwrap();
        assert_eq!(e.value, p("q^-1 + 6 + q"));
        assert!(e.extrapolated);
    }

    #[test]
    fn trace_records_every_level() {
        let t = InvariantTable::new();
        let trace = t.recursion_trace(&rect(2, 2), 2).unwrap();
        assert_eq!(trace[0].pairs, 2);
        assert_eq!(trace[0].value, p("q^-1 + 6 + q"));
        assert!(trace.iter().any(|s| s.rule == "degenerate"));
        assert!(trace.iter().all(|s| s.depth <= 2));
    }
}
