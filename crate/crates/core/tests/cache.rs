use std::io::Write;

use tropref::invariants::{self, CacheRecord, InvariantError, InvariantTable, CACHE_ENV};
use tropref::polygon::{HPolygon, Shape};

fn square() -> Shape {
    HPolygon::rectangle(2, 4).unwrap().into()
}

#[test]
fn round_trip_through_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    let first = InvariantTable::with_cache(&path).unwrap();
    let want = first.refined_descendant(&square(), 3).unwrap();
    let stored = first.len();
    drop(first);

    let (records, stale) = invariants::read_records(&path).unwrap();
    assert_eq!((records.len(), stale), (stored, 0));
    let second = InvariantTable::with_cache(&path).unwrap();
    assert_eq!(second.len(), stored);
    assert_eq!(second.refined_descendant(&square(), 3).unwrap(), want);
    // nothing new was computed, so nothing new was appended
    drop(second);
    assert_eq!(invariants::read_records(&path).unwrap().0.len(), stored);
    assert!(invariants::verify_file(&path).unwrap().is_clean());
}

#[test]
fn stale_records_are_ignored() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    let table = InvariantTable::new();
    let v = table.refined_descendant(&square(), 1).unwrap();
    let key = invariants::InvariantKey::new(&square(), 0, 1).unwrap();
    let mut rec = CacheRecord::new(&key, &v);
    rec.engine = "tropref-0.0.0".into();
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "{}", serde_json::to_string(&rec).unwrap()).unwrap();
    drop(f);
    let (records, stale) = invariants::read_records(&path).unwrap();
    assert_eq!((records.len(), stale), (0, 1));
    assert!(InvariantTable::with_cache(&path).unwrap().is_empty());
}

#[test]
fn corrupted_records_are_detected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    let table = InvariantTable::new();
    let mut v = table.refined_descendant(&square(), 1).unwrap();
    v.value = "q^-1 + 1 + q".parse().unwrap();
    let key = invariants::InvariantKey::new(&square(), 0, 1).unwrap();
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "{}", serde_json::to_string(&CacheRecord::new(&key, &v)).unwrap()).unwrap();
    drop(f);

    let report = invariants::verify_file(&path).unwrap();
    assert_eq!(report.checked, 1);
    assert_eq!(report.mismatches.len(), 1);

    let mut verifying = InvariantTable::with_cache(&path).unwrap();
    verifying.set_verify(true);
    assert!(matches!(verifying.refined_descendant(&square(), 1), Err(InvariantError::CacheMismatch { .. })));
}

#[test]
fn garbage_lines_are_format_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    std::fs::write(&path, "{not json}\n").unwrap();
    assert!(matches!(invariants::read_records(&path), Err(InvariantError::CacheFormat { line: 1, .. })));
}

#[test]
fn environment_names_the_default_cache() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("env.jsonl");
    // the only test in this binary that touches the variable
    unsafe { std::env::set_var(CACHE_ENV, &path) };
    let table = InvariantTable::from_env().unwrap();
    table.refined_invariant(&square(), 1).unwrap();
    drop(table);
    unsafe { std::env::remove_var(CACHE_ENV) };
    assert_eq!(invariants::read_records(&path).unwrap().0.len(), 1);
}
