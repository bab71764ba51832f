//! Persists computed invariants to a JSON-lines file and rechecks them on
//! a second run.

use tropref::invariants::{self, InvariantTable};
use tropref::polygon::{HPolygon, Shape};

fn main() {
    let path = std::env::temp_dir().join("tropref-example-cache.jsonl");
    let _ = std::fs::remove_file(&path);
    let shape: Shape = HPolygon::rectangle(2, 4).unwrap().into();

    let first = InvariantTable::with_cache(&path).unwrap();
    for s in 0..=3 {
        first.refined_descendant(&shape, s).unwrap();
    }
    drop(first);
    let (records, stale) = invariants::read_records(&path).unwrap();
    println!("{}: {} records ({stale} stale)", path.display(), records.len());

    let second = InvariantTable::with_cache(&path).unwrap();
    println!("reloaded {} entries", second.len());
    println!("rect:2,4 s=3 = {}", second.refined_descendant(&shape, 3).unwrap().value);
    let report = invariants::verify_file(&path).unwrap();
    println!("recheck: {} checked, clean {}", report.checked, report.is_clean());
    let _ = std::fs::remove_file(&path);
}
