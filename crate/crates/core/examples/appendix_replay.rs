//! Replays the bundled reference tables and lists any coefficient that
//! disagrees.

use tropref::appendix::{self, Filter, Fixtures};
use tropref::invariants::InvariantTable;

fn main() {
    let table = InvariantTable::new();
    let report = appendix::replay(&Fixtures::builtin(), &table, &Filter::default());
    let failed = report.failures().count();
    println!("{} rows, {} failed", report.rows.len(), failed);
    for row in report.failures() {
        println!("{}", row.fixture);
        if let Some(e) = &row.error {
            println!("  {e}");
        }
        for d in &row.diffs {
            println!("  q^{}: table {}, computed {}", d.exponent, d.expected, d.computed);
        }
    }
}
