//! Compares invariants of Σ₂ trapezoids with u-weighted sums of quadric
//! rectangles.

use tropref::invariants::InvariantTable;
use tropref::surgery;

fn main() {
    let table = InvariantTable::new();
    for (a, b, g) in [(1, 0, 0), (1, 3, 0), (2, 0, 0), (2, 1, 0), (2, 1, 1), (3, 0, 2)] {
        let r = surgery::check_conjecture_quadric(&table, a, b, g, None, None).unwrap();
        println!("Σ2 ({a},{b}) g={g}: {}", if r.pass { "holds" } else { "FAILS" });
        println!("  lhs {}", r.lhs);
        for t in &r.terms {
            println!("  {:>3} x rect{:?}: {}", t.weight, t.square, t.value);
        }
    }
}
