//! Invariants with pairs of complex conjugate points via the corner
//! blow-up recursion, with the recursion tree for one value.

use tropref::invariants::{max_pairs, InvariantTable};
use tropref::polygon::{HPolygon, Shape};

fn main() {
    let table = InvariantTable::new();
    let shape: Shape = HPolygon::rectangle(3, 3).unwrap().into();
    for s in 0..=max_pairs(shape.polygon().unwrap()) {
        let e = table.refined_descendant(&shape, s).unwrap();
        let flag = if e.extrapolated { "  (extrapolated)" } else { "" };
        println!("rect:3,3 s={s}  {}{flag}", e.value);
    }

    println!("\nrecursion for rect:2,4 s=2:");
    let shape: Shape = HPolygon::rectangle(2, 4).unwrap().into();
    for step in table.recursion_trace(&shape, 2).unwrap() {
        println!("{}{} s={}: {}  <- {}", "  ".repeat(step.depth), step.node, step.pairs, step.value, step.rule);
    }
}
