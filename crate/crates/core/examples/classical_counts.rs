//! Specializations of refined invariants: q = 1 gives the complex count,
//! q = -1 the Welschinger count.

use tropref::invariants::{max_pairs, InvariantTable};
use tropref::polygon::{HPolygon, Shape};

fn main() {
    let table = InvariantTable::new();
    for d in 1..=5 {
        let shape: Shape = HPolygon::p2(d).unwrap().into();
        print!("P2 degree {d}: N = {}  W(s) =", table.gw_value(&shape, 0).unwrap());
        for s in 0..=max_pairs(shape.polygon().unwrap()) {
            match table.welschinger_value(&shape, s) {
                Ok(w) => print!(" {w}"),
                Err(e) => {
                    print!(" (s={s}: {e})");
                    break;
                }
            }
        }
        println!();
    }
    for (a, b) in [(1, 1), (2, 2), (2, 3), (3, 3)] {
        let shape: Shape = HPolygon::rectangle(a, b).unwrap().into();
        println!(
            "quadric ({a},{b}): N = {}  W = {}",
            table.gw_value(&shape, 0).unwrap(),
            table.welschinger_value(&shape, 0).unwrap()
        );
    }
}
