//! Refined invariants of rectangles (the quadric), plane triangles and the
//! Σ₂ trapezoids for every genus.

use tropref::invariants::InvariantTable;
use tropref::polygon::{HPolygon, Shape};

fn main() {
    let table = InvariantTable::new();
    let shapes: Vec<(&str, Shape)> = vec![
        ("rect:2,2", HPolygon::rectangle(2, 2).unwrap().into()),
        ("rect:3,3", HPolygon::rectangle(3, 3).unwrap().into()),
        ("p2:4", HPolygon::p2(4).unwrap().into()),
        ("sigma2:2,1", HPolygon::sigma2(2, 1).unwrap().into()),
    ];
    for (name, shape) in shapes {
        let poly = shape.polygon().unwrap();
        let top = poly.interior_points();
        for g in 0..=top as u32 {
            let v = table.refined_invariant(&shape, g).unwrap();
            println!("{name:<11} g={g}  {v}");
        }
    }
}
