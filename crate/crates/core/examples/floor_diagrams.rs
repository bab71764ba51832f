//! Enumerates the floor diagrams of a polygon and prints each with its
//! refined multiplicity and number of markings.
//!
//! cargo run --example floor_diagrams -- rect:2,2 1

use tropref::floordiag;
use tropref::polygon::HPolygon;

fn main() {
    let mut args = std::env::args().skip(1);
    let spec = args.next().unwrap_or_else(|| "rect:2,2".into());
    let genus: u32 = args.next().map(|g| g.parse().expect("genus")).unwrap_or(0);
    let poly = HPolygon::from_spec(&spec).expect("polygon");

    println!("{spec}: vertices {:?}, {} lattice points to match", poly.vertices(), poly.point_count(genus as i64));
    let reports = floordiag::diagram_reports(&poly, genus);
    for r in &reports {
        println!(
            "div {:?}  elevators {:?}  mult {}  markings {}",
            r.diagram.divergences(),
            r.diagram.elevators.iter().map(|e| (e.from, e.to, e.weight)).collect::<Vec<_>>(),
            r.multiplicity,
            r.markings
        );
    }
    println!("{} diagrams, G = {}", reports.len(), floordiag::refined_invariant(&poly.into(), genus));
}
