//! The coefficients u_{m,k}, their inversion against binomials, the
//! coefficient identity behind the surgery formula, and the folded
//! transform on the quadric lattice.

use tropref::invariants::InvariantTable;
use tropref::surgery::{self, ClassLattice, MissingKeys, NumberTable};

fn main() {
    for m in 0..=5 {
        let row: Vec<String> = (0..=4).map(|k| surgery::u_coeff(m, k).unwrap().to_string()).collect();
        println!("u_{m},k = {}", row.join(" "));
    }
    let inv = surgery::check_u_inversion(8, 8);
    println!("u inversion up to 8: {} checks, passed {}", inv.checks.len(), inv.passed());
    println!("coefficient identity l=6, b=2: {}", surgery::check_mainproof_coeffs(6, 2).pass);

    let table = InvariantTable::new();
    let lattice = ClassLattice::quadric();
    let sphere = lattice.get("S").unwrap().clone();
    let mut w = NumberTable::new();
    for p in 0..=4i64 {
        for q in 0..=4 - p {
            w.insert(vec![p, q], table.welschinger_value(&surgery::quadric_shape(p, q), 0).unwrap());
        }
    }
    for d in [vec![1, 1], vec![2, 1], vec![2, 2]] {
        let t = surgery::lagrangian_transform(&w, &lattice, &sphere, &d, MissingKeys::Lenient).unwrap();
        println!("W{d:?} = {}  transformed = {}", w.value(&d), t.value);
    }
}
