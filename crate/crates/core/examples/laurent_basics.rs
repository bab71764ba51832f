//! Laurent polynomials in q^{1/2}: parsing, arithmetic, quantum integers
//! and the two classical specializations.

use tropref::laurent::LaurentPoly;

fn main() {
    let p: LaurentPoly = "q^-1 + 10 + q".parse().unwrap();
    let q2 = LaurentPoly::quantum_integer(2).unwrap();
    let q3 = LaurentPoly::quantum_integer(3).unwrap();

    println!("p        = {p}");
    println!("[2]_q    = {q2}");
    println!("[3]_q    = {q3}");
    println!("[2]^2    = {}", q2.pow(2));
    println!("p * [3]  = {}", &p * &q3);
    println!("p - [3]^2 = {}", &p - &q3.pow(2));
    println!("p(1) = {}, p(-1) = {}", p.evaluate(1).unwrap(), p.evaluate(-1).unwrap());
    println!("palindromic: {}", p.is_palindromic());
    match q2.evaluate(-1) {
        Ok(v) => println!("[2](-1) = {v}"),
        Err(e) => println!("[2](-1): {e}"),
    }
}
