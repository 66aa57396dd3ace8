//! Glue two finite sets along a shared foot and inspect the quotient.

use decospan::finset::{pushout, FinFunction, FinSet};

fn main() {
    // Y = {0, 1} maps into N = {0, 1, 2} and N' = {0, 1}
    let f = FinFunction::new(FinSet::new(3), vec![1, 1]).unwrap();
    let g = FinFunction::new(FinSet::new(2), vec![0, 1]).unwrap();
    let p = pushout(&f, &g).unwrap();
    println!("apex: {}", p.apex);
    println!("N  -> apex: {:?}", p.left_leg.table());
    println!("N' -> apex: {:?}", p.right_leg.table());
    println!("N + N' -> apex: {:?}", p.from_coproduct.table());

    // any cocone factors uniquely through the pushout
    let u = FinFunction::new(FinSet::new(2), vec![0, 1, 0]).unwrap();
    let v = FinFunction::new(FinSet::new(2), vec![1, 1]).unwrap();
    let k = p.universal(&u, &v).unwrap();
    println!("induced map: {:?}", k.table());
}
