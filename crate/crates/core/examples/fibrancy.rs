//! Companions and conjoints of a function, with their structure cells.

use decospan::cospan::{companion, companion_cells, conjoint, conjoint_cells, Square};
use decospan::finset::{FinFunction, FinSet};
use decospan::laws::{check_fibrancy, CaseGenerator};

fn main() {
    let f = FinFunction::new(FinSet::new(2), vec![0, 1, 1]).unwrap();
    println!("f = {f}");
    println!("companion: {}", companion(&f));
    println!("conjoint:  {}", conjoint(&f));

    let (to_unit, from_unit) = companion_cells(&f);
    let vertical = from_unit.vcompose(&to_unit).unwrap();
    println!(
        "companion cells compose to the unit square on f: {}",
        vertical == Square::unit(&f)
    );
    let (to_unit, from_unit) = conjoint_cells(&f);
    let vertical = from_unit.vcompose(&to_unit).unwrap();
    println!(
        "conjoint cells compose to the unit square on f: {}",
        vertical == Square::unit(&f)
    );

    let report = check_fibrancy(&CaseGenerator::default().with_max_set_size(3));
    println!("{report}");
}
