//! Render a circuit as Graphviz DOT and as an edge list.

use decospan::circuits::{csv_export, dot_export};
use decospan::cli::Network;
use std::path::Path;

fn main() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/first_circuit.json");
    let Network::Circuit(c) = Network::load(&path).unwrap() else {
        unreachable!()
    };
    print!("{}", dot_export(&c));
    print!("{}", csv_export(&c));
}
