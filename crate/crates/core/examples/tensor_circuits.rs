//! Place two circuits side by side.

use decospan::cli::Network;
use std::path::Path;

fn main() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let a = Network::load(&data.join("first_circuit_one_output.json")).unwrap();
    let b = Network::load(&data.join("second_circuit.json")).unwrap();
    let both = a.tensor(&b).unwrap();
    println!("{}", both.cospan());
    print!("{}", both.to_document().to_canonical());
}
