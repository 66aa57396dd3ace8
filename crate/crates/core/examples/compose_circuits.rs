//! Compose the two sample circuits by gluing outputs to inputs.

use decospan::circuits::{inputs, outputs, Circuits};
use decospan::cli::Network;
use decospan::decoration::dcompose;
use std::path::Path;

fn load(name: &str) -> decospan::circuits::Circuit {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("examples/data")
        .join(name);
    match Network::load(&path).unwrap() {
        Network::Circuit(c) => c,
        Network::VectField(_) => panic!("{name} is not a circuit"),
    }
}

fn main() {
    let first = load("first_circuit.json");
    let second = load("second_circuit.json");
    let composite = dcompose(&Circuits, &first, &second).unwrap();
    println!("cospan: {}", composite.cospan());
    println!(
        "inputs {:?}, outputs {:?}",
        inputs(composite.cospan()),
        outputs(composite.cospan())
    );
    for e in composite.decoration().edges() {
        println!("  {} -> {}  {}", e.src, e.tgt, e.label);
    }
    print!(
        "{}",
        Network::Circuit(composite).to_document().to_canonical()
    );
}
