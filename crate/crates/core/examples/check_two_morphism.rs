//! Decide whether an apex map is a 2-morphism of decorated cospans.

use decospan::cli::{check_networks, MapDocument, Network};
use std::path::Path;

fn main() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let source = Network::load(&data.join("first_circuit.json")).unwrap();
    let relabeled = Network::load(&data.join("relabeled_circuit.json")).unwrap();
    let corrupted = Network::load(&data.join("corrupted_label.json")).unwrap();
    let h = MapDocument {
        apex_map: vec![2, 0, 3],
    };

    println!(
        "relabeling: {:?}",
        check_networks(&source, &relabeled, &h).unwrap()
    );
    println!(
        "corrupted label: {:?}",
        check_networks(&source, &corrupted, &h).unwrap()
    );
    let swapped = MapDocument {
        apex_map: vec![0, 2, 3],
    };
    println!(
        "wrong apex map: {:?}",
        check_networks(&source, &relabeled, &swapped).unwrap()
    );
}
