//! Compose open dynamical systems, then simulate the composite. Simulating
//! the composite is the same as simulating the transported combined field.

use decospan::cli::{Network, PipelineDocument};
use decospan::dynam::{euler_integrate, parse_rational, trajectory_csv};
use std::fs;
use std::path::Path;

fn main() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let text = fs::read_to_string(data.join("tank_pipeline.json")).unwrap();
    let pipeline = PipelineDocument::parse(&text, "tank_pipeline.json").unwrap();
    let Network::VectField(system) = pipeline.evaluate(&data).unwrap() else {
        unreachable!()
    };
    println!("composite field: {}", system.decoration());

    let start: Vec<_> = ["4", "0", "0", "0"]
        .iter()
        .map(|s| parse_rational(s).unwrap())
        .collect();
    let step = parse_rational("1/4").unwrap();
    let trajectory = euler_integrate(system.decoration(), &start, &step, 8).unwrap();
    print!("{}", trajectory_csv(&trajectory, true));
}
