//! Run the law catalog on a small seeded sample and print the reports.
//!
//! `cargo run --release --example law_suite -- <seed> <cases>`

use decospan::laws::{render_text, run_suite, Backends, CaseGenerator};

fn main() {
    let mut args = std::env::args().skip(1);
    let seed = args.next().map_or(1, |s| s.parse().expect("seed"));
    let cases = args.next().map_or(100, |s| s.parse().expect("case count"));
    let gen = CaseGenerator::new(seed).with_cases(cases);
    print!("{}", render_text(&run_suite(&gen, Backends::All)));
}
