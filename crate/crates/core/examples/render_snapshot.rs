//! Writes a snapshot through the command-line front end and renders it
//! back from its manifest.

use oriented_competition::cli::main_with_args;

fn main() {
    let out = std::env::args().nth(1).unwrap_or_else(|| "target/example-render".into());
    let sim = ["orcomp", "simulate", "--model", "hostile-competition", "--t", "80", "--seed", "4", "--out", &out];
    assert_eq!(main_with_args(sim), 0);
    let manifest = format!("{out}/manifest.json");
    assert_eq!(main_with_args(["orcomp", "render", "--manifest", &manifest]), 0);
    println!("wrote {out}/hostile-competition_t80.ppm");
}
