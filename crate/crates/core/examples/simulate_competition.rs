//! Runs the two-type competition to `t = 100` and prints color counts at a
//! few checkpoints, then writes the final snapshot as CSV and PPM.
//!
//! `cargo run --release --example simulate_competition -- [seed] [out_dir]`

use std::fs::File;
use std::io::BufWriter;

use oriented_competition::analysis::write_ppm;
use oriented_competition::models::{run, write_snapshot_csv, BoxPolicy};
use oriented_competition::{CellState, ModelKind};

fn main() -> oriented_competition::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().map_or(0, |s| s.parse().expect("seed"));
    let out = args.next().unwrap_or_else(|| "target/example-out".into());
    std::fs::create_dir_all(&out)?;

    let checkpoints = [25.0, 50.0, 75.0, 100.0];
    let series = run(seed, ModelKind::Competition, 100.0, &checkpoints, BoxPolicy::Default)?;
    println!("box side {}, truncated {}", series.bounds.max_x, series.truncation_flag);
    for cp in &series.checkpoints {
        let st = &cp.states[0];
        let red = st.sites_with(CellState::Red).count();
        let blue = st.sites_with(CellState::Blue).count();
        println!("t {:>5}: red {red:>6} blue {blue:>6}", cp.time);
    }
    let last = &series.last().expect("checkpoints").states[0];
    write_snapshot_csv(BufWriter::new(File::create(format!("{out}/competition.csv"))?), last)?;
    write_ppm(BufWriter::new(File::create(format!("{out}/competition.ppm"))?), last)?;
    println!("wrote {out}/competition.csv and .ppm");
    Ok(())
}
