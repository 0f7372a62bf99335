//! Monochromatic arcs of the outer boundary seen from (1,1), and whether
//! they persist between two times.

use oriented_competition::analysis::{sector_arcs, sector_stability, SectorConfig};
use oriented_competition::models::{run, BoxPolicy};
use oriented_competition::ModelKind;

fn main() -> oriented_competition::Result<()> {
    let seed = std::env::args().nth(1).map_or(0, |s| s.parse().expect("seed"));
    let s = run(seed, ModelKind::Competition, 300.0, &[150.0, 300.0], BoxPolicy::Default)?;
    let cfg = SectorConfig::default();
    for cp in &s.checkpoints {
        let rep = sector_arcs(&cp.states[0], cp.time, &cfg)?;
        println!("t {}: {} colored sites outside the square", cp.time, rep.outer_sites);
        for a in &rep.arcs {
            println!("  {:<5} [{:+.3}, {:+.3}] measure {:.3}", a.color, a.start, a.end, a.measure);
        }
    }
    let st = sector_stability(&s, ModelKind::Competition, 150.0, 300.0, &cfg)?;
    println!("surviving arcs: {}", st.matches.iter().filter(|m| m.survives).count());
    Ok(())
}
