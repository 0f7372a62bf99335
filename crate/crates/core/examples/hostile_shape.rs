//! Hostile growth against the unit square: containment of the shrunk
//! square, the share of sites beyond the enlarged square, and the radial
//! profile averaged over a few seeds.

use oriented_competition::analysis::{check_containment, outside_fraction, shape_from_snapshots, square_profile, RegionSpec};
use oriented_competition::models::{run, BoxPolicy};
use oriented_competition::{CellState, ModelKind};

fn main() -> oriented_competition::Result<()> {
    let (t, delta) = (150.0, 0.1);
    let mut series = Vec::new();
    for seed in 0..5 {
        let s = run(seed, ModelKind::HostileGrowth, t, &[t], BoxPolicy::Default)?;
        let st = &s.checkpoints[0].states[0];
        let rep = check_containment(st, CellState::Black, &RegionSpec::UnitSquare.scaled(1.0 - delta), t, delta)?;
        let out = outside_fraction(st, CellState::Black, &RegionSpec::UnitSquare.scaled(1.0 + delta), t)?;
        println!("seed {seed}: {:?}, {} holes of {} tested, outside {:.2}%", rep.status, rep.violating_sites.len(), rep.tested_site_count, 100.0 * out);
        series.push(s);
    }
    let shape = shape_from_snapshots(&series, ModelKind::HostileGrowth, 19)?;
    for (theta, r) in shape.angles.iter().zip(&shape.radius) {
        println!("theta {theta:.3}: radius {r:.3} (square {:.3})", square_profile(*theta));
    }
    Ok(())
}
