//! Backward queries on a fixed arrow window: the reverse voter path of a
//! space-time point, its colors under each model and its potential
//! ancestors. The forward engine is run alongside for comparison.

use oriented_competition::dual::DualEngine;
use oriented_competition::models::{init_default, Simulation};
use oriented_competition::{EventWindow, LatticeBox, ModelKind, Site};

fn main() -> oriented_competition::Result<()> {
    let (t, z) = (20.0, Site::new(9, 14));
    let bounds = LatticeBox::square(40)?;
    let mut dual = DualEngine::new(EventWindow::new(bounds, t, 5)?);
    let trace = dual.trace_voter_path(z, t)?;
    println!("reverse path from {z} at t {t}: {} jumps, ends at {}", trace.jumps(), trace.terminus);
    for seg in trace.segments.iter().take(6) {
        println!("  at {} during [{:.3}, {:.3}]", seg.site, seg.t_exit, seg.t_enter);
    }

    let mut sim = Simulation::new(5, &ModelKind::ALL, bounds, t)?;
    sim.advance_to(t)?;
    for (m, kind) in ModelKind::ALL.into_iter().enumerate() {
        let init = init_default(kind, bounds)?;
        let backward = match kind {
            ModelKind::HostileGrowth | ModelKind::HostileCompetition => dual.voter_color(z, t, &init)?,
            ModelKind::Competition => dual.competition_color(z, t, &init)?,
            ModelKind::Richardson => {
                let a = dual.potential_ancestors(z, t, &init)?;
                println!("potential ancestors: {:?}", a.members);
                if a.is_empty() { oriented_competition::CellState::Vacant } else { oriented_competition::CellState::Red }
            }
        };
        println!("{kind:>20}: dual {backward:<6} forward {}", sim.cell(m, z));
    }
    Ok(())
}
