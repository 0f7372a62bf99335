//! First passage percolation with i.i.d. Exp(1) weights: the passage-time
//! field from the two default sources and time constant estimates along a
//! few directions.

use oriented_competition::fpp::{mu_estimate, passage_times, sample_weights, DEFAULT_SOURCES};
use oriented_competition::{LatticeBox, Site};

fn main() -> oriented_competition::Result<()> {
    let b = LatticeBox::square(60)?;
    let field = passage_times(&sample_weights(2, b), &DEFAULT_SOURCES)?;
    for s in [Site::new(60, 0), Site::new(30, 30), Site::new(60, 60), Site::new(0, 60)] {
        println!("T{s} = {:.3}", field.get(s).expect("reachable"));
    }
    for dir in [(1.0, 0.0), (2.0, 1.0), (1.0, 1.0)] {
        let m = mu_estimate(2, dir, 200, 20)?;
        println!("mu{dir:?} ~ {:.4}  99% CI ({:.4}, {:.4})", m.summary.mean, m.ci99.0, m.ci99.1);
    }
    Ok(())
}
