//! All four models driven by one arrow stream, with the set identities
//! between them checked at every checkpoint.

use std::collections::BTreeSet;

use oriented_competition::models::{coupled_run, BoxPolicy};
use oriented_competition::{CellState, LatticeState, ModelKind, Site};

fn set(st: &LatticeState, c: CellState) -> BTreeSet<Site> {
    st.sites_with(c).collect()
}

fn main() -> oriented_competition::Result<()> {
    let seed = std::env::args().nth(1).map_or(3, |s| s.parse().expect("seed"));
    let series = coupled_run(seed, &ModelKind::ALL, 60.0, &[20.0, 40.0, 60.0], BoxPolicy::Default)?;
    for cp in &series.checkpoints {
        let [z, comp, q, hostile] = &cp.states[..] else { unreachable!() };
        let z = set(z, CellState::Red);
        let (r, b) = (set(comp, CellState::Red), set(comp, CellState::Blue));
        let q = set(q, CellState::Black);
        let (r1, b1) = (set(hostile, CellState::Red), set(hostile, CellState::Blue));
        let union: BTreeSet<Site> = r.union(&b).copied().collect();
        let union1: BTreeSet<Site> = r1.union(&b1).copied().collect();
        println!(
            "t {:>4}: |Z| {:>5} |Q| {:>5}  Z=RuB {}  Q=R1uB1 {}  Q<=Z {}  R1<=R {}  B1<=B {}",
            cp.time,
            z.len(),
            q.len(),
            z == union,
            q == union1,
            q.is_subset(&z),
            r1.is_subset(&r),
            b1.is_subset(&b)
        );
    }
    Ok(())
}
