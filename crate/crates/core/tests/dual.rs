use oriented_competition::dual::DualEngine;
use oriented_competition::models::{init_default, Simulation};
use oriented_competition::rng::{CounterStream, Domain};
use oriented_competition::{EventWindow, LatticeBox, ModelKind, Site};

const T: f64 = 12.0;

fn samples(seed: u64, n: usize, side: u32) -> Vec<(f64, Site)> {
    let mut r = CounterStream::new(seed, Domain::Sampling, 0);
    let mut v: Vec<(f64, Site)> = (0..n)
        .map(|_| {
            let t = r.next_f64() * T;
            let x = r.next_below(side as u64 + 1) as u32;
            let y = r.next_below(side as u64 + 1) as u32;
            (t, Site::new(x, y))
        })
        .collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    v
}

#[test]
fn dual_queries_match_forward_engines() {
    let bounds = LatticeBox::square(40).unwrap();
    let kinds = ModelKind::ALL;
    for seed in 0..4 {
        let window = EventWindow::new(bounds, T, seed).unwrap();
        let inits: Vec<_> = kinds.iter().map(|&k| init_default(k, bounds).unwrap()).collect();
        let mut sim = Simulation::new(seed, &kinds, bounds, T).unwrap();
        let mut dual = DualEngine::new(window);
        for (t, z) in samples(seed, 400, 18) {
            sim.advance_to(t).unwrap();
            let rich = sim.cell(0, z);
            let comp = sim.cell(1, z);
            assert_eq!(dual.competition_color(z, t, &inits[1]).unwrap(), comp, "seed {seed} {z} {t}");
            assert_eq!(dual.voter_color(z, t, &inits[2]).unwrap(), sim.cell(2, z));
            assert_eq!(dual.voter_color(z, t, &inits[3]).unwrap(), sim.cell(3, z));
            let anc = dual.potential_ancestors(z, t, &inits[0]).unwrap();
            assert_eq!(anc.is_empty(), rich != oriented_competition::CellState::Red, "seed {seed} {z} {t}");
            if comp.is_colored() {
                assert!(anc.members.iter().any(|&m| inits[1].get(m) == comp));
            }
            let tr = dual.trace_voter_path(z, t).unwrap();
            if inits[0].get(tr.terminus) == oriented_competition::CellState::Red {
                assert!(anc.contains(tr.terminus));
            }
        }
    }
}
