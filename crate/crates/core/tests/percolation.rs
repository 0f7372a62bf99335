use oriented_competition::percolation::{edge_events, inbound_events, window_events};
use oriented_competition::stats::{ks_test_one, pearson, Summary};
use oriented_competition::{DirectedEdge, EventWindow, LatticeBox, Site};
use proptest::prelude::*;

const HORIZON: f64 = 50.0;

fn gaps(times: &[f64]) -> Vec<f64> {
    let mut prev = 0.0;
    times
        .iter()
        .map(|&t| {
            let g = t - prev;
            prev = t;
            g
        })
        .collect()
}

#[test]
fn arrow_counts_and_gaps_follow_a_unit_poisson_process() {
    let edges: Vec<DirectedEdge> = LatticeBox::square(50).unwrap().edges().collect();
    let mut counts = Vec::new();
    let mut all_gaps = Vec::new();
    let (mut lead, mut lag) = (Vec::new(), Vec::new());
    for e in &edges {
        let ev = edge_events(11, *e, HORIZON);
        counts.push(ev.len() as f64);
        // only early gaps: dropping the censored tail would bias later ones
        let g = gaps(&ev);
        lead.push(g[0]);
        lag.push(g[1]);
        all_gaps.extend(&g[..3]);
    }
    let c = Summary::of(&counts);
    assert!(c.within_se(HORIZON, 4.0), "mean count {} se {}", c.mean, c.std_err);
    // variance of a Poisson count equals its mean
    assert!((c.std_dev * c.std_dev / HORIZON - 1.0).abs() < 0.1, "count variance {}", c.std_dev * c.std_dev);
    let ks = ks_test_one(&all_gaps, |x| 1.0 - (-x).exp(), 0.01);
    assert!(ks.accepted, "KS {} vs {}", ks.statistic, ks.critical_value);
    let rho = pearson(&lead, &lag);
    assert!(rho.abs() < 0.05, "lag-one correlation {rho}");
}

#[test]
fn inbound_rate_is_two() {
    let window = EventWindow::square(30, 10.0, 3).unwrap();
    let counts: Vec<f64> = (1..=30u32)
        .flat_map(|x| (1..=30u32).map(move |y| Site::new(x, y)))
        .map(|s| inbound_events(&window, s).unwrap().len() as f64)
        .collect();
    let c = Summary::of(&counts);
    assert!(c.within_se(20.0, 4.0), "mean inbound {}", c.mean);
}

#[test]
fn window_stream_is_sorted_and_matches_per_edge_streams() {
    let window = EventWindow::square(6, 5.0, 9).unwrap();
    let merged: Vec<_> = window_events(&window).collect();
    assert!(merged.windows(2).all(|w| w[0] < w[1]));
    let total: usize = window.bounds.edges().map(|e| edge_events(9, e, 5.0).len()).sum();
    assert_eq!(merged.len(), total);
    assert!(merged.iter().all(|e| !e.edge.source().is_origin() && e.time > 0.0 && e.time <= 5.0));
}

proptest! {
    #[test]
    fn streams_are_prefix_consistent(seed in any::<u64>(), x in 0u32..1000, y in 0u32..1000, h in 0.5f64..20.0, cut in 0.0f64..1.0) {
        prop_assume!(x + y > 0);
        let e = DirectedEdge::east(x, y).unwrap();
        let long = edge_events(seed, e, h);
        let short = edge_events(seed, e, h * cut);
        let prefix: Vec<f64> = long.iter().copied().filter(|&t| t <= h * cut).collect();
        prop_assert_eq!(short, prefix);
    }

    #[test]
    fn streams_are_deterministic_and_increasing(seed in any::<u64>(), x in 0u32..50, y in 1u32..50) {
        let e = DirectedEdge::north(x, y).unwrap();
        let a = edge_events(seed, e, 8.0);
        prop_assert_eq!(&a, &edge_events(seed, e, 8.0));
        prop_assert!(a.windows(2).all(|w| w[0] < w[1]));
    }
}
