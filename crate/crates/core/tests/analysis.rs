use oriented_competition::analysis::{
    angle_grid, check_containment, curvature_diagnostic, render_ppm, sector_arcs, shape_from_snapshots, square_profile, CheckStatus,
    RegionSpec, SectorConfig,
};
use oriented_competition::models::{run, BoxPolicy};
use oriented_competition::{CellState, LatticeBox, LatticeState, ModelKind, Site};
use proptest::prelude::*;

fn unit() -> impl Strategy<Value = (f64, f64)> {
    (0.0f64..=1.0, 0.0f64..=1.0)
}

proptest! {
    #[test]
    fn halves_partition_the_square_off_the_diagonal(p in unit()) {
        let q1 = RegionSpec::Q1.contains(p);
        let q2 = RegionSpec::Q2.contains(p);
        if p.0 == p.1 {
            prop_assert!(!q1 && !q2);
        } else {
            prop_assert!(q1 ^ q2);
        }
    }

    #[test]
    fn bands_partition_the_plane(p in (-3.0f64..3.0, -3.0f64..3.0), c in 0.0f64..1.0) {
        let k1 = RegionSpec::K1 { c }.contains(p);
        let k2 = RegionSpec::K2 { c }.contains(p);
        let mid = (p.0 - p.1).abs() <= c;
        prop_assert_eq!(k1 as u8 + k2 as u8 + mid as u8, 1);
    }

    #[test]
    fn depth_is_one_lipschitz_and_zero_outside(p in (-0.5f64..1.5, -0.5f64..1.5), d in (-0.05f64..0.05, -0.05f64..0.05), eps in 0.01f64..0.7) {
        let regions = [
            RegionSpec::UnitSquare,
            RegionSpec::Q1,
            RegionSpec::Q2.scaled(0.8),
            RegionSpec::Cone { epsilon: eps },
            RegionSpec::Sector { center: (0.2, 1.0), measure: 0.5 },
            RegionSpec::Q2.and(RegionSpec::K1 { c: 0.1 }),
        ];
        let q = (p.0 + d.0, p.1 + d.1);
        let step = d.0.abs().max(d.1.abs());
        for r in &regions {
            let (a, b) = (r.depth(p), r.depth(q));
            prop_assert!(a >= 0.0);
            if !r.contains(p) {
                prop_assert_eq!(a, 0.0);
            }
            prop_assert!((a - b).abs() <= step + 1e-12, "{:?}: {} vs {}", r, a, b);
        }
    }

    #[test]
    fn scaling_multiplies_depth(p in unit(), f in 0.2f64..5.0) {
        let base = RegionSpec::Q2;
        let scaled = base.clone().scaled(f);
        let q = (p.0 * f, p.1 * f);
        prop_assert_eq!(scaled.contains(q), base.contains(p));
        prop_assert!((scaled.depth(q) - f * base.depth(p)).abs() < 1e-9);
    }

    #[test]
    fn region_specs_round_trip_through_json(c in 0.0f64..1.0, f in 0.1f64..3.0) {
        let r = RegionSpec::K1 { c }.scaled(f).and(RegionSpec::Cone { epsilon: 0.3 });
        let s = serde_json::to_string(&r).unwrap();
        prop_assert_eq!(serde_json::from_str::<RegionSpec>(&s).unwrap(), r);
    }
}

#[test]
fn full_square_passes_and_a_hole_fails() {
    let t = 40.0;
    let b = LatticeBox::square(60).unwrap();
    let mut st = LatticeState::empty(ModelKind::HostileGrowth, b, t);
    for x in 0..=40 {
        for y in 0..=40 {
            if (x, y) != (0, 0) {
                st.set(Site::new(x, y), CellState::Black).unwrap();
            }
        }
    }
    let region = RegionSpec::UnitSquare.scaled(0.9);
    assert_eq!(check_containment(&st, CellState::Black, &region, t, 0.1).unwrap().status, CheckStatus::Pass);
    st.set(Site::new(18, 18), CellState::White).unwrap();
    let rep = check_containment(&st, CellState::Black, &region, t, 0.1).unwrap();
    assert_eq!(rep.status, CheckStatus::Fail);
    assert_eq!(rep.violating_sites, vec![Site::new(18, 18)]);
    // margin too small for the lattice
    assert_eq!(check_containment(&st, CellState::Black, &region, t, 0.01).unwrap().status, CheckStatus::Inconclusive);
}

#[test]
fn hostile_growth_profile_is_close_to_the_square() {
    let series: Vec<_> = (0..4).map(|s| run(s, ModelKind::HostileGrowth, 100.0, &[100.0], BoxPolicy::Default).unwrap()).collect();
    let shape = shape_from_snapshots(&series, ModelKind::HostileGrowth, 61).unwrap();
    assert!(shape.max_deviation(square_profile) < 0.2, "deviation {}", shape.max_deviation(square_profile));
    let curv = curvature_diagnostic(&shape, 0.1, 10.0).unwrap();
    assert!(!curv.points.is_empty());
}

#[test]
fn competition_shows_both_colors_on_the_outer_boundary() {
    let s = run(1, ModelKind::Competition, 120.0, &[120.0], BoxPolicy::Default).unwrap();
    let st = &s.checkpoints[0].states[0];
    let rep = sector_arcs(st, 120.0, &SectorConfig::default()).unwrap();
    assert!(!rep.arcs.is_empty());
    let ppm = render_ppm(st);
    let side = st.bounds.width();
    assert!(ppm.starts_with(format!("P6\n{side} {side}\n255\n").as_bytes()));
    assert!(angle_grid(1).is_err());
}
