//! Forward dynamics of the four models driven by the shared arrow stream.
//!
//! A single transfer rule covers all of them: when an arrow fires from `s`
//! to `y`, occupancy models copy the color of `s` onto `y` if `s` is
//! occupied, hostile-environment models copy it unconditionally.

mod engine;
mod export;

pub use engine::{coupled_run, replay_window, run, BoxPolicy, Checkpoint, Simulation, SnapshotSeries};
pub use export::{read_snapshot_csv, write_snapshot_csv, RunManifest};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::percolation::{ArrowEvent, LatticeBox, Site};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
#[repr(u8)]
pub enum CellState {
    Vacant,
    Red,
    Blue,
    White,
    Black,
}

impl CellState {
    pub const ALL: [CellState; 5] = [CellState::Vacant, CellState::Red, CellState::Blue, CellState::White, CellState::Black];

    /// Red or Blue.
    pub fn is_colored(self) -> bool {
        matches!(self, CellState::Red | CellState::Blue)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CellState::Vacant => "vacant",
            CellState::Red => "red",
            CellState::Blue => "blue",
            CellState::White => "white",
            CellState::Black => "black",
        }
    }
}

impl fmt::Display for CellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CellState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CellState::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown cell state '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// Oriented Richardson growth `Z(t)`. Occupied sites are stored as Red.
    Richardson,
    /// Two-type competition `(R(t), B(t))`.
    Competition,
    /// Growth in hostile environment `Q(t)`: Black invading White.
    HostileGrowth,
    /// Competition in hostile environment `(R1(t), B1(t))`.
    HostileCompetition,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] =
        [ModelKind::Richardson, ModelKind::Competition, ModelKind::HostileGrowth, ModelKind::HostileCompetition];

    pub fn is_hostile(self) -> bool {
        matches!(self, ModelKind::HostileGrowth | ModelKind::HostileCompetition)
    }

    /// State of a site absent from the sparse map.
    pub fn background(self) -> CellState {
        if self.is_hostile() {
            CellState::White
        } else {
            CellState::Vacant
        }
    }

    pub fn allows(self, state: CellState) -> bool {
        use CellState::*;
        match self {
            ModelKind::Richardson => matches!(state, Vacant | Red),
            ModelKind::Competition => matches!(state, Vacant | Red | Blue),
            ModelKind::HostileGrowth => matches!(state, White | Black),
            ModelKind::HostileCompetition => matches!(state, White | Red | Blue),
        }
    }

    /// The states that make up the growing set: occupied for occupancy
    /// models, non-White for hostile ones.
    pub fn is_marked(self, state: CellState) -> bool {
        state != self.background() && state != CellState::Vacant
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Richardson => "richardson",
            ModelKind::Competition => "competition",
            ModelKind::HostileGrowth => "hostile-growth",
            ModelKind::HostileCompetition => "hostile-competition",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown model '{s}'")))
    }
}

/// New state of the target when an arrow fires from a site in state `source`.
#[inline]
pub fn transfer(kind: ModelKind, source: CellState, target: CellState) -> CellState {
    match kind {
        ModelKind::Richardson => {
            if source == CellState::Red {
                CellState::Red
            } else {
                target
            }
        }
        ModelKind::Competition => {
            if source.is_colored() {
                source
            } else {
                target
            }
        }
        ModelKind::HostileGrowth | ModelKind::HostileCompetition => source,
    }
}

/// Configuration of one model at one time. Only sites that differ from the
/// kind's background are stored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeState {
    pub kind: ModelKind,
    pub time: f64,
    pub bounds: LatticeBox,
    cells: BTreeMap<Site, CellState>,
}

impl LatticeState {
    /// Background-only configuration.
    pub fn empty(kind: ModelKind, bounds: LatticeBox, time: f64) -> Self {
        LatticeState { kind, time, bounds, cells: BTreeMap::new() }
    }

    pub(crate) fn from_sorted(kind: ModelKind, bounds: LatticeBox, time: f64, cells: impl IntoIterator<Item = (Site, CellState)>) -> Self {
        LatticeState { kind, time, bounds, cells: cells.into_iter().collect() }
    }

    /// State of `site`. Sites outside the box read as background; the origin
    /// carries no particle and reads Vacant in every model.
    pub fn get(&self, site: Site) -> CellState {
        if site.is_origin() {
            return CellState::Vacant;
        }
        self.cells.get(&site).copied().unwrap_or(self.kind.background())
    }

    pub fn set(&mut self, site: Site, state: CellState) -> Result<()> {
        if !self.bounds.contains(site) {
            return Err(Error::OutOfBox(site));
        }
        if !self.kind.allows(state) {
            return Err(Error::invalid(format!("{} does not admit state {state}", self.kind)));
        }
        if site.is_origin() {
            return Err(Error::invalid("the origin never carries a particle"));
        }
        if state == self.kind.background() {
            self.cells.remove(&site);
        } else {
            self.cells.insert(site, state);
        }
        Ok(())
    }

    /// Non-background sites in `(x, y)` order.
    pub fn cells(&self) -> impl Iterator<Item = (Site, CellState)> + '_ {
        self.cells.iter().map(|(s, c)| (*s, *c))
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn sites_with(&self, state: CellState) -> impl Iterator<Item = Site> + '_ {
        self.cells.iter().filter(move |(_, c)| **c == state).map(|(s, _)| *s)
    }

    /// Occupied sites (occupancy models) or non-White sites (hostile models).
    pub fn marked(&self) -> impl Iterator<Item = Site> + '_ {
        let kind = self.kind;
        self.cells.iter().filter(move |(_, c)| kind.is_marked(**c)).map(|(s, _)| *s)
    }

    pub fn touches_boundary(&self) -> bool {
        self.marked().any(|s| self.bounds.on_boundary(s))
    }

    /// Applies one arrow in place.
    pub fn apply_event_mut(&mut self, event: &ArrowEvent) -> Result<()> {
        if event.time < self.time {
            return Err(Error::EventOutOfOrder { event_time: event.time, state_time: self.time });
        }
        if !self.bounds.contains_edge(&event.edge) {
            return Err(Error::OutOfBox(event.edge.target()));
        }
        let (src, tgt) = (event.edge.source(), event.edge.target());
        let next = transfer(self.kind, self.get(src), self.get(tgt));
        if next != self.get(tgt) {
            self.set(tgt, next)?;
        }
        self.time = event.time;
        Ok(())
    }
}

/// The default initial configuration of `kind`: the two protected particles
/// at `(1,0)` and `(0,1)`.
pub fn init_default(kind: ModelKind, bounds: LatticeBox) -> Result<LatticeState> {
    if bounds.max_x < 1 || bounds.max_y < 1 {
        return Err(Error::BoxTooSmall {
            max_x: bounds.max_x,
            max_y: bounds.max_y,
            reason: "must contain (1,0) and (0,1)".into(),
        });
    }
    let (east, north) = match kind {
        ModelKind::Richardson => (CellState::Red, CellState::Red),
        ModelKind::Competition | ModelKind::HostileCompetition => (CellState::Red, CellState::Blue),
        ModelKind::HostileGrowth => (CellState::Black, CellState::Black),
    };
    Ok(LatticeState::from_sorted(kind, bounds, 0.0, [(Site::new(0, 1), north), (Site::new(1, 0), east)]))
}

/// Functional form of [`LatticeState::apply_event_mut`].
pub fn apply_event(state: &LatticeState, event: &ArrowEvent) -> Result<LatticeState> {
    let mut next = state.clone();
    next.apply_event_mut(event)?;
    Ok(next)
}

/// Whether the `half_width`-fattening (L-infinity) of the sites in state
/// `color` contains `point`.
pub fn fattened_contains(state: &LatticeState, color: CellState, point: (f64, f64), half_width: f64) -> bool {
    let (px, py) = point;
    let lo = |v: f64| (v - half_width).ceil().max(0.0);
    let hi = |v: f64, max: u32| (v + half_width).floor().min(max as f64);
    let (x0, x1) = (lo(px), hi(px, state.bounds.max_x));
    let (y0, y1) = (lo(py), hi(py, state.bounds.max_y));
    if x0 > x1 || y0 > y1 {
        return false;
    }
    (x0 as u32..=x1 as u32).any(|x| (y0 as u32..=y1 as u32).any(|y| state.get(Site::new(x, y)) == color))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::percolation::DirectedEdge;

    fn bounds() -> LatticeBox {
        LatticeBox::square(10).unwrap()
    }

    fn ev(time: f64, edge: DirectedEdge) -> ArrowEvent {
        ArrowEvent { time, edge }
    }

    #[test]
    fn default_competition_has_two_particles() {
        let s = init_default(ModelKind::Competition, bounds()).unwrap();
        let cells: Vec<_> = s.cells().collect();
        assert_eq!(cells, vec![(Site::new(0, 1), CellState::Blue), (Site::new(1, 0), CellState::Red)]);
    }

    #[test]
    fn hostile_background_is_white() {
        let s = init_default(ModelKind::HostileGrowth, bounds()).unwrap();
        assert_eq!(s.get(Site::new(5, 7)), CellState::White);
        assert_eq!(s.get(Site::new(1, 0)), CellState::Black);
        assert_eq!(s.get(Site::ORIGIN), CellState::Vacant);
    }

    #[test]
    fn richardson_starts_with_two_sites() {
        let s = init_default(ModelKind::Richardson, bounds()).unwrap();
        assert_eq!(s.marked().count(), 2);
    }

    #[test]
    fn tiny_box_is_rejected() {
        let b = LatticeBox::new(0, 5).unwrap();
        assert!(matches!(init_default(ModelKind::Competition, b), Err(Error::BoxTooSmall { .. })));
    }

    #[test]
    fn colonization_then_flip() {
        let s = init_default(ModelKind::Competition, bounds()).unwrap();
        let s = apply_event(&s, &ev(0.3, DirectedEdge::north(1, 0).unwrap())).unwrap();
        assert_eq!(s.get(Site::new(1, 1)), CellState::Red);
        let s = apply_event(&s, &ev(0.7, DirectedEdge::north(0, 1).unwrap())).unwrap();
        assert_eq!(s.get(Site::new(0, 2)), CellState::Blue);
        let s = apply_event(&s, &ev(0.9, DirectedEdge::east(0, 1).unwrap())).unwrap();
        assert_eq!(s.get(Site::new(1, 1)), CellState::Blue);
        assert_eq!(s.time, 0.9);
    }

    #[test]
    fn vacant_source_does_nothing() {
        let s = init_default(ModelKind::Competition, bounds()).unwrap();
        let t = apply_event(&s, &ev(1.0, DirectedEdge::east(3, 3).unwrap())).unwrap();
        assert_eq!(t.cells().count(), 2);
    }

    #[test]
    fn hostile_white_overwrites_black() {
        let mut s = init_default(ModelKind::HostileGrowth, bounds()).unwrap();
        s.apply_event_mut(&ev(0.1, DirectedEdge::east(1, 0).unwrap())).unwrap();
        assert_eq!(s.get(Site::new(2, 0)), CellState::Black);
        s.apply_event_mut(&ev(0.2, DirectedEdge::north(2, 0).unwrap())).unwrap();
        assert_eq!(s.get(Site::new(2, 1)), CellState::Black);
        s.apply_event_mut(&ev(0.3, DirectedEdge::east(1, 1).unwrap())).unwrap();
        assert_eq!(s.get(Site::new(2, 1)), CellState::White);
        assert_eq!(s.marked().count(), 3);
    }

    #[test]
    fn out_of_order_and_out_of_box_are_rejected() {
        let mut s = init_default(ModelKind::Competition, bounds()).unwrap();
        s.apply_event_mut(&ev(2.0, DirectedEdge::east(1, 0).unwrap())).unwrap();
        assert!(matches!(
            s.apply_event_mut(&ev(1.0, DirectedEdge::east(1, 0).unwrap())),
            Err(Error::EventOutOfOrder { .. })
        ));
        assert!(matches!(
            s.apply_event_mut(&ev(3.0, DirectedEdge::east(10, 0).unwrap())),
            Err(Error::OutOfBox(_))
        ));
    }

    #[test]
    fn fattening_uses_linf_half_width() {
        let mut s = LatticeState::empty(ModelKind::Richardson, bounds(), 0.0);
        s.set(Site::new(1, 0), CellState::Red).unwrap();
        assert!(fattened_contains(&s, CellState::Red, (1.4, 0.4), 0.5));
        assert!(!fattened_contains(&s, CellState::Red, (1.6, 0.0), 0.5));
        let c = init_default(ModelKind::Competition, bounds()).unwrap();
        // (0.5, 0.5) sits exactly at L-inf distance 1/2 from both particles
        assert!(fattened_contains(&c, CellState::Red, (0.5, 0.5), 0.5));
        assert!(fattened_contains(&c, CellState::Blue, (0.5, 0.5), 0.5));
        assert!(!fattened_contains(&c, CellState::Red, (0.5, 0.5), 0.4999));
        assert!(!fattened_contains(&c, CellState::Blue, (0.5, 0.5), 0.4999));
    }

    #[test]
    fn parse_names() {
        for k in ModelKind::ALL {
            assert_eq!(k.name().parse::<ModelKind>().unwrap(), k);
        }
        for c in CellState::ALL {
            assert_eq!(c.as_str().parse::<CellState>().unwrap(), c);
        }
        assert!("purple".parse::<CellState>().is_err());
    }
}
