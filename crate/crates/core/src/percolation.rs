//! The percolation structure: independent rate-1 Poisson arrow processes on
//! every directed edge `x -> x+(1,0)` and `x -> x+(0,1)` of the first
//! quadrant, origin excluded as a source.
//!
//! Each edge's time axis is cut into unit intervals `[k, k+1)`. Inside an
//! interval the arrows are cumulative mean-one exponential gaps started at
//! `k` and stopped at `k+1`, drawn from a counter-based stream keyed by the
//! master seed, the edge and `k`. Any edge's history can therefore be
//! regenerated on its own from any time onward, and extending a horizon only
//! appends times.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::fmt_f64;
use crate::rng::{draw, stream_key, CounterStream, Domain};

/// Largest coordinate a lattice box may reach.
pub const MAX_COORD: u32 = (1 << 30) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site {
    pub x: u32,
    pub y: u32,
}

impl Site {
    pub const ORIGIN: Site = Site { x: 0, y: 0 };

    pub const fn new(x: u32, y: u32) -> Self {
        Site { x, y }
    }

    pub fn is_origin(self) -> bool {
        self == Site::ORIGIN
    }

    pub fn as_point(self) -> (f64, f64) {
        (self.x as f64, self.y as f64)
    }
}

impl std::fmt::Display for Site {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    /// `+(1,0)`
    East,
    /// `+(0,1)`
    North,
}

impl Direction {
    pub fn letter(self) -> char {
        match self {
            Direction::East => 'E',
            Direction::North => 'N',
        }
    }
}

/// An oriented edge of the structure. The origin has no outgoing edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DirectedEdge {
    source: Site,
    direction: Direction,
}

impl DirectedEdge {
    pub fn new(source: Site, direction: Direction) -> Result<Self> {
        if source.is_origin() {
            return Err(Error::invalid("the origin has no outgoing edges"));
        }
        if source.x > MAX_COORD || source.y > MAX_COORD {
            return Err(Error::invalid("edge source coordinate too large"));
        }
        Ok(DirectedEdge { source, direction })
    }

    pub fn east(x: u32, y: u32) -> Result<Self> {
        Self::new(Site::new(x, y), Direction::East)
    }

    pub fn north(x: u32, y: u32) -> Result<Self> {
        Self::new(Site::new(x, y), Direction::North)
    }

    pub fn source(&self) -> Site {
        self.source
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn target(&self) -> Site {
        match self.direction {
            Direction::East => Site::new(self.source.x + 1, self.source.y),
            Direction::North => Site::new(self.source.x, self.source.y + 1),
        }
    }

    /// Order-preserving integer encoding: `(x, y, direction)` lexicographic.
    #[inline]
    pub fn rank(&self) -> u64 {
        ((self.source.x as u64) << 33) | ((self.source.y as u64) << 1) | self.direction as u64
    }

    #[inline]
    pub(crate) fn from_rank(rank: u64) -> Self {
        let direction = if rank & 1 == 0 { Direction::East } else { Direction::North };
        DirectedEdge {
            source: Site::new((rank >> 33) as u32, ((rank >> 1) & 0xFFFF_FFFF) as u32),
            direction,
        }
    }

    /// The (at most two) edges pointing into `site`.
    pub fn inbound(site: Site) -> impl Iterator<Item = DirectedEdge> {
        let west = (site.x >= 1)
            .then(|| Site::new(site.x - 1, site.y))
            .filter(|s| !s.is_origin())
            .map(|s| DirectedEdge { source: s, direction: Direction::East });
        let south = (site.y >= 1)
            .then(|| Site::new(site.x, site.y - 1))
            .filter(|s| !s.is_origin())
            .map(|s| DirectedEdge { source: s, direction: Direction::North });
        west.into_iter().chain(south)
    }
}

/// Inclusive site rectangle `[0, max_x] x [0, max_y]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeBox {
    pub max_x: u32,
    pub max_y: u32,
}

impl LatticeBox {
    pub fn new(max_x: u32, max_y: u32) -> Result<Self> {
        if max_x > MAX_COORD || max_y > MAX_COORD {
            return Err(Error::BoxTooSmall {
                max_x,
                max_y,
                reason: format!("coordinates are limited to {MAX_COORD}"),
            });
        }
        Ok(LatticeBox { max_x, max_y })
    }

    /// The square `[0, side]^2`.
    pub fn square(side: u32) -> Result<Self> {
        Self::new(side, side)
    }

    pub fn width(&self) -> usize {
        self.max_x as usize + 1
    }

    pub fn height(&self) -> usize {
        self.max_y as usize + 1
    }

    pub fn num_sites(&self) -> usize {
        self.width() * self.height()
    }

    pub fn contains(&self, site: Site) -> bool {
        site.x <= self.max_x && site.y <= self.max_y
    }

    pub fn contains_edge(&self, edge: &DirectedEdge) -> bool {
        self.contains(edge.source()) && self.contains(edge.target())
    }

    pub fn on_boundary(&self, site: Site) -> bool {
        site.x == self.max_x || site.y == self.max_y
    }

    /// Column-major index, consistent with the `(x, y)` order of [`Site`].
    #[inline]
    pub fn index(&self, site: Site) -> usize {
        site.x as usize * self.height() + site.y as usize
    }

    #[inline]
    pub fn site(&self, index: usize) -> Site {
        let h = self.height();
        Site::new((index / h) as u32, (index % h) as u32)
    }

    /// Sites in `(x, y)` lexicographic order.
    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        (0..=self.max_x).flat_map(move |x| (0..=self.max_y).map(move |y| Site::new(x, y)))
    }

    /// Every edge with both endpoints in the box, in rank order.
    pub fn edges(&self) -> impl Iterator<Item = DirectedEdge> + '_ {
        self.sites().filter(|s| !s.is_origin()).flat_map(move |s| {
            let east = (s.x < self.max_x).then_some(DirectedEdge { source: s, direction: Direction::East });
            let north = (s.y < self.max_y).then_some(DirectedEdge { source: s, direction: Direction::North });
            east.into_iter().chain(north)
        })
    }

    pub fn num_edges(&self) -> usize {
        let (w, h) = (self.max_x as usize, self.max_y as usize);
        // east edges: w per row, north edges: h per column, minus the two out of the origin
        let all = w * (h + 1) + h * (w + 1);
        all - usize::from(w > 0) - usize::from(h > 0)
    }
}

/// A timestamped arrow. Events order by time, ties broken by edge rank.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ArrowEvent {
    pub time: f64,
    pub edge: DirectedEdge,
}

impl ArrowEvent {
    #[inline]
    pub(crate) fn from_key(key: u128) -> Self {
        ArrowEvent {
            time: f64::from_bits((key >> 64) as u64),
            edge: DirectedEdge::from_rank(key as u64),
        }
    }
}

/// Packs a non-negative time and an edge rank into one totally ordered key.
#[inline]
pub(crate) fn event_key(time: f64, rank: u64) -> u128 {
    debug_assert!(time >= 0.0);
    ((time.to_bits() as u128) << 64) | rank as u128
}

impl PartialEq for ArrowEvent {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ArrowEvent {}

impl PartialOrd for ArrowEvent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ArrowEvent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.time.total_cmp(&other.time).then_with(|| self.edge.cmp(&other.edge))
    }
}

/// Finite truncation of the structure to a box and a time horizon.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventWindow {
    pub bounds: LatticeBox,
    pub horizon: f64,
    pub seed: u64,
}

impl EventWindow {
    pub fn new(bounds: LatticeBox, horizon: f64, seed: u64) -> Result<Self> {
        if bounds.max_x < 1 || bounds.max_y < 1 {
            return Err(Error::BoxTooSmall {
                max_x: bounds.max_x,
                max_y: bounds.max_y,
                reason: "side must be at least 1".into(),
            });
        }
        if !(horizon >= 0.0 && horizon.is_finite()) {
            return Err(Error::invalid(format!("horizon must be finite and >= 0, got {horizon}")));
        }
        Ok(EventWindow { bounds, horizon, seed })
    }

    pub fn square(side: u32, horizon: f64, seed: u64) -> Result<Self> {
        Self::new(LatticeBox::square(side)?, horizon, seed)
    }

    pub fn edge_stream(&self, edge: DirectedEdge) -> EdgeStream {
        EdgeStream::new(self.seed, edge, self.horizon)
    }
}

/// Unbounded arrow clock of one edge, positioned on its next arrow.
#[derive(Clone, Debug)]
pub(crate) struct ArrowClock {
    base: u64,
    interval: u64,
    gaps: CounterStream,
    next: f64,
}

impl ArrowClock {
    pub(crate) fn new(seed: u64, edge: DirectedEdge) -> Self {
        Self::from_interval(seed, edge, 0)
    }

    /// Clock positioned on the first arrow at or after `floor(t)`.
    pub(crate) fn starting_near(seed: u64, edge: DirectedEdge, t: f64) -> Self {
        Self::from_interval(seed, edge, t.max(0.0).floor() as u64)
    }

    fn from_interval(seed: u64, edge: DirectedEdge, k: u64) -> Self {
        let base = stream_key(seed, Domain::Arrows, edge.rank());
        let mut c = ArrowClock { base, interval: k, gaps: CounterStream::from_key(draw(base, k)), next: k as f64 };
        c.advance();
        c
    }

    #[inline]
    pub(crate) fn next_time(&self) -> f64 {
        self.next
    }

    #[inline]
    pub(crate) fn advance(&mut self) {
        loop {
            let t = self.next + self.gaps.next_exp();
            if t < (self.interval + 1) as f64 {
                self.next = t;
                return;
            }
            self.interval += 1;
            self.gaps = CounterStream::from_key(draw(self.base, self.interval));
            self.next = self.interval as f64;
        }
    }
}

/// Arrow times of one edge, in increasing order, up to a horizon.
#[derive(Clone, Debug)]
pub struct EdgeStream {
    edge: DirectedEdge,
    clock: ArrowClock,
    horizon: f64,
}

impl EdgeStream {
    pub fn new(seed: u64, edge: DirectedEdge, horizon: f64) -> Self {
        EdgeStream { edge, clock: ArrowClock::new(seed, edge), horizon }
    }

    pub fn edge(&self) -> DirectedEdge {
        self.edge
    }
}

impl Iterator for EdgeStream {
    type Item = f64;

    #[inline]
    fn next(&mut self) -> Option<f64> {
        let t = self.clock.next_time();
        if t > self.horizon {
            return None;
        }
        self.clock.advance();
        Some(t)
    }
}

/// Arrow times on `edge` in `(0, horizon]`.
pub fn edge_events(seed: u64, edge: DirectedEdge, horizon: f64) -> Vec<f64> {
    if !(horizon > 0.0) {
        return Vec::new();
    }
    EdgeStream::new(seed, edge, horizon).collect()
}

/// Merged, time-ordered stream over every edge of the window.
pub struct WindowEvents {
    streams: Vec<EdgeStream>,
    heap: BinaryHeap<Reverse<(u128, usize)>>,
}

impl Iterator for WindowEvents {
    type Item = ArrowEvent;

    fn next(&mut self) -> Option<ArrowEvent> {
        let Reverse((key, slot)) = self.heap.pop()?;
        if let Some(t) = self.streams[slot].next() {
            self.heap.push(Reverse((event_key(t, self.streams[slot].edge.rank()), slot)));
        }
        Some(ArrowEvent::from_key(key))
    }
}

pub fn window_events(window: &EventWindow) -> WindowEvents {
    let mut streams: Vec<EdgeStream> = window.bounds.edges().map(|e| window.edge_stream(e)).collect();
    let mut heap = BinaryHeap::with_capacity(streams.len());
    for (slot, s) in streams.iter_mut().enumerate() {
        if let Some(t) = s.next() {
            heap.push(Reverse((event_key(t, s.edge.rank()), slot)));
        }
    }
    WindowEvents { streams, heap }
}

/// Events of the edges pointing into `site`, merged in time order.
pub fn inbound_events(window: &EventWindow, site: Site) -> Result<Vec<ArrowEvent>> {
    if !window.bounds.contains(site) {
        return Err(Error::OutOfBox(site));
    }
    let mut out: Vec<ArrowEvent> = DirectedEdge::inbound(site)
        .flat_map(|edge| edge_events(window.seed, edge, window.horizon).into_iter().map(move |time| ArrowEvent { time, edge }))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Debug dump: `time,source_x,source_y,direction` with 17 significant digits.
pub fn write_events_csv<W: Write>(mut w: W, events: impl IntoIterator<Item = ArrowEvent>) -> Result<()> {
    writeln!(w, "time,source_x,source_y,direction")?;
    for ev in events {
        let s = ev.edge.source();
        writeln!(w, "{},{},{},{}", fmt_f64(ev.time), s.x, s.y, ev.edge.direction().letter())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window(side: u32, horizon: f64, seed: u64) -> EventWindow {
        EventWindow::square(side, horizon, seed).unwrap()
    }

    #[test]
    fn origin_has_no_out_edges() {
        assert!(DirectedEdge::east(0, 0).is_err());
        assert!(DirectedEdge::north(0, 0).is_err());
    }

    #[test]
    fn rank_roundtrips_and_preserves_order() {
        let a = DirectedEdge::east(3, 9).unwrap();
        let b = DirectedEdge::north(3, 9).unwrap();
        let c = DirectedEdge::east(4, 0).unwrap();
        assert_eq!(DirectedEdge::from_rank(a.rank()), a);
        assert_eq!(DirectedEdge::from_rank(b.rank()), b);
        assert!(a < b && b < c);
        assert!(a.rank() < b.rank() && b.rank() < c.rank());
    }

    #[test]
    fn zero_horizon_is_empty() {
        let e = DirectedEdge::east(2, 2).unwrap();
        assert!(edge_events(5, e, 0.0).is_empty());
        assert_eq!(window_events(&window(1, 0.0, 5)).count(), 0);
    }

    #[test]
    fn edge_events_are_deterministic_and_increasing() {
        let e = DirectedEdge::north(4, 1).unwrap();
        let a = edge_events(11, e, 50.0);
        assert_eq!(a, edge_events(11, e, 50.0));
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        assert!(a.iter().all(|&t| t > 0.0 && t <= 50.0));
    }

    #[test]
    fn extending_horizon_only_appends() {
        let e = DirectedEdge::east(1, 3).unwrap();
        let short = edge_events(2, e, 10.0);
        let long = edge_events(2, e, 25.0);
        assert_eq!(&long[..short.len()], &short[..]);
        assert!(long[short.len()..].iter().all(|&t| t > 10.0));
    }

    #[test]
    fn unit_box_stream_is_merge_of_two_edges() {
        let w = window(1, 30.0, 17);
        let e1 = DirectedEdge::east(0, 1).unwrap();
        let e2 = DirectedEdge::north(1, 0).unwrap();
        let mut expected: Vec<ArrowEvent> = edge_events(17, e1, 30.0)
            .into_iter()
            .map(|time| ArrowEvent { time, edge: e1 })
            .chain(edge_events(17, e2, 30.0).into_iter().map(|time| ArrowEvent { time, edge: e2 }))
            .collect();
        expected.sort();
        let got: Vec<ArrowEvent> = window_events(&w).collect();
        assert_eq!(got.len(), expected.len());
        for (g, e) in got.iter().zip(&expected) {
            assert_eq!(g.time.to_bits(), e.time.to_bits());
            assert_eq!(g.edge, e.edge);
        }
    }

    #[test]
    fn window_stream_is_sorted_and_complete() {
        let w = window(6, 8.0, 3);
        let events: Vec<ArrowEvent> = window_events(&w).collect();
        assert!(events.windows(2).all(|p| p[0] < p[1]));
        let total: usize = w.bounds.edges().map(|e| edge_events(3, e, 8.0).len()).sum();
        assert_eq!(events.len(), total);
        assert_eq!(w.bounds.edges().count(), w.bounds.num_edges());
    }

    #[test]
    fn inbound_of_protected_sites_is_empty() {
        let w = window(5, 20.0, 1);
        assert!(inbound_events(&w, Site::new(1, 0)).unwrap().is_empty());
        assert!(inbound_events(&w, Site::new(0, 1)).unwrap().is_empty());
    }

    #[test]
    fn inbound_on_vertical_axis_is_single_edge() {
        let w = window(8, 20.0, 4);
        let evs = inbound_events(&w, Site::new(0, 5)).unwrap();
        let edge = DirectedEdge::north(0, 4).unwrap();
        assert!(evs.iter().all(|e| e.edge == edge));
        assert_eq!(evs.len(), edge_events(4, edge, 20.0).len());
    }

    #[test]
    fn inbound_rejects_out_of_box() {
        let w = window(3, 1.0, 1);
        assert!(matches!(inbound_events(&w, Site::new(4, 0)), Err(Error::OutOfBox(_))));
    }

    #[test]
    fn csv_dump_uses_seventeen_digits() {
        let ev = ArrowEvent { time: 0.1, edge: DirectedEdge::east(2, 3).unwrap() };
        let mut buf = Vec::new();
        write_events_csv(&mut buf, [ev]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "time,source_x,source_y,direction\n1.0000000000000001e-1,2,3,E\n");
    }
}
