//! Reverse-time queries on the arrow structure.
//!
//! Every query works with event keys `(time, edge rank)` rather than raw
//! times, so "the state of a site just before an arrow" is an exact notion
//! and answers coincide bit for bit with the forward engines.

use std::collections::{BinaryHeap, HashMap};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::fmt_f64;
use crate::models::{CellState, LatticeState, ModelKind};
use crate::percolation::{edge_events, event_key, DirectedEdge, EventWindow, Site};

/// Default cap on the explicit recursion stack of [`DualEngine::competition_color`].
pub const DEFAULT_DEPTH_CAP: usize = 1 << 22;

/// One piece of a reverse path: the path sits at `site` for times in
/// `[t_exit, t_enter]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub site: Site,
    pub t_enter: f64,
    pub t_exit: f64,
}

/// The reverse path from `(origin, time)` that jumps across every inbound
/// arrow it meets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VoterPathTrace {
    pub origin: Site,
    pub time: f64,
    pub segments: Vec<Segment>,
    pub terminus: Site,
}

impl VoterPathTrace {
    /// Number of jumps taken.
    pub fn jumps(&self) -> usize {
        self.segments.len() - 1
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "site_x,site_y,t_enter,t_exit")?;
        for s in &self.segments {
            writeln!(w, "{},{},{},{}", s.site.x, s.site.y, fmt_f64(s.t_enter), fmt_f64(s.t_exit))?;
        }
        Ok(())
    }
}

/// Sites occupied at time 0 from which a directed space-time path reaches
/// `(origin, time)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AncestorSet {
    pub origin: Site,
    pub time: f64,
    pub members: Vec<Site>,
}

impl AncestorSet {
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, site: Site) -> bool {
        self.members.binary_search(&site).is_ok()
    }
}

/// Key bound admitting every arrow with time `<= t`.
#[inline]
fn bound_for(t: f64) -> u128 {
    event_key(t, u64::MAX)
}

#[inline]
fn key_time(key: u128) -> f64 {
    f64::from_bits((key >> 64) as u64)
}

#[inline]
fn key_rank(key: u128) -> u64 {
    key as u64
}

/// Per-window cache of edge histories plus the competition memo.
pub struct DualEngine {
    window: EventWindow,
    edges: HashMap<u64, Vec<u128>>,
    inbound: HashMap<Site, Vec<u128>>,
    memo: HashMap<(Site, u32), CellState>,
    memo_init: Option<LatticeState>,
    depth_cap: usize,
}

impl DualEngine {
    pub fn new(window: EventWindow) -> Self {
        DualEngine {
            window,
            edges: HashMap::new(),
            inbound: HashMap::new(),
            memo: HashMap::new(),
            memo_init: None,
            depth_cap: DEFAULT_DEPTH_CAP,
        }
    }

    pub fn with_depth_cap(mut self, cap: usize) -> Self {
        self.depth_cap = cap;
        self
    }

    pub fn window(&self) -> &EventWindow {
        &self.window
    }

    fn check(&self, z: Site, t: f64) -> Result<()> {
        if !self.window.bounds.contains(z) {
            return Err(Error::OutOfBox(z));
        }
        if !(0.0..=self.window.horizon).contains(&t) {
            return Err(Error::invalid(format!("time {t} outside [0, {}]", self.window.horizon)));
        }
        Ok(())
    }

    fn edge_keys(&mut self, edge: DirectedEdge) -> &[u128] {
        let (seed, horizon) = (self.window.seed, self.window.horizon);
        self.edges.entry(edge.rank()).or_insert_with(|| {
            edge_events(seed, edge, horizon).into_iter().map(|t| event_key(t, edge.rank())).collect()
        })
    }

    fn inbound_keys(&mut self, site: Site) -> &[u128] {
        if !self.inbound.contains_key(&site) {
            let mut keys: Vec<u128> = Vec::new();
            for e in DirectedEdge::inbound(site) {
                keys.extend_from_slice(self.edge_keys(e));
            }
            keys.sort_unstable();
            self.inbound.insert(site, keys);
        }
        &self.inbound[&site]
    }

    /// Number of inbound arrows of `site` with key `<= bound`.
    fn inbound_count(&mut self, site: Site, bound: u128) -> usize {
        self.inbound_keys(site).partition_point(|&k| k <= bound)
    }

    pub fn trace_voter_path(&mut self, z: Site, t: f64) -> Result<VoterPathTrace> {
        self.check(z, t)?;
        let mut segments = Vec::new();
        let (mut site, mut bound, mut upper) = (z, bound_for(t), t);
        loop {
            let n = self.inbound_count(site, bound);
            if n == 0 {
                segments.push(Segment { site, t_enter: upper, t_exit: 0.0 });
                break;
            }
            let key = self.inbound_keys(site)[n - 1];
            let s = key_time(key);
            segments.push(Segment { site, t_enter: upper, t_exit: s });
            site = DirectedEdge::from_rank(key_rank(key)).source();
            bound = key - 1;
            upper = s;
        }
        Ok(VoterPathTrace { origin: z, time: t, terminus: site, segments })
    }

    /// Hostile-model color of `(z, t)`: the initial color of the voter
    /// path's terminus.
    pub fn voter_color(&mut self, z: Site, t: f64, init: &LatticeState) -> Result<CellState> {
        if !init.kind.is_hostile() {
            return Err(Error::invalid("voter_color needs a hostile-model initial state"));
        }
        let trace = self.trace_voter_path(z, t)?;
        Ok(init.get(trace.terminus))
    }

    /// Competition color of `(z, t)` by backward recursion over inbound
    /// arrows. The state of a site after its first `n` inbound arrows is
    /// memoized under `(site, n)`.
    pub fn competition_color(&mut self, z: Site, t: f64, init: &LatticeState) -> Result<CellState> {
        if init.kind != ModelKind::Competition {
            return Err(Error::invalid("competition_color needs a competition initial state"));
        }
        self.check(z, t)?;
        if self.memo_init.as_ref() != Some(init) {
            self.memo.clear();
            self.memo_init = Some(init.clone());
        }
        let n = self.inbound_count(z, bound_for(t));
        let mut stack: Vec<(Site, u32)> = vec![(z, n as u32)];
        while let Some(&(site, n)) = stack.last() {
            if self.memo.contains_key(&(site, n)) {
                stack.pop();
                continue;
            }
            if n == 0 {
                self.memo.insert((site, 0), init.get(site));
                stack.pop();
                continue;
            }
            let key = self.inbound_keys(site)[n as usize - 1];
            let source = DirectedEdge::from_rank(key_rank(key)).source();
            let m = self.inbound_count(source, key - 1) as u32;
            let resolved = match self.memo.get(&(source, m)) {
                Some(c) if c.is_colored() => Some(*c),
                Some(_) => self.memo.get(&(site, n - 1)).copied(),
                None => {
                    stack.push((source, m));
                    None
                }
            };
            match resolved {
                Some(c) => {
                    self.memo.insert((site, n), c);
                    stack.pop();
                }
                None if self.memo.contains_key(&(source, m)) => stack.push((site, n - 1)),
                None => {}
            }
            if stack.len() > self.depth_cap {
                return Err(Error::DepthExceeded(self.depth_cap));
            }
        }
        Ok(self.memo[&(z, n as u32)])
    }

    /// Reverse reachability from `(z, t)`. For every site `x` in the
    /// south-west cone the largest key bound `b(x)` such that the occupancy
    /// of `x` after arrows `<= b(x)` still reaches `(z, t)` is found in
    /// decreasing order, Dijkstra style. Members are the initially marked
    /// sites of `init` that are reached at all.
    pub fn potential_ancestors(&mut self, z: Site, t: f64, init: &LatticeState) -> Result<AncestorSet> {
        self.check(z, t)?;
        let mut best: HashMap<Site, u128> = HashMap::new();
        let mut heap: BinaryHeap<(u128, Site)> = BinaryHeap::new();
        best.insert(z, bound_for(t));
        heap.push((bound_for(t), z));
        let mut members = Vec::new();
        while let Some((b, y)) = heap.pop() {
            if best.get(&y) != Some(&b) {
                continue;
            }
            if init.kind.is_marked(init.get(y)) {
                members.push(y);
            }
            for edge in DirectedEdge::inbound(y) {
                let keys = self.edge_keys(edge);
                let n = keys.partition_point(|&k| k <= b);
                if n == 0 {
                    continue;
                }
                let cand = keys[n - 1] - 1;
                let x = edge.source();
                if best.get(&x).is_none_or(|&old| cand > old) {
                    best.insert(x, cand);
                    heap.push((cand, x));
                }
            }
        }
        members.sort_unstable();
        Ok(AncestorSet { origin: z, time: t, members })
    }
}

pub fn trace_voter_path(window: &EventWindow, z: Site, t: f64) -> Result<VoterPathTrace> {
    DualEngine::new(*window).trace_voter_path(z, t)
}

pub fn voter_color(window: &EventWindow, z: Site, t: f64, init: &LatticeState) -> Result<CellState> {
    DualEngine::new(*window).voter_color(z, t, init)
}

pub fn competition_color(window: &EventWindow, z: Site, t: f64, init: &LatticeState) -> Result<CellState> {
    DualEngine::new(*window).competition_color(z, t, init)
}

pub fn potential_ancestors(window: &EventWindow, z: Site, t: f64, init: &LatticeState) -> Result<AncestorSet> {
    DualEngine::new(*window).potential_ancestors(z, t, init)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::init_default;
    use crate::LatticeBox;

    fn window(seed: u64) -> EventWindow {
        EventWindow::square(12, 8.0, seed).unwrap()
    }

    #[test]
    fn axis_paths_stay_on_axis() {
        for seed in 0..10 {
            let tr = trace_voter_path(&window(seed), Site::new(0, 7), 8.0).unwrap();
            assert!(tr.segments.iter().all(|s| s.site.x == 0 && s.site.y <= 7));
            assert_eq!(tr.segments.last().unwrap().t_exit, 0.0);
            for w in tr.segments.windows(2) {
                assert_eq!(w[0].t_exit, w[1].t_enter);
            }
        }
    }

    #[test]
    fn time_zero_returns_initial_state() {
        let w = window(1);
        let init = init_default(ModelKind::HostileCompetition, w.bounds).unwrap();
        assert_eq!(voter_color(&w, Site::new(1, 0), 0.0, &init).unwrap(), CellState::Red);
        assert_eq!(voter_color(&w, Site::new(4, 4), 0.0, &init).unwrap(), CellState::White);
        let tr = trace_voter_path(&w, Site::new(5, 5), 0.0).unwrap();
        assert_eq!(tr.segments.len(), 1);
        assert_eq!(tr.terminus, Site::new(5, 5));
    }

    #[test]
    fn protected_sites() {
        let w = window(2);
        let init = init_default(ModelKind::Competition, w.bounds).unwrap();
        let occ = init_default(ModelKind::Richardson, w.bounds).unwrap();
        assert_eq!(competition_color(&w, Site::new(1, 0), 8.0, &init).unwrap(), CellState::Red);
        assert_eq!(competition_color(&w, Site::new(0, 1), 8.0, &init).unwrap(), CellState::Blue);
        let a = potential_ancestors(&w, Site::new(0, 1), 5.0, &occ).unwrap();
        assert_eq!(a.members, vec![Site::new(0, 1)]);
        assert!(potential_ancestors(&w, Site::new(3, 3), 0.0, &occ).unwrap().is_empty());
    }

    #[test]
    fn depth_cap_is_enforced() {
        let w = EventWindow::new(LatticeBox::square(20).unwrap(), 15.0, 3).unwrap();
        let init = init_default(ModelKind::Competition, w.bounds).unwrap();
        let mut eng = DualEngine::new(w).with_depth_cap(1);
        assert!(matches!(eng.competition_color(Site::new(9, 9), 15.0, &init), Err(Error::DepthExceeded(1))));
    }

    #[test]
    fn rejects_bad_queries() {
        let w = window(0);
        assert!(trace_voter_path(&w, Site::new(13, 0), 1.0).is_err());
        assert!(trace_voter_path(&w, Site::new(1, 0), 9.0).is_err());
        let init = init_default(ModelKind::Competition, w.bounds).unwrap();
        assert!(voter_color(&w, Site::new(1, 1), 1.0, &init).is_err());
    }
}
