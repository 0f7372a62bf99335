//! Event-driven forward engine.
//!
//! An arrow changes nothing unless, in some simulated model, the transfer
//! rule applied to its endpoints alters the target. Call such an edge live.
//! The engine only draws arrow times for live edges. Liveness can only appear
//! when an endpoint changes, and at that moment the edge's clock is started
//! from the current event key. Clocks of edges found dead at a bucket
//! boundary are dropped. Since each edge's arrows in a unit interval can be
//! regenerated on demand, the trajectory is identical to replaying the full
//! window stream (see [`replay_window`]), at a cost proportional to the
//! number of live edges.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::{init_default, transfer, CellState, LatticeState, ModelKind};
use crate::error::{Error, Result};
use crate::percolation::{window_events, ArrowClock, DirectedEdge, Direction, EventWindow, LatticeBox, Site};

/// How the box side is chosen for a run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[derive(Default)]
pub enum BoxPolicy {
    /// `L = ceil(3 t_max) + 32`.
    #[default]
    Default,
    Fixed(u32),
}

impl BoxPolicy {
    pub fn side(self, t_max: f64) -> u32 {
        match self {
            BoxPolicy::Default => (3.0 * t_max).ceil() as u32 + 32,
            BoxPolicy::Fixed(l) => l,
        }
    }

    pub fn bounds(self, t_max: f64) -> Result<LatticeBox> {
        LatticeBox::square(self.side(t_max))
    }
}


const BUCKET_WIDTH: f64 = 0.5;

/// Clock of one live edge. `local` is the box-local edge id
/// `2 * index(source) + direction`, which orders like the global edge rank
/// because box indices are column-major.
#[derive(Clone, Debug)]
struct Cursor {
    clock: ArrowClock,
    local: u64,
}

impl Cursor {
    #[inline]
    fn next_time(&self) -> f64 {
        self.clock.next_time()
    }

    #[inline]
    fn next_key(&self) -> u128 {
        local_key(self.clock.next_time(), self.local)
    }
}

#[inline]
fn endpoints(local: u64, height: usize) -> (usize, usize) {
    let src = (local >> 1) as usize;
    let tgt = if local & 1 == 0 { src + height } else { src + 1 };
    (src, tgt)
}

#[inline]
fn is_live(kinds: &[ModelKind], grids: &[Vec<CellState>], src: usize, tgt: usize) -> bool {
    kinds.iter().zip(grids).any(|(k, g)| transfer(*k, g[src], g[tgt]) != g[tgt])
}

#[inline]
fn local_key(time: f64, local: u64) -> u128 {
    ((time.to_bits() as u128) << 64) | local as u128
}

#[inline]
fn key_time(key: u128) -> f64 {
    f64::from_bits((key >> 64) as u64)
}

/// Sorts keys whose times lie in `[lo, hi]` by distributing them over
/// equal-width time bins first.
fn bin_sort(keys: &mut Vec<u128>, scratch: &mut Vec<u128>, counts: &mut Vec<u32>, lo: f64, hi: f64) {
    let n = keys.len();
    if n < 64 || hi <= lo {
        keys.sort_unstable();
        return;
    }
    let bins = (n / 4).max(1);
    let scale = bins as f64 / (hi - lo);
    let bin_of = |k: u128| (((key_time(k) - lo) * scale) as usize).min(bins - 1);
    counts.clear();
    counts.resize(bins + 1, 0);
    for &k in keys.iter() {
        counts[bin_of(k) + 1] += 1;
    }
    for i in 1..=bins {
        counts[i] += counts[i - 1];
    }
    scratch.clear();
    scratch.resize(n, 0);
    for &k in keys.iter() {
        let b = bin_of(k);
        scratch[counts[b] as usize] = k;
        counts[b] += 1;
    }
    // counts[b] now holds the end of bin b
    let mut begin = 0usize;
    for &end in counts.iter().take(bins) {
        let end = end as usize;
        let run = &mut scratch[begin..end];
        for i in 1..run.len() {
            let v = run[i];
            let mut j = i;
            while j > 0 && run[j - 1] > v {
                run[j] = run[j - 1];
                j -= 1;
            }
            run[j] = v;
        }
        begin = end;
    }
    std::mem::swap(keys, scratch);
}

/// Several models advanced together by one arrow stream.
pub struct Simulation {
    seed: u64,
    bounds: LatticeBox,
    horizon: f64,
    kinds: Vec<ModelKind>,
    grids: Vec<Vec<CellState>>,
    first_touch: Vec<f64>,
    held: Vec<bool>,
    cursors: Vec<Cursor>,
    fresh: Vec<Cursor>,
    batch: Vec<u128>,
    scratch: Vec<u128>,
    counts: Vec<u32>,
    late: BinaryHeap<Reverse<u128>>,
    time: f64,
    truncated: bool,
    events_applied: u64,
}

impl Simulation {
    /// Starts every model in its default initial configuration.
    pub fn new(seed: u64, kinds: &[ModelKind], bounds: LatticeBox, horizon: f64) -> Result<Self> {
        let inits = kinds.iter().map(|&k| init_default(k, bounds)).collect::<Result<Vec<_>>>()?;
        Self::from_states(seed, &inits, horizon)
    }

    /// Starts from arbitrary configurations sharing one box, all at time 0.
    pub fn from_states(seed: u64, states: &[LatticeState], horizon: f64) -> Result<Self> {
        let first = states.first().ok_or_else(|| Error::invalid("at least one model is required"))?;
        let bounds = first.bounds;
        EventWindow::new(bounds, horizon, seed)?;
        if states.iter().any(|s| s.bounds != bounds || s.time != 0.0) {
            return Err(Error::invalid("initial states must share the box and start at time 0"));
        }
        let n = bounds.num_sites();
        let kinds: Vec<ModelKind> = states.iter().map(|s| s.kind).collect();
        let grids = states
            .iter()
            .map(|s| {
                let mut g = vec![s.kind.background(); n];
                g[0] = CellState::Vacant;
                for (site, c) in s.cells() {
                    g[bounds.index(site)] = c;
                }
                g
            })
            .collect();
        let mut sim = Simulation {
            seed,
            bounds,
            horizon,
            kinds,
            grids,
            first_touch: vec![f64::INFINITY; n],
            held: vec![false; 2 * n],
            cursors: Vec::new(),
            fresh: Vec::new(),
            batch: Vec::new(),
            scratch: Vec::new(),
            counts: Vec::new(),
            late: BinaryHeap::new(),
            time: 0.0,
            truncated: false,
            events_applied: 0,
        };
        for s in states {
            for site in s.marked() {
                if bounds.on_boundary(site) {
                    sim.truncated = true;
                }
            }
            for (site, _) in s.cells() {
                let idx = bounds.index(site);
                sim.first_touch[idx] = 0.0;
                sim.wake(idx, 0, 0.0);
            }
        }
        let fresh = std::mem::take(&mut sim.fresh);
        sim.cursors.extend(fresh);
        Ok(sim)
    }

    pub fn kinds(&self) -> &[ModelKind] {
        &self.kinds
    }

    pub fn bounds(&self) -> LatticeBox {
        self.bounds
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Whether any model has marked a site on the outer box boundary.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn events_applied(&self) -> u64 {
        self.events_applied
    }

    /// Current state of `site` in the `model`-th simulated kind.
    pub fn cell(&self, model: usize, site: Site) -> CellState {
        if !self.bounds.contains(site) {
            return self.kinds[model].background();
        }
        self.grids[model][self.bounds.index(site)]
    }

    /// Time at which `site` first left its background state in any model;
    /// for a Richardson-only simulation this is the occupation time.
    pub fn first_touch(&self, site: Site) -> Option<f64> {
        if !self.bounds.contains(site) {
            return None;
        }
        let t = self.first_touch[self.bounds.index(site)];
        t.is_finite().then_some(t)
    }

    /// Deep copy of one model's configuration.
    pub fn snapshot(&self, model: usize) -> LatticeState {
        let kind = self.kinds[model];
        let grid = &self.grids[model];
        let b = self.bounds;
        let cells = b.sites().filter_map(|s| {
            let c = grid[b.index(s)];
            (c != kind.background() && !s.is_origin()).then_some((s, c))
        });
        LatticeState::from_sorted(kind, b, self.time, cells)
    }

    /// Applies every arrow with time `<= t`.
    pub fn advance_to(&mut self, t: f64) -> Result<()> {
        if t > self.horizon {
            return Err(Error::invalid(format!("time {t} beyond horizon {}", self.horizon)));
        }
        if t < self.time {
            return Err(Error::invalid(format!("cannot rewind from {} to {t}", self.time)));
        }
        while self.time < t {
            let until = (self.time + BUCKET_WIDTH).min(t);
            self.process_until(until);
        }
        Ok(())
    }

    fn process_until(&mut self, until: f64) {
        let horizon = self.horizon;
        let height = self.bounds.height();
        let mut batch = std::mem::take(&mut self.batch);
        batch.clear();
        let (kinds, grids, held) = (&self.kinds, &self.grids, &mut self.held);
        self.cursors.retain_mut(|c| {
            let (src, tgt) = endpoints(c.local, height);
            if !is_live(kinds, grids, src, tgt) {
                held[c.local as usize] = false;
                return false;
            }
            while c.next_time() <= until {
                batch.push(c.next_key());
                c.clock.advance();
            }
            c.next_time() <= horizon
        });
        bin_sort(&mut batch, &mut self.scratch, &mut self.counts, self.time, until);

        for &key in &batch {
            while let Some(&Reverse(l)) = self.late.peek() {
                if l >= key {
                    break;
                }
                self.late.pop();
                self.apply_key(l, until);
            }
            self.apply_key(key, until);
        }
        while let Some(Reverse(l)) = self.late.pop() {
            self.apply_key(l, until);
        }
        self.batch = batch;
        let fresh = std::mem::take(&mut self.fresh);
        for c in fresh {
            if c.next_time() <= horizon {
                self.cursors.push(c);
            } else {
                self.held[c.local as usize] = false;
            }
        }
        self.time = until;
    }

    #[inline]
    fn apply_key(&mut self, key: u128, until: f64) {
        let (src, tgt) = endpoints(key as u64, self.bounds.height());
        self.events_applied += 1;
        let mut changed = false;
        for (kind, grid) in self.kinds.iter().zip(self.grids.iter_mut()) {
            let next = transfer(*kind, grid[src], grid[tgt]);
            if next != grid[tgt] {
                grid[tgt] = next;
                changed = true;
                if next != kind.background() && self.bounds.on_boundary(self.bounds.site(tgt)) {
                    self.truncated = true;
                }
            }
        }
        if changed {
            if self.first_touch[tgt].is_infinite() {
                self.first_touch[tgt] = key_time(key);
            }
            self.wake(tgt, key, until);
        }
    }

    /// Starts clocks on the live edges around a site that just changed at
    /// event `key`. Arrows up to `until` go to the late heap.
    fn wake(&mut self, idx: usize, key: u128, until: f64) {
        let b = self.bounds;
        let site = b.site(idx);
        let mut edges = [None; 4];
        if !site.is_origin() {
            if site.x < b.max_x {
                edges[0] = DirectedEdge::new(site, Direction::East).ok();
            }
            if site.y < b.max_y {
                edges[1] = DirectedEdge::new(site, Direction::North).ok();
            }
        }
        for (slot, e) in DirectedEdge::inbound(site).enumerate() {
            edges[2 + slot] = Some(e);
        }
        let now = key_time(key);
        for edge in edges.into_iter().flatten() {
            let src = b.index(edge.source());
            let local = 2 * src + edge.direction() as usize;
            if self.held[local] {
                continue;
            }
            let (_, tgt) = endpoints(local as u64, b.height());
            if !is_live(&self.kinds, &self.grids, src, tgt) {
                continue;
            }
            self.held[local] = true;
            let mut c = Cursor { clock: ArrowClock::starting_near(self.seed, edge, now), local: local as u64 };
            while c.next_key() <= key {
                c.clock.advance();
            }
            while c.next_time() <= until {
                self.late.push(Reverse(c.next_key()));
                c.clock.advance();
            }
            self.fresh.push(c);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub time: f64,
    /// One state per simulated kind, in the series' kind order.
    pub states: Vec<LatticeState>,
}

/// Checkpointed configurations of one or several coupled models.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotSeries {
    pub seed: u64,
    pub kinds: Vec<ModelKind>,
    pub bounds: LatticeBox,
    pub t_max: f64,
    pub checkpoints: Vec<Checkpoint>,
    pub truncation_flag: bool,
}

impl SnapshotSeries {
    pub fn checkpoint_at(&self, t: f64) -> Result<&Checkpoint> {
        self.checkpoints
            .iter()
            .find(|c| (c.time - t).abs() <= 1e-9 * t.abs().max(1.0))
            .ok_or(Error::MissingCheckpoint(t))
    }

    pub fn state(&self, t: f64, kind: ModelKind) -> Result<&LatticeState> {
        let pos = self
            .kinds
            .iter()
            .position(|&k| k == kind)
            .ok_or_else(|| Error::invalid(format!("series does not contain {kind}")))?;
        Ok(&self.checkpoint_at(t)?.states[pos])
    }

    pub fn last(&self) -> Option<&Checkpoint> {
        self.checkpoints.last()
    }
}

fn validate_checkpoints(t_max: f64, checkpoints: &[f64]) -> Result<()> {
    if !(t_max >= 0.0 && t_max.is_finite()) {
        return Err(Error::invalid(format!("t_max must be finite and >= 0, got {t_max}")));
    }
    if checkpoints.iter().any(|&c| !(0.0..=t_max).contains(&c)) {
        return Err(Error::invalid("checkpoint times must lie in [0, t_max]"));
    }
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("checkpoint times must be strictly increasing"));
    }
    Ok(())
}

/// Runs several models on the same arrow stream, recording deep copies of
/// every model at each checkpoint. Truncation is flagged, not fatal.
pub fn coupled_run(seed: u64, kinds: &[ModelKind], t_max: f64, checkpoints: &[f64], policy: BoxPolicy) -> Result<SnapshotSeries> {
    if kinds.is_empty() {
        return Err(Error::invalid("at least one model is required"));
    }
    validate_checkpoints(t_max, checkpoints)?;
    let bounds = policy.bounds(t_max)?;
    let mut sim = Simulation::new(seed, kinds, bounds, t_max)?;
    let mut out = Vec::with_capacity(checkpoints.len());
    for &t in checkpoints {
        sim.advance_to(t)?;
        out.push(Checkpoint { time: t, states: (0..kinds.len()).map(|m| sim.snapshot(m)).collect() });
    }
    sim.advance_to(t_max)?;
    Ok(SnapshotSeries {
        seed,
        kinds: kinds.to_vec(),
        bounds,
        t_max,
        checkpoints: out,
        truncation_flag: sim.truncated(),
    })
}

pub fn run(seed: u64, kind: ModelKind, t_max: f64, checkpoints: &[f64], policy: BoxPolicy) -> Result<SnapshotSeries> {
    coupled_run(seed, &[kind], t_max, checkpoints, policy)
}

/// Reference path: replays the complete window stream through
/// [`LatticeState::apply_event_mut`]. Cost is proportional to box area times
/// horizon, so this is meant for small windows.
pub fn replay_window(window: &EventWindow, init: &LatticeState, checkpoints: &[f64]) -> Result<Vec<LatticeState>> {
    validate_checkpoints(window.horizon, checkpoints)?;
    let mut state = init.clone();
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut events = window_events(window).peekable();
    for &t in checkpoints {
        while let Some(ev) = events.next_if(|e| e.time <= t) {
            state.apply_event_mut(&ev)?;
        }
        let mut snap = state.clone();
        snap.time = t;
        out.push(snap);
    }
    Ok(out)
}
