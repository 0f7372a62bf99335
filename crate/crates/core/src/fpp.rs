//! Oriented first-passage percolation with i.i.d. mean-one exponential edge
//! weights, and the two-step block walk along the diagonal.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Gamma};

use crate::error::{Error, Result};
use crate::io::fmt_f64;
use crate::models::{run, BoxPolicy, ModelKind, Simulation};
use crate::percolation::{DirectedEdge, Direction, LatticeBox, Site};
use crate::rng::{draw, exp1, replicate_seed, stream_key, CounterStream, Domain};
use crate::stats::{ks_test_one, ks_test_two, KsOutcome, Summary};

/// Weight of every NE edge whose endpoints lie in the box. Edges out of the
/// origin and edges leaving the box have no weight.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeWeights {
    seed: Option<u64>,
    bounds: LatticeBox,
    east: Vec<f64>,
    north: Vec<f64>,
}

impl EdgeWeights {
    /// Draws the weights; each depends only on `(seed, edge)`.
    pub fn sample(seed: u64, bounds: LatticeBox) -> Self {
        let mut w = Self::from_fn(bounds, |e| exp1(draw(stream_key(seed, Domain::EdgeWeights, e.rank()), 0)));
        w.seed = Some(seed);
        w
    }

    /// Weights from an arbitrary positive sampler.
    pub fn from_fn<F: FnMut(DirectedEdge) -> f64>(bounds: LatticeBox, mut f: F) -> Self {
        let n = bounds.num_sites();
        let mut east = vec![0.0; n];
        let mut north = vec![0.0; n];
        for e in bounds.edges() {
            let i = bounds.index(e.source());
            match e.direction() {
                Direction::East => east[i] = f(e),
                Direction::North => north[i] = f(e),
            }
        }
        EdgeWeights { seed: None, bounds, east, north }
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn bounds(&self) -> LatticeBox {
        self.bounds
    }

    pub fn weight(&self, edge: DirectedEdge) -> Option<f64> {
        if !self.bounds.contains_edge(&edge) {
            return None;
        }
        let i = self.bounds.index(edge.source());
        Some(match edge.direction() {
            Direction::East => self.east[i],
            Direction::North => self.north[i],
        })
    }

    pub fn set_weight(&mut self, edge: DirectedEdge, w: f64) -> Result<()> {
        if !self.bounds.contains_edge(&edge) {
            return Err(Error::OutOfBox(edge.target()));
        }
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::invalid(format!("edge weight must be positive and finite, got {w}")));
        }
        let i = self.bounds.index(edge.source());
        match edge.direction() {
            Direction::East => self.east[i] = w,
            Direction::North => self.north[i] = w,
        }
        Ok(())
    }

    /// All weights in edge-rank order.
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.bounds.edges().map(|e| self.weight(e).expect("in-box edge"))
    }
}

pub fn sample_weights(seed: u64, bounds: LatticeBox) -> EdgeWeights {
    EdgeWeights::sample(seed, bounds)
}

/// Passage times from a set of sources. `None` marks unreached sites.
#[derive(Clone, Debug, PartialEq)]
pub struct PassageField {
    bounds: LatticeBox,
    sources: Vec<Site>,
    times: Vec<Option<f64>>,
}

impl PassageField {
    pub fn bounds(&self) -> LatticeBox {
        self.bounds
    }

    pub fn sources(&self) -> &[Site] {
        &self.sources
    }

    pub fn get(&self, site: Site) -> Option<f64> {
        if !self.bounds.contains(site) {
            return None;
        }
        self.times[self.bounds.index(site)]
    }

    /// `x,y,T` per site in x-major order; unreached sites print `inf`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x,y,T")?;
        for s in self.bounds.sites() {
            match self.get(s) {
                Some(t) => writeln!(w, "{},{},{}", s.x, s.y, fmt_f64(t))?,
                None => writeln!(w, "{},{},inf", s.x, s.y)?,
            }
        }
        Ok(())
    }
}

/// Exact oriented passage times by dynamic programming in topological order.
pub fn passage_times(weights: &EdgeWeights, sources: &[Site]) -> Result<PassageField> {
    let b = weights.bounds;
    if sources.is_empty() {
        return Err(Error::invalid("at least one source is required"));
    }
    let mut times: Vec<Option<f64>> = vec![None; b.num_sites()];
    for &s in sources {
        if !b.contains(s) {
            return Err(Error::OutOfBox(s));
        }
        times[b.index(s)] = Some(0.0);
    }
    let h = b.height();
    // column-major indices: every predecessor has a smaller index
    for x in 0..b.width() {
        for y in 0..h {
            let i = x * h + y;
            if times[i] == Some(0.0) {
                continue;
            }
            let mut best: Option<f64> = None;
            if x > 0 && (x - 1, y) != (0, 0) {
                if let Some(t) = times[i - h] {
                    best = Some(t + weights.east[i - h]);
                }
            }
            if y > 0 && (x, y - 1) != (0, 0) {
                if let Some(t) = times[i - 1] {
                    let c = t + weights.north[i - 1];
                    best = Some(best.map_or(c, |b: f64| b.min(c)));
                }
            }
            times[i] = best;
        }
    }
    let mut sources = sources.to_vec();
    sources.sort_unstable();
    sources.dedup();
    Ok(PassageField { bounds: b, sources, times })
}

/// The two occupied sites of the default initial configuration.
pub const DEFAULT_SOURCES: [Site; 2] = [Site { x: 1, y: 0 }, Site { x: 0, y: 1 }];

/// Monte Carlo estimate of the time constant in one direction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuEstimate {
    pub direction: (f64, f64),
    pub n: u32,
    pub target: Site,
    pub replicates: usize,
    pub summary: Summary,
    pub ci99: (f64, f64),
}

/// `T(sources, round(n * direction)) / n` averaged over `replicates` weight
/// fields drawn from seeds derived from `seed`.
pub fn mu_estimate(seed: u64, direction: (f64, f64), n: u32, replicates: usize) -> Result<MuEstimate> {
    let (a, b) = direction;
    if !(a >= 0.0 && b >= 0.0 && a + b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::invalid("direction must lie in the closed first quadrant"));
    }
    if n == 0 || replicates == 0 {
        return Err(Error::invalid("n and replicates must be at least 1"));
    }
    let tx = (n as f64 * a).round();
    let ty = (n as f64 * b).round();
    if tx > crate::percolation::MAX_COORD as f64 || ty > crate::percolation::MAX_COORD as f64 {
        return Err(Error::BoxTooSmall { max_x: u32::MAX, max_y: u32::MAX, reason: "target outside the addressable box".into() });
    }
    let target = Site::new(tx as u32, ty as u32);
    if target.is_origin() {
        return Err(Error::invalid("target rounds to the origin"));
    }
    let bounds = LatticeBox::new(target.x.max(1), target.y.max(1))?;
    let samples: Vec<f64> = (0..replicates as u64)
        .into_par_iter()
        .map(|i| {
            let w = EdgeWeights::sample(replicate_seed(seed, i), bounds);
            let f = passage_times(&w, &DEFAULT_SOURCES).expect("sources in box");
            f.get(target).expect("target reachable") / n as f64
        })
        .collect();
    let summary = Summary::of(&samples);
    Ok(MuEstimate { direction, n, target, replicates, summary, ci99: summary.confidence_interval(0.99) })
}

/// Displacement of one two-step block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Step {
    /// `+(2,0)`
    East2,
    /// `+(1,1)`
    Diagonal,
    /// `+(0,2)`
    North2,
}

impl Step {
    pub fn displacement(self) -> (u32, u32) {
        match self {
            Step::East2 => (2, 0),
            Step::Diagonal => (1, 1),
            Step::North2 => (0, 2),
        }
    }
}

/// The six edge weights of the two-step neighbourhood of a point `p`:
/// `p->p+e1`, `p->p+e2`, then the two edges out of each of those.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoStepBlock {
    pub first_east: f64,
    pub first_north: f64,
    pub east_then_east: f64,
    pub east_then_north: f64,
    pub north_then_east: f64,
    pub north_then_north: f64,
}

impl TwoStepBlock {
    /// Block `k` of the walk seeded by `seed`.
    pub fn sample(seed: u64, k: u64) -> Self {
        let mut s = CounterStream::new(seed, Domain::WalkBlocks, k);
        TwoStepBlock {
            first_east: s.next_exp(),
            first_north: s.next_exp(),
            east_then_east: s.next_exp(),
            east_then_north: s.next_exp(),
            north_then_east: s.next_exp(),
            north_then_north: s.next_exp(),
        }
    }

    /// Weights of the paths EE, EN, NE, NN.
    pub fn path_weights(&self) -> [f64; 4] {
        [
            self.first_east + self.east_then_east,
            self.first_east + self.east_then_north,
            self.first_north + self.north_then_east,
            self.first_north + self.north_then_north,
        ]
    }

    /// Fastest of the four two-step paths.
    pub fn best(&self) -> (Step, f64) {
        let w = self.path_weights();
        let steps = [Step::East2, Step::Diagonal, Step::Diagonal, Step::North2];
        let mut k = 0;
        for i in 1..4 {
            if w[i] < w[k] {
                k = i;
            }
        }
        (steps[k], w[k])
    }

    /// Two steps, each along the lighter outgoing edge.
    pub fn greedy(&self) -> f64 {
        if self.first_east < self.first_north {
            self.first_east + self.east_then_east.min(self.east_then_north)
        } else {
            self.first_north + self.north_then_east.min(self.north_then_north)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkStep {
    pub step: Step,
    pub time: f64,
    pub elapsed: f64,
    pub position: Site,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagonalWalkStats {
    pub seed: u64,
    pub steps: Vec<WalkStep>,
}

impl DiagonalWalkStats {
    pub fn position(&self) -> Site {
        self.steps.last().map_or(Site::ORIGIN, |s| s.position)
    }

    pub fn elapsed(&self) -> f64 {
        self.steps.last().map_or(0.0, |s| s.elapsed)
    }

    /// `k,Xx,Xy,Tk,Sk` with `k` starting at 1.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "k,Xx,Xy,Tk,Sk")?;
        for (k, s) in self.steps.iter().enumerate() {
            let (dx, dy) = s.step.displacement();
            writeln!(w, "{},{},{},{},{}", k + 1, dx, dy, fmt_f64(s.time), fmt_f64(s.elapsed))?;
        }
        Ok(())
    }
}

/// Walk from the origin taking the fastest two-step path of a fresh block
/// at each step.
pub fn diagonal_walk(seed: u64, k_max: usize) -> Result<DiagonalWalkStats> {
    if k_max == 0 {
        return Err(Error::invalid("k_max must be at least 1"));
    }
    let mut steps = Vec::with_capacity(k_max);
    let (mut pos, mut elapsed) = (Site::ORIGIN, 0.0);
    for k in 0..k_max as u64 {
        let (step, time) = TwoStepBlock::sample(seed, k).best();
        let (dx, dy) = step.displacement();
        pos = Site::new(pos.x + dx, pos.y + dy);
        elapsed += time;
        steps.push(WalkStep { step, time, elapsed, position: pos });
    }
    Ok(DiagonalWalkStats { seed, steps })
}

/// Greedy two-step totals on blocks `0..trials` of `seed`, the same blocks
/// [`diagonal_walk`] uses.
pub fn greedy_two_step(seed: u64, trials: usize) -> Result<Vec<f64>> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    Ok((0..trials as u64).map(|k| TwoStepBlock::sample(seed, k).greedy()).collect())
}

/// Statistics of the first block over independent trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FirstStepSummary {
    pub trials: usize,
    /// Counts of `(2,0)`, `(1,1)`, `(0,2)`.
    pub counts: [usize; 3],
    pub best_time: Summary,
    pub greedy_time: Summary,
    /// Trials where the greedy total was below the best of the four paths.
    pub greedy_below_best: usize,
}

impl FirstStepSummary {
    pub fn frequency(&self, step: Step) -> f64 {
        let i = match step {
            Step::East2 => 0,
            Step::Diagonal => 1,
            Step::North2 => 2,
        };
        self.counts[i] as f64 / self.trials as f64
    }
}

/// First block of the walks seeded `replicate_seed(seed, i)`, `i < trials`.
pub fn first_step_summary(seed: u64, trials: usize) -> Result<FirstStepSummary> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let mut counts = [0usize; 3];
    let mut best = Vec::with_capacity(trials);
    let mut greedy = Vec::with_capacity(trials);
    let mut below = 0;
    for i in 0..trials as u64 {
        let block = TwoStepBlock::sample(replicate_seed(seed, i), 0);
        let (step, t) = block.best();
        counts[match step {
            Step::East2 => 0,
            Step::Diagonal => 1,
            Step::North2 => 2,
        }] += 1;
        let g = block.greedy();
        if g < t {
            below += 1;
        }
        best.push(t);
        greedy.push(g);
    }
    Ok(FirstStepSummary {
        trials,
        counts,
        best_time: Summary::of(&best),
        greedy_time: Summary::of(&greedy),
        greedy_below_best: below,
    })
}

/// Forward and first-passage occupation times at one probe.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeComparison {
    pub probe: Site,
    /// Occupation times from the forward Richardson engine, censored at the horizon.
    pub forward: Vec<f64>,
    /// `min(T((1,0),z), T((0,1),z))`, censored at the horizon.
    pub passage: Vec<f64>,
    pub two_sample: KsOutcome,
    /// For probes on an axis at distance `k >= 2`: both samples against Gamma(k-1, 1).
    pub axis_law: Option<(KsOutcome, KsOutcome)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub seed: u64,
    pub replicates: usize,
    pub horizon: f64,
    pub alpha: f64,
    pub probes: Vec<ProbeComparison>,
}

impl EquivalenceReport {
    pub fn all_accepted(&self) -> bool {
        self.probes.iter().all(|p| p.two_sample.accepted && p.axis_law.is_none_or(|(a, b)| a.accepted && b.accepted))
    }
}

/// Compares occupation times of the forward engine against first-passage
/// times from independent weight fields. Replicate `i` uses seed
/// `replicate_seed(seed, i)` for both engines; their streams are disjoint.
pub fn richardson_equivalence(seed: u64, replicates: usize, horizon: f64, probes: &[Site], alpha: f64) -> Result<EquivalenceReport> {
    if probes.is_empty() || replicates == 0 {
        return Err(Error::invalid("need at least one probe and one replicate"));
    }
    if probes.iter().any(|p| p.is_origin()) {
        return Err(Error::invalid("the origin is never occupied"));
    }
    let max_x = probes.iter().map(|p| p.x).max().unwrap_or(0).max(1);
    let max_y = probes.iter().map(|p| p.y).max().unwrap_or(0).max(1);
    let side = max_x.max(max_y) + 1;
    let bounds = LatticeBox::square(side)?;
    let (forward, passage): (Vec<Vec<f64>>, Vec<Vec<f64>>) = (0..replicates as u64)
        .into_par_iter()
        .map(|i| {
            let s = replicate_seed(seed, i);
            let mut sim = Simulation::new(s, &[ModelKind::Richardson], bounds, horizon).expect("valid window");
            sim.advance_to(horizon).expect("within horizon");
            let f: Vec<f64> = probes.iter().map(|&p| sim.first_touch(p).unwrap_or(horizon).min(horizon)).collect();
            let field = passage_times(&EdgeWeights::sample(s, bounds), &DEFAULT_SOURCES).expect("sources in box");
            let g: Vec<f64> = probes.iter().map(|&p| field.get(p).map_or(horizon, |t| t.min(horizon))).collect();
            (f, g)
        })
        .unzip();
    let probes = probes
        .iter()
        .enumerate()
        .map(|(j, &probe)| {
            let fwd: Vec<f64> = forward.iter().map(|r| r[j]).collect();
            let pas: Vec<f64> = passage.iter().map(|r| r[j]).collect();
            let two_sample = ks_test_two(&fwd, &pas, alpha);
            let k = probe.x.max(probe.y);
            let axis_law = ((probe.x == 0 || probe.y == 0) && k >= 2).then(|| {
                let g = Gamma::new((k - 1) as f64, 1.0).expect("valid gamma");
                let cdf = |x: f64| g.cdf(x);
                (ks_test_one(&fwd, cdf, alpha), ks_test_one(&pas, cdf, alpha))
            });
            ProbeComparison { probe, forward: fwd, passage: pas, two_sample, axis_law }
        })
        .collect();
    Ok(EquivalenceReport { seed, replicates, horizon, alpha, probes })
}

/// Shape radius estimate from a forward Richardson run, for cross-checks
/// against [`mu_estimate`]: the largest `n` with `n * direction` occupied
/// at time `t`, divided by `t`.
pub fn forward_radius(seed: u64, direction: (f64, f64), t: f64) -> Result<f64> {
    let series = run(seed, ModelKind::Richardson, t, &[t], BoxPolicy::Default)?;
    let state = &series.checkpoints[0].states[0];
    let (a, b) = direction;
    let norm = a.max(b);
    let (a, b) = (a / norm, b / norm);
    let mut n = 0u32;
    loop {
        let s = Site::new(((n + 1) as f64 * a).round() as u32, ((n + 1) as f64 * b).round() as u32);
        if !state.bounds.contains(s) || state.get(s) != crate::models::CellState::Red {
            break;
        }
        n += 1;
    }
    Ok(n as f64 / t)
}
