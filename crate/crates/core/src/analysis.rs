//! Geometry on snapshots: scaled regions and containment checks, radial
//! shape profiles, monochromatic arcs around the corner `(1,1) t`, a
//! curvature diagnostic and PPM rendering.
//!
//! Points are in scaled coordinates `p = v / t` unless stated otherwise.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::fmt_f64;
use crate::models::{CellState, LatticeState, ModelKind, SnapshotSeries};
use crate::percolation::Site;

pub type Point = (f64, f64);

const ROOT: Point = (1.0, 1.0);

/// Regions of the closed first quadrant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum RegionSpec {
    /// `[0,1]^2`
    UnitSquare,
    /// Part of the unit square strictly above the diagonal.
    Q1,
    /// Part of the unit square strictly below the diagonal.
    Q2,
    /// `x - y > c`
    K1 { c: f64 },
    /// `y - x > c`
    K2 { c: f64 },
    /// Directions from `(1,1)` with argument in `(-pi/2 + eps, pi - eps)`.
    Cone { epsilon: f64 },
    /// Points outside the open unit square whose direction from `(1,1)` is
    /// within `measure / 2` of the direction of `center`.
    Sector { center: Point, measure: f64 },
    Scaled { region: Box<RegionSpec>, factor: f64 },
    Intersection { parts: Vec<RegionSpec> },
}

/// Angle of `p - (1,1)`, in `(-pi, pi]`.
pub fn root_angle(p: Point) -> f64 {
    (p.1 - ROOT.1).atan2(p.0 - ROOT.0)
}

/// Signed angular difference wrapped to `(-pi, pi]`.
fn wrap(a: f64) -> f64 {
    let mut d = a % (2.0 * PI);
    if d > PI {
        d -= 2.0 * PI;
    } else if d <= -PI {
        d += 2.0 * PI;
    }
    d
}

fn linf(a: f64, b: f64) -> f64 {
    a.abs().max(b.abs())
}

/// L-infinity distance from `p` to the ray from `origin` in direction `theta`.
fn ray_distance(p: Point, origin: Point, theta: f64) -> f64 {
    let (ux, uy) = (theta.cos(), theta.sin());
    let (dx, dy) = (p.0 - origin.0, p.1 - origin.1);
    let f = |s: f64| linf(dx - s * ux, dy - s * uy);
    // the minimum of this convex piecewise-linear function sits at s = 0 or at a kink
    let mut cands = vec![0.0];
    for (num, den) in [(dx - dy, ux - uy), (dx + dy, ux + uy), (dx, ux), (dy, uy)] {
        if den.abs() > 1e-15 {
            cands.push(num / den);
        }
    }
    cands.into_iter().filter(|&s| s >= 0.0).map(f).fold(f64::INFINITY, f64::min)
}

/// L-infinity distance from `p` to the closed unit square.
fn square_distance(p: Point) -> f64 {
    let dx = (-p.0).max(p.0 - 1.0).max(0.0);
    let dy = (-p.1).max(p.1 - 1.0).max(0.0);
    dx.max(dy)
}

impl RegionSpec {
    pub fn scaled(self, factor: f64) -> RegionSpec {
        RegionSpec::Scaled { region: Box::new(self), factor }
    }

    pub fn and(self, other: RegionSpec) -> RegionSpec {
        match self {
            RegionSpec::Intersection { mut parts } => {
                parts.push(other);
                RegionSpec::Intersection { parts }
            }
            r => RegionSpec::Intersection { parts: vec![r, other] },
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            RegionSpec::Cone { epsilon } if !(*epsilon > 0.0 && *epsilon < PI / 4.0) => {
                Err(Error::invalid(format!("cone epsilon must lie in (0, pi/4), got {epsilon}")))
            }
            RegionSpec::Sector { measure, .. } if !(*measure > 0.0 && *measure < 2.0 * PI) => {
                Err(Error::invalid(format!("sector measure must lie in (0, 2 pi), got {measure}")))
            }
            RegionSpec::Sector { center, .. } if *center == ROOT => Err(Error::invalid("sector center must differ from (1,1)")),
            RegionSpec::Scaled { factor, region } => {
                if !(*factor > 0.0 && factor.is_finite()) {
                    return Err(Error::invalid(format!("scale factor must be positive, got {factor}")));
                }
                region.validate()
            }
            RegionSpec::Intersection { parts } => parts.iter().try_for_each(|r| r.validate()),
            _ => Ok(()),
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        match self {
            RegionSpec::UnitSquare => (0.0..=1.0).contains(&p.0) && (0.0..=1.0).contains(&p.1),
            RegionSpec::Q1 => RegionSpec::UnitSquare.contains(p) && p.1 > p.0,
            RegionSpec::Q2 => RegionSpec::UnitSquare.contains(p) && p.0 > p.1,
            RegionSpec::K1 { c } => p.0 - p.1 > *c,
            RegionSpec::K2 { c } => p.1 - p.0 > *c,
            RegionSpec::Cone { epsilon } => {
                if p == ROOT {
                    return false;
                }
                let a = root_angle(p);
                a > -FRAC_PI_2 + epsilon && a < PI - epsilon
            }
            RegionSpec::Sector { center, measure } => {
                let open_square = p.0 > 0.0 && p.0 < 1.0 && p.1 > 0.0 && p.1 < 1.0;
                if open_square || p == ROOT {
                    return false;
                }
                wrap(root_angle(p) - root_angle(*center)).abs() <= measure / 2.0
            }
            RegionSpec::Scaled { region, factor } => region.contains((p.0 / factor, p.1 / factor)),
            RegionSpec::Intersection { parts } => parts.iter().all(|r| r.contains(p)),
        }
    }

    /// L-infinity distance from `p` to the complement, 0 outside.
    pub fn depth(&self, p: Point) -> f64 {
        if !self.contains(p) {
            return 0.0;
        }
        match self {
            RegionSpec::UnitSquare => p.0.min(1.0 - p.0).min(p.1).min(1.0 - p.1),
            RegionSpec::Q1 => RegionSpec::UnitSquare.depth(p).min((p.1 - p.0) / 2.0),
            RegionSpec::Q2 => RegionSpec::UnitSquare.depth(p).min((p.0 - p.1) / 2.0),
            RegionSpec::K1 { c } => (p.0 - p.1 - c) / 2.0,
            RegionSpec::K2 { c } => (p.1 - p.0 - c) / 2.0,
            RegionSpec::Cone { epsilon } => {
                ray_distance(p, ROOT, -FRAC_PI_2 + epsilon).min(ray_distance(p, ROOT, PI - epsilon))
            }
            RegionSpec::Sector { center, measure } => {
                let c = root_angle(*center);
                square_distance(p)
                    .min(ray_distance(p, ROOT, c - measure / 2.0))
                    .min(ray_distance(p, ROOT, c + measure / 2.0))
            }
            RegionSpec::Scaled { region, factor } => region.depth((p.0 / factor, p.1 / factor)) * factor,
            RegionSpec::Intersection { parts } => parts.iter().map(|r| r.depth(p)).fold(f64::INFINITY, f64::min),
        }
    }
}

fn scaled(site: Site, t: f64) -> Point {
    (site.x as f64 / t, site.y as f64 / t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContainmentReport {
    pub region: RegionSpec,
    pub color: CellState,
    pub t: f64,
    pub delta: f64,
    pub tested_site_count: usize,
    pub violating_sites: Vec<Site>,
    pub status: CheckStatus,
}

impl ContainmentReport {
    pub fn pass(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    pub fn violation_rate(&self) -> f64 {
        if self.tested_site_count == 0 {
            return 0.0;
        }
        self.violating_sites.len() as f64 / self.tested_site_count as f64
    }
}

fn check_time(state: &LatticeState, t: f64) -> Result<()> {
    if !(t > 0.0) || (state.time - t).abs() > 1e-9 * t.max(1.0) {
        return Err(Error::invalid(format!("snapshot time {} does not match t = {t}", state.time)));
    }
    Ok(())
}

/// Every site `v` of the box with `v/t` at depth `>= delta` inside `region`
/// must hold `color`.
pub fn check_containment(state: &LatticeState, color: CellState, region: &RegionSpec, t: f64, delta: f64) -> Result<ContainmentReport> {
    check_time(state, t)?;
    region.validate()?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!("delta must lie in (0, 1), got {delta}")));
    }
    let mut tested = 0;
    let mut violating = Vec::new();
    if t * delta >= 2.0 {
        for site in state.bounds.sites() {
            if site.is_origin() || region.depth(scaled(site, t)) < delta {
                continue;
            }
            tested += 1;
            if state.get(site) != color {
                violating.push(site);
            }
        }
    }
    let status = if tested == 0 {
        CheckStatus::Inconclusive
    } else if violating.is_empty() {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    };
    Ok(ContainmentReport {
        region: region.clone(),
        color,
        t,
        delta,
        tested_site_count: tested,
        violating_sites: violating,
        status,
    })
}

/// Fraction of `color` sites whose scaled position lies outside `region`.
pub fn outside_fraction(state: &LatticeState, color: CellState, region: &RegionSpec, t: f64) -> Result<f64> {
    check_time(state, t)?;
    let sites: Vec<Site> = state.sites_with(color).collect();
    if sites.is_empty() {
        return Ok(0.0);
    }
    let out = sites.iter().filter(|&&s| !region.contains(scaled(s, t))).count();
    Ok(out as f64 / sites.len() as f64)
}

/// Radial boundary profile on angles `theta_i = i (pi/2) / (n-1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeEstimate {
    pub angles: Vec<f64>,
    pub radius: Vec<f64>,
    pub stddev: Vec<f64>,
    pub replicates: usize,
}

impl ShapeEstimate {
    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.angles.iter().zip(&self.radius).map(|(a, r)| (r * a.cos(), r * a.sin()))
    }

    /// Largest `|r(theta) - reference(theta)|` over the grid.
    pub fn max_deviation<F: Fn(f64) -> f64>(&self, reference: F) -> f64 {
        self.angles.iter().zip(&self.radius).map(|(&a, &r)| (r - reference(a)).abs()).fold(0.0, f64::max)
    }

    /// `theta,radius,stddev`
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "theta,radius,stddev")?;
        for i in 0..self.angles.len() {
            writeln!(w, "{},{},{}", fmt_f64(self.angles[i]), fmt_f64(self.radius[i]), fmt_f64(self.stddev[i]))?;
        }
        Ok(())
    }

    fn from_samples(angles: Vec<f64>, samples: &[Vec<f64>]) -> Self {
        let k = samples.len();
        let mut radius = vec![0.0; angles.len()];
        let mut stddev = vec![0.0; angles.len()];
        for i in 0..angles.len() {
            let col: Vec<f64> = samples.iter().map(|s| s[i]).collect();
            let s = crate::stats::Summary::of(&col);
            radius[i] = s.mean;
            stddev[i] = if k > 1 { s.std_dev } else { 0.0 };
        }
        ShapeEstimate { angles, radius, stddev, replicates: k }
    }
}

/// Radial function of the unit square.
pub fn square_profile(theta: f64) -> f64 {
    1.0 / theta.cos().max(theta.sin())
}

pub fn angle_grid(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::invalid("need at least two angles"));
    }
    Ok((0..n).map(|i| i as f64 * FRAC_PI_2 / (n - 1) as f64).collect())
}

const RAY_STEP: f64 = 0.05;

/// Scaled radius along `theta` of the 1/2-fattening of the marked set: the
/// last point of the ray (sampled every 0.05 lattice units) whose nearest
/// site is marked, divided by `t`.
pub fn ray_radius(state: &LatticeState, theta: f64, t: f64) -> f64 {
    let (c, s) = (theta.cos(), theta.sin());
    let b = state.bounds;
    let reach = ((b.max_x as f64).powi(2) + (b.max_y as f64).powi(2)).sqrt() + 1.0;
    let steps = (reach / RAY_STEP) as usize;
    let mut last = 0.0;
    for k in 1..=steps {
        let r = k as f64 * RAY_STEP;
        let (x, y) = ((r * c).round(), (r * s).round());
        if x > b.max_x as f64 || y > b.max_y as f64 {
            break;
        }
        let site = Site::new(x as u32, y as u32);
        if state.kind.is_marked(state.get(site)) {
            last = r;
        }
    }
    last / t
}

/// Profile of the marked set at the last checkpoint of each series.
pub fn shape_from_snapshots(series: &[SnapshotSeries], kind: ModelKind, n_angles: usize) -> Result<ShapeEstimate> {
    if series.is_empty() {
        return Err(Error::invalid("need at least one series"));
    }
    let angles = angle_grid(n_angles)?;
    let mut samples = Vec::with_capacity(series.len());
    for s in series {
        if s.truncation_flag {
            return Err(Error::Truncated);
        }
        let cp = s.last().ok_or_else(|| Error::invalid("series has no checkpoint"))?;
        let state = s.state(cp.time, kind)?;
        if !(cp.time > 0.0) {
            return Err(Error::invalid("shape needs a positive checkpoint time"));
        }
        samples.push(angles.iter().map(|&a| ray_radius(state, a, cp.time)).collect());
    }
    Ok(ShapeEstimate::from_samples(angles, &samples))
}

/// Profile `r(theta) = 1 / mu(cos theta, sin theta)` from first-passage estimates.
pub fn shape_from_mu(seed: u64, n_angles: usize, n: u32, replicates: usize) -> Result<ShapeEstimate> {
    let angles = angle_grid(n_angles)?;
    let mut radius = Vec::with_capacity(n_angles);
    let mut stddev = Vec::with_capacity(n_angles);
    for (i, &a) in angles.iter().enumerate() {
        let m = crate::fpp::mu_estimate(crate::rng::replicate_seed(seed, i as u64), (a.cos(), a.sin()), n, replicates)?;
        radius.push(1.0 / m.summary.mean);
        stddev.push(m.summary.std_dev / m.summary.mean.powi(2));
    }
    Ok(ShapeEstimate { angles, radius, stddev, replicates })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorConfig {
    pub bins: usize,
    /// Annulus around the root in scaled units.
    pub r_inner: f64,
    pub r_outer: f64,
    /// Minimum share of the majority color for a bin to count as monochromatic.
    pub purity: f64,
    pub min_measure: f64,
}

impl Default for SectorConfig {
    fn default() -> Self {
        SectorConfig { bins: 1024, r_inner: 0.0, r_outer: f64::INFINITY, purity: 0.75, min_measure: 0.2 }
    }
}

impl SectorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.bins == 0 || !(self.r_inner >= 0.0 && self.r_outer > self.r_inner) {
            return Err(Error::invalid("sector config needs bins > 0 and 0 <= r_inner < r_outer"));
        }
        if !(self.purity > 0.5 && self.purity <= 1.0) || !(self.min_measure >= 0.0) {
            return Err(Error::invalid("purity must lie in (1/2, 1] and min_measure must be >= 0"));
        }
        Ok(())
    }
}

/// Angular range of the region outside the square, seen from `(1,1)`.
pub const OUTER_RANGE: (f64, f64) = (-FRAC_PI_2, PI);

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcSpan {
    pub start: f64,
    pub end: f64,
    pub color: CellState,
    pub measure: f64,
}

impl ArcSpan {
    pub fn overlap(&self, other: &ArcSpan) -> f64 {
        (self.end.min(other.end) - self.start.max(other.start)).max(0.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorReport {
    pub time: f64,
    pub root: Point,
    pub outer_sites: usize,
    pub arcs: Vec<ArcSpan>,
    pub uncovered_measure: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum BinClass {
    Empty,
    Mixed,
    Color(CellState),
}

/// Monochromatic arcs of the colored sites outside `[0,t]^2`, by angle
/// around `(t,t)`. Bins without sites inherit the class of their nearest
/// non-empty neighbours when those agree (or when only one side exists) and
/// are mixed otherwise.
pub fn sector_arcs(state: &LatticeState, t: f64, cfg: &SectorConfig) -> Result<SectorReport> {
    check_time(state, t)?;
    cfg.validate()?;
    let total = OUTER_RANGE.1 - OUTER_RANGE.0;
    let width = total / cfg.bins as f64;
    let mut red = vec![0u32; cfg.bins];
    let mut blue = vec![0u32; cfg.bins];
    let mut outer = 0;
    for (site, c) in state.cells() {
        if !c.is_colored() {
            continue;
        }
        let (x, y) = (site.x as f64, site.y as f64);
        if x <= t && y <= t {
            continue;
        }
        let r = (x - t).hypot(y - t) / t;
        if r < cfg.r_inner || r > cfg.r_outer {
            continue;
        }
        let a = (y - t).atan2(x - t);
        let bin = (((a - OUTER_RANGE.0) / width) as usize).min(cfg.bins - 1);
        outer += 1;
        match c {
            CellState::Red => red[bin] += 1,
            _ => blue[bin] += 1,
        }
    }
    let root = (t, t);
    if outer == 0 {
        return Ok(SectorReport { time: t, root, outer_sites: 0, arcs: Vec::new(), uncovered_measure: total });
    }
    let mut class: Vec<BinClass> = (0..cfg.bins)
        .map(|i| {
            let n = (red[i] + blue[i]) as f64;
            if n == 0.0 {
                BinClass::Empty
            } else if red[i] as f64 >= cfg.purity * n {
                BinClass::Color(CellState::Red)
            } else if blue[i] as f64 >= cfg.purity * n {
                BinClass::Color(CellState::Blue)
            } else {
                BinClass::Mixed
            }
        })
        .collect();
    let mut i = 0;
    while i < cfg.bins {
        if class[i] != BinClass::Empty {
            i += 1;
            continue;
        }
        let j = (i..cfg.bins).find(|&k| class[k] != BinClass::Empty).unwrap_or(cfg.bins);
        let left = i.checked_sub(1).map(|k| class[k]);
        let right = (j < cfg.bins).then(|| class[j]);
        let fill = match (left, right) {
            (Some(l), Some(r)) if l == r => l,
            (Some(_), Some(_)) => BinClass::Mixed,
            (Some(l), None) => l,
            (None, Some(r)) => r,
            (None, None) => BinClass::Mixed,
        };
        class[i..j].fill(fill);
        i = j;
    }
    let mut arcs = Vec::new();
    let mut i = 0;
    while i < cfg.bins {
        let j = (i..cfg.bins).find(|&k| class[k] != class[i]).unwrap_or(cfg.bins);
        if let BinClass::Color(color) = class[i] {
            let measure = (j - i) as f64 * width;
            if measure >= cfg.min_measure {
                arcs.push(ArcSpan {
                    start: OUTER_RANGE.0 + i as f64 * width,
                    end: OUTER_RANGE.0 + j as f64 * width,
                    color,
                    measure,
                });
            }
        }
        i = j;
    }
    let covered: f64 = arcs.iter().map(|a| a.measure).sum();
    Ok(SectorReport { time: t, root, outer_sites: outer, arcs, uncovered_measure: total - covered })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcMatch {
    pub earlier: ArcSpan,
    pub later: Option<ArcSpan>,
    /// Overlap with the matched arc as a fraction of the earlier arc.
    pub overlap_fraction: f64,
    pub start_drift: f64,
    pub end_drift: f64,
    pub survives: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub t_from: f64,
    pub t_to: f64,
    pub matches: Vec<ArcMatch>,
}

impl StabilityReport {
    pub fn any_survivor(&self) -> bool {
        self.matches.iter().any(|m| m.survives)
    }
}

/// Minimum overlap fraction for an arc to count as surviving.
pub const SURVIVAL_OVERLAP: f64 = 0.8;

/// Matches arcs of two reports: each earlier arc is paired with the later
/// arc of the same color overlapping it most.
pub fn match_arcs(earlier: &SectorReport, later: &SectorReport) -> StabilityReport {
    let matches = earlier
        .arcs
        .iter()
        .map(|a| {
            let best = later
                .arcs
                .iter()
                .filter(|b| b.color == a.color)
                .map(|b| (a.overlap(b), b))
                .filter(|(o, _)| *o > 0.0)
                .max_by(|x, y| x.0.total_cmp(&y.0));
            match best {
                Some((o, b)) => {
                    let frac = o / a.measure;
                    ArcMatch {
                        earlier: *a,
                        later: Some(*b),
                        overlap_fraction: frac,
                        start_drift: b.start - a.start,
                        end_drift: b.end - a.end,
                        survives: frac >= SURVIVAL_OVERLAP,
                    }
                }
                None => ArcMatch {
                    earlier: *a,
                    later: None,
                    overlap_fraction: 0.0,
                    start_drift: f64::NAN,
                    end_drift: f64::NAN,
                    survives: false,
                },
            }
        })
        .collect();
    StabilityReport { t_from: earlier.time, t_to: later.time, matches }
}

pub fn sector_stability(series: &SnapshotSeries, kind: ModelKind, t_from: f64, t_to: f64, cfg: &SectorConfig) -> Result<StabilityReport> {
    let a = sector_arcs(series.state(t_from, kind)?, t_from, cfg)?;
    let b = sector_arcs(series.state(t_to, kind)?, t_to, cfg)?;
    Ok(match_arcs(&a, &b))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvaturePoint {
    pub theta: f64,
    pub point: Point,
    pub in_cone: bool,
    /// Circumradius through the sample and its neighbours; `None` when flat.
    pub radius: Option<f64>,
    pub flat: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub epsilon: f64,
    pub flat_cap: f64,
    pub points: Vec<CurvaturePoint>,
    pub in_cone: usize,
    pub min_radius: Option<f64>,
    pub max_radius: Option<f64>,
    pub flat_in_cone: usize,
}

/// Circle through three consecutive profile points for every interior
/// sample. Summary figures cover the samples inside the cone only.
pub fn curvature_diagnostic(shape: &ShapeEstimate, epsilon: f64, flat_cap: f64) -> Result<CurvatureReport> {
    let cone = RegionSpec::Cone { epsilon };
    cone.validate()?;
    if shape.angles.len() < 32 {
        return Err(Error::invalid("curvature needs a profile on at least 32 angles"));
    }
    let pts: Vec<Point> = shape.points().collect();
    let mut points = Vec::new();
    for i in 1..pts.len() - 1 {
        let (a, b, c) = (pts[i - 1], pts[i], pts[i + 1]);
        let ab = (b.0 - a.0).hypot(b.1 - a.1);
        let bc = (c.0 - b.0).hypot(c.1 - b.1);
        let ca = (a.0 - c.0).hypot(a.1 - c.1);
        let cross = ((b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)).abs();
        let radius = if cross <= 1e-12 * ab * bc.max(ca) { None } else { Some(ab * bc * ca / (2.0 * cross)) };
        let flat = radius.is_none_or(|r| r > flat_cap);
        points.push(CurvaturePoint { theta: shape.angles[i], point: b, in_cone: cone.contains(b), radius: radius.filter(|_| !flat), flat });
    }
    let inside: Vec<&CurvaturePoint> = points.iter().filter(|p| p.in_cone).collect();
    let radii = inside.iter().filter_map(|p| p.radius);
    let min_radius = radii.clone().reduce(f64::min);
    let max_radius = radii.reduce(f64::max);
    Ok(CurvatureReport {
        epsilon,
        flat_cap,
        in_cone: inside.len(),
        flat_in_cone: inside.iter().filter(|p| p.flat).count(),
        points,
        min_radius,
        max_radius,
    })
}

pub fn pixel(state: CellState) -> [u8; 3] {
    match state {
        CellState::Red => [220, 40, 40],
        CellState::Blue => [40, 60, 220],
        CellState::Black => [0, 0, 0],
        CellState::White => [255, 255, 255],
        CellState::Vacant => [245, 245, 245],
    }
}

/// Binary PPM, one pixel per site, origin at the bottom left.
pub fn write_ppm<W: Write>(mut w: W, state: &LatticeState) -> Result<()> {
    let b = state.bounds;
    write!(w, "P6\n{} {}\n255\n", b.width(), b.height())?;
    let mut row = Vec::with_capacity(3 * b.width());
    for y in (0..=b.max_y).rev() {
        row.clear();
        for x in 0..=b.max_x {
            row.extend_from_slice(&pixel(state.get(Site::new(x, y))));
        }
        w.write_all(&row)?;
    }
    Ok(())
}

pub fn render_ppm(state: &LatticeState) -> Vec<u8> {
    let mut out = Vec::new();
    write_ppm(&mut out, state).expect("writing to a vector");
    out
}
