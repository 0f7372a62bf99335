//! Verification suites shared by the command line and the acceptance tests.
//!
//! Each suite returns a typed outcome plus a flat list of [`Check`]s. Only
//! exact checks (couplings, dual agreement, DP against enumeration) count as
//! hard failures; statistical checks are reported with their thresholds.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{check_containment, outside_fraction, sector_stability, RegionSpec, SectorConfig};
use crate::dual::DualEngine;
use crate::error::{Error, Result};
use crate::fpp::{first_step_summary, mu_estimate, passage_times, richardson_equivalence, EdgeWeights, EquivalenceReport, FirstStepSummary, MuEstimate, DEFAULT_SOURCES};
use crate::models::{coupled_run, init_default, BoxPolicy, CellState, ModelKind, Simulation};
use crate::percolation::{DirectedEdge, EventWindow, LatticeBox, Site};
use crate::rng::{CounterStream, Domain};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Exact,
    Statistical,
    Report,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub kind: CheckKind,
    pub passed: bool,
    pub value: f64,
    pub detail: String,
}

impl Check {
    fn new(name: &str, kind: CheckKind, passed: bool, value: f64, detail: String) -> Self {
        Check { name: name.to_string(), kind, passed, value, detail }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub hard_failure: bool,
    pub all_passed: bool,
    #[serde(default)]
    pub details: serde_json::Value,
}

impl SuiteReport {
    pub fn new(suite: &str, checks: Vec<Check>) -> Self {
        let hard_failure = checks.iter().any(|c| c.kind == CheckKind::Exact && !c.passed);
        let all_passed = checks.iter().all(|c| c.passed);
        SuiteReport { suite: suite.to_string(), checks, hard_failure, all_passed, details: serde_json::Value::Null }
    }

    pub fn with_details<T: Serialize>(mut self, details: &T) -> Result<Self> {
        self.details = serde_json::to_value(details)?;
        Ok(self)
    }
}

fn seeds(base: u64, n: usize) -> Vec<u64> {
    (0..n as u64).map(|i| base.wrapping_add(i)).collect()
}

fn set_of(state: &crate::models::LatticeState, c: CellState) -> BTreeSet<Site> {
    state.sites_with(c).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingOutcome {
    pub runs: usize,
    pub checkpoints: usize,
    /// Violations per identity, in the order of [`COUPLING_IDENTITIES`].
    pub violations: [usize; 6],
    pub truncated_runs: usize,
}

pub const COUPLING_IDENTITIES: [&str; 6] = ["Z = R u B", "R n B = 0", "Q c Z", "R1 c R", "B1 c B", "Q = R1 u B1"];

impl CouplingOutcome {
    pub fn total_violations(&self) -> usize {
        self.violations.iter().sum()
    }

    pub fn checks(&self) -> Vec<Check> {
        COUPLING_IDENTITIES
            .iter()
            .zip(self.violations)
            .map(|(name, v)| Check::new(name, CheckKind::Exact, v == 0, v as f64, format!("{} runs x {} checkpoints", self.runs, self.checkpoints)))
            .collect()
    }
}

/// Runs all four models on one stream per seed and checks the set
/// identities at `checkpoints` evenly spaced times up to `t`.
pub fn coupling_suite(base_seed: u64, runs: usize, t: f64, checkpoints: usize) -> Result<CouplingOutcome> {
    let times: Vec<f64> = (1..=checkpoints).map(|k| t * k as f64 / checkpoints as f64).collect();
    let per_run: Vec<Result<([usize; 6], bool)>> = seeds(base_seed, runs)
        .into_par_iter()
        .map(|seed| {
            let s = coupled_run(seed, &ModelKind::ALL, t, &times, BoxPolicy::Default)?;
            let mut v = [0usize; 6];
            for cp in &s.checkpoints {
                let z = set_of(&cp.states[0], CellState::Red);
                let r = set_of(&cp.states[1], CellState::Red);
                let b = set_of(&cp.states[1], CellState::Blue);
                let q = set_of(&cp.states[2], CellState::Black);
                let r1 = set_of(&cp.states[3], CellState::Red);
                let b1 = set_of(&cp.states[3], CellState::Blue);
                let rb: BTreeSet<Site> = r.union(&b).copied().collect();
                let rb1: BTreeSet<Site> = r1.union(&b1).copied().collect();
                v[0] += z.symmetric_difference(&rb).count();
                v[1] += r.intersection(&b).count();
                v[2] += q.difference(&z).count();
                v[3] += r1.difference(&r).count();
                v[4] += b1.difference(&b).count();
                v[5] += q.symmetric_difference(&rb1).count();
            }
            Ok((v, s.truncation_flag))
        })
        .collect();
    let mut out = CouplingOutcome { runs, checkpoints, violations: [0; 6], truncated_runs: 0 };
    for r in per_run {
        let (v, trunc) = r?;
        for (acc, v) in out.violations.iter_mut().zip(v) {
            *acc += v;
        }
        out.truncated_runs += trunc as usize;
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DualOutcome {
    pub samples: usize,
    pub competition_mismatches: usize,
    pub hostile_growth_mismatches: usize,
    pub hostile_competition_mismatches: usize,
    pub ancestor_mismatches: usize,
}

impl DualOutcome {
    pub fn agreement(&self) -> bool {
        self.competition_mismatches + self.hostile_growth_mismatches + self.hostile_competition_mismatches + self.ancestor_mismatches == 0
    }

    pub fn checks(&self) -> Vec<Check> {
        let n = self.samples;
        [
            ("competition_color = forward", self.competition_mismatches),
            ("voter_color = hostile growth", self.hostile_growth_mismatches),
            ("voter_color = hostile competition", self.hostile_competition_mismatches),
            ("ancestors empty iff vacant", self.ancestor_mismatches),
        ]
        .into_iter()
        .map(|(name, m)| Check::new(name, CheckKind::Exact, m == 0, m as f64, format!("{m} mismatches in {n} samples")))
        .collect()
    }
}

/// Samples `(z, t)` uniformly from `[0, 1.5 horizon]^2 x [0, horizon]` and
/// compares dual answers with the forward engines on the same seed.
pub fn dual_suite(base_seed: u64, runs: usize, samples_per_run: usize, horizon: f64) -> Result<DualOutcome> {
    let side = (1.5 * horizon).ceil() as u32;
    let bounds = LatticeBox::square(side.max(2))?;
    let parts: Vec<Result<DualOutcome>> = seeds(base_seed, runs)
        .into_par_iter()
        .map(|seed| {
            let window = EventWindow::new(bounds, horizon, seed)?;
            let mut rng = CounterStream::new(seed, Domain::Sampling, 1);
            let mut queries: Vec<(f64, Site)> = (0..samples_per_run)
                .map(|_| {
                    let t = rng.next_f64() * horizon;
                    let x = rng.next_below(side as u64 + 1) as u32;
                    let y = rng.next_below(side as u64 + 1) as u32;
                    (t, Site::new(x, y))
                })
                .collect();
            queries.sort_by(|a, b| a.0.total_cmp(&b.0));
            let inits = ModelKind::ALL.map(|k| init_default(k, bounds));
            let inits: Vec<_> = inits.into_iter().collect::<Result<_>>()?;
            let mut sim = Simulation::new(seed, &ModelKind::ALL, bounds, horizon)?;
            let mut dual = DualEngine::new(window);
            let mut o = DualOutcome { samples: samples_per_run, ..Default::default() };
            for (t, z) in queries {
                sim.advance_to(t)?;
                o.competition_mismatches += (dual.competition_color(z, t, &inits[1])? != sim.cell(1, z)) as usize;
                o.hostile_growth_mismatches += (dual.voter_color(z, t, &inits[2])? != sim.cell(2, z)) as usize;
                o.hostile_competition_mismatches += (dual.voter_color(z, t, &inits[3])? != sim.cell(3, z)) as usize;
                let empty = dual.potential_ancestors(z, t, &inits[0])?.is_empty();
                o.ancestor_mismatches += (empty != (sim.cell(0, z) != CellState::Red)) as usize;
            }
            Ok(o)
        })
        .collect();
    let mut total = DualOutcome::default();
    for p in parts {
        let p = p?;
        total.samples += p.samples;
        total.competition_mismatches += p.competition_mismatches;
        total.hostile_growth_mismatches += p.hostile_growth_mismatches;
        total.hostile_competition_mismatches += p.hostile_competition_mismatches;
        total.ancestor_mismatches += p.ancestor_mismatches;
    }
    Ok(total)
}

/// Minimum passage time by listing every oriented path from every source.
pub fn enumerate_passage_time(weights: &EdgeWeights, sources: &[Site], target: Site) -> Option<f64> {
    fn walk(w: &EdgeWeights, at: Site, target: Site, acc: f64, best: &mut Option<f64>) {
        if at == target {
            *best = Some(best.map_or(acc, |b: f64| b.min(acc)));
            return;
        }
        if at.is_origin() {
            return;
        }
        if at.x < target.x {
            let e = DirectedEdge::east(at.x, at.y).expect("not the origin");
            walk(w, e.target(), target, acc + w.weight(e).expect("in box"), best);
        }
        if at.y < target.y {
            let e = DirectedEdge::north(at.x, at.y).expect("not the origin");
            walk(w, e.target(), target, acc + w.weight(e).expect("in box"), best);
        }
    }
    let mut best = None;
    for &s in sources {
        if s.x <= target.x && s.y <= target.y {
            walk(weights, s, target, 0.0, &mut best);
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleOutcome {
    pub fields: usize,
    pub sites: usize,
    pub mismatches: usize,
}

impl OracleOutcome {
    pub fn checks(&self) -> Vec<Check> {
        vec![Check::new(
            "DP passage times = path enumeration",
            CheckKind::Exact,
            self.mismatches == 0,
            self.mismatches as f64,
            format!("{} fields, {} sites", self.fields, self.sites),
        )]
    }
}

/// DP against enumeration on every box `[0,a] x [0,b]`, `1 <= a, b <= max_side`,
/// for each seed, with the default sources and a random source set.
pub fn dp_oracle_suite(base_seed: u64, runs: usize, max_side: u32) -> Result<OracleOutcome> {
    let mut out = OracleOutcome { fields: 0, sites: 0, mismatches: 0 };
    for seed in seeds(base_seed, runs) {
        for a in 1..=max_side {
            for b in 1..=max_side {
                let bounds = LatticeBox::new(a, b)?;
                let w = EdgeWeights::sample(seed, bounds);
                let mut rng = CounterStream::new(seed, Domain::Sampling, (a * 100 + b) as u64);
                let random: Vec<Site> = (0..3)
                    .map(|_| Site::new(rng.next_below(a as u64 + 1) as u32, rng.next_below(b as u64 + 1) as u32))
                    .collect();
                for sources in [&DEFAULT_SOURCES[..], &random[..]] {
                    let field = passage_times(&w, sources)?;
                    out.fields += 1;
                    for s in bounds.sites() {
                        out.sites += 1;
                        let expect = if sources.contains(&s) { Some(0.0) } else { enumerate_passage_time(&w, sources, s) };
                        if field.get(s) != expect {
                            out.mismatches += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoStepOutcome {
    pub first_step: FirstStepSummary,
    pub mu_diagonal: MuEstimate,
    pub mu_axis: MuEstimate,
}

impl TwoStepOutcome {
    /// `(frequency, target, standard error)` for `(2,0)`, `(1,1)`, `(0,2)`.
    pub fn frequencies(&self) -> [(f64, f64, f64); 3] {
        let n = self.first_step.trials as f64;
        let targets = [0.25, 0.5, 0.25];
        std::array::from_fn(|i| {
            let p = targets[i];
            (self.first_step.counts[i] as f64 / n, p, (p * (1.0 - p) / n).sqrt())
        })
    }

    pub fn frequencies_ok(&self) -> bool {
        self.frequencies().iter().all(|(f, p, se)| (f - p).abs() <= 3.0 * se)
    }

    pub fn greedy_mean_ok(&self) -> bool {
        self.first_step.greedy_time.within_se(1.0, 3.0)
    }

    pub fn best_mean_below_one(&self) -> bool {
        self.first_step.best_time.confidence_interval(0.99).1 < 1.0
    }

    pub fn mu_ok(&self) -> bool {
        self.mu_diagonal.ci99.1 < 1.0 && (self.mu_axis.summary.mean - 1.0).abs() <= 0.05
    }

    pub fn checks(&self) -> Vec<Check> {
        let f = self.frequencies();
        let fs = &self.first_step;
        vec![
            Check::new(
                "X1 frequencies within 3 SE of (1/4, 1/2, 1/4)",
                CheckKind::Statistical,
                self.frequencies_ok(),
                f[1].0,
                format!("(2,0) {:.5}, (1,1) {:.5}, (0,2) {:.5} over {} trials", f[0].0, f[1].0, f[2].0, fs.trials),
            ),
            Check::new(
                "greedy two-step mean within 3 SE of 1",
                CheckKind::Statistical,
                self.greedy_mean_ok(),
                fs.greedy_time.mean,
                format!("se {:.5}", fs.greedy_time.std_err),
            ),
            Check::new(
                "99% CI of E T1 below 1",
                CheckKind::Statistical,
                self.best_mean_below_one(),
                fs.best_time.mean,
                format!("upper {:.5}", fs.best_time.confidence_interval(0.99).1),
            ),
            Check::new(
                "mu(1,1) 99% CI upper < 1",
                CheckKind::Statistical,
                self.mu_diagonal.ci99.1 < 1.0,
                self.mu_diagonal.summary.mean,
                format!("n {} replicates {} ci ({:.5}, {:.5})", self.mu_diagonal.n, self.mu_diagonal.replicates, self.mu_diagonal.ci99.0, self.mu_diagonal.ci99.1),
            ),
            Check::new(
                "mu(1,0) within 1 +- 0.05",
                CheckKind::Statistical,
                (self.mu_axis.summary.mean - 1.0).abs() <= 0.05,
                self.mu_axis.summary.mean,
                format!("n {} replicates {}", self.mu_axis.n, self.mu_axis.replicates),
            ),
        ]
    }
}

pub fn two_step_suite(seed: u64, trials: usize, n: u32, replicates: usize) -> Result<TwoStepOutcome> {
    Ok(TwoStepOutcome {
        first_step: first_step_summary(seed, trials)?,
        mu_diagonal: mu_estimate(seed, (1.0, 1.0), n, replicates)?,
        mu_axis: mu_estimate(seed.wrapping_add(1), (1.0, 0.0), n, replicates)?,
    })
}

/// Forward Richardson against first passage at the given probes.
pub fn equivalence_suite(seed: u64, replicates: usize, horizon: f64, probes: &[Site]) -> Result<EquivalenceReport> {
    richardson_equivalence(seed, replicates, horizon, probes, 0.01)
}

pub fn equivalence_checks(r: &EquivalenceReport) -> Vec<Check> {
    let mut out = Vec::new();
    for p in &r.probes {
        out.push(Check::new(
            &format!("KS forward vs passage at {}", p.probe),
            CheckKind::Statistical,
            p.two_sample.accepted,
            p.two_sample.statistic,
            format!("critical {:.5}", p.two_sample.critical_value),
        ));
        if let Some((a, b)) = p.axis_law {
            out.push(Check::new(
                &format!("axis law at {}", p.probe),
                CheckKind::Statistical,
                a.accepted && b.accepted,
                a.statistic.max(b.statistic),
                format!("forward {:.5} passage {:.5} critical {:.5}", a.statistic, b.statistic, a.critical_value),
            ));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionRun {
    pub seed: u64,
    pub model: ModelKind,
    pub color: CellState,
    pub tested: usize,
    pub violations: usize,
    pub violation_rate: f64,
    pub full_pass: bool,
    /// Share of `color` sites outside the enlarged region, when measured.
    pub outside_fraction: Option<f64>,
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionOutcome {
    pub t: f64,
    pub delta: f64,
    pub runs: Vec<RegionRun>,
}

impl RegionOutcome {
    pub fn pass_fraction(&self, model: ModelKind, color: CellState) -> f64 {
        let sel: Vec<&RegionRun> = self.runs.iter().filter(|r| r.model == model && r.color == color).collect();
        sel.iter().filter(|r| r.full_pass).count() as f64 / sel.len().max(1) as f64
    }

    pub fn max_violation_rate(&self) -> f64 {
        self.runs.iter().map(|r| r.violation_rate).fold(0.0, f64::max)
    }

    pub fn max_outside_fraction(&self) -> f64 {
        self.runs.iter().filter_map(|r| r.outside_fraction).fold(0.0, f64::max)
    }

    pub fn checks(&self, min_pass: f64, max_rate: f64) -> Vec<Check> {
        let mut keys: Vec<(ModelKind, CellState)> = self.runs.iter().map(|r| (r.model, r.color)).collect();
        keys.dedup();
        let mut out = Vec::new();
        for (m, c) in keys {
            let f = self.pass_fraction(m, c);
            out.push(Check::new(
                &format!("{m} {c} full-pass fraction"),
                CheckKind::Statistical,
                f >= min_pass,
                f,
                format!("threshold {min_pass}, t {}, delta {}", self.t, self.delta),
            ));
        }
        let rate = self.max_violation_rate();
        out.push(Check::new("max per-run violation rate", CheckKind::Statistical, rate <= max_rate, rate, format!("threshold {max_rate}")));
        if self.runs.iter().any(|r| r.outside_fraction.is_some()) {
            let o = self.max_outside_fraction();
            out.push(Check::new("max per-run outside fraction", CheckKind::Statistical, o <= max_rate, o, format!("threshold {max_rate}")));
        }
        out
    }
}

/// Hostile growth at time `t`: Black must cover `Scaled(Q, 1 - delta)` at
/// margin `delta`, and few Black sites may lie outside `Scaled(Q, 1 + delta)`.
pub fn shape_suite(base_seed: u64, runs: usize, t: f64, delta: f64) -> Result<RegionOutcome> {
    let inner = RegionSpec::UnitSquare.scaled(1.0 - delta);
    let outer = RegionSpec::UnitSquare.scaled(1.0 + delta);
    let rows: Vec<Result<RegionRun>> = seeds(base_seed, runs)
        .into_par_iter()
        .map(|seed| {
            let s = crate::models::run(seed, ModelKind::HostileGrowth, t, &[t], BoxPolicy::Default)?;
            let state = &s.checkpoints[0].states[0];
            let rep = check_containment(state, CellState::Black, &inner, t, delta)?;
            Ok(RegionRun {
                seed,
                model: ModelKind::HostileGrowth,
                color: CellState::Black,
                tested: rep.tested_site_count,
                violations: rep.violating_sites.len(),
                violation_rate: rep.violation_rate(),
                full_pass: rep.pass(),
                outside_fraction: Some(outside_fraction(state, CellState::Black, &outer, t)?),
                truncated: s.truncation_flag,
            })
        })
        .collect();
    Ok(RegionOutcome { t, delta, runs: rows.into_iter().collect::<Result<_>>()? })
}

/// Red must cover `Scaled(Q2, 1 - delta)` and Blue `Scaled(Q1, 1 - delta)`
/// at margin `delta`, in hostile competition and in competition.
pub fn halfcolor_suite(base_seed: u64, runs: usize, t: f64, delta: f64) -> Result<RegionOutcome> {
    let regions = [(CellState::Red, RegionSpec::Q2.scaled(1.0 - delta)), (CellState::Blue, RegionSpec::Q1.scaled(1.0 - delta))];
    let kinds = [ModelKind::HostileCompetition, ModelKind::Competition];
    let rows: Vec<Result<Vec<RegionRun>>> = seeds(base_seed, runs)
        .into_par_iter()
        .map(|seed| {
            let s = coupled_run(seed, &kinds, t, &[t], BoxPolicy::Default)?;
            let mut out = Vec::new();
            for (m, kind) in kinds.iter().enumerate() {
                let state = &s.checkpoints[0].states[m];
                for (color, region) in &regions {
                    let rep = check_containment(state, *color, region, t, delta)?;
                    out.push(RegionRun {
                        seed,
                        model: *kind,
                        color: *color,
                        tested: rep.tested_site_count,
                        violations: rep.violating_sites.len(),
                        violation_rate: rep.violation_rate(),
                        full_pass: rep.pass(),
                        outside_fraction: None,
                        truncated: s.truncation_flag,
                    });
                }
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for r in rows {
        all.extend(r?);
    }
    all.sort_by_key(|r| (r.model as u8, r.color as u8, r.seed));
    Ok(RegionOutcome { t, delta, runs: all })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorRun {
    pub seed: u64,
    pub arcs_from: usize,
    pub arcs_to: usize,
    pub surviving: usize,
    pub largest_surviving: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorOutcome {
    pub t_from: f64,
    pub t_to: f64,
    pub min_measure: f64,
    pub runs: Vec<SectorRun>,
}

impl SectorOutcome {
    pub fn survival_fraction(&self) -> f64 {
        self.runs.iter().filter(|r| r.surviving > 0).count() as f64 / self.runs.len().max(1) as f64
    }

    pub fn checks(&self) -> Vec<Check> {
        let f = self.survival_fraction();
        vec![Check::new(
            "fraction of runs with a surviving arc",
            CheckKind::Statistical,
            f > 0.0,
            f,
            format!("{} runs, arcs >= {} rad from t {} to t {}", self.runs.len(), self.min_measure, self.t_from, self.t_to),
        )]
    }
}

pub fn sectors_suite(base_seed: u64, runs: usize, t_from: f64, t_to: f64, min_measure: f64) -> Result<SectorOutcome> {
    if !(t_from > 0.0 && t_to > t_from) {
        return Err(Error::invalid("need 0 < t_from < t_to"));
    }
    let cfg = SectorConfig { min_measure, ..SectorConfig::default() };
    let rows: Vec<Result<SectorRun>> = seeds(base_seed, runs)
        .into_par_iter()
        .map(|seed| {
            let s = coupled_run(seed, &[ModelKind::Competition], t_to, &[t_from, t_to], BoxPolicy::Default)?;
            let st = sector_stability(&s, ModelKind::Competition, t_from, t_to, &cfg)?;
            let surviving: Vec<f64> = st.matches.iter().filter(|m| m.survives).map(|m| m.later.map_or(0.0, |l| l.measure)).collect();
            Ok(SectorRun {
                seed,
                arcs_from: st.matches.len(),
                arcs_to: st.matches.iter().filter_map(|m| m.later).count(),
                surviving: surviving.len(),
                largest_surviving: surviving.iter().copied().fold(0.0, f64::max),
            })
        })
        .collect();
    Ok(SectorOutcome { t_from, t_to, min_measure, runs: rows.into_iter().collect::<Result<_>>()? })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_coupling_run_has_no_violations() {
        let o = coupling_suite(5, 2, 10.0, 4).unwrap();
        assert_eq!(o.total_violations(), 0);
        assert_eq!(o.checks().len(), 6);
    }

    #[test]
    fn enumeration_agrees_with_dp_on_a_small_box() {
        let o = dp_oracle_suite(0, 2, 3).unwrap();
        assert_eq!(o.mismatches, 0);
        assert!(o.sites > 0);
    }

    #[test]
    fn suite_report_flags_hard_failures() {
        let r = SuiteReport::new("x", vec![Check::new("a", CheckKind::Statistical, false, 0.0, String::new())]);
        assert!(!r.hard_failure && !r.all_passed);
        let r = SuiteReport::new("x", vec![Check::new("a", CheckKind::Exact, false, 0.0, String::new())]);
        assert!(r.hard_failure);
    }
}
