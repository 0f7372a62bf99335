//! Acceptance suite. Each test prints one `criterion N ...: PASS|FAIL` line
//! with the measured values and then asserts the criterion.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use oriented_competition::cli::main_with_args;
use oriented_competition::models::{run, BoxPolicy};
use oriented_competition::verify::*;
use oriented_competition::{CellState, ModelKind, Site};
use sha2::{Digest, Sha256};

fn report(n: u32, name: &str, pass: bool, detail: &str) {
    println!("criterion {n} {name}: {} ({detail})", if pass { "PASS" } else { "FAIL" });
}

#[test]
fn criterion_01_coupling() {
    let start = Instant::now();
    let o = coupling_suite(0, 20, 100.0, 10).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let pass = o.total_violations() == 0 && secs <= 60.0;
    report(1, "coupling", pass, &format!("violations {:?}, {secs:.1} s", o.violations));
    assert!(pass);
}

#[test]
fn criterion_02_dual() {
    let o = dual_suite(0, 10, 1000, 30.0).unwrap();
    let pass = o.samples == 10_000 && o.agreement();
    report(
        2,
        "dual equivalence",
        pass,
        &format!(
            "{} samples, mismatches competition {} hostile growth {} hostile competition {} ancestors {}",
            o.samples, o.competition_mismatches, o.hostile_growth_mismatches, o.hostile_competition_mismatches, o.ancestor_mismatches
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_03_dp_oracle() {
    let o = dp_oracle_suite(0, 100, 6).unwrap();
    let pass = o.mismatches == 0;
    report(3, "DP oracle", pass, &format!("{} fields, {} sites, {} mismatches", o.fields, o.sites, o.mismatches));
    assert!(pass);
}

#[test]
fn criterion_04_two_step() {
    let start = Instant::now();
    let o = two_step_suite(0, 100_000, 500, 50).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let f = o.frequencies();
    let pass = o.frequencies_ok() && o.greedy_mean_ok() && o.best_mean_below_one() && o.mu_ok() && secs <= 300.0;
    report(
        4,
        "two-step block",
        pass,
        &format!(
            "freqs ({:.4}, {:.4}, {:.4}), greedy mean {:.4}, E T1 99% upper {:.4}, mu(1,1) upper {:.4}, mu(1,0) {:.4}, {secs:.1} s",
            f[0].0,
            f[1].0,
            f[2].0,
            o.first_step.greedy_time.mean,
            o.first_step.best_time.confidence_interval(0.99).1,
            o.mu_diagonal.ci99.1,
            o.mu_axis.summary.mean
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_05_hostile_shape() {
    let o = shape_suite(0, 20, 150.0, 0.1).unwrap();
    let frac = o.pass_fraction(ModelKind::HostileGrowth, CellState::Black);
    let over: Vec<u64> = o.runs.iter().filter(|r| r.outside_fraction.unwrap_or(0.0) > 0.01).map(|r| r.seed).collect();
    let pass = frac >= 0.95 && over.is_empty();
    report(
        5,
        "hostile growth shape",
        pass,
        &format!("full-pass fraction {frac:.2}, max outside fraction {:.4}, runs above 1%: {}", o.max_outside_fraction(), over.len()),
    );
    assert!(pass);
}

#[test]
fn criterion_06_half_colors() {
    let o = halfcolor_suite(0, 20, 150.0, 0.1).unwrap();
    let mut fracs = Vec::new();
    for m in [ModelKind::HostileCompetition, ModelKind::Competition] {
        for c in [CellState::Red, CellState::Blue] {
            fracs.push((m, c, o.pass_fraction(m, c)));
        }
    }
    let rate = o.max_violation_rate();
    let pass = rate <= 0.01 && fracs.iter().all(|f| f.2 >= 0.95);
    let detail: Vec<String> = fracs.iter().map(|(m, c, f)| format!("{m} {c} {f:.2}")).collect();
    report(6, "half colors", pass, &format!("full-pass {}, max violation rate {rate:.5}", detail.join(", ")));
    assert!(pass);
}

#[test]
fn criterion_07_equivalence() {
    let r = equivalence_suite(0, 400, 80.0, &[Site::new(20, 20), Site::new(0, 20)]).unwrap();
    let checks = equivalence_checks(&r);
    let pass = r.all_accepted() && checks.iter().all(|c| c.passed) && checks.iter().any(|c| c.name.starts_with("axis law"));
    let detail: Vec<String> = checks.iter().map(|c| format!("{} {:.4} [{}]", c.name, c.value, c.detail)).collect();
    report(7, "forward vs passage law", pass, &detail.join("; "));
    assert!(pass);
}

#[test]
fn criterion_08_sectors() {
    let o = sectors_suite(0, 50, 200.0, 400.0, 0.2).unwrap();
    let f = o.survival_fraction();
    let pass = f > 0.0;
    report(8, "sector survival", pass, &format!("fraction {f:.2} over {} runs", o.runs.len()));
    assert!(pass);
}

fn hash_dir(dir: &Path) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        let digest = Sha256::digest(std::fs::read(&p).unwrap());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        out.insert(p.file_name().unwrap().to_string_lossy().into_owned(), hex);
    }
    out
}

fn artifacts(jobs: &str) -> BTreeMap<String, String> {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let s = |p: &str| d.join(p).to_string_lossy().into_owned();
    let commands: Vec<Vec<String>> = vec![
        vec!["simulate", "--model", "competition", "--model", "hostile-growth", "--t", "20", "--checkpoints", "10,20", "--render", "--seed", "7", "--out", &s("sim")],
        vec!["render", "--manifest", &s("sim/manifest.json")],
        vec!["verify", "coupling", "--seeds", "3", "--t", "15", "--out", &s("verify.json")],
        vec!["shape", "--model", "richardson", "--t", "30", "--replicates", "3", "--angles", "41", "--out", &s("shape")],
        vec!["walk", "--trials", "2000", "--k-max", "500", "--out", &s("walk")],
        vec!["mu", "--direction", "1,1", "--n", "40", "--replicates", "5", "--out", &s("mu.json")],
        vec!["trace", "--x", "5", "--y", "3", "--t", "10", "--out", &s("trace")],
    ]
    .into_iter()
    .map(|c| c.into_iter().map(String::from).collect())
    .collect();
    for c in &commands {
        let args = ["orcomp", "--jobs", jobs].into_iter().map(String::from).chain(c.iter().cloned());
        assert_eq!(main_with_args(args), 0, "command {c:?}");
    }
    let mut all = BTreeMap::new();
    for sub in ["sim", "shape", "walk", "trace"] {
        for (k, v) in hash_dir(&d.join(sub)) {
            all.insert(format!("{sub}/{k}"), v);
        }
    }
    for f in ["verify.json", "mu.json"] {
        let digest = Sha256::digest(std::fs::read(d.join(f)).unwrap());
        all.insert(f.to_string(), digest.iter().map(|b| format!("{b:02x}")).collect());
    }
    all
}

#[test]
fn criterion_09_determinism() {
    let a = artifacts("1");
    let b = artifacts("1");
    let c = artifacts("3");
    let pass = a == b && a == c && a.len() > 10;
    report(9, "determinism", pass, &format!("{} artifacts, rerun equal {}, thread count invariant {}", a.len(), a == b, a == c));
    assert!(pass);
}

fn peak_rss_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

#[test]
fn criterion_10_performance() {
    let start = Instant::now();
    let s = run(0, ModelKind::Competition, 200.0, &[200.0], BoxPolicy::Default).unwrap();
    let secs = start.elapsed().as_secs_f64();
    // process-wide peak, so an upper bound for this run alone
    let peak = peak_rss_bytes();
    let mem_ok = peak.is_none_or(|b| b <= 2 << 30);
    let pass = secs <= 30.0 && mem_ok && !s.truncation_flag;
    report(
        10,
        "performance",
        pass,
        &format!("{secs:.2} s, peak rss {} MiB, box side {}", peak.map_or("n/a".into(), |b| (b >> 20).to_string()), s.bounds.width() - 1),
    );
    assert!(pass);
}
