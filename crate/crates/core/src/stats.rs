//! Small statistical toolkit: summaries, confidence intervals and
//! Kolmogorov-Smirnov tests.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

/// Mean, sample standard deviation and standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub std_err: f64,
}

impl Summary {
    pub fn of(samples: &[f64]) -> Summary {
        let n = samples.len();
        if n == 0 {
            return Summary { count: 0, mean: f64::NAN, std_dev: f64::NAN, std_err: f64::NAN };
        }
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        let std_dev = var.sqrt();
        Summary { count: n, mean, std_dev, std_err: std_dev / (n as f64).sqrt() }
    }

    /// Two-sided normal-approximation interval at the given confidence.
    pub fn confidence_interval(&self, level: f64) -> (f64, f64) {
        let z = normal_quantile(0.5 + level / 2.0);
        (self.mean - z * self.std_err, self.mean + z * self.std_err)
    }

    /// `|mean - target| <= k * std_err`
    pub fn within_se(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_err
    }
}

pub fn normal_quantile(p: f64) -> f64 {
    Normal::new(0.0, 1.0).expect("standard normal").inverse_cdf(p)
}

/// Asymptotic Kolmogorov critical coefficient `c(alpha) = sqrt(-ln(alpha/2)/2)`.
pub fn ks_coefficient(alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt()
}

/// One-sample KS statistic of `samples` against a continuous CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter().enumerate().fold(0.0_f64, |d, (i, &x)| {
        let f = cdf(x);
        d.max(f - i as f64 / n).max((i + 1) as f64 / n - f)
    })
}

/// Two-sample KS statistic (handles ties by stepping through equal values together).
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (n, m) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0_f64);
    while i < xs.len() && j < ys.len() {
        let v = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= v {
            i += 1;
        }
        while j < ys.len() && ys[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsOutcome {
    pub statistic: f64,
    pub critical_value: f64,
    pub alpha: f64,
    pub accepted: bool,
}

pub fn ks_test_one<F: Fn(f64) -> f64>(samples: &[f64], cdf: F, alpha: f64) -> KsOutcome {
    let statistic = ks_statistic(samples, cdf);
    let critical_value = ks_coefficient(alpha) / (samples.len() as f64).sqrt();
    KsOutcome { statistic, critical_value, alpha, accepted: statistic <= critical_value }
}

pub fn ks_test_two(a: &[f64], b: &[f64], alpha: f64) -> KsOutcome {
    let statistic = ks_two_sample(a, b);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let critical_value = ks_coefficient(alpha) * ((n + m) / (n * m)).sqrt();
    KsOutcome { statistic, critical_value, alpha, accepted: statistic <= critical_value }
}

pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let (sa, sb) = (Summary::of(a), Summary::of(b));
    let cov = a.iter().zip(b).map(|(x, y)| (x - sa.mean) * (y - sb.mean)).sum::<f64>() / (a.len() - 1) as f64;
    cov / (sa.std_dev * sb.std_dev)
}
