//! Distribution comparisons and curve summaries.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("sample is empty")]
    EmptySample,
    #[error("need at least {need} replicas, got {got}")]
    TooFewReplicas { need: usize, got: usize },
    #[error("replica {index} has {got} grid points, expected {expected}")]
    GridMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("observed has {observed} bins but expected has {expected}")]
    BinMismatch { observed: usize, expected: usize },
    #[error("expected probabilities sum to {0}, not 1")]
    NotNormalized(f64),
    #[error("fewer than two bins remain after merging")]
    SingleBin,
}

/// A labelled sample of real values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalSample {
    pub label: String,
    pub values: Vec<f64>,
    /// Graph size the sample came from, if any.
    pub n_source: Option<u64>,
}

impl EmpiricalSample {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            label: label.into(),
            values,
            n_source: None,
        }
    }

    pub fn with_source(mut self, n: u64) -> Self {
        self.n_source = Some(n);
        self
    }
}

/// Euclidean distance between two sequences after sorting each in
/// descending order and zero-padding to a common length.
pub fn l2_distance(x: &[f64], y: &[f64]) -> f64 {
    let sorted = |v: &[f64]| {
        let mut v = v.to_vec();
        v.sort_unstable_by(|a, b| b.total_cmp(a));
        v
    };
    let (x, y) = (sorted(x), sorted(y));
    let len = x.len().max(y.len());
    (0..len)
        .map(|i| {
            let d = x.get(i).copied().unwrap_or(0.0) - y.get(i).copied().unwrap_or(0.0);
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    pub n_x: usize,
    pub n_y: usize,
}

/// `Q(lambda) = 2 sum_{k >= 1} (-1)^{k-1} exp(-2 k^2 lambda^2)`, the
/// Kolmogorov survival function.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    if lambda < 1.18 {
        // Jacobi-transformed series converges fast for small lambda
        let y = (-std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda)).exp();
        let sum: f64 = (0..20).map(|k| y.powi((2 * k + 1) * (2 * k + 1))).sum();
        let cdf = (2.0 * std::f64::consts::PI).sqrt() / lambda * sum;
        return (1.0 - cdf).clamp(0.0, 1.0);
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let term = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value
/// (effective size `n m / (n + m)` and Stephens' correction). Ties across
/// samples are handled by evaluating both CDFs after each distinct value.
pub fn two_sample_ks(x: &EmpiricalSample, y: &EmpiricalSample) -> Result<KsResult, StatsError> {
    if x.values.is_empty() || y.values.is_empty() {
        return Err(StatsError::EmptySample);
    }
    let mut xs = x.values.clone();
    let mut ys = y.values.clone();
    xs.sort_unstable_by(f64::total_cmp);
    ys.sort_unstable_by(f64::total_cmp);
    let (nx, ny) = (xs.len(), ys.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < nx && j < ny {
        let v = if xs[i] <= ys[j] { xs[i] } else { ys[j] };
        while i < nx && xs[i] <= v {
            i += 1;
        }
        while j < ny && ys[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / nx as f64 - j as f64 / ny as f64).abs());
    }
    let ne = (nx * ny) as f64 / (nx + ny) as f64;
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    Ok(KsResult {
        statistic: d,
        p_value: kolmogorov_survival(lambda),
        n_x: nx,
        n_y: ny,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Bin count after merging sparse bins.
    pub bins: usize,
}

/// Pearson goodness of fit. Adjacent bins are merged left to right until
/// each has expected count at least 5; a short remainder joins the last bin.
pub fn chi_square_gof(
    observed: &[u64],
    expected_probs: &[f64],
) -> Result<ChiSquareResult, StatsError> {
    if observed.len() != expected_probs.len() {
        return Err(StatsError::BinMismatch {
            observed: observed.len(),
            expected: expected_probs.len(),
        });
    }
    let sum: f64 = expected_probs.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(StatsError::NotNormalized(sum));
    }
    let total: u64 = observed.iter().sum();
    let total_f = total as f64;
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut obs_acc, mut exp_acc) = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(expected_probs) {
        obs_acc += o as f64;
        exp_acc += p * total_f;
        if exp_acc >= 5.0 {
            bins.push((obs_acc, exp_acc));
            obs_acc = 0.0;
            exp_acc = 0.0;
        }
    }
    if exp_acc > 0.0 || obs_acc > 0.0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += obs_acc;
                last.1 += exp_acc;
            }
            None => bins.push((obs_acc, exp_acc)),
        }
    }
    if bins.len() < 2 {
        return Err(StatsError::SingleBin);
    }
    let statistic = bins.iter().map(|&(o, e)| (o - e).powi(2) / e).sum();
    let dof = bins.len() - 1;
    let dist = ChiSquared::new(dof as f64).expect("dof is positive");
    Ok(ChiSquareResult {
        statistic,
        dof,
        p_value: dist.sf(statistic),
        bins: bins.len(),
    })
}

/// Pointwise summary of replica paths sampled on a common grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanCurve {
    pub grid: Vec<f64>,
    pub mean: Vec<f64>,
    pub sd: Vec<f64>,
    pub stderr: Vec<f64>,
    pub replicas: usize,
}

pub fn mean_curve(grid: &[f64], paths: &[Vec<f64>]) -> Result<MeanCurve, StatsError> {
    if paths.len() < 2 {
        return Err(StatsError::TooFewReplicas {
            need: 2,
            got: paths.len(),
        });
    }
    for (index, p) in paths.iter().enumerate() {
        if p.len() != grid.len() {
            return Err(StatsError::GridMismatch {
                index,
                expected: grid.len(),
                got: p.len(),
            });
        }
    }
    let r = paths.len() as f64;
    let mut mean = vec![0.0; grid.len()];
    for p in paths {
        for (m, v) in mean.iter_mut().zip(p) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= r);
    let mut var = vec![0.0; grid.len()];
    for p in paths {
        for ((acc, v), m) in var.iter_mut().zip(p).zip(&mean) {
            *acc += (v - m).powi(2);
        }
    }
    let sd: Vec<f64> = var.iter().map(|v| (v / (r - 1.0)).sqrt()).collect();
    let stderr = sd.iter().map(|s| s / r.sqrt()).collect();
    Ok(MeanCurve {
        grid: grid.to_vec(),
        mean,
        sd,
        stderr,
        replicas: paths.len(),
    })
}

/// Least-squares slope of `y = c s` through the origin.
pub fn slope_through_origin(s: &[f64], y: &[f64]) -> f64 {
    let num: f64 = s.iter().zip(y).map(|(s, y)| s * y).sum();
    let den: f64 = s.iter().map(|s| s * s).sum();
    num / den
}

/// Least-squares fit of `y = a s - (beta / 2) s^2`; returns `(a, beta)`.
pub fn fit_parabolic_drift(s: &[f64], y: &[f64]) -> (f64, f64) {
    // normal equations for y = c1 s + c2 s^2
    let (mut s2, mut s3, mut s4, mut ys, mut ys2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&t, &v) in s.iter().zip(y) {
        s2 += t * t;
        s3 += t * t * t;
        s4 += t * t * t * t;
        ys += v * t;
        ys2 += v * t * t;
    }
    let det = s2 * s4 - s3 * s3;
    let c1 = (ys * s4 - ys2 * s3) / det;
    let c2 = (s2 * ys2 - s3 * ys) / det;
    (c1, -2.0 * c2)
}

/// Mean, sample standard deviation and standard error.
pub fn summarize(values: &[f64]) -> (f64, f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0, 0.0);
    }
    let sd = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    (mean, sd, sd / n.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample(v: &[f64]) -> EmpiricalSample {
        EmpiricalSample::new("t", v.to_vec())
    }

    #[test]
    fn l2_examples() {
        assert_eq!(l2_distance(&[3.0, 1.0], &[3.0, 1.0]), 0.0);
        assert!((l2_distance(&[3.0, 1.0], &[0.0, 0.0]) - 10f64.sqrt()).abs() < 1e-15);
        assert_eq!(l2_distance(&[1.0], &[0.0, 1.0]), 0.0);
    }

    #[test]
    fn ks_examples() {
        let x = sample(&[1.0, 2.0, 3.0]);
        assert_eq!(two_sample_ks(&x, &x).unwrap().statistic, 0.0);
        assert_eq!(two_sample_ks(&x, &x).unwrap().p_value, 1.0);
        let r = two_sample_ks(&sample(&[0.0]), &sample(&[1.0])).unwrap();
        assert_eq!(r.statistic, 1.0);
        assert_eq!(
            two_sample_ks(&sample(&[]), &sample(&[1.0])),
            Err(StatsError::EmptySample)
        );
    }

    #[test]
    fn ks_with_ties() {
        // both samples put mass 1/2 on 1 and 1/2 on 2 -> identical CDFs
        let r = two_sample_ks(&sample(&[1.0, 2.0]), &sample(&[1.0, 1.0, 2.0, 2.0])).unwrap();
        assert_eq!(r.statistic, 0.0);
        let r = two_sample_ks(&sample(&[1.0, 1.0, 1.0, 2.0]), &sample(&[1.0, 2.0])).unwrap();
        assert!((r.statistic - 0.25).abs() < 1e-15);
    }

    #[test]
    fn kolmogorov_series_agree_and_match_table() {
        // both branches around the switch point
        let near = 1.18;
        let small_branch = {
            let y = (-std::f64::consts::PI.powi(2) / (8.0 * near * near)).exp();
            let sum: f64 = (0..20).map(|k| y.powi((2 * k + 1) * (2 * k + 1))).sum();
            1.0 - (2.0 * std::f64::consts::PI).sqrt() / near * sum
        };
        assert!((small_branch - kolmogorov_survival(near)).abs() < 1e-12);
        // classical critical values
        assert!((kolmogorov_survival(1.3581) - 0.05).abs() < 1e-4);
        assert!((kolmogorov_survival(1.6276) - 0.01).abs() < 1e-4);
        assert!((kolmogorov_survival(0.5) - 0.9639).abs() < 1e-4);
    }

    #[test]
    fn chi_square_examples() {
        let r = chi_square_gof(&[50, 50], &[0.5, 0.5]).unwrap();
        assert_eq!(r.statistic, 0.0);
        let r = chi_square_gof(&[60, 40], &[0.5, 0.5]).unwrap();
        assert!((r.statistic - 4.0).abs() < 1e-12);
        assert_eq!(r.dof, 1);
        assert!((r.p_value - 0.0455).abs() < 1e-3);
        assert_eq!(chi_square_gof(&[10], &[1.0]), Err(StatsError::SingleBin));
        // the sparse tail is merged into its neighbour
        let r = chi_square_gof(&[27, 27, 3, 3], &[0.45, 0.45, 0.05, 0.05]).unwrap();
        assert_eq!(r.bins, 3);
    }

    #[test]
    fn mean_curve_examples() {
        let c = mean_curve(&[0.0, 1.0], &[vec![0.0, 1.0], vec![0.0, 3.0]]).unwrap();
        assert_eq!(c.mean, vec![0.0, 2.0]);
        assert_eq!(c.sd[0], 0.0);
        assert!((c.sd[1] - 2f64.sqrt()).abs() < 1e-15);
        let c = mean_curve(&[0.0, 1.0], &vec![vec![2.0, 2.0]; 3]).unwrap();
        assert_eq!(c.sd, vec![0.0, 0.0]);
        assert!(matches!(
            mean_curve(&[0.0, 1.0], &[vec![0.0, 1.0], vec![0.0]]),
            Err(StatsError::GridMismatch { index: 1, .. })
        ));
    }

    #[test]
    fn fits_recover_exact_curves() {
        let s: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
        let y: Vec<f64> = s.iter().map(|t| 0.7 * t - 2.0 * t * t).collect();
        let (a, beta) = fit_parabolic_drift(&s, &y);
        assert!((a - 0.7).abs() < 1e-9 && (beta - 4.0).abs() < 1e-9);
        let y: Vec<f64> = s.iter().map(|t| 1.5 * t).collect();
        assert!((slope_through_origin(&s, &y) - 1.5).abs() < 1e-12);
    }

    fn descending(v: Vec<f64>) -> Vec<f64> {
        let mut v = v;
        v.sort_unstable_by(|a, b| b.total_cmp(a));
        v
    }

    proptest! {
        #[test]
        fn l2_is_a_metric(
            x in prop::collection::vec(0.0f64..10.0, 0..6).prop_map(descending),
            y in prop::collection::vec(0.0f64..10.0, 0..6).prop_map(descending),
            z in prop::collection::vec(0.0f64..10.0, 0..6).prop_map(descending),
        ) {
            prop_assert!(l2_distance(&x, &x) == 0.0);
            prop_assert!((l2_distance(&x, &y) - l2_distance(&y, &x)).abs() < 1e-12);
            prop_assert!(l2_distance(&x, &z) <= l2_distance(&x, &y) + l2_distance(&y, &z) + 1e-9);
        }

        #[test]
        fn ks_is_bounded_and_scale_invariant(
            x in prop::collection::vec(0.0f64..100.0, 1..40),
            y in prop::collection::vec(0.0f64..100.0, 1..40),
            n in 10u32..1_000_000,
        ) {
            let r = two_sample_ks(&sample(&x), &sample(&y)).unwrap();
            prop_assert!((0.0..=1.0).contains(&r.statistic));
            prop_assert!((0.0..=1.0).contains(&r.p_value));
            let scale = f64::from(n).powf(-2.0 / 3.0);
            let xs: Vec<f64> = x.iter().map(|v| v * scale).collect();
            let ys: Vec<f64> = y.iter().map(|v| v * scale).collect();
            let rs = two_sample_ks(&sample(&xs), &sample(&ys)).unwrap();
            prop_assert_eq!(r.statistic, rs.statistic);
        }

        #[test]
        fn chi_square_ignores_bin_order(
            obs in prop::collection::vec(20u64..200, 2..6),
            seed in any::<u64>(),
        ) {
            let k = obs.len();
            let probs = vec![1.0 / k as f64; k];
            let mut perm: Vec<usize> = (0..k).collect();
            perm.rotate_left((seed % k as u64) as usize);
            let obs2: Vec<u64> = perm.iter().map(|&i| obs[i]).collect();
            let a = chi_square_gof(&obs, &probs).unwrap();
            let b = chi_square_gof(&obs2, &probs).unwrap();
            prop_assert!((a.statistic - b.statistic).abs() < 1e-9);
        }
    }
}
