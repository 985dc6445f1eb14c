//! The limiting diffusion `W(s) = sigma B(s) + a s - (beta / 2) s^2`, its
//! reflection at the running minimum, and the ordered excursion lengths.
//!
//! The drift is deterministic, so grid increments are drawn exactly as
//! Gaussians; the only discretisation error is in resolving the zero set
//! of the reflected path on the grid.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use thiserror::Error;

use crate::dist::MomentSummary;
use crate::seed;

pub const DEFAULT_DT: f64 = 1e-4;
pub const DEFAULT_S0: f64 = 8.0;

/// Coupled two-resolution KS distance between the laws of `gamma_1` at
/// `dt = 1e-4` and `dt = 5e-5` (sigma = beta = 1, a = 0, s0 = 8), measured
/// on 10^4 shared Brownian paths with master seed 2024. The acceptance
/// gate allows twice this value.
pub const DISCRETIZATION_KS_CALIBRATION: f64 = 0.0014;

/// Fraction of paths (sigma = beta = 1, a = 0, s0 = 8, dt = 1e-4, K = 10)
/// whose cut tail outlasts the 10th retained excursion: 3 of 2000 with
/// master seed 2024. Almost every path ends inside a microscopic tail, so
/// the raw cut rate is near 0.89 and is not the useful measure.
pub const TOP_TRUNCATION_CALIBRATION: f64 = 0.0015;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LimitError {
    #[error("sigma must be finite and positive, got {0}")]
    Sigma(f64),
    #[error("beta must be finite and non-negative, got {0}")]
    Beta(f64),
    #[error("horizon s0 must be finite and positive, got {0}")]
    Horizon(f64),
    #[error("grid step dt = {dt} must be positive and at most s0 / 100 = {max}")]
    Step { dt: f64, max: f64 },
    #[error("a must be finite, got {0}")]
    Location(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitParams {
    pub a: f64,
    pub sigma: f64,
    pub beta: f64,
    pub s0: f64,
    pub dt: f64,
}

impl LimitParams {
    pub fn new(a: f64, sigma: f64, beta: f64, s0: f64, dt: f64) -> Result<Self, LimitError> {
        let p = Self {
            a,
            sigma,
            beta,
            s0,
            dt,
        };
        p.validate()?;
        Ok(p)
    }

    /// Coefficients implied by the type moments.
    pub fn from_moments(a: f64, m: &MomentSummary, s0: f64, dt: f64) -> Result<Self, LimitError> {
        Self::new(a, m.sigma, m.beta, s0, dt)
    }

    /// `beta = 0` is accepted so plain Brownian motion can be simulated.
    pub fn validate(&self) -> Result<(), LimitError> {
        if !self.a.is_finite() {
            return Err(LimitError::Location(self.a));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(LimitError::Sigma(self.sigma));
        }
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return Err(LimitError::Beta(self.beta));
        }
        if !(self.s0.is_finite() && self.s0 > 0.0) {
            return Err(LimitError::Horizon(self.s0));
        }
        let max = self.s0 / 100.0;
        if !(self.dt > 0.0 && self.dt <= max * (1.0 + 1e-12)) {
            return Err(LimitError::Step { dt: self.dt, max });
        }
        Ok(())
    }

    pub fn grid_steps(&self) -> usize {
        (self.s0 / self.dt).round() as usize
    }

    /// Mean of the increment over `[k dt, (k + 1) dt]`.
    fn drift_increment(&self, k: usize) -> f64 {
        let t0 = k as f64 * self.dt;
        let t1 = t0 + self.dt;
        self.a * self.dt - 0.5 * self.beta * (t1 * t1 - t0 * t0)
    }

    /// The same process on a grid twice as fine.
    pub fn refined(&self) -> Self {
        Self {
            dt: self.dt / 2.0,
            ..*self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitPath {
    pub params: LimitParams,
    /// `W` at `0, dt, 2 dt, ..., s0`.
    pub values: Vec<f64>,
    /// `W - running min W`.
    pub reflected: Vec<f64>,
    /// Grid indices where the reflected path is exactly zero.
    pub zero_set: Vec<usize>,
}

struct Increments<'a, R: ?Sized> {
    params: LimitParams,
    scale: f64,
    k: usize,
    rng: &'a mut R,
}

impl<'a, R: Rng + ?Sized> Increments<'a, R> {
    fn new(params: LimitParams, rng: &'a mut R) -> Self {
        Self {
            scale: params.sigma * params.dt.sqrt(),
            params,
            k: 0,
            rng,
        }
    }

    fn next(&mut self) -> f64 {
        let z: f64 = StandardNormal.sample(self.rng);
        let inc = self.params.drift_increment(self.k) + self.scale * z;
        self.k += 1;
        inc
    }
}

pub fn simulate_limit_path<R: Rng + ?Sized>(params: &LimitParams, rng: &mut R) -> LimitPath {
    let steps = params.grid_steps();
    let mut values = Vec::with_capacity(steps + 1);
    values.push(0.0);
    let mut incs = Increments::new(*params, rng);
    let mut w = 0.0;
    for _ in 0..steps {
        w += incs.next();
        values.push(w);
    }
    let reflected = reflect_path(&values);
    let zero_set = reflected
        .iter()
        .enumerate()
        .filter(|&(_, &b)| b == 0.0)
        .map(|(k, _)| k)
        .collect();
    LimitPath {
        params: *params,
        values,
        reflected,
        zero_set,
    }
}

/// `B_k = W_k - min_{j <= k} W_j`.
pub fn reflect_path(values: &[f64]) -> Vec<f64> {
    let mut min = f64::INFINITY;
    values
        .iter()
        .map(|&w| {
            min = min.min(w);
            w - min
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExcursionList {
    /// Complete excursions, longest first.
    pub lengths: Vec<f64>,
    /// The path was still away from zero at the horizon.
    pub truncated_tail: bool,
    /// Length of the cut final excursion (0 when not truncated).
    pub tail_length: f64,
}

impl ExcursionList {
    /// The `k` longest lengths, zero-padded.
    pub fn top(&self, k: usize) -> Vec<f64> {
        (0..k)
            .map(|i| self.lengths.get(i).copied().unwrap_or(0.0))
            .collect()
    }
}

/// Online excursion extraction from a stream of `W` values on a grid.
#[derive(Debug, Clone)]
pub struct ExcursionTracker {
    dt: f64,
    k: usize,
    min: f64,
    last_zero: usize,
    lengths: Vec<f64>,
}

impl ExcursionTracker {
    /// Starts at `W(0) = 0`, which is a zero of the reflected path.
    pub fn new(dt: f64) -> Self {
        Self {
            dt,
            k: 0,
            min: 0.0,
            last_zero: 0,
            lengths: Vec::new(),
        }
    }

    pub fn push(&mut self, w: f64) {
        self.k += 1;
        if w <= self.min {
            self.min = w;
            self.zero(self.k);
        }
    }

    fn zero(&mut self, k: usize) {
        let gap = k - self.last_zero;
        if gap >= 2 {
            self.lengths.push(gap as f64 * self.dt);
        }
        self.last_zero = k;
    }

    pub fn finish(self, include_truncated: bool) -> ExcursionList {
        let tail = self.k - self.last_zero;
        let truncated_tail = tail > 0;
        let tail_length = tail as f64 * self.dt;
        let mut lengths = self.lengths;
        if truncated_tail && include_truncated {
            lengths.push(tail_length);
        }
        lengths.sort_unstable_by(|a, b| b.total_cmp(a));
        ExcursionList {
            lengths,
            truncated_tail,
            tail_length,
        }
    }
}

/// Excursions of a reflected grid path with step `dt`. Consecutive zeros
/// enclose no excursion.
pub fn excursions_from_reflected(
    reflected: &[f64],
    dt: f64,
    include_truncated: bool,
) -> ExcursionList {
    let mut tracker = ExcursionTracker::new(dt);
    for (k, &b) in reflected.iter().enumerate().skip(1) {
        tracker.k = k;
        if b == 0.0 {
            tracker.zero(k);
        }
    }
    tracker.finish(include_truncated)
}

pub fn extract_excursions(path: &LimitPath) -> ExcursionList {
    excursions_from_reflected(&path.reflected, path.params.dt, false)
}

/// Top-`k` excursion lengths of one path plus the length of its cut tail.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathGamma {
    pub top: Vec<f64>,
    pub tail_length: f64,
}

impl PathGamma {
    /// The path had not returned to zero at the horizon.
    pub fn truncated(&self) -> bool {
        self.tail_length > 0.0
    }

    /// The cut tail is longer than the shortest retained excursion, so
    /// completing it could change the top-`k` vector.
    pub fn truncation_affects_top(&self) -> bool {
        self.top.last().is_some_and(|&kth| self.tail_length > kth)
    }
}

fn path_gamma(ex: ExcursionList, k: usize) -> PathGamma {
    PathGamma {
        top: ex.top(k),
        tail_length: ex.tail_length,
    }
}

/// Top-`k` excursion lengths of one freshly simulated path, without
/// storing the path. Consumes the generator exactly as
/// [`simulate_limit_path`] does.
pub fn gamma_for_path<R: Rng + ?Sized>(params: &LimitParams, k: usize, rng: &mut R) -> PathGamma {
    let mut incs = Increments::new(*params, rng);
    let mut tracker = ExcursionTracker::new(params.dt);
    let mut w = 0.0;
    for _ in 0..params.grid_steps() {
        w += incs.next();
        tracker.push(w);
    }
    path_gamma(tracker.finish(false), k)
}

/// One Brownian path read at two resolutions: `params.refined()` and
/// `params`. Returns `(fine, coarse)`.
pub fn gamma_for_coupled_path<R: Rng + ?Sized>(
    params: &LimitParams,
    k: usize,
    rng: &mut R,
) -> (PathGamma, PathGamma) {
    let fine_params = params.refined();
    let mut incs = Increments::new(fine_params, rng);
    let mut fine = ExcursionTracker::new(fine_params.dt);
    let mut coarse = ExcursionTracker::new(params.dt);
    let mut w = 0.0;
    for step in 1..=2 * params.grid_steps() {
        w += incs.next();
        fine.push(w);
        if step % 2 == 0 {
            coarse.push(w);
        }
    }
    (
        path_gamma(fine.finish(false), k),
        path_gamma(coarse.finish(false), k),
    )
}

/// Samples of `(gamma_1, ..., gamma_k)`, one row per replica.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaSamples {
    pub params: LimitParams,
    pub k: usize,
    pub rows: Vec<Vec<f64>>,
    /// Paths whose final excursion was cut by the horizon.
    pub truncated: usize,
    /// Paths whose cut excursion outlasts the `k`-th retained length.
    pub truncated_top: usize,
}

impl GammaSamples {
    pub fn from_paths(params: LimitParams, k: usize, paths: Vec<PathGamma>) -> Self {
        let truncated = paths.iter().filter(|p| p.truncated()).count();
        let truncated_top = paths.iter().filter(|p| p.truncation_affects_top()).count();
        Self {
            params,
            k,
            rows: paths.into_iter().map(|p| p.top).collect(),
            truncated,
            truncated_top,
        }
    }

    pub fn replicas(&self) -> usize {
        self.rows.len()
    }

    pub fn truncation_rate(&self) -> f64 {
        self.truncated as f64 / self.rows.len() as f64
    }

    pub fn top_truncation_rate(&self) -> f64 {
        self.truncated_top as f64 / self.rows.len() as f64
    }

    /// Values of coordinate `i` (0-based) across replicas.
    pub fn coordinate(&self, i: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[i]).collect()
    }
}

/// Replica `r` uses the stream `seed::stream(master_seed, &[r])`.
pub fn sample_gamma(
    params: &LimitParams,
    replicas: usize,
    k: usize,
    master_seed: u64,
) -> GammaSamples {
    let paths = (0..replicas)
        .map(|r| gamma_for_path(params, k, &mut seed::stream(master_seed, &[r as u64])))
        .collect();
    GammaSamples::from_paths(*params, k, paths)
}
