//! Type-bucketed breadth-first exploration walk.
//!
//! The chain keeps, for every vertex type, the number of unrevealed and of
//! active (revealed, not yet marked) vertices. One step marks a vertex,
//! draws the number of its new neighbours of each type as independent
//! binomials over the unrevealed pools, and picks the next vertex to mark:
//! uniformly among active vertices, or size-biased among unrevealed ones
//! when no vertex is active. No edge is ever materialised, so a step costs
//! `O(|S|)` and a walk of `k` steps costs `O(k |S|)`.
//!
//! The walk `z` moves by `-1 + (new vertices)` per step; the `k`-th
//! component closes exactly when `z` first hits `-k`.

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::Serialize;
use thiserror::Error;

use crate::dist::{TypeCounts, TypeValue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WalkError {
    #[error("no explorable vertices: every type is zero")]
    NoExplorableVertices,
    #[error("walk has stopped")]
    Stopped,
    #[error("internal invariant breach at step {step}: {what}")]
    InvariantBreach { step: u64, what: &'static str },
}

/// Edge probability `min(1, x y (1 + eps) / n)`, floored at 0. The flag
/// reports whether the raw value fell outside `[0, 1]`.
pub fn edge_probability(x: TypeValue, y: TypeValue, eps: f64, n: u64) -> (f64, bool) {
    let raw = f64::from(x) * f64::from(y) * (1.0 + eps) / n as f64;
    if raw > 1.0 {
        (1.0, true)
    } else if raw < 0.0 {
        (0.0, true)
    } else {
        (raw, false)
    }
}

/// Why a walk stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StopReason {
    /// No active vertex and no unrevealed vertex of positive type.
    Exhausted,
    /// The step budget ran out first.
    Horizon,
}

/// What happened during one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub step: u64,
    pub marked_type: TypeValue,
    /// `I(i) = 0`: the marked vertex opened a new component.
    pub root: bool,
    pub new_vertices: u64,
    /// `E[dz | chain state]`
    pub cond_mean: f64,
    /// `Var[dz | chain state]`
    pub cond_var: f64,
}

/// Full state of the exploration chain before step `step` is taken.
#[derive(Debug, Clone)]
pub struct WalkState {
    n: u64,
    eps: f64,
    types: Vec<TypeValue>,
    unrevealed: Vec<u64>,
    active: Vec<u64>,
    active_total: u64,
    /// Sum over types of `x * U^x`.
    unrevealed_weight: u64,
    step: u64,
    marked: u64,
    roots: u64,
    z: i64,
    current: Option<usize>,
    clamped: u64,
}

impl WalkState {
    /// Initial state with a size-biased first vertex.
    pub fn new<R: Rng + ?Sized>(
        counts: &TypeCounts,
        a: f64,
        rng: &mut R,
    ) -> Result<Self, WalkError> {
        let n = counts.n();
        let (types, unrevealed): (Vec<_>, Vec<_>) = counts.iter().unzip();
        let active = vec![0; types.len()];
        let mut state = Self {
            n,
            eps: a / (n as f64).cbrt(),
            unrevealed_weight: counts.total_weight(),
            types,
            unrevealed,
            active,
            active_total: 0,
            step: 1,
            marked: 0,
            roots: 0,
            z: 0,
            current: None,
            clamped: 0,
        };
        if state.unrevealed_weight == 0 {
            return Err(WalkError::NoExplorableVertices);
        }
        state.current = Some(state.pick_size_biased(rng));
        Ok(state)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Index `i` of the next step.
    pub fn step_index(&self) -> u64 {
        self.step
    }

    pub fn z(&self) -> i64 {
        self.z
    }

    pub fn active_total(&self) -> u64 {
        self.active_total
    }

    pub fn unrevealed_total(&self) -> u64 {
        self.unrevealed.iter().sum()
    }

    pub fn marked(&self) -> u64 {
        self.marked
    }

    /// Components opened so far (steps `j < i` with `I(j) = 0`).
    pub fn roots(&self) -> u64 {
        self.roots
    }

    pub fn unrevealed_weight(&self) -> u64 {
        self.unrevealed_weight
    }

    /// Type of the vertex that step `i` will mark, if the walk is live.
    pub fn marked_type(&self) -> Option<TypeValue> {
        self.current.map(|k| self.types[k])
    }

    pub fn is_stopped(&self) -> bool {
        self.current.is_none()
    }

    pub fn clamp_events(&self) -> u64 {
        self.clamped
    }

    /// `(type, U^x, I^x)` for every type present at the start.
    pub fn buckets(&self) -> impl Iterator<Item = (TypeValue, u64, u64)> + '_ {
        self.types
            .iter()
            .zip(&self.unrevealed)
            .zip(&self.active)
            .map(|((&x, &u), &i)| (x, u, i))
    }

    fn pick_size_biased<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let mut r = rng.random_range(0..self.unrevealed_weight);
        for (k, (&x, &u)) in self.types.iter().zip(&self.unrevealed).enumerate() {
            let w = u64::from(x) * u;
            if r < w {
                return k;
            }
            r -= w;
        }
        unreachable!("size-biased draw fell outside the total weight")
    }

    fn pick_active<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let mut r = rng.random_range(0..self.active_total);
        for (k, &c) in self.active.iter().enumerate() {
            if r < c {
                return k;
            }
            r -= c;
        }
        unreachable!("uniform active draw fell outside the active pool")
    }

    /// Take one step of the chain.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<StepRecord, WalkError> {
        let m = self.current.ok_or(WalkError::Stopped)?;
        let xm = self.types[m];
        let root = self.active_total == 0;
        let breach = |what| WalkError::InvariantBreach {
            step: self.step,
            what,
        };

        let mut new_vertices = 0u64;
        let mut cond_mean = -1.0;
        let mut cond_var = 0.0;
        for k in 0..self.types.len() {
            let pool = self.unrevealed[k] - u64::from(root && k == m);
            if pool == 0 {
                continue;
            }
            let (p, clamped) = edge_probability(xm, self.types[k], self.eps, self.n);
            if clamped {
                self.clamped += 1;
            }
            if p == 0.0 {
                continue;
            }
            cond_mean += pool as f64 * p;
            cond_var += pool as f64 * p * (1.0 - p);
            let drawn = Binomial::new(pool, p)
                .expect("p is a probability")
                .sample(rng);
            self.unrevealed[k] -= drawn;
            self.active[k] += drawn;
            self.unrevealed_weight -= u64::from(self.types[k]) * drawn;
            new_vertices += drawn;
        }
        self.active_total += new_vertices;

        if root {
            self.unrevealed[m] = self.unrevealed[m]
                .checked_sub(1)
                .ok_or_else(|| breach("unrevealed pool underflow"))?;
            self.unrevealed_weight -= u64::from(xm);
            self.roots += 1;
        } else {
            self.active[m] = self.active[m]
                .checked_sub(1)
                .ok_or_else(|| breach("active pool underflow"))?;
            self.active_total -= 1;
        }
        self.marked += 1;
        self.z += new_vertices as i64 - 1;

        let record = StepRecord {
            step: self.step,
            marked_type: xm,
            root,
            new_vertices,
            cond_mean,
            cond_var,
        };
        self.step += 1;
        self.current = if self.active_total > 0 {
            Some(self.pick_active(rng))
        } else if self.unrevealed_weight > 0 {
            Some(self.pick_size_biased(rng))
        } else {
            None
        };
        Ok(record)
    }

    /// Conservation and the `z = I - (components opened)` identity.
    pub fn check_invariants(&self) -> Result<(), WalkError> {
        let breach = |what| WalkError::InvariantBreach {
            step: self.step,
            what,
        };
        if self.unrevealed_total() + self.active_total + self.marked != self.n {
            return Err(breach("unrevealed + active + marked != n"));
        }
        if self.marked != self.step - 1 {
            return Err(breach("marked count differs from step index"));
        }
        if self.active.iter().sum::<u64>() != self.active_total {
            return Err(breach("active buckets do not sum to I"));
        }
        if self.z != self.active_total as i64 - self.roots as i64 {
            return Err(breach("z != I - (components opened)"));
        }
        let weight: u64 = self
            .types
            .iter()
            .zip(&self.unrevealed)
            .map(|(&x, &u)| u64::from(x) * u)
            .sum();
        if weight != self.unrevealed_weight {
            return Err(breach("cached unrevealed weight is stale"));
        }
        Ok(())
    }
}

/// Per-step record of one walk. Index `i - 1` holds step `i`.
#[derive(Debug, Clone, Serialize)]
pub struct WalkTrace {
    pub n: u64,
    pub a: f64,
    /// `z(1), ..., z(L + 1)` for a walk of `L` steps.
    pub z: Vec<i64>,
    /// `I(1), ..., I(L + 1)`.
    pub active: Vec<u64>,
    /// `sum_x x U^x(i)` for `i = 1, ..., L + 1`.
    pub unrevealed_weight: Vec<u64>,
    /// `x(1), ..., x(L)`.
    pub marked_types: Vec<TypeValue>,
    /// `I(i) = 0` for `i = 1, ..., L`.
    pub roots: Vec<bool>,
    pub cond_mean: Vec<f64>,
    pub cond_var: Vec<f64>,
    pub clamp_events: u64,
    pub stop: StopReason,
}

impl WalkTrace {
    pub fn steps(&self) -> usize {
        self.marked_types.len()
    }
}

/// Options for [`run_walk_with`].
#[derive(Debug, Clone, Copy)]
pub struct WalkOptions {
    pub horizon_steps: u64,
    /// Re-verify the state invariants after every step.
    pub check_invariants: bool,
}

impl Default for WalkOptions {
    fn default() -> Self {
        Self {
            horizon_steps: u64::MAX,
            check_invariants: cfg!(debug_assertions),
        }
    }
}

/// Run a walk for at most `horizon_steps` steps (`u64::MAX` for exhaustion).
pub fn run_walk<R: Rng + ?Sized>(
    counts: &TypeCounts,
    a: f64,
    horizon_steps: u64,
    rng: &mut R,
) -> Result<WalkTrace, WalkError> {
    run_walk_with(
        counts,
        a,
        WalkOptions {
            horizon_steps,
            ..WalkOptions::default()
        },
        rng,
    )
}

pub fn run_walk_with<R: Rng + ?Sized>(
    counts: &TypeCounts,
    a: f64,
    opts: WalkOptions,
    rng: &mut R,
) -> Result<WalkTrace, WalkError> {
    let mut state = WalkState::new(counts, a, rng)?;
    let cap = usize::try_from(opts.horizon_steps.min(counts.n())).unwrap_or(usize::MAX);
    let mut trace = WalkTrace {
        n: counts.n(),
        a,
        z: Vec::with_capacity(cap + 1),
        active: Vec::with_capacity(cap + 1),
        unrevealed_weight: Vec::with_capacity(cap + 1),
        marked_types: Vec::with_capacity(cap),
        roots: Vec::with_capacity(cap),
        cond_mean: Vec::with_capacity(cap),
        cond_var: Vec::with_capacity(cap),
        clamp_events: 0,
        stop: StopReason::Horizon,
    };
    trace.z.push(state.z());
    trace.active.push(state.active_total());
    trace.unrevealed_weight.push(state.unrevealed_weight());

    let mut taken = 0u64;
    while taken < opts.horizon_steps && !state.is_stopped() {
        let rec = state.step(rng)?;
        if opts.check_invariants {
            state.check_invariants()?;
        }
        trace.marked_types.push(rec.marked_type);
        trace.roots.push(rec.root);
        trace.cond_mean.push(rec.cond_mean);
        trace.cond_var.push(rec.cond_var);
        trace.z.push(state.z());
        trace.active.push(state.active_total());
        trace.unrevealed_weight.push(state.unrevealed_weight());
        taken += 1;
    }
    if state.is_stopped() {
        trace.stop = StopReason::Exhausted;
    }
    trace.clamp_events = state.clamp_events();
    Ok(trace)
}

/// Component sizes of one realization, largest first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentCensus {
    pub sizes: Vec<u64>,
    pub n: u64,
    /// Type-0 vertices; each is an isolated vertex and is also listed in `sizes`.
    pub zero_type_singletons: u64,
    /// All vertices are accounted for.
    pub complete: bool,
}

impl ComponentCensus {
    /// Build from unordered sizes; sorts descending.
    pub fn new(mut sizes: Vec<u64>, n: u64, zero_type_singletons: u64, complete: bool) -> Self {
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        Self {
            sizes,
            n,
            zero_type_singletons,
            complete,
        }
    }

    pub fn total(&self) -> u64 {
        self.sizes.iter().sum()
    }

    /// The `k` largest sizes, zero-padded.
    pub fn top(&self, k: usize) -> Vec<u64> {
        (0..k)
            .map(|i| self.sizes.get(i).copied().unwrap_or(0))
            .collect()
    }
}

/// Hitting times `tau_k = min{i : z(i) = -k}` of a walk given as
/// `z(1), z(2), ...` (1-based step indices).
pub fn hitting_times(z: &[i64]) -> Vec<u64> {
    let mut taus = Vec::new();
    let mut next = -1i64;
    for (idx, &v) in z.iter().enumerate() {
        if v == next {
            taus.push(idx as u64 + 1);
            next -= 1;
        }
    }
    taus
}

/// Closed-component sizes read off a walk: `tau_1 - 1`, then `tau_k - tau_{k-1}`.
pub fn sizes_from_walk(z: &[i64]) -> Vec<u64> {
    let mut prev = 1u64;
    hitting_times(z)
        .into_iter()
        .map(|t| {
            let s = t - prev;
            prev = t;
            s
        })
        .collect()
}

/// Census of the components the walk closed. Type-0 vertices are appended
/// as singletons once the walk is exhausted.
pub fn census_from_trace(trace: &WalkTrace, counts: &TypeCounts) -> ComponentCensus {
    let mut sizes = sizes_from_walk(&trace.z);
    let complete = trace.stop == StopReason::Exhausted;
    let zeros = if complete { counts.count(0) } else { 0 };
    sizes.extend(std::iter::repeat_n(1, zeros as usize));
    let census = ComponentCensus::new(sizes, counts.n(), zeros, complete);
    debug_assert!(!complete || census.total() == counts.n());
    census
}

/// `Z_n(s_j) = n^{-1/3} z(j + 1)` on `s_j = j n^{-2/3}`, `j <= s_max n^{2/3}`.
pub fn rescaled_path(trace: &WalkTrace, s_max: f64) -> Vec<(f64, f64)> {
    let n = trace.n as f64;
    let time_scale = n.powf(-2.0 / 3.0);
    let space_scale = n.powf(-1.0 / 3.0);
    let last = grid_len(trace, s_max);
    (0..last)
        .map(|j| (j as f64 * time_scale, trace.z[j] as f64 * space_scale))
        .collect()
}

fn grid_len(trace: &WalkTrace, s_max: f64) -> usize {
    let n = trace.n as f64;
    let j_max = (s_max * n.powf(2.0 / 3.0)).floor() as usize;
    (j_max + 1).min(trace.z.len())
}

/// Rescaled drift and quadratic-variation curves on the `Z_n` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftQvCurves {
    pub s: Vec<f64>,
    /// `n^{-1/3} D(j + 1)` with `D(k) = sum_{i<k} E[dz(i) | state]`.
    pub drift: Vec<f64>,
    /// `n^{-2/3} A(j)` with `A(k) = sum_{i<=k} Var[dz(i) | state]`.
    pub qv: Vec<f64>,
    /// `n^{-1/3} (z(j + 1) - D(j + 1))`.
    pub martingale: Vec<f64>,
}

pub fn drift_qv_curves(trace: &WalkTrace, s_max: f64) -> DriftQvCurves {
    let n = trace.n as f64;
    let time_scale = n.powf(-2.0 / 3.0);
    let space_scale = n.powf(-1.0 / 3.0);
    let len = grid_len(trace, s_max);
    let mut out = DriftQvCurves {
        s: Vec::with_capacity(len),
        drift: Vec::with_capacity(len),
        qv: Vec::with_capacity(len),
        martingale: Vec::with_capacity(len),
    };
    let (mut d, mut a) = (0.0, 0.0);
    for j in 0..len {
        if j > 0 {
            d += trace.cond_mean[j - 1];
            a += trace.cond_var[j - 1];
        }
        out.s.push(j as f64 * time_scale);
        out.drift.push(d * space_scale);
        out.qv.push(a * time_scale);
        out.martingale.push((trace.z[j] as f64 - d) * space_scale);
    }
    out
}

/// `max_{j <= s n^{2/3}} |n^{-1} sum_x x U^x(j) - ex|`.
pub fn weight_depletion_deviation(trace: &WalkTrace, ex: f64, s_max: f64) -> f64 {
    let n = trace.n as f64;
    trace.unrevealed_weight[..grid_len(trace, s_max)]
        .iter()
        .map(|&w| (w as f64 / n - ex).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;

    fn counts(pairs: &[(TypeValue, u64)]) -> TypeCounts {
        TypeCounts::from_pairs(pairs).unwrap()
    }

    #[test]
    fn init_rejects_all_zero_types() {
        let mut rng = seed::stream(0, &[]);
        assert_eq!(
            WalkState::new(&counts(&[(0, 5)]), 0.0, &mut rng).unwrap_err(),
            WalkError::NoExplorableVertices
        );
    }

    #[test]
    fn init_state() {
        let mut rng = seed::stream(0, &[]);
        let s = WalkState::new(&counts(&[(1, 3)]), 0.0, &mut rng).unwrap();
        assert_eq!(s.marked_type(), Some(1));
        assert_eq!((s.z(), s.active_total(), s.step_index()), (0, 0, 1));
        s.check_invariants().unwrap();
    }

    #[test]
    fn root_choice_is_size_biased() {
        // weights 3*1 and 1*2
        let c = counts(&[(1, 3), (2, 1)]);
        let trials = 200_000;
        let mut twos = 0;
        for r in 0..trials {
            let mut rng = seed::stream(11, &[r]);
            if WalkState::new(&c, 0.0, &mut rng).unwrap().marked_type() == Some(2) {
                twos += 1;
            }
        }
        let frac = twos as f64 / trials as f64;
        let sd = (0.4f64 * 0.6 / trials as f64).sqrt();
        assert!((frac - 0.4).abs() < 5.0 * sd, "frac {frac}");
    }

    #[test]
    fn empty_pool_step_decrements() {
        // one type-1 vertex revealed and active alongside the marked one; pool empty
        let c = counts(&[(1, 2)]);
        let mut rng = seed::stream(3, &[]);
        let mut s = WalkState::new(&c, 0.0, &mut rng).unwrap();
        // force the state: both vertices active, none unrevealed, one marked earlier
        s.unrevealed = vec![0];
        s.active = vec![2];
        s.active_total = 2;
        s.unrevealed_weight = 0;
        let z0 = s.z();
        let rec = s.step(&mut rng).unwrap();
        assert_eq!(rec.new_vertices, 0);
        assert!(!rec.root);
        assert_eq!(s.z(), z0 - 1);
        assert_eq!(s.marked_type(), Some(1));
        assert_eq!(rec.cond_mean, -1.0);
        assert_eq!(rec.cond_var, 0.0);
    }

    #[test]
    fn first_step_with_two_vertices_is_a_fair_coin() {
        let c = counts(&[(1, 2)]);
        let trials = 100_000;
        let mut edges = 0;
        for r in 0..trials {
            let mut rng = seed::stream(4, &[r]);
            let mut s = WalkState::new(&c, 0.0, &mut rng).unwrap();
            let rec = s.step(&mut rng).unwrap();
            assert!(rec.root);
            assert_eq!(rec.cond_mean, -1.0 + 0.5);
            assert_eq!(rec.cond_var, 0.25);
            edges += rec.new_vertices;
        }
        let frac = edges as f64 / trials as f64;
        assert!((frac - 0.5).abs() < 5.0 * (0.25f64 / trials as f64).sqrt());
    }

    #[test]
    fn expected_offspring_in_homogeneous_walk() {
        let n = 10_000u64;
        let c = counts(&[(1, n)]);
        let mut rng = seed::stream(5, &[]);
        let mut s = WalkState::new(&c, 0.0, &mut rng).unwrap();
        let horizon = (n as f64).powf(2.0 / 3.0) as u64;
        let lo = 1.0 - 2.0 * (n as f64).powf(-1.0 / 3.0);
        for _ in 0..horizon {
            let u = s.unrevealed_total();
            let root = s.active_total() == 0;
            let rec = s.step(&mut rng).unwrap();
            let expected = (u - u64::from(root)) as f64 / n as f64;
            assert!((rec.cond_mean + 1.0 - expected).abs() < 1e-12);
            assert!(expected <= 1.0 && expected >= lo, "{expected}");
        }
    }

    #[test]
    fn single_vertex_walk() {
        let c = counts(&[(1, 1)]);
        let t = run_walk(&c, 0.0, u64::MAX, &mut seed::stream(6, &[])).unwrap();
        assert_eq!(t.steps(), 1);
        assert_eq!(t.stop, StopReason::Exhausted);
        assert_eq!(census_from_trace(&t, &c).sizes, vec![1]);
    }

    #[test]
    fn zero_types_become_singletons() {
        let c = counts(&[(0, 4), (1, 1)]);
        let t = run_walk(&c, 0.0, u64::MAX, &mut seed::stream(7, &[])).unwrap();
        assert_eq!(t.steps(), 1);
        assert_eq!(t.marked_types, vec![1]);
        let census = census_from_trace(&t, &c);
        assert_eq!(census.sizes, vec![1; 5]);
        assert_eq!(census.zero_type_singletons, 4);
        assert!(census.complete);
    }

    #[test]
    fn three_vertices_are_fully_consumed() {
        let c = counts(&[(1, 3)]);
        for r in 0..200 {
            let t = run_walk(&c, 0.0, 3, &mut seed::stream(8, &[r])).unwrap();
            assert_eq!(t.stop, StopReason::Exhausted);
            assert_eq!(census_from_trace(&t, &c).total(), 3);
        }
    }

    #[test]
    fn census_from_hitting_times() {
        assert_eq!(sizes_from_walk(&[0, 2, 1, 0, -1]), vec![4]);
        assert_eq!(sizes_from_walk(&[0, -1, -2]), vec![1, 1]);
        assert_eq!(hitting_times(&[0, 1, 0, -1, 0, -1, -2]), vec![4, 7]);
    }

    #[test]
    fn horizon_leaves_census_incomplete() {
        let c = counts(&[(1, 1000)]);
        let t = run_walk(&c, 0.0, 10, &mut seed::stream(9, &[])).unwrap();
        assert_eq!(t.steps(), 10);
        assert_eq!(t.stop, StopReason::Horizon);
        let census = census_from_trace(&t, &c);
        assert!(!census.complete);
        assert!(census.total() <= 10);
    }

    #[test]
    fn rescaling_arithmetic() {
        let trace = WalkTrace {
            n: 1_000_000,
            a: 0.0,
            z: vec![0, 5, 4],
            active: vec![0, 5, 4],
            unrevealed_weight: vec![0; 3],
            marked_types: vec![1, 1],
            roots: vec![true, false],
            cond_mean: vec![0.0, 0.0],
            cond_var: vec![0.0, 0.0],
            clamp_events: 0,
            stop: StopReason::Horizon,
        };
        let p = rescaled_path(&trace, 1.0);
        assert_eq!(p.len(), 3);
        assert!((p[1].0 - 1e-4).abs() < 1e-15);
        assert!((p[1].1 - 0.05).abs() < 1e-12);

        let flat = WalkTrace {
            z: vec![0, 0, 0],
            ..trace
        };
        assert!(rescaled_path(&flat, 1.0).iter().all(|&(_, v)| v == 0.0));
    }

    #[test]
    fn curves_start_at_zero() {
        let c = counts(&[(1, 10_000)]);
        let t = run_walk(&c, 0.0, 500, &mut seed::stream(10, &[])).unwrap();
        let curves = drift_qv_curves(&t, 1.0);
        assert_eq!(curves.drift[0], 0.0);
        assert_eq!(curves.qv[0], 0.0);
        assert_eq!(curves.martingale[0], 0.0);
        assert_eq!(curves.s.len(), curves.qv.len());
    }

    #[test]
    fn clamped_probabilities_are_counted() {
        // 3 * 3 / 4 > 1
        let c = counts(&[(3, 4)]);
        let t = run_walk(&c, 0.0, u64::MAX, &mut seed::stream(12, &[])).unwrap();
        assert!(t.clamp_events > 0);
        // a complete graph: one component
        assert_eq!(census_from_trace(&t, &c).sizes, vec![4]);
    }
}
