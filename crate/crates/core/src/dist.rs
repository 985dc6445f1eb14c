//! Vertex-type laws: validation, moments, size-biasing and sampling.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::Serialize;
use thiserror::Error;

/// Vertex type value.
pub type TypeValue = u32;

/// Absolute tolerance on the total probability mass.
pub const MASS_TOLERANCE: f64 = 1e-12;
/// Default tolerance for the `E X^2 = 1` criticality check.
pub const CRITICALITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistError {
    #[error("support and probabilities differ in length ({support} vs {probs})")]
    LengthMismatch { support: usize, probs: usize },
    #[error("empty support")]
    EmptySupport,
    #[error("duplicate type value {0}")]
    DuplicateType(TypeValue),
    #[error("probability for type {value} is invalid: {prob}")]
    InvalidProbability { value: TypeValue, prob: f64 },
    #[error("probabilities do not sum to 1 (sum = {0})")]
    NotNormalized(f64),
    #[error("no positive types")]
    NoPositiveTypes,
    #[error("vertex count must be at least 1")]
    EmptyCounts,
}

/// A probability law on a finite set of non-negative integer types.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypePmf {
    support: Vec<TypeValue>,
    probs: Vec<f64>,
}

impl TypePmf {
    /// Build a pmf from parallel arrays. Atoms are sorted by value.
    pub fn new(support: Vec<TypeValue>, probs: Vec<f64>) -> Result<Self, DistError> {
        if support.len() != probs.len() {
            return Err(DistError::LengthMismatch {
                support: support.len(),
                probs: probs.len(),
            });
        }
        let atoms: Vec<(TypeValue, f64)> = support.into_iter().zip(probs).collect();
        Self::from_atoms(&atoms)
    }

    pub fn from_atoms(atoms: &[(TypeValue, f64)]) -> Result<Self, DistError> {
        if atoms.is_empty() {
            return Err(DistError::EmptySupport);
        }
        let mut sorted = atoms.to_vec();
        sorted.sort_by_key(|&(x, _)| x);
        for w in sorted.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(DistError::DuplicateType(w[0].0));
            }
        }
        for &(value, prob) in &sorted {
            if !prob.is_finite() || prob < 0.0 {
                return Err(DistError::InvalidProbability { value, prob });
            }
        }
        let sum: f64 = sorted.iter().map(|&(_, p)| p).sum();
        if (sum - 1.0).abs() > MASS_TOLERANCE {
            return Err(DistError::NotNormalized(sum));
        }
        if !sorted.iter().any(|&(x, p)| x > 0 && p > 0.0) {
            return Err(DistError::NoPositiveTypes);
        }
        let (support, probs) = sorted.into_iter().unzip();
        Ok(Self { support, probs })
    }

    pub fn point_mass(value: TypeValue) -> Result<Self, DistError> {
        Self::from_atoms(&[(value, 1.0)])
    }

    pub fn support(&self) -> &[TypeValue] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn atoms(&self) -> impl Iterator<Item = (TypeValue, f64)> + '_ {
        self.support.iter().copied().zip(self.probs.iter().copied())
    }

    /// `E X^k` as a finite sum over the support.
    pub fn moment(&self, k: i32) -> f64 {
        self.atoms().map(|(x, p)| f64::from(x).powi(k) * p).sum()
    }

    pub fn prob_of(&self, value: TypeValue) -> f64 {
        self.support
            .binary_search(&value)
            .map(|i| self.probs[i])
            .unwrap_or(0.0)
    }
}

/// First three moments and the coefficients of the limiting diffusion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentSummary {
    pub ex: f64,
    pub ex2: f64,
    pub ex3: f64,
    /// `sqrt(E X * E X^3)`
    pub sigma: f64,
    /// `E X^3 / E X`
    pub beta: f64,
    pub critical: bool,
}

pub fn compute_moments(pmf: &TypePmf, tol: f64) -> Result<MomentSummary, DistError> {
    let ex = pmf.moment(1);
    if ex <= 0.0 {
        return Err(DistError::NoPositiveTypes);
    }
    let ex2 = pmf.moment(2);
    let ex3 = pmf.moment(3);
    Ok(MomentSummary {
        ex,
        ex2,
        ex3,
        sigma: (ex * ex3).sqrt(),
        beta: ex3 / ex,
        critical: (ex2 - 1.0).abs() <= tol,
    })
}

/// Law of `X~` with `P{X~ = y} = y P{X = y} / E X`. Type 0 is dropped.
pub fn size_biased_pmf(pmf: &TypePmf) -> Result<TypePmf, DistError> {
    let ex = pmf.moment(1);
    if ex <= 0.0 {
        return Err(DistError::NoPositiveTypes);
    }
    let atoms: Vec<(TypeValue, f64)> = pmf
        .atoms()
        .filter(|&(x, p)| x > 0 && p > 0.0)
        .map(|(x, p)| (x, f64::from(x) * p / ex))
        .collect();
    // renormalise away the last ulp of rounding so the result validates
    let total: f64 = atoms.iter().map(|&(_, p)| p).sum();
    let atoms: Vec<_> = atoms.into_iter().map(|(x, p)| (x, p / total)).collect();
    TypePmf::from_atoms(&atoms)
}

/// Aggregated vertex types: `U^x(1)` for every type present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypeCounts {
    counts: BTreeMap<TypeValue, u64>,
    n: u64,
}

impl TypeCounts {
    pub fn from_map(counts: BTreeMap<TypeValue, u64>) -> Result<Self, DistError> {
        let counts: BTreeMap<_, _> = counts.into_iter().filter(|&(_, c)| c > 0).collect();
        let n = counts.values().sum();
        if n == 0 {
            return Err(DistError::EmptyCounts);
        }
        Ok(Self { counts, n })
    }

    pub fn from_pairs(pairs: &[(TypeValue, u64)]) -> Result<Self, DistError> {
        let mut map = BTreeMap::new();
        for &(x, c) in pairs {
            *map.entry(x).or_insert(0) += c;
        }
        Self::from_map(map)
    }

    pub fn from_types(types: &[TypeValue]) -> Result<Self, DistError> {
        let mut map = BTreeMap::new();
        for &x in types {
            *map.entry(x).or_insert(0) += 1;
        }
        Self::from_map(map)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn count(&self, value: TypeValue) -> u64 {
        self.counts.get(&value).copied().unwrap_or(0)
    }

    /// Non-zero `(type, count)` pairs in ascending type order.
    pub fn iter(&self) -> impl Iterator<Item = (TypeValue, u64)> + '_ {
        self.counts.iter().map(|(&x, &c)| (x, c))
    }

    pub fn max_type(&self) -> TypeValue {
        *self
            .counts
            .keys()
            .next_back()
            .expect("counts are non-empty")
    }

    /// `sum_x x U^x`
    pub fn total_weight(&self) -> u64 {
        self.iter().map(|(x, c)| u64::from(x) * c).sum()
    }
}

/// i.i.d. types for `n` vertices, aggregated (a multinomial draw).
pub fn sample_types<R: Rng + ?Sized>(
    pmf: &TypePmf,
    n: u64,
    rng: &mut R,
) -> Result<TypeCounts, DistError> {
    if n == 0 {
        return Err(DistError::EmptyCounts);
    }
    let mut counts = BTreeMap::new();
    let mut remaining_n = n;
    let mut remaining_mass = 1.0;
    let last = pmf.support.len() - 1;
    for (i, (x, p)) in pmf.atoms().enumerate() {
        if remaining_n == 0 {
            break;
        }
        let c = if i == last {
            remaining_n
        } else {
            let q = (p / remaining_mass).clamp(0.0, 1.0);
            Binomial::new(remaining_n, q)
                .expect("q is a probability")
                .sample(rng)
        };
        counts.insert(x, c);
        remaining_n -= c;
        remaining_mass -= p;
    }
    TypeCounts::from_map(counts)
}

/// Observed maximal type against the `n^{1/3}` scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxTypeDiagnostic {
    pub max_type: TypeValue,
    pub cube_root_n: f64,
    pub ratio: f64,
    /// Set when `max_type >= n^{1/3}`; the realization is kept either way.
    pub flagged: bool,
}

pub fn validate_max_type(counts: &TypeCounts) -> MaxTypeDiagnostic {
    let max_type = counts.max_type();
    let cube_root_n = (counts.n() as f64).cbrt();
    let ratio = f64::from(max_type) / cube_root_n;
    MaxTypeDiagnostic {
        max_type,
        cube_root_n,
        ratio,
        flagged: ratio >= 1.0,
    }
}
