//! Ground truth at small `n`: explicit edge sampling, union-find census,
//! the exploration algorithm run on a materialised graph, and exhaustive
//! enumeration of every graph on at most six vertices.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::Ratio;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::Serialize;
use thiserror::Error;

use crate::dist::{TypeCounts, TypeValue};
use crate::walk::{edge_probability, ComponentCensus};

/// Largest vertex count accepted by [`enumerate_small_exact`].
pub const MAX_EXACT_N: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph needs at least one vertex")]
    Empty,
    #[error("exhaustive enumeration supports n <= {MAX_EXACT_N}, got {0}")]
    TooLarge(usize),
    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(usize, usize),
    #[error("graph dump line {line}: {msg}")]
    Dump { line: usize, msg: String },
}

/// A materialised graph. Vertices are `0..n`; the dump format is 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitGraph {
    types: Vec<TypeValue>,
    edges: Vec<(usize, usize)>,
}

impl ExplicitGraph {
    /// Edges are normalised to `(lo, hi)`; self-loops, duplicates and
    /// out-of-range endpoints are rejected.
    pub fn new(types: Vec<TypeValue>, edges: Vec<(usize, usize)>) -> Result<Self, OracleError> {
        if types.is_empty() {
            return Err(OracleError::Empty);
        }
        let n = types.len();
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        let mut norm = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            let e = (u.min(v), u.max(v));
            if u == v || e.1 >= n || !seen.insert(e) {
                return Err(OracleError::InvalidEdge(u, v));
            }
            norm.push(e);
        }
        Ok(Self { types, edges: norm })
    }

    pub fn n(&self) -> usize {
        self.types.len()
    }

    pub fn types(&self) -> &[TypeValue] {
        &self.types
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n()];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// `n`, then the types, then one 1-based edge per line.
    pub fn to_dump(&self) -> String {
        let mut out = format!("{}\n", self.n());
        let types: Vec<String> = self.types.iter().map(|x| x.to_string()).collect();
        out.push_str(&types.join(" "));
        out.push('\n');
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{} {}", u + 1, v + 1);
        }
        out
    }

    pub fn from_dump(text: &str) -> Result<Self, OracleError> {
        let err = |line: usize, msg: &str| OracleError::Dump {
            line,
            msg: msg.to_string(),
        };
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (ln, first) = lines.next().ok_or_else(|| err(1, "missing vertex count"))?;
        let n: usize = first
            .trim()
            .parse()
            .map_err(|_| err(ln + 1, "bad vertex count"))?;
        let (ln, second) = lines.next().ok_or_else(|| err(ln + 2, "missing types"))?;
        let types = second
            .split_whitespace()
            .map(|t| t.parse::<TypeValue>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| err(ln + 1, "bad type value"))?;
        if types.len() != n {
            return Err(err(ln + 1, "type count differs from n"));
        }
        let mut edges = Vec::new();
        for (ln, line) in lines {
            let ends: Vec<usize> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|_| err(ln + 1, "bad edge"))?;
            match ends[..] {
                [u, v] if u >= 1 && v >= 1 => edges.push((u - 1, v - 1)),
                _ => return Err(err(ln + 1, "edge needs two 1-based endpoints")),
            }
        }
        Self::new(types, edges)
    }
}

/// Sample every pair independently. Runs in `O(n |S| + edges)` by
/// geometric skipping within each (vertex, type class) block.
pub fn sample_graph<R: Rng + ?Sized>(
    types: &[TypeValue],
    a: f64,
    rng: &mut R,
) -> Result<ExplicitGraph, OracleError> {
    let n = types.len();
    if n == 0 {
        return Err(OracleError::Empty);
    }
    let eps = a / (n as f64).cbrt();
    let mut classes: BTreeMap<TypeValue, Vec<usize>> = BTreeMap::new();
    for (v, &x) in types.iter().enumerate() {
        classes.entry(x).or_default().push(v);
    }
    let mut edges = Vec::new();
    for (u, &xu) in types.iter().enumerate() {
        for (&y, members) in &classes {
            let start = members.partition_point(|&v| v <= u);
            let block = &members[start..];
            let (p, _) = edge_probability(xu, y, eps, n as u64);
            if p <= 0.0 || block.is_empty() {
                continue;
            }
            if p >= 1.0 {
                edges.extend(block.iter().map(|&v| (u, v)));
                continue;
            }
            let log_q = (-p).ln_1p();
            let mut pos: i64 = -1;
            loop {
                let r: f64 = rng.random();
                pos += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
                if pos >= block.len() as i64 {
                    break;
                }
                edges.push((u, block[pos as usize]));
            }
        }
    }
    Ok(ExplicitGraph {
        types: types.to_vec(),
        edges,
    })
}

/// Disjoint sets with path compression and union by size.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<u64>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, v: usize) -> usize {
        let mut root = v;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = v;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    /// Sizes of all sets, descending.
    pub fn set_sizes(&mut self) -> Vec<u64> {
        let mut sizes = Vec::new();
        for v in 0..self.parent.len() {
            if self.find(v) == v {
                sizes.push(self.size[v]);
            }
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }
}

fn zero_types(graph: &ExplicitGraph) -> u64 {
    graph.types.iter().filter(|&&x| x == 0).count() as u64
}

pub fn components_union_find(graph: &ExplicitGraph) -> ComponentCensus {
    let mut sets = DisjointSets::new(graph.n());
    for &(u, v) in &graph.edges {
        sets.union(u, v);
    }
    ComponentCensus::new(sets.set_sizes(), graph.n() as u64, zero_types(graph), true)
}

/// The exploration algorithm on a materialised graph: size-biased roots,
/// uniform choice among active vertices, neighbours revealed on marking.
pub fn walk_on_graph<R: Rng + ?Sized>(graph: &ExplicitGraph, rng: &mut R) -> ComponentCensus {
    let adj = graph.adjacency();
    let type_values: Vec<TypeValue> = {
        let mut t = graph.types.clone();
        t.sort_unstable();
        t.dedup();
        t
    };
    let class_of: Vec<usize> = graph
        .types
        .iter()
        .map(|x| type_values.binary_search(x).expect("type is present"))
        .collect();
    // unrevealed vertices bucketed by type, with O(1) removal
    let mut unrevealed: Vec<Vec<usize>> = vec![Vec::new(); type_values.len()];
    let mut slot = vec![0usize; graph.n()];
    for (v, &c) in class_of.iter().enumerate() {
        slot[v] = unrevealed[c].len();
        unrevealed[c].push(v);
    }
    let mut is_unrevealed = vec![true; graph.n()];
    let mut remove = |v: usize, unrevealed: &mut Vec<Vec<usize>>, is_unrevealed: &mut Vec<bool>| {
        let bucket = &mut unrevealed[class_of[v]];
        let last = *bucket.last().expect("bucket holds v");
        bucket.swap_remove(slot[v]);
        if last != v {
            slot[last] = slot[v];
        }
        is_unrevealed[v] = false;
    };

    let mut active: Vec<usize> = Vec::new();
    let mut sizes = Vec::new();
    let mut current = 0u64;
    loop {
        let v = if active.is_empty() {
            let weight: u64 = type_values
                .iter()
                .zip(&unrevealed)
                .map(|(&x, b)| u64::from(x) * b.len() as u64)
                .sum();
            if weight == 0 {
                break;
            }
            if current > 0 {
                sizes.push(current);
                current = 0;
            }
            let mut r = rng.random_range(0..weight);
            let mut class = 0;
            for (c, (&x, b)) in type_values.iter().zip(&unrevealed).enumerate() {
                let w = u64::from(x) * b.len() as u64;
                if r < w {
                    class = c;
                    break;
                }
                r -= w;
            }
            let bucket = &unrevealed[class];
            let v = bucket[rng.random_range(0..bucket.len())];
            remove(v, &mut unrevealed, &mut is_unrevealed);
            v
        } else {
            let k = rng.random_range(0..active.len());
            active.swap_remove(k)
        };
        current += 1;
        for &w in &adj[v] {
            if is_unrevealed[w] {
                remove(w, &mut unrevealed, &mut is_unrevealed);
                active.push(w);
            }
        }
    }
    if current > 0 {
        sizes.push(current);
    }
    // whatever is left has type 0 and no edges
    let leftover: u64 = unrevealed.iter().map(|b| b.len() as u64).sum();
    sizes.extend(std::iter::repeat_n(1, leftover as usize));
    ComponentCensus::new(sizes, graph.n() as u64, zero_types(graph), true)
}

/// Exact law of the (descending) component-size vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusDistribution {
    pub n: usize,
    pub probs: BTreeMap<Vec<u64>, f64>,
    /// Rational probabilities, available when every edge probability is rational (`a = 0`).
    #[serde(skip)]
    pub exact: Option<BTreeMap<Vec<u64>, Ratio<i128>>>,
    /// Bound on the absolute floating-point error of each entry of `probs`.
    pub rounding_bound: f64,
}

impl CensusDistribution {
    pub fn prob(&self, sizes: &[u64]) -> f64 {
        self.probs.get(sizes).copied().unwrap_or(0.0)
    }
}

/// Enumerate all `2^{n(n-1)/2}` edge subsets and aggregate the census law.
pub fn enumerate_small_exact(
    types: &[TypeValue],
    a: f64,
) -> Result<CensusDistribution, OracleError> {
    let n = types.len();
    if n == 0 {
        return Err(OracleError::Empty);
    }
    if n > MAX_EXACT_N {
        return Err(OracleError::TooLarge(n));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let censuses: Vec<Vec<u64>> = (0u32..(1 << pairs.len()))
        .map(|mask| {
            let mut sets = DisjointSets::new(n);
            for (e, &(i, j)) in pairs.iter().enumerate() {
                if mask & (1 << e) != 0 {
                    sets.union(i, j);
                }
            }
            sets.set_sizes()
        })
        .collect();

    let eps = a / (n as f64).cbrt();
    let float_p: Vec<f64> = pairs
        .iter()
        .map(|&(i, j)| edge_probability(types[i], types[j], eps, n as u64).0)
        .collect();
    let mut sums: BTreeMap<Vec<u64>, (f64, f64)> = BTreeMap::new();
    for (mask, census) in censuses.iter().enumerate() {
        let w: f64 = float_p
            .iter()
            .enumerate()
            .map(|(e, &p)| if mask & (1 << e) != 0 { p } else { 1.0 - p })
            .product();
        // Neumaier compensated sum
        let (sum, comp) = sums.entry(census.clone()).or_insert((0.0, 0.0));
        let t = *sum + w;
        *comp += if sum.abs() >= w.abs() {
            (*sum - t) + w
        } else {
            (w - t) + *sum
        };
        *sum = t;
    }
    let probs = sums.into_iter().map(|(k, (s, c))| (k, s + c)).collect();

    let exact = (a == 0.0).then(|| {
        let ratio_p: Vec<Ratio<i128>> = pairs
            .iter()
            .map(|&(i, j)| {
                let num = i128::from(types[i]) * i128::from(types[j]);
                Ratio::new(num.min(n as i128), n as i128)
            })
            .collect();
        let one = Ratio::from_integer(1);
        let mut acc: BTreeMap<Vec<u64>, Ratio<i128>> = BTreeMap::new();
        for (mask, census) in censuses.iter().enumerate() {
            let w = ratio_p.iter().enumerate().fold(one, |w, (e, &p)| {
                w * if mask & (1 << e) != 0 { p } else { one - p }
            });
            *acc.entry(census.clone())
                .or_insert_with(|| Ratio::from_integer(0)) += w;
        }
        acc
    });

    Ok(CensusDistribution {
        n,
        probs,
        exact,
        rounding_bound: (pairs.len() as f64 + 4.0) * f64::EPSILON,
    })
}

/// One row of the thinning-identity check for a target type.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoissonRatioRow {
    pub target_type: TypeValue,
    /// `E[N^x / sum N ; sum N > 0]`
    pub lhs: f64,
    /// `(x U^x / sum_y y U^y) P{sum N > 0}`
    pub rhs: f64,
    pub ratio: f64,
    /// 95% delta-method interval for `ratio`.
    pub ci: (f64, f64),
    /// 95% Wilson interval for `P{sum N > 0}`.
    pub positive_ci: (f64, f64),
    pub samples: u64,
}

fn wilson(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    (centre - half, centre + half)
}

/// Monte Carlo check that, given a vertex of type `marked_type` being
/// explored, the share of its new neighbours that have type `x` matches
/// the size-biased weight `x U^x / sum_y y U^y`. Pools are the full counts
/// (the marked vertex itself is not among them).
pub fn poisson_ratio_spot_check<R: Rng + ?Sized>(
    counts: &TypeCounts,
    marked_type: TypeValue,
    a: f64,
    samples: u64,
    rng: &mut R,
) -> Vec<PoissonRatioRow> {
    let n = counts.n();
    let eps = a / (n as f64).cbrt();
    let buckets: Vec<(TypeValue, u64)> = counts.iter().collect();
    let samplers: Vec<Option<Binomial>> = buckets
        .iter()
        .map(|&(x, u)| {
            let (p, _) = edge_probability(marked_type, x, eps, n);
            (p > 0.0).then(|| Binomial::new(u, p).expect("p is a probability"))
        })
        .collect();
    let total_weight = counts.total_weight() as f64;

    let k = buckets.len();
    let (mut sf, mut sff) = (vec![0.0; k], vec![0.0; k]);
    let mut positive = 0u64;
    let mut draws = vec![0u64; k];
    for _ in 0..samples {
        for (d, s) in draws.iter_mut().zip(&samplers) {
            *d = s.as_ref().map_or(0, |b| b.sample(rng));
        }
        let total: u64 = draws.iter().sum();
        if total == 0 {
            continue;
        }
        positive += 1;
        for t in 0..k {
            let f = draws[t] as f64 / total as f64;
            sf[t] += f;
            sff[t] += f * f;
        }
    }
    let s = samples as f64;
    let g_mean = positive as f64 / s;
    buckets
        .iter()
        .enumerate()
        .map(|(t, &(x, u))| {
            let w = f64::from(x) * u as f64 / total_weight;
            let f_mean = sf[t] / s;
            let lhs = f_mean;
            let rhs = w * g_mean;
            let ratio = lhs / rhs;
            // Var(f - r g); g is an indicator and f = 0 whenever g = 0, so E[fg] = E[f]
            let r = f_mean / g_mean;
            let second = sff[t] / s - 2.0 * r * f_mean + r * r * g_mean;
            let resid_var = (second - (f_mean - r * g_mean).powi(2)).max(0.0);
            let se = (resid_var / s).sqrt() / g_mean / w;
            PoissonRatioRow {
                target_type: x,
                lhs,
                rhs,
                ratio,
                ci: (ratio - 1.96 * se, ratio + 1.96 * se),
                positive_ci: wilson(positive, samples, 1.96),
                samples,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;

    fn graph(types: Vec<TypeValue>, edges: Vec<(usize, usize)>) -> ExplicitGraph {
        ExplicitGraph::new(types, edges).unwrap()
    }

    #[test]
    fn rejects_invalid_edges() {
        assert!(ExplicitGraph::new(vec![1, 1], vec![(0, 0)]).is_err());
        assert!(ExplicitGraph::new(vec![1, 1], vec![(0, 1), (1, 0)]).is_err());
        assert!(ExplicitGraph::new(vec![1, 1], vec![(0, 2)]).is_err());
        assert_eq!(ExplicitGraph::new(vec![], vec![]), Err(OracleError::Empty));
    }

    #[test]
    fn union_find_examples() {
        let tri = graph(vec![1; 3], vec![(0, 1), (1, 2), (0, 2)]);
        assert_eq!(components_union_find(&tri).sizes, vec![3]);
        let empty = graph(vec![1; 4], vec![]);
        assert_eq!(components_union_find(&empty).sizes, vec![1; 4]);
        let paths = graph(vec![1; 5], vec![(0, 1), (2, 3)]);
        assert_eq!(components_union_find(&paths).sizes, vec![2, 2, 1]);
    }

    #[test]
    fn walk_on_graph_matches_union_find_on_fixed_graphs() {
        let g = graph(vec![0, 1, 2, 1, 0, 3], vec![(1, 2), (2, 3), (5, 1)]);
        for r in 0..100 {
            let w = walk_on_graph(&g, &mut seed::stream(1, &[r]));
            assert_eq!(w, components_union_find(&g));
            assert_eq!(w.zero_type_singletons, 2);
        }
    }

    #[test]
    fn zero_types_never_connect() {
        let mut rng = seed::stream(2, &[]);
        for _ in 0..100 {
            assert!(sample_graph(&[0, 5], 3.0, &mut rng)
                .unwrap()
                .edges()
                .is_empty());
        }
    }

    #[test]
    fn two_unit_vertices_flip_a_fair_coin() {
        let mut rng = seed::stream(3, &[]);
        let trials = 100_000;
        let hits: usize = (0..trials)
            .map(|_| sample_graph(&[1, 1], 0.0, &mut rng).unwrap().edges().len())
            .sum();
        let frac = hits as f64 / trials as f64;
        assert!((frac - 0.5).abs() < 5.0 * (0.25f64 / trials as f64).sqrt());
    }

    #[test]
    fn edge_count_mean() {
        // C(100, 2) pairs at p = 1/100: mean 49.5, variance 49.5 * 0.99
        let mut rng = seed::stream(4, &[]);
        let types = vec![1; 100];
        let reps = 10_000;
        let total: usize = (0..reps)
            .map(|_| sample_graph(&types, 0.0, &mut rng).unwrap().edges().len())
            .sum();
        let mean = total as f64 / reps as f64;
        let sd = (49.5f64 * 0.99 / reps as f64).sqrt();
        assert!((mean - 49.5).abs() < 3.0 * sd, "mean {mean}");
    }

    #[test]
    fn sampled_graphs_are_valid() {
        let mut rng = seed::stream(5, &[]);
        let types: Vec<TypeValue> = (0..60).map(|i| (i % 4) as TypeValue).collect();
        for _ in 0..50 {
            let g = sample_graph(&types, 2.0, &mut rng).unwrap();
            ExplicitGraph::new(g.types().to_vec(), g.edges().to_vec()).unwrap();
        }
    }

    #[test]
    fn exact_three_unit_vertices() {
        let d = enumerate_small_exact(&[1, 1, 1], 0.0).unwrap();
        let exact = d.exact.as_ref().unwrap();
        assert_eq!(exact[&vec![3]], Ratio::new(7, 27));
        assert_eq!(exact[&vec![2, 1]], Ratio::new(12, 27));
        assert_eq!(exact[&vec![1, 1, 1]], Ratio::new(8, 27));
        assert!((d.prob(&[3]) - 7.0 / 27.0).abs() <= d.rounding_bound);
        assert_eq!(d.probs.len(), 3);
    }

    #[test]
    fn exact_trivial_cases() {
        let d = enumerate_small_exact(&[0, 1], 1.5).unwrap();
        assert_eq!(d.prob(&[1, 1]), 1.0);
        assert!(d.exact.is_none());
        let d = enumerate_small_exact(&[1, 1], 0.0).unwrap();
        assert_eq!(d.prob(&[2]), 0.5);
        assert_eq!(d.prob(&[1, 1]), 0.5);
        assert_eq!(
            enumerate_small_exact(&[1; 7], 0.0),
            Err(OracleError::TooLarge(7))
        );
    }

    #[test]
    fn exact_mass_sums_to_one() {
        let d = enumerate_small_exact(&[1, 2, 0, 1, 3, 1], 0.7).unwrap();
        let total: f64 = d.probs.values().sum();
        assert!((total - 1.0).abs() < 1e-13);
        let d = enumerate_small_exact(&[1, 2, 1, 2], 0.0).unwrap();
        let total: Ratio<i128> = d.exact.unwrap().values().copied().sum();
        assert_eq!(total, Ratio::from_integer(1));
    }

    #[test]
    fn dump_round_trip() {
        let g = graph(vec![0, 1, 2], vec![(1, 2)]);
        let text = g.to_dump();
        assert_eq!(text, "3\n0 1 2\n2 3\n");
        assert_eq!(ExplicitGraph::from_dump(&text).unwrap(), g);
        assert!(matches!(
            ExplicitGraph::from_dump("2\n1 1\n1 1\n"),
            Err(OracleError::InvalidEdge(0, 0))
        ));
        assert!(matches!(
            ExplicitGraph::from_dump("2\n1\n"),
            Err(OracleError::Dump { line: 2, .. })
        ));
    }

    #[test]
    fn poisson_ratio_single_type_is_exact() {
        let c = TypeCounts::from_pairs(&[(1, 100)]).unwrap();
        let rows = poisson_ratio_spot_check(&c, 1, 0.0, 10_000, &mut seed::stream(6, &[]));
        assert_eq!(rows[0].ratio, 1.0);

        let c = TypeCounts::from_pairs(&[(1, 1)]).unwrap();
        let rows = poisson_ratio_spot_check(&c, 1, -0.5, 10_000, &mut seed::stream(6, &[1]));
        assert_eq!(rows[0].ratio, 1.0);
        // one Bernoulli with p = 0.5: both sides estimate p
        assert_eq!(rows[0].lhs, rows[0].rhs);
    }
}
