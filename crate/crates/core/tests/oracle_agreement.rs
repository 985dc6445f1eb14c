use std::collections::BTreeMap;

use critgraph::dist::{sample_types, TypeCounts, TypePmf, TypeValue};
use critgraph::oracle::{
    components_union_find, enumerate_small_exact, sample_graph, walk_on_graph,
};
use critgraph::seed;
use critgraph::walk::{census_from_trace, run_walk};
use proptest::prelude::*;

fn expand(counts: &TypeCounts) -> Vec<TypeValue> {
    counts
        .iter()
        .flat_map(|(x, c)| std::iter::repeat_n(x, c as usize))
        .collect()
}

#[test]
fn graph_walk_matches_union_find() {
    let pmfs = [
        TypePmf::point_mass(1).unwrap(),
        TypePmf::from_atoms(&[(0, 0.75), (2, 0.25)]).unwrap(),
    ];
    for (p, pmf) in pmfs.iter().enumerate() {
        for r in 0..300u64 {
            let mut rng = seed::stream(11, &[p as u64, r]);
            let counts = sample_types(pmf, 120, &mut rng).unwrap();
            let g = sample_graph(&expand(&counts), 0.5, &mut rng).unwrap();
            let uf = components_union_find(&g);
            let walked = walk_on_graph(&g, &mut rng);
            assert_eq!(walked.sizes, uf.sizes, "pmf {p} replica {r}");
            assert_eq!(uf.total(), 120);
        }
    }
}

#[test]
fn bucketed_walk_matches_enumeration_at_n3() {
    let exact = enumerate_small_exact(&[1, 1, 1], 0.0).unwrap();
    let counts = TypeCounts::from_types(&[1, 1, 1]).unwrap();
    let reps = 60_000u64;
    let mut freq: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    for r in 0..reps {
        let mut rng = seed::stream(12, &[r]);
        let trace = run_walk(&counts, 0.0, u64::MAX, &mut rng).unwrap();
        *freq
            .entry(census_from_trace(&trace, &counts).sizes)
            .or_default() += 1;
    }
    for (sizes, p) in &exact.probs {
        let f = freq.get(sizes).copied().unwrap_or(0) as f64 / reps as f64;
        let sd = (p * (1.0 - p) / reps as f64).sqrt();
        assert!((f - p).abs() < 5.0 * sd, "{sizes:?}: {f} vs {p}");
    }
    assert_eq!(freq.len(), exact.probs.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn censuses_agree_on_arbitrary_small_graphs(
        types in prop::collection::vec(0u32..4, 1..40),
        a in -2.0f64..2.0,
        s in any::<u64>(),
    ) {
        let mut rng = seed::stream(s, &[]);
        let g = sample_graph(&types, a, &mut rng).unwrap();
        let walked = walk_on_graph(&g, &mut rng);
        let uf = components_union_find(&g);
        prop_assert_eq!(&walked.sizes, &uf.sizes);
        prop_assert_eq!(walked.total(), types.len() as u64);
    }

    #[test]
    fn exhausted_walk_accounts_for_every_vertex(
        pairs in prop::collection::btree_map(0u32..5, 1u64..60, 1..4),
        a in -1.0f64..1.0,
        s in any::<u64>(),
    ) {
        let counts = TypeCounts::from_map(pairs).unwrap();
        prop_assume!(counts.total_weight() > 0);
        let mut rng = seed::stream(s, &[]);
        let trace = run_walk(&counts, a, u64::MAX, &mut rng).unwrap();
        let census = census_from_trace(&trace, &counts);
        prop_assert!(census.complete);
        prop_assert_eq!(census.total(), counts.n());
    }
}
