//! A census with the first component counted from step 0 instead of step 1
//! must be caught by both oracles.

use critgraph::dist::{sample_types, TypeCounts, TypePmf};
use critgraph::oracle::{components_union_find, enumerate_small_exact, sample_graph};
use critgraph::seed;
use critgraph::walk::{hitting_times, run_walk};

fn off_by_one_sizes(z: &[i64]) -> Vec<u64> {
    let mut prev = 0u64;
    let mut sizes: Vec<u64> = hitting_times(z)
        .into_iter()
        .map(|t| {
            let s = t - prev;
            prev = t;
            s
        })
        .collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

#[test]
fn enumeration_rejects_shifted_first_component() {
    let exact = enumerate_small_exact(&[1, 1, 1], 0.0).unwrap();
    let counts = TypeCounts::from_types(&[1, 1, 1]).unwrap();
    let walks = 2000;
    let unmatched = (0..walks)
        .filter(|&r| {
            let trace = run_walk(&counts, 0.0, u64::MAX, &mut seed::stream(3, &[r])).unwrap();
            exact.prob(&off_by_one_sizes(&trace.z)) == 0.0
        })
        .count();
    assert_eq!(unmatched, walks as usize);
}

#[test]
fn union_find_rejects_shifted_first_component() {
    let pmf = TypePmf::point_mass(1).unwrap();
    let mut rng = seed::stream(4, &[]);
    let counts = sample_types(&pmf, 200, &mut rng).unwrap();
    let trace = run_walk(&counts, 0.0, u64::MAX, &mut rng).unwrap();
    let graph = sample_graph(&vec![1; 200], 0.0, &mut rng).unwrap();
    let uf = components_union_find(&graph);
    let mutated = off_by_one_sizes(&trace.z);
    assert_eq!(mutated.iter().sum::<u64>(), uf.total() + 1);
    assert_ne!(mutated, uf.sizes);
}
