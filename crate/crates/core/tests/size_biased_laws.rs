use critgraph::dist::{sample_types, size_biased_pmf, TypeCounts, TypePmf};
use critgraph::seed;
use critgraph::stats::chi_square_gof;
use critgraph::walk::{run_walk_with, WalkOptions, WalkState};

fn pmf() -> TypePmf {
    TypePmf::from_atoms(&[(0, 0.375), (1, 0.5), (2, 0.125)]).unwrap()
}

fn observed(counts: &TypeCounts, support: &[u32]) -> Vec<u64> {
    support.iter().map(|&x| counts.count(x)).collect()
}

#[test]
fn multinomial_type_counts_pass_chi_square() {
    let pmf = pmf();
    let failures = (0..100u64)
        .filter(|&s| {
            let counts = sample_types(&pmf, 5000, &mut seed::stream(21, &[s])).unwrap();
            chi_square_gof(&observed(&counts, pmf.support()), pmf.probs())
                .unwrap()
                .p_value
                < 0.001
        })
        .count();
    assert!(failures <= 2, "{failures} failures");
}

#[test]
fn roots_follow_the_size_biased_pool() {
    let counts = TypeCounts::from_pairs(&[(0, 30), (1, 40), (3, 10)]).unwrap();
    // weights 40 and 30 out of 70
    let mut obs = [0u64; 2];
    for r in 0..20_000u64 {
        let s = WalkState::new(&counts, 0.0, &mut seed::stream(22, &[r])).unwrap();
        obs[usize::from(s.marked_type() == Some(3))] += 1;
    }
    let res = chi_square_gof(&obs, &[4.0 / 7.0, 3.0 / 7.0]).unwrap();
    assert!(res.p_value > 0.001, "{res:?}");
}

#[test]
fn early_marked_types_follow_size_biased_law() {
    let pmf = pmf();
    let tilde = size_biased_pmf(&pmf).unwrap();
    let n = 20_000u64;
    let steps = (n as f64).powf(2.0 / 3.0) as u64;
    let mut failures = 0;
    for s in 0..40u64 {
        let mut rng = seed::stream(23, &[s]);
        let counts = sample_types(&pmf, n, &mut rng).unwrap();
        let opts = WalkOptions {
            horizon_steps: steps,
            check_invariants: false,
        };
        let trace = run_walk_with(&counts, 0.0, opts, &mut rng).unwrap();
        let obs: Vec<u64> = tilde
            .support()
            .iter()
            .map(|&x| trace.marked_types.iter().filter(|&&t| t == x).count() as u64)
            .collect();
        if chi_square_gof(&obs, tilde.probs()).unwrap().p_value < 0.001 {
            failures += 1;
        }
    }
    assert!(failures <= 2, "{failures} failures");
}
