//! Measures the coupled dt -> dt/2 KS distance for gamma_1 that pins
//! `limit::DISCRETIZATION_KS_CALIBRATION`, plus truncation rates at K = 10.
//!
//!     cargo run --release -p critgraph --example calibrate_gate -- [paths] [seed]

use std::time::Instant;

use critgraph::limit::{gamma_for_coupled_path, sample_gamma, LimitParams, DEFAULT_DT, DEFAULT_S0};
use critgraph::seed;
use critgraph::stats::{two_sample_ks, EmpiricalSample};

fn main() {
    let mut args = std::env::args().skip(1);
    let paths: usize = args.next().map_or(10_000, |s| s.parse().expect("paths"));
    let master: u64 = args.next().map_or(2024, |s| s.parse().expect("seed"));
    let params = LimitParams::new(0.0, 1.0, 1.0, DEFAULT_S0, DEFAULT_DT).expect("valid params");

    let start = Instant::now();
    let (mut fine, mut coarse) = (Vec::with_capacity(paths), Vec::with_capacity(paths));
    for r in 0..paths {
        let (f, c) = gamma_for_coupled_path(&params, 1, &mut seed::stream(master, &[r as u64]));
        fine.push(f.top[0]);
        coarse.push(c.top[0]);
    }
    let ks = two_sample_ks(
        &EmpiricalSample::new("gamma1 dt/2", fine.clone()),
        &EmpiricalSample::new("gamma1 dt", coarse.clone()),
    )
    .expect("non-empty");
    let max_shift = fine
        .iter()
        .zip(&coarse)
        .map(|(f, c)| (f - c).abs())
        .fold(0.0, f64::max);
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    println!("paths={paths} seed={master} dt={DEFAULT_DT} s0={DEFAULT_S0}");
    println!(
        "coupled KS(gamma1 @ dt, gamma1 @ dt/2) = {:.5}",
        ks.statistic
    );
    println!(
        "mean gamma1: dt/2 {:.5}, dt {:.5}; max |shift| {:.5}",
        mean(&fine),
        mean(&coarse),
        max_shift
    );
    let trunc = sample_gamma(&params, paths.min(2000), 10, master);
    println!(
        "truncation over {} paths: tail cut {:.4}, top-10 affected {:.4}",
        trunc.replicas(),
        trunc.truncation_rate(),
        trunc.top_truncation_rate()
    );
    println!("elapsed {:.1}s", start.elapsed().as_secs_f64());
}
