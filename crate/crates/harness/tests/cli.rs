use std::path::Path;
use std::process::{Command, Output};

fn critgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_critgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("run.conf");
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn census_run_writes_named_table_and_refuses_to_overwrite() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "n_list = 10000\nreplicas = 4\n[pmf]\n1:1\n");
    let out = dir.path().join("out");
    let out_s = out.to_string_lossy();
    let args = [
        "census",
        "--config",
        &cfg,
        "--out",
        &out_s,
        "--workers",
        "2",
    ];

    let first = critgraph(&args);
    assert!(
        first.status.success(),
        "{}",
        String::from_utf8_lossy(&first.stderr)
    );
    let csv = std::fs::read_to_string(out.join("census_n10000_seed42.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("rank,size,rescaled"));
    let total: u64 = lines
        .map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 10_000);
    assert!(out.join("summary_census_seed42.json").exists());
    assert!(out.join("run_census_seed42.log").exists());

    let again = critgraph(&args);
    assert_eq!(again.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&again.stderr).contains("--force"));

    let mut forced = args.to_vec();
    forced.push("--force");
    assert!(critgraph(&forced).status.success());
}

#[test]
fn seed_flag_overrides_config_and_names_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "n_list = 2000\nreplicas = 3\nseed = 1\n[pmf]\n0:3/4, 2:1/4\n",
    );
    let out = dir.path().join("out");
    let out_s = out.to_string_lossy();
    let res = critgraph(&["census", "--config", &cfg, "--out", &out_s, "--seed", "9"]);
    assert!(res.status.success());
    assert!(out.join("census_n2000_seed9.csv").exists());
}

#[test]
fn compare_rejects_noncritical_pmf_unless_allowed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "n_list = 1000\nreplicas = 2\ndt = 1e-2\nk = 2\n[pmf]\n1:0.9, 2:0.1\n",
    );
    let out = dir.path().join("out");
    let out_s = out.to_string_lossy();
    let res = critgraph(&["compare", "--config", &cfg, "--out", &out_s]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("critical"));
    let res = critgraph(&[
        "compare",
        "--config",
        &cfg,
        "--out",
        &out_s,
        "--allow-noncritical",
    ]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let ks = std::fs::read_to_string(out.join("ks_summary.csv")).unwrap();
    assert!(ks.starts_with("n,coordinate,ks,p\n1000,1,"));
}

#[test]
fn parse_errors_report_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a = 0\nreplicas = lots\n");
    let res = critgraph(&["census", "--config", &cfg]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("line 2"));
}
