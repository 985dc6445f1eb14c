//! Tables, summary document and run log on disk.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::Mode;
use crate::experiment::Run;
use crate::HarnessError;

/// A comma-separated table with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn summary_name(mode: Mode, seed: u64) -> String {
    format!("summary_{mode}_seed{seed}.json")
}

pub fn log_name(mode: Mode, seed: u64) -> String {
    format!("run_{mode}_seed{seed}.log")
}

pub fn summary_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Write the summary, the run log and every table into `dir`. Refuses to
/// replace an existing file unless `force` is set. Returns the paths written.
pub fn emit_outputs<T: Serialize>(
    run: &Run<T>,
    mode: Mode,
    seed: u64,
    dir: &Path,
    force: bool,
) -> Result<Vec<PathBuf>, HarnessError> {
    let mut files: Vec<(PathBuf, String)> = vec![
        (
            dir.join(summary_name(mode, seed)),
            summary_json(&run.report),
        ),
        (dir.join(log_name(mode, seed)), run.log.join("\n") + "\n"),
    ];
    files.extend(run.tables.iter().map(|t| (dir.join(&t.name), t.to_csv())));
    if !force {
        if let Some((p, _)) = files.iter().find(|(p, _)| p.exists()) {
            return Err(HarnessError::Exists(p.clone()));
        }
    }
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    for (path, body) in &files {
        fs::write(path, body).map_err(io_err(path))?;
    }
    Ok(files.into_iter().map(|f| f.0).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run() -> Run<Vec<u32>> {
        Run {
            report: vec![1, 2],
            tables: vec![Table {
                name: "census_n10000_seed42.csv".into(),
                header: vec!["rank", "size", "rescaled"],
                rows: vec![vec!["1".into(), "900".into(), "1.939".into()]],
            }],
            log: vec!["started".into()],
        }
    }

    #[test]
    fn writes_and_refuses_to_overwrite() {
        let dir = tempfile::tempdir().unwrap();
        let written = emit_outputs(&run(), Mode::Census, 42, dir.path(), false).unwrap();
        assert_eq!(written.len(), 3);
        let csv = fs::read_to_string(dir.path().join("census_n10000_seed42.csv")).unwrap();
        assert_eq!(csv, "rank,size,rescaled\n1,900,1.939\n");
        assert!(dir.path().join("summary_census_seed42.json").exists());
        assert!(matches!(
            emit_outputs(&run(), Mode::Census, 42, dir.path(), false),
            Err(HarnessError::Exists(_))
        ));
        emit_outputs(&run(), Mode::Census, 42, dir.path(), true).unwrap();
    }
}
