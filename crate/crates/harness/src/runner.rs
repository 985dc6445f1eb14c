//! Deterministic fan-out of seeded replicas over a worker pool.
//!
//! Each replica draws from a stream that depends only on the master seed
//! and its own indices, and results are handed back in replica order, so
//! the worker count never changes an output.

use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;

use crate::HarnessError;

/// Replicas evaluated per parallel batch before results are reduced.
const BATCH: usize = 64;

static INTERRUPTED: AtomicBool = AtomicBool::new(false);

/// Ask running experiments to stop at the next replica boundary.
pub fn request_interrupt() {
    INTERRUPTED.store(true, Ordering::SeqCst);
}

pub fn interrupted() -> bool {
    INTERRUPTED.load(Ordering::SeqCst)
}

pub struct Runner {
    pool: rayon::ThreadPool,
    workers: usize,
}

impl Runner {
    pub fn new(workers: usize) -> Result<Self, HarnessError> {
        let workers = workers.max(1);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| HarnessError::Pool(e.to_string()))?;
        Ok(Self { pool, workers })
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    /// Evaluate `f(0), ..., f(count - 1)` and pass each result to `sink` in
    /// index order. Returns `Ok(false)` if interrupted before the end.
    pub fn replicas<T, F, S>(&self, count: usize, f: F, mut sink: S) -> Result<bool, HarnessError>
    where
        T: Send,
        F: Fn(usize) -> Result<T, HarnessError> + Sync + Send,
        S: FnMut(usize, T) -> Result<(), HarnessError>,
    {
        let mut start = 0;
        while start < count {
            let end = (start + BATCH).min(count);
            let batch: Vec<Option<Result<T, HarnessError>>> = self.pool.install(|| {
                (start..end)
                    .into_par_iter()
                    .map(|r| (!interrupted()).then(|| f(r)))
                    .collect()
            });
            for (offset, item) in batch.into_iter().enumerate() {
                match item {
                    Some(res) => sink(start + offset, res?)?,
                    None => return Ok(false),
                }
            }
            start = end;
        }
        Ok(true)
    }

    /// Collect `f(0), ..., f(count - 1)`; `None` if interrupted.
    pub fn map<T, F>(&self, count: usize, f: F) -> Result<Option<Vec<T>>, HarnessError>
    where
        T: Send,
        F: Fn(usize) -> Result<T, HarnessError> + Sync + Send,
    {
        let mut out = Vec::with_capacity(count);
        let done = self.replicas(count, f, |_, v| {
            out.push(v);
            Ok(())
        })?;
        Ok(done.then_some(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn results_arrive_in_index_order_for_any_worker_count() {
        for workers in [1, 3, 8] {
            let runner = Runner::new(workers).unwrap();
            let got = runner.map(200, |r| Ok(r * r)).unwrap().unwrap();
            assert_eq!(got, (0..200).map(|r| r * r).collect::<Vec<_>>());
        }
    }

    #[test]
    fn errors_propagate() {
        let runner = Runner::new(2).unwrap();
        let res = runner.map(10, |r| {
            if r == 7 {
                Err(HarnessError::Pool("boom".into()))
            } else {
                Ok(r)
            }
        });
        assert!(res.is_err());
    }
}
