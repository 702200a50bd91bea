use rayon::prelude::*;
use rayon::ThreadPool;

use crate::error::{CliError, Result};

/// A pool of `jobs` threads; 0 means one per core.
pub fn pool(jobs: usize) -> Result<ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} worker threads: {e}")))
}

/// Order-preserving parallel map. Results do not depend on the pool width.
pub fn par_map<T, R, F>(pool: &ThreadPool, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    pool.install(|| items.par_iter().map(f).collect())
}
