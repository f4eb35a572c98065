//! Rayon-backed executor for the `--threads` flag. Results are collected in
//! index order, so any thread count produces identical output; 1 selects the
//! strictly sequential path.

use privsynth::exec::{Executor, Sequential};
use rayon::prelude::*;

use crate::error::{CliError, Result};

pub enum ThreadsExec {
    Sequential(Sequential),
    Pool(rayon::ThreadPool),
}

impl ThreadsExec {
    pub fn new(threads: usize) -> Result<ThreadsExec> {
        if threads <= 1 {
            return Ok(ThreadsExec::Sequential(Sequential));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
        Ok(ThreadsExec::Pool(pool))
    }
}

impl Executor for ThreadsExec {
    fn map_indexed<T: Send>(&self, n: usize, f: &(dyn Fn(usize) -> T + Sync)) -> Vec<T> {
        match self {
            ThreadsExec::Sequential(seq) => seq.map_indexed(n, f),
            ThreadsExec::Pool(pool) => pool.install(|| (0..n).into_par_iter().map(f).collect()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pool_results_match_sequential_in_order() {
        let seq = ThreadsExec::new(1).unwrap();
        let par = ThreadsExec::new(4).unwrap();
        let f = |i: usize| i * i + 1;
        assert_eq!(seq.map_indexed(100, &f), par.map_indexed(100, &f));
    }
}
