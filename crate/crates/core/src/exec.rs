//! Pluggable execution of independent work items.
//!
//! Experiment cells, candidate validation, and per-probe searches are
//! embarrassingly parallel and fully determined by their index, so callers
//! describe work as a function of `0..n` and an [`Executor`] decides how to
//! schedule it. Results always come back in index order, which is what makes
//! a parallel run byte-identical to a sequential one. The std companion
//! crate provides a rayon-backed executor; this crate only ships the
//! sequential one.

use alloc::vec::Vec;

/// Runs `n` independent jobs and returns their results in index order.
pub trait Executor: Sync {
    fn map_indexed<T: Send>(&self, n: usize, f: &(dyn Fn(usize) -> T + Sync)) -> Vec<T>;
}

/// In-order, single-threaded execution.
#[derive(Debug, Default, Clone, Copy)]
pub struct Sequential;

impl Executor for Sequential {
    fn map_indexed<T: Send>(&self, n: usize, f: &(dyn Fn(usize) -> T + Sync)) -> Vec<T> {
        (0..n).map(f).collect()
    }
}
