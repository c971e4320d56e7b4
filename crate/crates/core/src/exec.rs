//! Execution strategy for the data-parallel loops (tree enumeration,
//! normal-form counting, closures).
//!
//! With the `parallel` feature (on by default) [`Strategy::Parallel`] runs on
//! the rayon pool; without it every strategy runs sequentially. Results are
//! always returned in input order, so output never depends on the strategy.

use std::sync::atomic::{AtomicU8, Ordering};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    Parallel,
}

static DEFAULT: AtomicU8 = AtomicU8::new(1);

impl Strategy {
    /// Process-wide default used by the convenience entry points.
    pub fn current() -> Strategy {
        match DEFAULT.load(Ordering::Relaxed) {
            0 => Strategy::Sequential,
            _ => Strategy::Parallel,
        }
    }

    pub fn set_default(s: Strategy) {
        DEFAULT.store(
            match s {
                Strategy::Sequential => 0,
                Strategy::Parallel => 1,
            },
            Ordering::Relaxed,
        );
    }
}

/// Order-preserving map.
pub fn map<T, R, F>(strategy: Strategy, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match strategy {
        #[cfg(feature = "parallel")]
        Strategy::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Order-preserving map over `0..n`.
pub fn map_range<R, F>(strategy: Strategy, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match strategy {
        #[cfg(feature = "parallel")]
        Strategy::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}

pub fn count<T, F>(strategy: Strategy, items: &[T], pred: F) -> usize
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    match strategy {
        #[cfg(feature = "parallel")]
        Strategy::Parallel => {
            use rayon::prelude::*;
            items.par_iter().filter(|x| pred(x)).count()
        }
        _ => items.iter().filter(|x| pred(x)).count(),
    }
}

/// Configure the global pool size. Only meaningful with the `parallel`
/// feature; a second call is ignored.
pub fn init_jobs(jobs: usize) {
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = jobs;
}
