//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) the [`Execution::Parallel`]
//! strategy runs on the rayon global pool. Without it both strategies run
//! sequentially, so callers never need their own `cfg` gates.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// `true` iff `pred` holds for every index in `0..count`.
///
/// `init` builds per-worker scratch state. Evaluation short-circuits on the
/// first failure; the result does not depend on evaluation order.
pub fn all_indices<S, I, P>(exec: Execution, count: u64, init: I, pred: P) -> bool
where
    I: Fn() -> S + Sync + Send,
    P: Fn(&mut S, u64) -> bool + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..count)
            .into_par_iter()
            .map_init(init, |s, i| pred(s, i))
            .all(|ok| ok),
        _ => {
            let mut s = init();
            (0..count).all(|i| pred(&mut s, i))
        }
    }
}

/// Order-preserving map over a slice.
pub fn map_slice<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}
