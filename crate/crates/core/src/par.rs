//! Data-parallel helpers. With the `parallel` feature these run on rayon;
//! without it, or with [`Execution::Sequential`], they are plain loops. Both
//! paths return results in index order, so output never depends on the
//! choice.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
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

/// `f` over `0..len`, keeping the `Some` results in index order.
pub fn filter_map_range<T, F>(exec: Execution, len: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..len).into_par_iter().filter_map(f).collect(),
        _ => (0..len).filter_map(f).collect(),
    }
}

/// The first index (in order) where `f` returns `Some`.
pub fn find_first_range<T, F>(exec: Execution, len: u64, f: F) -> Option<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..len).into_par_iter().find_map_first(f),
        _ => (0..len).find_map(f),
    }
}

pub fn map_slice<A, T, F>(exec: Execution, items: &[A], f: F) -> Vec<T>
where
    A: Sync,
    T: Send,
    F: Fn(&A) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}
