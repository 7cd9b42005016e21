//! Data-parallel helpers for batched evaluation.
//!
//! With the `parallel` feature the mapping helpers fan out over rayon while
//! preserving input order, so results are identical to the sequential
//! fallback. The `*_seq` variants always run sequentially; benchmarks compare
//! the two.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, in parallel when the `parallel` feature is on.
/// Output order matches input order regardless of schedule.
#[cfg(feature = "parallel")]
pub fn map_collect<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    items.par_iter().map(f).collect()
}

/// Maps `f` over `items`, in parallel when the `parallel` feature is on.
/// Output order matches input order regardless of schedule.
#[cfg(not(feature = "parallel"))]
pub fn map_collect<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    items.iter().map(f).collect()
}

/// Sequential mapping, regardless of features. Reference path for benches
/// and determinism checks.
pub fn map_collect_seq<T, U>(items: &[T], f: impl Fn(&T) -> U) -> Vec<U> {
    items.iter().map(f).collect()
}
