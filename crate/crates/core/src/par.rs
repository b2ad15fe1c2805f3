//! Data-parallel helpers with a sequential fallback.
//!
//! Every batch in the crate (Monte Carlo trials, subordination grid blocks)
//! goes through [`map_indexed`]. Work items are keyed by index and collected in
//! index order, so the output never depends on scheduling. Without the
//! `parallel` feature, [`Execution::Parallel`] silently runs sequentially.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// Map `f` over `0..len`, returning results in index order.
pub fn map_indexed<U, F>(exec: Execution, len: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    match exec {
        Execution::Sequential => (0..len).map(f).collect(),
        Execution::Parallel => parallel_map_indexed(len, f),
    }
}

/// Map `f` over a slice, returning results in slice order.
pub fn map_slice<T, U, F>(exec: Execution, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    map_indexed(exec, items.len(), |i| f(&items[i]))
}

#[cfg(feature = "parallel")]
fn parallel_map_indexed<U, F>(len: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    use rayon::prelude::*;
    (0..len).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel_map_indexed<U, F>(len: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..len).map(f).collect()
}
