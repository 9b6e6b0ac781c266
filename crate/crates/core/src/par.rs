//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) the sweeps over basis vectors and
//! homology cells fan out through rayon; without it the same helpers run
//! sequentially, which keeps the crate usable on platforms without threads.

#[cfg(feature = "parallel")]
pub fn par_map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Send + Sync,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn par_map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    F: Fn(T) -> R,
{
    items.into_iter().map(f).collect()
}

/// First `Some` produced by `f`, scanning all items (parallel builds may
/// evaluate more items than a sequential early-exit would).
pub fn par_find_map<T, R, F>(items: Vec<T>, f: F) -> Option<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> Option<R> + Send + Sync,
{
    par_map(items, f).into_iter().flatten().next()
}
