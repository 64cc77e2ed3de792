//! Data-parallel evaluation helper. With the `parallel` feature the map
//! runs on the rayon pool; results are collected in input order either way,
//! so both paths produce bit-identical output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Order-preserving map over an owned batch.
pub fn map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}

/// Sequential reference path, always available; the benchmark suite
/// compares it against [`map`].
pub fn map_seq<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}
