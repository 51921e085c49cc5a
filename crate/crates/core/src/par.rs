//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature, [`Parallelism::Parallel`] runs on the rayon
//! pool; without it (or with [`Parallelism::Sequential`]) the same code runs
//! on the calling thread. Reductions are applied in index order either way,
//! so results are identical.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    #[default]
    Parallel,
}

impl Parallelism {
    /// Whether this mode actually uses worker threads in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Parallelism::Parallel
    }
}

/// Sets the global worker count. Has no effect without the `parallel` feature.
pub fn configure_threads(n: usize) -> Result<(), String> {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = n;
        Ok(())
    }
}

/// `(0..n).map(f).collect()`, possibly in parallel; output order is index order.
pub(crate) fn map_range<T, F>(n: usize, mode: Parallelism, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = mode;
    (0..n).map(f).collect()
}

/// Folds `map(0..n)` with an associative `reduce` that sees operands in index order.
pub(crate) fn map_reduce<T, M, R>(n: usize, mode: Parallelism, map: M, reduce: R) -> Option<T>
where
    T: Send,
    M: Fn(usize) -> T + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(map).reduce_with(reduce);
    }
    let _ = mode;
    (0..n).map(map).reduce(reduce)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        for mode in [Parallelism::Sequential, Parallelism::Parallel] {
            assert_eq!(map_range(5, mode, |i| i * i), vec![0, 1, 4, 9, 16]);
            // keeps the first minimum, so order of operands matters
            let best = map_reduce(100, mode, |i| (i % 7, i), |a, b| if b.0 < a.0 { b } else { a });
            assert_eq!(best, Some((0, 0)));
        }
    }
}
