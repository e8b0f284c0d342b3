//! Thin facade over the data-parallel scans. With the `parallel` feature the
//! work is partitioned by index across rayon workers; the sequential fallback
//! walks the same range in order. Results carry their index and are merged
//! sorted, so output is identical across worker counts and features.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Parallel when the feature is enabled, sequential otherwise.
    Auto,
    /// Always sequential (benchmark baseline).
    Sequential,
}

/// Applies `f` to every index in `0..len` and collects the `Some` results
/// ordered by index.
pub fn filter_map_indexed_with<T, F>(len: usize, strategy: Strategy, f: F) -> Vec<(usize, T)>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    match strategy {
        Strategy::Sequential => filter_map_indexed_seq(len, f),
        Strategy::Auto => {
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                let mut out: Vec<(usize, T)> = (0..len)
                    .into_par_iter()
                    .filter_map(|i| f(i).map(|v| (i, v)))
                    .collect();
                out.sort_by_key(|(i, _)| *i);
                out
            }
            #[cfg(not(feature = "parallel"))]
            {
                filter_map_indexed_seq(len, f)
            }
        }
    }
}

fn filter_map_indexed_seq<T, F>(len: usize, f: F) -> Vec<(usize, T)>
where
    F: Fn(usize) -> Option<T>,
{
    (0..len).filter_map(|i| f(i).map(|v| (i, v))).collect()
}
