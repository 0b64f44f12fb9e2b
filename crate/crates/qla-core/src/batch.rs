//! Data-parallel mapping kernels with a sequential fallback.
//!
//! With the `parallel` feature (on by default) the `map_*` entry points fan
//! work out across the rayon thread pool; without it they degrade to plain
//! sequential iteration with identical results. The `*_seq` variants are
//! always sequential so callers — the criterion benches in particular — can
//! compare both paths in one build.
//!
//! Reductions over mapped results should sum the returned `Vec` in index
//! order; that keeps parallel and sequential builds bitwise-identical, which
//! the deterministic CSV outputs rely on.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Whether this build fans `map_collect`/`map_range` out across threads.
pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}

/// Map over a slice, collecting results in input order.
#[cfg(feature = "parallel")]
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Map over a slice, collecting results in input order.
#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Sequential twin of [`map_collect`], available in every build.
pub fn map_collect_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Map over an index range 0..n, collecting results in index order.
#[cfg(feature = "parallel")]
pub fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Map over an index range 0..n, collecting results in index order.
#[cfg(not(feature = "parallel"))]
pub fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..n).map(f).collect()
}

/// Sequential twin of [`map_range`], available in every build.
pub fn map_range_seq<U, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree_bitwise() {
        let items: Vec<f64> = (0..1000).map(|i| (i as f64) * 0.37).collect();
        let f = |x: &f64| (x.sin() * x.cos()).exp();
        let par = map_collect(&items, f);
        let seq = map_collect_seq(&items, f);
        assert_eq!(par, seq);

        let g = |i: usize| ((i as f64) + 0.5).ln();
        assert_eq!(map_range(1000, g), map_range_seq(1000, g));
    }

    #[test]
    fn order_is_preserved() {
        let squares = map_range(10, |i| i * i);
        assert_eq!(squares, vec![0, 1, 4, 9, 16, 25, 36, 49, 64, 81]);
    }
}
