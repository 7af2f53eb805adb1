//! Data-parallel drivers for the batch workloads (audit trials, randomized
//! sweeps). With the `parallel` feature they run on rayon; without it, or when
//! [`Execution::Sequential`] is requested, they run in order on the calling
//! thread. Both paths produce identical results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
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

/// `f` over `0..len`, results in index order.
pub fn map_indexed<T, F>(exec: Execution, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..len).into_par_iter().map(f).collect(),
        _ => (0..len).map(f).collect(),
    }
}

/// The smallest index in `0..len` for which `f` returns `Some`.
pub fn find_first<T, F>(exec: Execution, len: usize, f: F) -> Option<(usize, T)>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..len).into_par_iter().find_map_first(|i| f(i).map(|t| (i, t))),
        _ => (0..len).find_map(|i| f(i).map(|t| (i, t))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_paths_agree() {
        let f = |i: usize| if i % 7 == 5 { Some(i * 2) } else { None };
        for exec in [Execution::Sequential, Execution::Parallel] {
            assert_eq!(find_first(exec, 100, f), Some((5, 10)));
            assert_eq!(find_first(exec, 5, f), None);
            assert_eq!(map_indexed(exec, 4, |i| i * i), vec![0, 1, 4, 9]);
        }
    }
}
