//! Sequential or rayon-backed evaluation of independent work items.

use serde::{Deserialize, Serialize};

/// How data-parallel loops are evaluated.
///
/// `Parallel` falls back to sequential evaluation when the crate is built
/// without the `parallel` feature. Results are identical either way.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Whether `Parallel` actually runs on the rayon pool in this build.
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// Maps `f` over `0..count`, preserving index order in the output.
pub fn map_range<R, F>(exec: Exec, count: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..count).into_par_iter().map(f).collect()
        }
        _ => (0..count).map(f).collect(),
    }
}

/// Maps `f` over a slice, preserving order.
pub fn map_slice<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// The smallest index in `0..count` for which `f` returns `Some`.
pub fn find_first<R, F>(exec: Exec, count: usize, f: F) -> Option<R>
where
    R: Send,
    F: Fn(usize) -> Option<R> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..count).into_par_iter().find_map_first(f)
        }
        _ => (0..count).find_map(f),
    }
}
