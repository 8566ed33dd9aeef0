//! Dispatch helpers that run hot loops through rayon when the `parallel`
//! feature is enabled and run them sequentially otherwise.
//!
//! Every helper is order-preserving (or order-independent), so both modes
//! produce identical results; the feature flag only changes wall-clock time.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Sorts a slice in place.
pub(crate) fn sort_unstable<T: Ord + Send>(items: &mut [T]) {
    #[cfg(feature = "parallel")]
    items.par_sort_unstable();
    #[cfg(not(feature = "parallel"))]
    items.sort_unstable();
}

/// Maps `f` over `0..count`, preserving index order in the output.
pub(crate) fn map_indexed<U, F>(count: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..count).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).map(f).collect()
    }
}

/// Returns the smallest index in `0..count` satisfying `pred`, if any.
pub(crate) fn find_first_index<F>(count: usize, pred: F) -> Option<usize>
where
    F: Fn(usize) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..count).into_par_iter().find_first(|&i| pred(i))
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..count).find(|&i| pred(i))
    }
}
