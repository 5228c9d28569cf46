//! Data-parallel map over independent work items.
//!
//! With the `parallel` feature the work runs on the rayon pool; without it the
//! same calls run sequentially. Output order always follows input order.

pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        map_parallel(items, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_sequential(items, f)
    }
}

/// Explicit choice of executor, used where both paths are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when built without `parallel`.
    Parallel,
}

pub fn map_with<T, R, F>(mode: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match mode {
        Execution::Sequential => map_sequential(items, f),
        #[cfg(feature = "parallel")]
        Execution::Parallel => map_parallel(items, f),
        #[cfg(not(feature = "parallel"))]
        Execution::Parallel => map_sequential(items, f),
    }
}

pub fn map_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_parallel<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

/// Cap the global worker count. Returns false when the pool was already
/// initialised or the build is sequential.
pub fn set_worker_count(workers: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = workers;
        false
    }
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
