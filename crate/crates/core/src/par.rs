//! Data-parallel helpers. With the `parallel` feature the `Auto` strategy
//! runs on the rayon pool; without it everything runs on the calling thread.

use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    /// Rayon when compiled with the `parallel` feature, sequential otherwise.
    #[default]
    Auto,
    Sequential,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Auto
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Maps `f` over an integer range, preserving order.
pub fn map_range<R, F>(exec: Execution, range: std::ops::RangeInclusive<i32>, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(i32) -> R + Sync + Send,
{
    let items: Vec<i32> = range.collect();
    map(exec, &items, |&d| f(d))
}

pub fn join<A, B, RA, RB>(exec: Execution, a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return rayon::join(a, b);
    }
    let _ = exec;
    (a(), b())
}

/// Runs `f` on a dedicated pool of `threads` workers.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        return pool.install(f);
    }
    let _ = threads;
    f()
}

/// Per-degree memo table shared between clones.
pub struct DegreeCache<T> {
    inner: Arc<RwLock<BTreeMap<i32, Arc<T>>>>,
}

impl<T> DegreeCache<T> {
    pub fn new() -> Self {
        DegreeCache {
            inner: Arc::new(RwLock::new(BTreeMap::new())),
        }
    }

    pub fn get_or_insert_with(&self, degree: i32, build: impl FnOnce() -> T) -> Arc<T> {
        if let Some(v) = self.inner.read().expect("cache poisoned").get(&degree) {
            return v.clone();
        }
        let value = Arc::new(build());
        self.inner
            .write()
            .expect("cache poisoned")
            .entry(degree)
            .or_insert(value)
            .clone()
    }
}

impl<T> Default for DegreeCache<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> Clone for DegreeCache<T> {
    fn clone(&self) -> Self {
        DegreeCache {
            inner: self.inner.clone(),
        }
    }
}

impl<T> std::fmt::Debug for DegreeCache<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("DegreeCache")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_strategies_agree() {
        let xs: Vec<u64> = (0..100).collect();
        let a = map(Execution::Auto, &xs, |x| x * x);
        let b = map(Execution::Sequential, &xs, |x| x * x);
        assert_eq!(a, b);
        assert_eq!(join(Execution::Auto, || 1, || 2), (1, 2));
    }
}
