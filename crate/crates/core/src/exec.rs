//! Data-parallel helpers. With the `parallel` feature (default) work runs on
//! the rayon pool; without it, or with [`Execution::Sequential`], everything
//! runs on the calling thread. Results are always returned in input order.

/// How a batch operation spreads its work.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether `Parallel` can actually use more than one thread in this build.
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// Map `f` over `items`, preserving order.
pub fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Fold each item into a partial accumulator and merge the partials.
/// `merge` must be associative and commutative with `identity()` as unit;
/// the result is then independent of how items are split across workers.
pub fn fold_merge<T, A, I, F, M>(exec: Execution, items: &[T], identity: I, fold: F, merge: M) -> A
where
    T: Sync,
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(&mut A, &T) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items
                .par_iter()
                .fold(&identity, |mut acc, item| {
                    fold(&mut acc, item);
                    acc
                })
                .reduce(&identity, &merge)
        }
        _ => {
            let mut acc = identity();
            for item in items {
                fold(&mut acc, item);
            }
            acc
        }
    }
}

/// Like [`fold_merge`] over a streaming iterator. In parallel mode items are
/// pulled as workers free up, so only a bounded number are in flight.
pub fn fold_merge_iter<It, A, I, F, M>(exec: Execution, items: It, identity: I, fold: F, merge: M) -> A
where
    It: Iterator + Send,
    It::Item: Send,
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(&mut A, It::Item) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::iter::{ParallelBridge, ParallelIterator};
            items
                .par_bridge()
                .fold(&identity, |mut acc, item| {
                    fold(&mut acc, item);
                    acc
                })
                .reduce(&identity, &merge)
        }
        _ => {
            let mut acc = identity();
            for item in items {
                fold(&mut acc, item);
            }
            acc
        }
    }
}

/// Run `f` on a pool limited to `jobs` threads (0 = rayon default).
pub fn with_jobs<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        if jobs > 0 {
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
                return pool.install(f);
            }
        }
        f()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
        f()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order_in_both_modes() {
        let items: Vec<u32> = (0..1000).collect();
        let seq = map(Execution::Sequential, &items, |x| x * 3);
        let par = map(Execution::Parallel, &items, |x| x * 3);
        assert_eq!(seq, par);
        assert_eq!(seq[999], 2997);
    }

    #[test]
    fn fold_merge_matches_sequential_sum() {
        let items: Vec<u64> = (1..=500).collect();
        let run = |exec| fold_merge(exec, &items, || 0u64, |a, x| *a += x, |a, b| a + b);
        assert_eq!(run(Execution::Sequential), 125_250);
        assert_eq!(run(Execution::Parallel), 125_250);
        let streamed = fold_merge_iter(Execution::Parallel, items.iter().copied(), || 0u64, |a, x| *a += x, |a, b| a + b);
        assert_eq!(streamed, 125_250);
    }
}
