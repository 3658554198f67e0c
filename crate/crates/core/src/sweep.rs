//! Order-preserving parallel map over sweep points.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Maps `f` over `items` on a pool of `workers` threads. The output order is
/// the input order, so results do not depend on scheduling. The first error
/// in input order is returned.
pub fn par_map<T, R, F>(workers: usize, items: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync + Send,
{
    if workers == 0 {
        return Err(Error::Validation("worker count must be at least 1".into()));
    }
    if workers == 1 {
        return items.iter().map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Validation(format!("thread pool: {e}")))?;
    let results: Vec<Result<R>> = pool.install(|| items.par_iter().map(&f).collect());
    results.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_independent_of_workers() {
        let items: Vec<u64> = (0..5000).collect();
        let f = |x: &u64| Ok((*x as f64).sqrt().sin());
        let one = par_map(1, &items, f).unwrap();
        for w in [2, 3, 8] {
            assert_eq!(par_map(w, &items, f).unwrap(), one);
        }
    }

    #[test]
    fn first_error_wins() {
        let items: Vec<u64> = (0..100).collect();
        let r = par_map(4, &items, |x| {
            if *x >= 40 {
                Err(Error::NumericRange(format!("{x}")))
            } else {
                Ok(*x)
            }
        });
        assert_eq!(r, Err(Error::NumericRange("40".into())));
        assert!(par_map(0, &items, |x| Ok(*x)).is_err());
    }
}
