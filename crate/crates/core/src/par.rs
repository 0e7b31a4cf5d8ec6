//! Execution helpers shared by every data-parallel loop in the crate.
//!
//! With the `parallel` feature these dispatch to rayon; without it they are
//! ordinary sequential iterators. Results are always collected in index
//! order and reduced sequentially, which keeps floating-point sums identical
//! between the two builds and across thread counts.

/// Chunk length used by [`sum`]; fixed so that reductions do not depend on
/// the number of worker threads.
pub const SUM_CHUNK: usize = 4096;

/// Evaluates `f(i)` for `i in 0..n` and returns the results in index order.
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Maps `f` over a slice, preserving order.
pub fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Fills `out[i] = f(i)` for every index.
pub fn fill<F>(out: &mut [f64], f: F)
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        out.par_iter_mut().enumerate().for_each(|(i, o)| *o = f(i));
    }
    #[cfg(not(feature = "parallel"))]
    {
        out.iter_mut().enumerate().for_each(|(i, o)| *o = f(i));
    }
}

/// Deterministic sum of `f(i)` over `0..n`: fixed-size chunks are summed
/// (possibly in parallel) and the partial sums are added in order.
pub fn sum<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let chunks = n.div_ceil(SUM_CHUNK);
    map_range(chunks, |c| {
        let start = c * SUM_CHUNK;
        let end = (start + SUM_CHUNK).min(n);
        (start..end).map(&f).sum::<f64>()
    })
    .into_iter()
    .sum()
}

/// Whether this build dispatches to rayon.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_range_preserves_order() {
        let v = map_range(1000, |i| i * 2);
        assert!(v.iter().enumerate().all(|(i, &x)| x == 2 * i));
    }

    #[test]
    fn chunked_sum_matches_sequential_chunking() {
        let n = 3 * SUM_CHUNK + 17;
        let f = |i: usize| ((i as f64) * 0.37).sin();
        let mut expected = 0.0;
        for c in 0..n.div_ceil(SUM_CHUNK) {
            let s: f64 = (c * SUM_CHUNK..((c + 1) * SUM_CHUNK).min(n)).map(f).sum();
            expected += s;
        }
        assert_eq!(sum(n, f).to_bits(), expected.to_bits());
    }
}
