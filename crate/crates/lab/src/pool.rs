//! Worker pool for experiment grids and Monte Carlo blocks.
//!
//! Results are always collected in input order, and Monte Carlo blocks are merged in block
//! order, so the output does not depend on the thread count.

use rayon::prelude::*;
use rayon::ThreadPool;
use stransform_core::montecarlo::{blocks, merge_blocks, run_block, BlockEstimator, McEstimate, RngSpec};
use stransform_core::Result;

pub const THREADS_ENV: &str = "STRANSFORM_LAB_THREADS";

/// Worker count: `STRANSFORM_LAB_THREADS` if set to a positive integer, else all cores.
pub fn thread_count() -> usize {
    let cores = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    match std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        Some(n) if n > 0 => n,
        _ => cores,
    }
}

pub fn build_pool(threads: usize) -> ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool")
}

/// `f` over `items` on the pool, results in input order.
pub fn map_ordered<T, R, F>(pool: &ThreadPool, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    pool.install(|| items.par_iter().map(&f).collect())
}

/// Parallel counterpart of `estimate_sequential`, bit-identical to it.
pub fn estimate_parallel<E: BlockEstimator + ?Sized>(
    pool: &ThreadPool,
    est: &E,
    n_samples: usize,
    spec: RngSpec,
) -> Result<McEstimate> {
    let work: Vec<(u64, usize)> = blocks(n_samples).collect();
    let accs = map_ordered(pool, &work, |&(b, len)| run_block(est, spec, b, len));
    let accs = accs.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(merge_blocks(&accs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::ChaCha8Rng;
    use stransform_core::montecarlo::{estimate_sequential, BLOCK_LEN};

    struct Uniform;

    impl BlockEstimator for Uniform {
        fn sample(&self, rng: &mut ChaCha8Rng) -> Result<f64> {
            Ok(rng.random::<f64>())
        }
    }

    #[test]
    fn thread_count_independent() {
        let spec = RngSpec::new(42, 3);
        let n = 3 * BLOCK_LEN + 17;
        let seq = estimate_sequential(&Uniform, n, spec).unwrap();
        for t in [1, 2, 5] {
            let par = estimate_parallel(&build_pool(t), &Uniform, n, spec).unwrap();
            assert_eq!(par, seq);
        }
        assert!(seq.z_score(0.5) < 4.0);
    }

    #[test]
    fn ordered_map() {
        let v: Vec<usize> = (0..100).collect();
        assert_eq!(map_ordered(&build_pool(4), &v, |x| x * 2), v.iter().map(|x| x * 2).collect::<Vec<_>>());
    }
}
