//! Batched composition sampling split into fixed-size shards.
//!
//! Shard `i` draws from a ChaCha8 stream keyed by `(seed, i)`, and shards are
//! concatenated in index order, so the output depends only on the seed and
//! the request, never on the number of worker threads. With the `parallel`
//! feature the shards run on the rayon pool; without it, in a loop.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::compstruct::{Composition, CompositionSampler, SamplingMethod};

/// Draws per shard.
pub const SHARD_SIZE: usize = 4096;

pub fn shard_rng(seed: u64, shard: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    rng
}

fn shard_lengths(count: usize) -> impl Iterator<Item = (u64, usize)> {
    let shards = count.div_ceil(SHARD_SIZE);
    (0..shards).map(move |i| {
        let len = SHARD_SIZE.min(count - i * SHARD_SIZE);
        (i as u64, len)
    })
}

fn run_shard(
    sampler: &CompositionSampler,
    method: SamplingMethod,
    seed: u64,
    shard: u64,
    len: usize,
) -> Vec<Composition> {
    let mut rng = shard_rng(seed, shard);
    (0..len).map(|_| sampler.sample(method, &mut rng)).collect()
}

pub fn sample_many_sequential(
    sampler: &CompositionSampler,
    method: SamplingMethod,
    count: usize,
    seed: u64,
) -> Vec<Composition> {
    let mut out = Vec::with_capacity(count);
    for (shard, len) in shard_lengths(count) {
        out.extend(run_shard(sampler, method, seed, shard, len));
    }
    out
}

#[cfg(feature = "parallel")]
pub fn sample_many_parallel(
    sampler: &CompositionSampler,
    method: SamplingMethod,
    count: usize,
    seed: u64,
) -> Vec<Composition> {
    use rayon::prelude::*;

    let shards: Vec<(u64, usize)> = shard_lengths(count).collect();
    shards
        .into_par_iter()
        .map(|(shard, len)| run_shard(sampler, method, seed, shard, len))
        .flatten_iter()
        .collect()
}

/// Parallel when the `parallel` feature is on, sequential otherwise; the
/// result is identical either way.
pub fn sample_many(
    sampler: &CompositionSampler,
    method: SamplingMethod,
    count: usize,
    seed: u64,
) -> Vec<Composition> {
    #[cfg(feature = "parallel")]
    {
        sample_many_parallel(sampler, method, count, seed)
    }
    #[cfg(not(feature = "parallel"))]
    {
        sample_many_sequential(sampler, method, count, seed)
    }
}

/// Maps `f` over `items`, on the rayon pool when available. Used for
/// randomized verification sweeps.
pub fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}
