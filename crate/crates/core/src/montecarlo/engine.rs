//! Chunked parallel sampling with order-independent results.
//!
//! Work is split into fixed-size chunks; chunk `k` owns the stream
//! `(seed, base + k)`. Chunk results are collected in chunk order and merged
//! sequentially, so outputs do not depend on the number of worker threads.

use rayon::prelude::*;

use crate::channel::FadingSample;
use crate::geometry::{make_drop_unchecked, Drop, SystemParams};
use crate::numerics::RandomStream;

pub const CHUNK_SIZE: u64 = 1 << 14;

/// Stream family for drop + fading trials under the exact geometry.
pub const TRIAL_STREAMS: u64 = 0;
/// Stream family for the independent-distance (ratio CDF) model.
pub const INDEPENDENT_STREAMS: u64 = 1 << 48;
/// Stream used to calibrate the gain constants.
pub const CALIBRATION_STREAM: u64 = 1 << 50;
/// Stream family used to check a calibration on fresh draws.
pub const CALIBRATION_CHECK_STREAMS: u64 = 1 << 51;
/// Stream used to draw the fixed drops of the per-drop experiment.
pub const FIXED_DROP_STREAM: u64 = 1 << 52;
/// Stream used to draw drops for drop-averaged analytic curves.
pub const AVERAGING_DROP_STREAM: u64 = (1 << 52) + 1;
/// Stream family for fading draws on fixed drops; drop `d` uses
/// `FIXED_FADING_STREAMS + (d << 24) + chunk`.
pub const FIXED_FADING_STREAMS: u64 = 1 << 56;

/// Runs `work(stream, count)` over `ceil(total/CHUNK_SIZE)` chunks in
/// parallel and returns the per-chunk results in chunk order.
pub fn map_chunks<T, F>(seed: u64, base: u64, total: u64, work: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut RandomStream, u64) -> T + Sync,
{
    let chunks = total.div_ceil(CHUNK_SIZE);
    (0..chunks)
        .into_par_iter()
        .map(|k| {
            let count = CHUNK_SIZE.min(total - k * CHUNK_SIZE);
            let mut stream = RandomStream::new(seed, base + k);
            work(&mut stream, count)
        })
        .collect()
}

/// Runs `visit(drop, fading)` for `total` exact-geometry trials.
///
/// Every trial draws one [`Drop`] then one [`FadingSample`] from the chunk's
/// stream. The number of variates consumed does not depend on `params`, so
/// any two parameter sets see the same underlying randomness (common
/// random numbers).
pub fn map_trials<T, F>(
    params: &SystemParams,
    seed: u64,
    total: u64,
    init: impl Fn() -> T + Sync,
    visit: F,
) -> Vec<T>
where
    T: Send,
    F: Fn(&mut T, &Drop, &FadingSample) + Sync,
{
    map_chunks(seed, TRIAL_STREAMS, total, |stream, count| {
        let mut acc = init();
        for _ in 0..count {
            let drop = make_drop_unchecked(params, stream);
            let fading = FadingSample::draw(stream);
            visit(&mut acc, &drop, &fading);
        }
        acc
    })
}

/// Count, mean and centred second moment, merged with Chan's update.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / n;
        self.m2 += other.m2 + delta * delta * self.count as f64 * other.count as f64 / n;
        self.count += other.count;
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> f64 {
        if self.count == 0 {
            f64::NAN
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}

/// Success count out of a number of Bernoulli trials.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Proportion {
    pub hits: u64,
    pub trials: u64,
}

impl Proportion {
    pub fn record(&mut self, hit: bool) {
        self.trials += 1;
        self.hits += hit as u64;
    }

    pub fn merge(&mut self, other: &Proportion) {
        self.hits += other.hits;
        self.trials += other.trials;
    }

    pub fn estimate(&self) -> f64 {
        self.hits as f64 / self.trials as f64
    }

    /// `sqrt(p̂(1−p̂)/n)`.
    pub fn stderr(&self) -> f64 {
        let p = self.estimate();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1).collect();
        let mut whole = Moments::default();
        xs.iter().for_each(|&x| whole.push(x));
        let mut merged = Moments::default();
        for chunk in xs.chunks(77) {
            let mut m = Moments::default();
            chunk.iter().for_each(|&x| m.push(x));
            merged.merge(&m);
        }
        assert_eq!(merged.count, whole.count);
        assert!((merged.mean - whole.mean).abs() < 1e-12);
        assert!((merged.variance() - whole.variance()).abs() < 1e-10);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
        assert!((whole.variance() - var).abs() < 1e-10);
    }

    #[test]
    fn proportion_stderr() {
        let p = Proportion {
            hits: 30,
            trials: 100,
        };
        assert!((p.stderr() - (0.3f64 * 0.7 / 100.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn chunk_layout_is_prefix_stable() {
        let a = map_chunks(5, 0, 3 * CHUNK_SIZE + 10, |s, n| (s.stream_id(), n));
        assert_eq!(
            a,
            vec![(0, CHUNK_SIZE), (1, CHUNK_SIZE), (2, CHUNK_SIZE), (3, 10)]
        );
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let run = |threads| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| {
                map_chunks(9, 0, 10 * CHUNK_SIZE, |s, n| {
                    (0..n).map(|_| s.uniform()).sum::<f64>()
                })
            })
        };
        let one = run(1);
        let four = run(4);
        assert_eq!(
            one.iter().map(|x| x.to_bits()).collect::<Vec<_>>(),
            four.iter().map(|x| x.to_bits()).collect::<Vec<_>>()
        );
    }
}
