//! Reproducible, independently addressable random streams.
//!
//! A stream is a ChaCha8 keystream keyed by the master seed, with the
//! 64-bit ChaCha stream selector set to the stream id. Distinct ids never
//! share keystream blocks, and a `(master_seed, stream_id)` pair always
//! replays the same sequence.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

/// Distributions that [`RandomStream::sample`] can draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dist {
    Uniform01,
    StdNormal,
    UnitExponential,
}

#[derive(Debug, Clone)]
pub struct RandomStream {
    master_seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_id);
        Self {
            master_seed,
            stream_id,
            rng,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn sample(&mut self, dist: Dist) -> f64 {
        match dist {
            Dist::Uniform01 => self.uniform(),
            Dist::StdNormal => self.std_normal(),
            Dist::UnitExponential => self.unit_exponential(),
        }
    }

    /// Uniform on `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    #[inline]
    pub fn std_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Unit-mean exponential, strictly positive.
    #[inline]
    pub fn unit_exponential(&mut self) -> f64 {
        loop {
            let e: f64 = self.rng.sample(Exp1);
            if e > 0.0 {
                return e;
            }
        }
    }
}
