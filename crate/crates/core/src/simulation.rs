//! Monte Carlo check of the Lindley-case probability under H0.
//!
//! Draws are addressed by counter: draw `i` comes from block `i / BLOCK_SIZE`,
//! whose ChaCha8 stream is `(seed, stream = block index)`. Blocks are
//! processed in parallel and their hit counts summed, so the result depends
//! only on the inputs and the seed, never on the number of worker threads.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bayes_factors::{BfKind, GaussianSummary, PriorScales, Threshold};
use crate::error::{Error, Result};
use crate::lindley::is_lindley_case;
use crate::numerics::std_normal_quantile;

/// Draws per independently seeded block.
pub const BLOCK_SIZE: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationResult {
    reps: u64,
    hits: u64,
    rate: f64,
    stderr: f64,
    seed: u64,
}

impl SimulationResult {
    fn from_counts(reps: u64, hits: u64, seed: u64) -> Self {
        let rate = hits as f64 / reps as f64;
        SimulationResult {
            reps,
            hits,
            rate,
            stderr: (rate * (1.0 - rate) / reps as f64).sqrt(),
            seed,
        }
    }

    pub fn reps(&self) -> u64 {
        self.reps
    }

    pub fn hits(&self) -> u64 {
        self.hits
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// Binomial standard error √(rate(1 − rate)/reps).
    pub fn stderr(&self) -> f64 {
        self.stderr
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Uniform on the open interval (0, 1) from the top 52 bits.
fn open_unit(bits: u64) -> f64 {
    ((bits >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}

fn block_hits(
    block: u64,
    len: u64,
    seed: u64,
    n: u64,
    q: Threshold,
    kind: BfKind,
    scales: &PriorScales,
) -> Result<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    let se = 1.0 / (n as f64).sqrt();
    let mut hits = 0;
    for _ in 0..len {
        let mean = std_normal_quantile(open_unit(rng.next_u64())) * se;
        if is_lindley_case(&GaussianSummary::new(n, mean)?, q, kind, scales)? {
            hits += 1;
        }
    }
    Ok(hits)
}

/// Fraction of `reps` sample means drawn from N(0, 1/n) that are Lindley cases.
pub fn simulate_lindley_rate(
    n: u64,
    q: Threshold,
    kind: BfKind,
    reps: u64,
    seed: u64,
) -> Result<SimulationResult> {
    simulate_lindley_rate_with(n, q, kind, reps, seed, &PriorScales::default())
}

pub fn simulate_lindley_rate_with(
    n: u64,
    q: Threshold,
    kind: BfKind,
    reps: u64,
    seed: u64,
    scales: &PriorScales,
) -> Result<SimulationResult> {
    if reps == 0 {
        return Err(Error::domain("reps must be at least 1"));
    }
    if n == 0 {
        return Err(Error::domain("sample size must be at least 1"));
    }
    let blocks = reps.div_ceil(BLOCK_SIZE);
    let hits = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let len = BLOCK_SIZE.min(reps - b * BLOCK_SIZE);
            block_hits(b, len, seed, n, q, kind, scales)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(SimulationResult::from_counts(reps, hits, seed))
}
