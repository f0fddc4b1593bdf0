//! Protocol-level Monte Carlo validation.
//!
//! Each sample draws `M` iid branch SNRs, runs the SC or SSC selection rule
//! and declares an error with one Bernoulli draw against the conditional
//! finite-blocklength error of the chosen branch. Samples are split into
//! fixed batches; batch `i` uses ChaCha stream `i` of the base seed, so a run
//! is reproducible bit for bit whatever the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;
use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::fading::{ChannelModel, SnrSampler};
use crate::fbcode::fb_error_at;
use crate::timing::ProtocolBudget;

/// Below this many observed errors an estimate is flagged as unreliable
/// (about 1e-6 at 1e7 samples).
pub const MIN_RELIABLE_ERRORS: u64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub batch_size: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            samples: 10_000_000,
            seed: 0,
            batch_size: 100_000,
        }
    }
}

impl McConfig {
    pub fn new(samples: u64, seed: u64) -> Result<Self> {
        Self {
            samples,
            seed,
            ..Self::default()
        }
        .validated()
    }

    fn validated(self) -> Result<Self> {
        if self.samples == 0 || self.batch_size == 0 {
            return Err(domain("Monte Carlo needs samples >= 1 and batch_size >= 1"));
        }
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub error_rate: f64,
    /// Binomial standard error `sqrt(p (1-p) / N)`.
    pub std_error: f64,
    pub samples: u64,
    pub errors: u64,
    pub seed: u64,
}

impl McEstimate {
    fn from_counts(errors: u64, samples: u64, seed: u64) -> Self {
        let p = errors as f64 / samples as f64;
        Self {
            error_rate: p,
            std_error: (p * (1.0 - p) / samples as f64).sqrt(),
            samples,
            errors,
            seed,
        }
    }

    /// Too few error events for the estimate to mean much.
    pub fn unreliable(&self) -> bool {
        self.errors < MIN_RELIABLE_ERRORS
    }
}

/// SSC run together with how often each stopping point was reached.
#[derive(Debug, Clone, PartialEq)]
pub struct SscRun {
    pub estimate: McEstimate,
    /// `selections[j-1]` counts stops at antenna `j = 1..M`; the last entry
    /// counts fallbacks to the best antenna.
    pub selections: Vec<u64>,
}

#[derive(Default)]
struct Tally {
    errors: u64,
    selections: Vec<u64>,
}

fn batch_rng(seed: u64, batch: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch);
    rng
}

fn run_batches<F>(cfg: &McConfig, slots: usize, per_batch: F) -> Tally
where
    F: Fn(&mut ChaCha8Rng, u64, &mut Tally) + Sync,
{
    let batches = cfg.samples.div_ceil(cfg.batch_size);
    let tallies: Vec<Tally> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let size = cfg.batch_size.min(cfg.samples - b * cfg.batch_size);
            let mut rng = batch_rng(cfg.seed, b);
            let mut tally = Tally {
                errors: 0,
                selections: vec![0; slots],
            };
            per_batch(&mut rng, size, &mut tally);
            tally
        })
        .collect();
    tallies.into_iter().fold(
        Tally {
            errors: 0,
            selections: vec![0; slots],
        },
        |mut acc, t| {
            acc.errors += t.errors;
            for (a, s) in acc.selections.iter_mut().zip(t.selections) {
                *a += s;
            }
            acc
        },
    )
}

fn draw_branches(sampler: &SnrSampler, rng: &mut ChaCha8Rng, snrs: &mut [f64]) {
    for s in snrs.iter_mut() {
        *s = sampler.sample(rng);
    }
}

/// Simulates SC: transmit on the best of `M` branches with blocklength `n_sc`.
pub fn simulate_sc(ch: &ChannelModel, b: &ProtocolBudget, cfg: &McConfig) -> Result<McEstimate> {
    let cfg = cfg.validated()?;
    let n_sc = b.n_sc()? as f64;
    let k = b.k as f64;
    let sampler = ch.sampler();
    let antennas = b.antennas as usize;
    let tally = run_batches(&cfg, 0, |rng, size, tally| {
        let mut snrs = vec![0.0; antennas];
        for _ in 0..size {
            draw_branches(&sampler, rng, &mut snrs);
            let best = snrs.iter().copied().fold(0.0, f64::max);
            let u: f64 = rng.random();
            if u < fb_error_at(k, n_sc, best) {
                tally.errors += 1;
            }
        }
    });
    Ok(McEstimate::from_counts(tally.errors, cfg.samples, cfg.seed))
}

/// Simulates SSC with threshold `gamma0` (`f64::INFINITY` allowed).
pub fn simulate_ssc(
    ch: &ChannelModel,
    b: &ProtocolBudget,
    gamma0: f64,
    cfg: &McConfig,
) -> Result<McEstimate> {
    simulate_ssc_with_selections(ch, b, gamma0, cfg).map(|r| r.estimate)
}

pub fn simulate_ssc_with_selections(
    ch: &ChannelModel,
    b: &ProtocolBudget,
    gamma0: f64,
    cfg: &McConfig,
) -> Result<SscRun> {
    let cfg = cfg.validated()?;
    if !(gamma0 >= 0.0) {
        return Err(domain(format!("threshold must be >= 0, got {gamma0}")));
    }
    let n: Vec<f64> = b.blocklengths()?.iter().map(|&v| v as f64).collect();
    let k = b.k as f64;
    let sampler = ch.sampler();
    let antennas = b.antennas as usize;
    let tally = run_batches(&cfg, antennas + 1, |rng, size, tally| {
        let mut snrs = vec![0.0; antennas];
        for _ in 0..size {
            draw_branches(&sampler, rng, &mut snrs);
            let (slot, snr) = match snrs.iter().position(|&s| s >= gamma0) {
                Some(j) => (j, snrs[j]),
                None => (antennas, snrs.iter().copied().fold(0.0, f64::max)),
            };
            tally.selections[slot] += 1;
            let u: f64 = rng.random();
            if u < fb_error_at(k, n[slot], snr) {
                tally.errors += 1;
            }
        }
    });
    Ok(SscRun {
        estimate: McEstimate::from_counts(tally.errors, cfg.samples, cfg.seed),
        selections: tally.selections,
    })
}
