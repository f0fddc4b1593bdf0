//! Nakagami-m fading seen through the per-antenna SNR.
//!
//! With a Nakagami-m envelope the instantaneous SNR is Gamma distributed with
//! shape `m` and scale `mean_snr / m`. Selection over `M` iid branches gives
//! the max order statistic with CDF `F^M`.

use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{domain, Result};
use crate::numerics::{ln_gamma, reg_lower_gamma, reg_upper_gamma};

/// Per-antenna SNR statistics: Nakagami shape `m` and linear mean SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelModel {
    m: f64,
    mean_snr: f64,
}

impl ChannelModel {
    pub fn new(m: f64, mean_snr: f64) -> Result<Self> {
        if !(m >= 0.5) || !m.is_finite() {
            return Err(domain(format!("Nakagami shape must be >= 0.5, got {m}")));
        }
        if !(mean_snr > 0.0) || !mean_snr.is_finite() {
            return Err(domain(format!("mean SNR must be positive, got {mean_snr}")));
        }
        Ok(Self { m, mean_snr })
    }

    /// Builds the model from a mean SNR given in dB.
    pub fn from_db(m: f64, mean_snr_db: f64) -> Result<Self> {
        Self::new(m, crate::db_to_linear(mean_snr_db))
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn mean_snr(&self) -> f64 {
        self.mean_snr
    }

    fn scale(&self) -> f64 {
        self.mean_snr / self.m
    }

    /// `F_γ(x) = P(m, m x / γ̄)`.
    pub fn snr_cdf(&self, x: f64) -> Result<f64> {
        check_snr(x)?;
        Ok(self.cdf(x))
    }

    /// `1 - F_γ(x)`, computed without cancellation.
    pub fn snr_ccdf(&self, x: f64) -> Result<f64> {
        check_snr(x)?;
        Ok(self.ccdf(x))
    }

    pub fn snr_pdf(&self, x: f64) -> Result<f64> {
        check_snr(x)?;
        Ok(self.pdf(x))
    }

    /// CDF of the best of `antennas` iid branches.
    pub fn sc_cdf(&self, antennas: u32, x: f64) -> Result<f64> {
        check_antennas(antennas)?;
        check_snr(x)?;
        Ok(self.max_cdf(antennas, x))
    }

    /// Density of the best of `antennas` iid branches, `M F^(M-1) f`.
    pub fn sc_pdf(&self, antennas: u32, x: f64) -> Result<f64> {
        check_antennas(antennas)?;
        check_snr(x)?;
        Ok(self.max_pdf(antennas, x))
    }

    /// Draws one SNR realisation.
    pub fn sample_snr<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.sampler().sample(rng)
    }

    /// Reusable sampler; avoids rebuilding the Gamma distribution per draw.
    pub fn sampler(&self) -> SnrSampler {
        SnrSampler {
            gamma: Gamma::new(self.m, self.scale()).expect("validated shape and scale"),
        }
    }

    /// Smallest SNR whose survival probability is at most `tail` (bisection).
    pub fn snr_at_tail(&self, tail: f64) -> Result<f64> {
        if !(tail > 0.0 && tail < 1.0) {
            return Err(domain(format!(
                "tail probability must be in (0,1), got {tail}"
            )));
        }
        let mut hi = self.mean_snr;
        while self.ccdf(hi) > tail {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.ccdf(mid) > tail {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-12 * hi {
                break;
            }
        }
        Ok(hi)
    }

    // Unchecked evaluators for integrands; callers guarantee x >= 0.

    pub(crate) fn cdf(&self, x: f64) -> f64 {
        reg_lower_gamma(self.m, self.m * x / self.mean_snr).unwrap_or(0.0)
    }

    pub(crate) fn ccdf(&self, x: f64) -> f64 {
        reg_upper_gamma(self.m, self.m * x / self.mean_snr).unwrap_or(1.0)
    }

    pub(crate) fn pdf(&self, x: f64) -> f64 {
        let theta = self.scale();
        if x == 0.0 {
            return if self.m == 1.0 {
                1.0 / theta
            } else if self.m > 1.0 {
                0.0
            } else {
                f64::INFINITY
            };
        }
        if x.is_infinite() {
            return 0.0;
        }
        ((self.m - 1.0) * x.ln() - x / theta - ln_gamma(self.m) - self.m * theta.ln()).exp()
    }

    pub(crate) fn max_cdf(&self, antennas: u32, x: f64) -> f64 {
        self.cdf(x).powi(antennas as i32)
    }

    pub(crate) fn max_pdf(&self, antennas: u32, x: f64) -> f64 {
        let f = self.pdf(x);
        if antennas == 1 || f == 0.0 {
            return f;
        }
        antennas as f64 * self.cdf(x).powi(antennas as i32 - 1) * f
    }
}

/// Gamma(m, γ̄/m) sampler bound to one channel model.
#[derive(Debug, Clone, Copy)]
pub struct SnrSampler {
    gamma: Gamma<f64>,
}

impl Distribution<f64> for SnrSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.gamma.sample(rng)
    }
}

fn check_snr(x: f64) -> Result<()> {
    if x >= 0.0 {
        Ok(())
    } else {
        Err(domain(format!("SNR must be >= 0, got {x}")))
    }
}

fn check_antennas(antennas: u32) -> Result<()> {
    if antennas >= 1 {
        Ok(())
    } else {
        Err(domain("antenna count must be >= 1"))
    }
}
