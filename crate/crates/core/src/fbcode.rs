//! Normal approximation of the error probability of a short channel code.
//!
//! For blocklength `n`, payload `k` and SNR `γ`:
//! `ε = Q((C(γ) - k/n + log2(n)/(2n)) / sqrt(V(γ)/n))`, with capacity and
//! dispersion in bits. The fading-averaged error is the expectation of `ε`
//! over an SNR density.

use std::f64::consts::{LN_2, LOG2_E};

use crate::error::{domain, Error, Result};
use crate::fading::ChannelModel;
use crate::numerics::{integrate, q_function, q_inverse, Tolerance};

/// `(log2 e)^2`, the dispersion of an infinitely strong AWGN channel.
pub const DISPERSION_LIMIT: f64 = LOG2_E * LOG2_E;

/// Relative change between iterates below which the SNR inversion stops.
pub const INVERSION_REL_TOL: f64 = 1e-9;

/// Payload and blocklength of one transmission.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeSpec {
    pub k: u32,
    pub n: u32,
}

impl CodeSpec {
    pub fn new(k: u32, n: u32) -> Result<Self> {
        if k == 0 || n == 0 {
            return Err(domain(format!(
                "code needs k >= 1 and n >= 1, got k={k}, n={n}"
            )));
        }
        Ok(Self { k, n })
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }
}

/// `log2(1 + γ)`.
pub fn capacity(gamma: f64) -> Result<f64> {
    check_snr(gamma)?;
    Ok(gamma.ln_1p() * LOG2_E)
}

/// `(1 - (1+γ)^-2) (log2 e)^2`.
pub fn dispersion(gamma: f64) -> Result<f64> {
    check_snr(gamma)?;
    Ok(dispersion_unchecked(gamma))
}

fn dispersion_unchecked(gamma: f64) -> f64 {
    if gamma.is_infinite() {
        return DISPERSION_LIMIT;
    }
    let s = 1.0 + gamma;
    // 1 - s^-2 = gamma (gamma + 2) / s^2, exact for small gamma
    gamma * (gamma + 2.0) / (s * s) * DISPERSION_LIMIT
}

/// Second-order rate correction `ln(n) / (2n)`, expressed in bits.
///
/// Keeping `C`, `sqrt(V)` and this term in the same unit is the only place
/// the log base enters; the alternative reading (nats) is `ln(n) / (2n)`.
pub fn rate_correction(n: f64) -> f64 {
    n.ln() / (2.0 * n * LN_2)
}

/// Error probability of `code` on an AWGN channel with SNR `gamma`.
pub fn fb_error(code: CodeSpec, gamma: f64) -> Result<f64> {
    check_snr(gamma)?;
    if code.k == 0 || code.n == 0 {
        return Err(domain("code needs k >= 1 and n >= 1"));
    }
    Ok(fb_error_at(code.k as f64, code.n as f64, gamma))
}

/// [`fb_error`] with a real-valued blocklength. A blocklength below one
/// channel use leaves no room to transmit and yields error 1.
pub fn fb_error_at(k: f64, n: f64, gamma: f64) -> f64 {
    if !(n >= 1.0) || gamma <= 0.0 {
        return 1.0;
    }
    let cap = gamma.ln_1p() * LOG2_E;
    let numer = cap - k / n + rate_correction(n);
    let v = dispersion_unchecked(gamma);
    if v == 0.0 {
        return if numer < 0.0 { 1.0 } else { 0.0 };
    }
    q_function(numer / (v / n).sqrt())
}

/// SNR at which the argument of `Q` vanishes, i.e. where `ε = 1/2`.
pub fn half_error_snr(k: f64, n: f64) -> f64 {
    ((k / n - rate_correction(n)) * LN_2).exp_m1().max(0.0)
}

/// `∫ fb_error(code, x) pdf(x) dx` over `[lo, hi]` (`hi` may be infinite).
pub fn avg_fb_error<P: Fn(f64) -> f64>(
    code: CodeSpec,
    pdf: P,
    lo: f64,
    hi: f64,
    tol: &Tolerance,
) -> Result<f64> {
    if code.k == 0 || code.n == 0 {
        return Err(domain("code needs k >= 1 and n >= 1"));
    }
    if !(lo >= 0.0) {
        return Err(domain(format!("SNR support must start at >= 0, got {lo}")));
    }
    expected_error(code.k as f64, code.n as f64, pdf, lo, hi, tol)
}

/// Expectation of the error over an SNR density restricted to `[lo, hi]`.
///
/// The integrand switches from ~1 to ~0 across a narrow band around the
/// half-error SNR, so the range is split there before integrating.
pub(crate) fn expected_error<P: Fn(f64) -> f64>(
    k: f64,
    n: f64,
    pdf: P,
    lo: f64,
    hi: f64,
    tol: &Tolerance,
) -> Result<f64> {
    if !(hi > lo) {
        return Ok(0.0);
    }
    let integrand = |x: f64| {
        let w = pdf(x);
        if w == 0.0 {
            0.0
        } else {
            fb_error_at(k, n, x) * w
        }
    };
    let centre = half_error_snr(k, n);
    if centre > lo && centre < hi {
        let below = integrate(integrand, lo, centre, tol)?;
        let above = integrate(integrand, centre, hi, tol)?;
        Ok((below + above).clamp(0.0, 1.0))
    } else {
        Ok(integrate(integrand, lo, hi, tol)?.clamp(0.0, 1.0))
    }
}

/// Infinite-blocklength outage `F_γ(2^(k/n) - 1)`.
pub fn asymptotic_outage(ch: &ChannelModel, code: CodeSpec) -> Result<f64> {
    if code.k == 0 || code.n == 0 {
        return Err(domain("code needs k >= 1 and n >= 1"));
    }
    ch.snr_cdf(outage_snr(code.k as f64, code.n as f64))
}

/// `2^(k/n) - 1`.
pub fn outage_snr(k: f64, n: f64) -> f64 {
    ((k / n) * LN_2).exp_m1()
}

/// Result of inverting the error model for SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetSnr {
    pub snr: f64,
    pub iterations: usize,
}

/// SNR at which `code` reaches error `xi`, by fixed-point iteration on the
/// dispersion starting from `γ = ∞`.
pub fn snr_for_target_error(code: CodeSpec, xi: f64, max_iters: usize) -> Result<TargetSnr> {
    if code.n < 2 {
        return Err(domain(format!(
            "SNR inversion needs n >= 2, got {}",
            code.n
        )));
    }
    if code.k == 0 {
        return Err(domain("code needs k >= 1"));
    }
    snr_for_target_error_at(code.k as f64, code.n as f64, xi, max_iters)
}

/// [`snr_for_target_error`] with a real-valued blocklength.
pub fn snr_for_target_error_at(k: f64, n: f64, xi: f64, max_iters: usize) -> Result<TargetSnr> {
    if !(n >= 2.0) || !n.is_finite() {
        return Err(domain(format!("SNR inversion needs n >= 2, got {n}")));
    }
    let q_target = q_inverse(xi)?;
    let base = k / n - rate_correction(n);
    let seed = outage_snr(k, n);

    let mut v = DISPERSION_LIMIT;
    let mut previous = f64::INFINITY;
    for iteration in 1..=max_iters {
        let mut snr = ((base + (v / n).sqrt() * q_target) * LN_2).exp_m1();
        if !snr.is_finite() || snr <= 0.0 {
            snr = seed;
        }
        if previous.is_finite() && (snr - previous).abs() < INVERSION_REL_TOL * snr {
            return Ok(TargetSnr {
                snr,
                iterations: iteration,
            });
        }
        previous = snr;
        v = dispersion_unchecked(snr);
    }
    Err(Error::FixedPointNonConvergence {
        last: previous,
        iterations: max_iters,
    })
}

fn check_snr(gamma: f64) -> Result<()> {
    if gamma >= 0.0 {
        Ok(())
    } else {
        Err(domain(format!("SNR must be >= 0, got {gamma}")))
    }
}
