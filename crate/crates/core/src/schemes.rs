//! Analytical error of SC and SSC, and SSC threshold selection.
//!
//! SSC scans antennas in order and stays on the first branch whose SNR
//! reaches `γ0`; if none does it switches once more to the best branch. With
//! `F = F_γ(γ0)` and blocklengths `n_i` from the timing ledger,
//!
//! ```text
//! ε_ssc(γ0) = Σ_{i=1..M} F^(i-1) ∫_{γ0}^∞ ε(k, n_{i-1}, x) f_γ(x) dx     (T1)
//!           + ∫_0^{γ0} ε(k, n_M, x) f_sc(x) dx                            (T2)
//! ```
//!
//! The truncation normalisers of the conditional densities cancel against
//! the branch probabilities and are never formed numerically.

use crate::error::{domain, Error, Result};
use crate::fading::ChannelModel;
use crate::fbcode::{expected_error, outage_snr, snr_for_target_error_at};
use crate::numerics::{minimize_scalar, Tolerance};
use crate::timing::ProtocolBudget;

/// Quadrature settings shared by every evaluator. The absolute floor is
/// effectively zero so that error probabilities far below 1e-12 are still
/// resolved to the relative tolerance.
pub const EVAL_TOLERANCE: Tolerance = Tolerance {
    abs_tol: 1e-300,
    rel_tol: 1e-10,
    max_subdivisions: 2000,
};

/// Survival probability at which the optimum search stops looking for larger
/// thresholds; past it SSC is numerically indistinguishable from SC.
pub const SEARCH_TAIL: f64 = 1e-8;

/// Default iteration cap for the fixed-point SNR inversion.
pub const DEFAULT_MAX_ITERS: usize = 50;

/// How the SSC threshold `γ0` is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdStrategy {
    /// A given linear threshold.
    Fixed(f64),
    /// `γ0 = ∞`: scan everything, i.e. SC.
    Infinite,
    /// `γ0 = 2^(k/n_M) - 1`.
    Naive,
    /// Target error from the `l`-power mean of the blocklengths, inverted
    /// for SNR. `l` may be `±∞`.
    FadingDependent { l: f64, max_iters: usize },
    /// Numerical minimisation of `ε_ssc(γ0)`.
    NumericOptimum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    Sc,
    Ssc(ThresholdStrategy),
}

/// Error probability with its per-branch breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeEvaluation {
    pub error_prob: f64,
    pub threshold_used: f64,
    /// Contribution of stopping at antenna `i = 1..M`.
    pub t1_terms: Vec<f64>,
    /// Contribution of the fallback to the best antenna.
    pub t2_term: f64,
    /// `n_0 .. n_M`.
    pub n_values: Vec<i64>,
    pub strategy: ThresholdStrategy,
}

fn selection_error(ch: &ChannelModel, b: &ProtocolBudget, n_sc: f64, upper: f64) -> Result<f64> {
    if upper <= 0.0 {
        return Ok(0.0);
    }
    let antennas = b.antennas;
    expected_error(
        b.k as f64,
        n_sc,
        |x| ch.max_pdf(antennas, x),
        0.0,
        upper,
        &EVAL_TOLERANCE,
    )
}

/// `E[ε(k, n_sc, γ_sc)]` with `γ_sc` the best of `M` branches.
pub fn sc_error_exact(ch: &ChannelModel, b: &ProtocolBudget) -> Result<f64> {
    let n_sc = b.n_sc()?;
    selection_error(ch, b, n_sc as f64, f64::INFINITY)
}

/// Outage approximation `F_γ(2^(k/n_sc) - 1)^M`.
pub fn sc_error_asymptotic(ch: &ChannelModel, b: &ProtocolBudget) -> Result<f64> {
    let n_sc = b.n_sc()?;
    Ok(ch.max_cdf(b.antennas, outage_snr(b.k as f64, n_sc as f64)))
}

/// Overhead-free outage bound `F_γ(2^(k/u) - 1)^M`.
pub fn asymptotic_bound(ch: &ChannelModel, b: &ProtocolBudget) -> f64 {
    ch.max_cdf(b.antennas, outage_snr(b.k as f64, b.u as f64))
}

/// SSC error for a given threshold (`f64::INFINITY` reproduces SC exactly).
pub fn ssc_error(ch: &ChannelModel, b: &ProtocolBudget, gamma0: f64) -> Result<SchemeEvaluation> {
    if !(gamma0 >= 0.0) {
        return Err(domain(format!("threshold must be >= 0, got {gamma0}")));
    }
    let n_values = b.blocklengths()?;
    let antennas = b.antennas as usize;
    let n_sc = n_values[antennas] as f64;
    let k = b.k as f64;

    if gamma0.is_infinite() {
        let t2 = selection_error(ch, b, n_sc, f64::INFINITY)?;
        return Ok(SchemeEvaluation {
            error_prob: t2,
            threshold_used: f64::INFINITY,
            t1_terms: vec![0.0; antennas],
            t2_term: t2,
            n_values,
            strategy: ThresholdStrategy::Infinite,
        });
    }

    let below = ch.cdf(gamma0);
    let mut cache: Vec<(i64, f64)> = Vec::with_capacity(antennas);
    let mut t1_terms = Vec::with_capacity(antennas);
    for i in 1..=antennas {
        let weight = below.powi(i as i32 - 1);
        if weight == 0.0 {
            t1_terms.push(0.0);
            continue;
        }
        let n = n_values[i - 1];
        let tail = match cache.iter().find(|(m, _)| *m == n) {
            Some(&(_, v)) => v,
            None => {
                // a branch with no channel uses left fails with certainty
                let v = if n < 1 {
                    ch.ccdf(gamma0)
                } else {
                    expected_error(
                        k,
                        n as f64,
                        |x| ch.pdf(x),
                        gamma0,
                        f64::INFINITY,
                        &EVAL_TOLERANCE,
                    )?
                };
                cache.push((n, v));
                v
            }
        };
        t1_terms.push(weight * tail);
    }
    let t2_term = selection_error(ch, b, n_sc, gamma0)?;
    let error_prob = t1_terms.iter().sum::<f64>() + t2_term;
    Ok(SchemeEvaluation {
        error_prob,
        threshold_used: gamma0,
        t1_terms,
        t2_term,
        n_values,
        strategy: ThresholdStrategy::Fixed(gamma0),
    })
}

/// `2^(k/n_M) - 1`.
pub fn naive_threshold(b: &ProtocolBudget) -> Result<f64> {
    let n_sc = b.n_sc()?;
    Ok(outage_snr(b.k as f64, n_sc as f64))
}

/// `l`-power mean. `l = 0` is the geometric mean, `±∞` the max/min.
pub fn generalized_mean(values: &[f64], l: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(domain("generalized mean of an empty list"));
    }
    if values.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(domain("generalized mean needs positive finite values"));
    }
    if l.is_nan() {
        return Err(domain("mean order must not be NaN"));
    }
    let max = values.iter().copied().fold(f64::MIN, f64::max);
    let min = values.iter().copied().fold(f64::MAX, f64::min);
    if l == f64::INFINITY {
        return Ok(max);
    }
    if l == f64::NEG_INFINITY {
        return Ok(min);
    }
    let count = values.len() as f64;
    let mean = if l == 0.0 {
        (values.iter().map(|v| v.ln()).sum::<f64>() / count).exp()
    } else {
        // scale by the max so large |l| does not overflow
        let s = values.iter().map(|v| (v / max).powf(l)).sum::<f64>() / count;
        max * s.powf(1.0 / l)
    };
    Ok(mean.clamp(min, max))
}

/// Intermediate quantities of the fading-dependent threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingThreshold {
    pub threshold: f64,
    /// Equivalent blocklength.
    pub n_tilde: f64,
    /// Target error `F_γ(2^(k/ñ) - 1)^(M-1)`.
    pub target: f64,
    pub sc_error: f64,
    /// Fixed-point iterations used (0 when the threshold is infinite).
    pub iterations: usize,
}

/// Fading-dependent threshold: `∞` when the target error is no better than
/// SC, otherwise the SNR at which a code of blocklength `ñ` hits the target.
pub fn fading_threshold(
    ch: &ChannelModel,
    b: &ProtocolBudget,
    l: f64,
    max_iters: usize,
) -> Result<f64> {
    fading_threshold_details(ch, b, l, max_iters).map(|f| f.threshold)
}

pub fn fading_threshold_details(
    ch: &ChannelModel,
    b: &ProtocolBudget,
    l: f64,
    max_iters: usize,
) -> Result<FadingThreshold> {
    let n: Vec<f64> = b.blocklengths()?.iter().map(|&v| v as f64).collect();
    let n_tilde = generalized_mean(&n, l)?;
    let k = b.k as f64;
    let target = ch.cdf(outage_snr(k, n_tilde)).powi(b.antennas as i32 - 1);
    let sc_error = sc_error_exact(ch, b)?;
    if target >= sc_error {
        return Ok(FadingThreshold {
            threshold: f64::INFINITY,
            n_tilde,
            target,
            sc_error,
            iterations: 0,
        });
    }
    let inverted = snr_for_target_error_at(k, n_tilde, target, max_iters)?;
    Ok(FadingThreshold {
        threshold: inverted.snr,
        n_tilde,
        target,
        sc_error,
        iterations: inverted.iterations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalThreshold {
    pub threshold: f64,
    pub error: f64,
}

/// Search interval `[2^(k/u) - 1, γ_hi]` used by [`optimal_threshold`].
pub fn threshold_search_range(ch: &ChannelModel, b: &ProtocolBudget) -> Result<(f64, f64)> {
    let lo = outage_snr(b.k as f64, b.u as f64);
    let hi = naive_threshold(b)?.max(ch.snr_at_tail(SEARCH_TAIL)?);
    Ok((lo, hi.max(2.0 * lo)))
}

/// Minimises `ε_ssc(γ0)`; the result is never worse than the naive,
/// fading-dependent or infinite thresholds.
pub fn optimal_threshold(ch: &ChannelModel, b: &ProtocolBudget) -> Result<OptimalThreshold> {
    let (lo, hi) = threshold_search_range(ch, b)?;
    let mut failure: Option<Error> = None;
    let found = minimize_scalar(
        |g0| match ssc_error(ch, b, g0) {
            Ok(e) => e.error_prob,
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        },
        lo,
        hi,
        1e-6 * lo,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }

    let mut best = OptimalThreshold {
        threshold: found.argmin,
        error: found.value,
    };
    let mut candidates = vec![naive_threshold(b)?, f64::INFINITY];
    for l in [f64::NEG_INFINITY, 1.0, f64::INFINITY] {
        if let Ok(t) = fading_threshold(ch, b, l, DEFAULT_MAX_ITERS) {
            candidates.push(t);
        }
    }
    for g0 in candidates {
        let e = ssc_error(ch, b, g0)?.error_prob;
        if e < best.error {
            best = OptimalThreshold {
                threshold: g0,
                error: e,
            };
        }
    }
    Ok(best)
}

/// Resolves a strategy to a concrete threshold (possibly infinite).
pub fn resolve_threshold(
    ch: &ChannelModel,
    b: &ProtocolBudget,
    strategy: &ThresholdStrategy,
) -> Result<f64> {
    match *strategy {
        ThresholdStrategy::Fixed(g0) => {
            if !(g0 >= 0.0) {
                return Err(domain(format!("fixed threshold must be >= 0, got {g0}")));
            }
            Ok(g0)
        }
        ThresholdStrategy::Infinite => Ok(f64::INFINITY),
        ThresholdStrategy::Naive => naive_threshold(b),
        ThresholdStrategy::FadingDependent { l, max_iters } => {
            fading_threshold(ch, b, l, max_iters)
        }
        ThresholdStrategy::NumericOptimum => optimal_threshold(ch, b).map(|o| o.threshold),
    }
}

/// Evaluates one scheme on one configuration.
pub fn evaluate(
    ch: &ChannelModel,
    b: &ProtocolBudget,
    scheme: &Scheme,
) -> Result<SchemeEvaluation> {
    match scheme {
        Scheme::Sc => ssc_error(ch, b, f64::INFINITY),
        Scheme::Ssc(strategy) => {
            let g0 = resolve_threshold(ch, b, strategy)?;
            let mut eval = ssc_error(ch, b, g0)?;
            eval.strategy = *strategy;
            Ok(eval)
        }
    }
}

/// Error of a single-antenna receiver: one measurement (`q` channel uses),
/// no switching and no feedback, so `n = u - q`.
pub fn single_antenna_error(ch: &ChannelModel, k: u32, u: u32, q: u32) -> Result<f64> {
    if u <= q {
        return Err(Error::Infeasible(format!(
            "single antenna needs u > q, got u={u}, q={q}"
        )));
    }
    expected_error(
        k as f64,
        (u - q) as f64,
        |x| ch.pdf(x),
        0.0,
        f64::INFINITY,
        &EVAL_TOLERANCE,
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct AntennaChoice {
    pub antennas: u32,
    pub error: f64,
    /// Error for every `M` in `1..=M_max`; `None` where infeasible.
    pub sweep: Vec<(u32, Option<f64>)>,
}

/// Antenna count in `1..=max_antennas` minimising the scheme error; ties go
/// to fewer antennas.
#[allow(clippy::too_many_arguments)]
pub fn best_antenna_count(
    ch: &ChannelModel,
    k: u32,
    u: u32,
    p: u32,
    q: u32,
    d: u32,
    scheme: &Scheme,
    max_antennas: u32,
) -> Result<AntennaChoice> {
    if max_antennas < 2 {
        return Err(domain(format!(
            "max antenna count must be >= 2, got {max_antennas}"
        )));
    }
    let mut sweep = Vec::with_capacity(max_antennas as usize);
    let mut best: Option<(u32, f64)> = None;
    for antennas in 1..=max_antennas {
        let error = if antennas == 1 {
            if u > q {
                Some(single_antenna_error(ch, k, u, q)?)
            } else {
                None
            }
        } else {
            let b = ProtocolBudget::new(u, p, q, d, antennas, k)?;
            if b.feasible() {
                Some(evaluate(ch, &b, scheme)?.error_prob)
            } else {
                None
            }
        };
        if let Some(e) = error {
            if best.is_none_or(|(_, be)| e < be) {
                best = Some((antennas, e));
            }
        }
        sweep.push((antennas, error));
    }
    let (antennas, error) = best.ok_or_else(|| {
        Error::Infeasible(format!(
            "no antenna count in 1..={max_antennas} fits u={u} with p={p}, q={q}"
        ))
    })?;
    Ok(AntennaChoice {
        antennas,
        error,
        sweep,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fbcode::{avg_fb_error, CodeSpec};
    use proptest::prelude::*;

    fn fig1_budget() -> ProtocolBudget {
        ProtocolBudget::new(200, 4, 16, 24, 6, 256).unwrap()
    }

    fn fig1_channel(db: f64) -> ChannelModel {
        ChannelModel::from_db(2.0, db).unwrap()
    }

    #[test]
    fn infinite_threshold_is_sc() {
        let ch = fig1_channel(12.0);
        let b = fig1_budget();
        let e = ssc_error(&ch, &b, f64::INFINITY).unwrap();
        assert_eq!(e.error_prob, sc_error_exact(&ch, &b).unwrap());
        assert!(e.t1_terms.iter().all(|&t| t == 0.0));
        assert_eq!(e.t1_terms.len(), 6);
    }

    #[test]
    fn zero_threshold_stays_on_first_antenna() {
        let ch = fig1_channel(12.0);
        let b = fig1_budget();
        let e = ssc_error(&ch, &b, 0.0).unwrap();
        let single = avg_fb_error(
            CodeSpec::new(256, 160).unwrap(),
            |x| ch.pdf(x),
            0.0,
            f64::INFINITY,
            &EVAL_TOLERANCE,
        )
        .unwrap();
        assert_eq!(e.t2_term, 0.0);
        assert!(e.t1_terms[1..].iter().all(|&t| t == 0.0));
        assert!(((e.error_prob - single) / single).abs() < 1e-12);
    }

    #[test]
    fn decomposition_adds_up() {
        let ch = fig1_channel(10.0);
        let b = fig1_budget();
        for g0 in [0.5, 2.0, 3.7, 8.0, 30.0] {
            let e = ssc_error(&ch, &b, g0).unwrap();
            let sum: f64 = e.t1_terms.iter().sum::<f64>() + e.t2_term;
            assert!((sum - e.error_prob).abs() <= 1e-12);
            assert!(e.t1_terms.iter().all(|&t| t >= 0.0) && e.t2_term >= 0.0);
            assert!((0.0..=1.0).contains(&e.error_prob));
            assert_eq!(e.n_values, vec![160, 140, 120, 100, 80, 60, 80]);
        }
    }

    #[test]
    fn sc_vanishes_at_high_snr() {
        let b = fig1_budget();
        let hi = sc_error_exact(&fig1_channel(40.0), &b).unwrap();
        assert!(hi < 1e-20);
    }

    #[test]
    fn sc_nonincreasing_in_mean_snr() {
        let b = fig1_budget();
        let mut prev = 1.0;
        for db in 4..=20 {
            let v = sc_error_exact(&fig1_channel(db as f64), &b).unwrap();
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn sc_asymptotic_rayleigh_closed_form() {
        let ch = ChannelModel::from_db(1.0, 12.0).unwrap();
        let b = fig1_budget();
        let expect = (1.0 - (-(2f64.powf(3.2) - 1.0) / ch.mean_snr()).exp()).powi(6);
        assert!((sc_error_asymptotic(&ch, &b).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn sc_asymptotic_within_factor_two_of_exact() {
        let ch = fig1_channel(12.0);
        let b = fig1_budget();
        let exact = sc_error_exact(&ch, &b).unwrap();
        let asym = sc_error_asymptotic(&ch, &b).unwrap();
        assert!(
            asym / exact < 2.0 && exact / asym < 2.0,
            "{asym} vs {exact}"
        );
    }

    #[test]
    fn naive_threshold_values() {
        assert!((naive_threshold(&fig1_budget()).unwrap() - 8.1896).abs() < 1e-4);
        let b = ProtocolBudget::new(260, 4, 16, 24, 6, 256).unwrap();
        assert!((naive_threshold(&b).unwrap() - (2f64.powf(256.0 / 140.0) - 1.0)).abs() < 1e-12);
        assert!((naive_threshold(&b).unwrap() - 2.551_851_902_578_312).abs() < 1e-12);
        let b = ProtocolBudget::new(200, 4, 16, 24, 6, 80).unwrap();
        assert!((naive_threshold(&b).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn generalized_mean_cases() {
        let v = [160.0, 140.0, 120.0, 100.0, 80.0, 80.0, 80.0];
        assert!((generalized_mean(&v, 1.0).unwrap() - 760.0 / 7.0).abs() < 1e-12);
        assert_eq!(generalized_mean(&v, f64::INFINITY).unwrap(), 160.0);
        assert_eq!(generalized_mean(&v, f64::NEG_INFINITY).unwrap(), 80.0);
        let g = generalized_mean(&v, 0.0).unwrap();
        let geo = (v.iter().map(|x: &f64| x.ln()).sum::<f64>() / 7.0).exp();
        assert!((g - geo).abs() < 1e-12);
        // large orders approach the extremes
        assert!((generalized_mean(&v, 400.0).unwrap() - 160.0).abs() < 1.0);
        assert!((generalized_mean(&v, -400.0).unwrap() - 80.0).abs() < 1.0);
        assert!(generalized_mean(&[], 1.0).is_err());
        assert!(generalized_mean(&[1.0, 0.0], 1.0).is_err());
    }

    #[test]
    fn fading_threshold_two_antennas_uses_single_power() {
        let ch = fig1_channel(8.0);
        let b = ProtocolBudget::new(200, 4, 16, 24, 2, 256).unwrap();
        let f = fading_threshold_details(&ch, &b, 1.0, 50).unwrap();
        let n: Vec<f64> = b
            .blocklengths()
            .unwrap()
            .iter()
            .map(|&v| v as f64)
            .collect();
        let n_tilde = generalized_mean(&n, 1.0).unwrap();
        assert_eq!(f.n_tilde, n_tilde);
        assert_eq!(f.target, ch.snr_cdf(outage_snr(256.0, n_tilde)).unwrap());
    }

    #[test]
    fn fading_threshold_beats_naive_at_12db() {
        let ch = fig1_channel(12.0);
        let b = fig1_budget();
        let fa = fading_threshold(&ch, &b, f64::INFINITY, 50).unwrap();
        let na = naive_threshold(&b).unwrap();
        let e_fa = ssc_error(&ch, &b, fa).unwrap().error_prob;
        let e_na = ssc_error(&ch, &b, na).unwrap().error_prob;
        assert!(e_fa <= e_na);
    }

    #[test]
    fn continuity_in_threshold() {
        let ch = fig1_channel(12.0);
        let b = fig1_budget();
        for g0 in [1.0, 3.0, 3.7, 6.0, 20.0] {
            let a = ssc_error(&ch, &b, g0).unwrap().error_prob;
            let c = ssc_error(&ch, &b, g0 + 1e-4).unwrap().error_prob;
            assert!((a - c).abs() <= 1e-3 * a, "g0={g0}: {a} vs {c}");
        }
    }

    #[test]
    fn optimum_beats_sc_and_exceeds_ib_threshold() {
        let ch = fig1_channel(12.0);
        let b = fig1_budget();
        let opt = optimal_threshold(&ch, &b).unwrap();
        assert!(opt.error <= sc_error_exact(&ch, &b).unwrap());
        assert!(opt.threshold > outage_snr(256.0, 200.0));
        for g0 in [naive_threshold(&b).unwrap(), 2.0, 3.0, 5.0] {
            assert!(opt.error <= ssc_error(&ch, &b, g0).unwrap().error_prob);
        }
    }

    #[test]
    fn evaluate_dispatches() {
        let ch = fig1_channel(12.0);
        let b = fig1_budget();
        let sc = evaluate(&ch, &b, &Scheme::Sc).unwrap();
        let inf = evaluate(&ch, &b, &Scheme::Ssc(ThresholdStrategy::Infinite)).unwrap();
        assert_eq!(sc.error_prob, inf.error_prob);
        let fixed = evaluate(&ch, &b, &Scheme::Ssc(ThresholdStrategy::Fixed(3.0))).unwrap();
        assert_eq!(fixed.threshold_used, 3.0);
        assert!(evaluate(&ch, &b, &Scheme::Ssc(ThresholdStrategy::Fixed(-1.0))).is_err());
    }

    #[test]
    fn infeasible_budget_is_reported() {
        let ch = fig1_channel(12.0);
        let b = ProtocolBudget::new(120, 4, 16, 24, 6, 256).unwrap();
        assert!(matches!(sc_error_exact(&ch, &b), Err(Error::Infeasible(_))));
        assert!(matches!(ssc_error(&ch, &b, 3.0), Err(Error::Infeasible(_))));
        assert!(matches!(naive_threshold(&b), Err(Error::Infeasible(_))));
    }

    #[test]
    fn antenna_count_boundaries() {
        let ch = ChannelModel::from_db(1.0, 12.0).unwrap();
        // only M = 1 fits
        let c = best_antenna_count(&ch, 256, 40, 4, 16, 24, &Scheme::Sc, 6).unwrap();
        assert_eq!(c.antennas, 1);
        assert!(c.sweep[1..].iter().all(|(_, e)| e.is_none()));
        // nothing fits
        assert!(best_antenna_count(&ch, 256, 10, 4, 16, 24, &Scheme::Sc, 6).is_err());
        // overhead negligible: more antennas always help
        let c = best_antenna_count(&ch, 256, 100_000, 4, 16, 24, &Scheme::Sc, 8).unwrap();
        assert_eq!(c.antennas, 8);
    }

    #[test]
    fn fig2_interior_optimum() {
        let ch = ChannelModel::from_db(1.0, 12.0).unwrap();
        let c = best_antenna_count(&ch, 256, 200, 4, 16, 24, &Scheme::Sc, 9).unwrap();
        assert!(c.antennas >= 2 && c.antennas < 9, "M*={}", c.antennas);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn ssc_terms_are_probabilities(m in 0.5f64..4.0, db in 0.0f64..20.0, g0 in 0.0f64..50.0) {
            let ch = ChannelModel::from_db(m, db).unwrap();
            let e = ssc_error(&ch, &fig1_budget(), g0).unwrap();
            prop_assert!(e.t1_terms.iter().all(|&t| t >= 0.0));
            prop_assert!(e.t2_term >= 0.0);
            prop_assert!(e.error_prob >= 0.0 && e.error_prob <= 1.0 + 1e-12);
        }
    }
}
