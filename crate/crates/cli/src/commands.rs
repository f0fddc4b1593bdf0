use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use divcomb::montecarlo::{simulate_sc, simulate_ssc};
use divcomb::schemes::{
    best_antenna_count, evaluate, fading_threshold, naive_threshold, optimal_threshold,
    sc_error_exact, ssc_error, Scheme, ThresholdStrategy,
};
use divcomb::{McConfig, McEstimate, ProtocolBudget};

use crate::error::{CliError, CliResult};
use crate::settings::{Settings, DEFAULT_SAMPLES};
use crate::sweep::{sci, threshold_db, SweepSpec};

pub const DEFAULT_MAX_ANTENNAS: u32 = 10;
/// `|z|` above this fails validation.
pub const Z_LIMIT: f64 = 4.0;

fn stdout_err(e: io::Error) -> CliError {
    CliError::io("<stdout>", e)
}

fn feasible_budget(s: &Settings) -> CliResult<ProtocolBudget> {
    let b = s.budget()?;
    if !b.feasible() {
        return Err(CliError::Infeasible(format!(
            "constraint u > (p+q)M violated: u={}, (p+q)M={}",
            b.u,
            (b.p + b.q) * b.antennas
        )));
    }
    Ok(b)
}

pub fn strategy_name(s: &ThresholdStrategy) -> String {
    match *s {
        ThresholdStrategy::Fixed(g0) => format!("fixed:{}", divcomb::linear_to_db(g0)),
        ThresholdStrategy::Infinite => "infinite".into(),
        ThresholdStrategy::Naive => "naive".into(),
        ThresholdStrategy::FadingDependent { l, .. } if l == f64::NEG_INFINITY => "fa:min".into(),
        ThresholdStrategy::FadingDependent { l: 1.0, .. } => "fa:mean".into(),
        ThresholdStrategy::FadingDependent { l, .. } if l == f64::INFINITY => "fa:max".into(),
        ThresholdStrategy::FadingDependent { l, .. } => format!("fa:{l}"),
        ThresholdStrategy::NumericOptimum => "opt".into(),
    }
}

fn scheme_name(s: &Scheme) -> String {
    match s {
        Scheme::Sc => "sc".into(),
        Scheme::Ssc(st) => format!("ssc ({})", strategy_name(st)),
    }
}

fn simulate(
    ch: &divcomb::ChannelModel,
    b: &ProtocolBudget,
    scheme: &Scheme,
    threshold: f64,
    cfg: &McConfig,
) -> CliResult<McEstimate> {
    Ok(match scheme {
        Scheme::Sc => simulate_sc(ch, b, cfg)?,
        Scheme::Ssc(_) => simulate_ssc(ch, b, threshold, cfg)?,
    })
}

pub fn eval(s: &Settings, out: &mut impl Write) -> CliResult<()> {
    let ch = s.channel()?;
    let b = feasible_budget(s)?;
    let scheme = s.scheme()?;
    let e = evaluate(&ch, &b, &scheme)?;
    let n: Vec<String> = e.n_values.iter().map(|n| n.to_string()).collect();
    let t1: Vec<String> = e.t1_terms.iter().map(|&t| sci(t)).collect();
    let mut lines = vec![
        format!("scheme        {}", scheme_name(&scheme)),
        format!("mean_snr_db   {}", s.mean_snr_db()?),
        format!("error_prob    {}", sci(e.error_prob)),
        format!("threshold_db  {}", threshold_db(e.threshold_used)),
        format!("n_sc          {}", b.n_sc()?),
        format!("n_i           {}", n.join(" ")),
        format!("t1            {}", t1.join(" ")),
        format!("t2            {}", sci(e.t2_term)),
    ];
    if let Some(samples) = s.mc_samples {
        let cfg = McConfig::new(samples, s.seed())?;
        let mc = simulate(&ch, &b, &scheme, e.threshold_used, &cfg)?;
        lines.push(format!(
            "mc_estimate   {} +/- {} ({} errors, seed {})",
            sci(mc.error_rate),
            sci(mc.std_error),
            mc.errors,
            mc.seed
        ));
    }
    writeln!(out, "{}", lines.join("\n")).map_err(stdout_err)
}

pub fn optimize_threshold(s: &Settings, out: &mut impl Write) -> CliResult<()> {
    let ch = s.channel()?;
    let b = feasible_budget(s)?;
    let opt = optimal_threshold(&ch, &b)?;
    let mut rows = vec![
        ("sc".to_string(), f64::INFINITY, sc_error_exact(&ch, &b)?),
        ("ssc-opt".to_string(), opt.threshold, opt.error),
    ];
    let naive = naive_threshold(&b)?;
    rows.push((
        "ssc-naive".into(),
        naive,
        ssc_error(&ch, &b, naive)?.error_prob,
    ));
    for (name, l) in [
        ("min", f64::NEG_INFINITY),
        ("mean", 1.0),
        ("max", f64::INFINITY),
    ] {
        let g0 = fading_threshold(&ch, &b, l, divcomb::schemes::DEFAULT_MAX_ITERS)?;
        rows.push((
            format!("ssc-fa-{name}"),
            g0,
            ssc_error(&ch, &b, g0)?.error_prob,
        ));
    }
    let mut text = format!(
        "optimum threshold {} dB (linear {}), error {}\n{:<12} {:<16} error_prob\n",
        threshold_db(opt.threshold),
        sci(opt.threshold),
        sci(opt.error),
        "curve",
        "threshold_db"
    );
    for (name, g0, e) in rows {
        text.push_str(&format!("{name:<12} {:<16} {}\n", threshold_db(g0), sci(e)));
    }
    write!(out, "{text}").map_err(stdout_err)
}

pub fn optimize_antennas(s: &Settings, out: &mut impl Write) -> CliResult<()> {
    let ch = s.channel()?;
    let scheme = s.scheme()?;
    let max = s.max_antennas.unwrap_or(DEFAULT_MAX_ANTENNAS);
    let choice = best_antenna_count(&ch, s.k_bits()?, s.u()?, s.p(), s.q(), s.d(), &scheme, max)?;
    let mut text = format!("scheme {}\nantennas error_prob\n", scheme_name(&scheme));
    for (m, e) in &choice.sweep {
        let e = e.map(sci).unwrap_or_else(|| "infeasible".into());
        text.push_str(&format!("{m:<8} {e}\n"));
    }
    text.push_str(&format!(
        "best {} antennas, error {}\n",
        choice.antennas,
        sci(choice.error)
    ));
    write!(out, "{text}").map_err(stdout_err)
}

/// `z` of the Monte Carlo estimate under the analytical value, using the
/// binomial standard error at that value so that zero-error runs are scored
/// too.
pub fn z_score(analytic: f64, estimate: f64, samples: u64) -> f64 {
    let sigma = (analytic * (1.0 - analytic) / samples as f64).sqrt();
    let gap = estimate - analytic;
    if gap == 0.0 {
        0.0
    } else {
        gap / sigma
    }
}

pub fn validate(
    s: &Settings,
    corrupt_analytic: Option<f64>,
    out: &mut impl Write,
) -> CliResult<()> {
    let ch = s.channel()?;
    let b = feasible_budget(s)?;
    let scheme = s.scheme()?;
    let e = evaluate(&ch, &b, &scheme)?;
    let analytic = match corrupt_analytic {
        Some(f) => (e.error_prob * f).clamp(0.0, 1.0),
        None => e.error_prob,
    };
    let cfg = McConfig::new(s.mc_samples.unwrap_or(DEFAULT_SAMPLES), s.seed())?;
    let mc = simulate(&ch, &b, &scheme, e.threshold_used, &cfg)?;
    let z = z_score(analytic, mc.error_rate, mc.samples);
    let pass = z.abs() <= Z_LIMIT;
    let verdict = if pass { "PASS" } else { "FAIL" };
    writeln!(
        out,
        "scheme        {}\nthreshold_db  {}\nanalytic      {}\nmc_estimate   {} ({} errors in {} samples, seed {})\nmc_std_error  {}\nz             {z:.3}\n{verdict}{}",
        scheme_name(&scheme),
        threshold_db(e.threshold_used),
        sci(analytic),
        sci(mc.error_rate),
        mc.errors,
        mc.samples,
        mc.seed,
        sci(mc.std_error),
        if mc.unreliable() { " (fewer than 10 error events)" } else { "" },
    )
    .map_err(stdout_err)?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Validation(format!(
            "|z| = {:.3} exceeds {Z_LIMIT}",
            z.abs()
        )))
    }
}

pub fn sweep(spec: &SweepSpec, out_path: Option<&Path>) -> CliResult<()> {
    let rows = spec.run()?;
    match out_path {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::io(path, e))?;
            spec.write_csv(&rows, BufWriter::new(file))
                .map_err(|e| CliError::io(path, e))
        }
        None => spec
            .write_csv(&rows, io::stdout().lock())
            .map_err(stdout_err),
    }
}
