//! Parameter values gathered from flags and an optional config file.
//!
//! The config file is flat `key = value` text; `#` starts a comment. Keys
//! are the long flag names (`k-bits`, `mean-snr-db`, ...), with `_` accepted
//! in place of `-`. Flags given on the command line win over the file.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use divcomb::schemes::{Scheme, ThresholdStrategy, DEFAULT_MAX_ITERS};
use divcomb::{ChannelModel, ProtocolBudget};

use crate::error::{CliError, CliResult};
use crate::sweep::{parse_curves, parse_values, Axis, Curve};

pub const DEFAULT_P: u32 = 4;
pub const DEFAULT_Q: u32 = 16;
pub const DEFAULT_D: u32 = 24;
pub const DEFAULT_SAMPLES: u64 = 10_000_000;

#[derive(Args, Debug, Clone, Default)]
pub struct ParamArgs {
    /// Payload in bits
    #[arg(long)]
    pub k_bits: Option<u32>,
    /// Latency budget in channel uses
    #[arg(long)]
    pub u: Option<u32>,
    /// Channel uses per antenna switch [default: 4]
    #[arg(long)]
    pub p: Option<u32>,
    /// Channel uses per SNR measurement [default: 16]
    #[arg(long)]
    pub q: Option<u32>,
    /// Feedback delay in channel uses [default: 24]
    #[arg(long)]
    pub d: Option<u32>,
    /// Number of receive antennas
    #[arg(long)]
    pub antennas: Option<u32>,
    /// Nakagami shape parameter (>= 0.5)
    #[arg(long)]
    pub nakagami_m: Option<f64>,
    /// Average SNR per antenna in dB
    #[arg(long, allow_hyphen_values = true)]
    pub mean_snr_db: Option<f64>,
    /// Combining scheme: sc or ssc
    #[arg(long, value_parser = parse_scheme)]
    pub scheme: Option<SchemeKind>,
    /// SSC threshold: fixed:<dB>, infinite, naive, fa:<l|min|mean|max> or opt
    #[arg(long, value_parser = parse_strategy, allow_hyphen_values = true)]
    pub strategy: Option<ThresholdStrategy>,
    /// Monte Carlo sample count (accepts forms like 1e7)
    #[arg(long, value_parser = parse_count)]
    pub mc_samples: Option<u64>,
    /// Monte Carlo seed [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Config file with key = value lines
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    Sc,
    Ssc,
}

/// Everything a subcommand may ask for; `None` means not given anywhere.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    pub k_bits: Option<u32>,
    pub u: Option<u32>,
    pub p: Option<u32>,
    pub q: Option<u32>,
    pub d: Option<u32>,
    pub antennas: Option<u32>,
    pub nakagami_m: Option<f64>,
    pub mean_snr_db: Option<f64>,
    pub scheme: Option<SchemeKind>,
    pub strategy: Option<ThresholdStrategy>,
    pub mc_samples: Option<u64>,
    pub seed: Option<u64>,
    pub axis: Option<Axis>,
    pub values: Option<Vec<f64>>,
    pub curves: Option<Vec<Curve>>,
    pub max_antennas: Option<u32>,
    pub out: Option<PathBuf>,
}

macro_rules! merge_fields {
    ($hi:expr, $lo:expr; $($f:ident),*) => {
        Settings { $($f: $hi.$f.or($lo.$f)),* }
    };
}

impl Settings {
    pub fn from_args(args: &ParamArgs) -> CliResult<Self> {
        let given = Settings {
            k_bits: args.k_bits,
            u: args.u,
            p: args.p,
            q: args.q,
            d: args.d,
            antennas: args.antennas,
            nakagami_m: args.nakagami_m,
            mean_snr_db: args.mean_snr_db,
            scheme: args.scheme,
            strategy: args.strategy,
            mc_samples: args.mc_samples,
            seed: args.seed,
            ..Settings::default()
        };
        match &args.config {
            Some(path) => Ok(given.over(Settings::load(path)?)),
            None => Ok(given),
        }
    }

    /// Field-wise `self.or(lower)`.
    pub fn over(self, lower: Settings) -> Settings {
        merge_fields!(self, lower; k_bits, u, p, q, d, antennas, nakagami_m, mean_snr_db, scheme,
            strategy, mc_samples, seed, axis, values, curves, max_antennas, out)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut s = Settings::default();
        let mut seen = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |msg: String| format!("line {}: {msg}", lineno + 1);
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| at(format!("expected key = value, got `{line}`")))?;
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            if seen.contains(&key) {
                return Err(at(format!("duplicate key `{key}`")));
            }
            s.set(&key, value).map_err(at)?;
            seen.push(key);
        }
        Ok(s)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<(), String> {
        match key {
            "k-bits" => self.k_bits = Some(parse_num(v)?),
            "u" => self.u = Some(parse_num(v)?),
            "p" => self.p = Some(parse_num(v)?),
            "q" => self.q = Some(parse_num(v)?),
            "d" => self.d = Some(parse_num(v)?),
            "antennas" => self.antennas = Some(parse_num(v)?),
            "nakagami-m" => self.nakagami_m = Some(parse_num(v)?),
            "mean-snr-db" => self.mean_snr_db = Some(parse_num(v)?),
            "scheme" => self.scheme = Some(parse_scheme(v)?),
            "strategy" => self.strategy = Some(parse_strategy(v)?),
            "mc-samples" | "samples" => self.mc_samples = Some(parse_count(v)?),
            "seed" => self.seed = Some(parse_num(v)?),
            "axis" => self.axis = Some(Axis::parse(v)?),
            "values" => self.values = Some(parse_values(v)?),
            "curves" => self.curves = Some(parse_curves(v)?),
            "max-antennas" => self.max_antennas = Some(parse_num(v)?),
            "out" => self.out = Some(PathBuf::from(v)),
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    pub fn k_bits(&self) -> CliResult<u32> {
        required(self.k_bits, "k-bits")
    }
    pub fn u(&self) -> CliResult<u32> {
        required(self.u, "u")
    }
    pub fn p(&self) -> u32 {
        self.p.unwrap_or(DEFAULT_P)
    }
    pub fn q(&self) -> u32 {
        self.q.unwrap_or(DEFAULT_Q)
    }
    pub fn d(&self) -> u32 {
        self.d.unwrap_or(DEFAULT_D)
    }
    pub fn antennas(&self) -> CliResult<u32> {
        required(self.antennas, "antennas")
    }
    pub fn nakagami_m(&self) -> CliResult<f64> {
        required(self.nakagami_m, "nakagami-m")
    }
    pub fn mean_snr_db(&self) -> CliResult<f64> {
        required(self.mean_snr_db, "mean-snr-db")
    }
    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn channel(&self) -> CliResult<ChannelModel> {
        Ok(ChannelModel::from_db(
            self.nakagami_m()?,
            self.mean_snr_db()?,
        )?)
    }

    /// Budget without the feasibility check; callers decide how to report it.
    pub fn budget(&self) -> CliResult<ProtocolBudget> {
        Ok(ProtocolBudget::new(
            self.u()?,
            self.p(),
            self.q(),
            self.d(),
            self.antennas()?,
            self.k_bits()?,
        )?)
    }

    /// `--scheme` with `--strategy`; SSC defaults to the numerical optimum.
    pub fn scheme(&self) -> CliResult<Scheme> {
        match (self.scheme.unwrap_or(SchemeKind::Sc), self.strategy) {
            (SchemeKind::Sc, None) => Ok(Scheme::Sc),
            (SchemeKind::Sc, Some(_)) => Err(CliError::Usage(
                "--strategy only applies to --scheme ssc".into(),
            )),
            (SchemeKind::Ssc, s) => Ok(Scheme::Ssc(s.unwrap_or(ThresholdStrategy::NumericOptimum))),
        }
    }
}

fn required<T>(v: Option<T>, name: &str) -> CliResult<T> {
    v.ok_or_else(|| {
        CliError::Usage(format!(
            "missing required parameter --{name} (or `{name}` in the config file)"
        ))
    })
}

fn parse_num<T: std::str::FromStr>(v: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    v.parse().map_err(|e| format!("invalid value `{v}`: {e}"))
}

pub fn parse_scheme(v: &str) -> Result<SchemeKind, String> {
    match v {
        "sc" => Ok(SchemeKind::Sc),
        "ssc" => Ok(SchemeKind::Ssc),
        _ => Err(format!("unknown scheme `{v}` (expected sc or ssc)")),
    }
}

/// Sample counts such as `1000000` or `1e6`.
pub fn parse_count(v: &str) -> Result<u64, String> {
    if let Ok(n) = v.parse::<u64>() {
        return Ok(n);
    }
    match v.parse::<f64>() {
        Ok(x) if x >= 1.0 && x.fract() == 0.0 && x <= u64::MAX as f64 => Ok(x as u64),
        _ => Err(format!("invalid sample count `{v}`")),
    }
}

pub fn parse_strategy(v: &str) -> Result<ThresholdStrategy, String> {
    match v {
        "infinite" => return Ok(ThresholdStrategy::Infinite),
        "naive" => return Ok(ThresholdStrategy::Naive),
        "opt" => return Ok(ThresholdStrategy::NumericOptimum),
        _ => {}
    }
    if let Some(db) = v.strip_prefix("fixed:") {
        let db: f64 = parse_num(db)?;
        if db.is_nan() {
            return Err(format!("invalid threshold `{v}`"));
        }
        return Ok(ThresholdStrategy::Fixed(divcomb::db_to_linear(db)));
    }
    if let Some(l) = v.strip_prefix("fa:") {
        let l = match l {
            "min" => f64::NEG_INFINITY,
            "mean" => 1.0,
            "max" => f64::INFINITY,
            other => parse_num::<f64>(other)?,
        };
        if l.is_nan() {
            return Err(format!("invalid mean order `{v}`"));
        }
        return Ok(ThresholdStrategy::FadingDependent {
            l,
            max_iters: DEFAULT_MAX_ITERS,
        });
    }
    Err(format!(
        "unknown strategy `{v}` (expected fixed:<dB>, infinite, naive, fa:<l|min|mean|max> or opt)"
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_file_syntax() {
        let s = Settings::parse(
            "# reference setup\nk_bits = 256\nu=200 # budget\n\nmean-snr-db = -3.5\nstrategy = fa:max\nsamples = 1e6\n",
        )
        .unwrap();
        assert_eq!(s.k_bits, Some(256));
        assert_eq!(s.u, Some(200));
        assert_eq!(s.mean_snr_db, Some(-3.5));
        assert_eq!(s.mc_samples, Some(1_000_000));
        assert!(matches!(
            s.strategy,
            Some(ThresholdStrategy::FadingDependent { l, .. }) if l == f64::INFINITY
        ));
        assert_eq!(s.p(), DEFAULT_P);
    }

    #[test]
    fn config_errors_name_the_line() {
        assert!(Settings::parse("u = 200\nbogus = 1\n")
            .unwrap_err()
            .starts_with("line 2"));
        assert!(Settings::parse("u = 200\nu = 300\n")
            .unwrap_err()
            .contains("duplicate"));
        assert!(Settings::parse("just words\n").is_err());
        assert!(Settings::parse("u = -4\n").is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = Settings::parse("u = 200\nq = 8\n").unwrap();
        let flags = Settings {
            u: Some(300),
            ..Settings::default()
        };
        let s = flags.over(file);
        assert_eq!((s.u, s.q), (Some(300), Some(8)));
    }

    #[test]
    fn strategy_syntax() {
        assert_eq!(
            parse_strategy("opt").unwrap(),
            ThresholdStrategy::NumericOptimum
        );
        assert_eq!(
            parse_strategy("fixed:10").unwrap(),
            ThresholdStrategy::Fixed(10.0)
        );
        assert!(matches!(
            parse_strategy("fa:min").unwrap(),
            ThresholdStrategy::FadingDependent { l, .. } if l == f64::NEG_INFINITY
        ));
        assert!(matches!(
            parse_strategy("fa:2.5").unwrap(),
            ThresholdStrategy::FadingDependent { l, .. } if l == 2.5
        ));
        assert!(parse_strategy("fa:").is_err());
        assert!(parse_strategy("greedy").is_err());
    }

    #[test]
    fn sample_counts() {
        assert_eq!(parse_count("1e7").unwrap(), 10_000_000);
        assert_eq!(parse_count("42").unwrap(), 42);
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("0").is_ok());
    }

    #[test]
    fn strategy_requires_ssc() {
        let s = Settings {
            strategy: Some(ThresholdStrategy::Naive),
            ..Settings::default()
        };
        assert!(s.scheme().is_err());
        let s = Settings {
            scheme: Some(SchemeKind::Ssc),
            ..Settings::default()
        };
        assert_eq!(
            s.scheme().unwrap(),
            Scheme::Ssc(ThresholdStrategy::NumericOptimum)
        );
    }
}
