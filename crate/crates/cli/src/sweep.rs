//! Parameter sweeps and their CSV output.

use std::io::Write;

use divcomb::montecarlo::{simulate_sc, simulate_ssc, McEstimate};
use divcomb::schemes::{asymptotic_bound, evaluate, Scheme};
use divcomb::{ChannelModel, McConfig, ProtocolBudget};
use rayon::prelude::*;

use crate::error::{CliError, CliResult};
use crate::settings::{parse_strategy, Settings};

pub const CSV_HEADER: [&str; 10] = [
    "axis",
    "axis_value",
    "curve",
    "error_prob",
    "threshold_db",
    "n_sc",
    "feasible",
    "mc_estimate",
    "mc_std_error",
    "seed",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    MeanSnrDb,
    Antennas,
    LatencyU,
}

impl Axis {
    pub fn parse(v: &str) -> Result<Self, String> {
        match v {
            "mean_snr_db" => Ok(Axis::MeanSnrDb),
            "antennas" => Ok(Axis::Antennas),
            "latency_u" => Ok(Axis::LatencyU),
            _ => Err(format!(
                "unknown axis `{v}` (expected mean_snr_db, antennas or latency_u)"
            )),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::MeanSnrDb => "mean_snr_db",
            Axis::Antennas => "antennas",
            Axis::LatencyU => "latency_u",
        }
    }

    fn integral(self) -> bool {
        !matches!(self, Axis::MeanSnrDb)
    }

    fn apply(self, mut p: Point, value: f64) -> Point {
        match self {
            Axis::MeanSnrDb => p.mean_snr_db = value,
            Axis::Antennas => p.antennas = value as u32,
            Axis::LatencyU => p.u = value as u32,
        }
        p
    }

    fn format(self, value: f64) -> String {
        if self.integral() {
            format!("{}", value as u64)
        } else {
            sci(value)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveKind {
    Scheme(Scheme),
    AsymptoticBound,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub id: String,
    pub kind: CurveKind,
}

impl Curve {
    /// `sc`, `asymptotic-bound`, or `ssc-` followed by a strategy, with
    /// `fa-min`, `fa-mean` and `fa-max` as shorthands for `fa:min` etc.
    pub fn parse(id: &str) -> Result<Self, String> {
        let kind = match id {
            "sc" => CurveKind::Scheme(Scheme::Sc),
            "asymptotic-bound" => CurveKind::AsymptoticBound,
            _ => {
                let rest = id
                    .strip_prefix("ssc-")
                    .ok_or_else(|| format!("unknown curve `{id}`"))?;
                let rest = match rest.strip_prefix("fa-") {
                    Some(l) => format!("fa:{l}"),
                    None => rest.to_string(),
                };
                CurveKind::Scheme(Scheme::Ssc(parse_strategy(&rest)?))
            }
        };
        Ok(Curve {
            id: id.to_string(),
            kind,
        })
    }
}

pub fn parse_curves(v: &str) -> Result<Vec<Curve>, String> {
    let curves = v
        .split(',')
        .map(|c| Curve::parse(c.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    if curves.is_empty() {
        return Err("no curves given".into());
    }
    Ok(curves)
}

/// `start:stop:step` (inclusive) or a comma-separated list.
pub fn parse_values(v: &str) -> Result<Vec<f64>, String> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| format!("invalid number `{s}` in `{v}`"))
    };
    let parts: Vec<&str> = v.split(':').collect();
    let values = match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if !(step > 0.0) || stop < start {
                return Err(format!("range `{v}` needs step > 0 and stop >= start"));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            (0..count).map(|i| start + i as f64 * step).collect()
        }
        [_] => v.split(',').map(num).collect::<Result<Vec<_>, _>>()?,
        _ => {
            return Err(format!(
                "expected start:stop:step or a comma list, got `{v}`"
            ))
        }
    };
    if values.is_empty() {
        return Err("no values given".into());
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(format!("values must be strictly increasing: `{v}`"));
    }
    Ok(values)
}

/// One fully specified configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub k: u32,
    pub m: f64,
    pub mean_snr_db: f64,
    pub antennas: u32,
    pub u: u32,
    pub p: u32,
    pub q: u32,
    pub d: u32,
}

/// Fixed parameters shared by a family of curves; `suffix` is appended to
/// every curve id of the family.
#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    pub suffix: String,
    pub fixed: Point,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub values: Vec<f64>,
    pub groups: Vec<Group>,
    pub curves: Vec<Curve>,
    pub mc_samples: Option<u64>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub error_prob: f64,
    pub threshold: Option<f64>,
    pub mc: Option<McEstimate>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis_value: f64,
    pub curve: String,
    pub n_sc: i64,
    /// `None` when the budget is infeasible.
    pub outcome: Option<Outcome>,
}

impl SweepSpec {
    /// Generic sweep from flags and config; every fixed parameter except the
    /// swept one is required.
    pub fn from_settings(s: &Settings) -> CliResult<Self> {
        let axis = s
            .axis
            .ok_or_else(|| CliError::Usage("missing required parameter --axis".into()))?;
        let values = s
            .values
            .clone()
            .ok_or_else(|| CliError::Usage("missing required parameter --values".into()))?;
        let curves = match &s.curves {
            Some(c) => c.clone(),
            None => parse_curves("sc,ssc-opt").map_err(CliError::Usage)?,
        };
        let fixed = Point {
            k: s.k_bits()?,
            m: s.nakagami_m()?,
            mean_snr_db: if axis == Axis::MeanSnrDb {
                0.0
            } else {
                s.mean_snr_db()?
            },
            antennas: if axis == Axis::Antennas {
                0
            } else {
                s.antennas()?
            },
            u: if axis == Axis::LatencyU { 0 } else { s.u()? },
            p: s.p(),
            q: s.q(),
            d: s.d(),
        };
        let spec = SweepSpec {
            axis,
            values,
            groups: vec![Group {
                suffix: String::new(),
                fixed,
            }],
            curves,
            mc_samples: s.mc_samples,
            seed: s.seed(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.values.is_empty() || self.values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Usage(
                "sweep values must be nonempty and strictly increasing".into(),
            ));
        }
        if self.axis.integral() {
            if let Some(v) = self
                .values
                .iter()
                .find(|&&v| v.fract() != 0.0 || v < 1.0 || v > u32::MAX as f64)
            {
                return Err(CliError::Usage(format!(
                    "{} values must be positive integers, got {v}",
                    self.axis.name()
                )));
            }
        }
        if self.curves.is_empty() || self.groups.is_empty() {
            return Err(CliError::Usage("sweep needs at least one curve".into()));
        }
        Ok(())
    }

    /// Evaluates every (value, group, curve) cell, in parallel, returning
    /// rows in axis-major, curve-minor order.
    pub fn run(&self) -> CliResult<Vec<SweepRow>> {
        self.validate()?;
        let mc = self
            .mc_samples
            .map(|n| McConfig::new(n, self.seed))
            .transpose()?;
        let cells: Vec<(f64, &Group, &Curve)> = self
            .values
            .iter()
            .flat_map(|&v| {
                self.groups
                    .iter()
                    .flat_map(move |g| self.curves.iter().map(move |c| (v, g, c)))
            })
            .collect();
        cells
            .into_par_iter()
            .map(|(v, g, c)| {
                let point = self.axis.apply(g.fixed, v);
                Ok(SweepRow {
                    axis_value: v,
                    curve: format!("{}{}", c.id, g.suffix),
                    n_sc: point.u as i64 - ((point.p + point.q) as i64 * point.antennas as i64),
                    outcome: evaluate_cell(&point, c.kind, mc.as_ref())?,
                })
            })
            .collect()
    }

    pub fn write_csv<W: Write>(&self, rows: &[SweepRow], out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for row in rows {
            let (error, threshold, mc_est, mc_se, seed, feasible) = match &row.outcome {
                None => (
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    "false",
                ),
                Some(o) => {
                    let (est, se, seed) = match &o.mc {
                        Some(mc) => (sci(mc.error_rate), sci(mc.std_error), mc.seed.to_string()),
                        None => (String::new(), String::new(), String::new()),
                    };
                    (
                        sci(o.error_prob),
                        o.threshold.map(threshold_db).unwrap_or_default(),
                        est,
                        se,
                        seed,
                        "true",
                    )
                }
            };
            w.write_record([
                self.axis.name(),
                &self.axis.format(row.axis_value),
                &row.curve,
                &error,
                &threshold,
                &row.n_sc.to_string(),
                feasible,
                &mc_est,
                &mc_se,
                &seed,
            ])?;
        }
        w.flush()
    }
}

fn evaluate_cell(p: &Point, kind: CurveKind, mc: Option<&McConfig>) -> CliResult<Option<Outcome>> {
    let ch = ChannelModel::from_db(p.m, p.mean_snr_db)?;
    let b = ProtocolBudget::new(p.u, p.p, p.q, p.d, p.antennas, p.k)?;
    if !b.feasible() {
        return Ok(None);
    }
    let outcome = match kind {
        CurveKind::AsymptoticBound => Outcome {
            error_prob: asymptotic_bound(&ch, &b),
            threshold: None,
            mc: None,
        },
        CurveKind::Scheme(s) => {
            let eval = evaluate(&ch, &b, &s)?;
            let mc = match (mc, s) {
                (None, _) => None,
                (Some(cfg), Scheme::Sc) => Some(simulate_sc(&ch, &b, cfg)?),
                (Some(cfg), Scheme::Ssc(_)) => {
                    Some(simulate_ssc(&ch, &b, eval.threshold_used, cfg)?)
                }
            };
            Outcome {
                error_prob: eval.error_prob,
                threshold: Some(eval.threshold_used),
                mc,
            }
        }
    };
    Ok(Some(outcome))
}

/// Nine significant digits in scientific notation.
pub fn sci(x: f64) -> String {
    format!("{x:.8e}")
}

pub fn threshold_db(g0: f64) -> String {
    if g0.is_infinite() {
        "inf".into()
    } else if g0 == 0.0 {
        "-inf".into()
    } else {
        sci(divcomb::linear_to_db(g0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    Fig1,
    Fig2,
    Fig3,
}

const FIG_K: u32 = 256;

fn reference_point() -> Point {
    Point {
        k: FIG_K,
        m: 2.0,
        mean_snr_db: 12.0,
        antennas: 6,
        u: 200,
        p: 4,
        q: 16,
        d: 24,
    }
}

fn curves(ids: &[&str]) -> Vec<Curve> {
    ids.iter()
        .map(|id| Curve::parse(id).expect("preset curve ids parse"))
        .collect()
}

impl Preset {
    pub fn spec(self, mc_samples: Option<u64>, seed: u64) -> SweepSpec {
        let base = reference_point();
        let (axis, values, groups, curves) = match self {
            Preset::Fig1 => (
                Axis::MeanSnrDb,
                (4..=20).map(f64::from).collect(),
                vec![Group {
                    suffix: String::new(),
                    fixed: base,
                }],
                curves(&[
                    "sc",
                    "ssc-opt",
                    "ssc-naive",
                    "ssc-fa-min",
                    "ssc-fa-mean",
                    "ssc-fa-max",
                    "asymptotic-bound",
                ]),
            ),
            Preset::Fig2 => (
                Axis::Antennas,
                (2..=10).map(f64::from).collect(),
                [1.0, 4.0]
                    .into_iter()
                    .map(|m| Group {
                        suffix: format!("@m={m}"),
                        fixed: Point { m, ..base },
                    })
                    .collect(),
                curves(&["sc", "ssc-opt", "ssc-fa-max"]),
            ),
            Preset::Fig3 => (
                Axis::LatencyU,
                (100..=400).step_by(10).map(f64::from).collect(),
                [(4, 16, 24), (2, 8, 12)]
                    .into_iter()
                    .map(|(p, q, d)| Group {
                        suffix: format!("@pqd={p}/{q}/{d}"),
                        fixed: Point { p, q, d, ..base },
                    })
                    .collect(),
                curves(&["sc", "ssc-opt", "ssc-fa-max"]),
            ),
        };
        SweepSpec {
            axis,
            values,
            groups,
            curves,
            mc_samples,
            seed,
        }
    }
}
