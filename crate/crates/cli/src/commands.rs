use anyhow::{bail, Context, Result};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use zonotope_core::asympt::{
    estimate, estimate_saddle_form, icrit, icrit_oscillation, kappa, mean_diameter_asympt,
    mean_occurrence_asympt,
};
use zonotope_core::exact::{
    diameter_moments, ln_biguint, occurrence_moments, zon_cumulative, zon_table, DpOptions,
    MomentPair,
};
use zonotope_core::primitives::{PrimVec, SignClass};
use zonotope_core::sampler::{discarded_mass_bound, sample_stats, to_polygon, ClassTable, Summary};
use zonotope_core::special::{first_zero, load_zeros_file, ZetaZero};
use zonotope_core::{format_ratio, Error};

use crate::output::{emit_records, emit_table, flatten, sig15};
use crate::{
    Command, CountArgs, EstimateArgs, MomentArgs, Param, PolygonArgs, SampleArgs, SamplerParams,
};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Count(a) => cmd_count(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Moments(a) => cmd_moments(a),
        Command::Asympt(a) => cmd_asympt(a),
        Command::Icrit(a) => cmd_icrit(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Polygon(a) => cmd_polygon(a),
    }
}

fn dp_options() -> Result<DpOptions> {
    Ok(DpOptions::from_env()?)
}

fn load_zeros(args: &EstimateArgs) -> Result<Vec<ZetaZero>> {
    match &args.zeros {
        Some(path) => {
            load_zeros_file(path).with_context(|| format!("reading zeros from {}", path.display()))
        }
        None => Ok(vec![first_zero()]),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountRow {
    pub dim: usize,
    pub n: u32,
    pub mode: String,
    pub z_exact: String,
    pub ln_z: f64,
}

fn cmd_count(a: CountArgs) -> Result<()> {
    let dim = a.dim as usize;
    let ns = flatten(&a.n);
    let opts = dp_options()?;
    let mut rows = Vec::new();
    if a.cumulative {
        for &n in &ns {
            rows.push(count_row(
                dim,
                n,
                "cumulative",
                &zon_cumulative(dim, n, &opts)?,
            ));
        }
    } else {
        let top = ns.iter().copied().max().unwrap_or(0);
        let table = zon_table(dim, &vec![top; dim], &opts)?;
        for &n in &ns {
            let z = table.get(&vec![n; dim]).expect("inside the table");
            rows.push(count_row(dim, n, "coefficient", z));
        }
    }
    emit_records(&a.out, &rows)
}

fn count_row(dim: usize, n: u32, mode: &str, z: &BigUint) -> CountRow {
    CountRow {
        dim,
        n,
        mode: mode.into(),
        z_exact: z.to_string(),
        ln_z: sig15(ln_biguint(z)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub dim: usize,
    pub n: u32,
    pub z_exact: String,
    pub ln_z_exact: f64,
    pub ln_alpha: f64,
    pub beta_ln_n: f64,
    pub q: f64,
    pub icrit: f64,
    pub ln_z_hat: f64,
    pub rel_err: f64,
}

fn cmd_compare(a: EstimateArgs) -> Result<()> {
    let dim = a.dim as usize;
    if !(2..=3).contains(&dim) {
        bail!("compare supports --dim 2 or 3");
    }
    let mut ns = Vec::new();
    for &x in &a.n {
        if x < 1.0 || x.fract() != 0.0 || x > u32::MAX as f64 {
            bail!("compare needs integer sizes n >= 1, got {x}");
        }
        ns.push(x as u32);
    }
    let zeros = load_zeros(&a)?;
    let top = ns.iter().copied().max().unwrap_or(1);
    let table = zon_table(dim, &vec![top; dim], &dp_options()?)?;
    let mut rows = Vec::new();
    for &n in &ns {
        let z = table.get(&vec![n; dim]).expect("inside the table");
        let ln_z = ln_biguint(z);
        let e = estimate(dim, n as f64, &zeros, a.m as usize)?;
        rows.push(CompareRow {
            dim,
            n,
            z_exact: z.to_string(),
            ln_z_exact: sig15(ln_z),
            ln_alpha: sig15(e.ln_alpha),
            beta_ln_n: sig15(e.beta_ln_n),
            q: sig15(e.q_value),
            icrit: sig15(e.icrit),
            ln_z_hat: sig15(e.ln_z_hat),
            rel_err: sig15((ln_z - e.ln_z_hat) / ln_z),
        });
    }
    emit_records(&a.out, &rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub dim: usize,
    pub n: u32,
    pub param: String,
    pub class: Option<String>,
    pub count: String,
    pub mean: String,
    pub variance: String,
    pub mean_value: f64,
    pub variance_value: f64,
    pub asymptotic_mean: Option<f64>,
    pub asymptotic_variance: Option<f64>,
}

fn class_label(c: &SignClass) -> String {
    let v: Vec<String> = c.vector.coords().iter().map(u32::to_string).collect();
    format!("{}:{}", v.join(","), c.pattern)
}

fn ratio_f64(r: &BigRational) -> f64 {
    sig15(r.to_f64().unwrap_or(f64::NAN))
}

fn cmd_moments(a: MomentArgs) -> Result<()> {
    let dim = a.dim as usize;
    let opts = dp_options()?;
    let class = match (a.param, &a.v0) {
        (Param::Occurrence, Some(v)) => {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: v.len(),
                }
                .into());
            }
            Some(PrimVec::new(v.clone())?.sign_class(a.pattern)?)
        }
        (Param::Occurrence, None) => bail!("--param occurrence needs --v0"),
        (Param::Diameter, _) => None,
    };
    let mut rows = Vec::new();
    for n in flatten(&a.n) {
        let bound = vec![n; dim];
        let (pair, asym): (MomentPair, Option<(f64, f64)>) = match &class {
            None => {
                let asym = (dim >= 2 && n >= 1)
                    .then(|| mean_diameter_asympt(dim, n as f64).map(|m| (m, f64::NAN)))
                    .transpose()?;
                (diameter_moments(dim, &bound, &opts)?, asym)
            }
            Some(c) => {
                let asym = (dim >= 2 && n >= 1)
                    .then(|| mean_occurrence_asympt(dim, n as f64, &c.vector))
                    .transpose()?;
                (occurrence_moments(dim, &bound, c, &opts)?, asym)
            }
        };
        let mean = pair.mean().expect("count is positive");
        let variance = pair.variance().expect("count is positive");
        rows.push(MomentRow {
            dim,
            n,
            param: match a.param {
                Param::Diameter => "diameter".into(),
                Param::Occurrence => "occurrence".into(),
            },
            class: class.as_ref().map(class_label),
            count: pair.count.to_string(),
            mean: format_ratio(&mean),
            variance: format_ratio(&variance),
            mean_value: ratio_f64(&mean),
            variance_value: ratio_f64(&variance),
            asymptotic_mean: asym.map(|(m, _)| sig15(m)),
            asymptotic_variance: asym.map(|(_, v)| v).filter(|v| v.is_finite()).map(sig15),
        });
    }
    emit_records(&a.out, &rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptRow {
    pub dim: usize,
    pub n: f64,
    pub ln_alpha: f64,
    pub beta: String,
    pub beta_ln_n: f64,
    pub q_value: f64,
    pub icrit: f64,
    pub ln_z_hat: f64,
    pub saddle_ln_z_hat: f64,
    pub mean_diameter: f64,
}

fn cmd_asympt(a: EstimateArgs) -> Result<()> {
    let dim = a.dim as usize;
    let zeros = load_zeros(&a)?;
    let m = a.m as usize;
    let mut rows = Vec::new();
    for &n in &a.n {
        let e = estimate(dim, n, &zeros, m)?;
        let s = estimate_saddle_form(dim, n, &zeros, m)?;
        rows.push(AsymptRow {
            dim,
            n,
            ln_alpha: sig15(e.ln_alpha),
            beta: format_ratio(&e.beta),
            beta_ln_n: sig15(e.beta_ln_n),
            q_value: sig15(e.q_value),
            icrit: sig15(e.icrit),
            ln_z_hat: sig15(e.ln_z_hat),
            saddle_ln_z_hat: sig15(s.ln_z_hat),
            mean_diameter: sig15(mean_diameter_asympt(dim, n)?),
        });
    }
    emit_records(&a.out, &rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IcritRow {
    pub dim: usize,
    pub n: f64,
    pub m: usize,
    pub icrit: f64,
    /// Decomposition of the first zero's term.
    pub a: f64,
    pub b: f64,
    pub frequency: f64,
    pub scale: f64,
    pub exponent: f64,
}

fn cmd_icrit(a: EstimateArgs) -> Result<()> {
    let dim = a.dim as usize;
    let zeros = load_zeros(&a)?;
    let m = a.m as usize;
    let osc = icrit_oscillation(dim, &zeros[0])?;
    let mut rows = Vec::new();
    for &n in &a.n {
        rows.push(IcritRow {
            dim,
            n,
            m,
            icrit: sig15(icrit(dim, n, &zeros, m)?),
            a: sig15(osc.a),
            b: sig15(osc.b),
            frequency: sig15(osc.frequency),
            scale: sig15(osc.scale),
            exponent: sig15(osc.exponent),
        });
    }
    emit_records(&a.out, &rows)
}

fn sampler_theta(p: &SamplerParams) -> Result<f64> {
    match (p.n, p.theta) {
        (_, Some(t)) => Ok(t),
        (Some(n), None) => {
            if n.is_nan() || n <= 0.0 {
                bail!("--n must be positive");
            }
            Ok((kappa(p.dim as usize)? / n).powf(1.0 / (p.dim as f64 + 1.0)))
        }
        (None, None) => bail!("one of --n or --theta is required"),
    }
}

fn parse_track(s: &str, dim: usize) -> Result<SignClass> {
    let (v, pattern) = match s.split_once(':') {
        Some((v, p)) => (v, p.trim().parse::<u32>().context("sign pattern")?),
        None => (s, 0),
    };
    let coords = v
        .split(',')
        .map(|t| t.trim().parse::<u32>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .with_context(|| format!("tracked class {s:?}"))?;
    if coords.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: coords.len(),
        }
        .into());
    }
    Ok(PrimVec::new(coords)?.sign_class(pattern)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub dim: usize,
    pub theta: f64,
    pub cutoff: f64,
    pub samples: usize,
    pub base_seed: u64,
    pub classes: usize,
    pub expected_directions: f64,
    pub discarded_mass_bound: f64,
    pub tracked: Vec<String>,
    pub direction_count: Summary,
    pub endpoint: Vec<Summary>,
    pub tracked_summary: Vec<Summary>,
    pub rows: Vec<zonotope_core::sampler::SampleRow>,
}

fn round_summary(s: Summary) -> Summary {
    Summary {
        mean: sig15(s.mean),
        variance: sig15(s.variance),
        std_err: sig15(s.std_err),
    }
}

fn cmd_sample(a: SampleArgs) -> Result<()> {
    let dim = a.params.dim as usize;
    let theta = sampler_theta(&a.params)?;
    let table = ClassTable::new(dim, theta, a.params.cutoff)?;
    let tracked: Vec<SignClass> = a
        .track
        .iter()
        .map(|s| parse_track(s, dim))
        .collect::<Result<_>>()?;
    let stats = sample_stats(&table, a.samples as usize, a.params.seed, &tracked)?;
    let labels: Vec<String> = tracked.iter().map(class_label).collect();
    let mut header = vec!["seed".to_string(), "direction_count".to_string()];
    header.extend((1..=dim).map(|i| format!("endpoint_{i}")));
    header.extend(tracked.iter().map(|c| {
        let v: Vec<String> = c.vector.coords().iter().map(u32::to_string).collect();
        format!("omega_{}_s{}", v.join("_"), c.pattern)
    }));
    let rows: Vec<Vec<String>> = stats
        .rows
        .iter()
        .map(|r| {
            let mut row = vec![r.seed.to_string(), r.direction_count.to_string()];
            row.extend(r.endpoint.iter().map(u64::to_string));
            row.extend(r.tracked.iter().map(u32::to_string));
            row
        })
        .collect();
    let report = SampleReport {
        dim,
        theta: sig15(theta),
        cutoff: a.params.cutoff,
        samples: stats.samples,
        base_seed: a.params.seed,
        classes: table.len(),
        expected_directions: sig15(table.expected_directions()),
        discarded_mass_bound: sig15(discarded_mass_bound(dim, theta, a.params.cutoff)?),
        tracked: labels,
        direction_count: round_summary(stats.direction_count),
        endpoint: stats.endpoint.into_iter().map(round_summary).collect(),
        tracked_summary: stats.tracked.into_iter().map(round_summary).collect(),
        rows: stats.rows,
    };
    emit_table(&a.out, &report, &header, &rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub x: i64,
    pub y: i64,
}

fn cmd_polygon(a: PolygonArgs) -> Result<()> {
    if a.params.dim != 2 {
        bail!("polygon needs --dim 2");
    }
    let theta = sampler_theta(&a.params)?;
    let table = ClassTable::new(2, theta, a.params.cutoff)?;
    let sample = table.sample(a.params.seed);
    let rows: Vec<Vertex> = to_polygon(&sample)?
        .into_iter()
        .map(|(x, y)| Vertex { x, y })
        .collect();
    emit_records(&a.out, &rows)
}
