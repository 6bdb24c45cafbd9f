//! Boltzmann sampler for lattice zonotopes at parameter `theta`.
//!
//! Each sign class with ratio `q = e^(-theta |v|_1)` independently receives a
//! geometric multiplicity `P(K = k) = (1 - q) q^k`, drawn by inversion
//! `K = floor(ln U / ln q)`. Classes with `q < cutoff` are skipped.
//!
//! Reproducibility: a sample is driven by `ChaCha8Rng::seed_from_u64(seed)`,
//! and the class with visit index `i` consumes exactly the `i`-th `u64` of that
//! stream (word position `2 i`), so any single class can be redrawn with
//! [`ClassTable::draw_class`]. Visit order is lexicographic in the folded
//! vector, then by sign pattern.

use num_integer::Integer;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asympt::pd_poly;
use crate::primitives::{PrimVec, SignClass};
use crate::{Error, Result};

pub const DEFAULT_CUTOFF: f64 = 1e-12;

fn check(d: usize, theta: f64, cutoff: f64) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidDimension { dim: d, min: 1 });
    }
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "theta {theta} must be positive"
        )));
    }
    if !(cutoff > 0.0 && cutoff < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "cutoff {cutoff} outside (0, 1)"
        )));
    }
    Ok(())
}

/// Largest l1-norm kept: `theta |v|_1 <= ln(1/cutoff)`.
fn max_norm(theta: f64, cutoff: f64) -> u64 {
    let x = (1.0 / cutoff).ln() / theta;
    if x >= u32::MAX as f64 {
        u32::MAX as u64
    } else {
        x.floor() as u64
    }
}

/// Primitive vectors `v >= 0` with `|v|_1 <= top`, in lexicographic order.
fn simplex_primitives(d: usize, top: u64, out: &mut Vec<PrimVec>) -> Result<()> {
    fn rec(
        prefix: &mut Vec<u32>,
        d: usize,
        left: u64,
        g: u32,
        out: &mut Vec<PrimVec>,
    ) -> Result<()> {
        if prefix.len() == d {
            if g == 1 {
                out.push(PrimVec::new(prefix.clone())?);
            }
            return Ok(());
        }
        for c in 0..=left.min(u32::MAX as u64) as u32 {
            prefix.push(c);
            rec(prefix, d, left - c as u64, g.gcd(&c), out)?;
            prefix.pop();
        }
        Ok(())
    }
    rec(&mut Vec::with_capacity(d), d, top, 0, out)
}

/// Uniform in (0, 1) from the top 53 bits.
fn unit_open(x: u64) -> f64 {
    ((x >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

fn geometric(x: u64, ln_q: f64) -> u32 {
    let k = (unit_open(x).ln() / ln_q).floor();
    if k >= u32::MAX as f64 {
        u32::MAX
    } else {
        k as u32
    }
}

/// The sign classes retained at `(theta, cutoff)`, in visit order.
#[derive(Debug, Clone)]
pub struct ClassTable {
    dim: usize,
    theta: f64,
    cutoff: f64,
    classes: Vec<SignClass>,
    ln_q: Vec<f64>,
}

impl ClassTable {
    pub fn new(d: usize, theta: f64, cutoff: f64) -> Result<Self> {
        check(d, theta, cutoff)?;
        let top = max_norm(theta, cutoff);
        let mut prims = Vec::new();
        simplex_primitives(d, top, &mut prims)?;
        let mut classes = Vec::new();
        let mut ln_q = Vec::new();
        for v in prims {
            let lq = -theta * v.l1_norm() as f64;
            for c in v.sign_classes() {
                classes.push(c);
                ln_q.push(lq);
            }
        }
        Ok(ClassTable {
            dim: d,
            theta,
            cutoff,
            classes,
            ln_q,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[SignClass] {
        &self.classes
    }

    pub fn q(&self, idx: usize) -> f64 {
        self.ln_q[idx].exp()
    }

    pub fn index_of(&self, class: &SignClass) -> Option<usize> {
        // classes are sorted by (vector, pattern)
        self.classes.binary_search(class).ok()
    }

    /// `sum_classes q`, the expected number of directions used.
    pub fn expected_directions(&self) -> f64 {
        self.ln_q.iter().map(|l| l.exp()).sum()
    }

    /// `sum_classes v q / (1 - q)`, the expected endpoint.
    pub fn expected_endpoint(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (c, &lq) in self.classes.iter().zip(&self.ln_q) {
            let m = lq.exp() / -lq.exp_m1();
            for (o, &x) in out.iter_mut().zip(c.vector.coords()) {
                *o += x as f64 * m;
            }
        }
        out
    }

    /// Multiplicity of class `idx` in the sample of `seed`.
    pub fn draw_class(&self, seed: u64, idx: usize) -> u32 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_word_pos(2 * idx as u128);
        geometric(rng.next_u64(), self.ln_q[idx])
    }

    /// Calls `f(index, multiplicity)` for every class with multiplicity >= 1.
    fn visit(&self, seed: u64, mut f: impl FnMut(usize, u32)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (i, &lq) in self.ln_q.iter().enumerate() {
            let k = geometric(rng.next_u64(), lq);
            if k > 0 {
                f(i, k);
            }
        }
    }

    pub fn sample(&self, seed: u64) -> ZonotopeSample {
        let mut entries = Vec::new();
        let mut endpoint = vec![0u64; self.dim];
        self.visit(seed, |i, k| {
            let c = &self.classes[i];
            for (e, &x) in endpoint.iter_mut().zip(c.vector.coords()) {
                *e += x as u64 * k as u64;
            }
            entries.push((c.clone(), k));
        });
        ZonotopeSample {
            dim: self.dim,
            direction_count: entries.len(),
            entries,
            endpoint,
        }
    }
}

/// A multiset of sign classes with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZonotopeSample {
    pub dim: usize,
    pub entries: Vec<(SignClass, u32)>,
    /// `sum omega(v) v` over the folded vectors.
    pub endpoint: Vec<u64>,
    pub direction_count: usize,
}

pub fn boltzmann_sample(d: usize, theta: f64, cutoff: f64, seed: u64) -> Result<ZonotopeSample> {
    Ok(ClassTable::new(d, theta, cutoff)?.sample(seed))
}

pub fn expected_directions_truncated(d: usize, theta: f64, cutoff: f64) -> Result<f64> {
    Ok(ClassTable::new(d, theta, cutoff)?.expected_directions())
}

/// Upper bound on `sum q` over the skipped classes: every class with
/// `|v|_1 = m` is counted by `P_d(m)`, so the tail is at most
/// `sum_{m > L} P_d(m) e^(-theta m)`.
pub fn discarded_mass_bound(d: usize, theta: f64, cutoff: f64) -> Result<f64> {
    check(d, theta, cutoff)?;
    let p = pd_poly(d)?;
    let mut m = max_norm(theta, cutoff) + 1;
    let mut acc = 0.0;
    loop {
        let term = p.eval_f64(m as f64) * (-theta * m as f64).exp();
        acc += term;
        if term < 1e-18 * acc.max(1e-300) || term == 0.0 {
            return Ok(acc);
        }
        m += 1;
    }
}

/// Mean, variance and standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub variance: f64,
    pub std_err: f64,
}

impl Summary {
    pub fn of(values: impl Iterator<Item = f64> + Clone) -> Summary {
        let n = values.clone().count() as f64;
        let mean = values.clone().sum::<f64>() / n;
        let variance = if n > 1.0 {
            values.map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Summary {
            mean,
            variance,
            std_err: (variance / n).sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRow {
    pub seed: u64,
    pub direction_count: usize,
    pub endpoint: Vec<u64>,
    pub tracked: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub samples: usize,
    pub direction_count: Summary,
    pub endpoint: Vec<Summary>,
    pub tracked: Vec<Summary>,
    pub rows: Vec<SampleRow>,
}

/// Draws samples `base_seed, base_seed + 1, ...` in parallel and summarizes
/// the direction count, the endpoint and the multiplicities of `tracked`.
pub fn sample_stats(
    table: &ClassTable,
    samples: usize,
    base_seed: u64,
    tracked: &[SignClass],
) -> Result<SampleStats> {
    if samples == 0 {
        return Err(Error::InvalidArgument(
            "sample count must be at least 1".into(),
        ));
    }
    if let Some(c) = tracked.iter().find(|c| c.vector.dim() != table.dim) {
        return Err(Error::DimensionMismatch {
            expected: table.dim,
            actual: c.vector.dim(),
        });
    }
    let slots: Vec<Option<usize>> = tracked.iter().map(|c| table.index_of(c)).collect();
    let rows: Vec<SampleRow> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let seed = base_seed.wrapping_add(i);
            let mut endpoint = vec![0u64; table.dim];
            let mut count = 0usize;
            let mut hits = vec![0u32; slots.len()];
            table.visit(seed, |idx, k| {
                count += 1;
                for (e, &x) in endpoint.iter_mut().zip(table.classes[idx].vector.coords()) {
                    *e += x as u64 * k as u64;
                }
                for (h, s) in hits.iter_mut().zip(&slots) {
                    if *s == Some(idx) {
                        *h = k;
                    }
                }
            });
            SampleRow {
                seed,
                direction_count: count,
                endpoint,
                tracked: hits,
            }
        })
        .collect();
    let direction_count = Summary::of(rows.iter().map(|r| r.direction_count as f64));
    let endpoint = (0..table.dim)
        .map(|j| Summary::of(rows.iter().map(move |r| r.endpoint[j] as f64)))
        .collect();
    let tracked = (0..slots.len())
        .map(|j| Summary::of(rows.iter().map(move |r| r.tracked[j] as f64)))
        .collect();
    Ok(SampleStats {
        samples,
        direction_count,
        endpoint,
        tracked,
        rows,
    })
}

/// Vertices of a planar sample, counter-clockwise from the origin.
///
/// The signed generators `omega(v) s` lie in the half-plane of angles
/// `(-pi/2, pi/2]`; walking them by increasing angle and then their negatives
/// in the same order traces the boundary.
pub fn to_polygon(sample: &ZonotopeSample) -> Result<Vec<(i64, i64)>> {
    if sample.dim != 2 {
        return Err(Error::InvalidDimension {
            dim: sample.dim,
            min: 2,
        });
    }
    let mut edges: Vec<(i64, i64)> = sample
        .entries
        .iter()
        .map(|(c, k)| {
            let s = c.signed();
            (s[0] * *k as i64, s[1] * *k as i64)
        })
        .collect();
    edges.sort_by(|a, b| (b.0 * a.1).cmp(&(a.0 * b.1)));
    let mut out = vec![(0i64, 0i64)];
    let mut p = (0i64, 0i64);
    let walk = edges
        .iter()
        .copied()
        .chain(edges.iter().map(|&(x, y)| (-x, -y)));
    let total = 2 * edges.len();
    for (i, (x, y)) in walk.enumerate() {
        p = (p.0 + x, p.1 + y);
        if i + 1 < total {
            out.push(p);
        }
    }
    Ok(out)
}
