//! Exact coefficients of `Zon_d` and of its parameter-marked variants.
//!
//! The table is dense over the box `[0, n_1] x ... x [0, n_d]`. Multiplying by
//! `1 / (1 - x^v)` is an in-place cumulative pass `T[e] += T[e - v]` in
//! increasing (row-major) index order; every sign class of `v` is its own
//! factor, so a vector of weight `w` gets `w` passes.

use std::mem::size_of;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::primitives::{self, enumerate_primitive, PrimVec, SignClass};
use crate::{Error, Result};

/// Environment variable overriding [`DpOptions::memory_limit_bytes`].
pub const MEMORY_LIMIT_ENV: &str = "ZONOTOPE_MEMORY_LIMIT";

const DEFAULT_MEMORY_LIMIT: u64 = 2 << 30;

/// Node budget of [`brute_force_count`].
pub const BRUTE_FORCE_NODE_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpOptions {
    pub memory_limit_bytes: u64,
}

impl Default for DpOptions {
    fn default() -> Self {
        DpOptions {
            memory_limit_bytes: DEFAULT_MEMORY_LIMIT,
        }
    }
}

impl DpOptions {
    /// Default options, with the memory limit taken from
    /// [`MEMORY_LIMIT_ENV`] when it is set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(MEMORY_LIMIT_ENV) {
            Ok(s) => {
                let memory_limit_bytes = s.trim().parse().map_err(|_| {
                    Error::InvalidArgument(format!("{MEMORY_LIMIT_ENV}={s:?} is not a byte count"))
                })?;
                Ok(DpOptions { memory_limit_bytes })
            }
            Err(_) => Ok(DpOptions::default()),
        }
    }
}

fn validate(dim: usize, bound: &[u32]) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidDimension { dim, min: 1 });
    }
    if bound.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: bound.len(),
        });
    }
    Ok(())
}

/// Rough footprint of `tables` dense tables over `bound`, sized from the
/// leading growth `ln z <= 2 (d + 1) n^(d/(d+1))`.
pub fn estimate_footprint(dim: usize, bound: &[u32], tables: u32) -> u128 {
    let cells: u128 = bound.iter().map(|&b| b as u128 + 1).product();
    let n = bound.iter().copied().max().unwrap_or(0) as f64;
    let d = dim as f64;
    let bits = 2.0 * (d + 1.0) * n.powf(d / (d + 1.0)) / std::f64::consts::LN_2 + 64.0;
    let limbs = (bits / 64.0).ceil() as u128;
    cells * tables as u128 * (size_of::<BigUint>() as u128 + 8 * limbs)
}

fn check_budget(dim: usize, bound: &[u32], tables: u32, opts: &DpOptions) -> Result<()> {
    let estimated = estimate_footprint(dim, bound, tables);
    if estimated > opts.memory_limit_bytes as u128 {
        return Err(Error::MemoryBudget {
            estimated,
            limit: opts.memory_limit_bytes,
        });
    }
    Ok(())
}

/// Dense table of nonnegative big integers indexed by exponent vectors `e <= bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffTable {
    dim: usize,
    bound: Vec<u32>,
    strides: Vec<usize>,
    cells: Vec<BigUint>,
}

/// Visits the flat indices of the sub-box `lo..=hi` in increasing order.
fn for_each_in_subbox(lo: &[u32], hi: &[u32], strides: &[usize], mut f: impl FnMut(usize)) {
    if lo.iter().zip(hi).any(|(l, h)| l > h) {
        return;
    }
    let dim = lo.len();
    let mut idx = lo.to_vec();
    let mut flat: usize = lo.iter().zip(strides).map(|(&c, &s)| c as usize * s).sum();
    loop {
        f(flat);
        let mut i = dim;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < hi[i] {
                idx[i] += 1;
                flat += strides[i];
                break;
            }
            flat -= (idx[i] - lo[i]) as usize * strides[i];
            idx[i] = lo[i];
        }
    }
}

impl CoeffTable {
    pub fn zeros(dim: usize, bound: &[u32]) -> Result<Self> {
        validate(dim, bound)?;
        let mut strides = vec![1usize; dim];
        for i in (0..dim.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1]
                .checked_mul(bound[i + 1] as usize + 1)
                .ok_or_else(|| Error::InvalidArgument("table too large".into()))?;
        }
        let len = strides[0]
            .checked_mul(bound[0] as usize + 1)
            .ok_or_else(|| Error::InvalidArgument("table too large".into()))?;
        Ok(CoeffTable {
            dim,
            bound: bound.to_vec(),
            strides,
            cells: vec![BigUint::zero(); len],
        })
    }

    /// The series `1`: a single one at the origin.
    pub fn delta(dim: usize, bound: &[u32]) -> Result<Self> {
        let mut t = Self::zeros(dim, bound)?;
        t.cells[0] = BigUint::one();
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bound(&self) -> &[u32] {
        &self.bound
    }

    pub fn cells(&self) -> &[BigUint] {
        &self.cells
    }

    fn flat(&self, e: &[u32]) -> Option<usize> {
        if e.len() != self.dim || e.iter().zip(&self.bound).any(|(a, b)| a > b) {
            return None;
        }
        Some(
            e.iter()
                .zip(&self.strides)
                .map(|(&c, &s)| c as usize * s)
                .sum(),
        )
    }

    pub fn get(&self, e: &[u32]) -> Option<&BigUint> {
        self.flat(e).map(|i| &self.cells[i])
    }

    fn offset(&self, v: &[u32]) -> usize {
        v.iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c as usize * s)
            .sum()
    }

    fn fits(&self, v: &[u32]) -> bool {
        v.len() == self.dim && v.iter().zip(&self.bound).all(|(a, b)| a <= b)
    }

    /// Multiplies the series by `1 / (1 - x^v)`.
    pub fn cumulative_pass(&mut self, v: &[u32]) {
        assert_eq!(v.len(), self.dim);
        if !self.fits(v) {
            return;
        }
        let off = self.offset(v);
        if off == 0 {
            return;
        }
        let cells = &mut self.cells;
        for_each_in_subbox(v, &self.bound, &self.strides, |i| {
            let (lo, hi) = cells.split_at_mut(i);
            hi[0] += &lo[i - off];
        });
    }

    /// `self += x^v * other`, truncated to the box.
    pub fn add_shifted(&mut self, other: &CoeffTable, v: &[u32], times: u32) {
        assert_eq!(self.bound, other.bound);
        if !self.fits(v) {
            return;
        }
        let off = self.offset(v);
        let cells = &mut self.cells;
        for_each_in_subbox(v, &self.bound, &self.strides, |i| {
            let src = &other.cells[i - off];
            if src.is_zero() {
                return;
            }
            if times == 1 {
                cells[i] += src;
            } else {
                cells[i] += src * times;
            }
        });
    }

    /// Sum of every cell.
    pub fn total(&self) -> BigUint {
        self.cells.iter().sum()
    }

    pub fn to_checkpoint(&self) -> Checkpoint {
        Checkpoint {
            format: CHECKPOINT_FORMAT.to_string(),
            version: CHECKPOINT_VERSION,
            dim: self.dim,
            bound: self.bound.clone(),
            cells: self.cells.clone(),
        }
    }

    pub fn from_checkpoint(c: Checkpoint) -> Result<Self> {
        if c.format != CHECKPOINT_FORMAT {
            return Err(Error::Checkpoint(format!("unknown format {:?}", c.format)));
        }
        if c.version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!(
                "unsupported version {}",
                c.version
            )));
        }
        let mut t = CoeffTable::zeros(c.dim, &c.bound)?;
        if c.cells.len() != t.cells.len() {
            return Err(Error::Checkpoint(format!(
                "expected {} cells, found {}",
                t.cells.len(),
                c.cells.len()
            )));
        }
        t.cells = c.cells;
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_checkpoint()).expect("checkpoint serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: Checkpoint =
            serde_json::from_str(s).map_err(|e| Error::Checkpoint(e.to_string()))?;
        Self::from_checkpoint(c)
    }
}

pub const CHECKPOINT_FORMAT: &str = "zonotope-coeff-table";
pub const CHECKPOINT_VERSION: u32 = 1;

/// On-disk form of a [`CoeffTable`]; cells are decimal strings in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: String,
    pub version: u32,
    pub dim: usize,
    pub bound: Vec<u32>,
    #[serde(with = "crate::ratio_serde::biguint_vec")]
    pub cells: Vec<BigUint>,
}

/// Natural logarithm of a big integer (`-inf` for zero).
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().map_or(f64::NAN, f64::ln);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Coefficients of `Zon_d` at every exponent `e <= bound`.
pub fn zon_table(dim: usize, bound: &[u32], opts: &DpOptions) -> Result<CoeffTable> {
    validate(dim, bound)?;
    check_budget(dim, bound, 1, opts)?;
    let mut table = CoeffTable::delta(dim, bound)?;
    for v in enumerate_primitive(dim, bound)? {
        for _ in 0..v.weight() {
            table.cumulative_pass(v.coords());
        }
    }
    Ok(table)
}

/// `[x^n] Zon_d(x)`: the number of lattice zonotopes whose folded generators sum to `n`.
pub fn zon_coefficient(dim: usize, n: &[u32], opts: &DpOptions) -> Result<BigUint> {
    let table = zon_table(dim, n, opts)?;
    Ok(table.get(n).expect("n is the table corner").clone())
}

/// Sum of `[x^m] Zon_d` over all `m <= n * 1`.
pub fn zon_cumulative(dim: usize, n: u32, opts: &DpOptions) -> Result<BigUint> {
    Ok(zon_table(dim, &vec![n; dim], opts)?.total())
}

/// Count together with first and second moment sums of an integer parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentPair {
    #[serde(with = "crate::ratio_serde::biguint")]
    pub count: BigUint,
    #[serde(with = "crate::ratio_serde::biguint")]
    pub weighted: BigUint,
    #[serde(with = "crate::ratio_serde::biguint")]
    pub weighted2: BigUint,
}

impl MomentPair {
    pub fn mean(&self) -> Option<BigRational> {
        if self.count.is_zero() {
            return None;
        }
        Some(BigRational::new(
            self.weighted.clone().into(),
            self.count.clone().into(),
        ))
    }

    pub fn variance(&self) -> Option<BigRational> {
        let mean = self.mean()?;
        let second = BigRational::new(self.weighted2.clone().into(), self.count.clone().into());
        Some(second - &mean * &mean)
    }
}

/// Number of distinct generator directions (the graph diameter), summed over
/// all zonotopes counted at `bound`, with its square.
///
/// Tracks `Z`, `U = u d/du Z_gen` and `V = (u d/du)^2 Z_gen` at `u = 1`; a sign
/// class contributes the factor `1 + u x^v / (1 - x^v)`.
pub fn diameter_moments(dim: usize, bound: &[u32], opts: &DpOptions) -> Result<MomentPair> {
    validate(dim, bound)?;
    check_budget(dim, bound, 3, opts)?;
    let mut z = CoeffTable::delta(dim, bound)?;
    let mut u = CoeffTable::zeros(dim, bound)?;
    let mut w = CoeffTable::zeros(dim, bound)?;
    for v in enumerate_primitive(dim, bound)? {
        let v = v.coords();
        for _ in 0..primitives::PrimVec::new(v.to_vec())?.weight() {
            z.cumulative_pass(v);
            u.cumulative_pass(v);
            w.cumulative_pass(v);
            w.add_shifted(&u, v, 2);
            w.add_shifted(&z, v, 1);
            u.add_shifted(&z, v, 1);
        }
    }
    Ok(MomentPair {
        count: z.get(bound).unwrap().clone(),
        weighted: u.get(bound).unwrap().clone(),
        weighted2: w.get(bound).unwrap().clone(),
    })
}

/// Exact mean diameter of the zonotopes counted by `[x^(n 1)] Zon_d`.
pub fn diameter_moment(dim: usize, n: u32, opts: &DpOptions) -> Result<BigRational> {
    diameter_moments(dim, &vec![n; dim], opts)?
        .mean()
        .ok_or_else(|| Error::InvalidArgument("no zonotope at this corner".into()))
}

/// Multiplicity `omega` of one sign class, summed (and squared) over all
/// zonotopes counted at `bound`.
///
/// All other factors are multiplied in; the marked class `sum_k u^k x^(k v0)`
/// is then read off along the line `bound - k v0`.
pub fn occurrence_moments(
    dim: usize,
    bound: &[u32],
    class: &SignClass,
    opts: &DpOptions,
) -> Result<MomentPair> {
    validate(dim, bound)?;
    let v0 = class.vector.coords();
    if v0.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: v0.len(),
        });
    }
    if v0.iter().zip(bound).any(|(a, b)| a > b) {
        return Err(Error::InvalidArgument(format!(
            "generator {v0:?} exceeds the box {bound:?}"
        )));
    }
    check_budget(dim, bound, 1, opts)?;
    let mut table = CoeffTable::delta(dim, bound)?;
    for v in enumerate_primitive(dim, bound)? {
        let passes = if v == class.vector {
            v.weight() - 1
        } else {
            v.weight()
        };
        for _ in 0..passes {
            table.cumulative_pass(v.coords());
        }
    }
    let mut pair = MomentPair {
        count: BigUint::zero(),
        weighted: BigUint::zero(),
        weighted2: BigUint::zero(),
    };
    let mut rest = bound.to_vec();
    let mut k = 0u64;
    loop {
        let cell = table.get(&rest).unwrap();
        pair.count += cell;
        pair.weighted += cell * k;
        pair.weighted2 += cell * (k * k);
        if rest.iter().zip(v0).any(|(r, v)| r < v) {
            break;
        }
        for (r, v) in rest.iter_mut().zip(v0) {
            *r -= v;
        }
        k += 1;
    }
    Ok(pair)
}

/// Tallies of one sign class in [`BruteForceTally`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassTally {
    pub class: SignClass,
    pub sum: BigUint,
    pub sum_sq: BigUint,
}

/// Result of the depth-first enumeration oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceTally {
    pub count: BigUint,
    pub direction_sum: BigUint,
    pub direction_sq_sum: BigUint,
    /// One entry per sign class of every primitive vector `<= bound`, in
    /// lexicographic vector order then pattern order.
    pub occurrences: Vec<ClassTally>,
    pub nodes: u64,
}

impl BruteForceTally {
    pub fn diameter(&self) -> MomentPair {
        MomentPair {
            count: self.count.clone(),
            weighted: self.direction_sum.clone(),
            weighted2: self.direction_sq_sum.clone(),
        }
    }

    pub fn occurrence(&self, class: &SignClass) -> Option<MomentPair> {
        self.occurrences
            .iter()
            .find(|t| &t.class == class)
            .map(|t| MomentPair {
                count: self.count.clone(),
                weighted: t.sum.clone(),
                weighted2: t.sum_sq.clone(),
            })
    }
}

struct Dfs<'a> {
    // (folded vector, index into the tally list) for the non-unit classes
    free: &'a [(Vec<u32>, usize)],
    // tally index of the unit class e_j
    unit_slot: Vec<Option<usize>>,
    remaining: Vec<u32>,
    used: Vec<(usize, u32)>,
    nodes: u64,
    limit: u64,
    count: u128,
    dir_sum: u128,
    dir_sq: u128,
    occ: Vec<(u128, u128)>,
}

impl Dfs<'_> {
    fn visit(&mut self, i: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::EnumerationGuard { limit: self.limit });
        }
        if i == self.free.len() {
            self.leaf();
            return Ok(());
        }
        self.visit(i + 1)?;
        let (v, slot) = &self.free[i];
        let mut k = 0u32;
        while self.remaining.iter().zip(v).all(|(r, c)| r >= c) {
            for (r, c) in self.remaining.iter_mut().zip(v) {
                *r -= c;
            }
            k += 1;
            self.used.push((*slot, k));
            let res = self.visit(i + 1);
            self.used.pop();
            res?;
        }
        for (r, c) in self.remaining.iter_mut().zip(v) {
            *r += c * k;
        }
        Ok(())
    }

    // The remainder is filled uniquely by unit vectors.
    fn leaf(&mut self) {
        let mut dirs = self.used.len() as u128;
        for (j, &r) in self.remaining.iter().enumerate() {
            if r > 0 {
                dirs += 1;
                let slot = self.unit_slot[j].expect("unit vector fits in a nonempty box side");
                let r = r as u128;
                self.occ[slot].0 += r;
                self.occ[slot].1 += r * r;
            }
        }
        for &(slot, k) in &self.used {
            let k = k as u128;
            self.occ[slot].0 += k;
            self.occ[slot].1 += k * k;
        }
        self.count += 1;
        self.dir_sum += dirs;
        self.dir_sq += dirs * dirs;
    }
}

/// Enumerates every multiset of signed primitive generators whose folded sum
/// is exactly `bound`. Refuses instances above [`BRUTE_FORCE_NODE_LIMIT`] nodes.
pub fn brute_force_count(dim: usize, bound: &[u32]) -> Result<BruteForceTally> {
    brute_force_count_limited(dim, bound, BRUTE_FORCE_NODE_LIMIT)
}

pub fn brute_force_count_limited(dim: usize, bound: &[u32], limit: u64) -> Result<BruteForceTally> {
    validate(dim, bound)?;
    let classes: Vec<SignClass> = enumerate_primitive(dim, bound)?
        .flat_map(|v: PrimVec| v.sign_classes().collect::<Vec<_>>())
        .collect();
    let mut free = Vec::new();
    let mut unit_slot = vec![None; dim];
    for (slot, c) in classes.iter().enumerate() {
        if c.vector.is_unit() {
            let j = c.vector.coords().iter().position(|&x| x > 0).unwrap();
            unit_slot[j] = Some(slot);
        } else {
            free.push((c.vector.coords().to_vec(), slot));
        }
    }
    let mut dfs = Dfs {
        free: &free,
        unit_slot,
        remaining: bound.to_vec(),
        used: Vec::new(),
        nodes: 0,
        limit,
        count: 0,
        dir_sum: 0,
        dir_sq: 0,
        occ: vec![(0, 0); classes.len()],
    };
    dfs.visit(0)?;
    let occurrences = classes
        .into_iter()
        .zip(&dfs.occ)
        .map(|(class, &(s, s2))| ClassTally {
            class,
            sum: s.into(),
            sum_sq: s2.into(),
        })
        .collect();
    Ok(BruteForceTally {
        count: dfs.count.into(),
        direction_sum: dfs.dir_sum.into(),
        direction_sq_sum: dfs.dir_sq.into(),
        occurrences,
        nodes: dfs.nodes,
    })
}
