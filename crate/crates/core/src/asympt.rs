//! Closed-form saddle-point estimate of `z_d(n) = [x^(n 1)] Zon_d`.
//!
//! ```text
//! z_d(n) ~ alpha_d n^beta_d exp(Q_d(n^(1/(d+1))) + I_crit,d((kappa_d/n)^(1/(d+1))))
//! ```
//!
//! The same estimate is also assembled a second way, from the expansion of
//! `ln Zon_d(e^-theta)` at the saddle point and the Gaussian prefactor
//! `sqrt((2 pi)^d det B)`; the two routes must agree and are diffed in tests.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::primitives::PrimVec;
use crate::special::{
    gamma_complex, zeta_complex, zeta_deriv_neg_int, zeta_neg_int, zeta_real, ZetaZero,
};
use crate::{Error, Result};

/// Polynomial with exact rational coefficients, `coeffs[i]` multiplying `X^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `X^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let show_coeff = i == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}X", if show_coeff { " " } else { "" })?,
                _ => write!(f, "{}X^{i}", if show_coeff { " " } else { "" })?,
            }
        }
        Ok(())
    }
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn check_dim(d: usize, min: usize) -> Result<()> {
    if d < min {
        return Err(Error::InvalidDimension { dim: d, min });
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `P_d(X) = sum_{delta=1}^{d} C(d, delta) 2^(delta-1) prod_{k<delta}(X - k) / (delta-1)!`.
///
/// `P_d(m)` is the number of signed directions (modulo global sign) whose
/// fold has l1-norm `m`, so `sum_m P_d(m) m^-s = Pi_d[zeta](s)`.
pub fn pd_poly(d: usize) -> Result<RationalPoly> {
    check_dim(d, 1)?;
    // Integer numerators over the common denominator (d-1)!.
    let mut num = vec![BigInt::zero(); d];
    // prod_{k<delta} (X - k), lowest degree first
    let mut falling = vec![BigInt::one()];
    // (d-1)! / (delta-1)!
    let mut cofactor: BigInt = (1..d).product();
    for delta in 1..=d {
        if delta > 1 {
            let k = BigInt::from(delta - 1);
            let mut next = vec![BigInt::zero(); falling.len() + 1];
            for (i, c) in falling.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * &k;
            }
            falling = next;
            cofactor /= delta - 1;
        }
        let weight = (binomial(d, delta) << (delta - 1)) * &cofactor;
        for (n, c) in num.iter_mut().zip(&falling) {
            *n += c * &weight;
        }
    }
    let denom: BigInt = (1..d).product();
    Ok(RationalPoly::new(
        num.into_iter()
            .map(|n| BigRational::new(n, denom.clone()))
            .collect(),
    ))
}

/// `Pi_d[f](s) = sum_delta p_{d,delta} f(s - delta)`.
pub fn pi_d_apply<F>(d: usize, mut f: F, s: Complex64) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let p = pd_poly(d)?;
    let mut acc = Complex64::from(0.0);
    for (delta, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        acc += c.to_f64().expect("finite") * f(s - delta as f64)?;
    }
    Ok(acc)
}

/// Exact `Pi_d[zeta](0) = sum_delta p_{d,delta} zeta(-delta)`.
pub fn pi_d_zeta_at_zero(d: usize) -> Result<BigRational> {
    let p = pd_poly(d)?;
    let mut acc = BigRational::zero();
    for (delta, c) in p.coeffs().iter().enumerate() {
        acc += c * zeta_neg_int(delta as u32)?;
    }
    Ok(acc)
}

/// `kappa_d = 2^(d-1) zeta(d+1) / zeta(d)`.
pub fn kappa(d: usize) -> Result<f64> {
    check_dim(d, 2)?;
    Ok(2f64.powi(d as i32 - 1) * zeta_real(d as f64 + 1.0)? / zeta_real(d as f64)?)
}

/// Saddle point of `Zon_d` for a box `n` with its leading-order moments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaddleData {
    pub theta: Vec<f64>,
    /// `kappa / (theta_i prod theta)`, the leading expected endpoint.
    pub a_leading: Vec<f64>,
    /// Determinant of the leading covariance `(1 + [i=j]) kappa / (theta_i theta_j prod theta)`.
    pub detb_leading: f64,
}

impl SaddleData {
    /// The leading covariance matrix.
    pub fn b_leading(&self) -> DMatrix<f64> {
        let d = self.theta.len();
        let kappa = self.a_leading[0] * self.theta[0] * self.theta.iter().product::<f64>();
        let prod: f64 = self.theta.iter().product();
        DMatrix::from_fn(d, d, |i, j| {
            let diag = if i == j { 2.0 } else { 1.0 };
            diag * kappa / (self.theta[i] * self.theta[j] * prod)
        })
    }
}

/// `theta_i = kappa^(1/(d+1)) (prod n)^(1/(d+1)) / n_i`.
pub fn saddle_theta(d: usize, n: &[f64]) -> Result<SaddleData> {
    check_dim(d, 2)?;
    if n.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: n.len(),
        });
    }
    if n.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "box sides must be positive: {n:?}"
        )));
    }
    let k = kappa(d)?;
    let e = 1.0 / (d as f64 + 1.0);
    let ln_prod_n: f64 = n.iter().map(|x| x.ln()).sum();
    let common = (e * (k.ln() + ln_prod_n)).exp();
    let theta: Vec<f64> = n.iter().map(|&x| common / x).collect();
    let prod: f64 = theta.iter().product();
    let a_leading = theta.iter().map(|t| k / (t * prod)).collect();
    let mut data = SaddleData {
        theta,
        a_leading,
        detb_leading: 0.0,
    };
    data.detb_leading = data.b_leading().determinant();
    Ok(data)
}

/// One monomial of `Q_d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QTerm {
    pub degree: usize,
    pub coeff: f64,
    /// Unevaluated form, for audits against tabulated constants.
    pub symbolic: String,
}

/// Terms of `Q_d`, by strictly decreasing degree:
/// `(d+1) kappa^(1/(d+1)) X^d` plus, for `delta` in `2..d`,
/// `p_{d,delta-1} zeta(delta+1) (delta-1)! / zeta(delta) kappa^(-delta/(d+1)) X^delta`.
pub fn q_poly(d: usize) -> Result<Vec<QTerm>> {
    let k = kappa(d)?;
    let p = pd_poly(d)?;
    let d1 = d as f64 + 1.0;
    let mut terms = vec![QTerm {
        degree: d,
        coeff: d1 * k.powf(1.0 / d1),
        symbolic: format!("{} * kappa_{d}^(1/{})", d + 1, d + 1),
    }];
    let mut fact = 1.0;
    let mut fact_int: u64 = 1;
    for delta in 2..d {
        fact *= (delta - 1) as f64;
        fact_int *= (delta - 1) as u64;
        let pc = p.coeff(delta - 1);
        if pc.is_zero() {
            continue;
        }
        let coeff = pc.to_f64().unwrap() * zeta_real(delta as f64 + 1.0)? * fact
            / zeta_real(delta as f64)?
            * k.powf(-(delta as f64) / d1);
        terms.push(QTerm {
            degree: delta,
            coeff,
            symbolic: format!(
                "{pc} * {fact_int} * zeta({})/zeta({delta}) * kappa_{d}^(-{delta}/{})",
                delta + 1,
                d + 1
            ),
        });
    }
    terms.sort_by_key(|t| std::cmp::Reverse(t.degree));
    Ok(terms)
}

pub fn q_eval(terms: &[QTerm], x: f64) -> f64 {
    terms
        .iter()
        .map(|t| t.coeff * x.powi(t.degree as i32))
        .sum()
}

/// `beta_d = -(d(d+2) + 4 Pi_d[zeta](0)) / (2(d+1))`.
pub fn beta_exact(d: usize) -> Result<BigRational> {
    check_dim(d, 2)?;
    let d_i = d as i64;
    let num =
        BigRational::from_integer((d_i * (d_i + 2)).into()) + rat(4, 1) * pi_d_zeta_at_zero(d)?;
    Ok(-num / BigRational::from_integer((2 * (d_i + 1)).into()))
}

/// `2 Pi_d[ln(2 pi) zeta - zeta'](0)`.
fn log_constant(d: usize) -> Result<f64> {
    let p = pd_poly(d)?;
    let l2p = (2.0 * PI).ln();
    let mut acc = 0.0;
    for (delta, c) in p.coeffs().iter().enumerate() {
        let z = zeta_neg_int(delta as u32)?.to_f64().unwrap();
        acc += c.to_f64().unwrap() * (l2p * z - zeta_deriv_neg_int(delta as u32)?);
    }
    Ok(2.0 * acc)
}

/// `ln alpha_d`, with
/// `alpha_d = kappa^(d/(2(d+1)) + 2 Pi_d[zeta](0)/(d+1)) exp(2 Pi_d[ln(2 pi) zeta - zeta'](0))
/// / ((2 pi)^(d/2) sqrt(d+1))`.
pub fn ln_alpha(d: usize) -> Result<f64> {
    let k = kappa(d)?;
    let d1 = d as f64 + 1.0;
    let pz = pi_d_zeta_at_zero(d)?.to_f64().unwrap();
    let exponent = d as f64 / (2.0 * d1) + 2.0 * pz / d1;
    Ok(exponent * k.ln() + log_constant(d)? - 0.5 * d as f64 * (2.0 * PI).ln() - 0.5 * d1.ln())
}

/// Contribution of one zero `rho` to `I_crit`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IcritTerm {
    pub zero: ZetaZero,
    /// `Pi_d[zeta](rho) zeta(rho+1) Gamma(rho) / zeta'(rho)`.
    pub coefficient: Complex64,
}

pub fn icrit_term(d: usize, zero: &ZetaZero) -> Result<IcritTerm> {
    check_dim(d, 2)?;
    let rho = zero.rho();
    let pi = pi_d_apply(d, zeta_complex, rho)?;
    let coefficient = pi * zeta_complex(rho + 1.0)? * gamma_complex(rho)? / zero.zeta_deriv;
    Ok(IcritTerm {
        zero: *zero,
        coefficient,
    })
}

fn select_zeros(zeros: &[ZetaZero], m: usize) -> Result<&[ZetaZero]> {
    if zeros.is_empty() {
        return Err(Error::NoZeros);
    }
    if m == 0 || m > zeros.len() {
        return Err(Error::InvalidArgument(format!(
            "zero count {m} outside 1..={}",
            zeros.len()
        )));
    }
    Ok(&zeros[..m])
}

/// `I_crit,d(theta) = sum_rho 2 Re[coefficient(rho) theta^-rho]` over the first `m` zeros.
pub fn icrit_theta(d: usize, theta: f64, zeros: &[ZetaZero], m: usize) -> Result<f64> {
    if !(theta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "theta {theta} must be positive"
        )));
    }
    let mut acc = 0.0;
    for z in select_zeros(zeros, m)? {
        let term = icrit_term(d, z)?;
        acc += 2.0 * (term.coefficient * (-z.rho() * theta.ln()).exp()).re;
    }
    Ok(acc)
}

/// `I_crit,d` at the saddle point `(kappa_d / n)^(1/(d+1))`.
pub fn icrit(d: usize, n: f64, zeros: &[ZetaZero], m: usize) -> Result<f64> {
    if !(n > 0.0) {
        return Err(Error::InvalidArgument(format!("n {n} must be positive")));
    }
    let theta = (kappa(d)? / n).powf(1.0 / (d as f64 + 1.0));
    icrit_theta(d, theta, zeros, m)
}

/// The contribution of one zero written as
/// `n^exponent (A cos(f ln(s n)) + B sin(f ln(s n)))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Oscillation {
    pub a: f64,
    pub b: f64,
    pub frequency: f64,
    pub scale: f64,
    pub exponent: f64,
}

impl Oscillation {
    pub fn eval(&self, n: f64) -> f64 {
        let phase = self.frequency * (self.scale * n).ln();
        n.powf(self.exponent) * (self.a * phase.cos() + self.b * phase.sin())
    }
}

pub fn icrit_oscillation(d: usize, zero: &ZetaZero) -> Result<Oscillation> {
    let term = icrit_term(d, zero)?;
    let k = kappa(d)?;
    let d1 = d as f64 + 1.0;
    let damp = k.powf(-1.0 / (2.0 * d1));
    Ok(Oscillation {
        a: 2.0 * term.coefficient.re * damp,
        b: -2.0 * term.coefficient.im * damp,
        frequency: zero.imag / d1,
        scale: 1.0 / k,
        exponent: 1.0 / (2.0 * d1),
    })
}

/// The decomposed closed-form estimate of `ln z_d(n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsympEstimate {
    pub dim: usize,
    pub n: f64,
    pub ln_alpha: f64,
    #[serde(with = "crate::ratio_serde::ratio")]
    pub beta: BigRational,
    pub beta_ln_n: f64,
    pub q_value: f64,
    pub icrit: f64,
    pub ln_z_hat: f64,
}

pub fn estimate(d: usize, n: f64, zeros: &[ZetaZero], m: usize) -> Result<AsympEstimate> {
    check_dim(d, 2)?;
    if !(n >= 1.0) || !n.is_finite() {
        return Err(Error::InvalidArgument(format!("n {n} must be at least 1")));
    }
    let ln_alpha = ln_alpha(d)?;
    let beta = beta_exact(d)?;
    let beta_ln_n = beta.to_f64().unwrap() * n.ln();
    let q_value = q_eval(&q_poly(d)?, n.powf(1.0 / (d as f64 + 1.0)));
    let icrit = icrit(d, n, zeros, m)?;
    Ok(AsympEstimate {
        dim: d,
        n,
        ln_alpha,
        beta,
        beta_ln_n,
        q_value,
        icrit,
        ln_z_hat: ln_alpha + beta_ln_n + q_value + icrit,
    })
}

/// Expansion of `ln Zon_d(e^-theta)` for small `theta`:
/// `sum_{delta=1}^{d-1} p_{d,delta} zeta(delta+2) delta! / (zeta(delta+1) theta^(delta+1))
/// + I_crit,d(theta) + 2 Pi_d[ln(2 pi) zeta - zeta'](0) + 2 Pi_d[zeta](0) ln theta`.
pub fn ln_zon_univariate(d: usize, theta: f64, zeros: &[ZetaZero], m: usize) -> Result<f64> {
    check_dim(d, 2)?;
    let p = pd_poly(d)?;
    let mut acc = 0.0;
    let mut fact = 1.0;
    for delta in 1..d {
        fact *= delta as f64;
        acc += p.coeff(delta).to_f64().unwrap() * zeta_real(delta as f64 + 2.0)? * fact
            / (zeta_real(delta as f64 + 1.0)? * theta.powi(delta as i32 + 1));
    }
    let pz = pi_d_zeta_at_zero(d)?.to_f64().unwrap();
    Ok(acc + icrit_theta(d, theta, zeros, m)? + log_constant(d)? + 2.0 * pz * theta.ln())
}

fn moebius(limit: usize) -> Vec<i32> {
    let mut mu = vec![1i32; limit + 1];
    let mut composite = vec![false; limit + 1];
    for p in 2..=limit {
        if composite[p] {
            continue;
        }
        for m in (p..=limit).step_by(p) {
            composite[m] |= m > p;
            mu[m] = -mu[m];
        }
        if let Some(sq) = p.checked_mul(p).filter(|&s| s <= limit) {
            for m in (sq..=limit).step_by(sq) {
                mu[m] = 0;
            }
        }
    }
    mu
}

/// `ln Zon_d(e^-theta) = -sum_v 2^(d(v)-1) ln(1 - e^(-theta |v|_1))`, summed
/// directly by l1-norm shells until `theta m > 45`.
pub fn ln_zon_direct(d: usize, theta: f64) -> Result<f64> {
    check_dim(d, 1)?;
    if !(theta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "theta {theta} must be positive"
        )));
    }
    let top = (45.0 / theta).ceil() as usize;
    let p = pd_poly(d)?;
    // weighted count of all nonzero vectors per shell, then Moebius for the primitive ones
    let all: Vec<f64> = (0..=top).map(|m| p.eval_f64(m as f64)).collect();
    let mu = moebius(top);
    let mut acc = 0.0;
    for m in 1..=top {
        let mut prim = 0.0;
        let mut k = 1;
        while k * k <= m {
            if m % k == 0 {
                prim += mu[k] as f64 * all[m / k];
                let j = m / k;
                if j != k {
                    prim += mu[j] as f64 * all[k];
                }
            }
            k += 1;
        }
        acc -= prim * (-(-theta * m as f64).exp()).ln_1p();
    }
    Ok(acc)
}

/// The estimate assembled as `ln Zon_d(e^-theta) + n d theta - ln sqrt((2 pi)^d det B)`
/// at the cubic saddle point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaddleForm {
    pub theta: f64,
    pub ln_zon: f64,
    pub linear: f64,
    pub ln_det_b: f64,
    pub ln_z_hat: f64,
}

pub fn estimate_saddle_form(d: usize, n: f64, zeros: &[ZetaZero], m: usize) -> Result<SaddleForm> {
    let saddle = saddle_theta(d, &vec![n; d])?;
    let theta = saddle.theta[0];
    let ln_zon = ln_zon_univariate(d, theta, zeros, m)?;
    let linear = n * d as f64 * theta;
    let ln_det_b = saddle.detb_leading.ln();
    Ok(SaddleForm {
        theta,
        ln_zon,
        linear,
        ln_det_b,
        ln_z_hat: ln_zon + linear - 0.5 * (d as f64 * (2.0 * PI).ln() + ln_det_b),
    })
}

/// Leading mean diameter, `kappa^(1/(d+1)) / zeta(d+1) n^(d/(d+1))`.
pub fn mean_diameter_asympt(d: usize, n: f64) -> Result<f64> {
    let d1 = d as f64 + 1.0;
    Ok(kappa(d)?.powf(1.0 / d1) / zeta_real(d1)? * n.powf(d as f64 / d1))
}

/// Leading `(mean, variance)` of the multiplicity of one sign class of `v0`:
/// `(1/(theta |v0|_1), mean^2)`.
pub fn mean_occurrence_asympt(d: usize, n: f64, v0: &PrimVec) -> Result<(f64, f64)> {
    if v0.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: v0.dim(),
        });
    }
    let theta = (kappa(d)? / n).powf(1.0 / (d as f64 + 1.0));
    let mean = 1.0 / (theta * v0.l1_norm() as f64);
    Ok((mean, mean * mean))
}
