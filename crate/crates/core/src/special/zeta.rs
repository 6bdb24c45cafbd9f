use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

use super::bernoulli::{bernoulli, em_coefficients};
use super::gamma::{digamma_int, gamma_complex};
use crate::{Error, Result};

/// Largest `|Im s|` accepted by the complex routines.
pub const MAX_IMAG: f64 = 100.0;
/// Smallest `Re s` accepted by the complex routines.
pub const MIN_REAL: f64 = -5.0;

const EM_TERMS: usize = 10;
const EM_BASE: usize = 20;

fn check(function: &'static str, s: Complex64) -> Result<()> {
    if s == Complex64::one() {
        return Err(Error::Pole {
            function,
            at: "1".into(),
        });
    }
    if !s.re.is_finite() || !s.im.is_finite() || s.im.abs() > MAX_IMAG || s.re < MIN_REAL {
        return Err(Error::OutOfRange {
            function,
            at: format!("{s}"),
        });
    }
    Ok(())
}

fn cutoff(s: Complex64) -> usize {
    EM_BASE.max((1.3 * s.im.abs()).ceil() as usize)
}

/// Euler-Maclaurin: `sum_{n<N} n^-s + N^(1-s)/(s-1) + N^-s/2
/// + sum_k B_2k/(2k)! s(s+1)...(s+2k-2) N^(-s-2k+1)`.
fn em_zeta(s: Complex64, big_n: usize) -> Complex64 {
    let mut sum = Complex64::from(0.0);
    for n in 1..big_n {
        sum += (-s * (n as f64).ln()).exp();
    }
    let ln_n = (big_n as f64).ln();
    let n_pow = (-s * ln_n).exp(); // N^-s
    sum += n_pow * big_n as f64 / (s - 1.0) + 0.5 * n_pow;
    let mut rising = s; // s(s+1)...(s+2k-2)
    let mut power = n_pow / big_n as f64; // N^(-s-2k+1)
    let n2 = (big_n * big_n) as f64;
    for (k, &c) in em_coefficients().iter().take(EM_TERMS).enumerate() {
        if k > 0 {
            rising *= (s + (2 * k - 1) as f64) * (s + (2 * k) as f64);
            power /= n2;
        }
        sum += c * rising * power;
    }
    sum
}

/// Term-by-term `d/ds` of [`em_zeta`].
fn em_zeta_deriv(s: Complex64, big_n: usize) -> Complex64 {
    let mut sum = Complex64::from(0.0);
    for n in 2..big_n {
        let l = (n as f64).ln();
        sum -= l * (-s * l).exp();
    }
    let ln_n = (big_n as f64).ln();
    let n_pow = (-s * ln_n).exp();
    let n_one = n_pow * big_n as f64; // N^(1-s)
    let sm1 = s - 1.0;
    sum += n_one * (-ln_n / sm1 - 1.0 / (sm1 * sm1));
    sum -= 0.5 * ln_n * n_pow;
    let mut p = s;
    let mut dp = Complex64::one();
    let mut power = n_pow / big_n as f64;
    let n2 = (big_n * big_n) as f64;
    for (k, &c) in em_coefficients().iter().take(EM_TERMS).enumerate() {
        if k > 0 {
            for j in [2 * k - 1, 2 * k] {
                let f = s + j as f64;
                dp = dp * f + p;
                p *= f;
            }
            power /= n2;
        }
        sum += c * (dp - p * ln_n) * power;
    }
    sum
}

/// `zeta(s)` for real `s > 1`.
pub fn zeta_real(s: f64) -> Result<f64> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::OutOfRange {
            function: "zeta_real",
            at: format!("{s}"),
        });
    }
    Ok(em_zeta(Complex64::from(s), EM_BASE).re)
}

/// `zeta'(s)` for real `s > 1`.
pub fn zeta_deriv_real(s: f64) -> Result<f64> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::OutOfRange {
            function: "zeta_deriv_real",
            at: format!("{s}"),
        });
    }
    Ok(em_zeta_deriv(Complex64::from(s), EM_BASE).re)
}

/// Complex zeta by Euler-Maclaurin, for `Re s >= -5`, `|Im s| <= 100`.
///
/// Left of `Re s = -1` the direct sum loses digits to cancellation, so the
/// value is reflected through `zeta(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s)`.
pub fn zeta_complex(s: Complex64) -> Result<Complex64> {
    check("zeta", s)?;
    if s.re < -1.0 {
        let t = 1.0 - s;
        let chi =
            (s * 2f64.ln() + (s - 1.0) * PI.ln()).exp() * (0.5 * PI * s).sin() * gamma_complex(t)?;
        return Ok(chi * em_zeta(t, cutoff(t)));
    }
    Ok(em_zeta(s, cutoff(s)))
}

/// Complex `zeta'` on the same domain as [`zeta_complex`].
pub fn zeta_deriv_complex(s: Complex64) -> Result<Complex64> {
    check("zeta_deriv", s)?;
    Ok(em_zeta_deriv(s, cutoff(s)))
}

/// Exact `zeta(-k)`.
pub fn zeta_neg_int(k: u32) -> Result<BigRational> {
    if k == 0 {
        return Ok(BigRational::new((-1).into(), 2.into()));
    }
    let b = bernoulli(k as usize + 1)?;
    Ok(-b / BigRational::from_integer((k + 1).into()))
}

/// `zeta'(-k)` from the differentiated functional equation
/// `zeta(s) = A(s) S(s) zeta(1-s)`, `A = 2^s pi^(s-1) Gamma(1-s)`, `S = sin(pi s/2)`.
pub fn zeta_deriv_neg_int(k: u32) -> Result<f64> {
    if k == 0 {
        return Ok(-0.5 * (2.0 * PI).ln());
    }
    let kf = k as f64;
    let ln_fact: f64 = (1..=k).map(|j| (j as f64).ln()).sum();
    let a = (-kf * 2f64.ln() - (kf + 1.0) * PI.ln() + ln_fact).exp();
    let da = a * ((2.0 * PI).ln() - digamma_int(k + 1)?);
    // sin and cos of -pi k / 2
    let (sin, cos) = match k % 4 {
        0 => (0.0, 1.0),
        1 => (-1.0, 0.0),
        2 => (0.0, -1.0),
        _ => (1.0, 0.0),
    };
    let ds = 0.5 * PI * cos;
    let z = zeta_real(kf + 1.0)?;
    let dz = zeta_deriv_real(kf + 1.0)?;
    // zeta'(s) = chi'(s) zeta(1-s) - chi(s) zeta'(1-s)
    Ok((da * sin + a * ds) * z - a * sin * dz)
}
