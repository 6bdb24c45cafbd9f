use std::path::Path;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::zeta::{zeta_complex, zeta_deriv_complex};
use crate::{Error, Result};

const FIRST_ZERO_GUESS: f64 = 14.1347;
const MEMBERSHIP_TOL: f64 = 1e-6;
const REFINED_TOL: f64 = 1e-8;

/// A nontrivial zero `1/2 + i t` of zeta, assumed simple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaZero {
    pub imag: f64,
    pub zeta_deriv: Complex64,
}

impl ZetaZero {
    pub fn rho(&self) -> Complex64 {
        Complex64::new(0.5, self.imag)
    }

    /// Newton iteration `s <- s - zeta(s)/zeta'(s)` started at `1/2 + i t`.
    pub fn refine(t: f64) -> Result<Self> {
        let mut s = Complex64::new(0.5, t);
        for _ in 0..60 {
            let step = zeta_complex(s)? / zeta_deriv_complex(s)?;
            s -= step;
            if step.norm() < 1e-15 * s.norm() {
                break;
            }
        }
        let fail = || Error::ZeroRefinement { t };
        if (s.re - 0.5).abs() > 1e-9 || (s.im - t).abs() > 0.5 {
            return Err(fail());
        }
        let at = Complex64::new(0.5, s.im);
        if zeta_complex(at)?.norm() >= REFINED_TOL {
            return Err(fail());
        }
        let zeta_deriv = zeta_deriv_complex(at)?;
        if zeta_deriv.norm() == 0.0 {
            return Err(fail());
        }
        Ok(ZetaZero {
            imag: s.im,
            zeta_deriv,
        })
    }

    /// Checks that `1/2 + i t` is a zero to `1e-6`, then refines it.
    pub fn verify(t: f64) -> Result<Self> {
        if !(t > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "zero height {t} must be positive"
            )));
        }
        let residual = zeta_complex(Complex64::new(0.5, t))?.norm();
        if residual >= MEMBERSHIP_TOL {
            return Err(Error::NotAZetaZero { t, residual });
        }
        Self::refine(t)
    }
}

/// The first nontrivial zero, located once at runtime.
pub fn first_zero() -> ZetaZero {
    static FIRST: OnceLock<ZetaZero> = OnceLock::new();
    *FIRST.get_or_init(|| {
        ZetaZero::refine(FIRST_ZERO_GUESS).expect("first zero converges from 14.1347")
    })
}

/// Parses one positive imaginary part per line; `#` starts a comment.
pub fn parse_zeros(text: &str) -> Result<Vec<ZetaZero>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let t: f64 = line.parse().map_err(|_| Error::ZerosFile {
            line: i + 1,
            message: format!("not a number: {line:?}"),
        })?;
        out.push(ZetaZero::verify(t).map_err(|e| match e {
            Error::NotAZetaZero { .. } => e,
            other => Error::ZerosFile {
                line: i + 1,
                message: other.to_string(),
            },
        })?);
    }
    if out.is_empty() {
        return Err(Error::NoZeros);
    }
    Ok(out)
}

pub fn load_zeros_file(path: impl AsRef<Path>) -> Result<Vec<ZetaZero>> {
    parse_zeros(&std::fs::read_to_string(path)?)
}
