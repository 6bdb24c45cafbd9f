use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_pole(s: Complex64) -> bool {
    s.im == 0.0 && s.re <= 0.0 && s.re.fract() == 0.0
}

/// Complex Gamma by the Lanczos approximation, reflected for `Re s < 1/2`.
pub fn gamma_complex(s: Complex64) -> Result<Complex64> {
    if is_pole(s) {
        return Err(Error::Pole {
            function: "gamma",
            at: format!("{s}"),
        });
    }
    Ok(gamma_unchecked(s))
}

fn gamma_unchecked(s: Complex64) -> Complex64 {
    if s.re < 0.5 {
        let pi = Complex64::from(PI);
        return pi / ((pi * s).sin() * gamma_unchecked(1.0 - s));
    }
    let z = s - 1.0;
    let mut x = Complex64::from(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * ((z + 0.5) * t.ln() - t).exp() * x
}

/// Digamma at a positive integer: `psi(m) = -gamma + H_(m-1)`.
pub fn digamma_int(m: u32) -> Result<f64> {
    if m == 0 {
        return Err(Error::Pole {
            function: "digamma",
            at: "0".into(),
        });
    }
    Ok(-EULER_GAMMA + (1..m).map(|j| 1.0 / j as f64).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn factorials_and_half() {
        assert!((gamma_complex(c(5.0, 0.0)).unwrap() - 24.0).norm() < 1e-12);
        assert!((gamma_complex(c(0.5, 0.0)).unwrap().re - PI.sqrt()).abs() < 1e-14);
        assert!((gamma_complex(c(-0.5, 0.0)).unwrap().re + 2.0 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn poles() {
        for k in 0..5 {
            assert!(gamma_complex(c(-(k as f64), 0.0)).is_err());
        }
        assert!(gamma_complex(c(-1.0, 1e-9)).is_ok());
    }

    #[test]
    fn conjugate_symmetry() {
        for &(re, im) in &[(0.5, 14.1), (-1.3, 3.0), (2.2, -40.0)] {
            let a = gamma_complex(c(re, im)).unwrap();
            let b = gamma_complex(c(re, -im)).unwrap();
            assert!((a - b.conj()).norm() <= 1e-14 * a.norm());
        }
    }

    #[test]
    fn recurrence_on_critical_line() {
        for t in [1.0, 10.0, 25.0, 49.0] {
            let s = c(0.5, t);
            let lhs = gamma_complex(s + 1.0).unwrap();
            let rhs = s * gamma_complex(s).unwrap();
            assert!((lhs - rhs).norm() < 1e-10 * lhs.norm());
        }
    }

    #[test]
    fn stirling_at_first_zero_height() {
        let s = c(0.5, 14.134725141734693);
        let g = gamma_complex(s).unwrap();
        // ln Gamma(s) ~ (s - 1/2) ln s - s + ln(2 pi)/2 + 1/(12 s) - 1/(360 s^3) + 1/(1260 s^5)
        let stirling = ((s - 0.5) * s.ln() - s + 0.5 * (2.0 * PI).ln() + 1.0 / (12.0 * s)
            - 1.0 / (360.0 * s.powi(3))
            + 1.0 / (1260.0 * s.powi(5)))
        .exp();
        assert!((g - stirling).norm() < 1e-6 * g.norm());
        assert!(g.norm() < 1e-8 && g.norm() > 1e-10);
    }

    #[test]
    fn digamma_values() {
        assert!((digamma_int(1).unwrap() + EULER_GAMMA).abs() < 1e-16);
        assert!((digamma_int(2).unwrap() - (1.0 - EULER_GAMMA)).abs() < 1e-15);
        assert!(digamma_int(0).is_err());
    }
}
