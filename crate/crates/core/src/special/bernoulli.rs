use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::{Error, Result};

/// Largest index served by [`bernoulli`].
pub const BERNOULLI_LIMIT: usize = 64;

fn table() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        let mut b: Vec<BigRational> = Vec::with_capacity(BERNOULLI_LIMIT + 1);
        b.push(BigRational::from_integer(1.into()));
        for m in 1..=BERNOULLI_LIMIT {
            let mut binom = BigInt::from(1); // C(m+1, 0)
            let mut acc = BigRational::zero();
            for (j, bj) in b.iter().enumerate() {
                acc += bj * BigRational::from_integer(binom.clone());
                binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
            }
            // binom is now C(m+1, m) = m + 1
            b.push(-acc / BigRational::from_integer(binom));
        }
        b
    })
}

/// Exact Bernoulli number `B_m`, with `B_1 = -1/2`.
pub fn bernoulli(m: usize) -> Result<BigRational> {
    table().get(m).cloned().ok_or(Error::BernoulliLimit(m))
}

/// `B_{2k} / (2k)!` for `k = 1..=count`, as doubles.
pub(crate) fn em_coefficients() -> &'static [f64] {
    static COEF: OnceLock<Vec<f64>> = OnceLock::new();
    COEF.get_or_init(|| {
        let mut fact = BigInt::from(1);
        let mut out = Vec::new();
        for m in 1..=BERNOULLI_LIMIT {
            fact *= m;
            if m % 2 == 0 {
                let c = &table()[m] / BigRational::from_integer(fact.clone());
                out.push(c.to_f64().expect("finite"));
            }
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn classical_values() {
        assert_eq!(bernoulli(0).unwrap(), r(1, 1));
        assert_eq!(bernoulli(1).unwrap(), r(-1, 2));
        assert_eq!(bernoulli(2).unwrap(), r(1, 6));
        assert_eq!(bernoulli(12).unwrap(), r(-691, 2730));
        assert_eq!(bernoulli(7).unwrap(), r(0, 1));
    }

    #[test]
    fn limit() {
        assert!(bernoulli(64).is_ok());
        assert_eq!(bernoulli(65), Err(Error::BernoulliLimit(65)));
    }

    #[test]
    fn odd_indices_vanish() {
        for m in (3..=BERNOULLI_LIMIT).step_by(2) {
            assert!(bernoulli(m).unwrap().is_zero());
        }
    }

    #[test]
    fn euler_maclaurin_weights() {
        let c = em_coefficients();
        assert!((c[0] - 1.0 / 12.0).abs() < 1e-17);
        assert!((c[1] + 1.0 / 720.0).abs() < 1e-18);
    }
}
