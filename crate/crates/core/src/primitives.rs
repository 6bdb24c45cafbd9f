//! Primitive directions of the positive orthant.
//!
//! Every lattice zonotope generator folds (coordinate-wise absolute value) onto
//! a vector `v >= 0` with coprime coordinates. A folded vector with `k` nonzero
//! coordinates stands for `2^(k-1)` distinct signed directions modulo global
//! sign, its *sign classes*.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A primitive vector of the nonnegative orthant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimVec {
    coords: Vec<u32>,
    nonzero_count: usize,
}

impl PrimVec {
    pub fn new(coords: Vec<u32>) -> Result<Self> {
        if !is_primitive_unchecked(&coords) {
            return Err(Error::NotPrimitive(coords));
        }
        let nonzero_count = coords.iter().filter(|&&c| c > 0).count();
        Ok(PrimVec {
            coords,
            nonzero_count,
        })
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Number of strictly positive coordinates, `d(v)`.
    pub fn nonzero_count(&self) -> usize {
        self.nonzero_count
    }

    /// Number of sign classes, `2^(d(v) - 1)`.
    pub fn weight(&self) -> u32 {
        1 << (self.nonzero_count - 1)
    }

    pub fn l1_norm(&self) -> u64 {
        self.coords.iter().map(|&c| c as u64).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.nonzero_count == 1
    }

    pub fn sign_class(&self, pattern: u32) -> Result<SignClass> {
        if pattern >= self.weight() {
            return Err(Error::InvalidArgument(format!(
                "sign pattern {pattern} out of range for {:?} ({} classes)",
                self.coords,
                self.weight()
            )));
        }
        Ok(SignClass {
            vector: self.clone(),
            pattern,
        })
    }

    /// All sign classes of this vector, by increasing pattern index.
    pub fn sign_classes(&self) -> impl Iterator<Item = SignClass> + '_ {
        (0..self.weight()).map(move |pattern| SignClass {
            vector: self.clone(),
            pattern,
        })
    }
}

/// One signed direction (modulo global sign) folding onto `vector`.
///
/// The first nonzero coordinate is kept positive; bit `j` of `pattern`
/// negates the `(j + 2)`-th nonzero coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignClass {
    pub vector: PrimVec,
    pub pattern: u32,
}

impl SignClass {
    pub fn signed(&self) -> Vec<i64> {
        let mut seen = 0;
        self.vector
            .coords
            .iter()
            .map(|&c| {
                if c == 0 {
                    return 0;
                }
                let negate = seen > 0 && (self.pattern >> (seen - 1)) & 1 == 1;
                seen += 1;
                if negate {
                    -(c as i64)
                } else {
                    c as i64
                }
            })
            .collect()
    }
}

fn gcd_all(v: &[u32]) -> u32 {
    v.iter().fold(0u32, |g, &c| g.gcd(&c))
}

fn is_primitive_unchecked(v: &[u32]) -> bool {
    gcd_all(v) == 1
}

/// Membership test for the primitive vectors of the positive orthant.
pub fn is_primitive(v: &[u32], dim: usize) -> Result<bool> {
    if v.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: v.len(),
        });
    }
    Ok(is_primitive_unchecked(v))
}

fn check_bound(dim: usize, bound: &[u32]) -> Result<()> {
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

/// Streams the primitive vectors `v <= bound` in lexicographic order.
pub fn enumerate_primitive(dim: usize, bound: &[u32]) -> Result<PrimitiveIter> {
    check_bound(dim, bound)?;
    Ok(PrimitiveIter {
        bound: bound.to_vec(),
        current: Some(vec![0; dim]),
    })
}

/// Lexicographic odometer over the box, yielding only primitive vectors.
#[derive(Debug, Clone)]
pub struct PrimitiveIter {
    bound: Vec<u32>,
    current: Option<Vec<u32>>,
}

impl PrimitiveIter {
    fn advance(&mut self) {
        let Some(cur) = self.current.as_mut() else {
            return;
        };
        for i in (0..cur.len()).rev() {
            if cur[i] < self.bound[i] {
                cur[i] += 1;
                return;
            }
            cur[i] = 0;
        }
        self.current = None;
    }
}

impl Iterator for PrimitiveIter {
    type Item = PrimVec;

    fn next(&mut self) -> Option<PrimVec> {
        loop {
            self.advance();
            let cur = self.current.as_ref()?;
            if is_primitive_unchecked(cur) {
                let nonzero_count = cur.iter().filter(|&&c| c > 0).count();
                return Some(PrimVec {
                    coords: cur.clone(),
                    nonzero_count,
                });
            }
        }
    }
}

fn moebius_table(limit: usize) -> Vec<i8> {
    let mut mu = vec![1i8; limit + 1];
    let mut composite = vec![false; limit + 1];
    for p in 2..=limit {
        if composite[p] {
            continue;
        }
        for m in (p..=limit).step_by(p) {
            if m > p {
                composite[m] = true;
            }
            mu[m] = -mu[m];
        }
        let sq = p.saturating_mul(p);
        if sq <= limit {
            for m in (sq..=limit).step_by(sq) {
                mu[m] = 0;
            }
        }
    }
    mu
}

/// Number of primitive vectors `v <= bound`, by Möbius inversion over the
/// multiples `k * P` partitioning the nonzero lattice points.
pub fn count_primitive_moebius(dim: usize, bound: &[u32]) -> Result<BigUint> {
    check_bound(dim, bound)?;
    let top = bound.iter().copied().max().unwrap_or(0) as usize;
    let mu = moebius_table(top);
    let mut total = BigInt::zero();
    for (k, &m) in mu.iter().enumerate().skip(1) {
        if m == 0 {
            continue;
        }
        let boxed = bound
            .iter()
            .fold(BigInt::from(1u32), |acc, &b| acc * (b as usize / k + 1));
        total += BigInt::from(m) * (boxed - 1u32);
    }
    debug_assert!(!total.is_negative());
    Ok(total.to_biguint().expect("count is nonnegative"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coords(it: PrimitiveIter) -> Vec<Vec<u32>> {
        it.map(|p| p.coords().to_vec()).collect()
    }

    #[test]
    fn primitive_membership() {
        assert!(is_primitive(&[1, 0], 2).unwrap());
        assert!(!is_primitive(&[2, 2], 2).unwrap());
        assert!(is_primitive(&[3, 5, 0], 3).unwrap());
        assert!(!is_primitive(&[0, 0], 2).unwrap());
        assert!(matches!(
            is_primitive(&[1, 2], 3),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn unit_box_enumeration() {
        let it = enumerate_primitive(2, &[1, 1]).unwrap();
        let v: Vec<_> = it.collect();
        assert_eq!(
            v.iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>(),
            vec![vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        assert_eq!(
            v.iter().map(PrimVec::weight).collect::<Vec<_>>(),
            vec![1, 1, 2]
        );
    }

    #[test]
    fn one_dimensional_enumeration() {
        assert_eq!(coords(enumerate_primitive(1, &[5]).unwrap()), vec![vec![1]]);
    }

    #[test]
    fn two_box_enumeration() {
        assert_eq!(
            coords(enumerate_primitive(2, &[2, 2]).unwrap()),
            vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![1, 2], vec![2, 1]]
        );
    }

    #[test]
    fn moebius_counts() {
        assert_eq!(count_primitive_moebius(2, &[2, 2]).unwrap(), 5u32.into());
        assert_eq!(count_primitive_moebius(2, &[0, 0]).unwrap(), 0u32.into());
        assert_eq!(count_primitive_moebius(3, &[1, 1, 1]).unwrap(), 7u32.into());
    }

    #[test]
    fn sieve_matches_enumeration_up_to_eight() {
        for dim in 1..=3usize {
            let mut bound = vec![0u32; dim];
            loop {
                let listed = enumerate_primitive(dim, &bound).unwrap().count();
                let sieved = count_primitive_moebius(dim, &bound).unwrap();
                assert_eq!(BigUint::from(listed), sieved, "bound {bound:?}");
                // odometer over bounds 0..=8
                let mut i = 0;
                while i < dim && bound[i] == 8 {
                    bound[i] = 0;
                    i += 1;
                }
                if i == dim {
                    break;
                }
                bound[i] += 1;
            }
        }
    }

    #[test]
    fn output_is_strictly_lexicographic() {
        let v: Vec<_> = enumerate_primitive(3, &[4, 3, 5]).unwrap().collect();
        assert!(v.windows(2).all(|w| w[0].coords() < w[1].coords()));
    }

    #[test]
    fn interior_weights() {
        for dim in 1..=4usize {
            let m = 6;
            let interior: Vec<_> = enumerate_primitive(dim, &vec![m; dim])
                .unwrap()
                .filter(|p| p.nonzero_count() == dim)
                .collect();
            let total: u64 = interior.iter().map(|p| p.weight() as u64).sum();
            assert_eq!(total, (1u64 << (dim - 1)) * interior.len() as u64);
        }
    }

    #[test]
    fn sign_classes_are_distinct_modulo_global_sign() {
        let v = PrimVec::new(vec![1, 0, 2, 3]).unwrap();
        let signed: Vec<_> = v.sign_classes().map(|c| c.signed()).collect();
        assert_eq!(signed.len(), 4);
        for (i, a) in signed.iter().enumerate() {
            assert_eq!(
                a.iter()
                    .map(|c| c.unsigned_abs() as u32)
                    .collect::<Vec<_>>(),
                v.coords()
            );
            for b in &signed[i + 1..] {
                let neg: Vec<i64> = b.iter().map(|c| -c).collect();
                assert_ne!(a, b);
                assert_ne!(a, &neg);
            }
        }
        assert!(v.sign_class(4).is_err());
    }
}
