//! Admissible K-types, eigenvalue translation, the two function pictures and residual checks.

mod picture;
mod residual;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use picture::{
    parity_residual, to_compact, to_noncompact, CharacterParams, Picture, PictureFunction, Representation,
};
pub use residual::{cond_d_residual, local_scale, schrodinger_residual, FdResidual, ScaledResidual};

/// Weight datum (q, l, m) with m = 2l + q mod 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KTypeIndex {
    pub q: u8,
    pub l: u32,
    pub m: i64,
}

/// The class m must fall in: (2l + q) mod 4.
pub fn required_class(q: u8, l: u32) -> i64 {
    (2 * l as i64 + q as i64).rem_euclid(4)
}

impl KTypeIndex {
    pub fn new(q: u8, l: u32, m: i64) -> Result<Self> {
        let q = q % 4;
        let required = required_class(q, l);
        if m.rem_euclid(4) != required {
            return Err(Error::Inadmissible { q, l, m, required });
        }
        Ok(KTypeIndex { q, l, m })
    }

    pub fn lambda(&self) -> BigRational {
        let l = self.l as i64;
        BigRational::new(BigInt::from(l * (l - 1)), BigInt::from(2))
    }

    pub fn lambda_f64(&self) -> f64 {
        let l = self.l as f64;
        l * (l - 1.0) / 2.0
    }

    /// Kummer parameter a = (1 + 2l - m)/4.
    pub fn kummer_a(&self) -> f64 {
        (1.0 + 2.0 * self.l as f64 - self.m as f64) / 4.0
    }

    /// Kummer parameter b = l + 1/2.
    pub fn kummer_b(&self) -> f64 {
        self.l as f64 + 0.5
    }

    /// Same (q, ·, ·) with shifted weight and degree; None if the result is off the lattice.
    pub fn shifted(&self, dm: i64, dl: i64) -> Option<KTypeIndex> {
        let l = self.l as i64 + dl;
        if l < 0 {
            return None;
        }
        KTypeIndex::new(self.q, l as u32, self.m + dm).ok()
    }
}

impl fmt::Display for KTypeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(q={}, l={}, m={})", self.q, self.l, self.m)
    }
}

fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    Some(BigRational::new(exact_sqrt(x.numer())?, exact_sqrt(x.denom())?))
}

fn check_lambda(lambda: &BigRational) -> Result<()> {
    if lambda.is_negative() {
        return Err(Error::NegativeLambda(lambda.to_string()));
    }
    Ok(())
}

/// The degrees l with l(l-1)/2 = lambda.
pub fn lambda_to_l(lambda: &BigRational) -> Result<Vec<u32>> {
    check_lambda(lambda)?;
    if lambda.is_zero() {
        return Ok(vec![0, 1]);
    }
    let disc = BigRational::from_integer(1.into()) + lambda * BigRational::from_integer(8.into());
    if !disc.is_integer() {
        return Ok(vec![]);
    }
    match exact_sqrt(&disc.to_integer()) {
        Some(root) if (&root % BigInt::from(2)) == BigInt::from(1) => {
            let l: BigInt = (root + BigInt::from(1)) / BigInt::from(2);
            Ok(l.to_u32().map(|l| vec![l]).unwrap_or_default())
        }
        _ => Ok(vec![]),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum IndicialRoots {
    Exact(BigRational, BigRational),
    Real(f64, f64),
}

/// Roots (1 -+ sqrt(1 + 8 lambda))/2 of the indicial equation at y = 0.
pub fn indicial_roots(lambda: &BigRational) -> Result<IndicialRoots> {
    check_lambda(lambda)?;
    let one = BigRational::from_integer(1.into());
    let two = BigRational::from_integer(2.into());
    let disc = &one + lambda * BigRational::from_integer(8.into());
    match rational_sqrt(&disc) {
        Some(root) => Ok(IndicialRoots::Exact((&one - &root) / &two, (&one + &root) / &two)),
        None => {
            let d = disc.to_f64().unwrap_or(f64::NAN).sqrt();
            Ok(IndicialRoots::Real((1.0 - d) / 2.0, (1.0 + d) / 2.0))
        }
    }
}

/// Admissible weights for (q, l) in [m_min, m_max], ascending.
pub fn weights(q: u8, l: u32, m_min: i64, m_max: i64) -> Vec<i64> {
    let class = required_class(q % 4, l);
    (m_min..=m_max).filter(|m| m.rem_euclid(4) == class).collect()
}

/// Every admissible index with l <= l_max and |m| <= m_bound.
pub fn admissible_indices(q: u8, l_max: u32, m_bound: i64) -> Vec<KTypeIndex> {
    let mut out = Vec::new();
    for l in 0..=l_max {
        for m in weights(q, l, -m_bound, m_bound) {
            out.push(KTypeIndex { q: q % 4, l, m });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn lambda_translation() {
        assert_eq!(lambda_to_l(&rat(1, 1)).unwrap(), vec![2]);
        assert_eq!(lambda_to_l(&rat(0, 1)).unwrap(), vec![0, 1]);
        assert!(lambda_to_l(&rat(2, 1)).unwrap().is_empty());
        assert!(lambda_to_l(&rat(3, 8)).unwrap().is_empty());
        assert!(lambda_to_l(&rat(-1, 1)).is_err());
        for l in 2..=50u32 {
            let k = KTypeIndex { q: 0, l, m: 0 };
            assert_eq!(lambda_to_l(&k.lambda()).unwrap(), vec![l]);
        }
    }

    #[test]
    fn indicial() {
        assert_eq!(indicial_roots(&rat(1, 1)).unwrap(), IndicialRoots::Exact(rat(-1, 1), rat(2, 1)));
        assert_eq!(indicial_roots(&rat(0, 1)).unwrap(), IndicialRoots::Exact(rat(0, 1), rat(1, 1)));
        assert_eq!(indicial_roots(&rat(3, 1)).unwrap(), IndicialRoots::Exact(rat(-2, 1), rat(3, 1)));
        assert!(matches!(indicial_roots(&rat(2, 1)).unwrap(), IndicialRoots::Real(_, _)));
    }

    #[test]
    fn weight_lists() {
        assert_eq!(weights(0, 2, -8, 8), vec![-8, -4, 0, 4, 8]);
        assert_eq!(weights(1, 2, -8, 8), vec![-7, -3, 1, 5]);
        assert_eq!(weights(3, 2, -8, 8), vec![-5, -1, 3, 7]);
    }

    #[test]
    fn admissibility_error_names_class() {
        let err = KTypeIndex::new(0, 2, 5).unwrap_err();
        assert_eq!(err, Error::Inadmissible { q: 0, l: 2, m: 5, required: 0 });
        assert!(err.to_string().contains("congruent to 0 mod 4"));
    }
}
