//! Gaussian rationals: complex numbers with exact rational real and
//! imaginary parts. These are the coefficient scalars everywhere exact
//! arithmetic is required; unimodular constants live in [`crate::phase`]
//! instead, so the field never needs to grow past rationals.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// An exact complex scalar `re + im·i` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        GaussianRational::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        GaussianRational::new(BigRational::one(), BigRational::zero())
    }

    pub fn i() -> Self {
        GaussianRational::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(v: i64) -> Self {
        GaussianRational::new(BigRational::from_integer(v.into()), BigRational::zero())
    }

    pub fn from_rational(re: BigRational) -> Self {
        GaussianRational::new(re, BigRational::zero())
    }

    /// `i^k` for `k` in `0..4`; used when folding quarter turns out of a
    /// torsion phase into the coefficient.
    pub fn i_pow(k: u8) -> Self {
        match k % 4 {
            0 => Self::one(),
            1 => Self::i(),
            2 => -&Self::one(),
            _ => -&Self::i(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|^2 = re^2 + im^2`, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

/// Canonical text form, accepted back by the expression parser:
/// `0`, `3`, `-1/2`, `i`, `-i`, `2/3i`, `1/2+i`, `1/2-2/3i`.
impl fmt::Display for GaussianRational {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn imag_part(im: &BigRational) -> String {
            if im.abs().is_one() {
                "i".to_string()
            } else {
                format!("{}i", im.abs())
            }
        }
        if self.is_zero() {
            return write!(out, "0");
        }
        if self.im.is_zero() {
            return write!(out, "{}", self.re);
        }
        if self.re.is_zero() {
            let sign = if self.im.is_negative() { "-" } else { "" };
            return write!(out, "{}{}", sign, imag_part(&self.im));
        }
        let sign = if self.im.is_negative() { "-" } else { "+" };
        write!(out, "{}{}{}", self.re, sign, imag_part(&self.im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn multiplication_follows_i_squared_is_minus_one() {
        let i = GaussianRational::i();
        assert_eq!(&i * &i, -&GaussianRational::one());
        assert_eq!(GaussianRational::i_pow(2), GaussianRational::from_int(-1));
        assert_eq!(GaussianRational::i_pow(3), -&GaussianRational::i());
        assert_eq!(GaussianRational::i_pow(4), GaussianRational::one());
    }

    #[test]
    fn norm_sqr_is_multiplicative() {
        let a = GaussianRational::new(rat(1, 2), rat(-2, 3));
        let b = GaussianRational::new(rat(3, 5), rat(7, 4));
        assert_eq!((&a * &b).norm_sqr(), a.norm_sqr() * b.norm_sqr());
    }

    #[test]
    fn conjugation_fixes_norm() {
        let a = GaussianRational::new(rat(5, 7), rat(-1, 9));
        assert_eq!(a.conj().conj(), a);
        assert_eq!((&a * &a.conj()).re, a.norm_sqr());
        assert!((&a * &a.conj()).im.is_zero());
    }

    #[test]
    fn display_forms_are_canonical() {
        assert_eq!(GaussianRational::zero().to_string(), "0");
        assert_eq!(GaussianRational::from_int(-3).to_string(), "-3");
        assert_eq!(GaussianRational::i().to_string(), "i");
        assert_eq!((-&GaussianRational::i()).to_string(), "-i");
        assert_eq!(
            GaussianRational::new(rat(1, 2), rat(-2, 3)).to_string(),
            "1/2-2/3i"
        );
        assert_eq!(GaussianRational::new(rat(1, 2), rat(1, 1)).to_string(), "1/2+i");
        assert_eq!(GaussianRational::new(rat(0, 1), rat(2, 3)).to_string(), "2/3i");
    }
}
