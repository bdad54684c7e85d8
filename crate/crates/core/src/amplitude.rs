//! Exact complex amplitudes.
//!
//! Every amplitude that a photon can pick up in the pyramid is a sum of
//! products of `t = 1/√2` and `r = i/√2`, so it always has the form
//! `(a + b·i) / √2^h` with integer `a`, `b`. [`HalfPowerAmplitude`] stores
//! exactly that triple. [`GaussianInt`] is the bare `a + b·i` part, used when
//! many amplitudes share one known scale.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A Gaussian integer `re + im·i` with arbitrary-precision parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussianInt {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn zero() -> Self {
        GaussianInt::default()
    }

    pub fn one() -> Self {
        GaussianInt::new(1, 0)
    }

    pub fn i() -> Self {
        GaussianInt::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianInt {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// `re² + im²`.
    pub fn norm_sqr(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        GaussianInt {
            re: -&self.im,
            im: self.re.clone(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        GaussianInt {
            re: &self.re * k,
            im: &self.im * k,
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = GaussianInt::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &GaussianInt {
    type Output = GaussianInt;
    fn add(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl AddAssign<&GaussianInt> for GaussianInt {
    fn add_assign(&mut self, rhs: &GaussianInt) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sub for &GaussianInt {
    type Output = GaussianInt;
    fn sub(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &GaussianInt {
    type Output = GaussianInt;
    fn mul(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        GaussianInt {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}i", self.re, sign, self.im.abs())
    }
}

/// The exact complex number `(re + im·i) / √2^half_exp`.
///
/// Values are kept in canonical form: while both parts are even and
/// `half_exp ≥ 2`, a common factor of 2 is cancelled against `√2²`. Zero is
/// always stored with `half_exp = 0`. Because `√2` is irrational the canonical
/// triple is unique, so derived equality is value equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HalfPowerAmplitude {
    re: BigInt,
    im: BigInt,
    half_exp: u32,
}

impl HalfPowerAmplitude {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>, half_exp: u32) -> Self {
        Self::from_gaussian(GaussianInt::new(re, im), half_exp)
    }

    pub fn from_gaussian(value: GaussianInt, half_exp: u32) -> Self {
        let mut out = HalfPowerAmplitude {
            re: value.re,
            im: value.im,
            half_exp,
        };
        out.canonicalize();
        out
    }

    pub fn zero() -> Self {
        HalfPowerAmplitude::new(0, 0, 0)
    }

    pub fn one() -> Self {
        HalfPowerAmplitude::new(1, 0, 0)
    }

    /// Transmission amplitude `1/√2`.
    pub fn transmit() -> Self {
        HalfPowerAmplitude::new(1, 0, 1)
    }

    /// Reflection amplitude `i/√2`.
    pub fn reflect() -> Self {
        HalfPowerAmplitude::new(0, 1, 1)
    }

    pub fn re(&self) -> &BigInt {
        &self.re
    }

    pub fn im(&self) -> &BigInt {
        &self.im
    }

    pub fn half_exp(&self) -> u32 {
        self.half_exp
    }

    pub fn numerator(&self) -> GaussianInt {
        GaussianInt::new(self.re.clone(), self.im.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn canonicalize(&mut self) {
        if self.is_zero() {
            self.half_exp = 0;
            return;
        }
        let two = BigInt::from(2);
        while self.half_exp >= 2 && is_even(&self.re) && is_even(&self.im) {
            self.re /= &two;
            self.im /= &two;
            self.half_exp -= 2;
        }
    }

    /// The Gaussian-integer numerator when this value is written over
    /// `√2^target`. Returns `None` if `target` is smaller than the canonical
    /// exponent or differs from it in parity (the value would not be a
    /// Gaussian integer at that scale).
    pub fn numerator_at(&self, target: u32) -> Option<GaussianInt> {
        if self.is_zero() {
            return Some(GaussianInt::zero());
        }
        if target < self.half_exp || !(target - self.half_exp).is_multiple_of(2) {
            return None;
        }
        let factor = BigInt::one() << ((target - self.half_exp) / 2);
        Some(self.numerator().scale(&factor))
    }

    pub fn conj(&self) -> Self {
        HalfPowerAmplitude {
            re: self.re.clone(),
            im: -&self.im,
            half_exp: self.half_exp,
        }
    }

    pub fn mul_i(&self) -> Self {
        HalfPowerAmplitude {
            re: -&self.im,
            im: self.re.clone(),
            half_exp: self.half_exp,
        }
    }

    /// Exact squared modulus `(re² + im²) / 2^half_exp`.
    pub fn norm_sqr(&self) -> BigRational {
        BigRational::new(
            &self.re * &self.re + &self.im * &self.im,
            BigInt::one() << self.half_exp,
        )
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        let scale = 2f64.powf(self.half_exp as f64 / 2.0);
        (
            bigint_to_f64(&self.re) / scale,
            bigint_to_f64(&self.im) / scale,
        )
    }
}

fn is_even(x: &BigInt) -> bool {
    (x % 2u32).is_zero()
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

impl Default for HalfPowerAmplitude {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add for &HalfPowerAmplitude {
    type Output = HalfPowerAmplitude;

    fn add(self, rhs: &HalfPowerAmplitude) -> HalfPowerAmplitude {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        // A sum of terms whose exponents differ in parity is not of the
        // form (a + bi)/√2^h. Pyramid amplitudes at a fixed depth all share
        // one parity.
        let target = self.half_exp.max(rhs.half_exp);
        match (self.numerator_at(target), rhs.numerator_at(target)) {
            (Some(a), Some(b)) => HalfPowerAmplitude::from_gaussian(&a + &b, target),
            _ => panic!(
                "cannot add amplitudes with exponents of different parity ({} and {})",
                self.half_exp, rhs.half_exp
            ),
        }
    }
}

impl AddAssign<&HalfPowerAmplitude> for HalfPowerAmplitude {
    fn add_assign(&mut self, rhs: &HalfPowerAmplitude) {
        *self = &*self + rhs;
    }
}

impl Mul for &HalfPowerAmplitude {
    type Output = HalfPowerAmplitude;

    fn mul(self, rhs: &HalfPowerAmplitude) -> HalfPowerAmplitude {
        let a = self.numerator();
        let b = rhs.numerator();
        HalfPowerAmplitude::from_gaussian(&a * &b, self.half_exp + rhs.half_exp)
    }
}

impl Neg for &HalfPowerAmplitude {
    type Output = HalfPowerAmplitude;
    fn neg(self) -> HalfPowerAmplitude {
        HalfPowerAmplitude {
            re: -&self.re,
            im: -&self.im,
            half_exp: self.half_exp,
        }
    }
}

/// Renders as `(re+imi)/2^k` for even exponents and `(re+imi)/2^(h/2)` for
/// odd ones, e.g. `(0-1i)/2^3` or `(1+0i)/2^(3/2)`.
impl fmt::Display for HalfPowerAmplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "({}{}{}i)", self.re, sign, self.im.abs())?;
        match self.half_exp {
            0 => Ok(()),
            h if h % 2 == 0 => write!(f, "/2^{}", h / 2),
            h => write!(f, "/2^({}/2)", h),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_reduces_common_twos() {
        let a = HalfPowerAmplitude::new(4, -8, 6);
        assert_eq!(a, HalfPowerAmplitude::new(1, -2, 2));
        assert_eq!(a.half_exp(), 2);

        // Exponent 1 cannot be reduced further.
        let b = HalfPowerAmplitude::new(2, 2, 1);
        assert_eq!(b.half_exp(), 1);
        assert_eq!(b.re(), &BigInt::from(2));
    }

    #[test]
    fn zero_has_a_single_representation() {
        assert_eq!(HalfPowerAmplitude::new(0, 0, 7), HalfPowerAmplitude::zero());
        assert_eq!(HalfPowerAmplitude::new(0, 0, 7).half_exp(), 0);
    }

    #[test]
    fn t_and_r_products() {
        let t = HalfPowerAmplitude::transmit();
        let r = HalfPowerAmplitude::reflect();
        // r³ = -i/2^{3/2}
        assert_eq!(&(&r * &r) * &r, HalfPowerAmplitude::new(0, -1, 3));
        // t r t = i/2^{3/2}
        assert_eq!(&(&t * &r) * &t, HalfPowerAmplitude::new(0, 1, 3));
        // r² t + t r² = -2/2^{3/2} = -1/√2
        let sum = &(&(&r * &r) * &t) + &(&(&t * &r) * &r);
        assert_eq!(sum, HalfPowerAmplitude::new(-1, 0, 1));
        assert_eq!(sum.norm_sqr(), BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn addition_across_scales() {
        let half = HalfPowerAmplitude::new(1, 0, 2);
        let quarter = HalfPowerAmplitude::new(1, 0, 4);
        assert_eq!(&half + &quarter, HalfPowerAmplitude::new(3, 0, 4));
        assert_eq!(&half + &(-&half), HalfPowerAmplitude::zero());
    }

    #[test]
    #[should_panic(expected = "different parity")]
    fn addition_rejects_mixed_parity() {
        let _ = &HalfPowerAmplitude::transmit() + &HalfPowerAmplitude::one();
    }

    #[test]
    fn numerator_at_rescales() {
        let a = HalfPowerAmplitude::new(1, 1, 1);
        assert_eq!(a.numerator_at(3), Some(GaussianInt::new(2, 2)));
        assert_eq!(a.numerator_at(2), None);
        assert_eq!(a.numerator_at(0), None);
    }

    #[test]
    fn display_forms() {
        assert_eq!(HalfPowerAmplitude::new(0, -1, 6).to_string(), "(0-1i)/2^3");
        assert_eq!(
            HalfPowerAmplitude::new(1, 0, 3).to_string(),
            "(1+0i)/2^(3/2)"
        );
        assert_eq!(HalfPowerAmplitude::one().to_string(), "(1+0i)");
    }

    #[test]
    fn gaussian_arithmetic() {
        let a = GaussianInt::new(2, 3);
        let b = GaussianInt::new(-1, 4);
        assert_eq!(&a * &b, GaussianInt::new(-14, 5));
        assert_eq!(a.norm_sqr(), BigInt::from(13));
        assert_eq!(a.mul_i(), GaussianInt::new(-3, 2));
        assert_eq!(GaussianInt::i().pow(4), GaussianInt::one());
        assert_eq!(&a * &a.conj(), GaussianInt::new(13, 0));
    }
}
