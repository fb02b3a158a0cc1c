//! Gaussian rationals and π-graded scalars.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::AlgebraError;

/// Shorthand for an exact rational.
pub type Rational = BigRational;

/// Builds the rational `num/den`. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational, AlgebraError> {
    let s = s.trim();
    let bad = || AlgebraError::Parse(s.to_string());
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(p))
        }
    }
}

/// Renders a rational as `p` or `p/q`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A Gaussian rational `re + i·im`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    pub re: Rational,
    pub im: Rational,
}

impl Scalar {
    pub fn new(re: Rational, im: Rational) -> Self {
        Scalar { re, im }
    }

    pub fn zero() -> Self {
        Scalar::new(Rational::zero(), Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar::new(Rational::zero(), Rational::one())
    }

    pub fn from_int(v: i64) -> Self {
        Scalar::real(Rational::from_integer(BigInt::from(v)))
    }

    pub fn real(re: Rational) -> Self {
        Scalar::new(re, Rational::zero())
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::real(rat(num, den))
    }

    /// `i^k` for any integer k.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Scalar::one(),
            1 => Scalar::i(),
            2 => Scalar::from_int(-1),
            _ => -Scalar::i(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar::new(self.re.clone(), -self.im.clone())
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(Scalar::new(&self.re / &norm, -(&self.im / &norm)))
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Self, AlgebraError> {
        let inv = rhs.inv().ok_or(AlgebraError::DivisionByZero)?;
        Ok(self * &inv)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Scalar::new(&self.re * r, &self.im * r)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::real(r)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => write!(f, "{} i", fmt_rational(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                write!(
                    f,
                    "{} {} {} i",
                    fmt_rational(&self.re),
                    sign,
                    fmt_rational(&self.im.abs())
                )
            }
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Scalar::real(&self.re * &rhs.re);
        }
        Scalar::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re, -self.im)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re.clone(), -self.im.clone())
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

/// An exact number `coeff · π^pi_power`.
///
/// Zero is canonical: a zero coefficient always carries `pi_power == 0`, so
/// zero can be added to anything.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiScalar {
    coeff: Scalar,
    pi_power: i32,
}

impl PiScalar {
    pub fn new(coeff: Scalar, pi_power: i32) -> Self {
        let pi_power = if coeff.is_zero() { 0 } else { pi_power };
        PiScalar { coeff, pi_power }
    }

    pub fn zero() -> Self {
        PiScalar::new(Scalar::zero(), 0)
    }

    pub fn coeff(&self) -> &Scalar {
        &self.coeff
    }

    pub fn pi_power(&self) -> i32 {
        self.pi_power
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// Sum; only defined for equal π-powers (zero is compatible with all).
    pub fn checked_add(&self, rhs: &PiScalar) -> Result<PiScalar, AlgebraError> {
        if self.is_zero() {
            return Ok(rhs.clone());
        }
        if rhs.is_zero() {
            return Ok(self.clone());
        }
        if self.pi_power != rhs.pi_power {
            return Err(AlgebraError::PiPowerMismatch(self.pi_power, rhs.pi_power));
        }
        Ok(PiScalar::new(&self.coeff + &rhs.coeff, self.pi_power))
    }

    pub fn checked_sub(&self, rhs: &PiScalar) -> Result<PiScalar, AlgebraError> {
        self.checked_add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &PiScalar) -> PiScalar {
        PiScalar::new(&self.coeff * &rhs.coeff, self.pi_power + rhs.pi_power)
    }

    pub fn scale(&self, s: &Scalar) -> PiScalar {
        PiScalar::new(&self.coeff * s, self.pi_power)
    }

    pub fn neg(&self) -> PiScalar {
        PiScalar::new(-&self.coeff, self.pi_power)
    }

    /// Exact ratio `self / rhs`; `None` when `rhs` is zero.
    pub fn ratio(&self, rhs: &PiScalar) -> Option<PiScalar> {
        let inv = rhs.coeff.inv()?;
        Some(PiScalar::new(&self.coeff * &inv, self.pi_power - rhs.pi_power))
    }

    /// Floating-point approximation `(re, im)`.
    pub fn to_f64(&self) -> (f64, f64) {
        let (re, im) = self.coeff.to_f64();
        let pi = std::f64::consts::PI.powi(self.pi_power);
        (re * pi, im * pi)
    }
}

impl fmt::Display for PiScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let coeff = if self.coeff.is_real() || self.coeff.re.is_zero() {
            self.coeff.to_string()
        } else {
            format!("({})", self.coeff)
        };
        if self.pi_power == 0 {
            write!(f, "{coeff}")
        } else {
            write!(f, "{coeff} · pi^{}", self.pi_power)
        }
    }
}

/// `n!` as a rational.
pub fn factorial(n: u64) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Rational::from_integer(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        let a = Scalar::new(rat(1, 2), rat(-3, 4));
        let b = Scalar::new(rat(2, 3), rat(5, 1));
        let inv = a.inv().unwrap();
        assert_eq!(&a * &inv, Scalar::one());
        assert_eq!(&(&a + &b) - &b, a);
        assert_eq!(&Scalar::i() * &Scalar::i(), Scalar::from_int(-1));
        assert!(Scalar::zero().inv().is_none());
        assert_eq!(Scalar::i_pow(-1), -Scalar::i());
    }

    #[test]
    fn pi_scalar_rules() {
        let a = PiScalar::new(Scalar::ratio(1, 2), 2);
        let b = PiScalar::new(Scalar::ratio(1, 3), -1);
        assert_eq!(a.mul(&b).pi_power(), 1);
        assert!(a.checked_add(&b).is_err());
        let z = PiScalar::new(Scalar::zero(), 7);
        assert_eq!(z.pi_power(), 0);
        assert_eq!(z.checked_add(&b).unwrap(), b);
        assert_eq!(a.checked_sub(&a).unwrap(), PiScalar::zero());
    }

    #[test]
    fn parse_and_render() {
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), rat(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        let s = PiScalar::new(Scalar::new(rat(1, 2), rat(-1, 3)), -2);
        assert_eq!(s.to_string(), "(1/2 - 1/3 i) · pi^-2");
    }
}
