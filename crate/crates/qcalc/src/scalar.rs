//! Exact rational scalars.
//!
//! The scalar field is fixed to arbitrary-precision rationals so that every
//! algebraic law checked elsewhere in the crate holds exactly. Decimal
//! rendering is a display-layer convenience and is the only lossy operation.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact rational number in canonical form: reduced fraction with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Scalar {
        Scalar(BigRational::one())
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Scalar {
        Scalar(BigRational::from_integer(n))
    }

    /// Builds `numer/denom`; `None` when the denominator is zero.
    pub fn ratio(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Option<Scalar> {
        let denom = denom.into();
        if denom.is_zero() {
            return None;
        }
        Some(Scalar(BigRational::new(numer.into(), denom)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Scalar {
        Scalar(self.0.abs())
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Scalar> {
        if self.is_zero() {
            None
        } else {
            Some(Scalar(self.0.recip()))
        }
    }

    /// Raises to an arbitrary-precision integer power by repeated squaring.
    /// `None` when the base is zero and the exponent negative; `0^0 = 1`.
    pub fn pow(&self, n: &BigInt) -> Option<Scalar> {
        if n.is_negative() {
            let inv = self.recip()?;
            return inv.pow(&-n);
        }
        let mut result = Scalar::one();
        let mut base = self.clone();
        let mut e = n.clone();
        let two = BigInt::from(2);
        while !e.is_zero() {
            if e.is_odd() {
                result = &result * &base;
            }
            e /= &two;
            if !e.is_zero() {
                base = &base * &base;
            }
        }
        Some(result)
    }

    pub fn powi(&self, n: i64) -> Option<Scalar> {
        self.pow(&BigInt::from(n))
    }

    /// Lossy conversion for display and interop.
    pub fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self.0).unwrap_or(f64::NAN)
    }

    /// Decimal rendering with `sig` significant digits, rounded half to even.
    ///
    /// Uses positional notation for moderate magnitudes and scientific
    /// notation (`d.ddd...e±k`) otherwise. Trailing zeros are trimmed. This
    /// is display only; the exact value is the fraction itself.
    pub fn decimal_string(&self, sig: usize) -> String {
        assert!(sig >= 1);
        if self.is_zero() {
            return "0".to_string();
        }
        let negative = self.is_negative();
        let a = self.0.numer().abs();
        let b = self.0.denom().clone();

        // k = floor(log10(a/b)), found by exact comparison.
        let mut k: i64 = a.to_string().len() as i64 - b.to_string().len() as i64;
        while !ge_pow10(&a, &b, k) {
            k -= 1;
        }
        while ge_pow10(&a, &b, k + 1) {
            k += 1;
        }

        // First `sig` significant digits, rounded half to even.
        let shift = sig as i64 - 1 - k;
        let (num, den) = if shift >= 0 {
            (&a * pow10(shift as u64), b)
        } else {
            (a, &b * pow10((-shift) as u64))
        };
        let (q, r) = num.div_rem(&den);
        let mut m = round_half_even(q, &r, &den);
        if m == pow10(sig as u64) {
            // 999... rounded up to the next power of ten
            m /= BigInt::from(10);
            k += 1;
        }
        let mut digits = m.to_string();
        while digits.len() > 1 && digits.ends_with('0') {
            digits.pop();
        }

        let body = if (-5..=15).contains(&k) {
            positional(&digits, k)
        } else {
            scientific(&digits, k)
        };
        if negative {
            format!("-{body}")
        } else {
            body
        }
    }
}

/// Is a/b >= 10^k (a, b > 0)?
fn ge_pow10(a: &BigInt, b: &BigInt, k: i64) -> bool {
    if k >= 0 {
        *a >= b * pow10(k as u64)
    } else {
        a * pow10((-k) as u64) >= *b
    }
}

fn pow10(e: u64) -> BigInt {
    BigInt::from(10).pow(e as u32)
}

fn round_half_even(q: BigInt, r: &BigInt, den: &BigInt) -> BigInt {
    let twice: BigInt = r * BigInt::from(2);
    match twice.cmp(den) {
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Equal => {
            if q.is_odd() {
                q + 1
            } else {
                q
            }
        }
    }
}

fn positional(digits: &str, k: i64) -> String {
    if k >= 0 {
        let k = k as usize;
        if digits.len() > k + 1 {
            format!("{}.{}", &digits[..k + 1], &digits[k + 1..])
        } else {
            let zeros = "0".repeat(k + 1 - digits.len());
            format!("{digits}{zeros}")
        }
    } else {
        let zeros = "0".repeat((-k - 1) as usize);
        format!("0.{zeros}{digits}")
    }
}

fn scientific(digits: &str, k: i64) -> String {
    if digits.len() > 1 {
        format!("{}.{}e{}", &digits[..1], &digits[1..], k)
    } else {
        format!("{digits}e{k}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Accepts `INT`, `INT.DIGITS` and `INT/POSINT`, with an optional leading
/// sign. Decimal literals convert exactly (denominator a power of ten).
impl FromStr for Scalar {
    type Err = String;

    fn from_str(s: &str) -> Result<Scalar, String> {
        let (sign, rest) = match s.strip_prefix('-') {
            Some(r) => (-1, r),
            None => (1, s.strip_prefix('+').unwrap_or(s)),
        };
        let err = || format!("invalid number `{s}`");
        if let Some((int, frac)) = rest.split_once('.') {
            if int.is_empty() || frac.is_empty() {
                return Err(err());
            }
            let int: BigInt = int.parse().map_err(|_| err())?;
            let frac_digits = frac.len() as u64;
            let frac: BigInt = frac.parse().map_err(|_| err())?;
            if frac.is_negative() || int.is_negative() {
                return Err(err());
            }
            let den = pow10(frac_digits);
            let num = int * &den + frac;
            Ok(Scalar(BigRational::new(num * sign, den)))
        } else if let Some((num, den)) = rest.split_once('/') {
            let num: BigInt = num.parse().map_err(|_| err())?;
            let den: BigInt = den.parse().map_err(|_| err())?;
            if num.is_negative() || den <= BigInt::zero() {
                return Err(err());
            }
            Ok(Scalar(BigRational::new(num * sign, den)))
        } else {
            let n: BigInt = rest.parse().map_err(|_| err())?;
            if n.is_negative() {
                return Err(err());
            }
            Ok(Scalar(BigRational::from_integer(n * sign)))
        }
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar(self.0.$method(rhs.0))
            }
        }
    };
}

impl_binop!(Add, add);
impl_binop!(Sub, sub);
impl_binop!(Mul, mul);
// Division panics on a zero divisor, like integer division; fallible call
// sites go through `recip`.
impl_binop!(Div, div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}
