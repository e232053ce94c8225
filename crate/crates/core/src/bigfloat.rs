//! A small arbitrary-precision binary float: sign-magnitude mantissa times a
//! power of two, rounded to a fixed number of mantissa bits.
//!
//! Only what the eigensolver needs is implemented: field operations, square
//! root, comparison, and conversions from exact rationals and to `f64`.
//! Rounding is round-half-up on the magnitude, so results are within one
//! unit in the last place of the exact value.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::exactpoly::Rational;

#[derive(Clone, Debug)]
pub struct BigFloat {
    mantissa: BigInt,
    exp: i64,
    prec: u32,
}

fn round_shifted(mag: &BigUint, shift: u64) -> BigUint {
    if shift == 0 {
        return mag.clone();
    }
    let half = BigUint::from(1u8) << (shift - 1);
    (mag + half) >> shift
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat {
            mantissa: BigInt::zero(),
            exp: 0,
            prec,
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    fn normalized(mantissa: BigInt, exp: i64, prec: u32) -> Self {
        if mantissa.is_zero() {
            return Self::zero(prec);
        }
        let (sign, mut mag) = mantissa.into_parts();
        let bits = mag.bits();
        let mut exp = exp;
        if bits > prec as u64 {
            let shift = bits - prec as u64;
            mag = round_shifted(&mag, shift);
            exp += shift as i64;
            // rounding can carry into one extra bit
            if mag.bits() > prec as u64 {
                mag >>= 1u32;
                exp += 1;
            }
        }
        if mag.is_zero() {
            return Self::zero(prec);
        }
        BigFloat {
            mantissa: BigInt::from_biguint(sign, mag),
            exp,
            prec,
        }
    }

    pub fn from_i64(x: i64, prec: u32) -> Self {
        Self::normalized(BigInt::from(x), 0, prec)
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        assert!(x.is_finite(), "cannot represent non-finite f64");
        let q = Rational::from_float(x).expect("finite f64");
        Self::from_rational(&q, prec)
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        if q.is_zero() {
            return Self::zero(prec);
        }
        let n = q.numer();
        let d = q.denom(); // positive by invariant
        let nbits = n.magnitude().bits() as i64;
        let dbits = d.magnitude().bits() as i64;
        // shift numerator so the quotient carries prec + 2 significant bits
        let s = prec as i64 + 2 + dbits - nbits;
        let (quot, exp) = if s >= 0 {
            ((n << (s as u64)) / d, -s)
        } else {
            (n / (d << ((-s) as u64)), -s)
        };
        Self::normalized(quot, exp, prec)
    }

    /// Exact rational value of this float.
    pub fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from(&self.mantissa << (self.exp as u64))
        } else {
            Rational::new(
                self.mantissa.clone(),
                BigInt::from(1) << ((-self.exp) as u64),
            )
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.magnitude().bits();
        // keep the top 62 bits, convert exactly, then scale
        let (top, dropped) = if bits > 62 {
            let shift = bits - 62;
            (&self.mantissa >> shift, shift as i64)
        } else {
            (self.mantissa.clone(), 0)
        };
        let x = top.to_f64().unwrap_or(0.0);
        let scale = self.exp + dropped;
        x * 2f64.powi(scale.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        if self.is_zero() {
            return Self::normalized(other.mantissa.clone(), other.exp, prec);
        }
        if other.is_zero() {
            return Self::normalized(self.mantissa.clone(), self.exp, prec);
        }
        let (hi, lo) = if self.exp >= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        let shift = (hi.exp - lo.exp) as u64;
        // beyond this the smaller operand is below half an ulp of the result
        if shift > prec as u64 + 64 {
            return Self::normalized(hi.mantissa.clone(), hi.exp, prec);
        }
        let m = (&hi.mantissa << shift) + &lo.mantissa;
        Self::normalized(m, lo.exp, prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        BigFloat {
            mantissa: -self.mantissa.clone(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mantissa: self.mantissa.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        Self::normalized(&self.mantissa * &other.mantissa, self.exp + other.exp, prec)
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero");
        let prec = self.prec.max(other.prec);
        if self.is_zero() {
            return Self::zero(prec);
        }
        let nbits = self.mantissa.magnitude().bits() as i64;
        let dbits = other.mantissa.magnitude().bits() as i64;
        let s = (prec as i64 + 2 + dbits - nbits).max(0);
        let quot = (&self.mantissa << (s as u64)) / &other.mantissa;
        Self::normalized(quot, self.exp - other.exp - s, prec)
    }

    /// Square root; panics on negative input.
    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of negative value");
        if self.is_zero() {
            return Self::zero(self.prec);
        }
        let bits = self.mantissa.magnitude().bits() as i64;
        let mut s = (2 * self.prec as i64 + 4 - bits).max(0);
        if (self.exp - s) % 2 != 0 {
            s += 1;
        }
        let shifted = self.mantissa.magnitude() << (s as u64);
        let root = shifted.sqrt();
        Self::normalized(
            BigInt::from_biguint(Sign::Plus, root),
            (self.exp - s) / 2,
            self.prec,
        )
    }

    /// Ordering of the represented values.
    pub fn cmp_value(&self, other: &Self) -> std::cmp::Ordering {
        match self.sub(other).mantissa.sign() {
            Sign::Minus => std::cmp::Ordering::Less,
            Sign::NoSign => std::cmp::Ordering::Equal,
            Sign::Plus => std::cmp::Ordering::Greater,
        }
    }
}

/// Accurate `Rational -> f64` conversion for arbitrarily large numerators
/// and denominators.
pub fn rational_to_f64(q: &Rational) -> f64 {
    BigFloat::from_rational(q, 64).to_f64()
}
