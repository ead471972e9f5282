//! Binary fixed-point reals backed by big integers, with a base-2
//! logarithm of rationals accurate to the working precision.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Guard bits carried by series evaluations.
const GUARD: u64 = 24;

/// `raw / 2^frac_bits`. Arithmetic truncates toward negative infinity.
#[derive(Clone, PartialEq, Eq)]
pub struct Fixed {
    raw: BigInt,
    frac_bits: u64,
}

/// Fractional bits needed for `digits` significant decimal digits of a
/// quantity of order one, with a margin for accumulated truncation.
pub fn frac_bits_for_digits(digits: usize) -> u64 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u64 + 32
}

impl Fixed {
    pub fn zero(frac_bits: u64) -> Self {
        Self {
            raw: BigInt::zero(),
            frac_bits,
        }
    }

    pub fn from_int(n: i64, frac_bits: u64) -> Self {
        Self {
            raw: BigInt::from(n) << frac_bits,
            frac_bits,
        }
    }

    pub fn from_rational(q: &BigRational, frac_bits: u64) -> Self {
        let raw = (q.numer() << frac_bits).div_floor_big(q.denom());
        Self { raw, frac_bits }
    }

    /// Exact for finite `x`; the result keeps `frac_bits` of it.
    pub fn from_f64(x: f64, frac_bits: u64) -> Self {
        let q = BigRational::from_float(x).expect("finite float");
        Self::from_rational(&q, frac_bits)
    }

    pub fn frac_bits(&self) -> u64 {
        self.frac_bits
    }

    pub fn raw(&self) -> &BigInt {
        &self.raw
    }

    /// Same value at a different precision.
    pub fn with_frac_bits(&self, frac_bits: u64) -> Self {
        let raw = if frac_bits >= self.frac_bits {
            &self.raw << (frac_bits - self.frac_bits)
        } else {
            &self.raw >> (self.frac_bits - frac_bits)
        };
        Self { raw, frac_bits }
    }

    fn check(&self, other: &Self) {
        assert_eq!(
            self.frac_bits, other.frac_bits,
            "mixed fixed-point precisions"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        Self {
            raw: &self.raw + &other.raw,
            frac_bits: self.frac_bits,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        Self {
            raw: &self.raw - &other.raw,
            frac_bits: self.frac_bits,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        Self {
            raw: (&self.raw * &other.raw) >> self.frac_bits,
            frac_bits: self.frac_bits,
        }
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        Self {
            raw: &self.raw * n,
            frac_bits: self.frac_bits,
        }
    }

    /// Panics on division by zero.
    pub fn div(&self, other: &Self) -> Self {
        self.check(other);
        assert!(!other.raw.is_zero(), "fixed-point division by zero");
        let raw = (&self.raw << self.frac_bits).div_floor_big(&other.raw);
        Self {
            raw,
            frac_bits: self.frac_bits,
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn is_negative(&self) -> bool {
        self.raw.is_negative()
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.raw.bits();
        let drop = bits.saturating_sub(60);
        let m = (&self.raw >> drop).to_f64().unwrap_or(f64::NAN);
        m * 2f64.powi((drop as i64 - self.frac_bits as i64) as i32)
    }

    /// Decimal rendering truncated (not rounded) to `decimals` places.
    pub fn to_decimal(&self, decimals: usize) -> String {
        let scaled = (self.raw.abs() * BigInt::from(10u32).pow(decimals as u32)) >> self.frac_bits;
        let digits = scaled.to_string();
        let digits = format!("{digits:0>width$}", width = decimals + 1);
        let (int, frac) = digits.split_at(digits.len() - decimals);
        let sign = if self.raw.is_negative() { "-" } else { "" };
        if decimals == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    /// Decimal rendering with `digits` significant digits, truncated.
    pub fn to_significant(&self, digits: usize) -> String {
        let int_part = (self.raw.abs() >> self.frac_bits).to_string();
        let int_digits = if int_part == "0" { 0 } else { int_part.len() };
        let leading_zeros = if int_digits == 0 {
            let v = self.to_f64().abs();
            if v > 0.0 {
                (-v.log10()).floor().max(0.0) as usize
            } else {
                0
            }
        } else {
            0
        };
        self.to_decimal(digits.saturating_sub(int_digits).max(1) + leading_zeros)
    }
}

trait DivFloor {
    fn div_floor_big(&self, d: &Self) -> Self;
}

impl DivFloor for BigInt {
    fn div_floor_big(&self, d: &Self) -> Self {
        num_integer::Integer::div_floor(self, d)
    }
}

impl Ord for Fixed {
    fn cmp(&self, other: &Self) -> Ordering {
        self.check(other);
        self.raw.cmp(&other.raw)
    }
}

impl PartialOrd for Fixed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let decimals = f.precision().unwrap_or(12);
        f.write_str(&self.to_decimal(decimals))
    }
}

impl fmt::Debug for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fixed({})", self.to_decimal(20))
    }
}

/// `atanh(num / den)` as a raw value with `bits` fractional bits;
/// requires `|num / den| <= 1/3`.
fn atanh_raw(num: &BigInt, den: &BigInt, bits: u64) -> BigInt {
    // series on |z|: right shifts of negative values floor toward -1
    let z = (num.abs() << bits) / den.abs();
    let z2 = (&z * &z) >> bits;
    let mut power = z;
    let mut sum = BigInt::zero();
    let mut k = 1u64;
    while !power.is_zero() {
        sum += &power / BigInt::from(k);
        power = (power * &z2) >> bits;
        k += 2;
    }
    if num.is_negative() != den.is_negative() {
        -sum
    } else {
        sum
    }
}

/// `log₂ q` for `q > 0`.
///
/// Writes `q = 2^k · x` with `x ∈ [1/2, 2)`, then uses
/// `ln x = 2 atanh((x-1)/(x+1))` and `ln 2 = 2 atanh(1/3)`.
pub fn log2_rational(q: &BigRational, frac_bits: u64) -> Fixed {
    assert!(q.is_positive(), "log of a non-positive number");
    let p = q.numer().magnitude();
    let d = q.denom().magnitude();
    let k = p.bits() as i64 - d.bits() as i64;
    let (p, d): (BigUint, BigUint) = if k >= 0 {
        (p.clone(), d << k as u64)
    } else {
        (p << (-k) as u64, d.clone())
    };
    let p = BigInt::from_biguint(Sign::Plus, p);
    let d = BigInt::from_biguint(Sign::Plus, d);
    let bits = frac_bits + GUARD;
    let num = atanh_raw(&(&p - &d), &(&p + &d), bits);
    let ln2_half = atanh_raw(&BigInt::one(), &BigInt::from(3u32), bits);
    let frac = (num << bits).div_floor_big(&ln2_half);
    let raw = (frac >> GUARD) + (BigInt::from(k) << frac_bits);
    Fixed { raw, frac_bits }
}

/// `-q log₂ q`, zero at `q = 0`.
pub fn plogp_neg(q: &BigRational, frac_bits: u64) -> Fixed {
    if q.is_zero() {
        return Fixed::zero(frac_bits);
    }
    let l = log2_rational(q, frac_bits);
    let qf = Fixed::from_rational(q, frac_bits);
    Fixed::zero(frac_bits).sub(&qf.mul(&l))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn log2_of_powers_is_exact_integer() {
        for e in -20i64..=20 {
            let q = if e >= 0 {
                rat(1 << e, 1)
            } else {
                rat(1, 1 << -e)
            };
            let l = log2_rational(&q, 128);
            let diff = (l.sub(&Fixed::from_int(e, 128))).raw().abs();
            assert!(diff <= BigInt::from(2u32), "e={e} diff={diff}");
        }
    }

    #[test]
    fn log2_matches_f64() {
        for (n, d) in [
            (3, 1),
            (3, 4),
            (1, 3),
            (98678557, 100000000),
            (1321443, 100000000),
            (1000003, 7),
        ] {
            let got = log2_rational(&rat(n, d), 100).to_f64();
            let want = (n as f64 / d as f64).log2();
            assert!((got - want).abs() < 1e-14, "{n}/{d}: {got} vs {want}");
        }
    }

    #[test]
    fn log2_three_to_forty_digits() {
        // log₂ 3 = 1.584962500721156181453738943947816508759814407692...
        let l = log2_rational(&rat(3, 1), frac_bits_for_digits(45));
        assert_eq!(
            l.to_decimal(40),
            "1.5849625007211561814537389439478165087598"
        );
    }

    #[test]
    fn decimal_rendering() {
        let x = Fixed::from_rational(&rat(-1, 8), 16);
        assert_eq!(x.to_decimal(4), "-0.1250");
        let y = Fixed::from_rational(&rat(2, 3), 64);
        assert_eq!(y.to_decimal(5), "0.66666");
        assert_eq!(Fixed::from_int(12, 8).to_significant(4), "12.00");
        assert_eq!(
            format!("{:.3}", Fixed::from_rational(&rat(7, 4), 8)),
            "1.750"
        );
    }

    #[test]
    fn arithmetic() {
        let a = Fixed::from_rational(&rat(3, 2), 64);
        let b = Fixed::from_rational(&rat(1, 4), 64);
        assert_eq!(a.mul(&b), Fixed::from_rational(&rat(3, 8), 64));
        assert_eq!(a.div(&b), Fixed::from_int(6, 64));
        assert_eq!(a.sub(&b).add(&b), a);
        assert!(a > b);
        assert_eq!(
            plogp_neg(&rat(1, 2), 64),
            Fixed::from_rational(&rat(1, 2), 64)
        );
    }
}
