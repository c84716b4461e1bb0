//! Decimal floating-point reals with a fixed number of significant digits.
//!
//! A [`Real`] is `mant · 10^exp` where `mant` carries exactly `digits`
//! significant decimal digits (or is zero). Field operations are correctly
//! rounded (round half to even). Elementary functions run at a higher working
//! precision and round once at the end.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Guard digits used by the elementary functions.
const GUARD: u32 = 12;
/// Sums that lose all but this many leading digits to cancellation are
/// flushed to zero.
const FLUSH_MARGIN: i64 = 10;
/// Largest |x| accepted by `exp`.
const EXP_LIMIT: f64 = 1e15;

thread_local! {
    static POW10: RefCell<Vec<BigUint>> = RefCell::new(vec![BigUint::one()]);
}

pub(crate) fn pow10(n: u32) -> BigUint {
    POW10.with(|cache| {
        let mut cache = cache.borrow_mut();
        if n as usize >= 512 {
            return BigUint::from(10u32).pow(n);
        }
        while cache.len() <= n as usize {
            let next = cache.last().unwrap() * 10u32;
            cache.push(next);
        }
        cache[n as usize].clone()
    })
}

/// Number of decimal digits of a nonzero integer.
pub(crate) fn num_digits(n: &BigUint) -> u32 {
    if n.is_zero() {
        return 1;
    }
    let bits = n.bits();
    let mut d = (((bits - 1) as f64) * std::f64::consts::LOG10_2).floor() as u32 + 1;
    while *n >= pow10(d) {
        d += 1;
    }
    while d > 1 && *n < pow10(d - 1) {
        d -= 1;
    }
    d
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Real {
    mant: BigInt,
    exp: i64,
    digits: u32,
}

impl Real {
    pub fn zero(digits: u32) -> Self {
        Real {
            mant: BigInt::zero(),
            exp: 0,
            digits,
        }
    }

    pub fn one(digits: u32) -> Self {
        Real::from_int(&BigInt::one(), digits)
    }

    pub fn from_int(n: &BigInt, digits: u32) -> Self {
        round(n.clone(), 0, false, digits)
    }

    pub fn from_i64(n: i64, digits: u32) -> Self {
        Real::from_int(&BigInt::from(n), digits)
    }

    /// Correctly rounded value of `numer / denom`.
    pub fn from_ratio(numer: &BigInt, denom: &BigInt, digits: u32) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        if numer.is_zero() {
            return Real::zero(digits);
        }
        let negative = numer.is_negative() != denom.is_negative();
        let p = numer.magnitude();
        let q = denom.magnitude();
        // Produce at least digits + 2 quotient digits before rounding.
        let k = digits as i64 + 2 + num_digits(q) as i64 - num_digits(p) as i64;
        let (n, d) = if k >= 0 {
            (p * pow10(k as u32), q.clone())
        } else {
            (p.clone(), q * pow10((-k) as u32))
        };
        let (quot, rem) = n.div_rem(&d);
        let sign = if negative { Sign::Minus } else { Sign::Plus };
        round(BigInt::from_biguint(sign, quot), -k, !rem.is_zero(), digits)
    }

    pub fn from_rational(q: &BigRational, digits: u32) -> Self {
        Real::from_ratio(q.numer(), q.denom(), digits)
    }

    /// Parse a decimal literal such as `-12.5e-3`.
    pub fn parse_decimal(text: &str, digits: u32) -> Option<Self> {
        let (sign, body) = match text.strip_prefix('-') {
            Some(rest) => (Sign::Minus, rest),
            None => (Sign::Plus, text),
        };
        let (mantissa, exp10) = match body.find(['e', 'E']) {
            Some(i) => (&body[..i], body[i + 1..].parse::<i64>().ok()?),
            None => (body, 0),
        };
        if exp10.abs() > 1_000_000_000_000_000 {
            return None;
        }
        let (int_part, frac_part) = match mantissa.find('.') {
            Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
            None => (mantissa, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        let all: String = [int_part, frac_part].concat();
        if !all.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let n = BigUint::parse_bytes(all.as_bytes(), 10)?;
        Some(round(
            BigInt::from_biguint(sign, n),
            exp10 - frac_part.len() as i64,
            false,
            digits,
        ))
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn signum(&self) -> Ordering {
        self.mant.cmp(&BigInt::zero())
    }

    /// Decimal exponent of the leading digit (`floor(log10 |x|)`), for nonzero x.
    pub fn magnitude(&self) -> i64 {
        self.exp + self.digits as i64 - 1
    }

    /// Re-round to a different number of significant digits.
    pub fn with_digits(&self, digits: u32) -> Self {
        round(self.mant.clone(), self.exp, false, digits)
    }

    /// Exact rational value.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant * BigInt::from(pow10(self.exp as u32)))
        } else {
            BigRational::new(self.mant.clone(), BigInt::from(pow10((-self.exp) as u32)))
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let lead = self.mant.to_f64().unwrap_or(f64::NAN);
        lead * 10f64.powi(self.exp.clamp(-400, 400) as i32)
    }

    /// `log10 |x|` as a float, robust to huge exponents.
    fn log10_abs(&self) -> f64 {
        let s = self.mant.magnitude().to_string();
        let head: f64 = format!("0.{}", &s[..s.len().min(17)]).parse().unwrap();
        head.log10() + (self.exp + s.len() as i64) as f64
    }

    pub fn neg(&self) -> Self {
        Real {
            mant: -&self.mant,
            exp: self.exp,
            digits: self.digits,
        }
    }

    pub fn abs(&self) -> Self {
        Real {
            mant: self.mant.abs(),
            exp: self.exp,
            digits: self.digits,
        }
    }

    pub fn add(&self, other: &Real) -> Real {
        debug_assert_eq!(self.digits, other.digits);
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (hi, lo) = if self.exp >= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        let gap = hi.exp - lo.exp;
        if gap > self.digits as i64 + 3 && hi.magnitude() > lo.magnitude() + self.digits as i64 + 3 {
            return hi.clone();
        }
        let n = &hi.mant * BigInt::from(pow10(gap as u32)) + &lo.mant;
        let sum = round(n, lo.exp, false, self.digits);
        let top = hi.magnitude().max(lo.magnitude());
        if !sum.is_zero() && sum.magnitude() <= top - self.digits as i64 + FLUSH_MARGIN - 1 {
            return Real::zero(self.digits);
        }
        sum
    }

    pub fn sub(&self, other: &Real) -> Real {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Real) -> Real {
        debug_assert_eq!(self.digits, other.digits);
        if self.is_zero() || other.is_zero() {
            return Real::zero(self.digits);
        }
        round(&self.mant * &other.mant, self.exp + other.exp, false, self.digits)
    }

    pub fn div(&self, other: &Real) -> Result<Real> {
        debug_assert_eq!(self.digits, other.digits);
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let q = Real::from_ratio(&self.mant, &other.mant, self.digits);
        Ok(q.scale10(self.exp - other.exp))
    }

    pub fn mul_int(&self, k: i64) -> Real {
        self.mul(&Real::from_i64(k, self.digits))
    }

    pub fn div_int(&self, k: i64) -> Real {
        self.div(&Real::from_i64(k, self.digits)).expect("nonzero divisor")
    }

    fn scale10(mut self, by: i64) -> Real {
        if !self.is_zero() {
            self.exp += by;
        }
        self
    }

    pub fn powi(&self, n: i64) -> Result<Real> {
        if n < 0 {
            return Real::one(self.digits).div(&self.powi(-n)?);
        }
        let mut base = self.clone();
        let mut acc = Real::one(self.digits);
        let mut n = n as u64;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    pub fn exp(&self) -> Result<Real> {
        let digits = self.digits;
        if self.is_zero() {
            return Ok(Real::one(digits));
        }
        let approx = self.to_f64().abs();
        if !(approx <= EXP_LIMIT) {
            return Err(Error::Domain(format!("exp argument out of range: {self}")));
        }
        // Halve until |y| < 2^-8, then square back.
        let halvings = if approx < 1.0 / 256.0 {
            0
        } else {
            (approx.log2().ceil() as i64 + 8).max(0) as u32
        };
        let work = digits + GUARD + (halvings as f64 * 0.302).ceil() as u32 + 2;
        let x = self.with_digits(work);
        let y = x
            .div(&Real::from_int(&(BigInt::one() << halvings), work))
            .expect("nonzero");
        let mut sum = Real::one(work);
        let mut term = Real::one(work);
        for n in 1.. {
            term = term.mul(&y).div_int(n);
            if term.is_zero() || term.magnitude() < sum.magnitude() - work as i64 - 2 {
                break;
            }
            sum = sum.add(&term);
        }
        for _ in 0..halvings {
            sum = sum.mul(&sum);
        }
        Ok(sum.with_digits(digits))
    }

    pub fn ln(&self) -> Result<Real> {
        if !self.is_positive() {
            return Err(Error::Domain(format!("log of non-positive value {self}")));
        }
        let digits = self.digits;
        let work = digits + GUARD;
        let x = self.with_digits(work);
        if x == Real::one(work) {
            return Ok(Real::zero(digits));
        }
        let guess = self.log10_abs() * std::f64::consts::LN_10;
        let mut y = Real::parse_decimal(&format!("{guess:e}"), work).expect("finite guess");
        // Halley iteration on exp(y) = x; cubic convergence from a float seed.
        for _ in 0..8 {
            let ey = y.exp()?;
            let num = x.sub(&ey).mul_int(2);
            if num.is_zero() {
                break;
            }
            let corr = num.div(&x.add(&ey))?;
            y = y.add(&corr);
            if corr.is_zero() || y.is_zero() || corr.magnitude() < y.magnitude() - work as i64 + 3 {
                break;
            }
        }
        Ok(y.with_digits(digits))
    }

    /// Real `n`-th root. Odd roots of negatives are negative; even roots of
    /// negatives are a domain error.
    pub fn nth_root(&self, n: u32) -> Result<Real> {
        assert!(n >= 1);
        if self.is_zero() || n == 1 {
            return Ok(self.clone());
        }
        if self.is_negative() {
            if n % 2 == 0 {
                return Err(Error::Domain(format!("even root of negative value {self}")));
            }
            return Ok(self.neg().nth_root(n)?.neg());
        }
        let work = self.digits + 3;
        let m = self.mant.magnitude();
        let need = (n as i64) * (work as i64) - num_digits(m) as i64;
        let j0 = need.max(0);
        let j = j0 + (self.exp - j0).rem_euclid(n as i64);
        let scaled = m * pow10(j as u32);
        let r = scaled.nth_root(n);
        let exact = r.pow(n) == scaled;
        Ok(round(
            BigInt::from(r),
            (self.exp - j) / n as i64,
            !exact,
            self.digits,
        ))
    }

    /// `(sin x, cos x)` by their Taylor series.
    pub fn sin_cos(&self) -> Result<(Real, Real)> {
        let digits = self.digits;
        let approx = self.to_f64().abs();
        if !(approx <= 1e6) {
            return Err(Error::Domain(format!("sin/cos argument out of range: {self}")));
        }
        let work = digits + GUARD + (approx * std::f64::consts::LOG10_E).ceil() as u32;
        let x = self.with_digits(work);
        let x2 = x.mul(&x);
        let mut sin = x.clone();
        let mut cos = Real::one(work);
        let mut term_s = x.clone();
        let mut term_c = Real::one(work);
        let floor = -(work as i64) - 4;
        for k in 1i64.. {
            term_c = term_c.mul(&x2).div_int((2 * k - 1) * (2 * k)).neg();
            term_s = term_s.mul(&x2).div_int((2 * k) * (2 * k + 1)).neg();
            cos = cos.add(&term_c);
            sin = sin.add(&term_s);
            let small = |t: &Real| t.is_zero() || t.magnitude() < floor;
            if small(&term_c) && small(&term_s) {
                break;
            }
        }
        Ok((sin.with_digits(digits), cos.with_digits(digits)))
    }
}

/// Round the exact value `n · 10^e` to `digits` significant digits. When
/// `sticky` is set the true magnitude is slightly above `|n| · 10^e`.
fn round(n: BigInt, e: i64, sticky: bool, digits: u32) -> Real {
    if n.is_zero() {
        return Real::zero(digits);
    }
    let (sign, mag) = n.into_parts();
    let d = num_digits(&mag);
    let (mut q, mut shift) = if d > digits {
        let shift = d - digits;
        let unit = pow10(shift);
        let (mut q, r) = mag.div_rem(&unit);
        let twice = r * 2u32;
        let up = match twice.cmp(&unit) {
            Ordering::Greater => true,
            Ordering::Equal => sticky || q.is_odd(),
            Ordering::Less => false,
        };
        if up {
            q += 1u32;
        }
        (q, shift as i64)
    } else {
        let pad = digits - d;
        (mag * pow10(pad), -(pad as i64))
    };
    if q == pow10(digits) {
        q /= 10u32;
        shift += 1;
    }
    Real {
        mant: BigInt::from_biguint(sign, q),
        exp: e + shift,
        digits,
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Real {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb || sa == Ordering::Equal {
            return sa.cmp(&sb);
        }
        let by_mag = self
            .magnitude()
            .cmp(&other.magnitude())
            .then_with(|| {
                let gap = self.exp - other.exp;
                if gap >= 0 {
                    (self.mant.magnitude() * pow10(gap as u32)).cmp(other.mant.magnitude())
                } else {
                    self.mant
                        .magnitude()
                        .cmp(&(other.mant.magnitude() * pow10((-gap) as u32)))
                }
            });
        if sa == Ordering::Less {
            by_mag.reverse()
        } else {
            by_mag
        }
    }
}

impl fmt::Display for Real {
    /// All significant digits; positional for moderate magnitudes, otherwise
    /// scientific (`d.ddd…e±k`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        if self.is_negative() {
            f.write_str("-")?;
        }
        let s = self.mant.magnitude().to_string();
        let lead = self.magnitude();
        if (-6..self.digits as i64).contains(&lead) {
            if lead < 0 {
                write!(f, "0.{}{}", "0".repeat((-lead - 1) as usize), s)
            } else {
                let (int, frac) = s.split_at(lead as usize + 1);
                if frac.is_empty() {
                    write!(f, "{int}.0")
                } else {
                    write!(f, "{int}.{frac}")
                }
            }
        } else {
            let (head, tail) = s.split_at(1);
            let tail = if tail.is_empty() { "0" } else { tail };
            write!(f, "{head}.{tail}e{lead}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Real {
        Real::parse_decimal(s, 50).unwrap()
    }

    #[test]
    fn one_third_long_division() {
        // Oracle: schoolbook long division of 1 by 3, 50 digits.
        let mut digits = String::new();
        let mut rem = 1u32;
        for _ in 0..51 {
            rem *= 10;
            digits.push(char::from(b'0' + (rem / 3) as u8));
            rem %= 3;
        }
        let expected = format!("0.{}", &digits[..50]);
        let third = Real::from_ratio(&1.into(), &3.into(), 50);
        assert_eq!(third.to_string(), expected);
        assert_eq!(r("1").div(&r("3")).unwrap(), third);
    }

    #[test]
    fn rounding_half_even() {
        assert_eq!(Real::parse_decimal("2.5", 1).unwrap().to_string(), "2.0");
        assert_eq!(Real::parse_decimal("3.5", 1).unwrap().to_string(), "4.0");
        assert_eq!(Real::parse_decimal("9.96", 2).unwrap().to_string(), "10.0");
        assert_eq!(Real::parse_decimal("-0.0001234", 3).unwrap().to_string(), "-0.000123");
    }

    #[test]
    fn display_parse_round_trip() {
        for s in ["1", "-2.5", "1e-30", "123456789e40", "0.000001"] {
            let x = r(s);
            assert_eq!(Real::parse_decimal(&x.to_string(), 50).unwrap(), x, "{s}");
        }
    }

    #[test]
    fn order_and_signs() {
        assert!(r("-3") < r("-2"));
        assert!(r("1e-9") > Real::zero(50));
        assert!(r("100") > r("99.5"));
        assert_eq!(r("1").cmp(&r("1.0")), Ordering::Equal);
    }

    #[test]
    fn cancellation_is_flushed() {
        let a = r("1").div(&r("3")).unwrap();
        let b = a.mul(&r("3"));
        assert!(b.sub(&r("1")).is_zero());
        // A genuinely small difference survives.
        assert!(!r("1").sub(&r("0.9999999999")).is_zero());
    }

    #[test]
    fn transcendental_domain_errors() {
        assert!(r("-1").ln().is_err());
        assert!(Real::zero(50).ln().is_err());
        assert!(r("-4").nth_root(2).is_err());
        assert_eq!(r("-8").nth_root(3).unwrap(), r("-2"));
        assert!(r("1e20").exp().is_err());
    }

    #[test]
    fn exact_roots_are_exact() {
        assert_eq!(r("16").nth_root(4).unwrap(), r("2"));
        assert_eq!(r("0.25").nth_root(2).unwrap(), r("0.5"));
    }

    #[test]
    fn sin_cos_at_zero() {
        let (s, c) = Real::zero(50).sin_cos().unwrap();
        assert!(s.is_zero());
        assert_eq!(c, r("1"));
    }
}
