//! The coefficient field ℝ in two modes: exact rationals and fixed-precision
//! decimal reals.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

/// How coefficients are represented in a session.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoeffMode {
    Rational,
    /// Decimal reals with this many significant digits.
    Real(u32),
}

impl CoeffMode {
    pub fn tolerance(self) -> Option<Tolerance> {
        match self {
            CoeffMode::Rational => None,
            CoeffMode::Real(p) => Some(Tolerance::for_digits(p)),
        }
    }
}

impl fmt::Display for CoeffMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffMode::Rational => f.write_str("rational"),
            CoeffMode::Real(p) => write!(f, "real:{p}"),
        }
    }
}

/// Equality threshold for real mode: `10^-(P-10)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tolerance {
    /// `epsilon = 10^(-exponent)`.
    pub exponent: u32,
}

impl Tolerance {
    pub fn for_digits(p: u32) -> Self {
        Tolerance {
            exponent: p.saturating_sub(10).max(1),
        }
    }

    pub fn from_exponent(exponent: u32) -> Self {
        Tolerance { exponent }
    }

    pub fn epsilon(&self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(10).pow(self.exponent))
    }

    /// Scaled closeness: `|a - b| <= epsilon * max(1, |a|, |b|)`.
    pub fn close(&self, a: &Coeff, b: &Coeff) -> bool {
        let (a, b) = (a.to_rational(), b.to_rational());
        let scale = a.abs().max(b.abs()).max(BigRational::one());
        (a - b).abs() <= self.epsilon() * scale
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coeff {
    Rational(BigRational),
    Real(Real),
}

fn mode_mismatch(a: &Coeff, b: &Coeff) -> Error {
    Error::ModeMismatch(a.mode().to_string(), b.mode().to_string())
}

impl Coeff {
    pub fn zero(mode: CoeffMode) -> Self {
        match mode {
            CoeffMode::Rational => Coeff::Rational(BigRational::zero()),
            CoeffMode::Real(p) => Coeff::Real(Real::zero(p)),
        }
    }

    pub fn one(mode: CoeffMode) -> Self {
        Coeff::from_i64(1, mode)
    }

    pub fn from_i64(n: i64, mode: CoeffMode) -> Self {
        Coeff::from_rational(&BigRational::from_integer(n.into()), mode)
    }

    pub fn from_rational(q: &BigRational, mode: CoeffMode) -> Self {
        match mode {
            CoeffMode::Rational => Coeff::Rational(q.clone()),
            CoeffMode::Real(p) => Coeff::Real(Real::from_rational(q, p)),
        }
    }

    /// Convert to `mode`: exact for rationals, re-rounded for reals.
    pub(crate) fn with_mode(&self, mode: CoeffMode) -> Coeff {
        match (self, mode) {
            (Coeff::Real(r), CoeffMode::Real(p)) => Coeff::Real(r.with_digits(p)),
            (c, m) => Coeff::from_rational(&c.to_rational(), m),
        }
    }

    pub fn mode(&self) -> CoeffMode {
        match self {
            Coeff::Rational(_) => CoeffMode::Rational,
            Coeff::Real(r) => CoeffMode::Real(r.digits()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Rational(q) => q.is_zero(),
            Coeff::Real(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Coeff::Rational(q) if q.is_one())
    }

    pub fn signum(&self) -> Ordering {
        match self {
            Coeff::Rational(q) => q.cmp(&BigRational::zero()),
            Coeff::Real(r) => r.signum(),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    /// Exact rational value (the stored decimal in real mode).
    pub fn to_rational(&self) -> BigRational {
        match self {
            Coeff::Rational(q) => q.clone(),
            Coeff::Real(r) => r.to_rational(),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Coeff::Rational(q) => Some(q),
            Coeff::Real(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Coeff::Rational(q) => q.to_f64().unwrap_or(f64::NAN),
            Coeff::Real(r) => r.to_f64(),
        }
    }

    pub fn neg(&self) -> Coeff {
        match self {
            Coeff::Rational(q) => Coeff::Rational(-q),
            Coeff::Real(r) => Coeff::Real(r.neg()),
        }
    }

    pub fn abs(&self) -> Coeff {
        match self {
            Coeff::Rational(q) => Coeff::Rational(q.abs()),
            Coeff::Real(r) => Coeff::Real(r.abs()),
        }
    }

    pub fn try_add(&self, other: &Coeff) -> Result<Coeff> {
        match (self, other) {
            (Coeff::Rational(a), Coeff::Rational(b)) => Ok(Coeff::Rational(a + b)),
            (Coeff::Real(a), Coeff::Real(b)) if a.digits() == b.digits() => Ok(Coeff::Real(a.add(b))),
            _ => Err(mode_mismatch(self, other)),
        }
    }

    pub fn try_sub(&self, other: &Coeff) -> Result<Coeff> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Coeff) -> Result<Coeff> {
        match (self, other) {
            (Coeff::Rational(a), Coeff::Rational(b)) => Ok(Coeff::Rational(a * b)),
            (Coeff::Real(a), Coeff::Real(b)) if a.digits() == b.digits() => Ok(Coeff::Real(a.mul(b))),
            _ => Err(mode_mismatch(self, other)),
        }
    }

    /// Division; in real mode the divisor must exceed the tolerance in
    /// magnitude.
    pub fn try_div(&self, other: &Coeff) -> Result<Coeff> {
        match (self, other) {
            (Coeff::Rational(a), Coeff::Rational(b)) => {
                if b.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Coeff::Rational(a / b))
                }
            }
            (Coeff::Real(a), Coeff::Real(b)) if a.digits() == b.digits() => {
                let tol = Tolerance::for_digits(b.digits());
                if b.is_zero() || b.magnitude() < -(tol.exponent as i64) {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Coeff::Real(a.div(b)?))
                }
            }
            _ => Err(mode_mismatch(self, other)),
        }
    }

    pub fn try_cmp(&self, other: &Coeff) -> Result<Ordering> {
        match (self, other) {
            (Coeff::Rational(a), Coeff::Rational(b)) => Ok(a.cmp(b)),
            (Coeff::Real(a), Coeff::Real(b)) if a.digits() == b.digits() => Ok(a.cmp(b)),
            _ => Err(mode_mismatch(self, other)),
        }
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        self.try_add(other).expect("coefficient modes agree")
    }

    pub fn sub(&self, other: &Coeff) -> Coeff {
        self.try_sub(other).expect("coefficient modes agree")
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        self.try_mul(other).expect("coefficient modes agree")
    }

    pub fn mul_rational(&self, q: &BigRational) -> Coeff {
        self.mul(&Coeff::from_rational(q, self.mode()))
    }

    pub fn powi(&self, n: i64) -> Result<Coeff> {
        match self {
            Coeff::Rational(q) => {
                if n < 0 && q.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(Coeff::Rational(num_traits::pow::Pow::pow(q, n as i32)))
            }
            Coeff::Real(r) => Ok(Coeff::Real(r.powi(n)?)),
        }
    }

    /// Real exponential. In rational mode only `exp(0)` is exact.
    pub fn exp(&self) -> Result<Coeff> {
        match self {
            Coeff::Rational(q) if q.is_zero() => Ok(Coeff::Rational(BigRational::one())),
            Coeff::Rational(q) => Err(Error::TranscendentalInRationalMode(format!("exp({})", fmt_q(q)))),
            Coeff::Real(r) => Ok(Coeff::Real(r.exp()?)),
        }
    }

    /// Natural logarithm; requires a positive argument.
    pub fn ln(&self) -> Result<Coeff> {
        if !self.is_positive() {
            return Err(Error::Domain(format!("log of non-positive value {self}")));
        }
        match self {
            Coeff::Rational(q) if q.is_one() => Ok(Coeff::Rational(BigRational::zero())),
            Coeff::Rational(q) => Err(Error::TranscendentalInRationalMode(format!("log({})", fmt_q(q)))),
            Coeff::Real(r) => Ok(Coeff::Real(r.ln()?)),
        }
    }

    /// Real `n`-th root. Even roots need a non-negative argument; in rational
    /// mode the root must itself be rational.
    pub fn nth_root(&self, n: u32) -> Result<Coeff> {
        if n == 0 {
            return Err(Error::Domain("zeroth root".into()));
        }
        if n % 2 == 0 && self.is_negative() {
            return Err(Error::Domain(format!("even root of negative value {self}")));
        }
        match self {
            Coeff::Rational(q) => exact_root(q, n)
                .map(Coeff::Rational)
                .ok_or_else(|| Error::TranscendentalInRationalMode(format!("root({n}, {})", fmt_q(q)))),
            Coeff::Real(r) => Ok(Coeff::Real(r.nth_root(n)?)),
        }
    }

    /// `a^q` for rational `q = num/den`, via the `den`-th root.
    pub fn pow_rational(&self, q: &BigRational) -> Result<Coeff> {
        let den = q
            .denom()
            .to_u32()
            .ok_or_else(|| Error::Domain(format!("root index too large: {}", q.denom())))?;
        let num = q
            .numer()
            .to_i64()
            .ok_or_else(|| Error::Domain(format!("power too large: {}", q.numer())))?;
        self.nth_root(den)?.powi(num)
    }

    pub fn sin_cos(&self) -> Result<(Coeff, Coeff)> {
        match self {
            Coeff::Rational(q) if q.is_zero() => Ok((
                Coeff::Rational(BigRational::zero()),
                Coeff::Rational(BigRational::one()),
            )),
            Coeff::Rational(q) => Err(Error::TranscendentalInRationalMode(format!("sin/cos({})", fmt_q(q)))),
            Coeff::Real(r) => {
                let (s, c) = r.sin_cos()?;
                Ok((Coeff::Real(s), Coeff::Real(c)))
            }
        }
    }
}

fn fmt_q(q: &BigRational) -> String {
    Coeff::Rational(q.clone()).to_string()
}

fn exact_root(q: &BigRational, n: u32) -> Option<BigRational> {
    let root_int = |z: &BigInt| -> Option<BigInt> {
        let r = z.nth_root(n);
        (num_traits::pow::Pow::pow(&r, n) == *z).then_some(r)
    };
    Some(BigRational::new(root_int(q.numer())?, root_int(q.denom())?))
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Rational(q) => crate::exponent::fmt_rational(q, f),
            Coeff::Real(r) => write!(f, "{r}~"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Coeff {
        Coeff::Rational(BigRational::new(n.into(), d.into()))
    }

    const P: CoeffMode = CoeffMode::Real(50);

    #[test]
    fn rational_field_examples() {
        assert_eq!(q(2, 3).try_add(&q(1, 6)).unwrap(), q(5, 6));
        assert_eq!(q(1, 3).try_mul(&q(3, 1)).unwrap(), q(1, 1));
        assert_eq!(q(1, 1).try_div(&q(0, 1)), Err(Error::DivisionByZero));
        assert_eq!(q(-2, 3).abs(), q(2, 3));
        assert_eq!(q(-1, 2).try_cmp(&q(1, 3)).unwrap(), Ordering::Less);
    }

    #[test]
    fn mixed_modes_rejected() {
        let r = Coeff::one(P);
        assert!(matches!(q(1, 1).try_add(&r), Err(Error::ModeMismatch(..))));
        let r40 = Coeff::one(CoeffMode::Real(40));
        assert!(r.try_mul(&r40).is_err());
    }

    #[test]
    fn real_division_by_tiny_rejected() {
        let tiny = Coeff::Real(Real::parse_decimal("1e-45", 50).unwrap());
        assert_eq!(Coeff::one(P).try_div(&tiny), Err(Error::DivisionByZero));
        let ok = Coeff::Real(Real::parse_decimal("1e-30", 50).unwrap());
        assert!(Coeff::one(P).try_div(&ok).is_ok());
    }

    #[test]
    fn rational_mode_transcendentals() {
        assert_eq!(q(0, 1).exp().unwrap(), q(1, 1));
        assert_eq!(q(1, 1).ln().unwrap(), q(0, 1));
        assert!(matches!(q(1, 1).exp(), Err(Error::TranscendentalInRationalMode(_))));
        assert_eq!(q(8, 27).nth_root(3).unwrap(), q(2, 3));
        assert_eq!(q(-8, 27).nth_root(3).unwrap(), q(-2, 3));
        assert!(matches!(q(2, 1).nth_root(2), Err(Error::TranscendentalInRationalMode(_))));
        assert!(matches!(q(-4, 1).nth_root(2), Err(Error::Domain(_))));
        assert!(matches!(q(-1, 1).ln(), Err(Error::Domain(_))));
        assert_eq!(
            q(4, 9).pow_rational(&BigRational::new((-3).into(), 2.into())).unwrap(),
            q(27, 8)
        );
    }

    #[test]
    fn exp_one_matches_factorial_series() {
        // Oracle: Σ_{k≤N} 1/k! with tail bound 2/(N+1)! < 10^-60.
        let mut sum = BigRational::zero();
        let mut term = BigRational::one();
        let mut k = 0i64;
        loop {
            sum += &term;
            k += 1;
            term /= BigRational::from_integer(k.into());
            if term < BigRational::new(1.into(), BigInt::from(10).pow(62u32)) {
                break;
            }
        }
        let e = Coeff::one(P).exp().unwrap();
        let tol = Tolerance::for_digits(50);
        assert!(tol.close(&e, &Coeff::Rational(sum.clone())));
        assert!(e.to_string().starts_with("2.7182818284590452353602874713526624977572470937000"));
        // Correct rounding of the 50-digit value.
        assert_eq!(Coeff::Real(Real::from_rational(&sum, 50)), e);
    }

    #[test]
    fn display_modes() {
        assert_eq!(q(-3, 4).to_string(), "-3/4");
        assert_eq!(Coeff::from_i64(2, CoeffMode::Real(15)).to_string(), "2.00000000000000~");
    }
}
