//! Truncated Hahn series over Γ = ℚ^d.
//!
//! A [`Series`] stores finitely many nonzero terms below a cutoff. It stands
//! for every Hahn series that agrees with those terms on all exponents below
//! the cutoff; a cutoff of +∞ means the value is known exactly. Every
//! operation propagates cutoffs so that the result is a true statement about
//! all completions of its inputs.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::coeff::{Coeff, CoeffMode, Tolerance};
use crate::error::{Error, Result};
use crate::expand;
use crate::exponent::{Bound, Exponent};

/// Ambient dimension and coefficient mode shared by all operands of an
/// operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Context {
    pub dim: usize,
    pub mode: CoeffMode,
}

impl Context {
    pub fn new(dim: usize, mode: CoeffMode) -> Self {
        Context { dim, mode }
    }

    pub fn rational(dim: usize) -> Self {
        Context::new(dim, CoeffMode::Rational)
    }

    pub fn coeff(&self, q: &BigRational) -> Coeff {
        Coeff::from_rational(q, self.mode)
    }
}

/// The dominant term `c·t^gamma` of a nonzero series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingTerm {
    pub gamma: Exponent,
    pub c: Coeff,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    ctx: Context,
    terms: BTreeMap<Exponent, Coeff>,
    cutoff: Bound,
}

impl Series {
    /// Build a series from raw terms: repeated exponents are summed, zero
    /// coefficients and terms at or beyond the cutoff are dropped.
    pub fn normalize<I>(ctx: Context, raw: I, cutoff: Bound) -> Result<Series>
    where
        I: IntoIterator<Item = (Exponent, Coeff)>,
    {
        if let Bound::Finite(c) = &cutoff {
            check_exp_dim(ctx, c)?;
        }
        let mut terms: BTreeMap<Exponent, Coeff> = BTreeMap::new();
        for (e, c) in raw {
            check_exp_dim(ctx, &e)?;
            if c.mode() != ctx.mode {
                return Err(Error::ModeMismatch(ctx.mode.to_string(), c.mode().to_string()));
            }
            if !cutoff.admits(&e) {
                continue;
            }
            match terms.entry(e) {
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    let sum = o.get().add(&c);
                    *o.get_mut() = sum;
                }
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(c);
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Series { ctx, terms, cutoff })
    }

    /// Internal constructor for already-canonical data.
    pub(crate) fn from_parts(ctx: Context, mut terms: BTreeMap<Exponent, Coeff>, cutoff: Bound) -> Series {
        terms.retain(|e, c| !c.is_zero() && cutoff.admits(e));
        Series { ctx, terms, cutoff }
    }

    pub fn zero(ctx: Context) -> Series {
        Series {
            ctx,
            terms: BTreeMap::new(),
            cutoff: Bound::Infinity,
        }
    }

    /// `O(t^w)`: no known terms, cutoff `w`.
    pub fn big_o(ctx: Context, w: Exponent) -> Series {
        Series {
            ctx,
            terms: BTreeMap::new(),
            cutoff: Bound::Finite(w),
        }
    }

    pub fn monomial(ctx: Context, c: Coeff, gamma: Exponent) -> Series {
        Series::from_parts(ctx, BTreeMap::from([(gamma, c)]), Bound::Infinity)
    }

    pub fn constant(ctx: Context, c: Coeff) -> Series {
        Series::monomial(ctx, c, Exponent::zero(ctx.dim))
    }

    pub fn one(ctx: Context) -> Series {
        Series::constant(ctx, Coeff::one(ctx.mode))
    }

    pub fn from_rational(ctx: Context, q: &BigRational) -> Series {
        Series::constant(ctx, ctx.coeff(q))
    }

    /// The monomial `t^gamma`.
    pub fn t_pow(ctx: Context, gamma: Exponent) -> Series {
        Series::monomial(ctx, Coeff::one(ctx.mode), gamma)
    }

    pub fn ctx(&self) -> Context {
        self.ctx
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Coeff> {
        &self.terms
    }

    pub fn cutoff(&self) -> &Bound {
        &self.cutoff
    }

    pub fn is_exact(&self) -> bool {
        self.cutoff.is_infinite()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.is_exact()
    }

    /// Coefficient at `gamma`; errors if `gamma` is not below the cutoff.
    pub fn coefficient(&self, gamma: &Exponent) -> Result<Coeff> {
        if !self.cutoff.admits(gamma) {
            return Err(Error::InsufficientPrecision(format!(
                "coefficient of t^{gamma} lies beyond cutoff {}",
                self.cutoff
            )));
        }
        Ok(self
            .terms
            .get(gamma)
            .cloned()
            .unwrap_or_else(|| Coeff::zero(self.ctx.mode)))
    }

    pub fn leading(&self) -> Option<LeadingTerm> {
        self.terms.iter().next().map(|(g, c)| LeadingTerm {
            gamma: g.clone(),
            c: c.clone(),
        })
    }

    pub(crate) fn leading_or_err(&self) -> Result<LeadingTerm> {
        self.leading().ok_or_else(|| {
            Error::InsufficientPrecision(format!("no known terms below cutoff {}", self.cutoff))
        })
    }

    /// The least stored exponent, or the cutoff when nothing is stored.
    pub(crate) fn v_min(&self) -> Bound {
        match self.terms.keys().next() {
            Some(e) => Bound::Finite(e.clone()),
            None => self.cutoff.clone(),
        }
    }

    /// v(a): least exponent of the support, +∞ for exact zero.
    pub fn valuation(&self) -> Result<Bound> {
        if let Some(e) = self.terms.keys().next() {
            return Ok(Bound::Finite(e.clone()));
        }
        if self.is_exact() {
            Ok(Bound::Infinity)
        } else {
            Err(Error::InsufficientPrecision(format!(
                "valuation of O(t^{}) is unknown",
                self.cutoff
            )))
        }
    }

    pub(crate) fn check_ctx(&self, other: &Series) -> Result<()> {
        if self.ctx.dim != other.ctx.dim {
            return Err(Error::dim(self.ctx.dim, other.ctx.dim));
        }
        if self.ctx.mode != other.ctx.mode {
            return Err(Error::ModeMismatch(
                self.ctx.mode.to_string(),
                other.ctx.mode.to_string(),
            ));
        }
        Ok(())
    }

    pub fn neg(&self) -> Series {
        Series {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
            cutoff: self.cutoff.clone(),
        }
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.check_ctx(other)?;
        let cutoff = self.cutoff.clone().min(other.cutoff.clone());
        let mut terms: BTreeMap<Exponent, Coeff> = self
            .terms
            .iter()
            .filter(|(e, _)| cutoff.admits(e))
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        for (e, c) in &other.terms {
            if !cutoff.admits(e) {
                continue;
            }
            match terms.get_mut(e) {
                Some(acc) => *acc = acc.add(c),
                None => {
                    terms.insert(e.clone(), c.clone());
                }
            }
        }
        Ok(Series::from_parts(self.ctx, terms, cutoff))
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.add(&other.neg())
    }

    /// Cauchy product. Result cutoff is
    /// `min(cutoff_a + v_min(b), cutoff_b + v_min(a))`; an exact zero
    /// factor annihilates.
    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.check_ctx(other)?;
        if self.is_exact_zero() || other.is_exact_zero() {
            return Ok(Series::zero(self.ctx));
        }
        let cutoff = shifted(&self.cutoff, &other.v_min()).min(shifted(&other.cutoff, &self.v_min()));
        Ok(self.mul_below(other, &cutoff))
    }

    /// Product restricted to exponents below `bound`, with `bound` as the
    /// cutoff. Callers guarantee that `bound` is sound for the operands.
    pub(crate) fn mul_below(&self, other: &Series, bound: &Bound) -> Series {
        guarded(&[self, other], |v| Ok(v[0].mul_below_raw(&v[1], bound))).expect("multiplication is infallible")
    }

    fn mul_below_raw(&self, other: &Series, bound: &Bound) -> Series {
        let mut acc: BTreeMap<Exponent, Coeff> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if !bound.admits(&e) {
                    break;
                }
                let p = ca.mul(cb);
                match acc.get_mut(&e) {
                    Some(x) => *x = x.add(&p),
                    None => {
                        acc.insert(e, p);
                    }
                }
            }
        }
        Series::from_parts(self.ctx, acc, bound.clone())
    }

    /// The same series with coefficients re-rounded to `ctx`'s mode. Only
    /// meaningful between real modes of different precision.
    pub(crate) fn with_ctx(&self, ctx: Context) -> Series {
        Series::from_parts(
            ctx,
            self.terms.iter().map(|(e, c)| (e.clone(), c.with_mode(ctx.mode))).collect(),
            self.cutoff.clone(),
        )
    }

    /// Multiply every coefficient by `c`.
    pub fn scale(&self, c: &Coeff) -> Series {
        if c.is_zero() {
            return Series::zero(self.ctx);
        }
        Series::from_parts(
            self.ctx,
            self.terms.iter().map(|(e, x)| (e.clone(), x.mul(c))).collect(),
            self.cutoff.clone(),
        )
    }

    /// Multiply by the monomial `t^gamma`.
    pub fn shift(&self, gamma: &Exponent) -> Series {
        Series {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(e, c)| (e + gamma, c.clone())).collect(),
            cutoff: self.cutoff.shift(gamma),
        }
    }

    /// Lower the cutoff to `min(cutoff, w)`.
    pub fn truncate(&self, w: &Bound) -> Series {
        let cutoff = self.cutoff.clone().min(w.clone());
        Series::from_parts(self.ctx, self.terms.clone(), cutoff)
    }

    /// Sign of the series: the sign of its leading coefficient.
    pub fn signum(&self) -> Result<Ordering> {
        match self.leading() {
            Some(l) => Ok(l.c.signum()),
            None if self.is_exact() => Ok(Ordering::Equal),
            None => Err(Error::Indeterminate(format!(
                "sign of O(t^{}) is unknown",
                self.cutoff
            ))),
        }
    }

    /// Order comparison via the sign of `self - other`.
    pub fn compare(&self, other: &Series) -> Result<Ordering> {
        let d = self.sub(other)?;
        d.signum().map_err(|_| {
            Error::Indeterminate(format!(
                "operands agree up to O(t^{}) and cannot be ordered",
                d.cutoff
            ))
        })
    }

    pub fn abs(&self) -> Result<Series> {
        Ok(if self.signum()? == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        })
    }

    /// Multiplicative inverse, totalized by `invert(0) = 0`.
    ///
    /// Writing `a = c·t^γ·(1+ε)`, the result is `c⁻¹·t^(-γ)·Σ(-ε)^k` with
    /// cutoff `min(target, cutoff_a - 2γ)`; exact when `a` is an exact
    /// monomial.
    pub fn invert(&self, target: &Exponent) -> Result<Series> {
        guarded(&[self], |v| {
            let a = &v[0];
            a.invert_raw(target)
        })
    }

    fn invert_raw(&self, target: &Exponent) -> Result<Series> {
        check_exp_dim(self.ctx, target)?;
        if self.is_exact_zero() {
            return Ok(Series::zero(self.ctx));
        }
        let (lead, eps) = expand::split_leading(self)?;
        let gamma = &lead.gamma;
        let eff = Bound::Finite(target.clone()).min(self.cutoff.unshift(&gamma.scale_int(2)));
        let unit = expand::inverse_unit(&eps, &eff.shift(gamma))?;
        let c_inv = Coeff::one(self.ctx.mode).try_div(&lead.c)?;
        Ok(unit.shift(&-gamma).scale(&c_inv))
    }

    /// Real `n`-th root, totalized: `0` for `a ≤ 0` with `n` even, and
    /// `-root(-a)` for negative `a` with `n` odd.
    pub fn nth_root(&self, n: u32, target: &Exponent) -> Result<Series> {
        guarded(&[self], |v| {
            let a = &v[0];
            a.nth_root_raw(n, target)
        })
    }

    fn nth_root_raw(&self, n: u32, target: &Exponent) -> Result<Series> {
        check_exp_dim(self.ctx, target)?;
        if n == 0 {
            return Err(Error::Domain("zeroth root".into()));
        }
        if self.is_exact_zero() {
            return Ok(Series::zero(self.ctx));
        }
        let lead = self.leading_or_err()?;
        if lead.c.is_negative() {
            if n % 2 == 0 {
                return Ok(Series::zero(self.ctx));
            }
            return Ok(self.neg().nth_root(n, target)?.neg());
        }
        if n == 1 {
            return Ok(self.clone());
        }
        let (lead, eps) = expand::split_leading(self)?;
        let root_c = lead.c.nth_root(n)?;
        let inv_n = BigRational::new(BigInt::one(), BigInt::from(n));
        let gamma_n = lead.gamma.scale(&inv_n);
        let eff = Bound::Finite(target.clone())
            .min(self.cutoff.unshift(&lead.gamma).shift(&gamma_n));
        let unit = expand::power_unit(&eps, &inv_n, &eff.unshift(&gamma_n))?;
        Ok(unit.shift(&gamma_n).scale(&root_c))
    }

    /// Integer power; negative powers go through [`Series::invert`].
    pub fn powi(&self, n: i64, target: &Exponent) -> Result<Series> {
        guarded(&[self], |v| {
            let a = &v[0];
            a.powi_raw(n, target)
        })
    }

    fn powi_raw(&self, n: i64, target: &Exponent) -> Result<Series> {
        if n < 0 {
            return self.powi_raw(-n, target)?.invert_raw(target);
        }
        let mut acc = Series::one(self.ctx);
        let mut base = self.clone();
        let mut k = n as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `a^q` for rational `q`: the `den(q)`-th root raised to `num(q)`.
    pub fn pow_rational(&self, q: &BigRational, target: &Exponent) -> Result<Series> {
        if q.is_integer() {
            let n = i64::try_from(q.numer()).map_err(|_| Error::Domain("power too large".into()))?;
            return self.powi(n, target);
        }
        let den = u32::try_from(q.denom()).map_err(|_| Error::Domain("root index too large".into()))?;
        let num = i64::try_from(q.numer()).map_err(|_| Error::Domain("power too large".into()))?;
        self.nth_root(den, target)?.powi(num, target)
    }

    /// Compare with `other` on all exponents below the common cutoff:
    /// exactly in rational mode, within `tol` (scaled per coefficient) in
    /// real mode. Returns the first exponent where they differ.
    pub fn first_disagreement(&self, other: &Series, tol: Option<&Tolerance>) -> Result<Option<Exponent>> {
        self.check_ctx(other)?;
        let cutoff = self.cutoff.clone().min(other.cutoff.clone());
        let zero = Coeff::zero(self.ctx.mode);
        let mut exps: Vec<&Exponent> = self
            .terms
            .keys()
            .chain(other.terms.keys())
            .filter(|e| cutoff.admits(e))
            .collect();
        exps.sort();
        exps.dedup();
        for e in exps {
            let a = self.terms.get(e).unwrap_or(&zero);
            let b = other.terms.get(e).unwrap_or(&zero);
            let same = match tol {
                Some(t) if matches!(self.ctx.mode, CoeffMode::Real(_)) => t.close(a, b),
                _ => a == b,
            };
            if !same {
                return Ok(Some(e.clone()));
            }
        }
        Ok(None)
    }

    pub fn agrees_with(&self, other: &Series, tol: Option<&Tolerance>) -> Result<bool> {
        Ok(self.first_disagreement(other, tol)?.is_none())
    }

    /// Largest scaled coefficient difference `|a-b| / max(1,|a|,|b|)` over the
    /// common known range, as an f64 (for reporting).
    pub fn max_scaled_error(&self, other: &Series) -> Result<f64> {
        self.check_ctx(other)?;
        let cutoff = self.cutoff.clone().min(other.cutoff.clone());
        let zero = Coeff::zero(self.ctx.mode);
        let mut worst = 0.0f64;
        for e in self.terms.keys().chain(other.terms.keys()) {
            if !cutoff.admits(e) {
                continue;
            }
            let a = self.terms.get(e).unwrap_or(&zero).to_rational();
            let b = other.terms.get(e).unwrap_or(&zero).to_rational();
            let scale = num_traits::Signed::abs(&a)
                .max(num_traits::Signed::abs(&b))
                .max(BigRational::one());
            let err = num_traits::Signed::abs(&(a - b)) / scale;
            worst = worst.max(num_traits::ToPrimitive::to_f64(&err).unwrap_or(f64::INFINITY));
        }
        Ok(worst)
    }
}

fn shifted(b: &Bound, by: &Bound) -> Bound {
    match (b, by) {
        (Bound::Finite(x), Bound::Finite(y)) => Bound::Finite(x + y),
        _ => Bound::Infinity,
    }
}

/// Extra significant digits carried internally by real-mode operations whose
/// coefficients are long sums prone to cancellation.
pub(crate) const GUARD_DIGITS: u32 = 20;

thread_local! {
    static GUARDED: std::cell::Cell<bool> = const { std::cell::Cell::new(false) };
}

/// Resets the guard flag even when the guarded computation unwinds.
struct GuardScope;

impl Drop for GuardScope {
    fn drop(&mut self) {
        GUARDED.with(|g| g.set(false));
    }
}

/// Runs `f` on copies of `args` carrying [`GUARD_DIGITS`] extra digits and
/// rounds the result back. Rational operands, and calls nested inside an
/// already guarded computation, are passed through unchanged.
pub(crate) fn guarded<F>(args: &[&Series], f: F) -> Result<Series>
where
    F: FnOnce(&[Series]) -> Result<Series>,
{
    let ctx = args[0].ctx;
    let CoeffMode::Real(p) = ctx.mode else {
        return f(&args.iter().map(|a| (*a).clone()).collect::<Vec<_>>());
    };
    if GUARDED.with(|g| g.replace(true)) {
        return f(&args.iter().map(|a| (*a).clone()).collect::<Vec<_>>());
    }
    let _scope = GuardScope;
    let wide = Context::new(ctx.dim, CoeffMode::Real(p + GUARD_DIGITS));
    let lifted: Vec<Series> = args.iter().map(|a| a.with_ctx(wide)).collect();
    Ok(f(&lifted)?.with_ctx(ctx))
}

pub(crate) fn check_exp_dim(ctx: Context, e: &Exponent) -> Result<()> {
    if e.dim() == ctx.dim {
        Ok(())
    } else {
        Err(Error::dim(ctx.dim, e.dim()))
    }
}

/// Textual form of the monomial `t^gamma`.
pub(crate) fn fmt_mono(gamma: &Exponent, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if gamma.dim() > 1 {
        return write!(f, "t^{gamma}");
    }
    let q = &gamma.coords()[0];
    if q.is_one() {
        f.write_str("t")
    } else if q.is_integer() && !num_traits::Signed::is_negative(q) {
        write!(f, "t^{}", q.numer())
    } else {
        write!(f, "t^({gamma})")
    }
}

impl fmt::Display for Series {
    /// Canonical form: ascending exponents, `c*t^g` terms, trailing
    /// `O(t^w)` iff the cutoff is finite.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            let negative = c.is_negative();
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let mag = c.abs();
            if e.is_zero() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                fmt_mono(e, f)?;
            } else {
                write!(f, "{mag}*")?;
                fmt_mono(e, f)?;
            }
        }
        match &self.cutoff {
            Bound::Finite(w) => {
                if !first {
                    f.write_str(" + ")?;
                }
                f.write_str("O(")?;
                fmt_mono(w, f)?;
                f.write_str(")")
            }
            Bound::Infinity if first => f.write_str("0"),
            Bound::Infinity => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Context {
        Context::rational(1)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn e(n: i64, d: i64) -> Exponent {
        Exponent::scalar(q(n, d))
    }

    fn c(n: i64, d: i64) -> Coeff {
        Coeff::Rational(q(n, d))
    }

    /// Series from (coefficient, exponent) integer pairs.
    fn s(terms: &[(i64, i64)], cutoff: Option<i64>) -> Series {
        Series::normalize(
            ctx(),
            terms.iter().map(|&(k, g)| (e(g, 1), c(k, 1))),
            cutoff.map_or(Bound::Infinity, |w| Bound::Finite(e(w, 1))),
        )
        .unwrap()
    }

    #[test]
    fn normalize_examples() {
        let a = Series::normalize(
            ctx(),
            [(e(0, 1), c(1, 1)), (e(1, 1), c(0, 1)), (e(5, 1), c(2, 1))],
            Bound::Finite(e(3, 1)),
        )
        .unwrap();
        assert_eq!(a, s(&[(1, 0)], Some(3)));
        assert_eq!(a.to_string(), "1 + O(t^3)");
        assert!(Series::normalize(ctx(), [], Bound::Infinity).unwrap().is_exact_zero());
        assert_eq!(s(&[(3, 1)], None).to_string(), "3*t");
        let dup = Series::normalize(ctx(), [(e(1, 1), c(1, 1)), (e(1, 1), c(-1, 1))], Bound::Infinity).unwrap();
        assert!(dup.is_exact_zero());
    }

    #[test]
    fn addition_examples() {
        assert_eq!(s(&[(1, 0), (1, 1)], None).add(&s(&[(1, 1)], None)).unwrap(), s(&[(1, 0), (2, 1)], None));
        assert_eq!(s(&[(1, 0)], Some(2)).add(&s(&[(1, 2)], None)).unwrap(), s(&[(1, 0)], Some(2)));
        let a = s(&[(2, -1), (5, 0)], None);
        assert!(a.add(&a.neg()).unwrap().is_exact_zero());
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(
            s(&[(1, 0), (1, 1)], None).mul(&s(&[(1, 0), (-1, 1)], None)).unwrap(),
            s(&[(1, 0), (-1, 2)], None)
        );
        assert_eq!(s(&[(1, -1)], None).mul(&s(&[(1, 1)], None)).unwrap(), s(&[(1, 0)], None));
        // Cutoff law: min(3 + 2, ∞ + 0) = 5; the t^4 term is already known.
        let p = s(&[(1, 0)], Some(3)).mul(&s(&[(1, 2), (1, 4)], None)).unwrap();
        assert_eq!(p, s(&[(1, 2), (1, 4)], Some(5)));
        // Representative completions 1 + k·t^3 all agree below t^5.
        for k in [-3, 0, 7] {
            let full = s(&[(1, 0), (k, 3)], None).mul(&s(&[(1, 2), (1, 4)], None)).unwrap();
            assert!(full.agrees_with(&p, None).unwrap());
        }
        assert!(s(&[], Some(2)).mul(&Series::zero(ctx())).unwrap().is_exact_zero());
    }

    #[test]
    fn comparison_examples() {
        assert_eq!(s(&[(1, -1)], None).compare(&s(&[(1_000_000, 0)], None)).unwrap(), Ordering::Greater);
        assert_eq!(s(&[(1, 0), (-1, 1)], None).compare(&s(&[(1, 0)], None)).unwrap(), Ordering::Less);
        assert!(matches!(
            s(&[(1, 0)], Some(2)).compare(&s(&[(1, 0)], Some(3))),
            Err(Error::Indeterminate(_))
        ));
    }

    #[test]
    fn valuation_examples() {
        let a = Series::normalize(ctx(), [(e(1, 2), c(1, 1)), (e(1, 1), c(1, 1))], Bound::Infinity).unwrap();
        assert_eq!(a.valuation().unwrap(), Bound::Finite(e(1, 2)));
        assert_eq!(Series::zero(ctx()).valuation().unwrap(), Bound::Infinity);
        assert!(matches!(s(&[], Some(5)).valuation(), Err(Error::InsufficientPrecision(_))));
    }

    #[test]
    fn inversion_examples() {
        let a = s(&[(1, 0), (-1, 1)], None);
        let inv = a.invert(&e(4, 1)).unwrap();
        assert_eq!(inv, s(&[(1, 0), (1, 1), (1, 2), (1, 3)], Some(4)));
        // Oracle: (1 - t)·inv agrees with 1 below t^4.
        assert!(a.mul(&inv).unwrap().agrees_with(&Series::one(ctx()), None).unwrap());

        let m = s(&[(2, 1)], None).invert(&e(7, 1)).unwrap();
        assert_eq!(m, Series::monomial(ctx(), c(1, 2), e(-1, 1)));
        assert!(Series::zero(ctx()).invert(&e(3, 1)).unwrap().is_exact_zero());
        assert!(matches!(s(&[], Some(1)).invert(&e(3, 1)), Err(Error::InsufficientPrecision(_))));
    }

    #[test]
    fn inversion_cutoff_accounts_for_valuation() {
        // a = t^-1 + 1 + O(t^2): effective cutoff min(10, 2 - 2·(-1)) = 4.
        let a = s(&[(1, -1), (1, 0)], Some(2));
        let inv = a.invert(&e(10, 1)).unwrap();
        assert_eq!(inv.cutoff(), &Bound::Finite(e(4, 1)));
        assert_eq!(inv, s(&[(1, 1), (-1, 2), (1, 3)], Some(4)));
    }

    #[test]
    fn root_examples() {
        assert_eq!(s(&[(4, 2)], None).nth_root(2, &e(5, 1)).unwrap(), s(&[(2, 1)], None));
        let r = s(&[(1, 0), (1, 1)], None).nth_root(2, &e(3, 1)).unwrap();
        let expected = Series::normalize(
            ctx(),
            [(e(0, 1), c(1, 1)), (e(1, 1), c(1, 2)), (e(2, 1), c(-1, 8))],
            Bound::Finite(e(3, 1)),
        )
        .unwrap();
        assert_eq!(r, expected);
        // Oracle: the square agrees with 1 + t below t^3.
        assert!(r.mul(&r).unwrap().agrees_with(&s(&[(1, 0), (1, 1)], None), None).unwrap());
        assert!(s(&[(-1, 0), (-1, 1)], None).nth_root(2, &e(3, 1)).unwrap().is_exact_zero());
        assert_eq!(s(&[(-8, 3)], None).nth_root(3, &e(3, 1)).unwrap(), s(&[(-2, 1)], None));
        assert!(matches!(
            s(&[(2, 0)], None).nth_root(2, &e(3, 1)),
            Err(Error::TranscendentalInRationalMode(_))
        ));
    }

    #[test]
    fn truncation_examples() {
        assert_eq!(
            s(&[(1, 0), (1, 1), (1, 5)], None).truncate(&Bound::Finite(e(3, 1))),
            s(&[(1, 0), (1, 1)], Some(3))
        );
        assert_eq!(Series::zero(ctx()).truncate(&Bound::Finite(e(2, 1))).to_string(), "O(t^2)");
        let a = s(&[(1, 0), (2, 7)], None);
        assert_eq!(a.truncate(&Bound::Infinity), a);
    }

    #[test]
    fn printing() {
        assert_eq!(s(&[(1, 0), (-1, 1)], None).to_string(), "1 - t");
        assert_eq!(Series::zero(ctx()).to_string(), "0");
        let a = Series::normalize(ctx(), [(e(1, 2), c(3, 1))], Bound::Finite(e(2, 1))).unwrap();
        assert_eq!(a.to_string(), "3*t^(1/2) + O(t^2)");
        assert_eq!(s(&[(-1, -1), (-3, 0)], None).to_string(), "-t^(-1) - 3");
        let d2 = Series::normalize(
            Context::rational(2),
            [(Exponent::from_ints(&[0, 1]), c(1, 1))],
            Bound::Finite(Exponent::from_ints(&[1, 0])),
        )
        .unwrap();
        assert_eq!(d2.to_string(), "t^[0,1] + O(t^[1,0])");
    }

    #[test]
    fn mode_and_dimension_mismatch() {
        let a = s(&[(1, 0)], None);
        let b = Series::one(Context::new(1, CoeffMode::Real(30)));
        assert!(matches!(a.add(&b), Err(Error::ModeMismatch(..))));
        let d2 = Series::one(Context::rational(2));
        assert!(matches!(a.mul(&d2), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn cutoff_unreachable_in_two_dimensions() {
        let ctx2 = Context::rational(2);
        let a = Series::normalize(
            ctx2,
            [
                (Exponent::from_ints(&[0, 0]), c(1, 1)),
                (Exponent::from_ints(&[0, 1]), c(1, 1)),
            ],
            Bound::Infinity,
        )
        .unwrap();
        assert!(matches!(
            a.invert(&Exponent::from_ints(&[1, 0])),
            Err(Error::CutoffUnreachable { .. })
        ));
        let inv = a.invert(&Exponent::from_ints(&[0, 3])).unwrap();
        assert_eq!(inv.to_string(), "1 - t^[0,1] + t^[0,2] + O(t^[0,3])");
    }
}
