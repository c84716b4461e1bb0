//! Restricted analytic functions: convergent power series evaluated on the
//! unit box `[-1,1]^n` and set to 0 outside it.
//!
//! An argument `a` inside the box splits as `r + ε` with `r = res(a)` real and
//! `ε` infinitesimal, so `f(a)` is the Taylor expansion of `f` around `r`
//! evaluated at `ε`. Terms are summed shell by shell in total degree until the
//! degree times the least valuation among the `ε_i` passes the cutoff.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::expand;
use crate::exponent::{steps_to_reach, Bound, Exponent};
use crate::series::{guarded, Context, Series};
use crate::valuation::residue;

/// Largest number of variables a user polynomial may use.
pub const MAX_POLY_ARITY: usize = 3;

/// A polynomial with rational coefficients in variables `X1..Xn`, keyed by
/// exponent multi-index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl Polynomial {
    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nvars], c);
        }
        Polynomial { nvars, terms }
    }

    /// The variable `X_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut idx = vec![0; nvars];
        idx[i] = 1;
        Polynomial {
            nvars,
            terms: BTreeMap::from([(idx, BigRational::one())]),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigRational> {
        &self.terms
    }

    /// Highest variable index that actually occurs, plus one (at least 1).
    pub fn used_vars(&self) -> usize {
        self.terms
            .keys()
            .filter_map(|idx| idx.iter().rposition(|&k| k > 0))
            .max()
            .map_or(1, |i| i + 1)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|idx| idx.iter().sum()).max().unwrap_or(0)
    }

    /// Same polynomial viewed in `n ≥ used_vars()` variables.
    pub fn with_nvars(&self, n: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(idx, c)| {
                let mut v = idx.clone();
                v.resize(n, 0);
                (v, c.clone())
            })
            .collect();
        Polynomial { nvars: n, terms }
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let e = terms.entry(k.clone()).or_insert_with(BigRational::zero);
            *e += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Polynomial { nvars: self.nvars, terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let k: Vec<u32> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
                *terms.entry(k).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Polynomial { nvars: self.nvars, terms }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Polynomial::constant(self.nvars, BigRational::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Coefficients of `P(r + Y)` as a polynomial in `Y`.
    fn taylor_shift(&self, center: &[Coeff]) -> Result<Vec<(Vec<u32>, Coeff)>> {
        let mode = center[0].mode();
        let mut out: BTreeMap<Vec<u32>, Coeff> = BTreeMap::new();
        for (beta, c) in &self.terms {
            // Π_i Σ_{α_i ≤ β_i} C(β_i, α_i) r_i^(β_i-α_i) Y_i^α_i
            let mut partial: Vec<(Vec<u32>, Coeff)> = vec![(Vec::new(), Coeff::from_rational(c, mode))];
            for (i, &b) in beta.iter().enumerate() {
                let mut next = Vec::new();
                for (idx, acc) in &partial {
                    for a in 0..=b {
                        let binom = Coeff::from_rational(&BigRational::from_integer(binomial(b, a)), mode);
                        let factor = binom.mul(&center[i].powi(i64::from(b - a))?);
                        let mut k = idx.clone();
                        k.push(a);
                        next.push((k, acc.mul(&factor)));
                    }
                }
                partial = next;
            }
            for (k, v) in partial {
                match out.get_mut(&k) {
                    Some(x) => *x = x.add(&v),
                    None => {
                        out.insert(k, v);
                    }
                }
            }
        }
        Ok(out.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (idx, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let vars: Vec<String> = idx
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| if k == 1 { format!("X{}", j + 1) } else { format!("X{}^{k}", j + 1) })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Which power series a catalogue entry evaluates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kind {
    Exp,
    Sin,
    Cos,
    /// `log(1 + X/2)`, convergent for `|X| < 2`.
    Log1pHalf,
    /// `(1 + X/2)^q`, convergent for `|X| < 2`.
    Pow1pHalf(BigRational),
    Polynomial(Polynomial),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalyticFunction {
    pub name: String,
    pub arity: usize,
    /// Radius of convergence around 0; `None` for entire functions.
    pub radius: Option<BigRational>,
    pub kind: Kind,
}

impl AnalyticFunction {
    fn unary(name: &str, radius: Option<i64>, kind: Kind) -> Self {
        AnalyticFunction {
            name: name.to_string(),
            arity: 1,
            radius: radius.map(|r| BigRational::from_integer(BigInt::from(r))),
            kind,
        }
    }

    pub fn exp() -> Self {
        Self::unary("exp", None, Kind::Exp)
    }

    pub fn sin() -> Self {
        Self::unary("sin", None, Kind::Sin)
    }

    pub fn cos() -> Self {
        Self::unary("cos", None, Kind::Cos)
    }

    pub fn log1p_half() -> Self {
        Self::unary("log1p_half", Some(2), Kind::Log1pHalf)
    }

    pub fn pow1p_half(q: BigRational) -> Self {
        Self::unary("pow1p_half", Some(2), Kind::Pow1pHalf(q))
    }

    pub fn polynomial(name: &str, p: Polynomial) -> Result<Self> {
        let arity = p.used_vars();
        if arity > MAX_POLY_ARITY {
            return Err(Error::Config(format!(
                "polynomial {name} uses {arity} variables; at most {MAX_POLY_ARITY} are supported"
            )));
        }
        Ok(AnalyticFunction {
            name: name.to_string(),
            arity,
            radius: None,
            kind: Kind::Polynomial(p.with_nvars(arity)),
        })
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(self.kind, Kind::Polynomial(_))
    }

    /// Taylor coefficients `∂^α f(r) / α!` for all `|α| < shells`, at a
    /// center inside the unit box.
    pub fn taylor(&self, center: &[Coeff], shells: usize) -> Result<Vec<(Vec<u32>, Coeff)>> {
        if center.len() != self.arity {
            return Err(Error::Arity {
                name: self.name.clone(),
                expected: self.arity,
                found: center.len(),
            });
        }
        let r = &center[0];
        let mode = r.mode();
        let one = Coeff::one(mode);
        let unary = |v: Vec<Coeff>| Ok(v.into_iter().enumerate().map(|(k, c)| (vec![k as u32], c)).collect());
        match &self.kind {
            Kind::Polynomial(p) => Ok(p
                .taylor_shift(center)?
                .into_iter()
                .filter(|(idx, _)| (idx.iter().sum::<u32>() as usize) < shells)
                .collect()),
            Kind::Exp => {
                let mut c = r.exp()?;
                let mut out = Vec::with_capacity(shells);
                for k in 0..shells {
                    if k > 0 {
                        c = c.try_div(&Coeff::from_i64(k as i64, mode))?;
                    }
                    out.push(c.clone());
                }
                unary(out)
            }
            Kind::Sin | Kind::Cos => {
                let (s, c) = r.sin_cos()?;
                let cycle = if self.kind == Kind::Sin {
                    [s.clone(), c.clone(), s.neg(), c.neg()]
                } else {
                    [c.clone(), s.neg(), c.neg(), s.clone()]
                };
                let mut fact = one.clone();
                let mut out = Vec::with_capacity(shells);
                for k in 0..shells {
                    if k > 0 {
                        fact = fact.mul(&Coeff::from_i64(k as i64, mode));
                    }
                    out.push(cycle[k % 4].try_div(&fact)?);
                }
                unary(out)
            }
            Kind::Log1pHalf => {
                let two = Coeff::from_i64(2, mode);
                let base = two.add(r);
                let mut out = Vec::with_capacity(shells);
                if shells > 0 {
                    out.push(base.try_div(&two)?.ln()?);
                }
                let inv = one.try_div(&base)?;
                let mut pw = one.clone();
                for k in 1..shells {
                    pw = pw.mul(&inv);
                    let c = pw.try_div(&Coeff::from_i64(k as i64, mode))?;
                    out.push(if k % 2 == 1 { c } else { c.neg() });
                }
                unary(out)
            }
            Kind::Pow1pHalf(q) => {
                let two = Coeff::from_i64(2, mode);
                let base = two.add(r);
                let inv = one.try_div(&base)?;
                let mut c = base.try_div(&two)?.pow_rational(q)?;
                let mut out = Vec::with_capacity(shells);
                for k in 0..shells {
                    if k > 0 {
                        // C(q,k) = C(q,k-1)·(q-k+1)/k
                        let step = (q - BigRational::from_integer(BigInt::from(k - 1)))
                            / BigRational::from_integer(BigInt::from(k));
                        c = c.mul_rational(&step).mul(&inv);
                    }
                    out.push(c.clone());
                }
                unary(out)
            }
        }
    }
}

/// The built-in functions. User polynomials are added by the session.
pub fn catalogue() -> Vec<AnalyticFunction> {
    vec![
        AnalyticFunction::exp(),
        AnalyticFunction::sin(),
        AnalyticFunction::cos(),
        AnalyticFunction::log1p_half(),
        AnalyticFunction::pow1p_half(BigRational::new(BigInt::one(), BigInt::from(2))),
    ]
}

/// Look up a built-in function by name (`e` is an alias of `exp`).
pub fn lookup(name: &str) -> Option<AnalyticFunction> {
    let name = if name == "e" { "exp" } else { name };
    catalogue().into_iter().find(|f| f.name == name)
}

/// Decide `|a| ≤ 1`.
pub fn in_unit_box(a: &Series) -> Result<bool> {
    let ctx = a.ctx();
    let one = Series::one(ctx);
    let undecided = |_| {
        Error::Indeterminate(format!(
            "cannot decide whether |{a}| ≤ 1 at cutoff {}",
            a.cutoff()
        ))
    };
    let above = a.compare(&one).map_err(undecided)? == Ordering::Greater;
    let below = a.compare(&one.neg()).map_err(undecided)? == Ordering::Less;
    Ok(!above && !below)
}

/// `f_I(args)`: the Taylor expansion of `f` around the residues of the
/// arguments, or exact 0 when some argument lies outside `[-1,1]`.
pub fn apply_restricted(f: &AnalyticFunction, args: &[Series], target: &Exponent) -> Result<Series> {
    if args.is_empty() {
        return Err(Error::Arity {
            name: f.name.clone(),
            expected: f.arity,
            found: 0,
        });
    }
    let refs: Vec<&Series> = args.iter().collect();
    guarded(&refs, |v| apply_restricted_raw(f, v, target))
}

fn apply_restricted_raw(f: &AnalyticFunction, args: &[Series], target: &Exponent) -> Result<Series> {
    if args.len() != f.arity {
        return Err(Error::Arity {
            name: f.name.clone(),
            expected: f.arity,
            found: args.len(),
        });
    }
    let ctx: Context = args[0].ctx();
    for a in &args[1..] {
        args[0].check_ctx(a)?;
    }
    crate::series::check_exp_dim(ctx, target)?;
    for a in args {
        if !in_unit_box(a)? {
            return Ok(Series::zero(ctx));
        }
    }
    let mut center = Vec::with_capacity(args.len());
    let mut eps = Vec::with_capacity(args.len());
    for a in args {
        let r = residue(a)?;
        eps.push(a.sub(&Series::constant(ctx, r.clone()))?);
        center.push(r);
    }
    let mut eff = args.iter().map(|a| a.cutoff().clone()).min().expect("arity ≥ 1");
    if !f.is_polynomial() {
        eff = eff.min(Bound::Finite(target.clone()));
    }
    // Least valuation among the infinitesimal parts bounds every shell.
    let vmin = eps
        .iter()
        .filter(|e| !e.is_exact_zero())
        .map(|e| e.valuation().unwrap_or_else(|_| e.cutoff().clone()))
        .min();
    let shells = match (&vmin, &eff) {
        (None, _) => 1,
        (Some(_), Bound::Infinity) => match &f.kind {
            Kind::Polynomial(p) => p.degree() as usize + 1,
            _ => unreachable!("non-polynomial effective cutoff is finite"),
        },
        (Some(Bound::Finite(v)), Bound::Finite(w)) => {
            let n = steps_to_reach(v, w)?;
            match &f.kind {
                Kind::Polynomial(p) => n.min(p.degree() as usize + 1),
                _ => n,
            }
        }
        (Some(Bound::Infinity), _) => unreachable!("nonzero ε has finite valuation bound"),
    };
    let coeffs = f.taylor(&center, shells.max(1))?;
    // Cached powers ε_i^k below the effective cutoff.
    let mut powers: Vec<Vec<Series>> = eps.iter().map(|_| vec![Series::one(ctx)]).collect();
    let mut total = Series::zero(ctx).truncate(&eff);
    for (alpha, c) in coeffs {
        let mut term = Series::constant(ctx, c);
        for (i, &k) in alpha.iter().enumerate() {
            if k == 0 {
                continue;
            }
            while powers[i].len() <= k as usize {
                let next = powers[i].last().expect("nonempty").mul_below(&eps[i], &eff);
                powers[i].push(next);
            }
            term = term.mul_below(&powers[i][k as usize], &eff);
        }
        total = total.add(&term)?;
    }
    Ok(total)
}

/// `log(1+ε)` for infinitesimal `ε`, by the Mercator series.
pub fn log1p_series(eps: &Series, target: &Exponent) -> Result<Series> {
    crate::series::check_exp_dim(eps.ctx(), target)?;
    guarded(&[eps], |v| expand::log_unit(&v[0], &Bound::Finite(target.clone())))
}

/// `(1+ε)^q` for infinitesimal `ε`, by the binomial series.
pub fn pow1p_series(q: &BigRational, eps: &Series, target: &Exponent) -> Result<Series> {
    crate::series::check_exp_dim(eps.ctx(), target)?;
    guarded(&[eps], |v| expand::power_unit(&v[0], q, &Bound::Finite(target.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{CoeffMode, Tolerance};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn e1(n: i64) -> Exponent {
        Exponent::from_ints(&[n])
    }

    fn poly(ctx: Context, terms: &[(i64, BigRational)], cutoff: Option<i64>) -> Series {
        Series::normalize(
            ctx,
            terms.iter().map(|(e, c)| (e1(*e), ctx.coeff(c))),
            cutoff.map_or(Bound::Infinity, |c| Bound::Finite(e1(c))),
        )
        .unwrap()
    }

    #[test]
    fn outside_box_is_zero() {
        let ctx = Context::rational(1);
        let two = Series::from_rational(ctx, &q(2, 1));
        assert!(apply_restricted(&AnalyticFunction::exp(), &[two], &e1(5)).unwrap().is_exact_zero());
        let big = Series::t_pow(ctx, e1(-1));
        assert!(apply_restricted(&AnalyticFunction::sin(), &[big.neg()], &e1(5)).unwrap().is_exact_zero());
    }

    #[test]
    fn boundary_is_indeterminate_when_undecided() {
        let ctx = Context::rational(1);
        let a = poly(ctx, &[(0, q(1, 1))], Some(2));
        assert!(matches!(
            apply_restricted(&AnalyticFunction::exp(), &[a], &e1(5)),
            Err(Error::Indeterminate(_))
        ));
    }

    #[test]
    fn exp_of_t() {
        let ctx = Context::rational(1);
        let r = apply_restricted(&AnalyticFunction::exp(), &[Series::t_pow(ctx, e1(1))], &e1(3)).unwrap();
        assert_eq!(r.to_string(), "1 + t + 1/2*t^2 + O(t^3)");
    }

    #[test]
    fn exp_recentered_matches_closed_form() {
        let ctx = Context::new(1, CoeffMode::Real(50));
        let a = poly(ctx, &[(0, q(1, 2)), (1, q(1, 1))], None);
        let r = apply_restricted(&AnalyticFunction::exp(), &[a], &e1(3)).unwrap();
        let c = ctx.coeff(&q(1, 2)).exp().unwrap();
        let expect = poly(ctx, &[(0, q(1, 1)), (1, q(1, 1)), (2, q(1, 2))], Some(3)).scale(&c);
        assert!(r.agrees_with(&expect, Some(&Tolerance::for_digits(50))).unwrap());
        assert_eq!(r.cutoff(), &Bound::Finite(e1(3)));
    }

    #[test]
    fn pythagoras() {
        let ctx = Context::new(1, CoeffMode::Real(40));
        let a = poly(ctx, &[(0, q(-3, 7)), (1, q(2, 1)), (2, q(-5, 3))], None);
        let s = apply_restricted(&AnalyticFunction::sin(), &[a.clone()], &e1(8)).unwrap();
        let c = apply_restricted(&AnalyticFunction::cos(), &[a], &e1(8)).unwrap();
        let sum = s.mul(&s).unwrap().add(&c.mul(&c).unwrap()).unwrap();
        assert!(sum.agrees_with(&Series::one(ctx), Some(&Tolerance::for_digits(40))).unwrap());
        assert_eq!(sum.cutoff(), &Bound::Finite(e1(8)));
    }

    #[test]
    fn user_polynomial() {
        let ctx = Context::rational(1);
        let p = Polynomial::var(2, 0)
            .mul(&Polynomial::var(2, 1))
            .add(&Polynomial::var(2, 0).pow(2));
        let f = AnalyticFunction::polynomial("f", p).unwrap();
        assert_eq!(f.arity, 2);
        let t = Series::t_pow(ctx, e1(1));
        let b = poly(ctx, &[(0, q(1, 2)), (1, q(1, 1))], None);
        let r = apply_restricted(&f, &[t, b], &e1(12)).unwrap();
        assert_eq!(r.to_string(), "1/2*t + 2*t^2");
    }

    #[test]
    fn log1p_examples() {
        let ctx = Context::rational(1);
        let t = Series::t_pow(ctx, e1(1));
        assert_eq!(log1p_series(&t, &e1(4)).unwrap().to_string(), "t - 1/2*t^2 + 1/3*t^3 + O(t^4)");
        let one_t = poly(ctx, &[(0, q(1, 1)), (1, q(1, 1))], None);
        assert_eq!(log1p_series(&one_t, &e1(4)), Err(Error::NotInfinitesimal));
        let lhs = log1p_series(&t, &e1(8)).unwrap().add(&log1p_series(&t.neg(), &e1(8)).unwrap()).unwrap();
        let rhs = log1p_series(&t.mul(&t).unwrap().neg(), &e1(8)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn log1p_half_inverts_exp() {
        // exp(log(1 + x/2)) = 1 + x/2
        let ctx = Context::new(1, CoeffMode::Real(50));
        let a = poly(ctx, &[(0, q(3, 5)), (1, q(1, 1))], None);
        let l = apply_restricted(&AnalyticFunction::log1p_half(), &[a.clone()], &e1(6)).unwrap();
        let back = crate::oexp::oexp(&l, &e1(6)).unwrap();
        let expect = Series::one(ctx).add(&a.scale(&ctx.coeff(&q(1, 2)))).unwrap();
        assert!(back.agrees_with(&expect, Some(&Tolerance::for_digits(50))).unwrap());
    }

    #[test]
    fn pow1p_half_squares_back() {
        let ctx = Context::rational(1);
        let a = poly(ctx, &[(1, q(1, 1))], None);
        let f = AnalyticFunction::pow1p_half(q(1, 2));
        let r = apply_restricted(&f, &[a.clone()], &e1(6)).unwrap();
        let sq = r.mul(&r).unwrap();
        let expect = Series::one(ctx).add(&a.scale(&ctx.coeff(&q(1, 2)))).unwrap();
        assert!(sq.agrees_with(&expect, None).unwrap());
    }

    #[test]
    fn catalogue_lookup() {
        let f = lookup("exp").unwrap();
        assert_eq!((f.arity, f.radius.clone()), (1, None));
        let f = lookup("sin").unwrap();
        assert_eq!((f.arity, f.radius.clone()), (1, None));
        assert_eq!(lookup("e").unwrap().name, "exp");
        assert!(catalogue().iter().all(|f| f.radius.as_ref().is_none_or(|r| r > &BigRational::one())));
    }
}
