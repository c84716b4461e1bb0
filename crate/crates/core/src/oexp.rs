//! The exponential on the valuation ring and its inverse.
//!
//! For `a ∈ 𝒪` with residue `r` and infinitesimal part `ε`,
//! `exp(a) = e^r · exp(ε)`; outside 𝒪 the exponential is 0. The logarithm is
//! defined on positive units `c·(1+ε)` as `log c + log(1+ε)` and is 0
//! elsewhere. This module also evaluates the exponential axioms on concrete
//! inputs.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::analytic::{apply_restricted, in_unit_box, AnalyticFunction};
use crate::coeff::{Coeff, Tolerance};
use crate::error::{Error, Result};
use crate::expand;
use crate::exponent::{Bound, Exponent};
use crate::series::{check_exp_dim, guarded, Series};
use crate::valuation::{classify, is_positive_unit, residue};

/// Exponential on 𝒪, totalized by 0 outside 𝒪.
pub fn oexp(a: &Series, target: &Exponent) -> Result<Series> {
    guarded(&[a], |v| oexp_raw(&v[0], target))
}

fn oexp_raw(a: &Series, target: &Exponent) -> Result<Series> {
    check_exp_dim(a.ctx(), target)?;
    if !classify(a)?.in_o {
        return Ok(Series::zero(a.ctx()));
    }
    let r = residue(a)?;
    let eps = a.sub(&Series::constant(a.ctx(), r.clone()))?;
    let unit = expand::exp_infinitesimal(&eps, &Bound::Finite(target.clone()))?;
    Ok(unit.scale(&r.exp()?))
}

/// Logarithm on positive units, totalized by 0 elsewhere.
pub fn olog(a: &Series, target: &Exponent) -> Result<Series> {
    guarded(&[a], |v| olog_raw(&v[0], target))
}

fn olog_raw(a: &Series, target: &Exponent) -> Result<Series> {
    check_exp_dim(a.ctx(), target)?;
    if a.is_exact_zero() || !is_positive_unit(a)? {
        return Ok(Series::zero(a.ctx()));
    }
    let (lead, eps) = expand::split_leading(a)?;
    let log_c = Series::constant(a.ctx(), lead.c.ln()?);
    let tail = expand::log_unit(&eps, &Bound::Finite(target.clone()))?;
    log_c.add(&tail)
}

/// The exponential axioms, plus residue compatibility.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Axiom {
    /// `exp(x+y) = exp x · exp y` on 𝒪.
    E1,
    /// `exp x = e(x)` when `|x| ≤ 1`.
    E2,
    /// `x > n²` implies `exp x > x^n`.
    E3(u32),
    /// Every `y > 1` in 𝒪 is `exp x` for some `x ∈ 𝒪`.
    E4,
    /// `res(exp x) = e^{res x}`.
    ResCompat,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::E1 => write!(f, "E1"),
            Axiom::E2 => write!(f, "E2"),
            Axiom::E3(n) => write!(f, "E3(n={n})"),
            Axiom::E4 => write!(f, "E4"),
            Axiom::ResCompat => write!(f, "res"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "reason", rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail(String),
    Indeterminate(String),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

/// What a check compared or produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Detail {
    None,
    Compared { lhs: Series, rhs: Series },
    Produced { x: Series, image: Series },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomWitness {
    pub axiom: Axiom,
    pub inputs: Vec<Series>,
    pub verdict: Verdict,
    pub detail: Detail,
}

/// Errors that mean "this case cannot be decided here" rather than a bug.
pub(crate) fn is_obstruction(e: &Error) -> bool {
    matches!(e.exit_code(), 3 | 4)
}

/// Compare two series on their common range: exact in rational mode,
/// within `tol` in real mode.
pub(crate) fn compare_verdict(lhs: &Series, rhs: &Series, tol: &Tolerance) -> Result<Verdict> {
    Ok(match lhs.first_disagreement(rhs, Some(tol))? {
        None => Verdict::Pass,
        Some(e) => Verdict::Fail(format!(
            "sides differ at t^{e}: {} vs {}",
            lhs.coefficient(&e)?,
            rhs.coefficient(&e)?
        )),
    })
}

/// Evaluate `axiom` on `inputs`. Inputs outside the axiom's domain and
/// precision obstructions yield an indeterminate verdict, never a failure.
pub fn check_axiom(axiom: Axiom, inputs: &[Series], target: &Exponent, tol: &Tolerance) -> Result<AxiomWitness> {
    let expected = if axiom == Axiom::E1 { 2 } else { 1 };
    if inputs.len() != expected {
        return Err(Error::Arity {
            name: axiom.to_string(),
            expected,
            found: inputs.len(),
        });
    }
    let mut detail = Detail::None;
    let verdict = match evaluate(axiom, inputs, target, tol, &mut detail) {
        Ok(v) => v,
        Err(e) if is_obstruction(&e) => Verdict::Indeterminate(e.to_string()),
        Err(e) => return Err(e),
    };
    Ok(AxiomWitness {
        axiom,
        inputs: inputs.to_vec(),
        verdict,
        detail,
    })
}

fn outside(what: &str) -> Verdict {
    Verdict::Indeterminate(format!("input outside the domain: {what}"))
}

fn evaluate(axiom: Axiom, inputs: &[Series], target: &Exponent, tol: &Tolerance, detail: &mut Detail) -> Result<Verdict> {
    let x = &inputs[0];
    let ctx = x.ctx();
    match axiom {
        Axiom::E1 => {
            let y = &inputs[1];
            if !classify(x)?.in_o || !classify(y)?.in_o {
                return Ok(outside("x, y must lie in 𝒪"));
            }
            let lhs = oexp(&x.add(y)?, target)?;
            let rhs = oexp(x, target)?.mul(&oexp(y, target)?)?;
            let v = compare_verdict(&lhs, &rhs, tol)?;
            *detail = Detail::Compared { lhs, rhs };
            Ok(v)
        }
        Axiom::E2 => {
            if !in_unit_box(x)? {
                return Ok(outside("|x| must be at most 1"));
            }
            let lhs = oexp(x, target)?;
            let rhs = apply_restricted(&AnalyticFunction::exp(), std::slice::from_ref(x), target)?;
            let v = compare_verdict(&lhs, &rhs, tol)?;
            *detail = Detail::Compared { lhs, rhs };
            Ok(v)
        }
        Axiom::E3(n) => {
            if !classify(x)?.in_o {
                return Ok(outside("x must lie in 𝒪"));
            }
            let n_sq = BigRational::from_integer(BigInt::from(n) * BigInt::from(n));
            if x.compare(&Series::from_rational(ctx, &n_sq))? != Ordering::Greater {
                return Ok(Verdict::Pass);
            }
            let lhs = oexp(x, target)?;
            let rhs = x.powi(i64::from(n), target)?;
            let ord = lhs.compare(&rhs)?;
            *detail = Detail::Compared { lhs, rhs };
            Ok(if ord == Ordering::Greater {
                Verdict::Pass
            } else {
                Verdict::Fail(format!("exp x is not greater than x^{n}"))
            })
        }
        Axiom::E4 => {
            if !classify(x)?.in_o || x.compare(&Series::one(ctx))? != Ordering::Greater {
                return Ok(outside("y must lie in 𝒪 with y > 1"));
            }
            let w = olog(x, target)?;
            if !classify(&w)?.in_o {
                return Ok(Verdict::Fail("logarithm left 𝒪".into()));
            }
            let image = oexp(&w, target)?;
            let v = compare_verdict(&image, x, tol)?;
            *detail = Detail::Produced { x: w, image };
            Ok(v)
        }
        Axiom::ResCompat => {
            if !classify(x)?.in_o {
                return Ok(outside("x must lie in 𝒪"));
            }
            let lhs = residue(&oexp(x, target)?)?;
            let rhs = residue(x)?.exp()?;
            let v = if tol.close(&lhs, &rhs) {
                Verdict::Pass
            } else {
                Verdict::Fail(format!("res(exp x) = {lhs} but e^(res x) = {rhs}"))
            };
            *detail = Detail::Compared {
                lhs: Series::constant(ctx, lhs),
                rhs: Series::constant(ctx, rhs),
            };
            Ok(v)
        }
    }
}

/// Exponential computed through the unit box: `e(x/n)^n` for the least `n`
/// with `|x/n| ≤ 1`. Agrees with [`oexp`] on 𝒪.
pub fn oexp_by_squaring(a: &Series, target: &Exponent) -> Result<Series> {
    guarded(&[a], |v| oexp_by_squaring_raw(&v[0], target))
}

fn oexp_by_squaring_raw(a: &Series, target: &Exponent) -> Result<Series> {
    check_exp_dim(a.ctx(), target)?;
    if !classify(a)?.in_o {
        return Ok(Series::zero(a.ctx()));
    }
    let r = residue(a)?;
    let mag = r.abs().to_rational();
    let n = num_traits::ToPrimitive::to_i64(&mag.ceil().to_integer())
        .ok_or_else(|| Error::Domain("argument too large".into()))?
        .max(1);
    let mut n = n;
    loop {
        let inv = Coeff::from_rational(&BigRational::new(BigInt::from(1), BigInt::from(n)), a.ctx().mode);
        let scaled = a.scale(&inv);
        // At the boundary a truncated argument may be undecidable; any larger
        // n is equally valid.
        let inside = match in_unit_box(&scaled) {
            Ok(b) => b,
            Err(Error::Indeterminate(_)) => false,
            Err(e) => return Err(e),
        };
        if inside {
            let e = apply_restricted(&AnalyticFunction::exp(), &[scaled], target)?;
            return e.powi(n, target);
        }
        n += 1;
    }
}
