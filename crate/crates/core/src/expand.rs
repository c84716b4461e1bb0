//! Expansions of `f(1+ε)`-type quantities for infinitesimal `ε`.
//!
//! Instead of summing powers of `ε`, coefficients are produced one exponent at
//! a time from a linear recurrence. The recurrences come from the derivation
//! `θ(t^γ) = ⟨w,γ⟩·t^γ` for a weight vector `w`, which turns identities such
//! as `θ exp(ε) = θε · exp(ε)` into coefficient relations. The support of the
//! result lies in the monoid generated by `supp(ε)`, enumerated up front.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::exponent::{steps_to_reach, Bound, Exponent};
use crate::series::{LeadingTerm, Series};

/// Write `a = c·t^γ·(1+ε)`; `ε` has cutoff `cutoff_a - γ`.
pub(crate) fn split_leading(a: &Series) -> Result<(LeadingTerm, Series)> {
    let lead = a.leading_or_err()?;
    let ctx = a.ctx();
    let mut terms = std::collections::BTreeMap::new();
    for (e, c) in a.terms().iter().skip(1) {
        terms.insert(e - &lead.gamma, c.try_div(&lead.c)?);
    }
    let eps = Series::from_parts(ctx, terms, a.cutoff().unshift(&lead.gamma));
    Ok((lead, eps))
}

/// Exponents of the monoid generated by `gens` (all positive) that lie below
/// `bound`, in ascending order, including 0.
fn monoid_below(gens: &[Exponent], bound: &Exponent, dim: usize) -> Result<Vec<Exponent>> {
    let zero = Exponent::zero(dim);
    if gens.is_empty() || !bound.is_positive() {
        return Ok(if bound > &zero { vec![zero] } else { vec![] });
    }
    let step = gens.iter().min().expect("nonempty");
    // Every element below the bound is a sum of fewer than `max_len` generators.
    let max_len = steps_to_reach(step, bound)?;
    let mut seen: BTreeSet<Exponent> = BTreeSet::new();
    let mut layer = vec![zero.clone()];
    seen.insert(zero);
    for _ in 0..max_len {
        let mut next = Vec::new();
        for e in &layer {
            for g in gens {
                let s = e + g;
                if &s < bound && seen.insert(s.clone()) {
                    next.push(s);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }
    Ok(seen.into_iter().collect())
}

/// A weight vector `w` with `⟨w,γ⟩ ≠ 0` for every nonzero `γ` in `support`.
fn weights(dim: usize, support: &[Exponent]) -> Vec<BigRational> {
    if dim == 1 {
        return vec![BigRational::one()];
    }
    // w = (1, s, s², …): each ⟨w,γ⟩ is a nonzero polynomial in s, so only
    // finitely many s are bad.
    for k in 2i64.. {
        let s = BigRational::new(BigInt::one(), BigInt::from(k));
        let mut w = Vec::with_capacity(dim);
        let mut p = BigRational::one();
        for _ in 0..dim {
            w.push(p.clone());
            p *= &s;
        }
        if support.iter().all(|g| g.is_zero() || !g.dot(&w).is_zero()) {
            return w;
        }
    }
    unreachable!()
}

/// Shared driver: resolves the effective bound, enumerates the support and
/// runs `step` for each nonzero exponent in ascending order.
struct Plan<'a> {
    eps: Vec<(&'a Exponent, &'a Coeff)>,
    support: Vec<Exponent>,
    cutoff: Bound,
    weights: Vec<BigRational>,
}

fn plan<'a>(eps: &'a Series, bound: &Bound) -> Result<Option<Plan<'a>>> {
    if eps.is_exact_zero() {
        // Exact constant result; caller supplies it.
        return Ok(None);
    }
    let cutoff = bound.clone().min(eps.cutoff().clone());
    if let Some(first) = eps.terms().keys().next() {
        if !first.is_positive() {
            return Err(Error::NotInfinitesimal);
        }
    } else if let Bound::Finite(c) = eps.cutoff() {
        if !c.is_positive() {
            return Err(Error::InsufficientPrecision(format!(
                "infinitesimality of O(t^{c}) is undetermined"
            )));
        }
    }
    let Bound::Finite(limit) = &cutoff else {
        return Err(Error::InsufficientPrecision(
            "infinite expansion requested without a finite cutoff".into(),
        ));
    };
    let gens: Vec<Exponent> = eps.terms().keys().cloned().collect();
    let support = monoid_below(&gens, limit, eps.ctx().dim)?;
    let weights = weights(eps.ctx().dim, &support);
    Ok(Some(Plan {
        eps: eps.terms().iter().collect(),
        support,
        cutoff,
        weights,
    }))
}

impl Plan<'_> {
    fn w(&self, e: &Exponent, ctx_coeff: &Coeff) -> Coeff {
        Coeff::from_rational(&e.dot(&self.weights), ctx_coeff.mode())
    }
}

fn finish(eps: &Series, values: HashMap<Exponent, Coeff>, cutoff: Bound) -> Series {
    Series::from_parts(eps.ctx(), values.into_iter().collect(), cutoff)
}

/// `1/(1+ε)` below `bound`.
pub(crate) fn inverse_unit(eps: &Series, bound: &Bound) -> Result<Series> {
    let ctx = eps.ctx();
    let Some(plan) = plan(eps, bound)? else {
        return Ok(Series::one(ctx));
    };
    let one = Coeff::one(ctx.mode);
    let mut vals: HashMap<Exponent, Coeff> = HashMap::with_capacity(plan.support.len());
    for g in &plan.support {
        if g.is_zero() {
            vals.insert(g.clone(), one.clone());
            continue;
        }
        // s_γ = -Σ ε_δ s_{γ-δ}
        let mut acc = Coeff::zero(ctx.mode);
        for (d, ed) in &plan.eps {
            if *d > g {
                break;
            }
            if let Some(prev) = vals.get(&(g - d)) {
                acc = acc.sub(&ed.mul(prev));
            }
        }
        vals.insert(g.clone(), acc);
    }
    Ok(finish(eps, vals, plan.cutoff))
}

/// `(1+ε)^q` below `bound`.
pub(crate) fn power_unit(eps: &Series, q: &BigRational, bound: &Bound) -> Result<Series> {
    let ctx = eps.ctx();
    let Some(plan) = plan(eps, bound)? else {
        return Ok(Series::one(ctx));
    };
    let one = Coeff::one(ctx.mode);
    let qc = Coeff::from_rational(q, ctx.mode);
    let mut vals: HashMap<Exponent, Coeff> = HashMap::with_capacity(plan.support.len());
    for g in &plan.support {
        if g.is_zero() {
            vals.insert(g.clone(), one.clone());
            continue;
        }
        // ⟨w,γ⟩ p_γ = Σ ε_δ p_{γ-δ} (q⟨w,δ⟩ - ⟨w,γ-δ⟩)
        let mut acc = Coeff::zero(ctx.mode);
        for (d, ed) in &plan.eps {
            if *d > g {
                break;
            }
            let rest = g - d;
            if let Some(prev) = vals.get(&rest) {
                let factor = qc.mul(&plan.w(d, &one)).sub(&plan.w(&rest, &one));
                acc = acc.add(&ed.mul(prev).mul(&factor));
            }
        }
        vals.insert(g.clone(), acc.try_div(&plan.w(g, &one))?);
    }
    Ok(finish(eps, vals, plan.cutoff))
}

/// `exp(ε)` below `bound`.
pub(crate) fn exp_infinitesimal(eps: &Series, bound: &Bound) -> Result<Series> {
    let ctx = eps.ctx();
    let Some(plan) = plan(eps, bound)? else {
        return Ok(Series::one(ctx));
    };
    let one = Coeff::one(ctx.mode);
    let mut vals: HashMap<Exponent, Coeff> = HashMap::with_capacity(plan.support.len());
    let weighted: Vec<Coeff> = plan.eps.iter().map(|(d, ed)| ed.mul(&plan.w(d, &one))).collect();
    for g in &plan.support {
        if g.is_zero() {
            vals.insert(g.clone(), one.clone());
            continue;
        }
        // ⟨w,γ⟩ e_γ = Σ ⟨w,δ⟩ ε_δ e_{γ-δ}
        let mut acc = Coeff::zero(ctx.mode);
        for ((d, _), wd) in plan.eps.iter().zip(&weighted) {
            if *d > g {
                break;
            }
            if let Some(prev) = vals.get(&(g - d)) {
                acc = acc.add(&wd.mul(prev));
            }
        }
        vals.insert(g.clone(), acc.try_div(&plan.w(g, &one))?);
    }
    Ok(finish(eps, vals, plan.cutoff))
}

/// `log(1+ε)` below `bound`.
pub(crate) fn log_unit(eps: &Series, bound: &Bound) -> Result<Series> {
    let ctx = eps.ctx();
    let Some(plan) = plan(eps, bound)? else {
        return Ok(Series::zero(ctx));
    };
    let one = Coeff::one(ctx.mode);
    let zero = Coeff::zero(ctx.mode);
    // g_γ = ⟨w,γ⟩ l_γ satisfies g_γ = ⟨w,γ⟩ ε_γ - Σ ε_δ g_{γ-δ}.
    let mut theta: HashMap<Exponent, Coeff> = HashMap::with_capacity(plan.support.len());
    let mut vals: HashMap<Exponent, Coeff> = HashMap::with_capacity(plan.support.len());
    for g in &plan.support {
        if g.is_zero() {
            continue;
        }
        let own = eps.terms().get(g).unwrap_or(&zero);
        let mut acc = own.mul(&plan.w(g, &one));
        for (d, ed) in &plan.eps {
            if *d >= g {
                break;
            }
            if let Some(prev) = theta.get(&(g - d)) {
                acc = acc.sub(&ed.mul(prev));
            }
        }
        vals.insert(g.clone(), acc.try_div(&plan.w(g, &one))?);
        theta.insert(g.clone(), acc);
    }
    Ok(finish(eps, vals, plan.cutoff))
}
