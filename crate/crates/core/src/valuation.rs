//! The valuation ring 𝒪 = {v ≥ 0}, its maximal ideal 𝔪 = {v > 0}, the
//! residue map onto the coefficient field, and the canonical additive and
//! multiplicative decompositions of a series.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::exponent::{Bound, Exponent};
use crate::series::Series;

/// Membership of a series in 𝒪, 𝒪^× and 𝔪.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub in_o: bool,
    pub unit: bool,
    pub in_m: bool,
}

/// `a = infinite_part + real_part + infinitesimal_part`, split by the sign of
/// the exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditiveDecomposition {
    pub infinite_part: Series,
    pub real_part: Coeff,
    pub infinitesimal_part: Series,
}

impl AdditiveDecomposition {
    pub fn recombine(&self) -> Result<Series> {
        let ctx = self.infinite_part.ctx();
        self.infinite_part
            .add(&Series::constant(ctx, self.real_part.clone()))?
            .add(&self.infinitesimal_part)
    }
}

/// `a = c·t^gamma·(1 + eps)` with `c > 0` and `v(eps) > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicativeDecomposition {
    pub gamma: Exponent,
    pub c: Coeff,
    pub eps: Series,
}

impl MultiplicativeDecomposition {
    pub fn recombine(&self) -> Result<Series> {
        let ctx = self.eps.ctx();
        let unit = Series::one(ctx).add(&self.eps)?;
        Ok(unit.shift(&self.gamma).scale(&self.c))
    }
}

/// Decide membership in 𝒪, 𝒪^× and 𝔪.
///
/// A series with no known terms is still classified when its cutoff settles
/// the question: `O(t^w)` with `w > 0` lies in 𝔪.
pub fn classify(a: &Series) -> Result<Classification> {
    let v = match a.valuation() {
        Ok(v) => v,
        Err(e) => match a.cutoff() {
            Bound::Finite(w) if w.is_positive() => Bound::Finite(w.clone()),
            _ => return Err(e),
        },
    };
    Ok(match v {
        Bound::Infinity => Classification { in_o: true, unit: false, in_m: true },
        Bound::Finite(g) => Classification {
            in_o: !g.is_negative(),
            unit: g.is_zero(),
            in_m: g.is_positive(),
        },
    })
}

pub fn in_ring(a: &Series) -> Result<bool> {
    Ok(classify(a)?.in_o)
}

/// Positive units (𝒪^×)^{>0}: valuation 0 and positive leading coefficient.
pub fn is_positive_unit(a: &Series) -> Result<bool> {
    if !classify(a)?.unit {
        return Ok(false);
    }
    Ok(a.leading().is_some_and(|l| l.c.is_positive()))
}

/// The residue map 𝒪 → ℝ: the constant coefficient.
pub fn residue(a: &Series) -> Result<Coeff> {
    if !classify(a)?.in_o {
        return Err(Error::NotInValuationRing);
    }
    let zero = Exponent::zero(a.ctx().dim);
    a.coefficient(&zero).map_err(|_| {
        Error::InsufficientPrecision(format!(
            "residue needs a cutoff above 0, have {}",
            a.cutoff()
        ))
    })
}

pub fn additive_decompose(a: &Series) -> Result<AdditiveDecomposition> {
    let ctx = a.ctx();
    let zero = Exponent::zero(ctx.dim);
    if !a.cutoff().admits(&zero) {
        return Err(Error::InsufficientPrecision(format!(
            "splitting at 0 needs a cutoff above 0, have {}",
            a.cutoff()
        )));
    }
    let mut inf = BTreeMap::new();
    let mut small = BTreeMap::new();
    let mut real = Coeff::zero(ctx.mode);
    for (e, c) in a.terms() {
        if e.is_negative() {
            inf.insert(e.clone(), c.clone());
        } else if e.is_zero() {
            real = c.clone();
        } else {
            small.insert(e.clone(), c.clone());
        }
    }
    Ok(AdditiveDecomposition {
        infinite_part: Series::from_parts(ctx, inf, Bound::Infinity),
        real_part: real,
        infinitesimal_part: Series::from_parts(ctx, small, a.cutoff().clone()),
    })
}

pub fn mult_decompose(a: &Series) -> Result<MultiplicativeDecomposition> {
    if a.is_exact_zero() {
        return Err(Error::NotPositive);
    }
    let lead = a.leading().ok_or_else(|| {
        Error::InsufficientPrecision(format!("no leading term below cutoff {}", a.cutoff()))
    })?;
    if !lead.c.is_positive() {
        return Err(Error::NotPositive);
    }
    let mut terms = BTreeMap::new();
    for (e, c) in a.terms().iter().skip(1) {
        terms.insert(e - &lead.gamma, c.try_div(&lead.c)?);
    }
    let eps = Series::from_parts(a.ctx(), terms, a.cutoff().unshift(&lead.gamma));
    Ok(MultiplicativeDecomposition {
        gamma: lead.gamma,
        c: lead.c,
        eps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Context;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn s(terms: &[((i64, i64), (i64, i64))], cutoff: Option<i64>) -> Series {
        let ctx = Context::rational(1);
        Series::normalize(
            ctx,
            terms
                .iter()
                .map(|&((en, ed), (cn, cd))| (Exponent::scalar(q(en, ed)), ctx.coeff(&q(cn, cd)))),
            cutoff.map_or(Bound::Infinity, |c| Bound::Finite(Exponent::from_ints(&[c]))),
        )
        .unwrap()
    }

    #[test]
    fn classify_examples() {
        let c = classify(&s(&[((0, 1), (3, 1)), ((1, 1), (1, 1))], None)).unwrap();
        assert_eq!((c.in_o, c.unit, c.in_m), (true, true, false));
        let c = classify(&s(&[((1, 2), (1, 1))], None)).unwrap();
        assert_eq!((c.in_o, c.unit, c.in_m), (true, false, true));
        let c = classify(&s(&[((-1, 1), (1, 1)), ((0, 1), (2, 1))], None)).unwrap();
        assert_eq!((c.in_o, c.unit, c.in_m), (false, false, false));
        assert!(matches!(classify(&s(&[], Some(-1))), Err(Error::InsufficientPrecision(_))));
        assert!(classify(&s(&[], Some(2))).unwrap().in_m);
    }

    #[test]
    fn residue_examples() {
        let r = residue(&s(&[((0, 1), (3, 1)), ((1, 1), (1, 1))], None)).unwrap();
        assert_eq!(r.to_rational(), q(3, 1));
        assert!(residue(&s(&[((1, 1), (1, 1))], None)).unwrap().is_zero());
        assert_eq!(
            residue(&s(&[((-1, 1), (1, 1)), ((0, 1), (2, 1))], None)),
            Err(Error::NotInValuationRing)
        );
        assert!(matches!(
            residue(&s(&[((1, 1), (1, 1))], Some(0))),
            Err(Error::NotInValuationRing) | Err(Error::InsufficientPrecision(_))
        ));
    }

    #[test]
    fn additive_examples() {
        let a = s(&[((-1, 1), (2, 1)), ((0, 1), (5, 1)), ((2, 1), (7, 1))], None);
        let d = additive_decompose(&a).unwrap();
        assert_eq!(d.infinite_part.to_string(), "2*t^(-1)");
        assert_eq!(d.real_part.to_rational(), q(5, 1));
        assert_eq!(d.infinitesimal_part.to_string(), "7*t^2");
        assert_eq!(d.recombine().unwrap(), a);

        let z = additive_decompose(&s(&[], None)).unwrap();
        assert!(z.infinite_part.is_exact_zero() && z.real_part.is_zero() && z.infinitesimal_part.is_exact_zero());

        let a = s(&[((-1, 2), (1, 1)), ((1, 2), (1, 1))], None);
        let d = additive_decompose(&a).unwrap();
        assert_eq!(d.infinite_part.to_string(), "t^(-1/2)");
        assert!(d.real_part.is_zero());
        assert_eq!(d.infinitesimal_part.to_string(), "t^(1/2)");

        assert!(matches!(
            additive_decompose(&s(&[((-2, 1), (1, 1))], Some(0))),
            Err(Error::InsufficientPrecision(_))
        ));
    }

    #[test]
    fn multiplicative_examples() {
        let a = s(&[((3, 1), (6, 1)), ((4, 1), (3, 1))], None);
        let d = mult_decompose(&a).unwrap();
        assert_eq!(d.gamma, Exponent::from_ints(&[3]));
        assert_eq!(d.c.to_rational(), q(6, 1));
        assert_eq!(d.eps.to_string(), "1/2*t");
        assert_eq!(d.recombine().unwrap(), a);

        let d = mult_decompose(&s(&[((0, 1), (5, 1))], None)).unwrap();
        assert!(d.gamma.is_zero() && d.eps.is_exact_zero());
        assert_eq!(d.c.to_rational(), q(5, 1));

        assert_eq!(mult_decompose(&s(&[((1, 1), (-1, 1))], None)), Err(Error::NotPositive));

        let a = s(&[((1, 1), (2, 1)), ((2, 1), (1, 1))], Some(4));
        let d = mult_decompose(&a).unwrap();
        assert_eq!(d.eps.cutoff(), &Bound::Finite(Exponent::from_ints(&[3])));
        assert_eq!(d.recombine().unwrap(), a);
    }
}
